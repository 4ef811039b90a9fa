use thiserror::Error;

/// Errors raised by state, circuit, and model operations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unnormalizable: amplitude vector has zero norm")]
    Unnormalizable,

    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("parameter count mismatch: expected {expected}, got {actual}")]
    ParamCountMismatch { expected: usize, actual: usize },

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("invalid selector: {0}")]
    InvalidSelector(String),

    #[error("not unitary: max |V^dag V - I| = {0:e}")]
    NotUnitary(f64),

    #[error("not a unit vector: norm = {0}")]
    NotUnit(f64),

    #[error("too many qubits for a dense unitary: {0} (max {max})", max = crate::quantum::MAX_DENSE_QUBITS)]
    TooManyQubits(usize),

    #[error("shift rule requires unique slots: parameter {0} is used by {1} gates")]
    SharedParameterSlot(usize, usize),

    #[error("block {0} is not parameterized")]
    UnparameterizedBlock(usize),

    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("loss is NaN at epoch {0}")]
    NanLoss(usize),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
