//! Variational-circuit models written as sums of ridge functions.
//!
//! A circuit `W(theta)` measured with a basis-index selector `O` computes
//! `sum_{i in O} |<w_i|x>|^2` over rows `<w_i|` of `W`. This crate simulates
//! such circuits, extracts and checks that decomposition, builds the
//! block-diagonal variant in which every row has its own parameters, and
//! provides an exponential ridge model and a classical explainable network
//! for comparison, all trainable by one gradient-descent harness.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod block;
pub mod dataset;
pub mod error;
pub mod explain;
pub mod fourier;
pub mod model;
pub mod quantum;
pub mod ridge;
pub mod training;
pub mod xnn;

pub use error::{Error, Result};
pub use model::{Model, ModelKind, Trainable};
