//! Loss, gradients, input encoding, the gradient-descent loop, and the
//! block-locality experiment.

mod encode;
mod gradient;
mod locality;
mod train;

pub use encode::{encode_input, EncodedInput};
pub use gradient::{finite_diff_gradient, parameter_shift_gradient, SHIFT};
pub use locality::{locality_experiment, LocalityReport};
pub use train::{mse_loss, train, LossHistory, TargetTransform, TrainConfig};
