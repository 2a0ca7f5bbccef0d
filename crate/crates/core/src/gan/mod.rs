//! Quantum generator vs. classical discriminator training.

mod adam;
mod discriminator;
mod generator;
mod loss;
mod model;
mod train;

use thiserror::Error;

pub use adam::{AdamState, ADAM_EPSILON};
pub use discriminator::{init_discriminator, DiscriminatorNet, DiscriminatorSpec, DiscriminatorType};
pub use generator::{generator_loss_and_grad, log_discriminator_table, GeneratorEval};
pub use loss::{gan_losses, PROB_CLAMP};
pub use model::{ModelError, ModelFile, TrainingMetadata, MODEL_FORMAT, MODEL_VERSION};
pub use train::{train_qgan, ExperimentSpec, RunResult, TrainingBudget, KS_SAMPLES};

use crate::metrics::MetricsError;
use crate::quantum::QuantumError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TrainError {
    #[error("discriminator input {0} is not finite")]
    NonFiniteInput(f64),
    #[error("target has {got} bins but the generator produces {expected}")]
    BinMismatch { expected: usize, got: usize },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("invalid training spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}
