//! Distribution similarity, per-spec statistics and model selection.

pub mod divergence;
pub mod stats;
pub mod reference;

use thiserror::Error;

pub use divergence::{kl_divergence, ks_statistic, Q_FLOOR};
pub use stats::{
    aggregate_runs, mean_std, select_best, AggregateStats, RankedSpec, SelectionReport,
    SelectionWeights,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("{which} is not a probability distribution (sum {sum})")]
    NotNormalized { which: &'static str, sum: f64 },
    #[error("empty sample")]
    EmptySample,
    #[error("no entries")]
    EmptyInput,
    #[error("runs from different specs: {0} and {1}")]
    MixedSpecs(String, String),
}
