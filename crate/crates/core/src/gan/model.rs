//! `.qmodel` persistence: one pretty-printed JSON document.
//!
//! ```text
//! {
//!   "format": "autoqml-qmodel",
//!   "version": 1,
//!   "spec_id": "…", "run_index": 0,
//!   "ansatz": {"family": "zoufal", "num_qubits": 5, "repetitions": 2},
//!   "init_strategy": {"type": "uniform"},
//!   "initialization": {"type": "uniform"},         // resolved, reproducible
//!   "range": [a, b],
//!   "generator_params": [θ_0, …],
//!   "discriminator_spec": {…},
//!   "discriminator": {"sizes": […], "params": […], "input_shift": …, "input_scale": …},
//!   "training": {epochs, batch size, learning rate, betas, final metrics, …},
//!   "target_probabilities": [p_0, …]
//! }
//! ```
//!
//! Readers reject unknown formats and versions newer than [`MODEL_VERSION`].

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::discriminator::{DiscriminatorNet, DiscriminatorSpec};
use super::train::{ExperimentSpec, RunResult};
use crate::quantum::{
    apply_circuit, build_ansatz, map_to_range, AnsatzDescriptor, InitStrategy, QuantumError,
    ResolvedInit, StateVector,
};

pub const MODEL_FORMAT: &str = "autoqml-qmodel";
pub const MODEL_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("malformed model document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("not a model file (format {0:?})")]
    WrongFormat(String),
    #[error("unsupported model version {0}")]
    UnsupportedVersion(u32),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainingMetadata {
    pub epochs_completed: usize,
    pub batch_size: usize,
    pub generator_lr: f64,
    pub betas: (f64, f64),
    pub final_re: f64,
    pub final_ks: f64,
    pub transpiled_depth: usize,
    pub circuit_evaluations: u64,
    pub budget_exhausted: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub format: String,
    pub version: u32,
    pub spec_id: String,
    pub run_index: usize,
    pub ansatz: AnsatzDescriptor,
    pub init_strategy: InitStrategy,
    pub initialization: ResolvedInit,
    pub range: (f64, f64),
    pub generator_params: Vec<f64>,
    pub discriminator_spec: DiscriminatorSpec,
    pub discriminator: DiscriminatorNet,
    pub training: TrainingMetadata,
    pub target_probabilities: Vec<f64>,
}

impl ModelFile {
    pub fn from_run(spec: &ExperimentSpec, run: &RunResult, target_probabilities: Vec<f64>) -> Self {
        Self {
            format: MODEL_FORMAT.into(),
            version: MODEL_VERSION,
            spec_id: run.spec_id.clone(),
            run_index: run.run_index,
            ansatz: run.ansatz,
            init_strategy: spec.initialization,
            initialization: run.initialization.clone(),
            range: run.range,
            generator_params: run.final_generator_params.clone(),
            discriminator_spec: spec.discriminator.clone(),
            discriminator: run.discriminator.clone(),
            training: TrainingMetadata {
                epochs_completed: run.epochs_completed,
                batch_size: spec.batch_size,
                generator_lr: spec.generator_lr,
                betas: spec.betas,
                final_re: run.final_re,
                final_ks: run.final_ks,
                transpiled_depth: run.transpiled_depth,
                circuit_evaluations: run.circuit_evaluations,
                budget_exhausted: run.budget_exhausted,
            },
            target_probabilities,
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = serde_json::to_vec_pretty(self).expect("model serializes");
        out.push(b'\n');
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, ModelError> {
        let model: Self = serde_json::from_slice(bytes)?;
        if model.format != MODEL_FORMAT {
            return Err(ModelError::WrongFormat(model.format));
        }
        if model.version == 0 || model.version > MODEL_VERSION {
            return Err(ModelError::UnsupportedVersion(model.version));
        }
        Ok(model)
    }

    /// `U(θ)|ψ_init⟩` rebuilt from the stored fields.
    pub fn generator_state(&self) -> Result<StateVector, ModelError> {
        let template = build_ansatz(&self.ansatz)?;
        let init = self.initialization.state(self.ansatz.num_qubits)?;
        Ok(apply_circuit(&init, &template, &self.generator_params)?)
    }

    pub fn generator_probabilities(&self) -> Result<Vec<f64>, ModelError> {
        Ok(self.generator_state()?.probabilities())
    }

    /// Draws `n` values from the trained generator, mapped onto the data range.
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Vec<f64>, ModelError> {
        let (a, b) = self.range;
        let q = self.ansatz.num_qubits;
        self.generator_state()?
            .born_sample(n, rng)
            .into_iter()
            .map(|x| Ok(map_to_range(x, a, b, q)?))
            .collect()
    }
}
