use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::circuit::gate_matrix;
use super::circuit::GateKind;
use super::state::{check_qubits, StateVector};
use super::QuantumError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum InitKind {
    Uniform,
    Normal,
    Random,
}

impl InitKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Uniform => "uniform",
            Self::Normal => "normal",
            Self::Random => "random",
        }
    }
}

impl fmt::Display for InitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InitKind {
    type Err = String;

    /// Case-insensitive: configuration files spell `"Random"` as well as `"random"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [Self::Uniform, Self::Normal, Self::Random]
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown initialization {s:?}"))
    }
}

impl TryFrom<String> for InitKind {
    type Error = String;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<InitKind> for String {
    fn from(k: InitKind) -> Self {
        k.name().to_string()
    }
}

/// How `|ψ_init⟩` is prepared before the ansatz.
///
/// `mean`/`std` override the data-derived moments for `normal`; `seed` pins
/// the angles of `random` independently of the run generator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InitStrategy {
    #[serde(rename = "type")]
    pub kind: InitKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub std: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl InitStrategy {
    pub fn new(kind: InitKind) -> Self {
        Self {
            kind,
            mean: None,
            std: None,
            seed: None,
        }
    }

    /// Fixes every random or data-dependent choice so the state can be
    /// rebuilt later from the result alone.
    pub fn resolve<R: Rng + ?Sized>(
        &self,
        num_qubits: usize,
        data_mean: f64,
        data_std: f64,
        rng: &mut R,
    ) -> Result<ResolvedInit, QuantumError> {
        check_qubits(num_qubits)?;
        Ok(match self.kind {
            InitKind::Uniform => ResolvedInit::Uniform,
            InitKind::Normal => {
                let mean = self.mean.unwrap_or(data_mean);
                let std = self.std.unwrap_or(data_std);
                if !(std > 0.0 && std.is_finite()) {
                    return Err(QuantumError::NonPositiveStd(std));
                }
                ResolvedInit::Normal { mean, std }
            }
            InitKind::Random => {
                let angles = match self.seed {
                    Some(seed) => random_angles(num_qubits, &mut ChaCha8Rng::seed_from_u64(seed)),
                    None => random_angles(num_qubits, rng),
                };
                ResolvedInit::Random { angles }
            }
        })
    }
}

fn random_angles<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-PI..PI)).collect()
}

/// Initial state with every choice fixed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ResolvedInit {
    Uniform,
    /// Discretized Gaussian over bin indices `0..2^N`.
    Normal { mean: f64, std: f64 },
    /// Product state `⊗_q RY(θ_q)|0⟩`.
    Random { angles: Vec<f64> },
}

impl ResolvedInit {
    pub fn kind(&self) -> InitKind {
        match self {
            Self::Uniform => InitKind::Uniform,
            Self::Normal { .. } => InitKind::Normal,
            Self::Random { .. } => InitKind::Random,
        }
    }

    pub fn state(&self, num_qubits: usize) -> Result<StateVector, QuantumError> {
        check_qubits(num_qubits)?;
        match self {
            Self::Uniform => StateVector::uniform(num_qubits),
            Self::Normal { mean, std } => {
                if !(*std > 0.0 && std.is_finite()) {
                    return Err(QuantumError::NonPositiveStd(*std));
                }
                let dim = 1usize << num_qubits;
                let log_w: Vec<f64> = (0..dim)
                    .map(|i| {
                        let z = (i as f64 - mean) / std;
                        -0.5 * z * z
                    })
                    .collect();
                // shift by the max so the heaviest bin is exp(0) = 1
                let top = log_w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let weights: Vec<f64> = log_w.iter().map(|l| (l - top).exp()).collect();
                let total: f64 = weights.iter().sum();
                let amps = weights
                    .iter()
                    .map(|w| Complex64::new((w / total).sqrt(), 0.0))
                    .collect();
                StateVector::normalized(amps)
            }
            Self::Random { angles } => {
                if angles.len() != num_qubits {
                    return Err(QuantumError::ParamLengthMismatch {
                        expected: num_qubits,
                        got: angles.len(),
                    });
                }
                // |0⟩ column of RY(θ) on each qubit, tensored together
                let columns: Vec<[f64; 2]> = angles
                    .iter()
                    .map(|&t| {
                        let m = gate_matrix(GateKind::RY, t);
                        [m[0][0].re, m[1][0].re]
                    })
                    .collect();
                let amps = (0..1usize << num_qubits)
                    .map(|i| {
                        let v: f64 = columns
                            .iter()
                            .enumerate()
                            .map(|(q, col)| col[(i >> q) & 1])
                            .product();
                        Complex64::new(v, 0.0)
                    })
                    .collect();
                StateVector::normalized(amps)
            }
        }
    }
}

/// Resolves `strategy` and builds the state in one go.
pub fn prepare_initial_state<R: Rng + ?Sized>(
    strategy: &InitStrategy,
    num_qubits: usize,
    data_mean: f64,
    data_std: f64,
    rng: &mut R,
) -> Result<StateVector, QuantumError> {
    strategy
        .resolve(num_qubits, data_mean, data_std, rng)?
        .state(num_qubits)
}
