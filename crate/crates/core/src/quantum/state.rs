use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{QuantumError, MAX_QUBITS};

/// Tolerance on `Σ|a|² = 1` accepted when wrapping external amplitudes.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Pure state of `num_qubits` qubits stored as `2^N` complex amplitudes.
///
/// Basis index `i` is the integer reading of the bitstring with qubit 0 as
/// the least significant bit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩`
    pub fn zero(num_qubits: usize) -> Result<Self, QuantumError> {
        Self::basis(num_qubits, 0)
    }

    pub fn basis(num_qubits: usize, index: usize) -> Result<Self, QuantumError> {
        check_qubits(num_qubits)?;
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(QuantumError::IndexOutOfRange { index, dim });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    /// Equal superposition, amplitude `2^{-N/2}` everywhere.
    pub fn uniform(num_qubits: usize) -> Result<Self, QuantumError> {
        check_qubits(num_qubits)?;
        let dim = 1usize << num_qubits;
        let amp = Complex64::new((dim as f64).sqrt().recip(), 0.0);
        Ok(Self {
            num_qubits,
            amplitudes: vec![amp; dim],
        })
    }

    /// Wraps raw amplitudes. The length must be a power of two and the
    /// vector must already be normalized within [`NORM_TOLERANCE`].
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self, QuantumError> {
        let dim = amplitudes.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(QuantumError::InvalidState(format!(
                "amplitude count {dim} is not a power of two >= 2"
            )));
        }
        let num_qubits = dim.trailing_zeros() as usize;
        check_qubits(num_qubits)?;
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if !norm.is_finite() || (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(QuantumError::InvalidState(format!(
                "squared norm {norm} differs from 1"
            )));
        }
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    /// Like [`from_amplitudes`](Self::from_amplitudes) but rescales to unit norm first.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self, QuantumError> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(QuantumError::InvalidState("zero or non-finite norm".into()));
        }
        for a in amplitudes.iter_mut() {
            *a /= norm;
        }
        Self::from_amplitudes(amplitudes)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Born probabilities `p_x = |a_x|²`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Measures the full register `n_samples` times and returns basis indices.
    pub fn born_sample<R: Rng + ?Sized>(&self, n_samples: usize, rng: &mut R) -> Vec<usize> {
        born_sample(self, n_samples, rng)
    }
}

pub(crate) fn check_qubits(num_qubits: usize) -> Result<(), QuantumError> {
    if (1..=MAX_QUBITS).contains(&num_qubits) {
        Ok(())
    } else {
        Err(QuantumError::QubitCountOutOfRange(num_qubits))
    }
}

/// Analytic output distribution of a normalized state.
pub fn analytic_probabilities(state: &StateVector) -> Vec<f64> {
    state.probabilities()
}

/// Global measurement of the register: i.i.d. draws from `|a_x|²`.
pub fn born_sample<R: Rng + ?Sized>(
    state: &StateVector,
    n_samples: usize,
    rng: &mut R,
) -> Vec<usize> {
    let probs = state.probabilities();
    // A normalized state always has positive total weight.
    let dist = WeightedIndex::new(&probs).expect("normalized state has positive weight");
    (0..n_samples).map(|_| dist.sample(rng)).collect()
}

/// Maps a basis index onto the data interval: `a + (b − a)·x / (2^N − 1)`.
///
/// Both endpoints are returned exactly, and when `(a, b) = (0, 2^N − 1)` the
/// map is the identity on integers.
pub fn map_to_range(x: usize, a: f64, b: f64, num_qubits: usize) -> Result<f64, QuantumError> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(QuantumError::DegenerateRange { a, b });
    }
    check_qubits(num_qubits)?;
    let top = (1usize << num_qubits) - 1;
    if x > top {
        return Err(QuantumError::IndexOutOfRange { index: x, dim: top + 1 });
    }
    if x == top {
        return Ok(b);
    }
    Ok(a + (b - a) * x as f64 / top as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn uniform_two_qubits() {
        let s = StateVector::uniform(2).unwrap();
        for a in s.amplitudes() {
            assert!((a.re - 0.5).abs() < 1e-15 && a.im == 0.0);
        }
    }

    #[test]
    fn probabilities_of_basis_and_uniform() {
        let s = StateVector::basis(2, 2).unwrap();
        assert_eq!(s.probabilities(), vec![0.0, 0.0, 1.0, 0.0]);
        let u = StateVector::uniform(3).unwrap();
        for p in analytic_probabilities(&u) {
            assert!((p - 0.125).abs() < 1e-15);
        }
    }

    #[test]
    fn deterministic_outcome_sampling() {
        let s = StateVector::basis(2, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(s.born_sample(100, &mut rng).iter().all(|&x| x == 2));
    }

    #[test]
    fn sampling_is_seed_deterministic() {
        let s = StateVector::uniform(3).unwrap();
        let a = s.born_sample(50, &mut ChaCha8Rng::seed_from_u64(9));
        let b = s.born_sample(50, &mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a, b);
    }

    #[test]
    fn map_to_range_examples() {
        assert_eq!(map_to_range(0, -3.1, 9.7, 5).unwrap(), -3.1);
        assert_eq!(map_to_range(31, -3.1, 9.7, 5).unwrap(), 9.7);
        assert_eq!(map_to_range(7, 0.0, 15.0, 4).unwrap(), 7.0);
    }

    #[test]
    fn map_to_range_errors() {
        assert!(matches!(
            map_to_range(0, 1.0, 1.0, 2),
            Err(QuantumError::DegenerateRange { .. })
        ));
        assert!(matches!(
            map_to_range(4, 0.0, 1.0, 2),
            Err(QuantumError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn rejects_bad_amplitudes() {
        let c = |r| Complex64::new(r, 0.0);
        assert!(StateVector::from_amplitudes(vec![c(1.0), c(0.0), c(0.0)]).is_err());
        assert!(StateVector::from_amplitudes(vec![c(1.0), c(1.0)]).is_err());
        assert!(StateVector::normalized(vec![c(1.0), c(1.0)]).is_ok());
    }

    #[test]
    fn qubit_ceiling() {
        assert!(matches!(
            StateVector::zero(13),
            Err(QuantumError::QubitCountOutOfRange(13))
        ));
        assert!(StateVector::zero(0).is_err());
    }
}
