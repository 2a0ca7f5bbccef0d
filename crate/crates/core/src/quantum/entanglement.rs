use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use super::circuit::{apply_circuit, CircuitTemplate};
use super::state::StateVector;
use super::QuantumError;

/// Parameter samples drawn by the pipelines when no count is given.
pub const DEFAULT_CAPABILITY_SAMPLES: usize = 200;

/// Meyer–Wallach `Q(ψ) = 2(1 − (1/N) Σ_q Tr ρ_q²)`.
pub fn meyer_wallach(state: &StateVector) -> f64 {
    let n = state.num_qubits();
    let amps = state.amplitudes();
    let mut purity_sum = 0.0;
    for q in 0..n {
        let bit = 1usize << q;
        let (mut p0, mut p1) = (0.0, 0.0);
        let mut coherence = Complex64::new(0.0, 0.0);
        for i in (0..amps.len()).filter(|i| i & bit == 0) {
            let (a0, a1) = (amps[i], amps[i | bit]);
            p0 += a0.norm_sqr();
            p1 += a1.norm_sqr();
            coherence += a0 * a1.conj();
        }
        purity_sum += p0 * p0 + p1 * p1 + 2.0 * coherence.norm_sqr();
    }
    (2.0 * (1.0 - purity_sum / n as f64)).clamp(0.0, 1.0)
}

/// Mean Meyer–Wallach entanglement of `U(θ)|0…0⟩` over `θ ~ U[−π, π)^P`.
pub fn entangling_capability<R: Rng + ?Sized>(
    template: &CircuitTemplate,
    n_param_samples: usize,
    rng: &mut R,
) -> Result<f64, QuantumError> {
    let n = template.num_qubits();
    if n < 2 {
        return Err(QuantumError::SingleQubit);
    }
    if n_param_samples == 0 {
        return Err(QuantumError::InvalidState("need at least one parameter sample".into()));
    }
    // Without two-qubit gates |0…0⟩ stays a product state: Q is exactly zero.
    if !template.ops().iter().any(|op| op.kind.is_two_qubit()) {
        return Ok(0.0);
    }
    let zero = StateVector::zero(n)?;
    let mut total = 0.0;
    for _ in 0..n_param_samples {
        let params: Vec<f64> = (0..template.num_params())
            .map(|_| rng.random_range(-PI..PI))
            .collect();
        total += meyer_wallach(&apply_circuit(&zero, template, &params)?);
    }
    Ok(total / n_param_samples as f64)
}
