//! Generator loss and its exact gradient.
//!
//! Every trainable angle sits in a single RY or RZ gate, so
//! `∂p(x)/∂θ_j = [p_{θ_j+π/2}(x) − p_{θ_j−π/2}(x)] / 2` holds exactly.

use std::f64::consts::FRAC_PI_2;

use super::discriminator::DiscriminatorNet;
use super::loss::clamped_ln;
use super::TrainError;
use crate::quantum::{apply_circuit, map_to_range, CircuitTemplate, QuantumError, StateVector};

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorEval {
    pub loss: f64,
    pub grad: Vec<f64>,
    /// `p_θ` at the unshifted parameters.
    pub probabilities: Vec<f64>,
    pub circuit_evaluations: u64,
}

/// `ln D(φ(x))` for every basis index `x`.
pub fn log_discriminator_table(
    net: &DiscriminatorNet,
    num_qubits: usize,
    a: f64,
    b: f64,
) -> Result<Vec<f64>, TrainError> {
    (0..1usize << num_qubits)
        .map(|x| {
            let v = map_to_range(x, a, b, num_qubits)?;
            Ok(clamped_ln(net.forward(v)?))
        })
        .collect()
}

fn expectation(probs: &[f64], log_d: &[f64]) -> f64 {
    probs.iter().zip(log_d).map(|(p, l)| p * l).sum()
}

/// Gradient of `−Σ_x p_θ(x)·log_d[x]`; costs `2·P` circuit evaluations.
pub(crate) fn shift_gradient(
    template: &CircuitTemplate,
    init_state: &StateVector,
    params: &[f64],
    log_d: &[f64],
) -> Result<Vec<f64>, QuantumError> {
    // Σ_x ∂p(x) = 0, so a constant offset leaves the gradient unchanged; it
    // makes a flat table give exact zeros.
    let base = log_d.first().copied().unwrap_or(0.0);
    let log_d: Vec<f64> = log_d.iter().map(|l| l - base).collect();
    let log_d = log_d.as_slice();
    let mut shifted = params.to_vec();
    let mut grad = Vec::with_capacity(params.len());
    for j in 0..params.len() {
        shifted[j] = params[j] + FRAC_PI_2;
        let plus = apply_circuit(init_state, template, &shifted)?.probabilities();
        shifted[j] = params[j] - FRAC_PI_2;
        let minus = apply_circuit(init_state, template, &shifted)?.probabilities();
        shifted[j] = params[j];
        grad.push(-0.5 * (expectation(&plus, log_d) - expectation(&minus, log_d)));
    }
    Ok(grad)
}

/// `L_G(θ) = −Σ_x p_θ(x) ln D(φ(x))` with analytic probabilities, and its
/// parameter-shift gradient.
pub fn generator_loss_and_grad(
    template: &CircuitTemplate,
    init_state: &StateVector,
    params: &[f64],
    net: &DiscriminatorNet,
    a: f64,
    b: f64,
) -> Result<GeneratorEval, TrainError> {
    if params.len() != template.num_params() {
        return Err(QuantumError::ParamLengthMismatch {
            expected: template.num_params(),
            got: params.len(),
        }
        .into());
    }
    let log_d = log_discriminator_table(net, template.num_qubits(), a, b)?;
    let probabilities = apply_circuit(init_state, template, params)?.probabilities();
    let loss = -expectation(&probabilities, &log_d);
    let grad = shift_gradient(template, init_state, params, &log_d)?;
    Ok(GeneratorEval {
        loss,
        grad,
        probabilities,
        circuit_evaluations: 1 + 2 * params.len() as u64,
    })
}
