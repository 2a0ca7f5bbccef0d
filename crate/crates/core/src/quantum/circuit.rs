use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ansatz::AnsatzDescriptor;
use super::state::{check_qubits, StateVector};
use super::QuantumError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    H,
    X,
    SX,
    RY,
    RZ,
    CX,
    CZ,
    SWAP,
}

impl GateKind {
    pub fn is_rotation(self) -> bool {
        matches!(self, GateKind::RY | GateKind::RZ)
    }

    pub fn is_two_qubit(self) -> bool {
        matches!(self, GateKind::CX | GateKind::CZ | GateKind::SWAP)
    }
}

/// Rotation angle: either a literal or a slot in the parameter vector.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Angle {
    Fixed(f64),
    Param(usize),
}

/// One gate application.
///
/// `control` holds the control qubit of CX/CZ and the second qubit of SWAP.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateOp {
    pub kind: GateKind,
    pub target: usize,
    pub control: Option<usize>,
    pub angle: Option<Angle>,
}

impl GateOp {
    fn single(kind: GateKind, target: usize) -> Self {
        Self {
            kind,
            target,
            control: None,
            angle: None,
        }
    }

    pub fn h(q: usize) -> Self {
        Self::single(GateKind::H, q)
    }

    pub fn x(q: usize) -> Self {
        Self::single(GateKind::X, q)
    }

    pub fn sx(q: usize) -> Self {
        Self::single(GateKind::SX, q)
    }

    pub fn ry(q: usize, angle: Angle) -> Self {
        Self {
            angle: Some(angle),
            ..Self::single(GateKind::RY, q)
        }
    }

    pub fn rz(q: usize, angle: Angle) -> Self {
        Self {
            angle: Some(angle),
            ..Self::single(GateKind::RZ, q)
        }
    }

    pub fn cx(control: usize, target: usize) -> Self {
        Self {
            control: Some(control),
            ..Self::single(GateKind::CX, target)
        }
    }

    pub fn cz(control: usize, target: usize) -> Self {
        Self {
            control: Some(control),
            ..Self::single(GateKind::CZ, target)
        }
    }

    pub fn swap(a: usize, b: usize) -> Self {
        Self {
            control: Some(a),
            ..Self::single(GateKind::SWAP, b)
        }
    }

    /// Qubits touched by this gate.
    pub fn qubits(&self) -> impl Iterator<Item = usize> {
        std::iter::once(self.target).chain(self.control)
    }

    fn validate(&self, num_qubits: usize) -> Result<(), QuantumError> {
        let bad = |msg: String| Err(QuantumError::InvalidGate(msg));
        if self.target >= num_qubits {
            return bad(format!("{:?} target {} out of range", self.kind, self.target));
        }
        match (self.kind.is_two_qubit(), self.control) {
            (true, Some(c)) if c >= num_qubits => {
                return bad(format!("{:?} control {c} out of range", self.kind))
            }
            (true, Some(c)) if c == self.target => {
                return bad(format!("{:?} control equals target {c}", self.kind))
            }
            (true, None) => return bad(format!("{:?} needs a second qubit", self.kind)),
            (false, Some(_)) => return bad(format!("{:?} takes no control", self.kind)),
            _ => {}
        }
        match (self.kind.is_rotation(), self.angle) {
            (true, None) => bad(format!("{:?} needs an angle", self.kind)),
            (false, Some(_)) => bad(format!("{:?} takes no angle", self.kind)),
            (true, Some(Angle::Fixed(t))) if !t.is_finite() => {
                bad(format!("{:?} angle is not finite", self.kind))
            }
            _ => Ok(()),
        }
    }
}

/// Ordered gate list with numbered parameter slots.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitTemplate {
    descriptor: Option<AnsatzDescriptor>,
    num_qubits: usize,
    ops: Vec<GateOp>,
    num_params: usize,
}

impl CircuitTemplate {
    /// Validates every gate and requires each slot in `0..num_params` to be
    /// used exactly once.
    pub fn new(num_qubits: usize, ops: Vec<GateOp>) -> Result<Self, QuantumError> {
        check_qubits(num_qubits)?;
        let mut slots = Vec::new();
        for op in &ops {
            op.validate(num_qubits)?;
            if let Some(Angle::Param(slot)) = op.angle {
                slots.push(slot);
            }
        }
        slots.sort_unstable();
        for (expected, &slot) in slots.iter().enumerate() {
            if slot != expected {
                return Err(QuantumError::InvalidGate(format!(
                    "parameter slots must be 0..{} each used once, found slot {slot}",
                    slots.len()
                )));
            }
        }
        Ok(Self {
            descriptor: None,
            num_qubits,
            num_params: slots.len(),
            ops,
        })
    }

    pub(crate) fn with_descriptor(mut self, descriptor: AnsatzDescriptor) -> Self {
        self.descriptor = Some(descriptor);
        self
    }

    pub fn descriptor(&self) -> Option<&AnsatzDescriptor> {
        self.descriptor.as_ref()
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn num_params(&self) -> usize {
        self.num_params
    }

    pub fn count(&self, kind: GateKind) -> usize {
        self.ops.iter().filter(|op| op.kind == kind).count()
    }

    fn check_params(&self, params: &[f64]) -> Result<(), QuantumError> {
        if params.len() != self.num_params {
            return Err(QuantumError::ParamLengthMismatch {
                expected: self.num_params,
                got: params.len(),
            });
        }
        Ok(())
    }

    /// Same gates with every slot replaced by its value.
    pub fn bind(&self, params: &[f64]) -> Result<CircuitTemplate, QuantumError> {
        self.check_params(params)?;
        let ops = self
            .ops
            .iter()
            .map(|op| GateOp {
                angle: op.angle.map(|a| Angle::Fixed(resolve(a, params))),
                ..*op
            })
            .collect();
        CircuitTemplate::new(self.num_qubits, ops)
    }

    /// Exact inverse of the bound circuit: reversed order, negated angles.
    pub fn inverse(&self, params: &[f64]) -> Result<CircuitTemplate, QuantumError> {
        self.check_params(params)?;
        let mut ops = Vec::with_capacity(self.ops.len());
        for op in self.ops.iter().rev() {
            match op.kind {
                // SX† = SX³
                GateKind::SX => ops.extend([*op; 3]),
                _ => ops.push(GateOp {
                    angle: op.angle.map(|a| Angle::Fixed(-resolve(a, params))),
                    ..*op
                }),
            }
        }
        CircuitTemplate::new(self.num_qubits, ops)
    }
}

fn resolve(angle: Angle, params: &[f64]) -> f64 {
    match angle {
        Angle::Fixed(t) => t,
        Angle::Param(slot) => params[slot],
    }
}

/// Applies `U(params)` to `state`.
pub fn apply_circuit(
    state: &StateVector,
    template: &CircuitTemplate,
    params: &[f64],
) -> Result<StateVector, QuantumError> {
    template.check_params(params)?;
    if state.num_qubits() != template.num_qubits() {
        return Err(QuantumError::InvalidState(format!(
            "state has {} qubits, circuit has {}",
            state.num_qubits(),
            template.num_qubits()
        )));
    }
    let mut out = state.clone();
    for op in template.ops() {
        apply_gate(out.amplitudes_mut(), op, params);
    }
    Ok(out)
}

type Mat2 = [[Complex64; 2]; 2];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub(crate) fn gate_matrix(kind: GateKind, theta: f64) -> Mat2 {
    match kind {
        GateKind::H => [
            [c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)],
            [c(FRAC_1_SQRT_2, 0.0), c(-FRAC_1_SQRT_2, 0.0)],
        ],
        GateKind::X => [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]],
        GateKind::SX => [[c(0.5, 0.5), c(0.5, -0.5)], [c(0.5, -0.5), c(0.5, 0.5)]],
        GateKind::RY => {
            let (s, co) = (theta / 2.0).sin_cos();
            [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]]
        }
        GateKind::RZ => {
            let (s, co) = (theta / 2.0).sin_cos();
            [[c(co, -s), c(0.0, 0.0)], [c(0.0, 0.0), c(co, s)]]
        }
        GateKind::CX | GateKind::CZ | GateKind::SWAP => unreachable!("two-qubit gate"),
    }
}

fn apply_single(amps: &mut [Complex64], q: usize, m: &Mat2) {
    let stride = 1usize << q;
    for block in (0..amps.len()).step_by(stride << 1) {
        for i in block..block + stride {
            let j = i | stride;
            let (a0, a1) = (amps[i], amps[j]);
            amps[i] = m[0][0] * a0 + m[0][1] * a1;
            amps[j] = m[1][0] * a0 + m[1][1] * a1;
        }
    }
}

fn apply_gate(amps: &mut [Complex64], op: &GateOp, params: &[f64]) {
    let t = 1usize << op.target;
    match op.kind {
        GateKind::CX => {
            let cbit = 1usize << op.control.expect("validated");
            for i in 0..amps.len() {
                if i & cbit != 0 && i & t == 0 {
                    amps.swap(i, i | t);
                }
            }
        }
        GateKind::CZ => {
            let cbit = 1usize << op.control.expect("validated");
            for (i, a) in amps.iter_mut().enumerate() {
                if i & cbit != 0 && i & t != 0 {
                    *a = -*a;
                }
            }
        }
        GateKind::SWAP => {
            let other = 1usize << op.control.expect("validated");
            for i in 0..amps.len() {
                if i & other != 0 && i & t == 0 {
                    amps.swap(i, (i ^ other) | t);
                }
            }
        }
        kind => {
            let theta = op.angle.map(|a| resolve(a, params)).unwrap_or(0.0);
            apply_single(amps, op.target, &gate_matrix(kind, theta));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn assert_amps(state: &StateVector, expected: &[(f64, f64)]) {
        for (a, &(re, im)) in state.amplitudes().iter().zip(expected) {
            assert!((a.re - re).abs() < 1e-12 && (a.im - im).abs() < 1e-12, "{a} vs {re}+{im}i");
        }
    }

    #[test]
    fn ry_pi_flips() {
        let t = CircuitTemplate::new(1, vec![GateOp::ry(0, Angle::Param(0))]).unwrap();
        let out = apply_circuit(&StateVector::zero(1).unwrap(), &t, &[PI]).unwrap();
        assert_amps(&out, &[(0.0, 0.0), (1.0, 0.0)]);
    }

    #[test]
    fn bell_state() {
        let t = CircuitTemplate::new(2, vec![GateOp::h(0), GateOp::cx(0, 1)]).unwrap();
        let out = apply_circuit(&StateVector::zero(2).unwrap(), &t, &[]).unwrap();
        let r = FRAC_1_SQRT_2;
        assert_amps(&out, &[(r, 0.0), (0.0, 0.0), (0.0, 0.0), (r, 0.0)]);
        let p = out.probabilities();
        assert!((p[0] - 0.5).abs() < 1e-12 && (p[3] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn swap_exchanges_qubits() {
        // |01⟩ (qubit 0 set) -> |10⟩
        let t = CircuitTemplate::new(2, vec![GateOp::swap(0, 1)]).unwrap();
        let out = apply_circuit(&StateVector::basis(2, 1).unwrap(), &t, &[]).unwrap();
        assert_eq!(out.probabilities(), vec![0.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn sx_squared_is_x() {
        let t = CircuitTemplate::new(1, vec![GateOp::sx(0), GateOp::sx(0)]).unwrap();
        let out = apply_circuit(&StateVector::zero(1).unwrap(), &t, &[]).unwrap();
        assert!((out.probabilities()[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rz_phases() {
        let t = CircuitTemplate::new(1, vec![GateOp::h(0), GateOp::rz(0, Angle::Fixed(PI))])
            .unwrap();
        let out = apply_circuit(&StateVector::zero(1).unwrap(), &t, &[]).unwrap();
        let r = FRAC_1_SQRT_2;
        assert_amps(&out, &[(0.0, -r), (0.0, r)]);
    }

    #[test]
    fn invalid_gates_rejected() {
        assert!(CircuitTemplate::new(2, vec![GateOp::cx(1, 1)]).is_err());
        assert!(CircuitTemplate::new(2, vec![GateOp::h(2)]).is_err());
        let no_angle = GateOp {
            angle: None,
            ..GateOp::ry(0, Angle::Fixed(0.0))
        };
        assert!(CircuitTemplate::new(1, vec![no_angle]).is_err());
        let h_with_angle = GateOp {
            angle: Some(Angle::Fixed(1.0)),
            ..GateOp::h(0)
        };
        assert!(CircuitTemplate::new(1, vec![h_with_angle]).is_err());
        // slot 1 without slot 0
        assert!(CircuitTemplate::new(1, vec![GateOp::ry(0, Angle::Param(1))]).is_err());
        // slot reused
        let dup = vec![GateOp::ry(0, Angle::Param(0)), GateOp::rz(0, Angle::Param(0))];
        assert!(CircuitTemplate::new(1, dup).is_err());
    }

    #[test]
    fn param_length_checked() {
        let t = CircuitTemplate::new(1, vec![GateOp::ry(0, Angle::Param(0))]).unwrap();
        let err = apply_circuit(&StateVector::zero(1).unwrap(), &t, &[]).unwrap_err();
        assert!(matches!(
            err,
            QuantumError::ParamLengthMismatch {
                expected: 1,
                got: 0
            }
        ));
    }
}
