//! Lowering to the `{RZ, SX, CX}` basis on a linear-chain coupling map and
//! layer-count depth estimation.
//!
//! Decompositions (circuit order, equal up to global phase):
//!
//! | gate      | basis sequence                                  |
//! |-----------|-------------------------------------------------|
//! | `RY(θ)`   | `RZ(0) SX RZ(θ+π) SX RZ(π)`                     |
//! | `H`       | `RZ(π/2) SX RZ(π/2)`                            |
//! | `X`       | `SX SX`                                         |
//! | `CZ(c,t)` | `H(t) CX(c,t) H(t)` with `H` expanded as above  |
//! | `SWAP`    | `CX(a,b) CX(b,a) CX(a,b)`                       |
//!
//! Two-qubit gates between non-neighbouring physical qubits are routed by
//! walking the control towards the target with SWAPs; the layout is not
//! restored afterwards.

use std::f64::consts::{FRAC_PI_2, PI};

use super::circuit::{Angle, CircuitTemplate, GateKind, GateOp};
use super::QuantumError;

/// Basis-gate circuit on physical qubits plus the final logical→physical layout.
#[derive(Clone, Debug)]
pub struct Transpiled {
    pub circuit: CircuitTemplate,
    pub layout: Vec<usize>,
}

struct Router {
    ops: Vec<GateOp>,
    /// logical -> physical
    pos: Vec<usize>,
    /// physical -> logical
    occupant: Vec<usize>,
}

impl Router {
    fn rz(&mut self, p: usize, theta: f64) {
        self.ops.push(GateOp::rz(p, Angle::Fixed(theta)));
    }

    fn sx(&mut self, p: usize) {
        self.ops.push(GateOp::sx(p));
    }

    fn h(&mut self, p: usize) {
        self.rz(p, FRAC_PI_2);
        self.sx(p);
        self.rz(p, FRAC_PI_2);
    }

    fn cx(&mut self, pc: usize, pt: usize) {
        self.ops.push(GateOp::cx(pc, pt));
    }

    fn physical_swap(&mut self, pa: usize, pb: usize) {
        self.cx(pa, pb);
        self.cx(pb, pa);
        self.cx(pa, pb);
        let (la, lb) = (self.occupant[pa], self.occupant[pb]);
        self.occupant.swap(pa, pb);
        self.pos[la] = pb;
        self.pos[lb] = pa;
    }

    /// Moves logical `mover` next to logical `anchor`; returns their physical slots.
    fn route(&mut self, mover: usize, anchor: usize) -> (usize, usize) {
        let target = self.pos[anchor];
        loop {
            let p = self.pos[mover];
            if p.abs_diff(target) <= 1 {
                return (p, target);
            }
            let next = if p < target { p + 1 } else { p - 1 };
            self.physical_swap(p, next);
        }
    }
}

/// Lowers a bound circuit to the hardware basis.
pub fn transpile(template: &CircuitTemplate, params: &[f64]) -> Result<Transpiled, QuantumError> {
    let bound = template.bind(params)?;
    let n = template.num_qubits();
    let mut r = Router {
        ops: Vec::new(),
        pos: (0..n).collect(),
        occupant: (0..n).collect(),
    };
    for op in bound.ops() {
        let theta = match op.angle {
            Some(Angle::Fixed(t)) => t,
            _ => 0.0,
        };
        match op.kind {
            GateKind::RZ => {
                let p = r.pos[op.target];
                r.rz(p, theta);
            }
            GateKind::SX => {
                let p = r.pos[op.target];
                r.sx(p);
            }
            GateKind::X => {
                let p = r.pos[op.target];
                r.sx(p);
                r.sx(p);
            }
            GateKind::H => {
                let p = r.pos[op.target];
                r.h(p);
            }
            GateKind::RY => {
                let p = r.pos[op.target];
                r.rz(p, 0.0);
                r.sx(p);
                r.rz(p, theta + PI);
                r.sx(p);
                r.rz(p, PI);
            }
            GateKind::CX => {
                let (pc, pt) = r.route(op.control.expect("validated"), op.target);
                r.cx(pc, pt);
            }
            GateKind::CZ => {
                let (pc, pt) = r.route(op.control.expect("validated"), op.target);
                r.h(pt);
                r.cx(pc, pt);
                r.h(pt);
            }
            GateKind::SWAP => {
                let (pa, pb) = r.route(op.control.expect("validated"), op.target);
                r.cx(pa, pb);
                r.cx(pb, pa);
                r.cx(pa, pb);
            }
        }
    }
    Ok(Transpiled {
        circuit: CircuitTemplate::new(n, r.ops)?,
        layout: r.pos,
    })
}

/// ASAP layer count: each gate lands one layer after the latest gate on any
/// of its qubits.
pub fn circuit_depth(circuit: &CircuitTemplate) -> usize {
    let mut level = vec![0usize; circuit.num_qubits()];
    for op in circuit.ops() {
        let next = op.qubits().map(|q| level[q]).max().unwrap_or(0) + 1;
        for q in op.qubits() {
            level[q] = next;
        }
    }
    level.into_iter().max().unwrap_or(0)
}

/// Depth after lowering to `{RZ, SX, CX}` with linear-chain routing.
/// Angles do not affect the result, so slots are bound to zero.
pub fn transpile_depth(template: &CircuitTemplate) -> usize {
    let zeros = vec![0.0; template.num_params()];
    let lowered = transpile(template, &zeros).expect("template parameters are consistent");
    circuit_depth(&lowered.circuit)
}
