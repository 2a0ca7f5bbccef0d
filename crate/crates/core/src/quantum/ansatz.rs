//! Ansatz families used by the search grid.
//!
//! Layouts (N qubits, k repetitions):
//!
//! * `zoufal`: RY on every qubit, then k times [CZ entanglers, RY layer].
//!   Entanglers form a ring `(q, q+1 mod N)` for N ≥ 3, a single `CZ(0,1)` for
//!   N = 2 and are absent for N = 1. `N·(k+1)` parameters.
//! * `vallecorsa`: RY then RZ on every qubit, then k times [CX chain
//!   `(q → q+1)`, RY+RZ layer]. `2N·(k+1)` parameters.
//! * `herr_1`: RY on every qubit, then k times [CZ on every pair `i < j`,
//!   RY layer]. `N·(k+1)` parameters.
//!
//! Only `zoufal` has a published layout; the other two are stand-ins that
//! keep the configuration names.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::circuit::{Angle, CircuitTemplate, GateOp};
use super::state::check_qubits;
use super::QuantumError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnsatzFamily {
    Zoufal,
    Vallecorsa,
    #[serde(rename = "herr_1")]
    Herr1,
}

impl AnsatzFamily {
    pub const ALL: [AnsatzFamily; 3] = [Self::Zoufal, Self::Vallecorsa, Self::Herr1];

    pub fn name(self) -> &'static str {
        match self {
            Self::Zoufal => "zoufal",
            Self::Vallecorsa => "vallecorsa",
            Self::Herr1 => "herr_1",
        }
    }

    pub fn parameter_count(self, num_qubits: usize, repetitions: usize) -> usize {
        let per_layer = match self {
            Self::Vallecorsa => 2 * num_qubits,
            Self::Zoufal | Self::Herr1 => num_qubits,
        };
        per_layer * (repetitions + 1)
    }
}

impl fmt::Display for AnsatzFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AnsatzFamily {
    type Err = QuantumError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| QuantumError::UnknownFamily(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AnsatzDescriptor {
    pub family: AnsatzFamily,
    pub num_qubits: usize,
    pub repetitions: usize,
}

impl AnsatzDescriptor {
    pub fn new(family: AnsatzFamily, num_qubits: usize, repetitions: usize) -> Self {
        Self {
            family,
            num_qubits,
            repetitions,
        }
    }

    /// Parses the family name as it appears in configuration files.
    pub fn parse(family: &str, num_qubits: usize, repetitions: usize) -> Result<Self, QuantumError> {
        Ok(Self::new(family.parse()?, num_qubits, repetitions))
    }

    pub fn parameter_count(&self) -> usize {
        self.family.parameter_count(self.num_qubits, self.repetitions)
    }
}

struct Builder {
    ops: Vec<GateOp>,
    next_slot: usize,
}

impl Builder {
    fn slot(&mut self) -> Angle {
        let s = self.next_slot;
        self.next_slot += 1;
        Angle::Param(s)
    }

    fn ry_layer(&mut self, n: usize) {
        for q in 0..n {
            let a = self.slot();
            self.ops.push(GateOp::ry(q, a));
        }
    }

    fn ry_rz_layer(&mut self, n: usize) {
        for q in 0..n {
            let a = self.slot();
            self.ops.push(GateOp::ry(q, a));
            let a = self.slot();
            self.ops.push(GateOp::rz(q, a));
        }
    }
}

fn ring_pairs(n: usize) -> Vec<(usize, usize)> {
    match n {
        0 | 1 => vec![],
        2 => vec![(0, 1)],
        _ => (0..n).map(|q| (q, (q + 1) % n)).collect(),
    }
}

/// Builds the gate list for a descriptor.
pub fn build_ansatz(descriptor: &AnsatzDescriptor) -> Result<CircuitTemplate, QuantumError> {
    let n = descriptor.num_qubits;
    check_qubits(n)?;
    if descriptor.repetitions == 0 {
        return Err(QuantumError::InvalidRepetitions(descriptor.repetitions));
    }
    let mut b = Builder {
        ops: Vec::new(),
        next_slot: 0,
    };
    match descriptor.family {
        AnsatzFamily::Zoufal => {
            b.ry_layer(n);
            for _ in 0..descriptor.repetitions {
                for (p, q) in ring_pairs(n) {
                    b.ops.push(GateOp::cz(p, q));
                }
                b.ry_layer(n);
            }
        }
        AnsatzFamily::Vallecorsa => {
            b.ry_rz_layer(n);
            for _ in 0..descriptor.repetitions {
                for q in 0..n.saturating_sub(1) {
                    b.ops.push(GateOp::cx(q, q + 1));
                }
                b.ry_rz_layer(n);
            }
        }
        AnsatzFamily::Herr1 => {
            b.ry_layer(n);
            for _ in 0..descriptor.repetitions {
                for i in 0..n {
                    for j in i + 1..n {
                        b.ops.push(GateOp::cz(i, j));
                    }
                }
                b.ry_layer(n);
            }
        }
    }
    let template = CircuitTemplate::new(n, b.ops)?.with_descriptor(*descriptor);
    debug_assert_eq!(template.num_params(), descriptor.parameter_count());
    Ok(template)
}
