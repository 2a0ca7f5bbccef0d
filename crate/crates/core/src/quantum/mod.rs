//! Statevector simulation of parametrized circuits.

pub mod ansatz;
pub mod circuit;
pub mod entanglement;
pub mod init;
pub mod state;
pub mod transpile;

use thiserror::Error;

pub use ansatz::{build_ansatz, AnsatzDescriptor, AnsatzFamily};
pub use circuit::{apply_circuit, Angle, CircuitTemplate, GateKind, GateOp};
pub use entanglement::{entangling_capability, meyer_wallach, DEFAULT_CAPABILITY_SAMPLES};
pub use init::{prepare_initial_state, InitKind, InitStrategy, ResolvedInit};
pub use state::{analytic_probabilities, born_sample, map_to_range, StateVector};
pub use transpile::{circuit_depth, transpile, transpile_depth, Transpiled};

/// Largest register the simulator accepts.
pub const MAX_QUBITS: usize = 12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuantumError {
    #[error("unknown ansatz family {0:?}")]
    UnknownFamily(String),
    #[error("qubit count {0} outside 1..={MAX_QUBITS}")]
    QubitCountOutOfRange(usize),
    #[error("repetitions must be >= 1, got {0}")]
    InvalidRepetitions(usize),
    #[error("expected {expected} parameters, got {got}")]
    ParamLengthMismatch { expected: usize, got: usize },
    #[error("normal initialization needs a positive std, got {0}")]
    NonPositiveStd(f64),
    #[error("degenerate range [{a}, {b}]")]
    DegenerateRange { a: f64, b: f64 },
    #[error("index {index} outside 0..{dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("entanglement is undefined for a single qubit")]
    SingleQubit,
    #[error("invalid gate: {0}")]
    InvalidGate(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
}
