//! Lowering to the `{U1, U3, CX}` basis, gate counting and OpenQASM 2.0.

mod basis;
mod count;
mod decompose;
mod qasm;

pub use basis::{max_deviation_up_to_phase, u3_matrix, BasisCircuit, BasisGate};
pub use count::{count, GateCounts, REFERENCE_COUNTS};
pub use decompose::{decompose, zyz};
pub use qasm::{emit_qasm, parse_qasm};
