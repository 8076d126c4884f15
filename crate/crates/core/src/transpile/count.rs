use serde::{Deserialize, Serialize};

use super::basis::{BasisCircuit, BasisGate};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateCounts {
    pub depth: usize,
    pub u1: usize,
    pub u3: usize,
    pub cx: usize,
}

/// Published `(depth, U1, U3, CX)` for one three-qubit Trotter step.
pub const REFERENCE_COUNTS: GateCounts = GateCounts { depth: 25, u1: 4, u3: 13, cx: 14 };

/// Gate tallies and depth, where a gate sits one layer above the latest
/// gate on any of its qubits.
pub fn count(circuit: &BasisCircuit) -> GateCounts {
    let mut level = vec![0usize; circuit.qubit_count];
    let mut counts = GateCounts::default();
    for g in &circuit.ops {
        match g {
            BasisGate::U1 { .. } => counts.u1 += 1,
            BasisGate::U3 { .. } => counts.u3 += 1,
            BasisGate::Cx { .. } => counts.cx += 1,
        }
        let qubits = g.qubits();
        let layer = qubits.iter().map(|&q| level[q]).max().unwrap_or(0) + 1;
        for q in qubits {
            level[q] = layer;
        }
    }
    counts.depth = level.into_iter().max().unwrap_or(0);
    counts
}
