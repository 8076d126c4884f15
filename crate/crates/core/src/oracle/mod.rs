//! Independent classical references: dense Hamiltonians, exact
//! exponentials, the Bessel propagator and the Jordan-Wigner sector.

pub mod bessel;
pub mod dense;
pub mod jordan_wigner;
pub mod terms;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::statevector::Matrix2;
use dense::DenseOperator;

/// Kronecker chain over `n_qubits` with the listed single-qubit factors and
/// identities elsewhere. Qubit 0 is the rightmost (least-significant) factor.
pub fn local_operator(n_qubits: usize, factors: &[(usize, Matrix2)]) -> DenseOperator {
    let mut out = DMatrix::from_element(1, 1, C64::new(1.0, 0.0));
    for q in (0..n_qubits).rev() {
        let m = factors
            .iter()
            .filter(|(fq, _)| *fq == q)
            .map(|(_, m)| DMatrix::from_fn(2, 2, |r, c| m[r][c]))
            .fold(DMatrix::identity(2, 2), |acc, m| acc * m);
        out = out.kronecker(&m);
    }
    out
}

/// `|1⟩⟨0|`.
pub fn raising() -> Matrix2 {
    let (o, z) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
    [[z, z], [o, z]]
}

/// `|0⟩⟨1|`.
pub fn lowering() -> Matrix2 {
    let (o, z) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
    [[z, o], [z, z]]
}

pub fn pauli_z() -> Matrix2 {
    let (o, z) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
    [[o, z], [z, -o]]
}
