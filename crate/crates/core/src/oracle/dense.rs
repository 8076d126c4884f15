//! Dense Hamiltonians and exact propagators.

use std::io::Write;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::model::ModelParams;

/// Dense complex operator; Hamiltonians and unitaries alike.
pub type DenseOperator = DMatrix<C64>;

const HERMITIAN_TOL: f64 = 1e-12;

fn zeros(n: usize) -> DenseOperator {
    DMatrix::from_element(n, n, C64::new(0.0, 0.0))
}

fn add_hop(h: &mut DenseOperator, a: usize, b: usize, amp: f64) {
    h[(a, b)] += amp;
    h[(b, a)] += amp;
}

/// Intra-cell hopping `−Δa/4 Σ (|2n⟩⟨2n+1| + h.c.)`.
pub fn h_a(params: &ModelParams) -> DenseOperator {
    let n = params.n_sites;
    let mut h = zeros(n);
    for cell in 0..n / 2 {
        add_hop(&mut h, 2 * cell, 2 * cell + 1, -params.delta_a / 4.0);
    }
    h
}

/// Inter-cell hopping `−Δb/4 Σ (|2n+1⟩⟨2n+2| + h.c.)` with `|N⟩ = |0⟩`.
pub fn h_b(params: &ModelParams) -> DenseOperator {
    let n = params.n_sites;
    let mut h = zeros(n);
    for cell in 0..n / 2 {
        add_hop(&mut h, 2 * cell + 1, (2 * cell + 2) % n, -params.delta_b / 4.0);
    }
    h
}

/// Linear potential `F(t) Σ l |l⟩⟨l|`.
pub fn h_e(params: &ModelParams, t: f64) -> DenseOperator {
    let f = params.field(t);
    let mut h = zeros(params.n_sites);
    for l in 0..params.n_sites {
        h[(l, l)] = C64::new(l as f64 * f, 0.0);
    }
    h
}

/// Single-particle Hamiltonian on the periodic chain.
pub fn h_sv(params: &ModelParams, t: f64) -> DenseOperator {
    h_a(params) + h_b(params) + h_e(params, t)
}

/// Two-particle Hamiltonian `H⊗I + I⊗H + V Σ_l |l,l⟩⟨l,l|` on `N²` states
/// indexed `l1 * N + l2`.
pub fn h_two(params: &ModelParams, t: f64) -> DenseOperator {
    let n = params.n_sites;
    let mut h = kron_sum(&h_sv(params, t), &h_sv(params, t));
    for l in 0..n {
        h[(l * n + l, l * n + l)] += params.v;
    }
    h
}

/// Separable 2D Hamiltonian `Hx⊗I + I⊗Hy`, indexed `lx * Ny + ly`.
pub fn h_2d(params_x: &ModelParams, params_y: &ModelParams, t: f64) -> DenseOperator {
    kron_sum(&h_sv(params_x, t), &h_sv(params_y, t))
}

/// `A⊗I + I⊗B`.
pub fn kron_sum(a: &DenseOperator, b: &DenseOperator) -> DenseOperator {
    let ia = DMatrix::identity(a.nrows(), a.nrows());
    let ib = DMatrix::identity(b.nrows(), b.nrows());
    a.kronecker(&ib) + ia.kronecker(b)
}

/// Largest entry of `|H − H†|`.
pub fn hermiticity_deviation(h: &DenseOperator) -> f64 {
    (h - h.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest entry of `|U†U − I|`.
pub fn unitarity_deviation(u: &DenseOperator) -> f64 {
    let n = u.nrows();
    (u.adjoint() * u - DMatrix::identity(n, n)).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Eigendecomposition of a Hermitian operator, reusable for many time steps.
#[derive(Clone, Debug)]
pub struct SpectralPropagator {
    eigenvalues: DVector<f64>,
    eigenvectors: DenseOperator,
}

impl SpectralPropagator {
    pub fn new(h: &DenseOperator) -> Result<Self> {
        if h.nrows() != h.ncols() {
            return Err(Error::DimensionMismatch { expected: h.nrows(), got: h.ncols() });
        }
        let scale = h.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let deviation = hermiticity_deviation(h);
        if !(deviation <= HERMITIAN_TOL * scale) {
            return Err(Error::NotHermitian { deviation });
        }
        // symmetrize so the solver sees an exactly Hermitian input
        let hs = (h + h.adjoint()).map(|z| z * 0.5);
        let eig = SymmetricEigen::new(hs);
        Ok(Self { eigenvalues: eig.eigenvalues, eigenvectors: eig.eigenvectors })
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    /// `V e^{−iΛ dt} V†`.
    pub fn unitary(&self, dt: f64) -> DenseOperator {
        let v = &self.eigenvectors;
        let mut scaled = v.clone();
        for (j, &lambda) in self.eigenvalues.iter().enumerate() {
            let phase = C64::from_polar(1.0, -lambda * dt);
            scaled.column_mut(j).iter_mut().for_each(|z| *z *= phase);
        }
        scaled * v.adjoint()
    }

    /// `e^{−iH dt} ψ` without forming the full unitary.
    pub fn apply(&self, psi: &[C64], dt: f64) -> Vec<C64> {
        let v = &self.eigenvectors;
        let psi = DVector::from_column_slice(psi);
        let mut coeffs = v.adjoint() * psi;
        for (c, &lambda) in coeffs.iter_mut().zip(self.eigenvalues.iter()) {
            *c *= C64::from_polar(1.0, -lambda * dt);
        }
        (v * coeffs).iter().copied().collect()
    }
}

/// `e^{−iH dt}` by Hermitian eigendecomposition.
pub fn dense_exp(h: &DenseOperator, dt: f64) -> Result<DenseOperator> {
    Ok(SpectralPropagator::new(h)?.unitary(dt))
}

/// Ascending eigenvalues of a Hermitian operator.
pub fn eigenvalues(h: &DenseOperator) -> Result<Vec<f64>> {
    let mut ev: Vec<f64> = SpectralPropagator::new(h)?.eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Writes `row,col,re,im` for every entry.
pub fn write_matrix_csv<W: Write>(m: &DenseOperator, mut w: W) -> Result<()> {
    writeln!(w, "row,col,re,im")?;
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            let z = m[(r, c)];
            writeln!(w, "{r},{c},{},{}", z.re, z.im)?;
        }
    }
    Ok(())
}

pub fn mat_vec(m: &DenseOperator, psi: &[C64]) -> Vec<C64> {
    (m * DVector::from_column_slice(psi)).iter().copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_dev(a: &DenseOperator, b: &DenseOperator) -> f64 {
        (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn h_sv_entries() {
        let p = ModelParams::new(4).unwrap().with_field(1.0);
        let h = h_sv(&p, 0.0);
        for r in 0..4 {
            for c in 0..4 {
                let expected = if r == c { r as f64 } else { 0.0 };
                assert_eq!(h[(r, c)], C64::new(expected, 0.0));
            }
        }

        let p = ModelParams::reference(4).unwrap();
        let h = h_sv(&p, 0.0);
        assert_eq!(h[(0, 1)].re, -1.25);
        assert_eq!(h[(1, 2)].re, -0.25);
        assert_eq!(h[(0, 3)].re, -0.25);
        assert_eq!(h[(3, 0)].re, -0.25);
        assert_eq!(h[(3, 3)].re, 4.5);
        assert_eq!(h[(0, 2)].re, 0.0);
    }

    #[test]
    fn two_site_chain_merges_both_hoppings() {
        // with N = 2 the inter-cell bond closes onto the same pair
        let p = ModelParams::new(2).unwrap().with_hopping(5.0, 1.0);
        assert_eq!(h_sv(&p, 0.0)[(0, 1)].re, -1.5);
    }

    #[test]
    fn ac_field_enters_diagonal() {
        let p = ModelParams::reference(4).unwrap().with_ac_field(1.0, 3.0);
        let t = 0.4;
        let h = h_sv(&p, t);
        assert!((h[(2, 2)].re - 2.0 * (1.5 + (3.0 * t).cos())).abs() < 1e-15);
    }

    #[test]
    fn exp_identities() {
        let p = ModelParams::reference(8).unwrap();
        let h = h_sv(&p, 0.0);
        let id = DMatrix::identity(8, 8);
        assert!(max_dev(&dense_exp(&h, 0.0).unwrap(), &id) < 1e-13);
        let u1 = dense_exp(&h, 0.013).unwrap();
        let u2 = dense_exp(&h, 0.029).unwrap();
        let u12 = dense_exp(&h, 0.042).unwrap();
        assert!(max_dev(&(&u1 * &u2), &u12) < 1e-12);
        assert!(unitarity_deviation(&u12) < 1e-12);
    }

    #[test]
    fn exp_of_h_a_is_block_rotation() {
        let p = ModelParams::new(4).unwrap().with_hopping(5.0, 0.0);
        let u = dense_exp(&h_a(&p), 0.02).unwrap();
        let th: f64 = 5.0 * 0.02 / 4.0;
        for cell in 0..2 {
            let (a, b) = (2 * cell, 2 * cell + 1);
            assert!((u[(a, a)] - C64::new(th.cos(), 0.0)).norm() < 1e-13);
            assert!((u[(a, b)] - C64::new(0.0, th.sin())).norm() < 1e-13);
            assert!((u[(b, a)] - C64::new(0.0, th.sin())).norm() < 1e-13);
        }
        assert!(u[(1, 2)].norm() < 1e-13);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut h = h_sv(&ModelParams::reference(4).unwrap(), 0.0);
        h[(0, 1)] = C64::new(1.0, 0.0);
        assert!(matches!(dense_exp(&h, 0.1), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn propagator_apply_matches_unitary() {
        let p = ModelParams::reference(8).unwrap();
        let prop = SpectralPropagator::new(&h_sv(&p, 0.0)).unwrap();
        let psi: Vec<C64> = (0..8).map(|k| C64::new(k as f64, 1.0 - k as f64)).collect();
        let a = prop.apply(&psi, 0.7);
        let b = mat_vec(&prop.unitary(0.7), &psi);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn two_particle_structure() {
        let p = ModelParams::new(4).unwrap().with_interaction(10.0);
        let h = h_two(&p, 0.0);
        for i in 0..16 {
            let expected = if i / 4 == i % 4 { 10.0 } else { 0.0 };
            assert_eq!(h[(i, i)].re, expected);
        }

        // V = 0: spectrum is every pairwise sum of one-particle eigenvalues
        let p = ModelParams::reference(4).unwrap();
        let one = eigenvalues(&h_sv(&p, 0.0)).unwrap();
        let mut sums: Vec<f64> = one.iter().flat_map(|a| one.iter().map(move |b| a + b)).collect();
        sums.sort_by(f64::total_cmp);
        let two = eigenvalues(&h_two(&p, 0.0)).unwrap();
        for (a, b) in sums.iter().zip(&two) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn two_d_diagonal() {
        let px = ModelParams::new(4).unwrap().with_field(1.0);
        let h = h_2d(&px, &px, 0.0);
        for lx in 0..4 {
            for ly in 0..4 {
                let i = lx * 4 + ly;
                assert_eq!(h[(i, i)].re, (lx + ly) as f64);
            }
        }
        assert_eq!(hermiticity_deviation(&h), 0.0);
    }

    #[test]
    fn matrix_csv_layout() {
        let h = h_sv(&ModelParams::reference(2).unwrap(), 0.0);
        let mut buf = Vec::new();
        write_matrix_csv(&h, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "row,col,re,im");
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[2], "0,1,-1.5,0");
    }
}
