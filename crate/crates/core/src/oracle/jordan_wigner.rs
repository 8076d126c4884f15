//! Jordan-Wigner spin Hamiltonian and its single-excitation sector.
//!
//! The spin Hamiltonian has one qubit per site:
//!
//! ```text
//! H = −Δa/4 Σ_n (σ⁺_{2n+1} σ⁻_{2n} + h.c.)
//!     −Δb/4 Σ_n (σ⁺_{2n+2} σ⁻_{2n+1} + h.c.)
//!     + F(t) Σ_l l σ⁺_l σ⁻_l
//! ```
//!
//! with `n` running over `0..N/2`. The last inter-cell term reaches site
//! `N`, which [`Boundary`] either identifies with site 0 or drops.

use num_complex::Complex64 as C64;

use super::dense::DenseOperator;
use super::{local_operator, lowering, raising};
use crate::error::{Error, Result};
use crate::model::ModelParams;

/// Treatment of the `σ_N` operator in the last inter-cell bond.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Boundary {
    /// Site `N` is site 0.
    Periodic,
    /// The bond to site `N` is absent.
    Open,
}

/// Largest chain for which the `2^N`-dimensional spin matrix is built.
pub const MAX_BRUTE_FORCE_SITES: usize = 12;

fn bonds(params: &ModelParams, boundary: Boundary) -> Vec<(usize, usize, f64)> {
    let n = params.n_sites;
    let mut out = Vec::with_capacity(n);
    for cell in 0..n / 2 {
        out.push((2 * cell, 2 * cell + 1, -params.delta_a / 4.0));
        let right = 2 * cell + 2;
        if right < n {
            out.push((2 * cell + 1, right, -params.delta_b / 4.0));
        } else if boundary == Boundary::Periodic {
            out.push((2 * cell + 1, 0, -params.delta_b / 4.0));
        }
    }
    out
}

/// Sector matrix `⟨0|σ⁻_l H σ⁺_{l'}|0⟩`, built directly on `N` states.
pub fn jw_sector_h(params: &ModelParams, t: f64, boundary: Boundary) -> Result<DenseOperator> {
    params.validate()?;
    let n = params.n_sites;
    let mut h = DenseOperator::from_element(n, n, C64::new(0.0, 0.0));
    for (a, b, amp) in bonds(params, boundary) {
        // σ⁺_b σ⁻_a moves the excitation from a to b, and its conjugate back
        h[(b, a)] += amp;
        h[(a, b)] += amp;
    }
    let f = params.field(t);
    for l in 0..n {
        h[(l, l)] += l as f64 * f;
    }
    Ok(h)
}

/// Full `2^N × 2^N` spin Hamiltonian from Kronecker products of the local
/// `σ±` operators.
pub fn jw_spin_hamiltonian(params: &ModelParams, t: f64, boundary: Boundary) -> Result<DenseOperator> {
    params.validate()?;
    let n = params.n_sites;
    if n > MAX_BRUTE_FORCE_SITES {
        return Err(Error::InvalidParams(format!(
            "{n} sites exceeds the brute-force limit of {MAX_BRUTE_FORCE_SITES}"
        )));
    }
    let dim = 1usize << n;
    let mut h = DenseOperator::from_element(dim, dim, C64::new(0.0, 0.0));
    for (a, b, amp) in bonds(params, boundary) {
        let amp = C64::new(amp, 0.0);
        h += local_operator(n, &[(b, raising()), (a, lowering())]) * amp;
        h += local_operator(n, &[(b, lowering()), (a, raising())]) * amp;
    }
    let f = params.field(t);
    for l in 0..n {
        h += local_operator(n, &[(l, raising()), (l, lowering())]) * C64::new(l as f64 * f, 0.0);
    }
    Ok(h)
}

/// Restriction of a spin operator to the states `σ⁺_l |0…0⟩`, i.e. basis
/// indices `1 << l`.
pub fn single_excitation_block(spin_h: &DenseOperator, n_sites: usize) -> DenseOperator {
    DenseOperator::from_fn(n_sites, n_sites, |r, c| spin_h[(1 << r, 1 << c)])
}

/// Largest magnitude of matrix elements that leave the single-excitation
/// sector. Zero for a number-conserving Hamiltonian.
pub fn sector_leakage(spin_h: &DenseOperator, n_sites: usize) -> f64 {
    let in_sector = |i: usize| i.count_ones() == 1;
    let mut worst: f64 = 0.0;
    for l in 0..n_sites {
        let col = 1usize << l;
        for r in 0..spin_h.nrows() {
            if !in_sector(r) {
                worst = worst.max(spin_h[(r, col)].norm());
            }
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::dense;

    fn max_dev(a: &DenseOperator, b: &DenseOperator) -> f64 {
        (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn open_boundary_drops_corners() {
        let p = ModelParams::new(4).unwrap().with_hopping(5.0, 1.0);
        let mut expected = dense::h_sv(&p, 0.0);
        expected[(0, 3)] = C64::new(0.0, 0.0);
        expected[(3, 0)] = C64::new(0.0, 0.0);
        let h = jw_sector_h(&p, 0.0, Boundary::Open).unwrap();
        assert_eq!(max_dev(&h, &expected), 0.0);
    }

    #[test]
    fn field_term_is_number_operator() {
        let p = ModelParams::new(6).unwrap().with_field(1.5);
        let h = jw_sector_h(&p, 0.0, Boundary::Periodic).unwrap();
        for l in 0..6 {
            assert_eq!(h[(l, l)].re, 1.5 * l as f64);
        }
    }

    #[test]
    fn non_power_of_two_chains() {
        let p = ModelParams::new(6).unwrap().with_hopping(5.0, 1.0).with_field(0.5);
        let h = jw_sector_h(&p, 0.0, Boundary::Periodic).unwrap();
        assert_eq!(max_dev(&h, &dense::h_sv(&p, 0.0)), 0.0);
        let spin = jw_spin_hamiltonian(&p, 0.0, Boundary::Periodic).unwrap();
        assert_eq!(max_dev(&single_excitation_block(&spin, 6), &h), 0.0);
        assert_eq!(sector_leakage(&spin, 6), 0.0);
    }

    #[test]
    fn brute_force_size_limit() {
        let p = ModelParams::new(14).unwrap();
        assert!(jw_spin_hamiltonian(&p, 0.0, Boundary::Open).is_err());
    }
}
