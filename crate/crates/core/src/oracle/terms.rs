//! Hamiltonian terms assembled as weighted sums of gate-level operators,
//! mirroring the Pauli / X-insertion circuit pictures.

use num_complex::Complex64 as C64;

use super::dense::DenseOperator;
use super::{local_operator, lowering, pauli_z, raising};
use crate::error::Result;
use crate::model::ModelParams;
use crate::statevector::pauli_x;

/// `−Δa/4 · X₀`.
pub fn h_a_from_gates(params: &ModelParams) -> Result<DenseOperator> {
    let gamma = params.require_gamma()?;
    Ok(local_operator(gamma, &[(0, pauli_x())]) * C64::new(-params.delta_a / 4.0, 0.0))
}

/// Inter-cell hopping as a sum over carry lengths.
///
/// The pair `(p, p+1)` with `p` odd flips the `r` trailing ones of `p` and
/// the zero above them, so `|p+1⟩⟨p| = σ⁺_r Π_{j<r} σ⁻_j` summed over the
/// untouched high bits. The wrap-around pair `(N−1, 0)` is the `r = Γ`
/// term with no raised bit.
pub fn h_b_from_gates(params: &ModelParams) -> Result<DenseOperator> {
    let gamma = params.require_gamma()?;
    let n = params.n_sites;
    let mut h = DenseOperator::from_element(n, n, C64::new(0.0, 0.0));
    for r in 1..=gamma {
        let mut up: Vec<_> = (0..r).map(|j| (j, lowering())).collect();
        let mut down: Vec<_> = (0..r).map(|j| (j, raising())).collect();
        if r < gamma {
            up.push((r, raising()));
            down.push((r, lowering()));
        }
        h += local_operator(gamma, &up) + local_operator(gamma, &down);
    }
    Ok(h * C64::new(-params.delta_b / 4.0, 0.0))
}

/// `F(t) [ (N−1)/2 · I − Σ_β 2^{β−1} Z_β ]`.
pub fn h_e_from_gates(params: &ModelParams, t: f64) -> Result<DenseOperator> {
    let gamma = params.require_gamma()?;
    let f = params.field(t);
    let n = params.n_sites;
    let mut h = DenseOperator::identity(n, n) * C64::new(f * (n as f64 - 1.0) / 2.0, 0.0);
    for beta in 0..gamma {
        let weight = f / 2.0 * (1u64 << beta) as f64;
        h -= local_operator(gamma, &[(beta, pauli_z())]) * C64::new(weight, 0.0);
    }
    Ok(h)
}

/// `V/N Σ_S (Z_S)^{⊗2}` over every subset `S` of register qubits, on two
/// registers with particle 1 in the high bits.
pub fn h_v_from_gates(params: &ModelParams) -> Result<DenseOperator> {
    let gamma = params.require_gamma()?;
    let n = params.n_sites;
    let mut h = DenseOperator::from_element(n * n, n * n, C64::new(0.0, 0.0));
    for subset in 0..n {
        let factors: Vec<_> = (0..gamma)
            .filter(|j| subset >> j & 1 == 1)
            .flat_map(|j| [(j, pauli_z()), (j + gamma, pauli_z())])
            .collect();
        h += local_operator(2 * gamma, &factors);
    }
    Ok(h * C64::new(params.v / n as f64, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::dense;

    fn max_dev(a: &DenseOperator, b: &DenseOperator) -> f64 {
        (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn gate_sums_reproduce_site_hamiltonians() {
        for gamma in 1..=4 {
            let p = ModelParams::reference(1 << gamma).unwrap().with_ac_field(0.3, 1.1).with_interaction(10.0);
            let t = 0.37;
            assert!(max_dev(&h_a_from_gates(&p).unwrap(), &dense::h_a(&p)) < 1e-14, "H_a, Γ={gamma}");
            assert!(max_dev(&h_b_from_gates(&p).unwrap(), &dense::h_b(&p)) < 1e-14, "H_b, Γ={gamma}");
            assert!(max_dev(&h_e_from_gates(&p, t).unwrap(), &dense::h_e(&p, t)) < 1e-12, "H_E, Γ={gamma}");
            if gamma <= 3 {
                let with_v = dense::h_two(&p, t);
                let without_v = dense::h_two(&p.with_interaction(0.0), t);
                assert!(max_dev(&h_v_from_gates(&p).unwrap(), &(with_v - without_v)) < 1e-12, "H_V, Γ={gamma}");
            }
        }
    }

    #[test]
    fn parity_sum_counts_coincidences() {
        // Σ_S Z_S ⊗ Z_S = N δ_{l1,l2}, checked entry by entry
        for gamma in 1..=4 {
            let n = 1usize << gamma;
            let p = ModelParams::new(n).unwrap().with_interaction(n as f64);
            let h = h_v_from_gates(&p).unwrap();
            for l1 in 0..n {
                for l2 in 0..n {
                    let i = l1 * n + l2;
                    let expected = if l1 == l2 { n as f64 } else { 0.0 };
                    assert!((h[(i, i)].re - expected).abs() < 1e-12);
                }
            }
        }
    }
}
