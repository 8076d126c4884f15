//! Probabilities, sublattice expectations, band structure and
//! Wannier-Stark ladders.
//!
//! Even sites form sublattice A, odd sites sublattice B. Each sublattice
//! carries half the norm of an evenly split state, so its expectations are
//! scaled by 2.

use std::f64::consts::PI;
use std::io::Write;
use std::ops::RangeInclusive;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::oracle::dense;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sublattice {
    A,
    B,
}

impl Sublattice {
    fn contains(self, l: usize) -> bool {
        l.is_multiple_of(2) == (self == Sublattice::A)
    }
}

pub fn site_probabilities(psi: &[C64]) -> Vec<f64> {
    psi.iter().map(|a| a.norm_sqr()).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SublatticePosition {
    pub a: f64,
    pub b: f64,
    /// `(⟨l_A⟩ + ⟨l_B⟩)/2`, which is the ordinary `⟨l⟩`.
    pub mean: f64,
}

pub fn sublattice_position(psi: &[C64]) -> SublatticePosition {
    let sum = |s: Sublattice| {
        2.0 * psi.iter().enumerate().filter(|(l, _)| s.contains(*l)).map(|(l, a)| l as f64 * a.norm_sqr()).sum::<f64>()
    };
    let (a, b) = (sum(Sublattice::A), sum(Sublattice::B));
    SublatticePosition { a, b, mean: (a + b) / 2.0 }
}

/// `(|Ψ_A|², |Ψ_B|²)`.
pub fn sublattice_probability(psi: &[C64]) -> (f64, f64) {
    psi.iter().enumerate().fold((0.0, 0.0), |(a, b), (l, z)| {
        if l % 2 == 0 {
            (a + z.norm_sqr(), b)
        } else {
            (a, b + z.norm_sqr())
        }
    })
}

/// Momentum grid `k_n = 2πn/N`, `n = 0..N`.
pub fn momentum_grid(n_sites: usize) -> Vec<f64> {
    (0..n_sites).map(|n| 2.0 * PI * n as f64 / n_sites as f64).collect()
}

/// `ψ̃(k) = √(2/N) Σ_{l ∈ s} e^{−ikl} ψ(l)` on [`momentum_grid`].
pub fn sublattice_transform(psi: &[C64], s: Sublattice) -> Vec<C64> {
    let n = psi.len();
    let scale = (2.0 / n as f64).sqrt();
    momentum_grid(n)
        .into_iter()
        .map(|k| {
            psi.iter()
                .enumerate()
                .filter(|(l, _)| s.contains(*l))
                .map(|(l, a)| a * C64::from_polar(1.0, -k * l as f64))
                .sum::<C64>()
                * scale
        })
        .collect()
}

/// `(⟨k_A⟩, ⟨k_B⟩)` with `⟨k_s⟩ = Σ_k k |ψ̃_s(k)|²`.
pub fn sublattice_momentum(psi: &[C64]) -> (f64, f64) {
    let grid = momentum_grid(psi.len());
    let mean = |s: Sublattice| sublattice_transform(psi, s).iter().zip(&grid).map(|(z, k)| k * z.norm_sqr()).sum();
    (mean(Sublattice::A), mean(Sublattice::B))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Band {
    Upper,
    Lower,
}

impl Band {
    fn sign(self) -> f64 {
        match self {
            Band::Upper => 1.0,
            Band::Lower => -1.0,
        }
    }
}

/// `(ε₊(k), ε₋(k))` with `ε± = ±¼ √(Δa² + Δb² + 2ΔaΔb cos 2k)`.
pub fn dispersion(params: &ModelParams, k: f64) -> (f64, f64) {
    let (da, db) = (params.delta_a, params.delta_b);
    let e = (da * da + db * db + 2.0 * da * db * (2.0 * k).cos()).max(0.0).sqrt() / 4.0;
    (e, -e)
}

fn band_energy(params: &ModelParams, band: Band, k: f64) -> f64 {
    band.sign() * dispersion(params, k).0
}

/// Ascending eigenvalues of the dense Hamiltonian in the constant field
/// `f_const`.
pub fn spectrum(params: &ModelParams, f_const: f64) -> Result<Vec<f64>> {
    let p = ModelParams { f_dc: f_const, f_ac: 0.0, ..*params };
    p.validate()?;
    dense::eigenvalues(&dense::h_sv(&p, 0.0))
}

/// Band-basis coefficient `D(k) = −4ε(k) / (Δa e^{ik} + Δb e^{−ik})`, of
/// unit modulus away from band touchings.
pub fn band_coefficient(params: &ModelParams, band: Band, k: f64) -> C64 {
    let z = C64::from_polar(params.delta_a, k) + C64::from_polar(params.delta_b, -k);
    C64::new(-4.0 * band_energy(params, band, k), 0.0) / z
}

const DERIVATIVE_STEP: f64 = 1e-5;

/// Intraband connection `X(k) = (i/2) D* ∂_k D`, with `∂_k` by central
/// differences.
pub fn berry_connection(params: &ModelParams, band: Band, k: f64) -> f64 {
    let h = DERIVATIVE_STEP * k.abs().max(1.0);
    let d = band_coefficient(params, band, k);
    let dd = (band_coefficient(params, band, k + h) - band_coefficient(params, band, k - h)) / (2.0 * h);
    (C64::new(0.0, 0.5) * d.conj() * dd).re
}

const QUADRATURE_TOL: f64 = 1e-8;
const MAX_REFINEMENTS: u32 = 20;

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, intervals: usize) -> f64 {
    let h = (b - a) / intervals as f64;
    let inner: f64 = (1..intervals).map(|j| f(a + j as f64 * h) * if j % 2 == 1 { 4.0 } else { 2.0 }).sum();
    (f(a) + f(b) + inner) * h / 3.0
}

/// Ladder offset `(1/π)∫[ε(p) − F X(p)] dp + F` over one Brillouin zone.
///
/// The final `F` is the holonomy of the Bloch functions, which change sign
/// under `k → k + π`. The integrand has period `π`, so the window is moved
/// off the band-touching points `±π/2`.
pub fn ladder_offset(params: &ModelParams, f_const: f64, band: Band) -> Result<f64> {
    let integrand = |p: f64| band_energy(params, band, p) - f_const * berry_connection(params, band, p);
    let shift = PI / 7.0;
    let (a, b) = (-PI / 2.0 + shift, PI / 2.0 + shift);
    let mut intervals = 16;
    let mut previous = simpson(integrand, a, b, intervals);
    let mut change = f64::INFINITY;
    for _ in 0..MAX_REFINEMENTS {
        intervals *= 2;
        let current = simpson(integrand, a, b, intervals);
        change = (current - previous).abs() / PI;
        if change < QUADRATURE_TOL {
            return Ok(current / PI + f_const);
        }
        previous = current;
    }
    Err(Error::QuadratureNotConverged { change })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LadderSpectrum {
    pub band: Band,
    pub alphas: Vec<i64>,
    pub energies: Vec<f64>,
}

/// `E_α = 2Fα + offset` for each `α` in `alphas`.
pub fn ws_ladder(params: &ModelParams, f_const: f64, band: Band, alphas: RangeInclusive<i64>) -> Result<LadderSpectrum> {
    if !(f_const > 0.0 && f_const.is_finite()) {
        return Err(Error::InvalidParams(format!("ladder field {f_const} must be positive")));
    }
    let offset = ladder_offset(params, f_const, band)?;
    let alphas: Vec<i64> = alphas.collect();
    let energies = alphas.iter().map(|&a| 2.0 * f_const * a as f64 + offset).collect();
    Ok(LadderSpectrum { band, alphas, energies })
}

/// Ladder rung closest to `energy`.
pub fn nearest_rung(ladders: &[LadderSpectrum], energy: f64) -> Option<(Band, i64, f64)> {
    ladders
        .iter()
        .flat_map(|lad| lad.alphas.iter().zip(&lad.energies).map(move |(&a, &e)| (lad.band, a, e)))
        .min_by(|x, y| (x.2 - energy).abs().total_cmp(&(y.2 - energy).abs()))
}

/// `|ψ(l₁, l₂)|²` for a two-particle amplitude vector over `n_sites²`.
pub fn two_particle_probability(psi: &[C64], n_sites: usize, l1: usize, l2: usize) -> Result<f64> {
    if psi.len() != n_sites * n_sites {
        return Err(Error::DimensionMismatch { expected: n_sites * n_sites, got: psi.len() });
    }
    for l in [l1, l2] {
        if l >= n_sites {
            return Err(Error::IndexOutOfRange { index: l, len: n_sites });
        }
    }
    Ok(psi[l1 * n_sites + l2].norm_sqr())
}

/// Single-particle marginals `(Σ_{l₂}, Σ_{l₁})` of a two-particle state.
pub fn two_particle_marginals(psi: &[C64], n_sites: usize) -> (Vec<f64>, Vec<f64>) {
    let mut first = vec![0.0; n_sites];
    let mut second = vec![0.0; n_sites];
    for (i, a) in psi.iter().enumerate() {
        first[i / n_sites] += a.norm_sqr();
        second[i % n_sites] += a.norm_sqr();
    }
    (first, second)
}

/// Pearson correlation coefficient; `NaN` for constant input.
pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len().min(y.len()) as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    sxy / (sxx * syy).sqrt()
}

/// Named columns sampled at common times.
#[derive(Clone, Debug, PartialEq)]
pub struct ObservableSeries {
    pub kind: String,
    pub columns: Vec<String>,
    pub times: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

impl ObservableSeries {
    pub fn new(kind: impl Into<String>, columns: &[&str]) -> Self {
        Self { kind: kind.into(), columns: columns.iter().map(|c| c.to_string()).collect(), times: Vec::new(), values: Vec::new() }
    }

    pub fn push(&mut self, t: f64, row: Vec<f64>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::DimensionMismatch { expected: self.columns.len(), got: row.len() });
        }
        self.times.push(t);
        self.values.push(row);
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.values.iter().map(|row| row[j]).collect())
    }

    /// Sublattice positions, probabilities and momenta of a one-particle
    /// trajectory recorded with full states.
    pub fn sublattice(times: &[f64], states: &[Vec<C64>]) -> Result<Self> {
        let mut series = Self::new("sublattice", &["l_a", "l_b", "l_mean", "p_a", "p_b", "k_a", "k_b"]);
        for (t, psi) in times.iter().zip(states) {
            let pos = sublattice_position(psi);
            let (pa, pb) = sublattice_probability(psi);
            let (ka, kb) = sublattice_momentum(psi);
            series.push(*t, vec![pos.a, pos.b, pos.mean, pa, pb, ka, kb])?;
        }
        Ok(series)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "t,{}", self.columns.join(","))?;
        for (t, row) in self.times.iter().zip(&self.values) {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(w, "{t},{}", cells.join(","))?;
        }
        Ok(())
    }
}
