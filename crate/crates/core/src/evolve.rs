//! Time evolution over a fixed-step schedule.
//!
//! Step `k` (1-based) advances the state from `(k−1)·dt` to `k·dt`. The
//! circuit and dense steppers hold the field constant over the step at the
//! sample time chosen by [`FieldSampling`]; the Runge–Kutta stepper
//! integrates the coupled site equations with the field evaluated at each
//! stage.

use std::io::Write;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::circuit::{build_trotter_step, build_two_particle_step, Circuit};
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::oracle::dense::{self, DenseOperator, SpectralPropagator};
use crate::statevector::{l2_norm, Statevector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stepper {
    /// First-order product of the term circuits.
    Trotter1,
    /// Exponential of the dense Hamiltonian.
    ExactDense,
    /// Classical fourth-order Runge–Kutta on the site equations.
    OdeRk4,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldSampling {
    /// `F(k·dt)` for step `k`.
    #[default]
    EndOfStep,
    /// `F((k − ½)·dt)`.
    Midpoint,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Storage {
    #[default]
    FullState,
    /// Per-step probabilities plus the final state.
    ObservablesOnly,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvolutionPlan {
    pub dt: f64,
    pub n_steps: usize,
    pub stepper: Stepper,
    #[serde(default)]
    pub sampling: FieldSampling,
    #[serde(default)]
    pub storage: Storage,
}

impl EvolutionPlan {
    pub fn new(dt: f64, n_steps: usize, stepper: Stepper) -> Result<Self> {
        let plan = Self { dt, n_steps, stepper, sampling: FieldSampling::default(), storage: Storage::default() };
        plan.validate()?;
        Ok(plan)
    }

    pub fn with_sampling(mut self, sampling: FieldSampling) -> Self {
        self.sampling = sampling;
        self
    }

    pub fn with_storage(mut self, storage: Storage) -> Self {
        self.storage = storage;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidParams(format!("dt = {} must be positive and finite", self.dt)));
        }
        Ok(())
    }

    pub fn total_time(&self) -> f64 {
        self.n_steps as f64 * self.dt
    }

    /// Time at which the field is held during step `k`.
    pub fn sample_time(&self, k: usize) -> f64 {
        match self.sampling {
            FieldSampling::EndOfStep => k as f64 * self.dt,
            FieldSampling::Midpoint => (k as f64 - 0.5) * self.dt,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InitialKind {
    Spike { site: usize },
    Gaussian,
    Spike2 { site1: usize, site2: usize },
}

/// Amplitudes over `N` sites (one particle) or `N²` site pairs, indexed
/// `l₁·N + l₂`. Unlike [`Statevector`] the site count need not be a power
/// of two.
#[derive(Clone, Debug, PartialEq)]
pub struct SiteState {
    n_sites: usize,
    particles: usize,
    amplitudes: Vec<C64>,
}

impl SiteState {
    pub fn new(n_sites: usize, particles: usize, amplitudes: Vec<C64>) -> Result<Self> {
        if !(1..=2).contains(&particles) {
            return Err(Error::RegisterMismatch(format!("{particles} particles")));
        }
        let expected = n_sites.pow(particles as u32);
        if amplitudes.len() != expected {
            return Err(Error::DimensionMismatch { expected, got: amplitudes.len() });
        }
        let norm = l2_norm(&amplitudes);
        if !((norm - 1.0).abs() < 1e-8) {
            return Err(Error::Normalization { norm });
        }
        Ok(Self { n_sites, particles, amplitudes })
    }

    pub fn from_statevector(sv: &Statevector) -> Self {
        Self { n_sites: sv.n_sites(), particles: sv.num_registers(), amplitudes: sv.amplitudes().to_vec() }
    }

    pub fn to_statevector(&self) -> Result<Statevector> {
        if !self.n_sites.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(self.n_sites));
        }
        let gamma = self.n_sites.trailing_zeros() as usize;
        Statevector::from_amplitudes(self.particles, gamma, self.amplitudes.clone())
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn particles(&self) -> usize {
        self.particles
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }
}

fn basis_site_state(n: usize, particles: usize, index: usize) -> SiteState {
    let mut amplitudes = vec![C64::new(0.0, 0.0); n.pow(particles as u32)];
    amplitudes[index] = C64::new(1.0, 0.0);
    SiteState { n_sites: n, particles, amplitudes }
}

pub fn make_initial(kind: InitialKind, params: &ModelParams) -> Result<SiteState> {
    params.validate()?;
    let n = params.n_sites;
    let check = |site: usize| {
        if site < n {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: site, len: n })
        }
    };
    match kind {
        InitialKind::Spike { site } => {
            check(site)?;
            Ok(basis_site_state(n, 1, site))
        }
        InitialKind::Spike2 { site1, site2 } => {
            check(site1)?;
            check(site2)?;
            Ok(basis_site_state(n, 2, site1 * n + site2))
        }
        InitialKind::Gaussian => {
            let centre = n as f64 / 2.0;
            let pref = (2.0 * std::f64::consts::PI).powf(-0.25);
            let mut amplitudes: Vec<C64> = (0..n)
                .map(|l| {
                    let d = l as f64 - centre;
                    C64::new(pref * (-d * d / 4.0).exp(), 0.0)
                })
                .collect();
            let norm = l2_norm(&amplitudes);
            amplitudes.iter_mut().for_each(|a| *a /= norm);
            Ok(SiteState { n_sites: n, particles: 1, amplitudes })
        }
    }
}

/// Hopping amplitude of the bond `(l, l+1 mod N)`.
fn bond(params: &ModelParams, l: usize) -> f64 {
    if l.is_multiple_of(2) {
        -params.delta_a / 4.0
    } else {
        -params.delta_b / 4.0
    }
}

fn apply_h_sv(params: &ModelParams, f: f64, psi: &[C64], out: &mut [C64]) {
    let n = psi.len();
    for l in 0..n {
        let right = (l + 1) % n;
        let left = (l + n - 1) % n;
        out[l] = psi[right] * bond(params, l) + psi[left] * bond(params, left) + psi[l] * (l as f64 * f);
    }
}

/// `dψ/dt = −i H_sv(t) ψ` from the site equations with the periodic wrap
/// `ψ(N) = ψ(0)`.
pub fn ode_rhs(psi: &[C64], t: f64, params: &ModelParams) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); psi.len()];
    apply_h_sv(params, params.field(t), psi, &mut out);
    out.iter_mut().for_each(|z| *z *= C64::new(0.0, -1.0));
    out
}

/// Two-particle version: both particles hop in the same field and pay `V`
/// when they share a site.
pub fn ode_rhs_two(psi: &[C64], t: f64, params: &ModelParams) -> Vec<C64> {
    let n = params.n_sites;
    let f = params.field(t);
    let mut out = vec![C64::new(0.0, 0.0); psi.len()];
    let mut row_in = vec![C64::new(0.0, 0.0); n];
    let mut row_out = vec![C64::new(0.0, 0.0); n];
    // particle 2: contiguous rows
    for l1 in 0..n {
        apply_h_sv(params, f, &psi[l1 * n..(l1 + 1) * n], &mut row_out);
        out[l1 * n..(l1 + 1) * n].copy_from_slice(&row_out);
    }
    // particle 1: strided columns
    for l2 in 0..n {
        for l1 in 0..n {
            row_in[l1] = psi[l1 * n + l2];
        }
        apply_h_sv(params, f, &row_in, &mut row_out);
        for l1 in 0..n {
            out[l1 * n + l2] += row_out[l1];
        }
    }
    for l in 0..n {
        out[l * n + l] += psi[l * n + l] * params.v;
    }
    out.iter_mut().for_each(|z| *z *= C64::new(0.0, -1.0));
    out
}

enum Engine {
    Trotter { particles: usize, gamma: usize, fixed: Option<Circuit> },
    Dense { fixed: Option<DenseOperator> },
    Rk4,
}

impl Engine {
    fn new(particles: usize, params: &ModelParams, plan: &EvolutionPlan) -> Result<Self> {
        let stat = params.is_static();
        Ok(match plan.stepper {
            Stepper::Trotter1 => {
                let gamma = params.require_gamma()?;
                let fixed = if stat { Some(trotter_circuit(particles, params, 0.0, plan.dt)?) } else { None };
                Engine::Trotter { particles, gamma, fixed }
            }
            Stepper::ExactDense => {
                let fixed = if stat { Some(dense_step(particles, params, 0.0, plan.dt)?) } else { None };
                Engine::Dense { fixed }
            }
            Stepper::OdeRk4 => Engine::Rk4,
        })
    }

    fn step(&self, psi: Vec<C64>, k: usize, params: &ModelParams, plan: &EvolutionPlan, particles: usize) -> Result<Vec<C64>> {
        let t_sample = plan.sample_time(k);
        match self {
            Engine::Trotter { particles, gamma, fixed } => {
                let owned;
                let circuit = match fixed {
                    Some(c) => c,
                    None => {
                        owned = trotter_circuit(*particles, params, t_sample, plan.dt)?;
                        &owned
                    }
                };
                let mut sv = Statevector::from_amplitudes(*particles, *gamma, psi)?;
                circuit.apply(&mut sv)?;
                Ok(sv.into_amplitudes())
            }
            Engine::Dense { fixed } => {
                let owned;
                let u = match fixed {
                    Some(u) => u,
                    None => {
                        owned = dense_step(particles, params, t_sample, plan.dt)?;
                        &owned
                    }
                };
                Ok(dense::mat_vec(u, &psi))
            }
            Engine::Rk4 => {
                let t0 = (k - 1) as f64 * plan.dt;
                let rhs = if particles == 1 { ode_rhs } else { ode_rhs_two };
                Ok(rk4_step(&psi, t0, plan.dt, |y, t| rhs(y, t, params)))
            }
        }
    }
}

fn trotter_circuit(particles: usize, params: &ModelParams, t: f64, dt: f64) -> Result<Circuit> {
    if particles == 1 {
        build_trotter_step(params, t, dt)
    } else {
        build_two_particle_step(params, t, dt)
    }
}

fn dense_step(particles: usize, params: &ModelParams, t: f64, dt: f64) -> Result<DenseOperator> {
    let h = if particles == 1 { dense::h_sv(params, t) } else { dense::h_two(params, t) };
    Ok(SpectralPropagator::new(&h)?.unitary(dt))
}

fn rk4_step(y: &[C64], t: f64, dt: f64, f: impl Fn(&[C64], f64) -> Vec<C64>) -> Vec<C64> {
    let axpy = |k: &[C64], h: f64| -> Vec<C64> { y.iter().zip(k).map(|(a, b)| a + b * h).collect() };
    let k1 = f(y, t);
    let k2 = f(&axpy(&k1, dt / 2.0), t + dt / 2.0);
    let k3 = f(&axpy(&k2, dt / 2.0), t + dt / 2.0);
    let k4 = f(&axpy(&k3, dt), t + dt);
    (0..y.len()).map(|i| y[i] + (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (dt / 6.0)).collect()
}

/// Recorded evolution. `probabilities[k]` and (with full storage)
/// `states[k]` belong to `times[k] = k·dt`.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub params: ModelParams,
    pub plan: EvolutionPlan,
    pub n_sites: usize,
    pub particles: usize,
    pub times: Vec<f64>,
    pub probabilities: Vec<Vec<f64>>,
    pub states: Vec<Vec<C64>>,
    pub final_state: SiteState,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn state(&self, k: usize) -> Option<SiteState> {
        self.states.get(k).map(|a| SiteState { n_sites: self.n_sites, particles: self.particles, amplitudes: a.clone() })
    }

    /// `t,l,re,im,prob` for one particle and `t,l1,l2,prob` for two. With
    /// observables-only storage the single-particle form drops `re,im`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let n = self.n_sites;
        let full = !self.states.is_empty();
        match (self.particles, full) {
            (1, true) => writeln!(w, "t,l,re,im,prob")?,
            (1, false) => writeln!(w, "t,l,prob")?,
            _ => writeln!(w, "t,l1,l2,prob")?,
        }
        for (k, (t, probs)) in self.times.iter().zip(&self.probabilities).enumerate() {
            for (i, p) in probs.iter().enumerate() {
                if self.particles == 2 {
                    writeln!(w, "{t},{},{},{p}", i / n, i % n)?;
                } else if full {
                    let a = self.states[k][i];
                    writeln!(w, "{t},{i},{},{},{p}", a.re, a.im)?;
                } else {
                    writeln!(w, "{t},{i},{p}")?;
                }
            }
        }
        Ok(())
    }
}

/// Evolves `initial` for `plan.n_steps` steps, recording every step.
pub fn run(initial: &SiteState, params: &ModelParams, plan: &EvolutionPlan) -> Result<Trajectory> {
    params.validate()?;
    plan.validate()?;
    if initial.n_sites != params.n_sites {
        return Err(Error::DimensionMismatch { expected: params.n_sites, got: initial.n_sites });
    }
    let particles = initial.particles;
    let engine = Engine::new(particles, params, plan)?;
    let full = plan.storage == Storage::FullState;
    let mut traj = Trajectory {
        params: *params,
        plan: *plan,
        n_sites: initial.n_sites,
        particles,
        times: Vec::with_capacity(plan.n_steps + 1),
        probabilities: Vec::with_capacity(plan.n_steps + 1),
        states: Vec::new(),
        final_state: initial.clone(),
    };
    let record = |traj: &mut Trajectory, t: f64, psi: &[C64]| {
        traj.times.push(t);
        traj.probabilities.push(psi.iter().map(|a| a.norm_sqr()).collect());
        if full {
            traj.states.push(psi.to_vec());
        }
    };
    let mut psi = initial.amplitudes.clone();
    record(&mut traj, 0.0, &psi);
    for k in 1..=plan.n_steps {
        psi = engine.step(psi, k, params, plan, particles)?;
        if psi.iter().any(|a| !(a.re.is_finite() && a.im.is_finite())) {
            return Err(Error::NonFinite { step: k });
        }
        record(&mut traj, k as f64 * plan.dt, &psi);
    }
    traj.final_state.amplitudes = psi;
    Ok(traj)
}
