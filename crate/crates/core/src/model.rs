use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physics configuration of the diatomic chain.
///
/// Hoppings are `Δa/4` inside a cell (sites `2n, 2n+1`) and `Δb/4` between
/// cells; the on-site potential is `l · F(t)` with
/// `F(t) = f_dc + f_ac · cos(ω t)`, and `v` is the on-site contact
/// interaction between the two particles.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub delta_a: f64,
    pub delta_b: f64,
    pub f_dc: f64,
    pub f_ac: f64,
    pub omega: f64,
    pub v: f64,
    pub n_sites: usize,
}

impl ModelParams {
    /// All couplings zero on `n_sites` sites.
    pub fn new(n_sites: usize) -> Result<Self> {
        let p = Self { delta_a: 0.0, delta_b: 0.0, f_dc: 0.0, f_ac: 0.0, omega: 0.0, v: 0.0, n_sites };
        p.validate()?;
        Ok(p)
    }

    /// `Δa = 5, Δb = 1, F = 1.5`, the parameter set used for the spike
    /// demonstrations.
    pub fn reference(n_sites: usize) -> Result<Self> {
        Ok(Self::new(n_sites)?.with_hopping(5.0, 1.0).with_field(1.5))
    }

    pub fn with_hopping(mut self, delta_a: f64, delta_b: f64) -> Self {
        self.delta_a = delta_a;
        self.delta_b = delta_b;
        self
    }

    pub fn with_field(mut self, f_dc: f64) -> Self {
        self.f_dc = f_dc;
        self
    }

    pub fn with_ac_field(mut self, f_ac: f64, omega: f64) -> Self {
        self.f_ac = f_ac;
        self.omega = omega;
        self
    }

    pub fn with_interaction(mut self, v: f64) -> Self {
        self.v = v;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_sites < 2 || !self.n_sites.is_multiple_of(2) {
            return Err(Error::InvalidParams(format!("n_sites = {} must be even and >= 2", self.n_sites)));
        }
        let values = [self.delta_a, self.delta_b, self.f_dc, self.f_ac, self.omega, self.v];
        if values.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParams("non-finite coupling".into()));
        }
        Ok(())
    }

    /// `F(t)`.
    pub fn field(&self, t: f64) -> f64 {
        self.f_dc + self.f_ac * (self.omega * t).cos()
    }

    pub fn is_static(&self) -> bool {
        self.f_ac == 0.0
    }

    /// `Γ = log2 N` when the site count is a power of two.
    pub fn gamma(&self) -> Option<usize> {
        self.n_sites.is_power_of_two().then(|| self.n_sites.trailing_zeros() as usize)
    }

    /// Qubits per register, failing for site counts that no register holds.
    pub fn require_gamma(&self) -> Result<usize> {
        self.validate()?;
        self.gamma().ok_or(Error::NotPowerOfTwo(self.n_sites))
    }
}
