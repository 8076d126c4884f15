//! Run configuration: TOML with one table per concern.
//!
//! ```toml
//! scenario = "single-trotter"
//!
//! [model]            # defaults: n_sites 4, delta_a 5, delta_b 1, f_dc 1.5
//! n_sites = 4        # or gamma = 2
//!
//! [plan]             # defaults: dt 0.02, n_steps 100
//! dt = 0.02
//!
//! [initial]
//! kind = "spike"     # spike | gaussian | spike2
//! site = 2
//! ```
//!
//! Scenario-specific tables: `[spectrum]`, `[ladder]`, `[dispersion]`,
//! `[two_particle]`, `[dim2]`. Unknown keys are rejected everywhere.

use std::fmt;

use blochsim_core::evolve::{EvolutionPlan, FieldSampling, InitialKind, Stepper, Storage};
use blochsim_core::ModelParams;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{0}")]
    Parse(String),
    #[error("{field}: {message}")]
    Invalid { field: String, message: String },
    #[error("override `{0}`: expected key=value")]
    Override(String),
}

fn invalid(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid { field: field.into(), message: message.into() }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    SingleExact,
    SingleTrotter,
    SingleOde,
    TwoParticle,
    Spectrum,
    Dispersion,
    Ladder,
    TranspileReport,
    BesselCheck,
    Dim2,
}

impl Scenario {
    /// Stepper implied by the scenario name, if any.
    fn implied_stepper(self) -> Option<Stepper> {
        match self {
            Scenario::SingleExact | Scenario::BesselCheck => Some(Stepper::ExactDense),
            Scenario::SingleTrotter => Some(Stepper::Trotter1),
            Scenario::SingleOde => Some(Stepper::OdeRk4),
            _ => None,
        }
    }

    fn needs_register(self, stepper: Stepper) -> bool {
        matches!(self, Scenario::SingleTrotter | Scenario::TranspileReport) || (self == Scenario::TwoParticle && stepper == Stepper::Trotter1)
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default();
        f.write_str(&s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<usize>,
    pub n_sites: Option<usize>,
    pub delta_a: f64,
    pub delta_b: f64,
    pub f_dc: f64,
    pub f_ac: f64,
    pub omega: f64,
    pub v: f64,
}

impl Default for ModelSection {
    fn default() -> Self {
        Self { gamma: None, n_sites: None, delta_a: 5.0, delta_b: 1.0, f_dc: 1.5, f_ac: 0.0, omega: 0.0, v: 0.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlanSection {
    pub dt: f64,
    pub n_steps: usize,
    pub stepper: Option<Stepper>,
    pub sampling: FieldSampling,
    pub storage: Storage,
}

impl Default for PlanSection {
    fn default() -> Self {
        Self { dt: 0.02, n_steps: 100, stepper: None, sampling: FieldSampling::EndOfStep, storage: Storage::FullState }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialName {
    Spike,
    Gaussian,
    Spike2,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InitialSection {
    pub kind: Option<InitialName>,
    pub site: Option<usize>,
    pub site1: Option<usize>,
    pub site2: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub dir: String,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { dir: "blochsim-out".into() }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumSection {
    /// Constant fields to diagonalize at; empty means `model.f_dc`.
    pub fields: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LadderSection {
    pub alpha_min: i64,
    pub alpha_max: i64,
}

impl Default for LadderSection {
    fn default() -> Self {
        Self { alpha_min: -2, alpha_max: 12 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DispersionSection {
    pub points: usize,
}

impl Default for DispersionSection {
    fn default() -> Self {
        Self { points: 201 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TwoParticleSection {
    /// Site pair whose `|ψ(l₁, l₂)|` goes to `series.csv`.
    pub track: [usize; 2],
}

impl Default for TwoParticleSection {
    fn default() -> Self {
        Self { track: [1, 2] }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Dim2Section {
    pub n_sites: usize,
    pub delta_a: f64,
    pub delta_b: f64,
    pub f_dc: f64,
    pub initial: InitialSection,
}

impl Default for Dim2Section {
    fn default() -> Self {
        Self { n_sites: 8, delta_a: 5.0, delta_b: 1.0, f_dc: 0.7, initial: InitialSection::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: Scenario,
    #[serde(default)]
    pub model: ModelSection,
    #[serde(default)]
    pub plan: PlanSection,
    #[serde(default)]
    pub initial: InitialSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub spectrum: SpectrumSection,
    #[serde(default)]
    pub ladder: LadderSection,
    #[serde(default)]
    pub dispersion: DispersionSection,
    #[serde(default)]
    pub two_particle: TwoParticleSection,
    #[serde(default)]
    pub dim2: Dim2Section,
}

impl RunConfig {
    pub fn params(&self) -> ModelParams {
        let m = &self.model;
        ModelParams {
            delta_a: m.delta_a,
            delta_b: m.delta_b,
            f_dc: m.f_dc,
            f_ac: m.f_ac,
            omega: m.omega,
            v: m.v,
            n_sites: m.n_sites.unwrap_or(4),
        }
    }

    pub fn params_y(&self) -> ModelParams {
        let d = &self.dim2;
        ModelParams { delta_a: d.delta_a, delta_b: d.delta_b, f_dc: d.f_dc, f_ac: 0.0, omega: 0.0, v: 0.0, n_sites: d.n_sites }
    }

    pub fn stepper(&self) -> Stepper {
        self.plan.stepper.or(self.scenario.implied_stepper()).unwrap_or(Stepper::Trotter1)
    }

    pub fn plan(&self) -> EvolutionPlan {
        EvolutionPlan {
            dt: self.plan.dt,
            n_steps: self.plan.n_steps,
            stepper: self.stepper(),
            sampling: self.plan.sampling,
            storage: self.plan.storage,
        }
    }

    pub fn initial_kind(&self) -> InitialKind {
        resolve_initial(&self.initial, self.scenario, self.params().n_sites)
    }

    pub fn initial_kind_y(&self) -> InitialKind {
        resolve_initial(&self.dim2.initial, Scenario::BesselCheck, self.dim2.n_sites)
    }

    fn validate(mut self) -> Result<Self, ConfigError> {
        let n = match (self.model.gamma, self.model.n_sites) {
            (Some(g), Some(n)) if g >= usize::BITS as usize || n != 1 << g => {
                return Err(invalid("model.n_sites", format!("{n} does not equal 2^gamma with gamma = {g}")));
            }
            (Some(g), None) if g >= 31 => return Err(invalid("model.gamma", format!("{g} is too large"))),
            (Some(g), None) => 1 << g,
            (_, Some(n)) => n,
            (None, None) => 4,
        };
        self.model.n_sites = Some(n);
        let params = self.params();
        params.validate().map_err(|e| invalid("model", e.to_string()))?;
        if !(self.plan.dt > 0.0 && self.plan.dt.is_finite()) {
            return Err(invalid("plan.dt", format!("{} must be positive and finite", self.plan.dt)));
        }
        if let (Some(implied), Some(given)) = (self.scenario.implied_stepper(), self.plan.stepper) {
            if implied != given {
                return Err(invalid("plan.stepper", format!("{given:?} conflicts with scenario {}", self.scenario)));
            }
        }
        if self.scenario.needs_register(self.stepper()) && !n.is_power_of_two() {
            return Err(invalid("model.n_sites", format!("{n} is not a power of two, required by scenario {}", self.scenario)));
        }
        check_initial(&self.initial, self.scenario, n, "initial")?;
        match self.scenario {
            Scenario::BesselCheck if self.plan.storage == Storage::ObservablesOnly => {
                return Err(invalid("plan.storage", "bessel-check compares amplitudes and needs full-state"));
            }
            Scenario::BesselCheck if self.model.delta_a != self.model.delta_b => {
                return Err(invalid("model.delta_b", "bessel-check needs delta_a == delta_b"));
            }
            Scenario::BesselCheck | Scenario::Ladder if !(self.model.f_dc > 0.0) => {
                return Err(invalid("model.f_dc", format!("{} must be positive for scenario {}", self.model.f_dc, self.scenario)));
            }
            Scenario::Ladder if self.ladder.alpha_min > self.ladder.alpha_max => {
                return Err(invalid("ladder.alpha_min", "must not exceed ladder.alpha_max"));
            }
            Scenario::Dispersion if self.dispersion.points < 2 => {
                return Err(invalid("dispersion.points", "need at least 2"));
            }
            Scenario::TwoParticle => {
                if let Some(bad) = self.two_particle.track.iter().find(|&&l| l >= n) {
                    return Err(invalid("two_particle.track", format!("site {bad} outside 0..{n}")));
                }
            }
            Scenario::Dim2 => {
                self.params_y().validate().map_err(|e| invalid("dim2", e.to_string()))?;
                if n * self.dim2.n_sites > 4096 {
                    return Err(invalid("dim2.n_sites", "N_x·N_y above 4096 is beyond the dense oracle"));
                }
                check_initial(&self.dim2.initial, Scenario::BesselCheck, self.dim2.n_sites, "dim2.initial")?;
            }
            _ => {}
        }
        Ok(self)
    }
}

fn resolve_initial(s: &InitialSection, scenario: Scenario, n: usize) -> InitialKind {
    let default_kind = match scenario {
        Scenario::TwoParticle => InitialName::Spike2,
        _ => InitialName::Spike,
    };
    let default_site = if scenario == Scenario::BesselCheck { n / 2 } else { 2.min(n - 1) };
    match s.kind.unwrap_or(default_kind) {
        InitialName::Spike => InitialKind::Spike { site: s.site.unwrap_or(default_site) },
        InitialName::Gaussian => InitialKind::Gaussian,
        InitialName::Spike2 => InitialKind::Spike2 { site1: s.site1.unwrap_or(1), site2: s.site2.unwrap_or(2.min(n - 1)) },
    }
}

fn check_initial(s: &InitialSection, scenario: Scenario, n: usize, prefix: &str) -> Result<(), ConfigError> {
    let kind = resolve_initial(s, scenario, n);
    let sites: Vec<(&str, usize)> = match kind {
        InitialKind::Spike { site } => vec![("site", site)],
        InitialKind::Spike2 { site1, site2 } => vec![("site1", site1), ("site2", site2)],
        InitialKind::Gaussian => vec![],
    };
    for (name, site) in sites {
        if site >= n {
            return Err(invalid(&format!("{prefix}.{name}"), format!("{site} outside 0..{n}")));
        }
    }
    let two = matches!(kind, InitialKind::Spike2 { .. });
    if two != (scenario == Scenario::TwoParticle) {
        return Err(invalid(&format!("{prefix}.kind"), format!("{kind:?} does not fit scenario {scenario}")));
    }
    Ok(())
}

fn apply_override(table: &mut toml::Table, arg: &str) -> Result<(), ConfigError> {
    let (key, raw) = arg.split_once('=').ok_or_else(|| ConfigError::Override(arg.into()))?;
    let key = key.trim();
    if key.is_empty() {
        return Err(ConfigError::Override(arg.into()));
    }
    // a bare word that is not valid TOML is taken as a string
    let value = format!("v = {}", raw.trim())
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.trim().to_string()));
    let mut parts: Vec<&str> = key.split('.').collect();
    let last = parts.pop().expect("split yields at least one part");
    let mut node = table;
    for part in parts {
        let entry = node.entry(part.to_string()).or_insert_with(|| toml::Value::Table(toml::Table::new()));
        node = entry.as_table_mut().ok_or_else(|| invalid(key, format!("`{part}` is not a table")))?;
    }
    node.insert(last.to_string(), value);
    Ok(())
}

/// Parses, applies `key=value` overrides (dotted keys), fills defaults and
/// validates.
pub fn parse_config(text: &str, overrides: &[String]) -> Result<RunConfig, ConfigError> {
    let config: RunConfig = if overrides.is_empty() {
        toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?
    } else {
        let mut table: toml::Table = text.parse().map_err(|e: toml::de::Error| ConfigError::Parse(e.to_string()))?;
        for o in overrides {
            apply_override(&mut table, o)?;
        }
        table.try_into().map_err(|e: toml::de::Error| ConfigError::Parse(e.to_string()))?
    };
    config.validate()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_trotter_config() {
        let c = parse_config("scenario = \"single-trotter\"\n", &[]).unwrap();
        let p = c.params();
        assert_eq!((p.delta_a, p.delta_b, p.f_dc, p.n_sites), (5.0, 1.0, 1.5, 4));
        assert_eq!(c.plan.dt, 0.02);
        assert_eq!(c.stepper(), Stepper::Trotter1);
        assert_eq!(c.initial_kind(), InitialKind::Spike { site: 2 });
    }

    #[test]
    fn empty_scenario_names_the_field() {
        let err = parse_config("scenario = \"\"\n", &[]).unwrap_err().to_string();
        assert!(err.contains("scenario"), "{err}");
        let err = parse_config("[model]\nn_sites = 4\n", &[]).unwrap_err().to_string();
        assert!(err.contains("scenario"), "{err}");
    }

    #[test]
    fn gamma_and_sites_must_agree() {
        let err = parse_config("scenario = \"single-trotter\"\n[model]\ngamma = 2\nn_sites = 5\n", &[]).unwrap_err();
        assert!(err.to_string().starts_with("model.n_sites"));
        let c = parse_config("scenario = \"single-trotter\"\n[model]\ngamma = 3\n", &[]).unwrap();
        assert_eq!(c.params().n_sites, 8);
    }

    #[test]
    fn circuit_scenarios_need_power_of_two() {
        let text = "scenario = \"single-trotter\"\n[model]\nn_sites = 6\n";
        assert!(parse_config(text, &[]).unwrap_err().to_string().contains("power of two"));
        let text = "scenario = \"single-exact\"\n[model]\nn_sites = 6\n";
        assert!(parse_config(text, &[]).is_ok());
    }

    #[test]
    fn dt_must_be_positive() {
        for dt in ["0.0", "-0.1"] {
            let text = format!("scenario = \"single-ode\"\n[plan]\ndt = {dt}\n");
            assert!(parse_config(&text, &[]).unwrap_err().to_string().starts_with("plan.dt"));
        }
    }

    #[test]
    fn unknown_keys_rejected_with_line() {
        let err = parse_config("scenario = \"single-exact\"\n[model]\ndelta_c = 1.0\n", &[]).unwrap_err().to_string();
        assert!(err.contains("delta_c"), "{err}");
        assert!(err.contains("line 3"), "{err}");
    }

    #[test]
    fn overrides_apply_dotted_keys() {
        let c = parse_config(
            "scenario = \"single-exact\"\n",
            &["model.f_dc=0.5".into(), "plan.n_steps = 7".into(), "initial.kind=gaussian".into()],
        )
        .unwrap();
        assert_eq!(c.params().f_dc, 0.5);
        assert_eq!(c.plan.n_steps, 7);
        assert_eq!(c.initial_kind(), InitialKind::Gaussian);
        assert!(matches!(parse_config("scenario = \"single-exact\"\n", &["nonsense".into()]), Err(ConfigError::Override(_))));
        assert!(parse_config("scenario = \"single-exact\"\n", &["model.bogus=1".into()]).is_err());
    }

    #[test]
    fn stepper_conflicts_and_initial_checks() {
        assert!(parse_config("scenario = \"single-exact\"\n[plan]\nstepper = \"ode-rk4\"\n", &[]).is_err());
        assert!(parse_config("scenario = \"single-exact\"\n[initial]\nsite = 9\n", &[]).is_err());
        assert!(parse_config("scenario = \"two-particle\"\n[initial]\nkind = \"spike\"\n", &[]).is_err());
        let c = parse_config("scenario = \"two-particle\"\n[model]\nv = 10.0\n", &[]).unwrap();
        assert_eq!(c.initial_kind(), InitialKind::Spike2 { site1: 1, site2: 2 });
        assert!(parse_config("scenario = \"bessel-check\"\n", &[]).is_err());
    }
}
