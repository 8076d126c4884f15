//! Batch front-end: TOML run configurations in, CSV/QASM/JSON artifacts out.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod scenario;

pub use config::{parse_config, ConfigError, RunConfig, Scenario};
pub use scenario::{run_scenario, Artifacts};
