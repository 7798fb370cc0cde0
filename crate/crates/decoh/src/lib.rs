//! Scenario runner for `decoh-core`: TOML configs, CSV and JSON output,
//! and parallel trajectory ensembles.

pub mod catalog;
pub mod config;
pub mod error;
pub mod output;
pub mod parallel;
pub mod runner;
pub mod scenario;

pub use catalog::{list_models, models_json, models_text, ModelInfo, ParamInfo};
pub use config::{ModelKind, ScenarioConfig};
pub use error::RunError;
pub use runner::{load_config, run_file, run_scenario, validate_file, RunOptions, RunReport, Summary};
