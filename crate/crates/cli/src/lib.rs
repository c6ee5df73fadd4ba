//! Library surface of the batch front end, exposed for integration tests:
//! config handling, scenario execution and table rendering.

pub mod config;
pub mod error;
pub mod scenarios;
pub mod table;

pub use config::{build_config, OutputFormat, Scenario, ScenarioConfig};
pub use error::CliError;
pub use scenarios::{run, run_to_bytes};
