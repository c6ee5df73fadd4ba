//! Scenario dispatch and deterministic rendering.
//!
//! Every scenario resolves its parameters (rejecting unknown keys and
//! validating module preconditions before any computation), runs the physics
//! and returns a [`Table`] plus a metadata header naming the equation tags
//! it exercises and every resolved parameter value. Identical configs and
//! seeds produce byte-identical artifacts.

mod cavity_cat;
mod cavity_spectrum;
mod foam_estimate;
mod kaon_asymmetry;
mod kaon_scan;
mod lindblad_evolve;
mod qsd_compare;

use serde_json::{json, Map, Value as JsonValue};

use crate::config::{OutputFormat, Scenario, ScenarioConfig};
use crate::error::CliError;
use crate::table::Table;

/// Header recorded with every artifact: scenario name, exercised equation
/// tags, resolved parameters (in declaration order) and the seed, if any.
#[derive(Debug, Clone)]
pub struct Metadata {
    pub scenario: &'static str,
    pub equations: &'static [&'static str],
    pub parameters: Vec<(String, String)>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct ScenarioOutput {
    pub metadata: Metadata,
    pub table: Table,
}

pub fn run(config: &ScenarioConfig) -> Result<ScenarioOutput, CliError> {
    match config.scenario {
        Scenario::CavitySpectrum => cavity_spectrum::run(config),
        Scenario::CavityCat => cavity_cat::run(config),
        Scenario::LindbladEvolve => lindblad_evolve::run(config),
        Scenario::QsdCompare => qsd_compare::run(config),
        Scenario::KaonAsymmetry => kaon_asymmetry::run(config),
        Scenario::KaonScan => kaon_scan::run(config),
        Scenario::FoamEstimate => foam_estimate::run(config),
    }
}

/// Renders the artifact bytes: CSV with a `#`-commented header, or a JSON
/// object {"metadata": …, "records": …}.
pub fn render(output: &ScenarioOutput, format: OutputFormat) -> Vec<u8> {
    match format {
        OutputFormat::Csv => {
            let mut text = String::new();
            text.push_str(&format!("# scenario: {}\n", output.metadata.scenario));
            text.push_str(&format!("# equations: {}\n", output.metadata.equations.join(", ")));
            if let Some(seed) = output.metadata.seed {
                text.push_str(&format!("# seed: {seed}\n"));
            }
            for (key, value) in &output.metadata.parameters {
                text.push_str(&format!("# parameter {key} = {value}\n"));
            }
            text.push_str(&output.table.to_csv());
            text.into_bytes()
        }
        OutputFormat::Json => {
            let mut params = Map::new();
            for (key, value) in &output.metadata.parameters {
                params.insert(key.clone(), JsonValue::String(value.clone()));
            }
            let mut metadata = Map::new();
            metadata.insert("scenario".into(), json!(output.metadata.scenario));
            metadata.insert("equations".into(), json!(output.metadata.equations));
            if let Some(seed) = output.metadata.seed {
                metadata.insert("seed".into(), json!(seed));
            }
            metadata.insert("parameters".into(), JsonValue::Object(params));
            let document = json!({
                "metadata": JsonValue::Object(metadata),
                "records": output.table.to_json_records(),
            });
            let mut text = serde_json::to_string_pretty(&document).expect("document encodes");
            text.push('\n');
            text.into_bytes()
        }
    }
}

/// Runs a scenario and renders the final artifact bytes.
pub fn run_to_bytes(config: &ScenarioConfig) -> Result<Vec<u8>, CliError> {
    let output = run(config)?;
    Ok(render(&output, config.format))
}

pub(crate) fn format_param(value: f64) -> String {
    crate::table::format_float(value)
}

/// Evenly spaced grid from 0 to `t_max` inclusive.
pub(crate) fn time_grid(t_max: f64, n_points: usize) -> Result<Vec<f64>, CliError> {
    if n_points < 2 {
        return Err(CliError::validation("need at least 2 grid points"));
    }
    if t_max <= 0.0 || t_max.is_nan() {
        return Err(CliError::validation(format!("grid end must be positive, got {t_max}")));
    }
    Ok((0..n_points).map(|k| t_max * k as f64 / (n_points - 1) as f64).collect())
}
