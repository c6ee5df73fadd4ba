//! Scenario configuration: JSON config files plus `--set key=value`
//! overrides, with strict unknown-key rejection.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use serde_json::{Map, Value as JsonValue};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Scenario {
    CavitySpectrum,
    CavityCat,
    LindbladEvolve,
    QsdCompare,
    KaonAsymmetry,
    KaonScan,
    FoamEstimate,
}

impl Scenario {
    pub fn name(&self) -> &'static str {
        match self {
            Scenario::CavitySpectrum => "cavity-spectrum",
            Scenario::CavityCat => "cavity-cat",
            Scenario::LindbladEvolve => "lindblad-evolve",
            Scenario::QsdCompare => "qsd-compare",
            Scenario::KaonAsymmetry => "kaon-asymmetry",
            Scenario::KaonScan => "kaon-scan",
            Scenario::FoamEstimate => "foam-estimate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn name(&self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    scenario: Option<String>,
    #[serde(default)]
    parameters: Map<String, JsonValue>,
    output: Option<RawOutput>,
    seed: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    path: Option<PathBuf>,
    format: Option<String>,
}

/// Fully resolved invocation: scenario, parameter map, output target, seed.
#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub parameters: Map<String, JsonValue>,
    pub out: PathBuf,
    pub format: OutputFormat,
    pub seed: Option<u64>,
}

/// Loads the config file, applies `--set` overrides and command-line output
/// settings (command line wins over the file).
pub fn build_config(
    scenario: Scenario,
    config_path: &Path,
    sets: &[String],
    out: Option<PathBuf>,
    format: Option<OutputFormat>,
    seed: Option<u64>,
) -> Result<ScenarioConfig, CliError> {
    let text = std::fs::read_to_string(config_path).map_err(|e| {
        CliError::validation(format!("cannot read config {}: {e}", config_path.display()))
    })?;
    let raw: RawConfig = serde_json::from_str(&text)
        .map_err(|e| CliError::validation(format!("invalid config JSON: {e}")))?;

    if let Some(named) = &raw.scenario {
        if named != scenario.name() {
            return Err(CliError::validation(format!(
                "config names scenario '{named}' but '{}' was requested",
                scenario.name()
            )));
        }
    }

    let mut parameters = raw.parameters;
    for setting in sets {
        let (key, value) = setting.split_once('=').ok_or_else(|| {
            CliError::validation(format!("--set needs KEY=VALUE, got '{setting}'"))
        })?;
        // values parse as JSON scalars where possible, else raw strings
        let parsed = serde_json::from_str::<JsonValue>(value)
            .unwrap_or_else(|_| JsonValue::String(value.to_string()));
        parameters.insert(key.to_string(), parsed);
    }

    let raw_output = raw.output.unwrap_or(RawOutput { path: None, format: None });
    let out = out.or(raw_output.path).ok_or_else(|| {
        CliError::validation("no output path: pass --out or set output.path in the config")
    })?;
    let format = match (format, raw_output.format.as_deref()) {
        (Some(f), _) => f,
        (None, Some("csv")) => OutputFormat::Csv,
        (None, Some("json")) => OutputFormat::Json,
        (None, Some(other)) => {
            return Err(CliError::validation(format!(
                "unknown output format '{other}' (expected csv or json)"
            )))
        }
        (None, None) => {
            return Err(CliError::validation(
                "no output format: pass --format or set output.format in the config",
            ))
        }
    };

    Ok(ScenarioConfig { scenario, parameters, out, format, seed: seed.or(raw.seed) })
}

/// Typed accessor over the parameter map that tracks consumed keys so
/// unknown ones are rejected.
pub struct Params<'a> {
    map: &'a Map<String, JsonValue>,
    consumed: BTreeSet<String>,
}

impl<'a> Params<'a> {
    pub fn new(map: &'a Map<String, JsonValue>) -> Self {
        Self { map, consumed: BTreeSet::new() }
    }

    fn take(&mut self, key: &str) -> Option<&'a JsonValue> {
        self.consumed.insert(key.to_string());
        self.map.get(key)
    }

    pub fn f64_or(&mut self, key: &str, default: f64) -> Result<f64, CliError> {
        match self.take(key) {
            None => Ok(default),
            Some(v) => v
                .as_f64()
                .ok_or_else(|| CliError::validation(format!("parameter '{key}' must be a number"))),
        }
    }

    pub fn opt_f64(&mut self, key: &str) -> Result<Option<f64>, CliError> {
        match self.take(key) {
            None => Ok(None),
            Some(v) => v
                .as_f64()
                .map(Some)
                .ok_or_else(|| CliError::validation(format!("parameter '{key}' must be a number"))),
        }
    }

    pub fn usize_or(&mut self, key: &str, default: usize) -> Result<usize, CliError> {
        match self.take(key) {
            None => Ok(default),
            Some(v) => v
                .as_u64()
                .map(|u| u as usize)
                .ok_or_else(|| {
                    CliError::validation(format!("parameter '{key}' must be a non-negative integer"))
                }),
        }
    }

    pub fn opt_u64(&mut self, key: &str) -> Result<Option<u64>, CliError> {
        match self.take(key) {
            None => Ok(None),
            Some(v) => v.as_u64().map(Some).ok_or_else(|| {
                CliError::validation(format!("parameter '{key}' must be a non-negative integer"))
            }),
        }
    }

    pub fn string_or(&mut self, key: &str, default: &str) -> Result<String, CliError> {
        match self.take(key) {
            None => Ok(default.to_string()),
            Some(v) => v
                .as_str()
                .map(str::to_string)
                .ok_or_else(|| CliError::validation(format!("parameter '{key}' must be a string"))),
        }
    }

    /// Rejects any parameter key that no accessor consumed.
    pub fn finish(self) -> Result<(), CliError> {
        let unknown: Vec<&String> =
            self.map.keys().filter(|k| !self.consumed.contains(*k)).collect();
        if unknown.is_empty() {
            Ok(())
        } else {
            Err(CliError::validation(format!(
                "unknown parameter(s): {}",
                unknown.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(", ")
            )))
        }
    }
}
