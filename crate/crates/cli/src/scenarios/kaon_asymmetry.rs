//! Tagged-kaon decay asymmetries over a time grid in units of τ_S, with
//! trace/purity/entropy diagnostics of the K⁰-tagged state.
//!
//! Presets: "cplear-bounds" (published upper limits on α, β, γ) or "qm"
//! (decoherence off). Individual GeV-valued parameters override the preset.

use decoherence_core::kaon::{
    asymmetry_2pi, asymmetry_dm, evolve_kaon, preset_cplear_bounds, KaonParams, KaonState,
};
use decoherence_core::C64;

use crate::config::{Params, ScenarioConfig};
use crate::error::{invalid, numerical, CliError};
use crate::table::{Table, Value};

use super::{format_param, time_grid, Metadata, ScenarioOutput};

const EQUATIONS: &[&str] = &[
    "Eq. (nqmevol)",
    "Eq. (deltah)",
    "Eq. (positiv)",
    "Eq. (twopiasy)",
    "Eq. (deltamasy)",
    "Eq. (bounds)",
];

/// Shared by kaon-asymmetry and kaon-scan: preset plus overrides.
pub(super) fn resolve_params(params: &mut Params) -> Result<KaonParams, CliError> {
    let preset = params.string_or("preset", "cplear-bounds")?;
    let mut kaon = match preset.as_str() {
        "cplear-bounds" => preset_cplear_bounds(),
        "qm" => KaonParams::qm_defaults(),
        other => {
            return Err(CliError::validation(format!(
                "unknown preset '{other}' (expected cplear-bounds or qm)"
            )))
        }
    };
    if let Some(v) = params.opt_f64("gamma_s_gev")? {
        kaon.gamma_s = v;
    }
    if let Some(v) = params.opt_f64("gamma_l_gev")? {
        kaon.gamma_l = v;
    }
    if let Some(v) = params.opt_f64("delta_m_gev")? {
        kaon.delta_m = v;
    }
    let eps_re = params.opt_f64("epsilon_re")?;
    let eps_im = params.opt_f64("epsilon_im")?;
    if eps_re.is_some() || eps_im.is_some() {
        kaon.epsilon = C64::new(eps_re.unwrap_or(kaon.epsilon.re), eps_im.unwrap_or(0.0));
    }
    if let Some(v) = params.opt_f64("alpha_gev")? {
        kaon.alpha = v;
    }
    if let Some(v) = params.opt_f64("beta_gev")? {
        kaon.beta = v;
    }
    if let Some(v) = params.opt_f64("gamma_gev")? {
        kaon.gamma = v;
    }
    Ok(kaon)
}

pub(super) fn describe_params(kaon: &KaonParams) -> Vec<(String, String)> {
    vec![
        ("gamma_s_gev".to_string(), format_param(kaon.gamma_s)),
        ("gamma_l_gev".to_string(), format_param(kaon.gamma_l)),
        ("delta_m_gev".to_string(), format_param(kaon.delta_m)),
        ("epsilon_re".to_string(), format_param(kaon.epsilon.re)),
        ("epsilon_im".to_string(), format_param(kaon.epsilon.im)),
        ("alpha_gev".to_string(), format_param(kaon.alpha)),
        ("beta_gev".to_string(), format_param(kaon.beta)),
        ("gamma_gev".to_string(), format_param(kaon.gamma)),
    ]
}

pub fn run(config: &ScenarioConfig) -> Result<ScenarioOutput, CliError> {
    let mut params = Params::new(&config.parameters);
    let kaon = resolve_params(&mut params)?;
    let t_max_tau_s = params.f64_or("t_max_tau_s", 20.0)?;
    let n_points = params.usize_or("n_points", 400)?;
    params.finish()?;
    kaon.validate().map_err(invalid)?;

    let tau = kaon.tau_s();
    let times_tau = time_grid(t_max_tau_s, n_points)?;
    let times_gev: Vec<f64> = times_tau.iter().map(|t| t * tau).collect();

    let a_2pi = asymmetry_2pi(&kaon, &times_gev).map_err(numerical)?;
    let a_dm = asymmetry_dm(&kaon, &times_gev).map_err(numerical)?;
    let tagged = evolve_kaon(&kaon, &KaonState::pure_k0(), &times_gev).map_err(numerical)?;

    let mut table = Table::new(["t_over_tau_s", "a_2pi", "a_dm", "trace", "purity", "entropy"]);
    for k in 0..times_tau.len() {
        table.push_row(vec![
            Value::Float(times_tau[k]),
            Value::Float(a_2pi[k]),
            Value::Float(a_dm[k]),
            Value::Float(tagged[k].trace()),
            Value::Float(tagged[k].purity()),
            Value::Float(tagged[k].entropy()),
        ]);
    }

    let mut parameters = describe_params(&kaon);
    parameters.push(("t_max_tau_s".to_string(), format_param(t_max_tau_s)));
    parameters.push(("n_points".to_string(), n_points.to_string()));
    // conversion factor for absolute times, via ħ in GeV·s
    parameters.push((
        "derived_tau_s_seconds".to_string(),
        format_param(decoherence_core::kaon::HBAR_GEV_SECONDS * tau),
    ));

    Ok(ScenarioOutput {
        metadata: Metadata {
            scenario: "kaon-asymmetry",
            equations: EQUATIONS,
            parameters,
            seed: config.seed,
        },
        table,
    })
}
