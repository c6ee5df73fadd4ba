//! Gravitational-decoherence envelope of an N-particle superposition over a
//! laboratory time grid, plus the derived coupling and magnitude estimates.
//!
//! Inputs are laboratory units (cm, s); conversion to natural units uses
//! 1 s = 1.519e24 GeV⁻¹ and 1 cm = 5.068e13 GeV⁻¹.

use decoherence_core::foam::{
    coupling_estimate, delta_h_magnitude, envelope_exponent, wormhole_envelope, FoamParams,
    CM_IN_INV_GEV, DEFAULT_PLANCK_MASS, SECOND_IN_INV_GEV,
};

use crate::config::{Params, ScenarioConfig};
use crate::error::{invalid, numerical, CliError};
use crate::table::{Table, Value};

use super::{format_param, Metadata, ScenarioOutput};

const EQUATIONS: &[&str] =
    &["Eq. (decohmoha)", "Eq. (wormholes)", "Eq. (fourfermi)", "Eq. (order)"];

pub fn run(config: &ScenarioConfig) -> Result<ScenarioOutput, CliError> {
    let mut params = Params::new(&config.parameters);
    let n_particles = params.f64_or("n_particles", 1e23)?;
    let particle_mass = params.f64_or("particle_mass_gev", 0.938)?;
    let planck_mass = params.f64_or("planck_mass_gev", DEFAULT_PLANCK_MASS)?;
    let coupling_override = params.opt_f64("coupling_d_gev3")?;
    let separation_cm = params.f64_or("separation_cm", 1.0)?;
    let t_max_s = params.f64_or("t_max_s", 1.0)?;
    let n_points = params.usize_or("n_points", 50)?;
    let energy_scale = params.f64_or("energy_scale_gev", 0.497648)?;
    params.finish()?;

    if separation_cm < 0.0 {
        return Err(CliError::validation("separation_cm must be non-negative"));
    }
    if t_max_s <= 0.0 || n_points < 2 {
        return Err(CliError::validation("need t_max_s > 0 and at least 2 points"));
    }
    let coupling_d = match coupling_override {
        Some(d) if d > 0.0 => d,
        Some(d) => return Err(CliError::validation(format!("coupling must be positive, got {d}"))),
        None => coupling_estimate(particle_mass, planck_mass).map_err(invalid)?,
    };
    let foam = FoamParams { n_particles, coupling_d, planck_mass, particle_mass };
    foam.validate().map_err(invalid)?;

    let separation = separation_cm * CM_IN_INV_GEV;
    let delta_h = delta_h_magnitude(energy_scale, planck_mass).map_err(invalid)?;

    let mut table = Table::new(["t_s", "exponent", "envelope"]);
    for k in 0..n_points {
        let t_s = t_max_s * k as f64 / (n_points - 1) as f64;
        let t = t_s * SECOND_IN_INV_GEV;
        let exponent = envelope_exponent(n_particles, coupling_d, separation, t);
        let envelope = wormhole_envelope(n_particles, coupling_d, separation, t)
            .map_err(numerical)?;
        table.push_row(vec![
            Value::Float(t_s),
            Value::Float(exponent),
            Value::Float(envelope),
        ]);
    }

    let parameters = vec![
        ("n_particles".to_string(), format_param(n_particles)),
        ("particle_mass_gev".to_string(), format_param(particle_mass)),
        ("planck_mass_gev".to_string(), format_param(planck_mass)),
        ("coupling_d_gev3".to_string(), format_param(coupling_d)),
        ("separation_cm".to_string(), format_param(separation_cm)),
        ("t_max_s".to_string(), format_param(t_max_s)),
        ("n_points".to_string(), n_points.to_string()),
        ("energy_scale_gev".to_string(), format_param(energy_scale)),
        ("derived_delta_h_gev".to_string(), format_param(delta_h)),
    ];

    Ok(ScenarioOutput {
        metadata: Metadata {
            scenario: "foam-estimate",
            equations: EQUATIONS,
            parameters,
            seed: config.seed,
        },
        table,
    })
}
