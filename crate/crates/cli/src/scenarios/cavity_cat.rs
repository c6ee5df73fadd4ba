//! Schrödinger-cat pointer distances and decoherence times over a grid of
//! mean photon numbers, at a fixed dephasing angle.
//!
//! Each row also reports the truncated field-component overlap and the
//! entanglement entropy of the reduced atom state from an explicitly
//! constructed cat state. When lam_khz, detuning_khz and t_int_us are all
//! given, the small-angle dispersive distance is emitted alongside.

use decoherence_core::cavity::{
    cat_distance, cat_distance_small_angle, cat_state, decoherence_time, CatParams,
};
use decoherence_core::hilbert::{coherent_state, partial_trace, von_neumann_entropy, DensityMatrix};
use decoherence_core::C64;

use crate::config::ScenarioConfig;
use crate::error::{invalid, numerical, CliError};
use crate::table::{Table, Value};

use super::{format_param, Metadata, ScenarioOutput};

const EQUATIONS: &[&str] =
    &["Eq. (super)", "Eq. (distance)", "Eq. (decoh)", "Eq. (rabiphase)"];

pub fn run(config: &ScenarioConfig) -> Result<ScenarioOutput, CliError> {
    let mut params = crate::config::Params::new(&config.parameters);
    let n_bar_min = params.f64_or("n_bar_min", 1.0)?;
    let n_bar_max = params.f64_or("n_bar_max", 20.0)?;
    let n_points = params.usize_or("n_points", 20)?;
    let phi_rad = params.f64_or("phi_rad", std::f64::consts::FRAC_PI_2)?;
    let t_r = params.f64_or("t_r", 1.0)?;
    let lam_khz = params.opt_f64("lam_khz")?;
    let detuning_khz = params.opt_f64("detuning_khz")?;
    let t_int_us = params.opt_f64("t_int_us")?;
    params.finish()?;

    if n_points < 1 {
        return Err(CliError::validation("need at least one grid point"));
    }
    if n_bar_min < 0.0 || n_bar_max < n_bar_min {
        return Err(CliError::validation("need 0 ≤ n_bar_min ≤ n_bar_max"));
    }
    let dispersive = match (lam_khz, detuning_khz, t_int_us) {
        (Some(l), Some(d), Some(t)) => {
            if d == 0.0 {
                return Err(CliError::validation("detuning_khz must be nonzero"));
            }
            // kHz → angular (×2π, per-ms units), µs → ms
            Some((std::f64::consts::TAU * l, std::f64::consts::TAU * d, t / 1000.0))
        }
        (None, None, None) => None,
        _ => {
            return Err(CliError::validation(
                "lam_khz, detuning_khz and t_int_us must be given together",
            ))
        }
    };
    let truncation_for = |n_bar: f64| (4.0 * n_bar + 10.0).ceil() as usize;
    let worst = truncation_for(n_bar_max);
    if 2 * (worst + 1) > decoherence_core::hilbert::DIM_CAP {
        return Err(CliError::validation(format!(
            "n_bar_max {n_bar_max} needs field truncation {worst}, beyond the dimension cap"
        )));
    }
    CatParams {
        n_bar: n_bar_min,
        phi: phi_rad,
        t_r,
        lam: dispersive.map_or(0.0, |d| d.0),
        detuning: dispersive.map_or(1.0, |d| d.1),
        t_int: dispersive.map_or(0.0, |d| d.2),
    }
    .validate()
    .map_err(invalid)?;

    let mut columns = vec![
        "n_bar",
        "phi_rad",
        "distance",
        "t_decoh_over_t_r",
        "overlap_abs",
        "atom_entropy",
    ];
    if dispersive.is_some() {
        columns.push("distance_small_angle");
    }
    let mut table = Table::new(columns);

    for k in 0..n_points {
        let n_bar = if n_points == 1 {
            n_bar_min
        } else {
            n_bar_min + (n_bar_max - n_bar_min) * k as f64 / (n_points - 1) as f64
        };
        let distance = cat_distance(n_bar, phi_rad);
        let t_decoh = decoherence_time(t_r, distance).map_err(numerical)?;

        let alpha = C64::from(n_bar.sqrt());
        let n_max = truncation_for(n_bar);
        let rot = C64::new(0.0, phi_rad).exp();
        let plus = coherent_state(alpha * rot, n_max).map_err(numerical)?;
        let minus = coherent_state(alpha * rot.conj(), n_max).map_err(numerical)?;
        let overlap = plus.inner(&minus).map_err(numerical)?;
        let cat = cat_state(alpha, phi_rad, n_max).map_err(numerical)?;
        let rho = DensityMatrix::from_pure(&cat).map_err(numerical)?;
        let atom = partial_trace(&rho, &[0]).map_err(numerical)?;
        let entropy = von_neumann_entropy(&atom).map_err(numerical)?;

        let mut row = vec![
            Value::Float(n_bar),
            Value::Float(phi_rad),
            Value::Float(distance),
            Value::Float(t_decoh / t_r),
            Value::Float(overlap.norm()),
            Value::Float(entropy),
        ];
        if let Some((lam, delta, t_int)) = dispersive {
            row.push(Value::Float(
                cat_distance_small_angle(n_bar, lam, t_int, delta).map_err(numerical)?,
            ));
        }
        table.push_row(row);
    }

    let mut parameters = vec![
        ("n_bar_min".to_string(), format_param(n_bar_min)),
        ("n_bar_max".to_string(), format_param(n_bar_max)),
        ("n_points".to_string(), n_points.to_string()),
        ("phi_rad".to_string(), format_param(phi_rad)),
        ("t_r".to_string(), format_param(t_r)),
    ];
    if let (Some(l), Some(d), Some(t)) = (lam_khz, detuning_khz, t_int_us) {
        parameters.push(("lam_khz".to_string(), format_param(l)));
        parameters.push(("detuning_khz".to_string(), format_param(d)));
        parameters.push(("t_int_us".to_string(), format_param(t)));
    }

    Ok(ScenarioOutput {
        metadata: Metadata {
            scenario: "cavity-cat",
            equations: EQUATIONS,
            parameters,
            seed: config.seed,
        },
        table,
    })
}
