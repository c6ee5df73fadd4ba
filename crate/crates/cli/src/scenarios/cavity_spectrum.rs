//! Vacuum Rabi absorption spectrum over a probe-frequency grid.
//!
//! Frequencies are configured in kHz (f = ω/2π) and converted to angular
//! units internally; the emitted grid column is again in kHz.

use decoherence_core::cavity::{absorption_spectrum, rabi_peak_positions, RabiSpectrumParams};

use crate::config::ScenarioConfig;
use crate::error::{invalid, CliError};
use crate::table::{Table, Value};

use super::{format_param, Metadata, ScenarioOutput};

const EQUATIONS: &[&str] =
    &["Eq. (suscept)", "Eq. (rabiabs)", "Eq. (rabisplitting)", "Eq. (dispersive)"];

pub fn run(config: &ScenarioConfig) -> Result<ScenarioOutput, CliError> {
    let mut params = crate::config::Params::new(&config.parameters);
    let n_atoms = params.usize_or("n_atoms", 1)?;
    let omega0_khz = params.f64_or("omega0_khz", 1000.0)?;
    let detuning_khz = params.f64_or("detuning_khz", 0.0)?;
    let lam_khz = params.f64_or("lam_khz", 24.0)?;
    let sqrt_n = (n_atoms.max(1) as f64).sqrt();
    let gamma_default = 0.02 * lam_khz * sqrt_n;
    let gamma_plus_khz = params.f64_or("gamma_plus_khz", gamma_default)?;
    let gamma_minus_khz = params.f64_or("gamma_minus_khz", gamma_default)?;
    let theta_rad = params.f64_or("theta_rad", std::f64::consts::FRAC_PI_4)?;
    let span_default = 4.0 * lam_khz * sqrt_n + 4.0 * detuning_khz.abs();
    let omega_min_khz = params.f64_or("omega_min_khz", omega0_khz - span_default)?;
    let omega_max_khz = params.f64_or("omega_max_khz", omega0_khz + span_default)?;
    let n_points = params.usize_or("n_points", 10000)?;
    params.finish()?;

    if n_points < 2 {
        return Err(CliError::validation("need at least 2 grid points"));
    }
    if omega_max_khz <= omega_min_khz {
        return Err(CliError::validation("omega_max_khz must exceed omega_min_khz"));
    }

    let two_pi = std::f64::consts::TAU;
    let spectrum_params = RabiSpectrumParams {
        gamma_plus: two_pi * gamma_plus_khz,
        gamma_minus: two_pi * gamma_minus_khz,
        detuning: two_pi * detuning_khz,
        n_atoms,
        lam: two_pi * lam_khz,
        omega0: two_pi * omega0_khz,
        theta: theta_rad,
    };
    spectrum_params.validate().map_err(invalid)?;

    let grid_khz: Vec<f64> = (0..n_points)
        .map(|k| {
            omega_min_khz + (omega_max_khz - omega_min_khz) * k as f64 / (n_points - 1) as f64
        })
        .collect();
    let grid_angular: Vec<f64> = grid_khz.iter().map(|f| two_pi * f).collect();
    let spectrum = absorption_spectrum(&spectrum_params, &grid_angular);

    let mut table = Table::new(["omega_khz", "im_chi"]);
    for (f, s) in grid_khz.iter().zip(&spectrum) {
        table.push_row(vec![Value::Float(*f), Value::Float(*s)]);
    }

    let (peak_lower, peak_upper) = rabi_peak_positions(
        spectrum_params.omega0,
        spectrum_params.detuning,
        spectrum_params.lam,
        n_atoms,
    );
    let parameters = vec![
        ("n_atoms".to_string(), n_atoms.to_string()),
        ("omega0_khz".to_string(), format_param(omega0_khz)),
        ("detuning_khz".to_string(), format_param(detuning_khz)),
        ("lam_khz".to_string(), format_param(lam_khz)),
        ("gamma_plus_khz".to_string(), format_param(gamma_plus_khz)),
        ("gamma_minus_khz".to_string(), format_param(gamma_minus_khz)),
        ("theta_rad".to_string(), format_param(theta_rad)),
        ("omega_min_khz".to_string(), format_param(omega_min_khz)),
        ("omega_max_khz".to_string(), format_param(omega_max_khz)),
        ("n_points".to_string(), n_points.to_string()),
        ("derived_peak_lower_khz".to_string(), format_param(peak_lower / two_pi)),
        ("derived_peak_upper_khz".to_string(), format_param(peak_upper / two_pi)),
    ];

    Ok(ScenarioOutput {
        metadata: Metadata {
            scenario: "cavity-spectrum",
            equations: EQUATIONS,
            parameters,
            seed: config.seed,
        },
        table,
    })
}
