//! Master-equation evolution of the (leaky) Tavis-Cummings model with
//! per-point diagnostics.
//!
//! Frequencies and the leakage rate are configured in kHz and multiplied by
//! 2π; times are in µs. Photon numbers therefore decay as e^{−2κt}.

use decoherence_core::cavity::{build_tavis_cummings, collective_spin, TavisCummingsParams};
use decoherence_core::hilbert::{tensor_product, DensityMatrix, Ket};
use decoherence_core::lindblad::evolve;
use decoherence_core::operators::{identity, number};
use decoherence_core::C64;

use crate::config::ScenarioConfig;
use crate::error::{invalid, numerical, CliError};
use crate::table::{Table, Value};

use super::{format_param, time_grid, Metadata, ScenarioOutput};

const EQUATIONS: &[&str] = &["Eq. (hamrabi)", "Eq. (markovrabi)", "Eq. (markovtype)"];

pub fn run(config: &ScenarioConfig) -> Result<ScenarioOutput, CliError> {
    let mut params = crate::config::Params::new(&config.parameters);
    let n_atoms = params.usize_or("n_atoms", 1)?;
    let omega0_khz = params.f64_or("omega0_khz", 100.0)?;
    let detuning_khz = params.f64_or("detuning_khz", 0.0)?;
    let lam_khz = params.f64_or("lam_khz", 24.0)?;
    let kappa_khz = params.f64_or("kappa_khz", 4.0)?;
    let n_max = params.usize_or("n_max", 10)?;
    let initial_fock = params.opt_u64("initial_field_fock")?;
    let initial_alpha = params.opt_f64("initial_field_alpha")?;
    let initial_atom = params.string_or("initial_atom", "ground")?;
    let t_max_us = params.f64_or("t_max_us", 100.0)?;
    let n_points = params.usize_or("n_points", 200)?;
    params.finish()?;

    let two_pi = std::f64::consts::TAU;
    let tc = TavisCummingsParams {
        n_atoms,
        omega0: two_pi * omega0_khz,
        omega: two_pi * (omega0_khz - detuning_khz),
        lam: two_pi * lam_khz,
        kappa: two_pi * kappa_khz,
        n_max,
    };
    tc.validate().map_err(invalid)?;
    if initial_fock.is_some() && initial_alpha.is_some() {
        return Err(CliError::validation(
            "initial_field_fock and initial_field_alpha are mutually exclusive",
        ));
    }
    if let Some(n) = initial_fock {
        if n as usize > n_max {
            return Err(CliError::validation(format!(
                "initial Fock level {n} exceeds n_max {n_max}"
            )));
        }
    }
    if let Some(alpha) = initial_alpha {
        let needed = (4.0 * alpha * alpha + 10.0).ceil() as usize;
        if n_max < needed {
            return Err(CliError::validation(format!(
                "coherent amplitude {alpha} needs n_max ≥ {needed} (got {n_max})"
            )));
        }
    }
    let atom_index = match initial_atom.as_str() {
        "ground" => 0,
        "excited" => n_atoms,
        other => {
            return Err(CliError::validation(format!(
                "initial_atom must be ground or excited, got '{other}'"
            )))
        }
    };
    let times_ms = time_grid(t_max_us / 1000.0, n_points)?;

    // model and initial state
    let model = build_tavis_cummings(&tc).map_err(invalid)?;
    let atom_space =
        decoherence_core::hilbert::HilbertSpace::single(n_atoms + 1, "atoms").map_err(invalid)?;
    let atom_ket = Ket::basis_state(atom_index, atom_space).map_err(invalid)?;
    let field_ket = match (initial_fock, initial_alpha) {
        (_, Some(alpha)) => {
            decoherence_core::hilbert::coherent_state(C64::from(alpha), n_max).map_err(invalid)?
        }
        (fock, None) => {
            let field_space = decoherence_core::hilbert::HilbertSpace::single(n_max + 1, "field")
                .map_err(invalid)?;
            Ket::basis_state(fock.unwrap_or(0) as usize, field_space).map_err(invalid)?
        }
    };
    let psi0 = atom_ket.tensor(&field_ket).map_err(invalid)?;
    let psi0 = Ket::new(psi0.amplitudes().clone(), model.space().clone()).map_err(invalid)?;
    let rho0 = DensityMatrix::from_pure(&psi0).map_err(invalid)?;

    let result = evolve(&model, &rho0, &times_ms).map_err(numerical)?;

    let photon_op = tensor_product(&identity(n_atoms + 1), &number(n_max + 1));
    // collective excitation count ⟨S_z⟩ + N/2
    let s = n_atoms as f64 / 2.0;
    let (sz, _) = collective_spin(n_atoms);
    let excitation_op = tensor_product(&sz, &identity(n_max + 1));

    let mut table = Table::new([
        "t_us",
        "trace",
        "purity",
        "entropy",
        "photon_number",
        "atom_excitation",
    ]);
    for ((state, diag), t_ms) in result.states.iter().zip(&result.diagnostics).zip(&times_ms) {
        let photons = state.expectation(&photon_op).map_err(numerical)?;
        let excitation = state.expectation(&excitation_op).map_err(numerical)? + s;
        table.push_row(vec![
            Value::Float(t_ms * 1000.0),
            Value::Float(diag.trace),
            Value::Float(diag.purity),
            Value::Float(diag.entropy),
            Value::Float(photons),
            Value::Float(excitation),
        ]);
    }

    let parameters = vec![
        ("n_atoms".to_string(), n_atoms.to_string()),
        ("omega0_khz".to_string(), format_param(omega0_khz)),
        ("detuning_khz".to_string(), format_param(detuning_khz)),
        ("lam_khz".to_string(), format_param(lam_khz)),
        ("kappa_khz".to_string(), format_param(kappa_khz)),
        ("n_max".to_string(), n_max.to_string()),
        (
            "initial_field".to_string(),
            match (initial_fock, initial_alpha) {
                (_, Some(a)) => format!("coherent({})", format_param(a)),
                (Some(n), None) => format!("fock({n})"),
                (None, None) => "fock(0)".to_string(),
            },
        ),
        ("initial_atom".to_string(), initial_atom.clone()),
        ("t_max_us".to_string(), format_param(t_max_us)),
        ("n_points".to_string(), n_points.to_string()),
    ];

    Ok(ScenarioOutput {
        metadata: Metadata {
            scenario: "lindblad-evolve",
            equations: EQUATIONS,
            parameters,
            seed: config.seed,
        },
        table,
    })
}
