//! Stochastic-unraveling benchmark: a seeded trajectory ensemble against the
//! deterministic master-equation solution of the same model, in natural
//! units (rates in inverse time units of the grid).
//!
//! The run is a pure function of the configuration and seed; rerunning with
//! any thread count reproduces the artifact byte for byte.

use decoherence_core::hilbert::{DensityMatrix, HilbertSpace, Ket};
use decoherence_core::lindblad::{evolve, LindbladModel};
use decoherence_core::linalg::frobenius_distance;
use decoherence_core::operators::{annihilation, sigma_minus};
use decoherence_core::qsd::{run_ensemble, NoiseSpec};
use decoherence_core::{lindblad, C64};
use nalgebra::{DMatrix, DVector};

use crate::config::ScenarioConfig;
use crate::error::{invalid, numerical, CliError};
use crate::table::{Table, Value};

use super::{format_param, time_grid, Metadata, ScenarioOutput};

const EQUATIONS: &[&str] = &["Eq. (ito)", "Eq. (markovtype)"];

/// Coherent-shape state renormalized on a deliberately small Fock space.
/// Unlike `hilbert::coherent_state` this has no truncation-fidelity gate:
/// the benchmark needs a fixed state, not a faithful |α⟩.
fn truncated_coherent(alpha: f64, n_max: usize) -> Result<Ket, CliError> {
    let space = HilbertSpace::single(n_max + 1, "field").map_err(invalid)?;
    let mut amplitudes = DVector::from_element(n_max + 1, C64::ZERO);
    let mut c = 1.0;
    amplitudes[0] = C64::from(c);
    for n in 1..=n_max {
        c *= alpha / (n as f64).sqrt();
        amplitudes[n] = C64::from(c);
    }
    let ket = Ket::new(amplitudes, space).map_err(invalid)?;
    ket.normalized().map_err(invalid)
}

pub fn run(config: &ScenarioConfig) -> Result<ScenarioOutput, CliError> {
    let mut params = crate::config::Params::new(&config.parameters);
    let system = params.string_or("system", "qubit-decay")?;
    let kappa = params.f64_or("kappa", 1.0)?;
    let t_max = params.f64_or("t_max", 3.0)?;
    let n_grid = params.usize_or("n_grid", 31)?;
    let trajectories = params.usize_or("trajectories", 4000)?;
    let dt = params.f64_or("dt", 1e-3)?;
    let n_max = params.usize_or("n_max", 4)?;
    let alpha = params.f64_or("alpha", 1.0)?;
    params.finish()?;

    if kappa <= 0.0 {
        return Err(CliError::validation("kappa must be positive"));
    }
    if trajectories < 1 {
        return Err(CliError::validation("need at least one trajectory"));
    }
    if dt <= 0.0 || dt.is_nan() {
        return Err(CliError::validation("dt must be positive"));
    }
    let times = time_grid(t_max, n_grid)?;

    let (model, psi0) = match system.as_str() {
        "qubit-decay" => {
            let space = HilbertSpace::single(2, "qubit").map_err(invalid)?;
            let model = LindbladModel::new(
                DMatrix::from_element(2, 2, C64::ZERO),
                vec![sigma_minus() * C64::from(kappa.sqrt())],
                space.clone(),
            )
            .map_err(invalid)?;
            let excited = Ket::basis_state(0, space).map_err(invalid)?;
            (model, excited)
        }
        "cavity-decay" => {
            if n_max < 1 {
                return Err(CliError::validation("n_max must be at least 1"));
            }
            let dim = n_max + 1;
            let space = HilbertSpace::single(dim, "field").map_err(invalid)?;
            let model = LindbladModel::new(
                DMatrix::from_element(dim, dim, C64::ZERO),
                vec![annihilation(dim) * C64::from(kappa.sqrt())],
                space,
            )
            .map_err(invalid)?;
            let psi0 = truncated_coherent(alpha, n_max)?;
            (model, psi0)
        }
        other => {
            return Err(CliError::validation(format!(
                "unknown system '{other}' (expected qubit-decay or cavity-decay)"
            )))
        }
    };

    let seed = config.seed.unwrap_or(0);
    let noise = NoiseSpec { master_seed: seed, dt };
    let ensemble = run_ensemble(&model, &psi0, &times, trajectories, &noise).map_err(numerical)?;
    let rho0 = DensityMatrix::from_pure(&psi0).map_err(invalid)?;
    let reference = evolve(&model, &rho0, &times).map_err(numerical)?;

    let mut table = Table::new([
        "t",
        "frobenius_error",
        "trace_qsd",
        "trace_lindblad",
        "purity_qsd",
        "purity_lindblad",
    ]);
    for (k, &t) in times.iter().enumerate() {
        let mean = &ensemble.mean_states[k];
        let exact = &reference.states[k];
        table.push_row(vec![
            Value::Float(t),
            Value::Float(frobenius_distance(mean.entries(), exact.entries())),
            Value::Float(mean.trace()),
            Value::Float(exact.trace()),
            Value::Float(lindblad::purity(mean).map_err(numerical)?),
            Value::Float(reference.diagnostics[k].purity),
        ]);
    }

    let mut parameters = vec![
        ("system".to_string(), system.clone()),
        ("kappa".to_string(), format_param(kappa)),
        ("t_max".to_string(), format_param(t_max)),
        ("n_grid".to_string(), n_grid.to_string()),
        ("trajectories".to_string(), trajectories.to_string()),
        ("dt".to_string(), format_param(dt)),
    ];
    if system == "cavity-decay" {
        parameters.push(("n_max".to_string(), n_max.to_string()));
        parameters.push(("alpha".to_string(), format_param(alpha)));
    }

    Ok(ScenarioOutput {
        metadata: Metadata {
            scenario: "qsd-compare",
            equations: EQUATIONS,
            parameters,
            seed: Some(seed),
        },
        table,
    })
}
