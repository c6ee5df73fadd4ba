//! Quantum-state-diffusion unraveling of the master equation into stochastic
//! state-vector trajectories.
//!
//! A normalized state |Ψ⟩ is advanced by the Ito increment
//!
//! ```text
//!   |dΨ⟩ = −iH|Ψ⟩dt
//!        + Σ_m (⟨L_m†⟩ L_m − ½L_m†L_m − ½⟨L_m†⟩⟨L_m⟩)|Ψ⟩ dt
//!        + Σ_m (L_m − ⟨L_m⟩)|Ψ⟩ dξ_m
//! ```
//!
//! with complex Wiener increments of mean zero, `E[dξ dξ*] = dt` and
//! `E[dξ dξ] = 0`, the state renormalized after every step. The engine's
//! dissipator
//! carries the convention −Σ{B†B, ρ} + 2Σ BρB†, twice the plain Lindblad
//! normalization, so the unraveling operators are L_m = √2·B_m; with that
//! identification the ensemble mean of |Ψ⟩⟨Ψ| reproduces the
//! [`crate::lindblad::evolve`] solution of the same model.
//!
//! Noise is drawn from counter-based ChaCha streams keyed on
//! (master_seed, trajectory_index), and ensemble means are reduced over a
//! fixed pairwise tree, so results are bit-identical for any thread count.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hilbert::{DensityMatrix, Ket};
use crate::lindblad::LindbladModel;
use crate::linalg::pairwise_sum;
use crate::C64;

/// Seeding and step-size scheme for an ensemble run.
#[derive(Debug, Clone, Copy)]
pub struct NoiseSpec {
    pub master_seed: u64,
    /// Fixed Euler-Maruyama step size.
    pub dt: f64,
}

/// One stochastic state-vector history.
#[derive(Debug, Clone)]
pub struct Trajectory {
    /// Derived noise-stream id (the trajectory index).
    pub seed: u64,
    pub times: Vec<f64>,
    /// Normalized state at every grid point.
    pub states: Vec<Ket>,
}

/// A seeded collection of trajectories plus their mean density matrix.
#[derive(Debug, Clone)]
pub struct Ensemble {
    pub trajectories: Vec<Trajectory>,
    /// Mean of |Ψ⟩⟨Ψ| over trajectories at each grid point.
    pub mean_states: Vec<DensityMatrix>,
    pub times: Vec<f64>,
}

/// Precomputed operators for stepping: L_m = √2 B_m and L_m†L_m.
struct Stepper {
    h: DMatrix<C64>,
    l_ops: Vec<DMatrix<C64>>,
    ll_ops: Vec<DMatrix<C64>>,
}

struct Workspace {
    op_psi: DVector<C64>,
    next: DVector<C64>,
}

impl Stepper {
    fn new(model: &LindbladModel) -> Self {
        let sqrt2 = C64::from(std::f64::consts::SQRT_2);
        let l_ops: Vec<_> = model.lindblad_ops().iter().map(|b| b * sqrt2).collect();
        let ll_ops: Vec<_> = l_ops.iter().map(|l| l.adjoint() * l).collect();
        Self { h: model.h_eff().clone(), l_ops, ll_ops }
    }

    fn workspace(&self) -> Workspace {
        let d = self.h.nrows();
        Workspace {
            op_psi: DVector::from_element(d, C64::ZERO),
            next: DVector::from_element(d, C64::ZERO),
        }
    }

    /// One Euler-Maruyama step; `noise` holds one dξ_m per operator.
    /// Returns the pre-normalization norm of the advanced state.
    fn step(&self, psi: &mut DVector<C64>, dt: f64, noise: &[C64], w: &mut Workspace) -> f64 {
        let dt_c = C64::from(dt);
        w.next.copy_from(psi);
        // -iH|Ψ⟩dt
        w.op_psi.gemv(C64::ONE, &self.h, psi, C64::ZERO);
        w.next.axpy(C64::new(0.0, -dt), &w.op_psi, C64::ONE);
        for (m, l) in self.l_ops.iter().enumerate() {
            w.op_psi.gemv(C64::ONE, l, psi, C64::ZERO);
            let expect = psi.dotc(&w.op_psi); // ⟨L⟩ for unit-norm ψ
            // drift: (⟨L†⟩L − ½⟨L†⟩⟨L⟩)|Ψ⟩dt
            w.next.axpy(expect.conj() * dt_c, &w.op_psi, C64::ONE);
            w.next.axpy(-C64::from(0.5) * expect.conj() * expect * dt_c, psi, C64::ONE);
            // diffusion: (L − ⟨L⟩)|Ψ⟩dξ
            w.next.axpy(noise[m], &w.op_psi, C64::ONE);
            w.next.axpy(-noise[m] * expect, psi, C64::ONE);
            // drift: −½L†L|Ψ⟩dt
            w.op_psi.gemv(C64::ONE, &self.ll_ops[m], psi, C64::ZERO);
            w.next.axpy(C64::from(-0.5 * dt), &w.op_psi, C64::ONE);
        }
        let norm = w.next.norm();
        if norm > 0.0 && norm.is_finite() {
            w.next.iter_mut().for_each(|a| *a /= norm);
        }
        psi.copy_from(&w.next);
        norm
    }
}

fn require_unraveling_model(model: &LindbladModel) -> Result<()> {
    if !model.is_trace_preserving() {
        return Err(Error::InvalidArgument(
            "state-vector unraveling requires a Hermitian effective Hamiltonian".into(),
        ));
    }
    Ok(())
}

/// Advances a normalized state by one fixed step of the diffusion equation;
/// `noise_draws` carries one complex increment per environment operator,
/// with statistics E[dξ dξ*] = dt.
pub fn qsd_step(psi: &Ket, model: &LindbladModel, dt: f64, noise_draws: &[C64]) -> Result<Ket> {
    require_unraveling_model(model)?;
    if psi.dim() != model.dim() {
        return Err(Error::DimensionMismatch(format!(
            "state dimension {} does not match model dimension {}",
            psi.dim(),
            model.dim()
        )));
    }
    if noise_draws.len() != model.lindblad_ops().len() {
        return Err(Error::DimensionMismatch(format!(
            "{} noise draws for {} environment operators",
            noise_draws.len(),
            model.lindblad_ops().len()
        )));
    }
    if dt <= 0.0 || dt.is_nan() {
        return Err(Error::InvalidArgument(format!("step size must be positive, got {dt}")));
    }
    let stepper = Stepper::new(model);
    let mut w = stepper.workspace();
    let mut amplitudes = psi.normalized()?.amplitudes().clone();
    let norm = stepper.step(&mut amplitudes, dt, noise_draws, &mut w);
    if !norm.is_finite() || norm == 0.0 || amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
        return Err(Error::IntegrationFailure { time: dt, reason: "non-finite amplitudes".into() });
    }
    Ket::new(amplitudes, Arc::clone(psi.space()))
}

/// Runs `m` independent trajectories from `psi0` over `times` and averages
/// their projectors. The result is a pure function of
/// (model, psi0, times, m, noise): trajectories own disjoint noise streams
/// and the mean is reduced over a fixed tree, so parallel scheduling cannot
/// change a single bit of the output.
pub fn run_ensemble(
    model: &LindbladModel,
    psi0: &Ket,
    times: &[f64],
    m: usize,
    noise: &NoiseSpec,
) -> Result<Ensemble> {
    require_unraveling_model(model)?;
    if m < 1 {
        return Err(Error::InvalidArgument("ensemble needs at least one trajectory".into()));
    }
    if noise.dt <= 0.0 || noise.dt.is_nan() {
        return Err(Error::InvalidArgument(format!("step size must be positive, got {}", noise.dt)));
    }
    if psi0.dim() != model.dim() {
        return Err(Error::DimensionMismatch(format!(
            "state dimension {} does not match model dimension {}",
            psi0.dim(),
            model.dim()
        )));
    }
    if times.is_empty() || times[0] != 0.0 {
        return Err(Error::InvalidArgument("time grid must start at 0".into()));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("time grid must be strictly increasing".into()));
    }
    // every grid interval must be an integer number of steps
    let mut steps_per_interval = Vec::with_capacity(times.len().saturating_sub(1));
    for w in times.windows(2) {
        let ratio = (w[1] - w[0]) / noise.dt;
        let steps = ratio.round();
        if (ratio - steps).abs() > 1e-6 || steps < 1.0 {
            return Err(Error::InvalidArgument(format!(
                "grid spacing {} is not an integer multiple of dt = {}",
                w[1] - w[0],
                noise.dt
            )));
        }
        steps_per_interval.push(steps as usize);
    }

    let psi0 = psi0.normalized()?;
    let stepper = Stepper::new(model);
    let n_ops = model.lindblad_ops().len();
    let sigma = (noise.dt / 2.0).sqrt();

    let trajectories: Vec<Trajectory> = (0..m)
        .into_par_iter()
        .map(|idx| -> Result<Trajectory> {
            let mut rng = ChaCha8Rng::seed_from_u64(noise.master_seed);
            rng.set_stream(idx as u64);
            let mut w = stepper.workspace();
            let mut psi = psi0.amplitudes().clone();
            let mut states = Vec::with_capacity(times.len());
            states.push(Ket::new(psi.clone(), Arc::clone(psi0.space()))?);
            let mut draws = vec![C64::ZERO; n_ops];
            for (k, &steps) in steps_per_interval.iter().enumerate() {
                for _ in 0..steps {
                    for d in draws.iter_mut() {
                        let x: f64 = StandardNormal.sample(&mut rng);
                        let y: f64 = StandardNormal.sample(&mut rng);
                        *d = C64::new(x * sigma, y * sigma);
                    }
                    let norm = stepper.step(&mut psi, noise.dt, &draws, &mut w);
                    if !norm.is_finite() || norm == 0.0 {
                        return Err(Error::TrajectoryFailure {
                            trajectory: idx,
                            time: times[k + 1],
                        });
                    }
                }
                states.push(Ket::new(psi.clone(), Arc::clone(psi0.space()))?);
            }
            Ok(Trajectory { seed: idx as u64, times: times.to_vec(), states })
        })
        .collect::<Result<Vec<_>>>()?;

    // Mean of |Ψ⟩⟨Ψ| per grid point, relaxed positivity floor 5e-3/√M for
    // sampling noise.
    let tol = 5e-3 / (m as f64).sqrt();
    let mut mean_states = Vec::with_capacity(times.len());
    for k in 0..times.len() {
        let projectors: Vec<DMatrix<C64>> =
            trajectories.iter().map(|t| t.states[k].projector()).collect();
        let mean = pairwise_sum(&projectors) / C64::from(m as f64);
        mean_states.push(DensityMatrix::with_positivity_tol(
            mean,
            Arc::clone(psi0.space()),
            tol,
        )?);
    }

    Ok(Ensemble { trajectories, mean_states, times: times.to_vec() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::HilbertSpace;
    use crate::lindblad::{evolve, LindbladModel};
    use crate::linalg::frobenius_distance;
    use crate::operators::{sigma_minus, sigma_x, sigma_z};
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn qubit_decay_model(kappa: f64) -> (LindbladModel, Ket) {
        let space = HilbertSpace::single(2, "qubit").unwrap();
        let model = LindbladModel::new(
            DMatrix::from_element(2, 2, C64::ZERO),
            vec![sigma_minus() * c(kappa.sqrt(), 0.0)],
            space.clone(),
        )
        .unwrap();
        let excited = Ket::basis_state(0, space).unwrap(); // σ_z = +1 state
        (model, excited)
    }

    #[test]
    fn closed_system_step_is_euler_schroedinger() {
        let space = HilbertSpace::single(2, "qubit").unwrap();
        let h = sigma_x() * c(0.7, 0.0);
        let model = LindbladModel::new(h.clone(), vec![], space.clone()).unwrap();
        let psi = Ket::basis_state(0, space).unwrap();
        let dt = 1e-4;
        let out = qsd_step(&psi, &model, dt, &[]).unwrap();
        // expected: normalize(ψ - iHψ dt)
        let mut expect = psi.amplitudes().clone();
        expect.axpy(c(0.0, -dt), &(&h * psi.amplitudes()), C64::ONE);
        let norm = expect.norm();
        // pre-normalization drift of the norm is O(dt²)
        assert!((norm - 1.0).abs() < 10.0 * dt * dt);
        expect /= C64::from(norm);
        assert!((out.amplitudes() - expect).norm() < 1e-15);
    }

    #[test]
    fn drift_rate_on_excited_qubit() {
        // B = √κ σ⁻ on the excited state: ⟨B⟩ = 0 and the deterministic
        // drift shrinks the squared excited amplitude at 2κ per unit time
        // (the engine's dissipator convention decays populations at 2κ).
        let kappa = 0.8;
        let (model, excited) = qubit_decay_model(kappa);
        let stepper = Stepper::new(&model);
        let mut w = stepper.workspace();
        let mut psi = excited.amplitudes().clone();
        let dt = 1e-6;
        let norm = stepper.step(&mut psi, dt, &[C64::ZERO], &mut w);
        // pre-normalization excited amplitude is 1 − κ dt, so the squared
        // norm decays at rate 2κ
        let rate = (1.0 - norm * norm) / dt;
        assert_relative_eq!(rate, 2.0 * kappa, epsilon = 1e-4);
        // after renormalization the state is |e⟩ again
        assert_relative_eq!(psi[0].re, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn diffusion_vanishes_on_eigenstates() {
        // ψ an eigenstate of every B_m: (B − ⟨B⟩)ψ = 0 and any noise draw
        // leaves the step purely deterministic.
        let space = HilbertSpace::single(2, "qubit").unwrap();
        let model = LindbladModel::new(
            DMatrix::from_element(2, 2, C64::ZERO),
            vec![sigma_z() * c(0.9, 0.0)],
            space.clone(),
        )
        .unwrap();
        let psi = Ket::basis_state(1, space).unwrap();
        let quiet = qsd_step(&psi, &model, 1e-3, &[C64::ZERO]).unwrap();
        let noisy = qsd_step(&psi, &model, 1e-3, &[c(0.4, -0.7)]).unwrap();
        assert!((quiet.amplitudes() - noisy.amplitudes()).norm() < 1e-15);
    }

    #[test]
    fn rejects_non_hermitian_h_eff() {
        let space = HilbertSpace::single(2, "qubit").unwrap();
        let h = DMatrix::from_diagonal_element(2, 2, c(0.0, -0.5));
        let model = LindbladModel::new(h, vec![], space.clone()).unwrap();
        let psi = Ket::basis_state(0, space).unwrap();
        assert!(qsd_step(&psi, &model, 1e-3, &[]).is_err());
    }

    #[test]
    fn ensemble_is_deterministic() {
        let (model, psi0) = qubit_decay_model(1.0);
        let times: Vec<f64> = (0..=5).map(|k| k as f64 * 0.1).collect();
        let noise = NoiseSpec { master_seed: 99, dt: 1e-2 };
        let single_a = run_ensemble(&model, &psi0, &times, 1, &noise).unwrap();
        let single_b = run_ensemble(&model, &psi0, &times, 1, &noise).unwrap();
        for (sa, sb) in single_a.trajectories[0].states.iter().zip(&single_b.trajectories[0].states)
        {
            assert_eq!(sa.amplitudes(), sb.amplitudes());
        }
        let a = run_ensemble(&model, &psi0, &times, 8, &noise).unwrap();
        let b = run_ensemble(&model, &psi0, &times, 8, &noise).unwrap();
        for (ma, mb) in a.mean_states.iter().zip(&b.mean_states) {
            assert_eq!(ma.entries(), mb.entries());
        }
        for (ta, tb) in a.trajectories.iter().zip(&b.trajectories) {
            for (sa, sb) in ta.states.iter().zip(&tb.states) {
                assert_eq!(sa.amplitudes(), sb.amplitudes());
            }
        }
    }

    #[test]
    fn ensemble_is_schedule_independent() {
        let (model, psi0) = qubit_decay_model(1.0);
        let times: Vec<f64> = (0..=4).map(|k| k as f64 * 0.1).collect();
        let noise = NoiseSpec { master_seed: 31, dt: 1e-2 };
        let pools: Vec<_> = [1usize, 4]
            .iter()
            .map(|&n| rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap())
            .collect();
        let runs: Vec<Ensemble> = pools
            .iter()
            .map(|p| p.install(|| run_ensemble(&model, &psi0, &times, 32, &noise).unwrap()))
            .collect();
        for (a, b) in runs[0].mean_states.iter().zip(&runs[1].mean_states) {
            assert_eq!(a.entries(), b.entries());
        }
    }

    #[test]
    fn ensemble_mean_tracks_master_equation() {
        // Coarse check at modest M; the tight benchmark lives in the
        // acceptance suite.
        let (model, psi0) = qubit_decay_model(1.0);
        let times: Vec<f64> = (0..=6).map(|k| k as f64 * 0.25).collect();
        let noise = NoiseSpec { master_seed: 7, dt: 1e-3 };
        let ensemble = run_ensemble(&model, &psi0, &times, 400, &noise).unwrap();
        let rho0 = DensityMatrix::from_pure(&psi0).unwrap();
        let exact = evolve(&model, &rho0, &times).unwrap();
        for (mean, reference) in ensemble.mean_states.iter().zip(&exact.states) {
            assert!(frobenius_distance(mean.entries(), reference.entries()) < 0.15);
        }
    }

    #[test]
    fn states_are_normalized_at_output_points() {
        let (model, psi0) = qubit_decay_model(0.5);
        let times: Vec<f64> = (0..=3).map(|k| k as f64 * 0.2).collect();
        let noise = NoiseSpec { master_seed: 4, dt: 1e-2 };
        let ensemble = run_ensemble(&model, &psi0, &times, 16, &noise).unwrap();
        for traj in &ensemble.trajectories {
            for s in &traj.states {
                assert!((s.norm() - 1.0).abs() < 1e-12);
            }
        }
        for mean in &ensemble.mean_states {
            assert!((mean.trace() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn localization_reduces_dispersion() {
        // Single Hermitian B = σ_z, H = 0: trajectories localize onto σ_z
        // eigenstates, so the ensemble-averaged variance ⟨B²⟩ − ⟨B⟩²
        // decreases in time-average.
        let space = HilbertSpace::single(2, "qubit").unwrap();
        let b = sigma_z();
        let model = LindbladModel::new(
            DMatrix::from_element(2, 2, C64::ZERO),
            vec![b.clone() * c(1.0, 0.0)],
            space.clone(),
        )
        .unwrap();
        let plus = Ket::new(
            DVector::from_vec(vec![c(std::f64::consts::FRAC_1_SQRT_2, 0.0); 2]),
            space,
        )
        .unwrap();
        let times: Vec<f64> = (0..=20).map(|k| k as f64 * 0.05).collect();
        let noise = NoiseSpec { master_seed: 12, dt: 1e-3 };
        let ensemble = run_ensemble(&model, &plus, &times, 200, &noise).unwrap();

        let b2 = &b * &b;
        let mean_variance: Vec<f64> = (0..times.len())
            .map(|k| {
                ensemble
                    .trajectories
                    .iter()
                    .map(|t| {
                        let s = &t.states[k];
                        let eb = s.expectation(&b).unwrap().re;
                        let eb2 = s.expectation(&b2).unwrap().re;
                        eb2 - eb * eb
                    })
                    .sum::<f64>()
                    / ensemble.trajectories.len() as f64
            })
            .collect();
        let half = times.len() / 2;
        let early: f64 = mean_variance[..half].iter().sum::<f64>() / half as f64;
        let late: f64 =
            mean_variance[half..].iter().sum::<f64>() / (times.len() - half) as f64;
        assert!(
            late < early,
            "dispersion did not decay: early {early:.4}, late {late:.4}"
        );
        // variance starts at 1 for |+⟩ and must end well below
        assert!(mean_variance[0] > 0.99);
        assert!(*mean_variance.last().unwrap() < 0.2);
    }

    #[test]
    fn rejects_bad_grids_and_counts() {
        let (model, psi0) = qubit_decay_model(1.0);
        let noise = NoiseSpec { master_seed: 0, dt: 1e-2 };
        assert!(run_ensemble(&model, &psi0, &[0.0, 0.1], 0, &noise).is_err());
        assert!(run_ensemble(&model, &psi0, &[0.1, 0.2], 4, &noise).is_err());
        assert!(run_ensemble(&model, &psi0, &[0.0, 0.015], 4, &noise).is_err());
        assert!(run_ensemble(&model, &psi0, &[0.0, 0.1, 0.05], 4, &noise).is_err());
    }

    #[test]
    fn diverging_step_reports_trajectory_failure() {
        // a step size past the f64 range overflows the drift in one step
        let (model, psi0) = qubit_decay_model(1.0);
        let noise = NoiseSpec { master_seed: 3, dt: 1e300 };
        let out = run_ensemble(&model, &psi0, &[0.0, 1e300], 2, &noise);
        match out {
            Err(Error::TrajectoryFailure { .. }) => {}
            other => panic!("expected trajectory failure, got {other:?}"),
        }
    }
}
