//! Markov-type master equation
//!
//! ```text
//!   ∂ρ/∂t = −i(H_eff ρ − ρ H_eff†) − Σ_m (B_m†B_m ρ + ρ B_m†B_m) + 2 Σ_m B_m ρ B_m†
//! ```
//!
//! For Hermitian H_eff this is ∂ρ = i[ρ, H] − Σ{B†B, ρ}₊ + 2Σ BρB†, which is
//! trace preserving; cavity photon loss at rate κ corresponds to B = √κ·a,
//! giving the dissipator −κ(a†aρ − 2aρa† + ρa†a). A non-Hermitian H_eff
//! encodes decay and lets the trace fall below one.
//!
//! The superoperator uses column-stacking vectorization (`vec(ρ)` stacks
//! columns; `vec(AXB) = (Bᵀ ⊗ A) vec(X)`). Propagation goes through a
//! scaling-and-squaring matrix exponential for d² ≤ 1024 and adaptive
//! Runge-Kutta beyond that; outputs are re-symmetrized as (ρ + ρ†)/2 at grid
//! points only, never mid-step.

use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::hilbert::{
    hermiticity_defect, min_eigenvalue, tensor_product, von_neumann_entropy, DensityMatrix,
    HilbertSpace, HERMITICITY_TOL,
};
use crate::linalg::{hermitize, integrate_adaptive, unvectorize, vectorize};
use crate::C64;

/// Largest dimension for which the dense d²×d² superoperator is built.
pub const SUPEROP_DIM_CAP: usize = 64;

/// Output states with eigenvalues below this are treated as an integration
/// failure (unphysical model or step breakdown).
pub const UNPHYSICAL_EIGENVALUE: f64 = -1e-6;

/// Relative tolerance of the Runge-Kutta fallback.
pub const RK_RELATIVE_TOL: f64 = 1e-10;

/// Effective Hamiltonian plus environment operators B_m.
#[derive(Debug, Clone)]
pub struct LindbladModel {
    h_eff: DMatrix<C64>,
    lindblad_ops: Vec<DMatrix<C64>>,
    space: Arc<HilbertSpace>,
    trace_preserving: bool,
}

impl LindbladModel {
    pub fn new(
        h_eff: DMatrix<C64>,
        lindblad_ops: Vec<DMatrix<C64>>,
        space: Arc<HilbertSpace>,
    ) -> Result<Self> {
        let d = space.dim();
        if h_eff.nrows() != d || h_eff.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "h_eff is {}x{}, space dimension {}",
                h_eff.nrows(),
                h_eff.ncols(),
                d
            )));
        }
        for (m, b) in lindblad_ops.iter().enumerate() {
            if b.nrows() != d || b.ncols() != d {
                return Err(Error::DimensionMismatch(format!(
                    "environment operator {m} is {}x{}, space dimension {}",
                    b.nrows(),
                    b.ncols(),
                    d
                )));
            }
        }
        let trace_preserving = hermiticity_defect(&h_eff) <= HERMITICITY_TOL;
        Ok(Self { h_eff, lindblad_ops, space, trace_preserving })
    }

    pub fn h_eff(&self) -> &DMatrix<C64> {
        &self.h_eff
    }

    pub fn lindblad_ops(&self) -> &[DMatrix<C64>] {
        &self.lindblad_ops
    }

    pub fn space(&self) -> &Arc<HilbertSpace> {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// True iff h_eff is Hermitian, in which case the evolution conserves
    /// tr ρ.
    pub fn is_trace_preserving(&self) -> bool {
        self.trace_preserving
    }

    /// Right-hand side of the master equation evaluated at ρ.
    pub fn rhs(&self, rho: &DMatrix<C64>) -> DMatrix<C64> {
        let i = C64::new(0.0, 1.0);
        let mut out = (&self.h_eff * rho - rho * self.h_eff.adjoint()) * (-i);
        for b in &self.lindblad_ops {
            let b_rho = b * rho;
            let bdag = b.adjoint();
            let bb = &bdag * b;
            out -= &bb * rho + rho * &bb;
            out += (b_rho * bdag) * C64::from(2.0);
        }
        out
    }
}

/// Per-point diagnostics along an evolution.
#[derive(Debug, Clone, Copy)]
pub struct Diagnostics {
    pub trace: f64,
    pub purity: f64,
    pub entropy: f64,
}

/// Time grid, states and diagnostics returned by [`evolve`].
#[derive(Debug, Clone)]
pub struct EvolutionResult {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    pub diagnostics: Vec<Diagnostics>,
}

/// How [`evolve`] propagates between grid points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropagationMethod {
    /// Matrix exponential of the vectorized superoperator.
    MatrixExponential,
    /// Adaptive Dormand-Prince on the matrix-valued master equation.
    AdaptiveRk,
}

/// Builds the d²×d² generator L with L·vec(ρ) = vec(∂ρ/∂t) under
/// column-stacking vectorization.
pub fn build_superoperator(model: &LindbladModel) -> Result<DMatrix<C64>> {
    let d = model.dim();
    if d > SUPEROP_DIM_CAP {
        return Err(Error::InvalidArgument(format!(
            "superoperator dimension {d}² exceeds cap {SUPEROP_DIM_CAP}²"
        )));
    }
    let i = C64::new(0.0, 1.0);
    let id = DMatrix::<C64>::identity(d, d);
    let h = &model.h_eff;

    // -i(H ρ - ρ H†)  →  -i(I ⊗ H) + i(conj(H) ⊗ I)
    let mut sup = tensor_product(&id, h) * (-i);
    sup += tensor_product(&h.conjugate(), &id) * i;

    for b in &model.lindblad_ops {
        let bdag_b = b.adjoint() * b;
        // -(B†B ρ + ρ B†B)  →  -(I ⊗ B†B) - ((B†B)ᵀ ⊗ I)
        sup -= tensor_product(&id, &bdag_b);
        sup -= tensor_product(&bdag_b.transpose(), &id);
        // +2 B ρ B†  →  +2 (conj(B) ⊗ B)
        sup += tensor_product(&b.conjugate(), b) * C64::from(2.0);
    }
    Ok(sup)
}

/// Integrates the master equation over `times` (starting at 0, strictly
/// increasing). Uses the exponential of the superoperator for d² ≤ 1024 and
/// adaptive Runge-Kutta otherwise.
pub fn evolve(model: &LindbladModel, rho0: &DensityMatrix, times: &[f64]) -> Result<EvolutionResult> {
    let method = if model.dim() * model.dim() <= 1024 {
        PropagationMethod::MatrixExponential
    } else {
        PropagationMethod::AdaptiveRk
    };
    evolve_with(model, rho0, times, method)
}

/// [`evolve`] with an explicit propagation method.
pub fn evolve_with(
    model: &LindbladModel,
    rho0: &DensityMatrix,
    times: &[f64],
    method: PropagationMethod,
) -> Result<EvolutionResult> {
    validate_grid(times)?;
    if rho0.dim() != model.dim() {
        return Err(Error::DimensionMismatch(format!(
            "initial state dimension {} does not match model dimension {}",
            rho0.dim(),
            model.dim()
        )));
    }

    let mut states = Vec::with_capacity(times.len());
    let mut diagnostics = Vec::with_capacity(times.len());
    let mut record = |rho_raw: &DMatrix<C64>, t: f64| -> Result<()> {
        let sym = hermitize(rho_raw);
        let min_eig = min_eigenvalue(&sym);
        if min_eig < UNPHYSICAL_EIGENVALUE {
            return Err(Error::IntegrationFailure {
                time: t,
                reason: format!("positivity violated (min eigenvalue {min_eig:.3e})"),
            });
        }
        let state =
            DensityMatrix::new(sym, Arc::clone(rho0.space())).map_err(|e| Error::IntegrationFailure {
                time: t,
                reason: e.to_string(),
            })?;
        let diag = Diagnostics {
            trace: state.trace(),
            purity: purity(&state)?,
            entropy: von_neumann_entropy(&state)?,
        };
        states.push(state);
        diagnostics.push(diag);
        Ok(())
    };

    match method {
        PropagationMethod::MatrixExponential => {
            let sup = build_superoperator(model)?;
            let mut v = vectorize(rho0.entries());
            record(rho0.entries(), times[0])?;
            // One exponential per distinct step size. Steps equal to within
            // 1e-12 relative share a propagator, so the last-ulp jitter of a
            // nominally uniform grid cannot force a fresh exponential per
            // point; the induced perturbation is ~‖L·dt‖·1e-12.
            let mut cache: Vec<(f64, DMatrix<C64>)> = Vec::new();
            for k in 1..times.len() {
                let dt = times[k] - times[k - 1];
                let idx = match cache
                    .iter()
                    .position(|(key, _)| (key - dt).abs() <= 1e-12 * dt.abs())
                {
                    Some(idx) => idx,
                    None => {
                        cache.push((dt, (sup.clone() * C64::from(dt)).exp()));
                        cache.len() - 1
                    }
                };
                v = &cache[idx].1 * v;
                let rho = unvectorize(&v, model.dim());
                record(&rho, times[k])?;
            }
        }
        PropagationMethod::AdaptiveRk => {
            let mut rho = rho0.entries().clone();
            record(&rho, times[0])?;
            for k in 1..times.len() {
                rho = integrate_adaptive(
                    |r| model.rhs(r),
                    &rho,
                    times[k - 1],
                    times[k],
                    RK_RELATIVE_TOL,
                    1e-13,
                )?;
                record(&rho, times[k])?;
            }
        }
    }

    Ok(EvolutionResult { times: times.to_vec(), states, diagnostics })
}

fn validate_grid(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::InvalidArgument("empty time grid".into()));
    }
    if times[0] != 0.0 {
        return Err(Error::InvalidArgument(format!("time grid must start at 0, got {}", times[0])));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("time grid must be strictly increasing".into()));
    }
    Ok(())
}

/// Secular-approximation propagation: every matrix element evolves
/// independently as ρ_ij(t) = ρ_ij(0)·exp[(−i(E_i − E_j) − Γ_ij)t] (ħ = 1).
///
/// Γ must be symmetric, entrywise non-negative, with zero diagonal.
pub fn secular_propagate(
    rho0: &DensityMatrix,
    energies: &[f64],
    dampings: &DMatrix<f64>,
    t: f64,
) -> Result<DensityMatrix> {
    let d = rho0.dim();
    if energies.len() != d || dampings.nrows() != d || dampings.ncols() != d {
        return Err(Error::DimensionMismatch(format!(
            "expected {d} energies and a {d}x{d} damping matrix"
        )));
    }
    for i in 0..d {
        if dampings[(i, i)] != 0.0 {
            return Err(Error::InvalidArgument("damping matrix must have zero diagonal".into()));
        }
        for j in 0..d {
            if dampings[(i, j)] < 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "negative damping entry Γ[{i},{j}] = {}",
                    dampings[(i, j)]
                )));
            }
            if (dampings[(i, j)] - dampings[(j, i)]).abs() > 0.0 {
                return Err(Error::InvalidArgument("damping matrix must be symmetric".into()));
            }
        }
    }

    let mut out = rho0.entries().clone();
    for i in 0..d {
        for j in 0..d {
            let phase = C64::new(-dampings[(i, j)] * t, -(energies[i] - energies[j]) * t);
            out[(i, j)] *= phase.exp();
        }
    }
    DensityMatrix::new(out, Arc::clone(rho0.space()))
}

/// Normalized purity Tr(ρ²)/Tr(ρ)² ∈ (0, 1].
pub fn purity(rho: &DensityMatrix) -> Result<f64> {
    let trace = rho.trace();
    if trace <= 0.0 {
        return Err(Error::InvalidTrace { trace });
    }
    let m = rho.entries();
    let mut tr2 = 0.0;
    for i in 0..rho.dim() {
        for k in 0..rho.dim() {
            tr2 += (m[(i, k)] * m[(k, i)]).re;
        }
    }
    Ok(tr2 / (trace * trace))
}

/// Von Neumann entropy of ρ/tr(ρ) in nats.
pub fn entropy(rho: &DensityMatrix) -> Result<f64> {
    von_neumann_entropy(rho)
}
