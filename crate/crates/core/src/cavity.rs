//! Collective atom-field physics: the Tavis-Cummings model, vacuum Rabi
//! splitting of the absorption spectrum, dispersive shifts, probe dephasing,
//! and Schrödinger-cat pointer-state distances.
//!
//! N two-level atoms couple to one cavity mode through
//! H = ω₀S_z + ω a†a + λ(S⁺a + a†S⁻) in the collective Dicke sector
//! S = N/2 (dimension N+1 instead of 2^N; the Hamiltonian never leaves it).
//! All frequencies are angular, in one consistent unit, with ħ = 1; cavity
//! leakage at rate κ enters as the environment operator B = √κ·a.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::hilbert::{coherent_state, tensor_product, HilbertSpace, Ket, DIM_CAP};
use crate::lindblad::LindbladModel;
use crate::operators::{annihilation, identity, number};
use crate::C64;

/// Parameters of the Tavis-Cummings model with a leaky cavity.
#[derive(Debug, Clone, Copy)]
pub struct TavisCummingsParams {
    pub n_atoms: usize,
    /// Atomic transition frequency ω₀.
    pub omega0: f64,
    /// Cavity frequency ω.
    pub omega: f64,
    /// Atom-field coupling λ (half the Rabi frequency 2λ).
    pub lam: f64,
    /// Cavity leakage rate κ.
    pub kappa: f64,
    /// Fock-space truncation (field dimension n_max + 1).
    pub n_max: usize,
}

impl TavisCummingsParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_atoms < 1 {
            return Err(Error::InvalidArgument("need at least one atom".into()));
        }
        if self.lam < 0.0 || self.kappa < 0.0 {
            return Err(Error::InvalidArgument("λ and κ must be non-negative".into()));
        }
        if self.n_max < 1 {
            return Err(Error::InvalidArgument("need n_max ≥ 1".into()));
        }
        Ok(())
    }

    /// Detuning Δ = ω₀ − ω.
    pub fn detuning(&self) -> f64 {
        self.omega0 - self.omega
    }
}

/// Lorentzian-doublet parameters of the absorption spectrum.
#[derive(Debug, Clone, Copy)]
pub struct RabiSpectrumParams {
    pub gamma_plus: f64,
    pub gamma_minus: f64,
    /// Δ = ω₀ − ω.
    pub detuning: f64,
    pub n_atoms: usize,
    pub lam: f64,
    pub omega0: f64,
    /// Mixing angle θ weighting the two peaks (π/4 at resonance).
    pub theta: f64,
}

impl RabiSpectrumParams {
    pub fn validate(&self) -> Result<()> {
        if self.gamma_plus <= 0.0 || self.gamma_minus <= 0.0 {
            return Err(Error::InvalidArgument("damping factors Γ± must be positive".into()));
        }
        if self.n_atoms < 1 {
            return Err(Error::InvalidArgument("need at least one atom".into()));
        }
        Ok(())
    }
}

/// Parameters of the dispersive Schrödinger-cat construction.
#[derive(Debug, Clone, Copy)]
pub struct CatParams {
    /// Mean photon number n̄ of the stored coherent field.
    pub n_bar: f64,
    /// Field dephasing angle φ in radians.
    pub phi: f64,
    /// Cavity relaxation time T_r.
    pub t_r: f64,
    pub lam: f64,
    pub detuning: f64,
    /// Atom-cavity interaction time.
    pub t_int: f64,
}

impl CatParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_bar < 0.0 {
            return Err(Error::InvalidArgument("n̄ must be non-negative".into()));
        }
        if self.t_r <= 0.0 {
            return Err(Error::InvalidArgument("relaxation time must be positive".into()));
        }
        Ok(())
    }
}

/// Collective spin operators (S_z, S⁺) in the S = N/2 Dicke basis, ordered
/// by ascending m = −S … S (index 0 = all atoms in the ground state).
pub fn collective_spin(n_atoms: usize) -> (DMatrix<C64>, DMatrix<C64>) {
    let dim = n_atoms + 1;
    let s = n_atoms as f64 / 2.0;
    let mut sz = DMatrix::from_element(dim, dim, C64::ZERO);
    let mut sp = DMatrix::from_element(dim, dim, C64::ZERO);
    for k in 0..dim {
        let m = -s + k as f64;
        sz[(k, k)] = C64::from(m);
        if k + 1 < dim {
            sp[(k + 1, k)] = C64::from((s * (s + 1.0) - m * (m + 1.0)).sqrt());
        }
    }
    (sz, sp)
}

/// Builds H = ω₀S_z + ω a†a + λ(S⁺a + a†S⁻) on the Dicke ⊗ Fock space,
/// with the photon-loss operator B = √κ·a appended when κ > 0.
pub fn build_tavis_cummings(params: &TavisCummingsParams) -> Result<LindbladModel> {
    params.validate()?;
    let atom_dim = params.n_atoms + 1;
    let field_dim = params.n_max + 1;
    let dim = atom_dim * field_dim;
    if dim > DIM_CAP {
        return Err(Error::InvalidArgument(format!(
            "Tavis-Cummings dimension {dim} exceeds cap {DIM_CAP}"
        )));
    }
    let space = HilbertSpace::new(vec![atom_dim, field_dim], vec!["atoms".into(), "field".into()])?;

    let (sz, sp) = collective_spin(params.n_atoms);
    let a = annihilation(field_dim);
    let id_atom = identity(atom_dim);
    let id_field = identity(field_dim);

    let mut h = tensor_product(&sz, &id_field) * C64::from(params.omega0);
    h += tensor_product(&id_atom, &number(field_dim)) * C64::from(params.omega);
    let exchange = tensor_product(&sp, &a);
    h += (&exchange + exchange.adjoint()) * C64::from(params.lam);

    let mut ops = Vec::new();
    if params.kappa > 0.0 {
        ops.push(tensor_product(&id_atom, &a) * C64::from(params.kappa.sqrt()));
    }
    LindbladModel::new(h, ops, space)
}

/// Absorption spectrum Im χ(Ω) evaluated pointwise on `omega_grid`:
///
/// ```text
///   cos²θ · (Γ₋/π) / (Γ₋² + {Ω − ω₀ + Δ/2 − R/2}²)
/// + sin²θ · (Γ₊/π) / (Γ₊² + {Ω − ω₀ + Δ/2 + R/2}²),   R = √(Δ² + 4Nλ²)
/// ```
pub fn absorption_spectrum(params: &RabiSpectrumParams, omega_grid: &[f64]) -> Vec<f64> {
    let r = (params.detuning.powi(2) + 4.0 * params.n_atoms as f64 * params.lam.powi(2)).sqrt();
    let (cos2, sin2) = (params.theta.cos().powi(2), params.theta.sin().powi(2));
    let base = params.omega0 - params.detuning / 2.0;
    omega_grid
        .iter()
        .map(|&omega| {
            let upper = omega - base - r / 2.0;
            let lower = omega - base + r / 2.0;
            cos2 * (params.gamma_minus / std::f64::consts::PI)
                / (params.gamma_minus.powi(2) + upper * upper)
                + sin2 * (params.gamma_plus / std::f64::consts::PI)
                    / (params.gamma_plus.powi(2) + lower * lower)
        })
        .collect()
}

/// Doublet peak positions Ω∓ = ω₀ − Δ/2 ∓ ½√(Δ² + 4Nλ²), returned as
/// (lower, upper).
pub fn rabi_peak_positions(omega0: f64, detuning: f64, lam: f64, n_atoms: usize) -> (f64, f64) {
    let r = (detuning.powi(2) + 4.0 * n_atoms as f64 * lam.powi(2)).sqrt();
    let center = omega0 - detuning / 2.0;
    (center - r / 2.0, center + r / 2.0)
}

/// Dispersive probe phase Δφ = ω_ef·t + λ²·n·t/Δ. Invalid at Δ = 0, where
/// the dispersive expansion breaks down.
pub fn probe_phase_shift(
    omega_ef: f64,
    lam: f64,
    n_photons: f64,
    detuning: f64,
    t: f64,
) -> Result<f64> {
    if detuning == 0.0 {
        return Err(Error::InvalidArgument(
            "dispersive phase shift undefined at zero detuning".into(),
        ));
    }
    Ok(omega_ef * t + lam * lam * n_photons * t / detuning)
}

/// Normalized atom-meter superposition |e⟩⊗|αe^{iφ}⟩ + |g⟩⊗|αe^{−iφ}⟩ on
/// the (atom ⊗ field) space; atom index 0 is |g⟩, index 1 is |e⟩.
pub fn cat_state(alpha: C64, phi: f64, n_max: usize) -> Result<Ket> {
    let rot = C64::new(0.0, phi).exp();
    let field_plus = coherent_state(alpha * rot, n_max)?;
    let field_minus = coherent_state(alpha * rot.conj(), n_max)?;
    let atom_space = HilbertSpace::single(2, "atom")?;
    let ground = Ket::basis_state(0, atom_space.clone())?;
    let excited = Ket::basis_state(1, atom_space)?;
    let mut amplitudes = excited.tensor(&field_plus)?.amplitudes().clone();
    amplitudes += ground.tensor(&field_minus)?.amplitudes();
    let space = HilbertSpace::new(vec![2, n_max + 1], vec!["atom".into(), "field".into()])?;
    Ket::new(amplitudes, space)?.normalized()
}

/// Pointer-state distance D = 2√n̄ · sin φ between the two field components
/// of the cat.
pub fn cat_distance(n_bar: f64, phi: f64) -> f64 {
    2.0 * n_bar.sqrt() * phi.sin()
}

/// Small-angle form D ≈ 2 n̄^{3/2} λ²t/Δ, valid while λ²·t·n̄/Δ ≪ 1.
pub fn cat_distance_small_angle(n_bar: f64, lam: f64, t: f64, detuning: f64) -> Result<f64> {
    if detuning == 0.0 {
        return Err(Error::InvalidArgument(
            "dispersive distance undefined at zero detuning".into(),
        ));
    }
    Ok(2.0 * n_bar.powf(1.5) * lam * lam * t / detuning)
}

/// Decoherence time t = 2T_r/D². D = 0 never decoheres and returns the
/// explicit `f64::INFINITY` marker.
pub fn decoherence_time(t_r: f64, distance: f64) -> Result<f64> {
    if t_r <= 0.0 {
        return Err(Error::InvalidArgument("relaxation time must be positive".into()));
    }
    if distance < 0.0 {
        return Err(Error::InvalidArgument("pointer distance must be non-negative".into()));
    }
    if distance == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(2.0 * t_r / (distance * distance))
}
