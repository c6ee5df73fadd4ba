//! Neutral-kaon density-matrix phenomenology with environmental decoherence.
//!
//! States live in the CP basis {|K₁⟩, |K₂⟩} and are tracked as real Pauli
//! components ρ = ½ Σ_μ ρ_μ σ_μ (σ₀ = 1, σ₃ = diag(1, −1)), so ρ₀ is the
//! trace, ρ₃ the K₁/K₂ population difference and (ρ₁, ρ₂) the coherences.
//! The evolution
//!
//! ```text
//!   ∂ρ/∂t = −i(Hρ − ρH†) + δH ρ
//! ```
//!
//! combines the Wigner-Weisskopf Hamiltonian — eigenstates
//! |K_S⟩ ∝ |K₁⟩ + ε|K₂⟩, |K_L⟩ ∝ |K₂⟩ + ε|K₁⟩ with eigenvalues
//! m_S − iΓ_S/2 and m_L − iΓ_L/2 — with the decoherence term δH acting on
//! the Pauli 4-vector as a matrix that vanishes outside the (σ₂, σ₃) block:
//!
//! ```text
//!   δH = ⎡ 0  0   0    0  ⎤
//!        ⎢ 0  0   0    0  ⎥
//!        ⎢ 0  0  −2α  −2β ⎥
//!        ⎣ 0  0  −2β  −2γ ⎦
//! ```
//!
//! The zero rows preserve probability and the σ₁ component; positivity of ρ
//! demands α > 0, γ > 0 and αγ > β² (strict) whenever any parameter is
//! switched on. Only the mass difference Δm = m_L − m_S is observable here,
//! so the Hamiltonian is built with m_S = 0. All quantities are in GeV
//! (times in GeV⁻¹, with τ_S = 1/Γ_S).

use nalgebra::{Matrix2, Matrix4, Vector2, Vector4};

use crate::error::{Error, Result};
use crate::C64;

/// ħ in GeV·s, for converting GeV⁻¹ times into seconds.
pub const HBAR_GEV_SECONDS: f64 = 6.582e-25;

/// Default K_S width in GeV.
pub const DEFAULT_GAMMA_S: f64 = 7.351e-15;
/// Default K_L width in GeV.
pub const DEFAULT_GAMMA_L: f64 = 1.286e-17;
/// Default mass difference m_L − m_S in GeV.
pub const DEFAULT_DELTA_M: f64 = 3.484e-15;
/// Default CP-violation parameter (taken real).
pub const DEFAULT_EPSILON: f64 = 2.23e-3;

/// Kaon-system constants plus the (α, β, γ) decoherence parameters, GeV.
#[derive(Debug, Clone, Copy)]
pub struct KaonParams {
    pub gamma_s: f64,
    pub gamma_l: f64,
    /// Δm = m_L − m_S.
    pub delta_m: f64,
    pub epsilon: C64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl KaonParams {
    /// Standard constants with decoherence switched off.
    pub fn qm_defaults() -> Self {
        Self {
            gamma_s: DEFAULT_GAMMA_S,
            gamma_l: DEFAULT_GAMMA_L,
            delta_m: DEFAULT_DELTA_M,
            epsilon: C64::from(DEFAULT_EPSILON),
            alpha: 0.0,
            beta: 0.0,
            gamma: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma_s > self.gamma_l && self.gamma_l > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "need Γ_S > Γ_L > 0, got Γ_S = {:.4e}, Γ_L = {:.4e}",
                self.gamma_s, self.gamma_l
            )));
        }
        if self.delta_m <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "need Δm > 0, got {:.4e}",
                self.delta_m
            )));
        }
        if !check_positivity(self.alpha, self.beta, self.gamma) {
            return Err(Error::PositivityConstraint {
                alpha: self.alpha,
                beta: self.beta,
                gamma: self.gamma,
            });
        }
        Ok(())
    }

    /// K_S lifetime τ_S = 1/Γ_S in GeV⁻¹.
    pub fn tau_s(&self) -> f64 {
        1.0 / self.gamma_s
    }
}

/// Published upper limits on (α, β, γ) as preset parameter values, on top
/// of the standard constants.
pub fn preset_cplear_bounds() -> KaonParams {
    KaonParams { alpha: 4.0e-17, beta: 2.3e-19, gamma: 3.7e-21, ..KaonParams::qm_defaults() }
}

/// Positivity of the decoherence parametrization: either all three vanish
/// (the purely quantum-mechanical limit) or α > 0, γ > 0, αγ > β², strictly.
pub fn check_positivity(alpha: f64, beta: f64, gamma: f64) -> bool {
    if alpha == 0.0 && beta == 0.0 && gamma == 0.0 {
        return true;
    }
    alpha > 0.0 && gamma > 0.0 && alpha * gamma > beta * beta
}

/// Kaon state as the real Pauli 4-vector (ρ₀, ρ₁, ρ₂, ρ₃) in the K₁/K₂
/// basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KaonState {
    pauli_components: [f64; 4],
}

impl KaonState {
    pub fn new(pauli_components: [f64; 4]) -> Result<Self> {
        let [r0, r1, r2, r3] = pauli_components;
        if r0 <= 0.0 || r0.is_nan() {
            return Err(Error::InvalidTrace { trace: r0 });
        }
        let r_sq = r1 * r1 + r2 * r2 + r3 * r3;
        if r_sq > r0 * r0 + 1e-12 {
            return Err(Error::PositivityViolation {
                min_eigenvalue: (r0 - r_sq.sqrt()) / 2.0,
            });
        }
        Ok(Self { pauli_components })
    }

    /// Strangeness eigenstate |K⁰⟩ = (|K₁⟩ + |K₂⟩)/√2.
    pub fn pure_k0() -> Self {
        Self { pauli_components: [1.0, 1.0, 0.0, 0.0] }
    }

    /// Strangeness eigenstate |K̄⁰⟩ = (|K₁⟩ − |K₂⟩)/√2.
    pub fn pure_k0_bar() -> Self {
        Self { pauli_components: [1.0, -1.0, 0.0, 0.0] }
    }

    /// CP-even |K₁⟩.
    pub fn pure_k1() -> Self {
        Self { pauli_components: [1.0, 0.0, 0.0, 1.0] }
    }

    /// CP-odd |K₂⟩.
    pub fn pure_k2() -> Self {
        Self { pauli_components: [1.0, 0.0, 0.0, -1.0] }
    }

    pub fn pauli_components(&self) -> [f64; 4] {
        self.pauli_components
    }

    /// Trace of the 2×2 density matrix.
    pub fn trace(&self) -> f64 {
        self.pauli_components[0]
    }

    /// The 2×2 density matrix ½ Σ ρ_μ σ_μ.
    pub fn to_matrix(&self) -> Matrix2<C64> {
        let [r0, r1, r2, r3] = self.pauli_components;
        Matrix2::new(
            C64::from((r0 + r3) / 2.0),
            C64::new(r1 / 2.0, -r2 / 2.0),
            C64::new(r1 / 2.0, r2 / 2.0),
            C64::from((r0 - r3) / 2.0),
        )
    }

    /// Normalized purity Tr(ρ²)/Tr(ρ)².
    pub fn purity(&self) -> f64 {
        let [r0, r1, r2, r3] = self.pauli_components;
        (r0 * r0 + r1 * r1 + r2 * r2 + r3 * r3) / (2.0 * r0 * r0)
    }

    /// Von Neumann entropy of ρ/tr ρ in nats.
    pub fn entropy(&self) -> f64 {
        let [r0, r1, r2, r3] = self.pauli_components;
        let r = (r1 * r1 + r2 * r2 + r3 * r3).sqrt() / r0;
        let h = |p: f64| if p > 0.0 { -p * p.ln() } else { 0.0 };
        h((1.0 + r) / 2.0) + h((1.0 - r) / 2.0)
    }
}

/// Wigner-Weisskopf Hamiltonian in the K₁/K₂ basis with m_S = 0.
pub fn kaon_hamiltonian(gamma_s: f64, gamma_l: f64, delta_m: f64, epsilon: C64) -> Matrix2<C64> {
    let norm = (1.0 + epsilon.norm_sqr()).sqrt();
    let k_s = Vector2::new(C64::ONE / norm, epsilon / norm);
    let k_l = Vector2::new(epsilon / norm, C64::ONE / norm);
    let lambda_s = C64::new(0.0, -gamma_s / 2.0);
    let lambda_l = C64::new(delta_m, -gamma_l / 2.0);
    (k_s * k_s.adjoint()) * lambda_s + (k_l * k_l.adjoint()) * lambda_l
}

fn pauli_matrices() -> [Matrix2<C64>; 4] {
    let o = C64::ZERO;
    let l = C64::ONE;
    let i = C64::new(0.0, 1.0);
    [
        Matrix2::new(l, o, o, l),
        Matrix2::new(o, l, l, o),
        Matrix2::new(o, -i, i, o),
        Matrix2::new(l, o, o, -l),
    ]
}

/// Generator of ∂ρ_μ/∂t = Σ_ν G_{μν} ρ_ν: the quantum-mechanical part
/// projected onto the Pauli basis plus the δH block on (σ₂, σ₃).
///
/// No physical-parameter validation is applied; zero widths give the
/// Hermitian (unitary) limit used by abstract-model tests.
pub fn pauli_generator(
    gamma_s: f64,
    gamma_l: f64,
    delta_m: f64,
    epsilon: C64,
    alpha: f64,
    beta: f64,
    gamma: f64,
) -> Matrix4<f64> {
    let h = kaon_hamiltonian(gamma_s, gamma_l, delta_m, epsilon);
    let sigma = pauli_matrices();
    let minus_i = C64::new(0.0, -1.0);
    let mut g = Matrix4::zeros();
    for nu in 0..4 {
        let l_nu = (h * sigma[nu] - sigma[nu] * h.adjoint()) * minus_i;
        for mu in 0..4 {
            g[(mu, nu)] = 0.5 * (sigma[mu] * l_nu).trace().re;
        }
    }
    g[(2, 2)] += -2.0 * alpha;
    g[(2, 3)] += -2.0 * beta;
    g[(3, 2)] += -2.0 * beta;
    g[(3, 3)] += -2.0 * gamma;
    g
}

/// Validated generator for physical parameters.
pub fn build_kaon_generator(params: &KaonParams) -> Result<Matrix4<f64>> {
    params.validate()?;
    Ok(pauli_generator(
        params.gamma_s,
        params.gamma_l,
        params.delta_m,
        params.epsilon,
        params.alpha,
        params.beta,
        params.gamma,
    ))
}

/// Exact matrix-exponential propagation of the 4×4 generator over `times`
/// (GeV⁻¹, starting at 0, strictly increasing).
pub fn evolve_kaon(params: &KaonParams, state0: &KaonState, times: &[f64]) -> Result<Vec<KaonState>> {
    let generator = build_kaon_generator(params)?;
    evolve_generator(&generator, state0, times)
}

/// Propagation under an explicit generator (shared by the physical and
/// abstract-model paths).
pub fn evolve_generator(
    generator: &Matrix4<f64>,
    state0: &KaonState,
    times: &[f64],
) -> Result<Vec<KaonState>> {
    if times.is_empty() || times[0] != 0.0 {
        return Err(Error::InvalidArgument("time grid must start at 0".into()));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("time grid must be strictly increasing".into()));
    }
    let v0 = Vector4::from_column_slice(&state0.pauli_components());
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        let v = (generator * t).exp() * v0;
        let state = KaonState::new([v[0], v[1], v[2], v[3]])?;
        // eigenvalues (ρ0 ± |r|)/2 must stay non-negative relative to ρ0
        let [r0, r1, r2, r3] = state.pauli_components();
        let min_eig = (r0 - (r1 * r1 + r2 * r2 + r3 * r3).sqrt()) / 2.0;
        if min_eig < -1e-9 * r0 {
            return Err(Error::PositivityViolation { min_eigenvalue: min_eig });
        }
        out.push(state);
    }
    Ok(out)
}

/// Decay-rate observable Tr(O ρ) for a Hermitian 2×2 operator O; states are
/// left unnormalized, so rates inherit the physical decay of the trace.
pub fn rate(state: &KaonState, observable: &Matrix2<C64>) -> Result<f64> {
    let defect = (observable - observable.adjoint()).norm();
    if defect > 1e-12 {
        return Err(Error::NotHermitian { deviation: defect });
    }
    Ok((observable * state.to_matrix()).trace().re)
}

/// Two-pion decay observable |K₁⟩⟨K₁| (leading order in ε).
pub fn obs_two_pion() -> Matrix2<C64> {
    Matrix2::new(C64::ONE, C64::ZERO, C64::ZERO, C64::ZERO)
}

/// Right-sign semileptonic tag |K⁰⟩⟨K⁰| (ℓ⁺ν final states).
pub fn obs_semileptonic_plus() -> Matrix2<C64> {
    let h = C64::from(0.5);
    Matrix2::new(h, h, h, h)
}

/// Wrong-sign semileptonic tag |K̄⁰⟩⟨K̄⁰| (ℓ⁻ν̄ final states).
pub fn obs_semileptonic_minus() -> Matrix2<C64> {
    let h = C64::from(0.5);
    Matrix2::new(h, -h, -h, h)
}

fn evolve_tagged_pair(
    params: &KaonParams,
    times: &[f64],
) -> Result<(Vec<KaonState>, Vec<KaonState>)> {
    let k0 = evolve_kaon(params, &KaonState::pure_k0(), times)?;
    let k0_bar = evolve_kaon(params, &KaonState::pure_k0_bar(), times)?;
    Ok((k0, k0_bar))
}

/// Two-pion decay asymmetry between K̄⁰- and K⁰-tagged beams,
/// A_{2π}(t) = [Tr(O ρ̄) − Tr(O ρ)]/[Tr(O ρ̄) + Tr(O ρ)]. A vanishing
/// denominator is reported as NaN.
pub fn asymmetry_2pi(params: &KaonParams, times: &[f64]) -> Result<Vec<f64>> {
    let o = obs_two_pion();
    let (k0, k0_bar) = evolve_tagged_pair(params, times)?;
    k0.iter()
        .zip(&k0_bar)
        .map(|(rho, rho_bar)| {
            let x = rate(rho, &o)?;
            let x_bar = rate(rho_bar, &o)?;
            let den = x_bar + x;
            Ok(if den == 0.0 { f64::NAN } else { (x_bar - x) / den })
        })
        .collect()
}

/// Double semileptonic asymmetry
/// A_{Δm}(t) = [R(K⁰→π⁺) + R(K̄⁰→π⁻) − R(K̄⁰→π⁺) − R(K⁰→π⁻)] / (sum of all
/// four), where π⁺ accompanies ℓ⁻ν̄ (K̄⁰ content) and π⁻ accompanies ℓ⁺ν
/// (K⁰ content). A vanishing denominator is reported as NaN.
pub fn asymmetry_dm(params: &KaonParams, times: &[f64]) -> Result<Vec<f64>> {
    let o_plus = obs_semileptonic_plus();
    let o_minus = obs_semileptonic_minus();
    let (k0, k0_bar) = evolve_tagged_pair(params, times)?;
    k0.iter()
        .zip(&k0_bar)
        .map(|(rho, rho_bar)| {
            let r_k0_pip = rate(rho, &o_minus)?;
            let r_k0_pim = rate(rho, &o_plus)?;
            let r_bar_pip = rate(rho_bar, &o_minus)?;
            let r_bar_pim = rate(rho_bar, &o_plus)?;
            let num = r_k0_pip + r_bar_pim - r_bar_pip - r_k0_pim;
            let den = r_k0_pip + r_bar_pim + r_bar_pip + r_k0_pim;
            Ok(if den == 0.0 { f64::NAN } else { num / den })
        })
        .collect()
}
