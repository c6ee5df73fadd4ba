//! Order-of-magnitude estimators for gravitational-environment decoherence:
//! a Gaussian envelope for the off-diagonal density-matrix elements of an
//! N-particle system, the single-particle coupling estimate D ~ m⁶/M_P³
//! (one source per Planck volume), and the generic E²/M_P magnitude.
//!
//! Everything is in natural units (GeV powers). Conversion constants used
//! throughout: 1 s = 1.519e24 GeV⁻¹, 1 cm = 5.068e13 GeV⁻¹.
//! These are qualitative scaling estimates, not measured constants.

use crate::error::{Error, Result};

/// 1 second in GeV⁻¹.
pub const SECOND_IN_INV_GEV: f64 = 1.519e24;

/// 1 centimeter in GeV⁻¹.
pub const CM_IN_INV_GEV: f64 = 5.068e13;

/// Planck mass in GeV.
pub const DEFAULT_PLANCK_MASS: f64 = 1.22e19;

/// Source parameters of the decoherence envelope.
#[derive(Debug, Clone, Copy)]
pub struct FoamParams {
    /// Particle count N (can exceed integer range; stored as f64).
    pub n_particles: f64,
    /// Single-particle decoherence coupling D in GeV³.
    pub coupling_d: f64,
    /// Planck mass in GeV.
    pub planck_mass: f64,
    /// Probe particle mass in GeV.
    pub particle_mass: f64,
}

impl FoamParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("n_particles", self.n_particles),
            ("coupling_d", self.coupling_d),
            ("planck_mass", self.planck_mass),
            ("particle_mass", self.particle_mass),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

/// Exponent N·D·ΔX²·t of the envelope (dimensionless: GeV³·GeV⁻²·GeV⁻¹).
pub fn envelope_exponent(n_particles: f64, coupling_d: f64, separation: f64, t: f64) -> f64 {
    n_particles * coupling_d * separation * separation * t
}

/// Suppression exp[−N·D·ΔX²·t] of an off-diagonal element between pointer
/// positions separated by ΔX (GeV⁻¹), after time t (GeV⁻¹).
pub fn wormhole_envelope(
    n_particles: f64,
    coupling_d: f64,
    separation: f64,
    t: f64,
) -> Result<f64> {
    if t < 0.0 {
        return Err(Error::InvalidArgument(format!("time must be non-negative, got {t}")));
    }
    Ok((-envelope_exponent(n_particles, coupling_d, separation, t)).exp())
}

/// Single-particle coupling estimate D = m⁶/M_P³ (GeV³), assuming one
/// vacuum source per Planck volume.
pub fn coupling_estimate(particle_mass: f64, planck_mass: f64) -> Result<f64> {
    if particle_mass <= 0.0 || planck_mass <= 0.0 {
        return Err(Error::InvalidArgument("masses must be positive".into()));
    }
    Ok(particle_mass.powi(6) / planck_mass.powi(3))
}

/// Maximum magnitude E²/M_P (GeV) of the decoherence term for a probe of
/// energy scale E.
pub fn delta_h_magnitude(energy_scale: f64, planck_mass: f64) -> Result<f64> {
    if energy_scale <= 0.0 || planck_mass <= 0.0 {
        return Err(Error::InvalidArgument("scales must be positive".into()));
    }
    Ok(energy_scale * energy_scale / planck_mass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::rngs::StdRng;
    use rand::{RngExt, SeedableRng};

    #[test]
    fn zero_separation_leaves_diagonal_untouched() {
        assert_eq!(wormhole_envelope(1e20, 1e-58, 0.0, 1e24).unwrap(), 1.0);
    }

    #[test]
    fn exponent_scaling_laws() {
        let (n, d, dx, t) = (3.0e10, 2.5e-40, 4.0e5, 9.0e10);
        let base = envelope_exponent(n, d, dx, t);
        // exactly linear in N, quadratic in ΔX
        assert_relative_eq!(envelope_exponent(2.0 * n, d, dx, t) / base, 2.0, epsilon = 1e-12);
        assert_relative_eq!(envelope_exponent(n, d, 2.0 * dx, t) / base, 4.0, epsilon = 1e-12);
    }

    #[test]
    fn macroscopic_collapse_regime() {
        // N = 10²³ protons, 1 cm apart for 1 s: the exponent is ~1.5e17 and
        // the envelope collapses to zero
        let d = coupling_estimate(0.938, DEFAULT_PLANCK_MASS).unwrap();
        let exponent = envelope_exponent(1e23, d, CM_IN_INV_GEV, SECOND_IN_INV_GEV);
        assert!((exponent / 1.47e17 - 1.0).abs() < 0.01, "exponent = {exponent:.3e}");
        assert_eq!(wormhole_envelope(1e23, d, CM_IN_INV_GEV, SECOND_IN_INV_GEV).unwrap(), 0.0);
    }

    #[test]
    fn envelope_bounds_and_monotonicity() {
        let mut rng = StdRng::seed_from_u64(63);
        for _ in 0..50 {
            let n = 10f64.powf(rng.random_range(0.0..23.0));
            let d = 10f64.powf(rng.random_range(-60.0..-30.0));
            let dx = 10f64.powf(rng.random_range(0.0..14.0));
            let t = 10f64.powf(rng.random_range(0.0..24.0));
            let e = wormhole_envelope(n, d, dx, t).unwrap();
            assert!(e > 0.0 || envelope_exponent(n, d, dx, t) > 700.0);
            assert!(e <= 1.0);
            assert!(wormhole_envelope(2.0 * n, d, dx, t).unwrap() <= e);
            assert!(wormhole_envelope(n, d, 2.0 * dx, t).unwrap() <= e);
            assert!(wormhole_envelope(n, d, dx, 2.0 * t).unwrap() <= e);
        }
    }

    #[test]
    fn exponent_is_dimensionally_consistent() {
        // (D, ΔX, t) → (s³D, ΔX/s, t/s) leaves the product unchanged
        let (n, d, dx, t) = (1e5, 3e-45, 2e7, 5e12);
        let base = envelope_exponent(n, d, dx, t);
        for s in [1e-3, 7.0, 1e4] {
            let scaled = envelope_exponent(n, s * s * s * d, dx / s, t / s);
            assert_relative_eq!(scaled / base, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn coupling_estimate_values() {
        let d1 = coupling_estimate(1.0, 1.22e19).unwrap();
        assert!((d1 / 5.51e-58 - 1.0).abs() < 1e-3, "D(1 GeV) = {d1:.3e}");
        let dp = coupling_estimate(0.938, 1.22e19).unwrap();
        assert!((dp / 3.75e-58 - 1.0).abs() < 1e-3, "D(m_p) = {dp:.3e}");
        // m⁶ scaling
        assert_relative_eq!(
            coupling_estimate(2.0, 1.22e19).unwrap() / d1,
            64.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn delta_h_magnitude_values() {
        let kaon = delta_h_magnitude(0.497648, DEFAULT_PLANCK_MASS).unwrap();
        assert!((kaon / 2.03e-20 - 1.0).abs() < 1e-2, "kaon scale = {kaon:.3e}");
        assert!((1e-20..1e-19).contains(&kaon));
        let gev = delta_h_magnitude(1.0, DEFAULT_PLANCK_MASS).unwrap();
        assert!((gev / 8.20e-20 - 1.0).abs() < 1e-3);
        // quadratic scaling
        assert_relative_eq!(delta_h_magnitude(2.0, 1.22e19).unwrap() / gev, 4.0, epsilon = 1e-12);
    }

    #[test]
    fn rejects_invalid_inputs() {
        assert!(wormhole_envelope(1.0, 1.0, 1.0, -1.0).is_err());
        assert!(coupling_estimate(-1.0, 1.0).is_err());
        assert!(delta_h_magnitude(0.0, 1.0).is_err());
        let p = FoamParams {
            n_particles: 0.0,
            coupling_d: 1.0,
            planck_mass: 1.0,
            particle_mass: 1.0,
        };
        assert!(p.validate().is_err());
    }
}
