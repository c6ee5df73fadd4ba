//! Shared numerical helpers: vectorization, adaptive integration and
//! deterministic reductions.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::C64;

/// Column-stacking vectorization: `vec(ρ)` stacks the columns of ρ, so
/// `vec(A X B) = (Bᵀ ⊗ A) vec(X)`. Matrices are stored column-major, making
/// this a reinterpretation of the raw buffer.
pub fn vectorize(m: &DMatrix<C64>) -> DVector<C64> {
    DVector::from_column_slice(m.as_slice())
}

/// Inverse of [`vectorize`] for a square d×d matrix.
pub fn unvectorize(v: &DVector<C64>, dim: usize) -> DMatrix<C64> {
    DMatrix::from_column_slice(dim, dim, v.as_slice())
}

/// (m + m†)/2.
pub fn hermitize(m: &DMatrix<C64>) -> DMatrix<C64> {
    (m + m.adjoint()) / C64::from(2.0)
}

/// Frobenius distance ‖a − b‖.
pub fn frobenius_distance(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    (a - b).norm()
}

/// Sums matrices with a fixed pairwise tree, independent of thread schedule,
/// so parallel producers still reduce to bit-identical results.
pub fn pairwise_sum(items: &[DMatrix<C64>]) -> DMatrix<C64> {
    assert!(!items.is_empty(), "pairwise_sum of empty slice");
    if items.len() == 1 {
        return items[0].clone();
    }
    let mid = items.len() / 2;
    pairwise_sum(&items[..mid]) + pairwise_sum(&items[mid..])
}

// Dormand-Prince 5(4) coefficients.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] =
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Adaptive Dormand-Prince 5(4) integration of the autonomous matrix ODE
/// `y' = rhs(y)` from `t0` to `t1`, with per-step error control at relative
/// tolerance `rtol` (plus absolute floor `atol`).
pub fn integrate_adaptive<F>(
    rhs: F,
    y0: &DMatrix<C64>,
    t0: f64,
    t1: f64,
    rtol: f64,
    atol: f64,
) -> Result<DMatrix<C64>>
where
    F: Fn(&DMatrix<C64>) -> DMatrix<C64>,
{
    let span = t1 - t0;
    if span == 0.0 {
        return Ok(y0.clone());
    }
    if span < 0.0 {
        return Err(Error::InvalidArgument("integration backwards in time".into()));
    }

    let mut y = y0.clone();
    let mut t = t0;
    let mut h = span / 16.0;
    let min_step = span * 1e-14;
    let mut k: Vec<DMatrix<C64>> = Vec::with_capacity(7);

    while t < t1 {
        if t + h > t1 {
            h = t1 - t;
        }
        k.clear();
        k.push(rhs(&y));
        for coeffs in &A {
            let mut arg = y.clone();
            for (j, kj) in k.iter().enumerate() {
                if coeffs[j] != 0.0 {
                    arg += kj * C64::from(coeffs[j] * h);
                }
            }
            k.push(rhs(&arg));
        }
        let mut y5 = y.clone();
        let mut y4 = y.clone();
        for (j, kj) in k.iter().enumerate() {
            if B5[j] != 0.0 {
                y5 += kj * C64::from(B5[j] * h);
            }
            if B4[j] != 0.0 {
                y4 += kj * C64::from(B4[j] * h);
            }
        }

        // max-norm error relative to the solution scale
        let mut err: f64 = 0.0;
        for ((e5, e4), old) in y5.iter().zip(y4.iter()).zip(y.iter()) {
            let scale = atol + rtol * e5.norm().max(old.norm());
            err = err.max((e5 - e4).norm() / scale);
        }
        if !err.is_finite() {
            return Err(Error::IntegrationFailure {
                time: t,
                reason: "non-finite integration error estimate".into(),
            });
        }

        if err <= 1.0 {
            t += h;
            y = y5;
        }
        let factor = if err > 0.0 { 0.9 * err.powf(-0.2) } else { 5.0 };
        h *= factor.clamp(0.2, 5.0);
        if h < min_step {
            return Err(Error::IntegrationFailure {
                time: t,
                reason: format!("step size underflow (h = {h:.3e})"),
            });
        }
    }
    Ok(y)
}
