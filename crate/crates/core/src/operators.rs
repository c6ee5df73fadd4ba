//! Common operator builders.
//!
//! Pauli matrices use the convention σ_z = diag(1, −1), so basis index 0 is
//! the +1 eigenstate of σ_z and σ⁻ lowers index 0 → 1. Bosonic ladder
//! operators use Fock ordering (index n = n quanta).

use nalgebra::DMatrix;

use crate::C64;

pub fn identity(dim: usize) -> DMatrix<C64> {
    DMatrix::identity(dim, dim)
}

/// Annihilation operator a with ⟨n−1|a|n⟩ = √n on a dim-dimensional
/// truncated Fock space.
pub fn annihilation(dim: usize) -> DMatrix<C64> {
    let mut a = DMatrix::from_element(dim, dim, C64::ZERO);
    for n in 1..dim {
        a[(n - 1, n)] = C64::from((n as f64).sqrt());
    }
    a
}

/// Number operator a†a = diag(0, 1, …, dim−1).
pub fn number(dim: usize) -> DMatrix<C64> {
    DMatrix::from_fn(dim, dim, |i, j| if i == j { C64::from(i as f64) } else { C64::ZERO })
}

pub fn sigma_x() -> DMatrix<C64> {
    DMatrix::from_row_slice(2, 2, &[C64::ZERO, C64::ONE, C64::ONE, C64::ZERO])
}

pub fn sigma_y() -> DMatrix<C64> {
    DMatrix::from_row_slice(
        2,
        2,
        &[C64::ZERO, C64::new(0.0, -1.0), C64::new(0.0, 1.0), C64::ZERO],
    )
}

pub fn sigma_z() -> DMatrix<C64> {
    DMatrix::from_row_slice(2, 2, &[C64::ONE, C64::ZERO, C64::ZERO, -C64::ONE])
}

/// σ⁺ = (σ_x + iσ_y)/2 = |0⟩⟨1|.
pub fn sigma_plus() -> DMatrix<C64> {
    DMatrix::from_row_slice(2, 2, &[C64::ZERO, C64::ONE, C64::ZERO, C64::ZERO])
}

/// σ⁻ = (σ_x − iσ_y)/2 = |1⟩⟨0|.
pub fn sigma_minus() -> DMatrix<C64> {
    DMatrix::from_row_slice(2, 2, &[C64::ZERO, C64::ZERO, C64::ONE, C64::ZERO])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_algebra() {
        let dim = 6;
        let a = annihilation(dim);
        let n = a.adjoint() * &a;
        // a†a matches the number operator on the untruncated block
        let num = number(dim);
        for i in 0..dim {
            assert!((n[(i, i)] - num[(i, i)]).norm() < 1e-14);
        }
        // [a, a†] = 1 except at the truncation edge
        let comm = &a * a.adjoint() - a.adjoint() * &a;
        for i in 0..dim - 1 {
            assert!((comm[(i, i)] - C64::ONE).norm() < 1e-14);
        }
    }

    #[test]
    fn pauli_algebra() {
        let prod = sigma_x() * sigma_y();
        let expect = sigma_z() * C64::new(0.0, 1.0);
        assert_eq!(prod, expect);
        assert_eq!(sigma_plus(), (sigma_x() + sigma_y() * C64::new(0.0, 1.0)) / C64::from(2.0));
        assert_eq!(sigma_minus(), sigma_plus().adjoint());
    }
}
