//! Dense complex linear algebra for small Hilbert spaces: state vectors,
//! density matrices, tensor products, partial traces and information
//! measures.
//!
//! Tensor factors are ordered slowest-first: for a space `A ⊗ B`, the basis
//! index is `i_A * dim(B) + i_B`. All matrices are dense `Complex64`; the
//! total dimension is capped at [`DIM_CAP`].

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::C64;

/// Hard cap on the total Hilbert-space dimension.
pub const DIM_CAP: usize = 4096;

/// Absolute entrywise tolerance for Hermiticity checks.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Eigenvalues of a density matrix must stay above this floor.
pub const POSITIVITY_TOL: f64 = 1e-9;

/// Slack allowed on `tr ρ ≤ 1`.
pub const TRACE_TOL: f64 = 1e-12;

/// Tensor-product structure of a Hilbert space: one dimension per factor,
/// with a human-readable label each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertSpace {
    factor_dims: Vec<usize>,
    labels: Vec<String>,
}

impl HilbertSpace {
    pub fn new(factor_dims: Vec<usize>, labels: Vec<String>) -> Result<Arc<Self>> {
        if factor_dims.is_empty() {
            return Err(Error::InvalidArgument("space needs at least one factor".into()));
        }
        if factor_dims.len() != labels.len() {
            return Err(Error::InvalidArgument(format!(
                "{} factor dims but {} labels",
                factor_dims.len(),
                labels.len()
            )));
        }
        if factor_dims.contains(&0) {
            return Err(Error::InvalidArgument("factor dimensions must be ≥ 1".into()));
        }
        let dim: usize = factor_dims.iter().product();
        if dim > DIM_CAP {
            return Err(Error::InvalidArgument(format!(
                "total dimension {dim} exceeds cap {DIM_CAP}"
            )));
        }
        Ok(Arc::new(Self { factor_dims, labels }))
    }

    /// Single-factor space.
    pub fn single(dim: usize, label: &str) -> Result<Arc<Self>> {
        Self::new(vec![dim], vec![label.to_string()])
    }

    /// Concatenates the factors of `self` (slow) and `other` (fast).
    pub fn compose(&self, other: &Self) -> Result<Arc<Self>> {
        let mut dims = self.factor_dims.clone();
        dims.extend_from_slice(&other.factor_dims);
        let mut labels = self.labels.clone();
        labels.extend_from_slice(&other.labels);
        Self::new(dims, labels)
    }

    pub fn dim(&self) -> usize {
        self.factor_dims.iter().product()
    }

    pub fn factor_dims(&self) -> &[usize] {
        &self.factor_dims
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn n_factors(&self) -> usize {
        self.factor_dims.len()
    }
}

/// Pure state vector on a [`HilbertSpace`].
#[derive(Debug, Clone)]
pub struct Ket {
    amplitudes: DVector<C64>,
    space: Arc<HilbertSpace>,
}

impl Ket {
    pub fn new(amplitudes: DVector<C64>, space: Arc<HilbertSpace>) -> Result<Self> {
        if amplitudes.len() != space.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for a dimension-{} space",
                amplitudes.len(),
                space.dim()
            )));
        }
        Ok(Self { amplitudes, space })
    }

    /// Basis state |i⟩.
    pub fn basis_state(index: usize, space: Arc<HilbertSpace>) -> Result<Self> {
        let dim = space.dim();
        if index >= dim {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut amplitudes = DVector::from_element(dim, C64::ZERO);
        amplitudes[index] = C64::ONE;
        Ok(Self { amplitudes, space })
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn space(&self) -> &Arc<HilbertSpace> {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// Returns a unit-norm copy.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::InvalidArgument(format!("cannot normalize state of norm {n}")));
        }
        Ok(Self {
            amplitudes: &self.amplitudes / C64::from(n),
            space: Arc::clone(&self.space),
        })
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &Ket) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch("inner product of unequal dimensions".into()));
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// |self⟩⟨self| as a raw matrix.
    pub fn projector(&self) -> DMatrix<C64> {
        &self.amplitudes * self.amplitudes.adjoint()
    }

    /// ⟨ψ|O|ψ⟩.
    pub fn expectation(&self, op: &DMatrix<C64>) -> Result<C64> {
        if op.nrows() != self.dim() || op.ncols() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "operator is {}x{}, state dimension {}",
                op.nrows(),
                op.ncols(),
                self.dim()
            )));
        }
        Ok(self.amplitudes.dotc(&(op * &self.amplitudes)))
    }

    /// |self⟩ ⊗ |other⟩, self as the slow factor.
    pub fn tensor(&self, other: &Ket) -> Result<Ket> {
        let space = self.space.compose(&other.space)?;
        let amplitudes = self.amplitudes.kronecker(&other.amplitudes);
        Ket::new(DVector::from_column_slice(amplitudes.as_slice()), space)
    }
}

/// Hermitian, positive, trace-normalizable density matrix.
///
/// Invariants checked at construction: Hermiticity to [`HERMITICITY_TOL`]
/// (entrywise), eigenvalues ≥ −[`POSITIVITY_TOL`], and 0 < trace ≤ 1 +
/// [`TRACE_TOL`]. The trace may sit below 1 for decaying systems.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    entries: DMatrix<C64>,
    space: Arc<HilbertSpace>,
}

impl DensityMatrix {
    pub fn new(entries: DMatrix<C64>, space: Arc<HilbertSpace>) -> Result<Self> {
        Self::with_positivity_tol(entries, space, POSITIVITY_TOL)
    }

    /// Construction with a relaxed eigenvalue floor, for statistical
    /// estimates of ρ whose sampling noise exceeds the strict tolerance.
    pub fn with_positivity_tol(
        entries: DMatrix<C64>,
        space: Arc<HilbertSpace>,
        positivity_tol: f64,
    ) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "density matrix must be square, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        if entries.nrows() != space.dim() {
            return Err(Error::DimensionMismatch(format!(
                "matrix dimension {} does not match space dimension {}",
                entries.nrows(),
                space.dim()
            )));
        }
        let dev = hermiticity_defect(&entries);
        if dev > HERMITICITY_TOL {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let trace = entries.trace().re;
        if !(trace > 0.0 && trace <= 1.0 + TRACE_TOL) {
            return Err(Error::InvalidTrace { trace });
        }
        let min_eig = min_eigenvalue(&entries);
        if min_eig < -positivity_tol {
            return Err(Error::PositivityViolation { min_eigenvalue: min_eig });
        }
        Ok(Self { entries, space })
    }

    /// ρ = |ψ⟩⟨ψ| from a normalized state.
    pub fn from_pure(ket: &Ket) -> Result<Self> {
        let ket = ket.normalized()?;
        let entries = ket.projector();
        Ok(Self { entries, space: Arc::clone(&ket.space) })
    }

    /// Maximally mixed state I/d.
    pub fn maximally_mixed(space: Arc<HilbertSpace>) -> Self {
        let d = space.dim();
        let entries = DMatrix::from_diagonal_element(d, d, C64::from(1.0 / d as f64));
        Self { entries, space }
    }

    /// Diagonal state from classical populations (must sum into (0, 1]).
    pub fn from_populations(populations: &[f64], space: Arc<HilbertSpace>) -> Result<Self> {
        let entries = DMatrix::from_diagonal(&DVector::from_iterator(
            populations.len(),
            populations.iter().map(|&p| C64::from(p)),
        ));
        Self::new(entries, space)
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn space(&self) -> &Arc<HilbertSpace> {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace().re
    }

    /// Tr(ρ O), real part (physical observables are Hermitian).
    pub fn expectation(&self, op: &DMatrix<C64>) -> Result<f64> {
        if op.nrows() != self.dim() || op.ncols() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "operator is {}x{}, state dimension {}",
                op.nrows(),
                op.ncols(),
                self.dim()
            )));
        }
        let mut acc = C64::ZERO;
        for i in 0..self.dim() {
            for k in 0..self.dim() {
                acc += self.entries[(i, k)] * op[(k, i)];
            }
        }
        Ok(acc.re)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        min_eigenvalue(&self.entries)
    }

    /// Eigenvalues of ρ, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self
            .entries
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ev
    }
}

/// Max entrywise |m - m†|.
pub fn hermiticity_defect(m: &DMatrix<C64>) -> f64 {
    let mut dev: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(m: &DMatrix<C64>) -> f64 {
    m.clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Kronecker product with `a` as the slow index:
/// `(a ⊗ b)[(i·db + k, j·db + l)] = a[(i, j)] · b[(k, l)]`.
pub fn tensor_product(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    a.kronecker(b)
}

/// Reduced density matrix over the factors listed in `keep`.
///
/// Kept factors retain their relative order; the trace is preserved exactly
/// up to floating-point summation.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let space = rho.space();
    let n_factors = space.n_factors();
    let mut keep: Vec<usize> = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if keep.is_empty() {
        return Err(Error::InvalidArgument("keep set must be nonempty".into()));
    }
    if let Some(&bad) = keep.iter().find(|&&k| k >= n_factors) {
        return Err(Error::InvalidArgument(format!(
            "factor index {bad} out of range for {n_factors} factors"
        )));
    }

    let dims = space.factor_dims();
    // Stride of each factor in the flattened index (factor 0 slowest).
    let mut strides = vec![1usize; n_factors];
    for k in (0..n_factors.saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * dims[k + 1];
    }
    let traced: Vec<usize> = (0..n_factors).filter(|k| !keep.contains(k)).collect();

    // Flattened-index offsets contributed by every kept (resp. traced)
    // multi-index, enumerated in row-major order over those factors.
    let offsets = |factors: &[usize]| -> Vec<usize> {
        let total: usize = factors.iter().map(|&k| dims[k]).product();
        let mut out = Vec::with_capacity(total);
        for mut idx in 0..total {
            let mut offset = 0;
            for &k in factors.iter().rev() {
                offset += (idx % dims[k]) * strides[k];
                idx /= dims[k];
            }
            out.push(offset);
        }
        out
    };
    let keep_offsets = offsets(&keep);
    let trace_offsets = offsets(&traced);

    let d_keep = keep_offsets.len();
    let mut reduced = DMatrix::from_element(d_keep, d_keep, C64::ZERO);
    for (r, &ro) in keep_offsets.iter().enumerate() {
        for (c, &co) in keep_offsets.iter().enumerate() {
            let mut acc = C64::ZERO;
            for &to in &trace_offsets {
                acc += rho.entries()[(ro + to, co + to)];
            }
            reduced[(r, c)] = acc;
        }
    }

    let kept_dims: Vec<usize> = keep.iter().map(|&k| dims[k]).collect();
    let kept_labels: Vec<String> = keep.iter().map(|&k| space.labels()[k].clone()).collect();
    let reduced_space = HilbertSpace::new(kept_dims, kept_labels)?;
    DensityMatrix::new(reduced, reduced_space)
}

/// Truncated coherent state |α⟩ with amplitudes c_n = e^{−|α|²/2} αⁿ/√(n!)
/// for n = 0..n_max, renormalized to unit norm after truncation.
///
/// Errors when the truncated basis captures less than 1 − 1e-8 of the norm;
/// n_max ≥ ⌈4|α|² + 10⌉ keeps the truncation loss negligible.
pub fn coherent_state(alpha: C64, n_max: usize) -> Result<Ket> {
    if n_max < 1 {
        return Err(Error::InvalidArgument("coherent state needs n_max ≥ 1".into()));
    }
    let space = HilbertSpace::single(n_max + 1, "field")?;
    let mut amplitudes = DVector::from_element(n_max + 1, C64::ZERO);
    let mut c = C64::from((-alpha.norm_sqr() / 2.0).exp());
    amplitudes[0] = c;
    for n in 1..=n_max {
        c *= alpha / C64::from((n as f64).sqrt());
        amplitudes[n] = c;
    }
    let captured = amplitudes.norm_squared();
    if captured < 1.0 - 1e-8 {
        return Err(Error::Truncation { captured });
    }
    amplitudes /= C64::from(captured.sqrt());
    Ket::new(amplitudes, space)
}

/// Von Neumann entropy S = −Σ λ ln λ in nats, computed on ρ/tr(ρ).
///
/// Eigenvalues below −[`POSITIVITY_TOL`] (after normalization) are a
/// positivity violation; small negative noise above the floor is clamped.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let trace = rho.trace();
    if trace <= 0.0 {
        return Err(Error::InvalidTrace { trace });
    }
    let mut s = 0.0;
    for ev in rho.entries().clone().symmetric_eigen().eigenvalues.iter() {
        let lambda = ev / trace;
        if lambda < -POSITIVITY_TOL {
            return Err(Error::PositivityViolation { min_eigenvalue: lambda });
        }
        if lambda > 0.0 {
            s -= lambda * lambda.ln();
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::rngs::StdRng;
    use rand::{RngExt, SeedableRng};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_positive(dim: usize, rng: &mut StdRng) -> DMatrix<C64> {
        // A A† is Hermitian positive; normalize to unit trace.
        let a = DMatrix::from_fn(dim, dim, |_, _| {
            c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let m = &a * a.adjoint();
        let tr = m.trace().re;
        m / C64::from(tr)
    }

    fn random_unitary(dim: usize, rng: &mut StdRng) -> DMatrix<C64> {
        let a = DMatrix::from_fn(dim, dim, |_, _| {
            c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        a.qr().q()
    }

    #[test]
    fn tensor_product_of_identities() {
        let i2 = DMatrix::identity(2, 2);
        let i3 = DMatrix::identity(3, 3);
        let t = tensor_product(&i2, &i3);
        assert_eq!(t, DMatrix::<C64>::identity(6, 6));
        assert_eq!(t.nrows(), 6);
    }

    #[test]
    fn tensor_product_dimension_law() {
        let a = DMatrix::from_element(2, 2, c(1.0, 0.5));
        let b = DMatrix::from_element(3, 3, c(-0.5, 2.0));
        assert_eq!(tensor_product(&a, &b).nrows(), 6);
    }

    #[test]
    fn sigma_z_tensor_identity_eigenvalue() {
        // σ_z ⊗ I₂ on |1⟩⊗|0⟩ gives eigenvalue −1 (slow-factor index 1).
        let sz = DMatrix::from_diagonal(&DVector::from_vec(vec![c(1.0, 0.0), c(-1.0, 0.0)]));
        let op = tensor_product(&sz, &DMatrix::identity(2, 2));
        let space = HilbertSpace::new(vec![2, 2], vec!["a".into(), "b".into()]).unwrap();
        let psi = Ket::basis_state(2, space).unwrap(); // |1⟩⊗|0⟩ -> index 1*2 + 0
        let out = &op * psi.amplitudes();
        assert_eq!(out, -psi.amplitudes().clone());
        assert_relative_eq!(psi.expectation(&op).unwrap().re, -1.0, epsilon = 1e-15);
    }

    #[test]
    fn tensor_product_is_associative_on_integer_matrices() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..10 {
            let m = |d: usize, rng: &mut StdRng| {
                DMatrix::from_fn(d, d, |_, _| c(rng.random_range(-3..4) as f64, 0.0))
            };
            let a = m(2, &mut rng);
            let b = m(3, &mut rng);
            let d = m(2, &mut rng);
            let left = tensor_product(&tensor_product(&a, &b), &d);
            let right = tensor_product(&a, &tensor_product(&b, &d));
            assert_eq!(left, right);
        }
    }

    #[test]
    fn partial_trace_of_product_state() {
        let rho_a = DMatrix::from_row_slice(2, 2, &[c(0.7, 0.0), c(0.1, 0.2), c(0.1, -0.2), c(0.3, 0.0)]);
        let rho_b =
            DMatrix::from_row_slice(2, 2, &[c(0.4, 0.0), c(0.0, -0.1), c(0.0, 0.1), c(0.6, 0.0)]);
        let space = HilbertSpace::new(vec![2, 2], vec!["A".into(), "B".into()]).unwrap();
        let rho = DensityMatrix::new(tensor_product(&rho_a, &rho_b), space).unwrap();
        let reduced = partial_trace(&rho, &[0]).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_relative_eq!(reduced.entries()[(i, j)].re, rho_a[(i, j)].re, epsilon = 1e-14);
                assert_relative_eq!(reduced.entries()[(i, j)].im, rho_a[(i, j)].im, epsilon = 1e-14);
            }
        }
        assert_eq!(reduced.space().labels(), &["A".to_string()]);
    }

    #[test]
    fn partial_trace_of_bell_state() {
        let space = HilbertSpace::new(vec![2, 2], vec!["q0".into(), "q1".into()]).unwrap();
        let mut amp = DVector::from_element(4, C64::ZERO);
        amp[0] = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        amp[3] = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let bell = Ket::new(amp, space).unwrap();
        let rho = DensityMatrix::from_pure(&bell).unwrap();
        let reduced = partial_trace(&rho, &[0]).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { 0.5 } else { 0.0 };
                assert_relative_eq!(reduced.entries()[(i, j)].re, expect, epsilon = 1e-14);
                assert_relative_eq!(reduced.entries()[(i, j)].im, 0.0, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn partial_trace_preserves_trace_and_hermiticity() {
        let mut rng = StdRng::seed_from_u64(23);
        for _ in 0..25 {
            let space =
                HilbertSpace::new(vec![2, 3, 2], vec!["a".into(), "b".into(), "c".into()]).unwrap();
            let rho = DensityMatrix::new(random_positive(12, &mut rng), space).unwrap();
            for keep in [vec![0], vec![1], vec![2], vec![0, 2], vec![1, 2]] {
                let reduced = partial_trace(&rho, &keep).unwrap();
                assert!((reduced.trace() - rho.trace()).abs() <= 1e-14);
                assert!(hermiticity_defect(reduced.entries()) <= 1e-13);
                assert!(reduced.min_eigenvalue() >= -1e-12);
            }
        }
    }

    #[test]
    fn partial_trace_rejects_bad_factor() {
        let space = HilbertSpace::new(vec![2, 2], vec!["a".into(), "b".into()]).unwrap();
        let rho = DensityMatrix::maximally_mixed(space);
        assert!(matches!(partial_trace(&rho, &[2]), Err(Error::InvalidArgument(_))));
        assert!(matches!(partial_trace(&rho, &[]), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn coherent_state_vacuum_limit() {
        let ket = coherent_state(C64::ZERO, 5).unwrap();
        assert_relative_eq!(ket.amplitudes()[0].re, 1.0, epsilon = 1e-15);
        for n in 1..=5 {
            assert_eq!(ket.amplitudes()[n], C64::ZERO);
        }
    }

    #[test]
    fn coherent_state_poisson_normalization() {
        // |α|² = 4: the first 41 Fock terms carry all but ~1e-20 of the norm.
        let alpha = c(2.0, 0.0);
        let mut c_n = C64::from((-alpha.norm_sqr() / 2.0).exp());
        let mut raw_norm = c_n.norm_sqr();
        for n in 1..=40 {
            c_n *= alpha / C64::from((n as f64).sqrt());
            raw_norm += c_n.norm_sqr();
        }
        assert!((raw_norm - 1.0).abs() < 1e-10);
        assert!(coherent_state(alpha, 40).is_ok());
    }

    #[test]
    fn coherent_state_mean_photon_number() {
        let ket = coherent_state(c(2.0, 0.0), 40).unwrap();
        let mean: f64 = ket
            .amplitudes()
            .iter()
            .enumerate()
            .map(|(n, a)| n as f64 * a.norm_sqr())
            .sum();
        assert!((mean - 4.0).abs() < 1e-8);
    }

    #[test]
    fn coherent_state_truncation_error() {
        let err = coherent_state(c(3.0, 0.0), 3).unwrap_err();
        assert!(matches!(err, Error::Truncation { .. }));
        assert!(matches!(coherent_state(c(0.1, 0.0), 0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn entropy_of_pure_state_is_zero() {
        let space = HilbertSpace::single(3, "s").unwrap();
        let ket = Ket::basis_state(1, space).unwrap();
        let rho = DensityMatrix::from_pure(&ket).unwrap();
        assert!(von_neumann_entropy(&rho).unwrap().abs() < 1e-12);
    }

    #[test]
    fn entropy_of_maximally_mixed_qubit() {
        let space = HilbertSpace::single(2, "s").unwrap();
        let rho = DensityMatrix::maximally_mixed(space);
        assert_relative_eq!(von_neumann_entropy(&rho).unwrap(), 2f64.ln(), epsilon = 1e-12);
    }

    #[test]
    fn entropy_of_diagonal_mixture() {
        // -0.75 ln 0.75 - 0.25 ln 0.25
        let space = HilbertSpace::single(2, "s").unwrap();
        let rho = DensityMatrix::from_populations(&[0.75, 0.25], space).unwrap();
        assert_relative_eq!(
            von_neumann_entropy(&rho).unwrap(),
            0.5623351446188083,
            epsilon = 1e-12
        );
    }

    #[test]
    fn entropy_is_unitarily_invariant() {
        let mut rng = StdRng::seed_from_u64(37);
        for _ in 0..20 {
            let space = HilbertSpace::single(4, "s").unwrap();
            let rho = DensityMatrix::new(random_positive(4, &mut rng), space.clone()).unwrap();
            let u = random_unitary(4, &mut rng);
            let rotated = &u * rho.entries() * u.adjoint();
            let rotated = DensityMatrix::with_positivity_tol(rotated, space, 1e-8).unwrap();
            let s0 = von_neumann_entropy(&rho).unwrap();
            let s1 = von_neumann_entropy(&rotated).unwrap();
            assert!((s0 - s1).abs() <= 1e-10, "entropy drifted: {s0} vs {s1}");
        }
    }

    #[test]
    fn entropy_bounds() {
        let mut rng = StdRng::seed_from_u64(41);
        for _ in 0..20 {
            let dim = rng.random_range(2..6);
            let space = HilbertSpace::single(dim, "s").unwrap();
            let rho = DensityMatrix::new(random_positive(dim, &mut rng), space).unwrap();
            let s = von_neumann_entropy(&rho).unwrap();
            assert!(s >= 0.0);
            assert!(s <= (dim as f64).ln() + 1e-10);
        }
    }

    #[test]
    fn density_matrix_rejects_non_hermitian() {
        let space = HilbertSpace::single(2, "s").unwrap();
        let m = DMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.1, 0.0), c(0.3, 0.0), c(0.5, 0.0)]);
        assert!(matches!(DensityMatrix::new(m, space), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn density_matrix_rejects_negative_eigenvalue() {
        let space = HilbertSpace::single(2, "s").unwrap();
        let m = DMatrix::from_row_slice(2, 2, &[c(0.9, 0.0), c(0.45, 0.0), c(0.45, 0.0), c(0.1, 0.0)]);
        assert!(matches!(DensityMatrix::new(m, space), Err(Error::PositivityViolation { .. })));
    }

    #[test]
    fn density_matrix_rejects_bad_trace() {
        let space = HilbertSpace::single(2, "s").unwrap();
        let m = DMatrix::from_diagonal_element(2, 2, c(0.8, 0.0));
        assert!(matches!(DensityMatrix::new(m, space.clone()), Err(Error::InvalidTrace { .. })));
        let z = DMatrix::from_element(2, 2, C64::ZERO);
        assert!(matches!(DensityMatrix::new(z, space), Err(Error::InvalidTrace { .. })));
    }

    #[test]
    fn space_cap_enforced() {
        assert!(HilbertSpace::new(vec![64, 65], vec!["a".into(), "b".into()]).is_err());
        assert!(HilbertSpace::single(4096, "big").is_ok());
    }
}
