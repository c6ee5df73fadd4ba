//! Numerical toolkit for environment-induced decoherence in small open
//! quantum systems.
//!
//! The crate is organized in layers:
//!
//! - [`hilbert`]: dense states, density matrices, tensor products, partial
//!   traces and entropy on small Hilbert spaces (dimension ≤ 4096);
//! - [`lindblad`]: Markovian master-equation models and their propagation,
//!   either through a vectorized superoperator exponential or adaptive
//!   Runge-Kutta;
//! - [`qsd`]: quantum-state-diffusion unraveling of the same models into
//!   seeded stochastic state-vector ensembles;
//! - [`cavity`]: Tavis-Cummings physics — vacuum Rabi splitting, dispersive
//!   shifts, probe dephasing and Schrödinger-cat pointer distances;
//! - [`kaon`]: neutral-kaon density-matrix phenomenology with the
//!   (α, β, γ) decoherence parametrization and its decay asymmetries;
//! - [`foam`]: order-of-magnitude gravitational-decoherence estimators.
//!
//! All numerics are double precision and deterministic; stochastic parts are
//! driven by explicit counter-based seeds.

pub mod cavity;
pub mod error;
pub mod foam;
pub mod hilbert;
pub mod kaon;
pub mod lindblad;
pub mod linalg;
pub mod operators;
pub mod qsd;

pub use error::{Error, Result};
pub use hilbert::{
    coherent_state, partial_trace, tensor_product, von_neumann_entropy, DensityMatrix,
    HilbertSpace, Ket,
};
pub use lindblad::{
    build_superoperator, evolve, purity, secular_propagate, EvolutionResult, LindbladModel,
};
pub use qsd::{qsd_step, run_ensemble, Ensemble, NoiseSpec, Trajectory};

/// Complex double-precision scalar used throughout the crate.
pub type C64 = num_complex::Complex64;
