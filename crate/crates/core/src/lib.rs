//! Structured-kernel toolkit for Schur-parameter analysis.
//!
//! The crate connects four views of a strictly positive Hermitian moment
//! kernel on an ordered index set:
//!
//! * the kernel itself (`kernel`): validation, section determinants;
//! * its unit-disk parameter field (`schur`): reconstruction as products of
//!   planar rotations, extraction, and the symbolic lattice expansion whose
//!   term counts are Catalan numbers (`lattice`);
//! * orthonormal polynomial families per level (`poly`) and their embeddings
//!   into the algebra of lower triangular arrays (`triangular`), including
//!   spectral factorization;
//! * determinant-ratio asymptotics (`asymptotics`) of Szegő type.
//!
//! Classical model kernels (Toeplitz, Hankel/Hilbert) live in `models`; the
//! free-semigroup generalization (words, noncommutative series, tree
//! fields) lives in `words`, `series`, and `tree`. File formats for the CLI
//! are in `io`.
//!
//! Everything is generic over the [`scalar::Scalar`] field; concrete type
//! aliases for the two shipped backends are exported at the crate root.

pub mod asymptotics;
pub mod error;
mod idx;
pub mod io;
pub mod kernel;
pub mod lattice;
mod linalg;
pub mod models;
pub mod poly;
pub mod scalar;
pub mod schur;
pub mod series;
pub mod tree;
pub mod triangular;
pub mod words;

pub use error::{Error, Result};
pub use kernel::{DeterminantTable, MomentKernel, SzegoClass, SzegoConfig};
pub use lattice::{catalan, lattice_expand, LatticeTerm};
pub use poly::{build_polys, PolyTable};
pub use schur::{extract_gamma, extract_gamma_squares, GammaField, GammaSquares};
pub use series::{nc_invert, nc_multiply, NcSeries};
pub use tree::{nc_limits, nc_polys, TreeGammaField};
pub use triangular::{spectral_factor, TriangularArray};
pub use words::{Alphabet, Word};

/// Floating-point scalar backend.
pub type C64 = num_complex::Complex<f64>;
/// Exact rational (real-only) scalar backend.
pub type Rat = num_rational::BigRational;

/// Kernel over the floating-point backend.
pub type KernelF64 = kernel::MomentKernel<C64>;
/// Kernel over the exact rational backend.
pub type KernelRational = kernel::MomentKernel<Rat>;
/// Parameter field over the floating-point backend.
pub type FieldF64 = schur::GammaField<C64>;
/// Parameter field over the exact rational backend.
pub type FieldRational = schur::GammaField<Rat>;
