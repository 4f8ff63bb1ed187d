//! Residues of meromorphic top-degree forms along singular hypersurfaces.
//!
//! The central object is ω = (g/s)·dz0∧…∧dzn for polynomials g, s: this
//! crate computes its chart residues on {s = 0}, checks the defining
//! identity ds ∧ Res(ω) = s·ω exactly, grades everything by
//! quasihomogeneous weights (orders, canonical/liftability verdicts,
//! explicit primitives, spectra), takes second residues in the weight-zero
//! case, and probes square-integrability of the residue numerically.
//!
//! Exact arithmetic runs over the Gaussian rationals; numeric routines use
//! binary64. The type aliases at the crate root fix the exact lane.

pub mod tol;

pub mod scalar;

pub mod poly;

pub mod weights;

pub mod forms;

pub mod formlang;

pub mod residue;

pub mod quasihomog;

pub mod numeric;

pub use scalar::{GaussianRational, Scalar};
pub use weights::{infer_weights, WeightSystem};

/// Polynomial over the Gaussian rationals.
pub type Poly = poly::Polynomial<GaussianRational>;
/// Polynomial with binary64 complex coefficients.
pub type PolyC64 = poly::Polynomial<num_complex::Complex64>;
/// Rational function over the Gaussian rationals.
pub type RationalFunction = forms::RationalFunction<GaussianRational>;
/// Differential form over the Gaussian rationals.
pub type DiffForm = forms::DiffForm<GaussianRational>;
/// Polynomial vector field over the Gaussian rationals.
pub type VectorField = forms::PolyVectorField<GaussianRational>;
/// Meromorphic top form over the Gaussian rationals.
pub type MeroTopForm = residue::MeroTopForm<GaussianRational>;
