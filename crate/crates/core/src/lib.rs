//! Exact workbench for invariant geometry on nilpotent Lie algebras:
//! sparse exterior algebra over Q(√3), Chevalley–Eilenberg cohomology,
//! Levi-Civita curvature of the orthonormal invariant metric, torsion
//! classification of almost Hermitian structures, and the canonical
//! 3-/4-form library in dimensions 6, 7 and 8.
//!
//! The algebraic layer is generic over the coefficient [`scalar::Field`];
//! the concrete aliases below fix the scalars to Q(√3), which is all the
//! canonical examples need.

pub mod builtins;
pub mod curvature;
pub mod forms;
pub mod hervella;
pub mod lie;
pub mod linalg;
pub mod literal;
pub mod poly;
pub mod scalar;
pub mod structures;

pub use scalar::{Rational, Scalar};

/// Exterior form with coefficients in Q(√3).
pub type Form = forms::KForm<Scalar>;
/// Coframe substitution with coefficients in Q(√3).
pub type Change = forms::CoframeChange<Scalar>;
/// Structure equations with coefficients in Q(√3).
pub type LieSpec = lie::LieAlgebraSpec<Scalar>;
/// Exact matrix over Q(√3).
pub type ScalarMatrix = linalg::Matrix<Scalar>;
