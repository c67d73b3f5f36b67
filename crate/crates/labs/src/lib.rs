//! Numeric companions to the exact core: geodesic plotting on parametric
//! surfaces (symbolic metric data, fixed-step RK4) and volume work —
//! Euclidean balls and slabs, small-ball expansion coefficients with a
//! round-sphere oracle, and tube volumes in complex projective space.
//!
//! The geodesic machinery is generic over the floating-point scalar;
//! the aliases below fix f64, which is what the command-line tools use.

pub mod expr;
pub mod geodesic;
pub mod quad;
pub mod surface;
pub mod volume;

pub use expr::{parse_expr, Expr, Var};
pub use surface::{MetricData, SurfacePatch};

/// Geodesic sample in double precision.
pub type Sample = geodesic::GeodesicSample<f64>;
/// Integrated geodesic in double precision.
pub type Ray = geodesic::Polyline<f64>;
/// Joined equal-parameter circle in double precision.
pub type Circle = geodesic::Circle<f64>;
