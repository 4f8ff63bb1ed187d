//! Centralized numeric thresholds.
//!
//! Every floating-point tolerance used by the numeric layer is defined here
//! with its rationale, so reports can cite the exact values and tests do not
//! accumulate ad-hoc magic numbers. Exact (rational) computations take no
//! tolerances; these apply only to the binary64 lane.

/// Relative on-hypersurface test: a point z counts as lying on `X = {s = 0}`
/// when `|s(z)| <= ON_HYPERSURFACE_REL * (1 + sum of |monomial values|)`.
///
/// The scale factor makes the test meaningful both near the origin (where
/// all monomials are tiny) and at points with large coordinates.
pub const ON_HYPERSURFACE_REL: f64 = 1e-9;

/// A point is treated as singular (gradient too small to normalize) when
/// `|grad s(z)| < GRADIENT_MIN`. Conservative: well below any gradient
/// magnitude that appears at the regular sample points the library draws.
pub const GRADIENT_MIN: f64 = 1e-12;

/// Rational-function evaluation refuses to divide when the denominator
/// magnitude falls below this, reporting pole proximity instead of returning
/// a catastrophically cancelled quotient.
pub const POLE_PROXIMITY: f64 = 1e-12;

/// Target agreement, relative to `max(1, |value|)`, for residue charts
/// compared on a shared tangent frame at regular points.
pub const CHART_AGREEMENT_REL: f64 = 1e-9;

/// Newton iteration cap for point projection onto the hypersurface.
pub const NEWTON_MAX_ITER: usize = 50;

/// Newton polish target: once a point satisfies the on-hypersurface test the
/// iteration continues toward machine precision (relative to the same scale)
/// so downstream chart comparisons are not limited by projection residue.
pub const NEWTON_POLISH_REL: f64 = 1e2 * f64::EPSILON;

/// Shell sampling aborts when fewer than this fraction of Newton-projected
/// draws are accepted into the target radius band.
pub const SAMPLING_MIN_ACCEPTANCE: f64 = 0.01;

/// Slope window for the square-integrability verdict: a fitted log-log slope
/// in `[-SLOPE_BORDERLINE, SLOPE_BORDERLINE]` is reported as borderline
/// rather than convergent or divergent.
pub const SLOPE_BORDERLINE: f64 = 0.05;

/// Relative tolerance requested from the adaptive period quadrature.
pub const QUADRATURE_REL: f64 = 1e-10;

/// Convergence threshold for the arithmetic-geometric mean iteration,
/// relative to the current iterate (AGM converges quadratically, so this is
/// reached in a handful of steps).
pub const AGM_REL: f64 = 4.0 * f64::EPSILON;

/// Two cubic discriminant magnitudes below this (relative to the coefficient
/// scale) are treated as a double root, for which no period exists.
pub const DISCRIMINANT_REL: f64 = 1e-12;

/// Gradient-system Newton search declares a critical point when
/// `|grad s(z)| <= CRITICAL_POINT_REL * (1 + gradient term scale)`.
pub const CRITICAL_POINT_REL: f64 = 1e-10;

/// A critical point found by the isolatedness probe counts as "away from the
/// origin" when `|z| >= ISOLATION_MIN_DISTANCE * box_radius`.
pub const ISOLATION_MIN_DISTANCE: f64 = 1e-4;
