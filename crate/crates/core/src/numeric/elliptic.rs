//! Periods of the curves z2² = z1³ + p·z1 + q.
//!
//! Second residues of weight-0 forms live on such a curve, and their periods
//! are classical elliptic integrals ∮ P(z1)/z2 · dz1. Two independent
//! evaluations are provided:
//!
//! * [`period_integral`]: adaptive quadrature along a real cycle, with
//!   square-root substitutions removing the branch-point singularities, and
//! * [`agm_elliptic_oracle`]: the real period of dz1/z2 via the
//!   arithmetic-geometric mean of Gauss, from the root configuration alone.
//!
//! The cycle convention: an integral "along `[e, ∞)`" or "along `[e₁, e₂]`"
//! is the closed-cycle integral, which runs over both sheets of the curve
//! and therefore equals twice the line integral with the positive square
//! root. Both functions use this convention, so they agree directly.

use num_complex::Complex64;

use super::quad::adaptive_simpson;
use super::NumericError;
use crate::tol;

/// Arithmetic-geometric mean of two complex numbers.
///
/// Each step replaces (a, b) by ((a+b)/2, √(ab)), choosing the square root
/// with |a′ − b′| ≤ |a′ + b′| (the "good" choice, which keeps the iteration
/// convergent for arguments off the negative real axis).
pub fn agm(mut a: Complex64, mut b: Complex64) -> Result<Complex64, NumericError> {
    for _ in 0..80 {
        if (a - b).norm() <= tol::AGM_REL * a.norm().max(b.norm()) {
            return Ok(0.5 * (a + b));
        }
        let am = 0.5 * (a + b);
        let mut gm = (a * b).sqrt();
        if (am - gm).norm() > (am + gm).norm() {
            gm = -gm;
        }
        a = am;
        b = gm;
    }
    Err(NumericError::AgmNonConvergence)
}

/// Roots of the depressed cubic x³ + p·x + q, split by type.
#[derive(Clone, Debug)]
pub struct CubicRoots {
    /// Real roots in decreasing order (three of them, or one).
    pub real: Vec<f64>,
    /// One member of the conjugate pair when only one root is real.
    pub complex_pair: Option<Complex64>,
}

/// Solve x³ + p·x + q = 0, rejecting (near-)multiple roots.
///
/// Three distinct real roots come from the trigonometric form, a single real
/// root from Cardano's formula; both are polished by a Newton step. The
/// discriminant −4p³ − 27q² decides between them, and a relative threshold
/// around zero reports a double root instead of returning unstable values.
pub fn depressed_cubic_roots(p: f64, q: f64) -> Result<CubicRoots, NumericError> {
    let disc = -4.0 * p.powi(3) - 27.0 * q * q;
    let scale = (4.0 * p.abs().powi(3) + 27.0 * q * q).max(1.0);
    if disc.abs() <= tol::DISCRIMINANT_REL * scale {
        return Err(NumericError::DoubleRoot { disc });
    }
    let polish = |mut x: f64| {
        for _ in 0..2 {
            let d = 3.0 * x * x + p;
            if d != 0.0 {
                x -= (x * x * x + p * x + q) / d;
            }
        }
        x
    };
    if disc > 0.0 {
        // Three distinct real roots force p < 0.
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (2.0 * p)) * (-3.0 / p).sqrt();
        let phi = arg.clamp(-1.0, 1.0).acos();
        let mut real: Vec<f64> = (0..3)
            .map(|k| polish(m * ((phi - 2.0 * std::f64::consts::PI * f64::from(k)) / 3.0).cos()))
            .collect();
        real.sort_by(|a, b| b.total_cmp(a));
        Ok(CubicRoots {
            real,
            complex_pair: None,
        })
    } else {
        let delta = (q * q / 4.0 + p.powi(3) / 27.0).sqrt();
        let u = (-q / 2.0 + delta).cbrt();
        let v = (-q / 2.0 - delta).cbrt();
        let root = polish(u + v);
        let pair = Complex64::new(-0.5 * (u + v), 0.5 * 3.0f64.sqrt() * (u - v));
        Ok(CubicRoots {
            real: vec![root],
            complex_pair: Some(pair),
        })
    }
}

/// Real period of dz1/z2 on z2² = z1³ + p·z1 + q, from the AGM.
///
/// With roots e1 ≥ e2 ≥ e3 the period is 2π / agm(√(e1−e2), √(e1−e3)); when
/// e2, e3 form a conjugate pair the same expression applies with principal
/// square roots, and the iteration converges to a real limit because the
/// arguments are conjugates. The code path shares nothing with
/// [`period_integral`], which makes the two fit for cross-validation.
pub fn agm_elliptic_oracle(p: f64, q: f64) -> Result<f64, NumericError> {
    let roots = depressed_cubic_roots(p, q)?;
    let m = match roots.complex_pair {
        None => {
            let (e1, e2, e3) = (roots.real[0], roots.real[1], roots.real[2]);
            agm(
                Complex64::new((e1 - e2).sqrt(), 0.0),
                Complex64::new((e1 - e3).sqrt(), 0.0),
            )?
        }
        Some(rho) => {
            let e = Complex64::new(roots.real[0], 0.0);
            agm((e - rho).sqrt(), (e - rho.conj()).sqrt())?
        }
    };
    let period = 2.0 * std::f64::consts::PI / m;
    debug_assert!(period.im.abs() <= 1e-9 * period.re.abs());
    Ok(period.re)
}

/// Integration cycle for [`period_integral`].
#[derive(Clone, Copy, Debug)]
pub enum PeriodPath {
    /// The unbounded cycle over `[start, ∞)`; `start` must be the largest
    /// real root.
    HalfLine { start: f64 },
    /// The bounded cycle over `[a, b]` between two consecutive real roots
    /// below the third.
    Segment { a: f64, b: f64 },
}

fn eval_poly(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

fn nearest_root(roots: &[f64], x: f64) -> f64 {
    *roots
        .iter()
        .min_by(|a, b| (*a - x).abs().total_cmp(&(*b - x).abs()))
        .expect("cubic always has a real root")
}

fn check_endpoint(p: f64, q: f64, roots: &[f64], x: f64) -> Result<f64, NumericError> {
    let residual = (x * x * x + p * x + q).abs();
    let scale = x.abs().powi(3) + (p * x).abs() + q.abs() + 1.0;
    if residual > 1e-9 * scale {
        return Err(NumericError::EndpointNotRoot { value: x, residual });
    }
    // Snap to the polished root so the substitutions below are exact there.
    Ok(nearest_root(roots, x))
}

/// Cycle integral of P(z1)/z2 · dz1 over the curve z2² = z1³ + p·z1 + q.
///
/// `numerator` holds the coefficients of P in increasing degree. The
/// branch-point singularities are removed by substitution, so the quadrature
/// sees only smooth integrands:
///
/// * segment `[a, b]`: x = a + (b−a)·sin²θ turns the integrand into
///   2·P(x)/√(c−x) on [0, π/2], with c the remaining (larger) real root;
/// * half line `[e, ∞)`: x = e + u² up to a cutoff, then x = (M−1) + 1/w²
///   for the tail, whose integrand extends smoothly to w = 0. Here P must be
///   constant, otherwise the cycle integral diverges.
pub fn period_integral(
    numerator: &[f64],
    p: f64,
    q: f64,
    path: PeriodPath,
) -> Result<f64, NumericError> {
    let degree = numerator.iter().rposition(|&c| c != 0.0);
    let degree = match degree {
        None => return Ok(0.0),
        Some(d) => d,
    };
    let roots = depressed_cubic_roots(p, q)?;
    match path {
        PeriodPath::HalfLine { start } => {
            let e = check_endpoint(p, q, &roots.real, start)?;
            if degree >= 1 {
                return Err(NumericError::DivergentPath { degree });
            }
            let c0 = numerator[0];
            for &r in &roots.real {
                if r > e + 1e-7 * (1.0 + e.abs()) {
                    return Err(NumericError::PathHitsRoot { root: r });
                }
            }
            let span = match roots.complex_pair {
                None => roots.real[0] - roots.real[2],
                Some(rho) => (Complex64::new(e, 0.0) - rho).norm(),
            }
            .max(1.0);
            let cutoff = e + 4.0 * span;
            // Quotient of the cubic by (x - e).
            let q2 = move |x: f64| x * x + e * x + (p + e * e);
            let near = |u: f64| 2.0 * c0 / q2(e + u * u).sqrt();
            let m1 = cutoff - 1.0;
            let tail = move |w: f64| {
                let base = m1 * w * w + 1.0;
                let scaled = base.powi(3) + p * w.powi(4) * base + q * w.powi(6);
                2.0 * c0 / scaled.sqrt()
            };
            let line = adaptive_simpson(&near, 0.0, (cutoff - e).sqrt(), tol::QUADRATURE_REL)?
                + adaptive_simpson(&tail, 0.0, 1.0, tol::QUADRATURE_REL)?;
            Ok(2.0 * line)
        }
        PeriodPath::Segment { a, b } => {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let lo = check_endpoint(p, q, &roots.real, lo)?;
            let hi = check_endpoint(p, q, &roots.real, hi)?;
            if lo == hi {
                return Ok(0.0);
            }
            let third = roots
                .real
                .iter()
                .copied()
                .find(|&r| r != lo && r != hi)
                .ok_or(NumericError::NonRealSegment)?;
            let margin = 1e-7 * (1.0 + lo.abs().max(hi.abs()));
            if third > lo + margin && third < hi - margin {
                return Err(NumericError::PathHitsRoot { root: third });
            }
            if third < hi {
                // The cubic is negative between the two largest roots.
                return Err(NumericError::NonRealSegment);
            }
            let f = move |theta: f64| {
                let s = theta.sin();
                let x = lo + (hi - lo) * s * s;
                2.0 * eval_poly(numerator, x) / (third - x).sqrt()
            };
            let line = adaptive_simpson(&f, 0.0, std::f64::consts::FRAC_PI_2, tol::QUADRATURE_REL)?;
            Ok(2.0 * line)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Lemniscate constant ϖ = 2 ∫₀¹ dt/√(1−t⁴).
    const LEMNISCATE: f64 = 2.622_057_554_292_119_8;

    #[test]
    fn agm_of_one_and_sqrt_two() {
        // Gauss: agm(1, √2) = π/ϖ.
        let m = agm(
            Complex64::new(1.0, 0.0),
            Complex64::new(2.0f64.sqrt(), 0.0),
        )
        .unwrap();
        let expected = std::f64::consts::PI / LEMNISCATE;
        assert!((m.re - expected).abs() < 1e-14);
        assert_eq!(m.im, 0.0);
    }

    #[test]
    fn three_real_roots() {
        let r = depressed_cubic_roots(-1.0, 0.0).unwrap();
        assert!(r.complex_pair.is_none());
        assert!((r.real[0] - 1.0).abs() < 1e-14);
        assert!(r.real[1].abs() < 1e-14);
        assert!((r.real[2] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn one_real_root() {
        let r = depressed_cubic_roots(1.0, 0.0).unwrap();
        assert_eq!(r.real.len(), 1);
        assert!(r.real[0].abs() < 1e-14);
        let rho = r.complex_pair.unwrap();
        assert!((rho - Complex64::new(0.0, 1.0)).norm() < 1e-14
            || (rho - Complex64::new(0.0, -1.0)).norm() < 1e-14);
    }

    #[test]
    fn double_root_is_rejected() {
        // x³ − 3x + 2 = (x−1)²(x+2).
        assert!(matches!(
            depressed_cubic_roots(-3.0, 2.0),
            Err(NumericError::DoubleRoot { .. })
        ));
    }

    #[test]
    fn oracle_reproduces_the_lemniscatic_period() {
        // z2² = z1³ − z1 has real period 2ϖ.
        let v = agm_elliptic_oracle(-1.0, 0.0).unwrap();
        assert!((v - 2.0 * LEMNISCATE).abs() < 1e-13 * v);
    }

    #[test]
    fn quadrature_matches_oracle_on_three_real_roots() {
        for &(p, q) in &[(-1.0, 0.0), (-2.0, 1.0), (-1.0, 0.25)] {
            let roots = depressed_cubic_roots(p, q).unwrap();
            let quad = period_integral(
                &[1.0],
                p,
                q,
                PeriodPath::HalfLine {
                    start: roots.real[0],
                },
            )
            .unwrap();
            let oracle = agm_elliptic_oracle(p, q).unwrap();
            assert!(
                (quad - oracle).abs() <= 1e-8 * oracle.abs(),
                "(p,q)=({},{}) quad={} oracle={}",
                p,
                q,
                quad,
                oracle
            );
        }
    }

    #[test]
    fn quadrature_matches_oracle_on_complex_pair() {
        let quad = period_integral(&[1.0], 1.0, 0.0, PeriodPath::HalfLine { start: 0.0 }).unwrap();
        let oracle = agm_elliptic_oracle(1.0, 0.0).unwrap();
        assert!((quad - oracle).abs() <= 1e-8 * oracle.abs());
    }

    #[test]
    fn segment_cycle_by_symmetry() {
        // z ↦ −z maps the bounded cycle of z³ − z onto the unbounded one.
        let seg =
            period_integral(&[1.0], -1.0, 0.0, PeriodPath::Segment { a: -1.0, b: 0.0 }).unwrap();
        let half =
            period_integral(&[1.0], -1.0, 0.0, PeriodPath::HalfLine { start: 1.0 }).unwrap();
        assert!((seg - half).abs() <= 1e-9 * half);
    }

    #[test]
    fn zero_numerator_gives_zero() {
        let v = period_integral(&[0.0], -1.0, 0.0, PeriodPath::HalfLine { start: 1.0 }).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn homothety_scaling() {
        // Under (p,q) ↦ (λ²p, λ³q) the roots scale by λ and the period by
        // λ^(-1/2).
        let base = agm_elliptic_oracle(-1.0, 0.0).unwrap();
        for &lambda in &[2.0f64, 1.7, 0.3] {
            let scaled = agm_elliptic_oracle(-(lambda * lambda), 0.0).unwrap();
            let expected = base / lambda.sqrt();
            assert!(
                (scaled - expected).abs() <= 1e-10 * expected,
                "lambda = {}",
                lambda
            );
        }
        // A case with q ≠ 0.
        let base = agm_elliptic_oracle(-2.0, 1.0).unwrap();
        let lambda = 1.3f64;
        let scaled = agm_elliptic_oracle(lambda.powi(2) * -2.0, lambda.powi(3)).unwrap();
        assert!((scaled - base / lambda.sqrt()).abs() <= 1e-10 * base);
    }

    #[test]
    fn quadrature_scaling_check() {
        // Period of z³ − c²z from the right-most root c scales as c^(-1/2).
        let base =
            period_integral(&[1.0], -1.0, 0.0, PeriodPath::HalfLine { start: 1.0 }).unwrap();
        let c = 2.0f64;
        let scaled = period_integral(
            &[1.0],
            -c * c,
            0.0,
            PeriodPath::HalfLine { start: c },
        )
        .unwrap();
        assert!((scaled - base / c.sqrt()).abs() <= 1e-8 * base);
    }

    #[test]
    fn interior_root_is_rejected() {
        assert!(matches!(
            period_integral(&[1.0], -1.0, 0.0, PeriodPath::HalfLine { start: -1.0 }),
            Err(NumericError::PathHitsRoot { .. })
        ));
        assert!(matches!(
            period_integral(&[1.0], -1.0, 0.0, PeriodPath::Segment { a: -1.0, b: 1.0 }),
            Err(NumericError::PathHitsRoot { .. })
        ));
    }

    #[test]
    fn non_root_endpoint_is_rejected() {
        assert!(matches!(
            period_integral(&[1.0], -1.0, 0.0, PeriodPath::HalfLine { start: 0.5 }),
            Err(NumericError::EndpointNotRoot { .. })
        ));
    }

    #[test]
    fn upper_segment_is_not_real() {
        // Between the two largest roots of z³ − z the cubic is negative.
        assert!(matches!(
            period_integral(&[1.0], -1.0, 0.0, PeriodPath::Segment { a: 0.0, b: 1.0 }),
            Err(NumericError::NonRealSegment)
        ));
    }

    #[test]
    fn nonconstant_numerator_on_half_line_diverges() {
        assert!(matches!(
            period_integral(&[0.0, 1.0], -1.0, 0.0, PeriodPath::HalfLine { start: 1.0 }),
            Err(NumericError::DivergentPath { degree: 1 })
        ));
    }

    #[test]
    fn polynomial_numerator_on_segment() {
        // ∮ z1/z2 dz1 over the bounded cycle of z³ − z, checked against a
        // high-resolution midpoint rule on an independent parametrisation:
        // x = −sin²φ turns the line integral into −∫ 2sin²φ/√(1+sin²φ) dφ.
        let v = period_integral(&[0.0, 1.0], -1.0, 0.0, PeriodPath::Segment { a: -1.0, b: 0.0 })
            .unwrap();
        let m = 400_000;
        let h = std::f64::consts::FRAC_PI_2 / m as f64;
        let raw: f64 = (0..m)
            .map(|i| {
                let phi = (i as f64 + 0.5) * h;
                let s = phi.sin();
                -2.0 * s * s / (1.0 + s * s).sqrt()
            })
            .sum::<f64>()
            * h;
        assert!((v - 2.0 * raw).abs() <= 1e-7 * raw.abs());
    }
}
