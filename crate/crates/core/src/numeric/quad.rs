//! Adaptive Simpson quadrature.
//!
//! The period integrands are smooth after the endpoint substitutions in
//! [`super::elliptic`], so a classical adaptive Simpson rule with Richardson
//! correction reaches the target tolerance quickly. The error control is
//! relative to the magnitude of the first whole-interval estimate.

use super::NumericError;

/// Integrate `f` over `[a, b]` to the given relative tolerance.
///
/// Fails if the integrand produces a non-finite value or the recursion
/// cannot reach the tolerance within depth 60 (interval width 2^-60 of the
/// original, far below noise level for smooth integrands).
pub fn adaptive_simpson<F>(f: &F, a: f64, b: f64, rel_tol: f64) -> Result<f64, NumericError>
where
    F: Fn(f64) -> f64,
{
    let fa = eval(f, a)?;
    let fb = eval(f, b)?;
    let m = 0.5 * (a + b);
    let fm = eval(f, m)?;
    let whole = simpson(a, b, fa, fm, fb);
    // Floor the scale so a near-zero integral still gets an absolute target.
    let eps = rel_tol * whole.abs().max(1e-12);
    recurse(f, a, b, fa, fm, fb, whole, eps, 60)
}

fn eval<F: Fn(f64) -> f64>(f: &F, x: f64) -> Result<f64, NumericError> {
    let v = f(x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(NumericError::QuadratureFailure {
            reason: "integrand evaluated to a non-finite value",
        })
    }
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    depth: u32,
) -> Result<f64, NumericError> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = eval(f, lm)?;
    let frm = eval(f, rm)?;
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * eps {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(NumericError::QuadratureFailure {
            reason: "refinement limit reached",
        });
    }
    let half_eps = 0.5 * eps;
    Ok(recurse(f, a, m, fa, flm, fm, left, half_eps, depth - 1)?
        + recurse(f, m, b, fm, frm, fb, right, half_eps, depth - 1)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let v = adaptive_simpson(&|x: f64| x * x, 0.0, 1.0, 1e-12).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn sine_over_half_period() {
        let v = adaptive_simpson(&|x: f64| x.sin(), 0.0, std::f64::consts::PI, 1e-12).unwrap();
        assert!((v - 2.0).abs() < 1e-11);
    }

    #[test]
    fn smooth_peak() {
        // ∫ 1/(1+x²) over [-4, 4] = 2·atan(4).
        let v = adaptive_simpson(&|x: f64| 1.0 / (1.0 + x * x), -4.0, 4.0, 1e-11).unwrap();
        assert!((v - 2.0 * 4.0f64.atan()).abs() < 1e-10);
    }

    #[test]
    fn non_finite_integrand_is_reported() {
        let r = adaptive_simpson(&|x: f64| 1.0 / x, 0.0, 1.0, 1e-10);
        assert!(matches!(r, Err(NumericError::QuadratureFailure { .. })));
    }
}
