//! Residues of meromorphic top forms with a first-order pole.
//!
//! A [`MeroTopForm`] is the expression `(g/s) dz0∧…∧dzn`. On the part of the
//! hypersurface `{s = 0}` where the partial derivative `s_i = ∂s/∂z_i` does
//! not vanish, the residue of the form along the hypersurface has the chart
//! representative
//!
//! ```text
//!     R_i = (-1)^i (g/s_i) dz0 ∧ … (omit dz_i) … ∧ dzn,
//! ```
//!
//! characterised by `ds ∧ R_i = s · ω`. Different charts give the same form
//! on the overlap of their validity regions; [`chart_consistency_check`]
//! measures that agreement numerically and [`check_leray_candidate`] verifies
//! the defining identity symbolically.
//!
//! The pointwise norm of the residue on the regular part of the hypersurface
//! is `|g| / |grad s|`, independent of the chart; [`evaluate_norm_density`]
//! computes it at a floating-point sample.

use num_complex::Complex64;
use thiserror::Error;

use crate::forms::{DiffForm, FormError, RationalFunction};
use crate::poly::Polynomial;
use crate::scalar::Scalar;
use crate::tol;

/// Failure modes of residue construction and evaluation.
#[derive(Debug, Error)]
pub enum ResidueError {
    /// The denominator polynomial of the form is identically zero.
    #[error("the pole divisor polynomial is identically zero")]
    SurfaceZero,
    /// The denominator is a nonzero constant, so its zero set is empty.
    #[error("the pole divisor polynomial is a nonzero constant; it cuts out no hypersurface")]
    SurfaceConstant,
    /// Numerator and denominator live in different ambient spaces.
    #[error("numerator has {g} variables but the pole divisor has {s}")]
    VariableMismatch { g: usize, s: usize },
    /// `∂s/∂z_i` vanishes identically, so chart `i` covers nothing.
    #[error("chart {chart} is degenerate: the partial derivative of the pole divisor in z{chart} is identically zero")]
    ChartDegenerate { chart: usize },
    /// The sample point does not satisfy `s = 0` to the working tolerance.
    #[error("point is off the hypersurface: |s| = {residual:.3e} exceeds {tolerance:.3e}")]
    OffHypersurface { residual: f64, tolerance: f64 },
    /// The gradient of `s` is numerically zero at the sample point.
    #[error("point is singular: |grad s| = {gradient_norm:.3e} is below the working threshold")]
    SingularPoint { gradient_norm: f64 },
    /// Tangent-frame construction produced a numerically dependent set.
    #[error("could not build a tangent frame: projected basis vector has norm {norm:.3e}")]
    DegenerateFrame { norm: f64 },
    #[error(transparent)]
    Form(#[from] FormError),
}

/// A meromorphic top-degree form `(g/s) dz0∧…∧dzn` with first-order pole
/// along the hypersurface `{s = 0}`.
///
/// The numerator `g` may be any polynomial (including zero); the denominator
/// `s` must be nonconstant so that it actually cuts out a hypersurface.
#[derive(Clone, Debug, PartialEq)]
pub struct MeroTopForm<C: Scalar> {
    g: Polynomial<C>,
    s: Polynomial<C>,
}

impl<C: Scalar> MeroTopForm<C> {
    pub fn new(g: Polynomial<C>, s: Polynomial<C>) -> Result<Self, ResidueError> {
        if s.is_zero() {
            return Err(ResidueError::SurfaceZero);
        }
        if s.is_constant() {
            return Err(ResidueError::SurfaceConstant);
        }
        if g.nvars() != s.nvars() {
            return Err(ResidueError::VariableMismatch {
                g: g.nvars(),
                s: s.nvars(),
            });
        }
        Ok(MeroTopForm { g, s })
    }

    pub fn numerator(&self) -> &Polynomial<C> {
        &self.g
    }

    /// The polynomial cutting out the pole hypersurface.
    pub fn surface(&self) -> &Polynomial<C> {
        &self.s
    }

    pub fn nvars(&self) -> usize {
        self.s.nvars()
    }

    /// The form itself, as a top-degree element of the exterior algebra.
    pub fn as_form(&self) -> DiffForm<C> {
        DiffForm::top(
            self.nvars(),
            RationalFunction::new(self.g.clone(), self.s.clone())
                .expect("surface polynomial is nonzero by construction"),
        )
    }

    /// Replace the numerator, keeping the pole divisor.
    pub fn with_numerator(&self, g: Polynomial<C>) -> Result<Self, ResidueError> {
        Self::new(g, self.s.clone())
    }
}

/// The residue of a [`MeroTopForm`] written in the chart where one partial
/// derivative of the pole divisor is inverted.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartResidue<C: Scalar> {
    /// Index of the inverted partial derivative.
    pub chart: usize,
    /// `(-1)^chart (g/s_chart) dz0 ∧ … (omit chart) … ∧ dzn`; contains no
    /// `dz_chart` factor and satisfies `ds ∧ form = s · ω` identically.
    pub form: DiffForm<C>,
}

/// Compute the chart-`i` residue representative of `ω`.
///
/// Fails with [`ResidueError::ChartDegenerate`] when `∂s/∂z_i ≡ 0`, in which
/// case the chart covers no part of the hypersurface.
pub fn chart_residue<C: Scalar>(
    omega: &MeroTopForm<C>,
    i: usize,
) -> Result<ChartResidue<C>, ResidueError> {
    let n = omega.nvars();
    assert!(i < n, "chart index {} out of range for {} variables", i, n);
    let s_i = omega.s.partial(i);
    if s_i.is_zero() {
        return Err(ResidueError::ChartDegenerate { chart: i });
    }
    let mut num = omega.g.clone();
    if i % 2 == 1 {
        num = num.neg();
    }
    let coeff = RationalFunction::new(num, s_i)?;
    let tuple: Vec<usize> = (0..n).filter(|&k| k != i).collect();
    let form = DiffForm::from_terms(n, n - 1, [(tuple, coeff)]);
    Ok(ChartResidue { chart: i, form })
}

/// Outcome of checking `ds ∧ candidate = s · ω`.
#[derive(Clone, Debug)]
pub struct LerayCheck<C: Scalar> {
    pub pass: bool,
    /// When the identity fails, the index tuple on which the two sides first
    /// differ, together with both coefficients.
    pub witness: Option<LerayWitness<C>>,
}

/// A differing coefficient exhibiting failure of the residue identity.
#[derive(Clone, Debug)]
pub struct LerayWitness<C: Scalar> {
    pub tuple: Vec<usize>,
    /// Coefficient of the tuple in `ds ∧ candidate`.
    pub lhs: RationalFunction<C>,
    /// Coefficient of the tuple in `s · ω`.
    pub rhs: RationalFunction<C>,
}

/// Check whether `candidate` satisfies the residue identity
/// `ds ∧ candidate = s · ω` exactly, comparing coefficients as rational
/// functions (equality by cross multiplication, so no common-factor
/// normalisation is assumed).
pub fn check_leray_candidate<C: Scalar>(
    omega: &MeroTopForm<C>,
    candidate: &DiffForm<C>,
) -> LerayCheck<C> {
    let n = omega.nvars();
    assert_eq!(candidate.nvars(), n, "candidate lives in the wrong ambient space");
    assert_eq!(
        candidate.degree(),
        n - 1,
        "candidate must have degree one below the top"
    );
    let mut ds = DiffForm::zero(n, 1);
    for k in 0..n {
        let s_k = omega.s.partial(k);
        if !s_k.is_zero() {
            ds = ds.add(&DiffForm::from_terms(
                n,
                1,
                [(vec![k], RationalFunction::from_poly(s_k))],
            ));
        }
    }
    let lhs = ds
        .wedge(candidate)
        .expect("degree (n-1) + 1 never exceeds the number of coordinates");
    // s · (g/s) collapses to g exactly, so the right-hand side is polynomial.
    let rhs = DiffForm::top(n, RationalFunction::from_poly(omega.g.clone()));
    let top: Vec<usize> = (0..n).collect();
    let zero = RationalFunction::zero(n);
    let l = lhs.coefficient(&top).unwrap_or(&zero);
    let r = rhs.coefficient(&top).unwrap_or(&zero);
    if l == r {
        LerayCheck { pass: true, witness: None }
    } else {
        LerayCheck {
            pass: false,
            witness: Some(LerayWitness {
                tuple: top,
                lhs: l.clone(),
                rhs: r.clone(),
            }),
        }
    }
}

/// Compute the chart-`i` residue and verify its defining identity.
pub fn verify_leray_identity<C: Scalar>(
    omega: &MeroTopForm<C>,
    i: usize,
) -> Result<LerayCheck<C>, ResidueError> {
    let residue = chart_residue(omega, i)?;
    Ok(check_leray_candidate(omega, &residue.form))
}

/// Evaluate `s` and its gradient at a floating-point sample, enforcing the
/// on-hypersurface and regular-point preconditions shared by the numeric
/// residue operations. Returns the gradient values.
fn gradient_at<C: Scalar>(
    omega: &MeroTopForm<C>,
    point: &[Complex64],
) -> Result<Vec<Complex64>, ResidueError> {
    let s_c = omega.s.approx();
    let residual = s_c.evaluate(point).norm();
    // The tolerance is relative to the total monomial mass of s at the point,
    // so that rescaling s or the coordinates does not change the verdict.
    let tolerance = tol::ON_HYPERSURFACE_REL * (1.0 + s_c.term_abs_sum(point));
    if residual > tolerance {
        return Err(ResidueError::OffHypersurface { residual, tolerance });
    }
    let grad: Vec<Complex64> = (0..omega.nvars())
        .map(|k| s_c.partial(k).evaluate(point))
        .collect();
    let gradient_norm = grad.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    if gradient_norm < tol::GRADIENT_MIN {
        return Err(ResidueError::SingularPoint { gradient_norm });
    }
    Ok(grad)
}

/// Pointwise norm `|g| / |grad s|` of the residue at a regular point of the
/// hypersurface.
///
/// The value is chart independent: evaluating any chart representative on a
/// unitary frame of the tangent space gives a number of exactly this
/// magnitude. Its square integrated over the hypersurface is the L² norm
/// that the shell probes in the numeric layer estimate.
pub fn evaluate_norm_density<C: Scalar>(
    omega: &MeroTopForm<C>,
    point: &[Complex64],
) -> Result<f64, ResidueError> {
    let grad = gradient_at(omega, point)?;
    let gradient_norm = grad.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    let g_val = omega.g.approx().evaluate(point).norm();
    Ok(g_val / gradient_norm)
}

/// Build a unitary frame of the tangent space `ker(ds)` at a point with
/// gradient values `grad`, deterministically.
///
/// Writing `k` for the index of the largest gradient component, the frame is
/// the Gram–Schmidt orthonormalisation (in the Hermitian inner product) of
/// the projections of the coordinate vectors `e_l`, `l ≠ k`, onto the kernel
/// of the complex-linear functional `v ↦ Σ grad_l · v_l`. The projections are
/// linearly independent whenever the gradient is nonzero, so the only failure
/// mode is numerical (a nearly dependent intermediate vector).
pub fn tangent_frame(grad: &[Complex64]) -> Result<Vec<Vec<Complex64>>, ResidueError> {
    let n = grad.len();
    assert!(n >= 2, "a tangent frame needs at least two ambient coordinates");
    let total: f64 = grad.iter().map(|v| v.norm_sqr()).sum();
    if total.sqrt() < tol::GRADIENT_MIN {
        return Err(ResidueError::SingularPoint {
            gradient_norm: total.sqrt(),
        });
    }
    let k = (0..n)
        .max_by(|&a, &b| grad[a].norm().total_cmp(&grad[b].norm()))
        .expect("nonempty gradient");
    // ghat satisfies ds(ghat) = 1, so v - ds(v)·ghat projects onto ker(ds).
    let ghat: Vec<Complex64> = grad.iter().map(|v| v.conj() / total).collect();
    let mut frame: Vec<Vec<Complex64>> = Vec::with_capacity(n - 1);
    for l in 0..n {
        if l == k {
            continue;
        }
        let mut w = vec![Complex64::new(0.0, 0.0); n];
        w[l] = Complex64::new(1.0, 0.0);
        let pairing = grad[l];
        for (w_m, ghat_m) in w.iter_mut().zip(&ghat) {
            *w_m -= pairing * ghat_m;
        }
        for prev in &frame {
            let inner: Complex64 = w.iter().zip(prev).map(|(a, b)| a * b.conj()).sum();
            for (w_m, p_m) in w.iter_mut().zip(prev) {
                *w_m -= inner * p_m;
            }
        }
        let norm = w.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-10 {
            return Err(ResidueError::DegenerateFrame { norm });
        }
        for w_m in w.iter_mut() {
            *w_m /= norm;
        }
        frame.push(w);
    }
    Ok(frame)
}

/// Maximum relative deviation between the chart-`i` and chart-`j` residue
/// representatives of `ω`, evaluated on a shared tangent frame at each of the
/// given points.
///
/// Each point must lie on the hypersurface (to the working tolerance) and be
/// regular; the frames are built deterministically by [`tangent_frame`], so
/// repeated runs give identical output. The deviation at a point is
/// `|v_i - v_j| / max(1, |v_i|, |v_j|)`. Passing `i == j` returns exactly 0.
pub fn chart_consistency_check<C: Scalar>(
    omega: &MeroTopForm<C>,
    i: usize,
    j: usize,
    points: &[Vec<Complex64>],
) -> Result<f64, ResidueError> {
    let r_i = chart_residue(omega, i)?;
    let r_j = chart_residue(omega, j)?;
    let mut worst = 0.0f64;
    for point in points {
        let grad = gradient_at(omega, point)?;
        let frame = tangent_frame(&grad)?;
        let v_i = r_i.form.evaluate(point, &frame)?;
        let v_j = r_j.form.evaluate(point, &frame)?;
        let scale = 1.0f64.max(v_i.norm()).max(v_j.norm());
        worst = worst.max((v_i - v_j).norm() / scale);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formlang::{parse_form, parse_poly, ParseOptions};
    use crate::scalar::GaussianRational;

    type Q = GaussianRational;

    fn poly(text: &str, nvars: usize) -> Polynomial<Q> {
        let opts = ParseOptions {
            nvars: Some(nvars),
            ..ParseOptions::default()
        };
        parse_poly(text, &opts).unwrap().value
    }

    /// The torus family cubic z1^3 + p z0^2 z1 + q z0^3 - z0 z2^2 at p = -1,
    /// q = 0, with numerator 1.
    fn torus_cubic() -> MeroTopForm<Q> {
        let s = poly("z1^3 - z0^2*z1 - z0*z2^2", 3);
        MeroTopForm::new(Polynomial::one(3), s).unwrap()
    }

    fn cusp() -> MeroTopForm<Q> {
        let s = poly("z0^2 - z1^3", 2);
        MeroTopForm::new(Polynomial::one(2), s).unwrap()
    }

    #[test]
    fn constructor_rejects_degenerate_surfaces() {
        assert!(matches!(
            MeroTopForm::new(Polynomial::one(2), Polynomial::<Q>::zero(2)),
            Err(ResidueError::SurfaceZero)
        ));
        assert!(matches!(
            MeroTopForm::new(Polynomial::one(2), Polynomial::constant(2, Q::from_integer(3))),
            Err(ResidueError::SurfaceConstant)
        ));
        assert!(matches!(
            MeroTopForm::new(Polynomial::one(2), poly("z0", 3)),
            Err(ResidueError::VariableMismatch { g: 2, s: 3 })
        ));
    }

    #[test]
    fn torus_cubic_chart_two_residue() {
        let omega = torus_cubic();
        let r = chart_residue(&omega, 2).unwrap();
        let expected = parse_form("-1/(2*z0*z2) * dz0^dz1", &ParseOptions::default())
            .unwrap()
            .value;
        assert_eq!(r.form, expected);
    }

    #[test]
    fn smooth_chart_residue_is_polynomial() {
        // s = z0 has s_0 = 1, so the chart-0 residue is g dz1∧dz2 on the nose.
        let s = poly("z0", 3);
        let g = poly("z1 + z2^2", 3);
        let omega = MeroTopForm::new(g.clone(), s).unwrap();
        let r = chart_residue(&omega, 0).unwrap();
        let coeff = r.form.coefficient(&[1, 2]).unwrap();
        assert!(coeff.is_polynomial());
        assert_eq!(coeff.num(), &g);
    }

    #[test]
    fn cusp_chart_zero_residue() {
        let omega = cusp();
        let r = chart_residue(&omega, 0).unwrap();
        let expected = parse_form("1/(2*z0) * dz1", &ParseOptions::default())
            .unwrap()
            .value;
        assert_eq!(r.form, expected);
    }

    #[test]
    fn degenerate_chart_is_rejected() {
        // s = z0^2 - z1^3 in three variables never involves z2.
        let s = poly("z0^2 - z1^3", 3);
        let omega = MeroTopForm::new(Polynomial::one(3), s).unwrap();
        assert!(matches!(
            chart_residue(&omega, 2),
            Err(ResidueError::ChartDegenerate { chart: 2 })
        ));
    }

    #[test]
    fn leray_identity_holds_in_every_valid_chart() {
        let omega = torus_cubic();
        for i in 0..3 {
            let check = verify_leray_identity(&omega, i).unwrap();
            assert!(check.pass, "chart {} failed", i);
            assert!(check.witness.is_none());
        }
    }

    #[test]
    fn corrupted_candidate_yields_witness() {
        let omega = torus_cubic();
        let r = chart_residue(&omega, 2).unwrap();
        let check = check_leray_candidate(&omega, &r.form.neg());
        assert!(!check.pass);
        let w = check.witness.expect("failing check must produce a witness");
        assert_eq!(w.tuple, vec![0, 1, 2]);
        assert_ne!(w.lhs, w.rhs);
        // The corrupted side is exactly the negation of the true one.
        assert_eq!(w.lhs, w.rhs.neg());
    }

    #[test]
    fn norm_density_of_smooth_linear_surface() {
        let omega = MeroTopForm::new(Polynomial::one(2), poly("z0", 2)).unwrap();
        let p = vec![Complex64::new(0.0, 0.0), Complex64::new(0.7, -0.3)];
        let d = evaluate_norm_density(&omega, &p).unwrap();
        assert!((d - 1.0).abs() < 1e-14);
    }

    #[test]
    fn norm_density_on_cusp_parametrisation() {
        // (t^3, t^2) lies on z0^2 = z1^3; the density there is
        // 1 / sqrt(4 t^6 + 9 t^8). Dyadic t keeps the point exactly on the
        // curve in binary64.
        let omega = cusp();
        for t in [0.5f64, 0.25, 1.0] {
            let p = vec![
                Complex64::new(t.powi(3), 0.0),
                Complex64::new(t.powi(2), 0.0),
            ];
            let d = evaluate_norm_density(&omega, &p).unwrap();
            let expected = 1.0 / (4.0 * t.powi(6) + 9.0 * t.powi(8)).sqrt();
            assert!((d - expected).abs() <= 1e-12 * expected);
        }
    }

    #[test]
    fn norm_density_vanishes_when_numerator_is_multiple_of_surface() {
        let s = poly("z0^2 - z1^3", 2);
        let g = poly("(z0^2 - z1^3) * (z1 + 2)", 2);
        let omega = MeroTopForm::new(g, s).unwrap();
        let p = vec![Complex64::new(0.125, 0.0), Complex64::new(0.25, 0.0)];
        let d = evaluate_norm_density(&omega, &p).unwrap();
        assert!(d.abs() < 1e-12);
    }

    #[test]
    fn off_surface_point_is_rejected() {
        let omega = cusp();
        let p = vec![Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0)];
        assert!(matches!(
            evaluate_norm_density(&omega, &p),
            Err(ResidueError::OffHypersurface { .. })
        ));
    }

    #[test]
    fn singular_point_is_rejected() {
        let omega = cusp();
        let p = vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)];
        assert!(matches!(
            evaluate_norm_density(&omega, &p),
            Err(ResidueError::SingularPoint { .. })
        ));
    }

    #[test]
    fn tangent_frame_is_unitary_and_annihilates_ds() {
        let grad = vec![
            Complex64::new(1.0, 2.0),
            Complex64::new(-0.5, 0.25),
            Complex64::new(3.0, -1.0),
        ];
        let frame = tangent_frame(&grad).unwrap();
        assert_eq!(frame.len(), 2);
        for (a, v) in frame.iter().enumerate() {
            let ds_v: Complex64 = grad.iter().zip(v).map(|(g, x)| g * x).sum();
            assert!(ds_v.norm() < 1e-14);
            for (b, w) in frame.iter().enumerate() {
                let inner: Complex64 = v.iter().zip(w).map(|(x, y)| x * y.conj()).sum();
                let expected = if a == b { 1.0 } else { 0.0 };
                assert!((inner - expected).norm() < 1e-13);
            }
        }
    }

    /// Points (1, y, sqrt(y^3 - y)) on the torus family cubic at p=-1, q=0.
    fn torus_cubic_points() -> Vec<Vec<Complex64>> {
        [0.5f64, 2.0, -0.75, 3.25, -2.5]
            .iter()
            .map(|&y| {
                let w = Complex64::new(y * y * y - y, 0.0).sqrt();
                vec![Complex64::new(1.0, 0.0), Complex64::new(y, 0.0), w]
            })
            .collect()
    }

    #[test]
    fn chart_consistency_on_torus_cubic() {
        let omega = torus_cubic();
        let dev = chart_consistency_check(&omega, 0, 2, &torus_cubic_points()).unwrap();
        assert!(dev <= 1e-9, "deviation {} exceeds tolerance", dev);
    }

    #[test]
    fn chart_consistency_same_chart_is_exact() {
        let omega = torus_cubic();
        let dev = chart_consistency_check(&omega, 2, 2, &torus_cubic_points()).unwrap();
        assert_eq!(dev, 0.0);
    }

    #[test]
    fn chart_consistency_on_smooth_line() {
        let omega = MeroTopForm::new(Polynomial::one(2), poly("z0 + z1", 2)).unwrap();
        let points: Vec<Vec<Complex64>> = [0.5f64, -1.25, 2.0]
            .iter()
            .map(|&w| vec![Complex64::new(w, 0.0), Complex64::new(-w, 0.0)])
            .collect();
        let dev = chart_consistency_check(&omega, 0, 1, &points).unwrap();
        assert!(dev <= 1e-12);
    }

    #[test]
    fn frame_evaluation_magnitude_matches_norm_density() {
        // Evaluating any chart representative on a unitary tangent frame
        // gives a value of magnitude |g| / |grad s|.
        let omega = torus_cubic();
        let r = chart_residue(&omega, 2).unwrap();
        for point in torus_cubic_points() {
            let density = evaluate_norm_density(&omega, &point).unwrap();
            let grad = gradient_at(&omega, &point).unwrap();
            let frame = tangent_frame(&grad).unwrap();
            let value = r.form.evaluate(&point, &frame).unwrap();
            assert!(
                (value.norm() - density).abs() <= 1e-8 * density.max(1.0),
                "|value| = {}, density = {}",
                value.norm(),
                density
            );
        }
    }
}
