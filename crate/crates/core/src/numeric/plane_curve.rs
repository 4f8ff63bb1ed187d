//! Deterministic shell masses for plane curves.
//!
//! A quasihomogeneous curve {s(z0, z1) = 0} with weights (a0, a1), gcd 1, is
//! a union of orbits of the weighted action t·(z0, z1) = (t^a0 z0, t^a1 z1).
//! Each orbit away from the axes passes through exactly one point (1, y)
//! with s(1, y) = 0 up to the deck symmetry y ↦ ζ^(k·a1)·y, ζ = e^(2πi/a0),
//! and the parametrisation t ↦ (t^a0, t^a1·y) of the orbit is injective
//! because the weights are coprime. Orbits inside an axis are covered with
//! multiplicity (a0 for the z1 = 0 axis, a1 for the other), which enters as
//! a 1/multiplicity factor.
//!
//! The squared-norm integral of a residue over a weighted shell therefore
//! splits into per-orbit integrals over an annulus in the t-plane:
//!
//! ```text
//!     ∫ |g|²/|grad s|² dH² = Σ_orbits (1/mult) ∫∫ F(z(t)) |z′(t)|² τ dθ dτ,
//! ```
//!
//! with t = τ·e^(iθ) and |z′(t)|² = Σ aᵢ² τ^(2aᵢ−2) |xᵢ|². Both factors are
//! smooth on the annulus, so a Gauss–Legendre rule in τ against a trapezoid
//! rule in θ (periodic, hence spectrally accurate) evaluates the masses to
//! near machine precision. This is the preferred code path of the shell
//! probe in two variables; Monte Carlo sampling is for higher dimension.

use num_complex::Complex64;

use super::NumericError;
use crate::poly::Polynomial;
use crate::weights::WeightSystem;

const RADIAL_NODES: usize = 16;
const ANGULAR_NODES: usize = 256;

/// One orbit of the weighted action contributing to the curve.
struct Branch {
    /// A point on the orbit: (1, y) for the generic ones, (1, 0) or (0, 1)
    /// for orbits inside an axis.
    point: [Complex64; 2],
    /// Reciprocal covering multiplicity of t ↦ (t^a0·x0, t^a1·x1).
    weight: f64,
}

/// Shell masses ∫ |g|²/|grad s|² over the bands ρ ∈ [r, 2r], one per radius.
pub(crate) fn shell_masses(
    g: &Polynomial<Complex64>,
    s: &Polynomial<Complex64>,
    ws: &WeightSystem,
    radii: &[f64],
) -> Result<Vec<f64>, NumericError> {
    assert_eq!(s.nvars(), 2, "the quadrature path handles plane curves only");
    let a0 = ws.weights()[0];
    let a1 = ws.weights()[1];
    let branches = enumerate_branches(s, a0, a1)?;
    let grad = [s.partial(0), s.partial(1)];
    let (nodes, weights) = gauss_legendre(RADIAL_NODES);
    let mut masses = vec![0.0; radii.len()];
    for branch in &branches {
        let [x0, x1] = branch.point;
        let rho_p = point_radius(x0, x1, a0, a1);
        for (mass, &r) in masses.iter_mut().zip(radii) {
            let (tau_lo, tau_hi) = (r / rho_p, 2.0 * r / rho_p);
            let mut integral = 0.0;
            for (&node, &weight) in nodes.iter().zip(&weights) {
                let tau = 0.5 * (tau_hi + tau_lo) + 0.5 * (tau_hi - tau_lo) * node;
                let speed_sq = (a0 * a0) as f64 * tau.powi(2 * a0 as i32 - 2) * x0.norm_sqr()
                    + (a1 * a1) as f64 * tau.powi(2 * a1 as i32 - 2) * x1.norm_sqr();
                let mut angular = 0.0;
                for j in 0..ANGULAR_NODES {
                    let theta = 2.0 * std::f64::consts::PI * j as f64 / ANGULAR_NODES as f64;
                    let t = Complex64::from_polar(tau, theta);
                    let z = [t.powi(a0 as i32) * x0, t.powi(a1 as i32) * x1];
                    let g_val = g.evaluate(&z).norm_sqr();
                    let grad_sq = grad[0].evaluate(&z).norm_sqr()
                        + grad[1].evaluate(&z).norm_sqr();
                    angular += g_val / grad_sq;
                }
                angular *= 2.0 * std::f64::consts::PI / ANGULAR_NODES as f64;
                integral += weight * angular * speed_sq * tau;
            }
            integral *= 0.5 * (tau_hi - tau_lo);
            *mass += branch.weight * integral;
        }
    }
    Ok(masses)
}

fn point_radius(x0: Complex64, x1: Complex64, a0: i64, a1: i64) -> f64 {
    x0.norm()
        .powf(1.0 / a0 as f64)
        .max(x1.norm().powf(1.0 / a1 as f64))
}

fn enumerate_branches(
    s: &Polynomial<Complex64>,
    a0: i64,
    a1: i64,
) -> Result<Vec<Branch>, NumericError> {
    // Roots of s(1, y) classify the orbits meeting {z0 ≠ 0}.
    let mut slice = Vec::new();
    for (m, c) in s.terms() {
        let e = m.exponents()[1] as usize;
        if slice.len() <= e {
            slice.resize(e + 1, Complex64::new(0.0, 0.0));
        }
        slice[e] += c;
    }
    while slice.last().is_some_and(|c| c.norm() == 0.0) {
        slice.pop();
    }
    let roots = durand_kerner(&slice)?;
    let scale = 1.0 + roots.iter().map(|r| r.norm()).fold(0.0, f64::max);
    for (i, a) in roots.iter().enumerate() {
        for b in &roots[i + 1..] {
            if (a - b).norm() < 1e-6 * scale {
                return Err(NumericError::RepeatedBranch);
            }
        }
    }
    let one = Complex64::new(1.0, 0.0);
    let zeta = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / a0 as f64);
    let mut branches = Vec::new();
    let mut claimed = vec![false; roots.len()];
    for i in 0..roots.len() {
        if claimed[i] {
            continue;
        }
        // Claim the whole deck orbit of this root.
        for k in 0..a0 {
            let image = zeta.powi((k * a1) as i32) * roots[i];
            for (j, r) in roots.iter().enumerate() {
                if (r - image).norm() < 1e-6 * scale {
                    claimed[j] = true;
                }
            }
        }
        let weight = if roots[i].norm() < 1e-9 * scale {
            // The z1 = 0 axis orbit is covered a0 times.
            1.0 / a0 as f64
        } else {
            1.0
        };
        branches.push(Branch {
            point: [one, roots[i]],
            weight,
        });
    }
    // The z0 = 0 axis lies on the curve exactly when z0 divides s.
    if s.terms().all(|(m, _)| m.exponents()[0] > 0) {
        branches.push(Branch {
            point: [Complex64::new(0.0, 0.0), one],
            weight: 1.0 / a1 as f64,
        });
    }
    Ok(branches)
}

/// All roots of the polynomial with the given coefficients (increasing
/// degree), by the Durand–Kerner simultaneous iteration. Assumes simple
/// roots, which the caller re-checks by pairwise separation.
fn durand_kerner(coeffs: &[Complex64]) -> Result<Vec<Complex64>, NumericError> {
    if coeffs.len() <= 1 {
        return Ok(Vec::new());
    }
    let lead = *coeffs.last().expect("nonempty");
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();
    let eval = |x: Complex64| monic.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c);
    let degree = monic.len() - 1;
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..degree).map(|j| seed.powi(j as i32 + 1)).collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for j in 0..degree {
            let mut denom = Complex64::new(1.0, 0.0);
            for k in 0..degree {
                if k != j {
                    denom *= roots[j] - roots[k];
                }
            }
            let step = eval(roots[j]) / denom;
            roots[j] -= step;
            moved = moved.max(step.norm() / (1.0 + roots[j].norm()));
        }
        if moved < 1e-14 {
            return Ok(roots);
        }
    }
    Err(NumericError::QuadratureFailure {
        reason: "root iteration for the slice polynomial did not converge",
    })
}

/// Nodes and weights of the n-point Gauss–Legendre rule on (-1, 1), by
/// Newton iteration on the Legendre recurrence.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let step = p1 / dp;
            x -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}
