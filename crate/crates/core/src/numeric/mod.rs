//! Floating-point verification layer.
//!
//! Everything here works in binary64 on top of the exact core: locating
//! points of the hypersurface, sampling weighted shells around the singular
//! point, estimating the square-norm integral of the residue shell by shell,
//! and integrating second residues over explicit cycles with an independent
//! arithmetic-geometric-mean oracle as cross-check.
//!
//! Determinism contract: every operation that takes an rng seed is
//! bit-reproducible for a fixed seed, independent of thread count. Random
//! draws get pre-assigned ChaCha substreams keyed by draw index, and
//! parallel results are reduced in index order.

pub mod elliptic;
pub mod plane_curve;
pub mod quad;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::poly::Polynomial;
use crate::quasihomog::{decompose_form, GradingError};
use crate::residue::{MeroTopForm, ResidueError};
use crate::scalar::Scalar;
use crate::tol;
use crate::weights::WeightSystem;

/// Failure modes of the numeric layer.
#[derive(Debug, Error)]
pub enum NumericError {
    #[error("Newton iteration did not converge: residual {residual:.3e} after {iterations} steps")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("landed at a singular point: |grad s| = {gradient_norm:.3e}")]
    SingularPoint { gradient_norm: f64 },
    #[error("shell sampling acceptance rate {rate:.4} fell below {minimum} after {draws} draws")]
    SamplingFailure { rate: f64, minimum: f64, draws: usize },
    #[error("empty point list")]
    EmptyPointList,
    #[error("form has {count} weight components; probe one component at a time")]
    MultiComponent { count: usize },
    #[error("shell masses are zero or non-finite; no slope can be fitted")]
    DegenerateMass,
    #[error("endpoint {value} is not a root of the cubic (residual {residual:.3e})")]
    EndpointNotRoot { value: f64, residual: f64 },
    #[error("a root of the cubic lies inside the integration path at x = {root}")]
    PathHitsRoot { root: f64 },
    #[error("the cubic is negative on this segment, so the cycle is not real")]
    NonRealSegment,
    #[error("the cycle over the half line diverges: numerator has degree {degree}")]
    DivergentPath { degree: usize },
    #[error("the cubic has a (near-)double root: discriminant {disc:.3e}")]
    DoubleRoot { disc: f64 },
    #[error("arithmetic-geometric mean iteration did not converge")]
    AgmNonConvergence,
    #[error("the slice polynomial has a repeated root; the curve is not reduced along a branch")]
    RepeatedBranch,
    #[error("quadrature failed: {reason}")]
    QuadratureFailure { reason: &'static str },
    #[error(transparent)]
    Grading(#[from] GradingError),
    #[error(transparent)]
    Residue(#[from] ResidueError),
}

/// A numerically verified point of the hypersurface {s = 0}.
#[derive(Clone, Debug)]
pub struct PointOnX {
    pub coordinates: Vec<Complex64>,
    /// |s| at the point, relative residual below the working tolerance.
    pub residual: f64,
    /// |grad s| at the point, above the singular-point threshold.
    pub gradient_norm: f64,
}

/// Pin the global worker-thread count, once per process. Results never
/// depend on it (draws have pre-assigned substreams and are reduced in
/// index order); the knob only bounds resource use.
pub fn configure_thread_count(n: usize) -> Result<(), String> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn grad_norm_at(partials: &[Polynomial<Complex64>], z: &[Complex64]) -> f64 {
    partials
        .iter()
        .map(|p| p.evaluate(z).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Newton iteration along a single coordinate, the one whose partial is
/// largest at the seed. The update leaves all other coordinates untouched.
fn newton_onto_surface(
    s: &Polynomial<Complex64>,
    partials: &[Polynomial<Complex64>],
    mut z: Vec<Complex64>,
) -> Result<PointOnX, NumericError> {
    let pick = |z: &[Complex64]| -> (usize, f64) {
        let mut best = (0, 0.0f64);
        for (i, p) in partials.iter().enumerate() {
            let n = p.evaluate(z).norm();
            if n > best.1 {
                best = (i, n);
            }
        }
        best
    };
    let (mut k, mag) = pick(&z);
    if mag < tol::GRADIENT_MIN {
        return Err(NumericError::SingularPoint { gradient_norm: mag });
    }
    for _ in 0..tol::NEWTON_MAX_ITER {
        let val = s.evaluate(&z);
        let scale = 1.0 + s.term_abs_sum(&z);
        if val.norm() <= tol::NEWTON_POLISH_REL * scale {
            break;
        }
        let mut dk = partials[k].evaluate(&z);
        if dk.norm() < tol::GRADIENT_MIN {
            // The chosen coordinate degenerated along the way; re-pick once
            // per occurrence rather than failing outright.
            let (k2, mag) = pick(&z);
            if mag < tol::GRADIENT_MIN {
                return Err(NumericError::SingularPoint { gradient_norm: mag });
            }
            k = k2;
            dk = partials[k].evaluate(&z);
        }
        z[k] -= val / dk;
    }
    let scale = 1.0 + s.term_abs_sum(&z);
    let residual = s.evaluate(&z).norm();
    if residual > tol::ON_HYPERSURFACE_REL * scale {
        return Err(NumericError::NonConvergence {
            iterations: tol::NEWTON_MAX_ITER,
            residual,
        });
    }
    let gradient_norm = grad_norm_at(partials, &z);
    if gradient_norm < tol::GRADIENT_MIN {
        return Err(NumericError::SingularPoint { gradient_norm });
    }
    Ok(PointOnX {
        coordinates: z,
        residual,
        gradient_norm,
    })
}

/// Project a seed onto the hypersurface by Newton iteration on the
/// coordinate with the largest partial derivative at the seed.
pub fn find_point_on_x(
    s: &Polynomial<Complex64>,
    seed: &[Complex64],
) -> Result<PointOnX, NumericError> {
    assert_eq!(seed.len(), s.nvars(), "seed has the wrong arity");
    let partials: Vec<_> = (0..s.nvars()).map(|i| s.partial(i)).collect();
    newton_onto_surface(s, &partials, seed.to_vec())
}

/// Weighted radius ρ(z) = max |zᵢ|^(1/aᵢ), the scale function of the
/// weighted action.
pub fn weighted_radius(z: &[Complex64], ws: &WeightSystem) -> f64 {
    z.iter()
        .zip(ws.weights())
        .map(|(v, &a)| v.norm().powf(1.0 / a as f64))
        .fold(0.0, f64::max)
}

fn draw_on_shell(
    s: &Polynomial<Complex64>,
    partials: &[Polynomial<Complex64>],
    ws: &WeightSystem,
    r: f64,
    key: u64,
) -> Option<PointOnX> {
    let mut rng = ChaCha8Rng::seed_from_u64(key);
    let n = s.nvars();
    let mut u = Vec::with_capacity(n);
    for _ in 0..n {
        // Complex standard normal via Box-Muller; only the direction
        // survives the weighted normalisation below.
        let radius = (-(1.0 - rng.gen::<f64>()).ln()).sqrt();
        let angle = 2.0 * std::f64::consts::PI * rng.gen::<f64>();
        u.push(Complex64::from_polar(radius, angle));
    }
    let rho_u = weighted_radius(&u, ws);
    if rho_u < 1e-12 {
        return None;
    }
    let t = 1.0 + rng.gen::<f64>();
    let scaled = t * r;
    let z: Vec<Complex64> = u
        .iter()
        .zip(ws.weights())
        .map(|(v, &a)| v / rho_u.powi(a as i32) * scaled.powi(a as i32))
        .collect();
    let point = newton_onto_surface(s, partials, z).ok()?;
    let rho = weighted_radius(&point.coordinates, ws);
    if rho < r || rho > 2.0 * r {
        return None;
    }
    Some(point)
}

/// Draw `count` points of {s = 0} with weighted radius in [r, 2r],
/// deterministically for a fixed seed.
///
/// Seeds come from weighted-normalised Gaussian directions scaled into the
/// band, then projected onto the hypersurface by Newton iteration; draws
/// whose projection leaves the band are rejected. Fails when the acceptance
/// rate drops below [`tol::SAMPLING_MIN_ACCEPTANCE`].
pub fn sample_shell(
    s: &Polynomial<Complex64>,
    ws: &WeightSystem,
    r: f64,
    count: usize,
    seed: u64,
) -> Result<Vec<PointOnX>, NumericError> {
    assert!(r > 0.0, "shell radius must be positive");
    let partials: Vec<_> = (0..s.nvars()).map(|i| s.partial(i)).collect();
    let mut accepted: Vec<PointOnX> = Vec::with_capacity(count);
    let mut draws: usize = 0;
    let cap = 10_000usize.max(400 * count);
    const BATCH: usize = 512;
    while accepted.len() < count {
        let batch: Vec<Option<PointOnX>> = (draws..draws + BATCH)
            .into_par_iter()
            .map(|i| {
                let key = splitmix64(seed ^ (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
                draw_on_shell(s, &partials, ws, r, key)
            })
            .collect();
        draws += BATCH;
        accepted.extend(batch.into_iter().flatten());
        let rate = accepted.len() as f64 / draws as f64;
        if (draws >= 10_000 && rate < tol::SAMPLING_MIN_ACCEPTANCE)
            || (draws >= cap && accepted.len() < count)
        {
            return Err(NumericError::SamplingFailure {
                rate,
                minimum: tol::SAMPLING_MIN_ACCEPTANCE,
                draws,
            });
        }
    }
    accepted.truncate(count);
    Ok(accepted)
}

/// Monte Carlo estimate of a shell integral, with its standard error.
#[derive(Clone, Copy, Debug)]
pub struct ShellMass {
    pub mass: f64,
    pub std_err: f64,
    pub count: usize,
}

fn mean_and_err(contributions: &[f64]) -> (f64, f64) {
    let n = contributions.len() as f64;
    let mean = contributions.iter().sum::<f64>() / n;
    if contributions.len() < 2 {
        return (mean, f64::INFINITY);
    }
    let var = contributions
        .iter()
        .map(|c| (c - mean).powi(2))
        .sum::<f64>()
        / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Per-point estimator core: |g|²/|s_k|² with k the largest partial, which
/// is |g|²/|grad s|² times the graph-parametrisation area factor of the
/// hypersurface over the coordinates other than k.
fn graph_contribution(
    g: &Polynomial<Complex64>,
    partials: &[Polynomial<Complex64>],
    z: &[Complex64],
) -> f64 {
    let sk = partials
        .iter()
        .map(|p| p.evaluate(z).norm_sqr())
        .fold(0.0, f64::max);
    g.evaluate(z).norm_sqr() / sk
}

/// Monte Carlo estimate of ∫ |g|²/|grad s|² over the shell the points were
/// sampled from, up to a fixed constant of the sampling measure.
///
/// The estimator is r^2n times the mean of the graph contributions, which is
/// exactly scale-equivariant for the unweighted radius map: the expected
/// value at radius r is r^2v(ω) times a constant. Ratios between shells and
/// log-log slopes are therefore meaningful; the absolute normalisation is
/// not calibrated. For unequal weights the probe applies a per-point radius
/// correction instead (see [`l2_probe`]).
pub fn shell_mass<C: Scalar>(
    omega: &MeroTopForm<C>,
    points: &[PointOnX],
    r: f64,
) -> Result<ShellMass, NumericError> {
    if points.is_empty() {
        return Err(NumericError::EmptyPointList);
    }
    let g = omega.numerator().approx();
    let s = omega.surface().approx();
    let partials: Vec<_> = (0..s.nvars()).map(|i| s.partial(i)).collect();
    let n = (s.nvars() - 1) as i32;
    let contributions: Vec<f64> = points
        .iter()
        .map(|p| graph_contribution(&g, &partials, &p.coordinates))
        .collect();
    let (mean, err) = mean_and_err(&contributions);
    let factor = r.powi(2 * n);
    Ok(ShellMass {
        mass: factor * mean,
        std_err: factor * err,
        count: points.len(),
    })
}

/// Verdict of the square-integrability probe.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProbeVerdict {
    /// Shell masses decay towards the singular point: the integral converges.
    Convergent,
    /// Shell masses grow towards the singular point: the integral diverges.
    Divergent,
    /// Fitted slope within the borderline band around zero.
    Borderline,
}

/// Which integration engine produced the shell masses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProbePath {
    /// Deterministic branch-orbit quadrature (two variables).
    PlaneCurveQuadrature,
    /// Weighted Monte Carlo sampling (three or more variables).
    MonteCarlo,
}

/// Outcome of [`l2_probe`].
#[derive(Clone, Debug)]
pub struct ProbeResult {
    /// Shell radii, decreasing geometrically towards the singular point.
    pub radii: Vec<f64>,
    /// Estimated mass of each shell.
    pub masses: Vec<f64>,
    /// Standard errors of the masses (Monte Carlo path only).
    pub std_errs: Option<Vec<f64>>,
    /// Least-squares slope of log mass against log radius.
    pub slope: f64,
    pub verdict: ProbeVerdict,
    /// Weight of the probed component.
    pub component_weight: i64,
    /// 2·v(ω), asserted only when all weights are equal (the coordinate
    /// metric is equivariant exactly in that case).
    pub predicted_slope: Option<f64>,
    /// |slope − predicted| / max(1, |predicted|).
    pub predicted_mismatch: Option<f64>,
    pub path: ProbePath,
}

/// Probe square-integrability of the residue of a single-component form by
/// fitting the decay rate of shell masses at radii r0·2^(-k).
///
/// A positive slope means the masses shrink towards the singular point and
/// the square norm is locally finite (the canonical case, weight > 0);
/// a negative slope means divergence; slopes within the borderline band
/// correspond to the obstructed weight-0 case, which diverges
/// logarithmically. In two variables the masses come from deterministic
/// orbit quadrature and `count` is ignored; otherwise from Monte Carlo
/// sampling with `count` points per shell.
pub fn l2_probe<C: Scalar>(
    omega: &MeroTopForm<C>,
    ws: &WeightSystem,
    r0: f64,
    levels: usize,
    count: usize,
    seed: u64,
) -> Result<ProbeResult, NumericError> {
    assert!(levels >= 2, "need at least two shells to fit a slope");
    assert!(r0 > 0.0, "initial radius must be positive");
    let components = decompose_form(omega, ws)?;
    let component = match components.len() {
        0 => return Err(NumericError::DegenerateMass),
        1 => &components[0],
        n => return Err(NumericError::MultiComponent { count: n }),
    };
    let g = component.form().numerator().approx();
    let s = omega.surface().approx();
    let radii: Vec<f64> = (0..levels).map(|k| r0 * 0.5f64.powi(k as i32)).collect();
    let (masses, std_errs, path) = if s.nvars() == 2 {
        let masses = plane_curve::shell_masses(&g, &s, ws, &radii)?;
        (masses, None, ProbePath::PlaneCurveQuadrature)
    } else {
        let partials: Vec<_> = (0..s.nvars()).map(|i| s.partial(i)).collect();
        // Per-point weighted-radius power making the estimator equivariant
        // under the weighted scaling action for arbitrary weights.
        let correction = 2.0 * (ws.total() as f64);
        let mut masses = Vec::with_capacity(levels);
        let mut errs = Vec::with_capacity(levels);
        for (k, &r) in radii.iter().enumerate() {
            let level_seed = splitmix64(seed ^ (k as u64).wrapping_mul(0xA076_1D64_78BD_642F));
            let points = sample_shell(&s, ws, r, count, level_seed)?;
            let contributions: Vec<f64> = points
                .iter()
                .map(|p| {
                    let z = &p.coordinates;
                    let (mut k_best, mut best) = (0usize, 0.0f64);
                    for (i, q) in partials.iter().enumerate() {
                        let n = q.evaluate(z).norm_sqr();
                        if n > best {
                            best = n;
                            k_best = i;
                        }
                    }
                    let rho = weighted_radius(z, ws);
                    let power = correction - 2.0 * ws.weights()[k_best] as f64;
                    g.evaluate(z).norm_sqr() / best * rho.powf(power)
                })
                .collect();
            let (mean, err) = mean_and_err(&contributions);
            masses.push(mean);
            errs.push(err);
        }
        (masses, Some(errs), ProbePath::MonteCarlo)
    };
    if masses.iter().any(|m| !m.is_finite() || *m <= 0.0) {
        return Err(NumericError::DegenerateMass);
    }
    let xs: Vec<f64> = radii.iter().map(|r| r.ln()).collect();
    let ys: Vec<f64> = masses.iter().map(|m| m.ln()).collect();
    let xm = xs.iter().sum::<f64>() / xs.len() as f64;
    let ym = ys.iter().sum::<f64>() / ys.len() as f64;
    let slope = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - xm) * (y - ym))
        .sum::<f64>()
        / xs.iter().map(|x| (x - xm).powi(2)).sum::<f64>();
    let verdict = if slope > tol::SLOPE_BORDERLINE {
        ProbeVerdict::Convergent
    } else if slope < -tol::SLOPE_BORDERLINE {
        ProbeVerdict::Divergent
    } else {
        ProbeVerdict::Borderline
    };
    let weight = component.weight();
    let equal_weights = ws.weights().iter().all(|&a| a == ws.weights()[0]);
    let predicted_slope = equal_weights.then_some(2.0 * weight as f64);
    let predicted_mismatch =
        predicted_slope.map(|p| (slope - p).abs() / p.abs().max(1.0));
    Ok(ProbeResult {
        radii,
        masses,
        std_errs,
        slope,
        verdict,
        component_weight: weight,
        predicted_slope,
        predicted_mismatch,
        path,
    })
}

/// Outcome of the isolatedness search.
#[derive(Clone, Debug)]
pub enum IsolationVerdict {
    /// No critical point of s was found away from the origin.
    Plausible { trials: usize },
    /// A critical point away from the origin, contradicting isolatedness.
    Counterexample { point: Vec<Complex64> },
}

/// Solve A·x = b by Gaussian elimination with partial pivoting. Columns
/// whose pivot is numerically zero get x-component 0, so rank-deficient
/// systems still produce a usable Newton direction on the solvable part.
fn solve_c64(mut a: Vec<Vec<Complex64>>, mut b: Vec<Complex64>) -> Vec<Complex64> {
    let n = b.len();
    let scale = a
        .iter()
        .flatten()
        .map(|v| v.norm())
        .fold(0.0, f64::max)
        .max(1.0);
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; n];
    let mut used = vec![false; n];
    for col in 0..n {
        let mut best: Option<(usize, f64)> = None;
        for (row, flag) in used.iter().enumerate() {
            if !flag {
                let mag = a[row][col].norm();
                if best.is_none_or(|(_, b)| mag > b) {
                    best = Some((row, mag));
                }
            }
        }
        let (row, mag) = best.expect("at least one unused row per column");
        if mag <= 1e-13 * scale {
            continue;
        }
        used[row] = true;
        pivot_of_col[col] = Some(row);
        let lead = a[row].clone();
        for (other, other_row) in a.iter_mut().enumerate() {
            if other != row && other_row[col].norm() > 0.0 {
                let factor = other_row[col] / lead[col];
                for (entry, pivot) in other_row.iter_mut().zip(&lead) {
                    *entry -= factor * *pivot;
                }
                let sub = factor * b[row];
                b[other] -= sub;
            }
        }
    }
    (0..n)
        .map(|col| match pivot_of_col[col] {
            Some(row) => b[row] / a[row][col],
            None => Complex64::new(0.0, 0.0),
        })
        .collect()
}

/// Search for critical points of s away from the origin inside a polydisk,
/// by damped Newton iteration on the gradient system from random starts.
///
/// Finding one is a counterexample to isolatedness of the singular point;
/// finding none is merely "plausible". Deterministic for a fixed seed.
pub fn isolatedness_probe(
    s: &Polynomial<Complex64>,
    box_radius: f64,
    trials: usize,
    seed: u64,
) -> IsolationVerdict {
    let n = s.nvars();
    let partials: Vec<_> = (0..n).map(|i| s.partial(i)).collect();
    let hessian: Vec<Vec<_>> = partials
        .iter()
        .map(|p| (0..n).map(|j| p.partial(j)).collect())
        .collect();
    let f_norm = |z: &[Complex64]| -> f64 {
        partials.iter().map(|p| p.evaluate(z).norm_sqr()).sum::<f64>().sqrt()
    };
    let f_scale = |z: &[Complex64]| -> f64 {
        1.0 + partials.iter().map(|p| p.term_abs_sum(z)).sum::<f64>()
    };
    for trial in 0..trials {
        let key = splitmix64(seed ^ (trial as u64).wrapping_mul(0xD6E8_FEB8_6659_FD93));
        let mut rng = ChaCha8Rng::seed_from_u64(key);
        let mut z: Vec<Complex64> = (0..n)
            .map(|_| {
                Complex64::new(
                    box_radius * (2.0 * rng.gen::<f64>() - 1.0),
                    box_radius * (2.0 * rng.gen::<f64>() - 1.0),
                )
            })
            .collect();
        let mut converged = false;
        for _ in 0..40 {
            let current = f_norm(&z);
            if current <= tol::CRITICAL_POINT_REL * f_scale(&z) {
                converged = true;
                break;
            }
            let jac: Vec<Vec<Complex64>> = hessian
                .iter()
                .map(|row| row.iter().map(|h| h.evaluate(&z)).collect())
                .collect();
            let rhs: Vec<Complex64> = partials.iter().map(|p| p.evaluate(&z)).collect();
            let delta = solve_c64(jac, rhs);
            // Damped update: halve the step until the residual improves.
            let mut lambda = 1.0;
            let mut improved = false;
            for _ in 0..8 {
                let candidate: Vec<Complex64> = z
                    .iter()
                    .zip(&delta)
                    .map(|(zi, di)| zi - lambda * di)
                    .collect();
                if f_norm(&candidate) < current {
                    z = candidate;
                    improved = true;
                    break;
                }
                lambda *= 0.5;
            }
            if !improved {
                break;
            }
        }
        if converged {
            let distance = z.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
            if distance >= tol::ISOLATION_MIN_DISTANCE * box_radius {
                return IsolationVerdict::Counterexample { point: z };
            }
        }
    }
    IsolationVerdict::Plausible { trials }
}
