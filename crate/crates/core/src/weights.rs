//! Quasihomogeneous weight systems: validation against a defining
//! polynomial, weighted degrees, weight decomposition, and exact inference
//! of weights from a polynomial's support.
//!
//! A weight system assigns positive integer weights `a_0..a_n` to the
//! coordinates and records the weighted degree `d` of the polynomial it was
//! validated against. Weights are stored coprime; constructors normalize.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::poly::{Monomial, Polynomial};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WeightError {
    #[error("weights must be positive integers, got {0}")]
    NonPositiveWeight(i64),
    #[error("weighted degree must be positive, got {0}")]
    NonPositiveDegree(i64),
    #[error("degree {degree} is not a multiple of the weight gcd {gcd}")]
    DegreeNotDivisible { degree: i64, gcd: i64 },
    #[error("got {got} weights for {expected} variables")]
    ArityMismatch { got: usize, expected: usize },
    #[error("polynomial is not quasihomogeneous: monomial weights {0:?} occur")]
    NotQuasihomogeneous(Vec<i64>),
    #[error("the zero polynomial has no defined weight")]
    ZeroPolynomial,
}

/// Positive integer weights for the coordinates together with the weighted
/// degree of the hypersurface equation they were validated against.
///
/// Invariants: every weight positive, `gcd(a_0,..,a_n) = 1`, degree positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSystem {
    weights: Vec<i64>,
    degree: i64,
}

impl WeightSystem {
    /// Builds a system from raw weights and degree, dividing out the common
    /// factor of the weights (the degree must share it).
    pub fn new(weights: Vec<i64>, degree: i64) -> Result<Self, WeightError> {
        if weights.is_empty() {
            return Err(WeightError::ArityMismatch {
                got: 0,
                expected: 1,
            });
        }
        for &a in &weights {
            if a <= 0 {
                return Err(WeightError::NonPositiveWeight(a));
            }
        }
        if degree <= 0 {
            return Err(WeightError::NonPositiveDegree(degree));
        }
        let g = weights.iter().fold(0i64, |acc, &a| acc.gcd(&a));
        if degree % g != 0 {
            return Err(WeightError::DegreeNotDivisible { degree, gcd: g });
        }
        Ok(WeightSystem {
            weights: weights.into_iter().map(|a| a / g).collect(),
            degree: degree / g,
        })
    }

    /// Validates the given weights against a defining polynomial `s` and
    /// takes the weighted degree from it.
    pub fn for_polynomial<C: Scalar>(
        s: &Polynomial<C>,
        weights: &[i64],
    ) -> Result<Self, WeightError> {
        if weights.len() != s.nvars() {
            return Err(WeightError::ArityMismatch {
                got: weights.len(),
                expected: s.nvars(),
            });
        }
        for &a in weights {
            if a <= 0 {
                return Err(WeightError::NonPositiveWeight(a));
            }
        }
        match s.homogeneity(weights) {
            None => Err(WeightError::ZeroPolynomial),
            Some(Homogeneity::Mixed(ws)) => Err(WeightError::NotQuasihomogeneous(ws)),
            Some(Homogeneity::Homogeneous(d)) => Self::new(weights.to_vec(), d),
        }
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn nvars(&self) -> usize {
        self.weights.len()
    }

    /// Sum of the coordinate weights.
    pub fn total(&self) -> i64 {
        self.weights.iter().sum()
    }

    /// Weighted degree of one monomial, `Σ a_i·m_i`.
    pub fn monomial_weight(&self, exponents: &[u32]) -> i64 {
        assert_eq!(
            exponents.len(),
            self.weights.len(),
            "exponent vector length does not match the weight count"
        );
        exponents
            .iter()
            .zip(&self.weights)
            .map(|(&e, &a)| e as i64 * a)
            .sum()
    }

    /// The common weight of all monomials of `p`, or the mismatch report.
    pub fn weight_of<C: Scalar>(&self, p: &Polynomial<C>) -> Result<i64, WeightError> {
        match p.homogeneity(&self.weights) {
            None => Err(WeightError::ZeroPolynomial),
            Some(Homogeneity::Homogeneous(w)) => Ok(w),
            Some(Homogeneity::Mixed(ws)) => Err(WeightError::NotQuasihomogeneous(ws)),
        }
    }
}

/// Outcome of testing a polynomial against coordinate weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Homogeneity {
    /// All monomials share this weighted degree.
    Homogeneous(i64),
    /// The distinct weighted degrees that occur, ascending.
    Mixed(Vec<i64>),
}

impl<C: Scalar> Polynomial<C> {
    /// Classifies this polynomial under the given coordinate weights;
    /// `None` for the zero polynomial.
    pub fn homogeneity(&self, weights: &[i64]) -> Option<Homogeneity> {
        assert_eq!(weights.len(), self.nvars(), "weight count mismatch");
        let mut seen = BTreeSet::new();
        for (m, _) in self.terms() {
            seen.insert(m.weight(weights));
        }
        match seen.len() {
            0 => None,
            1 => Some(Homogeneity::Homogeneous(seen.into_iter().next().unwrap())),
            _ => Some(Homogeneity::Mixed(seen.into_iter().collect())),
        }
    }

    /// Largest weighted degree over the support; `None` for zero.
    pub fn weighted_degree(&self, weights: &[i64]) -> Option<i64> {
        self.terms().map(|(m, _)| m.weight(weights)).max()
    }

    /// Splits into quasihomogeneous components, weights strictly ascending.
    /// The components sum back to the input; zero yields an empty list.
    pub fn weight_decompose(&self, weights: &[i64]) -> Vec<(i64, Polynomial<C>)> {
        assert_eq!(weights.len(), self.nvars(), "weight count mismatch");
        let mut buckets: BTreeMap<i64, Vec<(Vec<u32>, C)>> = BTreeMap::new();
        for (m, c) in self.terms() {
            buckets
                .entry(m.weight(weights))
                .or_default()
                .push((m.exponents().to_vec(), c.clone()));
        }
        buckets
            .into_iter()
            .map(|(w, terms)| (w, Polynomial::from_terms(self.nvars(), terms)))
            .collect()
    }
}

/// Solves for positive coordinate weights making `p` quasihomogeneous.
///
/// The support differences give an exact linear system over the rationals;
/// its solution cone is intersected with the positive orthant. When the
/// solution ray is unique the result is the minimal coprime integer vector
/// on it. Returns `None` when no positive solution exists (including the
/// zero and constant polynomials, whose degree could not be positive).
pub fn infer_weights<C: Scalar>(p: &Polynomial<C>) -> Option<WeightSystem> {
    if p.is_zero() || p.nvars() == 0 {
        return None;
    }
    let n = p.nvars();
    let support: Vec<&Monomial> = p.terms().map(|(m, _)| m).collect();
    let m0 = support[0];
    let rows: Vec<Vec<BigRational>> = support[1..]
        .iter()
        .map(|m| {
            (0..n)
                .map(|i| {
                    let diff = m.exponents()[i] as i64 - m0.exponents()[i] as i64;
                    BigRational::from_integer(BigInt::from(diff))
                })
                .collect()
        })
        .collect();

    let (rref, pivots) = reduced_row_echelon(rows, n);
    let pivot_cols: BTreeSet<usize> = pivots.iter().copied().collect();
    let free_cols: Vec<usize> = (0..n).filter(|c| !pivot_cols.contains(c)).collect();
    if free_cols.is_empty() {
        // Only the zero vector solves the system.
        return None;
    }

    // Nullspace basis: one vector per free column, identity on the free
    // coordinates.
    let basis: Vec<Vec<BigRational>> = free_cols
        .iter()
        .map(|&f| {
            let mut w = vec![BigRational::zero(); n];
            w[f] = BigRational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                w[pc] = -rref[r][f].clone();
            }
            w
        })
        .collect();

    // The uniform combination of basis vectors is positive in the common
    // cases; otherwise search the cone properly.
    let uniform: Vec<BigRational> = (0..n)
        .map(|i| basis.iter().fold(BigRational::zero(), |acc, b| acc + &b[i]))
        .collect();
    let solution = if uniform.iter().all(|x| x.is_positive()) {
        uniform
    } else {
        let coeffs = positive_combination(&basis, n)?;
        (0..n)
            .map(|i| {
                basis
                    .iter()
                    .zip(&coeffs)
                    .fold(BigRational::zero(), |acc, (b, c)| acc + &b[i] * c)
            })
            .collect()
    };

    // Clear denominators and divide out the content.
    let mut denom_lcm = BigInt::one();
    for x in &solution {
        denom_lcm = denom_lcm.lcm(x.denom());
    }
    let scaled: Vec<BigInt> = solution
        .iter()
        .map(|x| (x * BigRational::from_integer(denom_lcm.clone())).to_integer())
        .collect();
    let content = scaled
        .iter()
        .fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let weights: Vec<i64> = scaled
        .iter()
        .map(|x| (x / &content).to_i64())
        .collect::<Option<_>>()?;

    let degree = m0.weight(&weights);
    if degree <= 0 {
        return None;
    }
    WeightSystem::new(weights, degree).ok()
}

/// In-place Gauss–Jordan over the rationals; returns the reduced matrix and
/// its pivot columns.
fn reduced_row_echelon(
    mut mat: Vec<Vec<BigRational>>,
    ncols: usize,
) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let nrows = mat.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(pivot_row) = (r..nrows).find(|&i| !mat[i][col].is_zero()) else {
            continue;
        };
        mat.swap(r, pivot_row);
        let inv = mat[r][col].clone();
        for entry in &mut mat[r][col..ncols] {
            *entry = &*entry / &inv;
        }
        let lead = mat[r].clone();
        for (i, row) in mat.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let f = row[col].clone();
                for (entry, pivot) in row[col..ncols].iter_mut().zip(&lead[col..ncols]) {
                    let delta = &f * pivot;
                    *entry = &*entry - delta;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    (mat, pivots)
}

/// Finds coefficients `c` with `Σ c_k·basis[k]` strictly positive in every
/// coordinate, by Fourier–Motzkin elimination on the strict system. Exact
/// over the rationals; `None` means the positive cone is empty.
fn positive_combination(
    basis: &[Vec<BigRational>],
    n: usize,
) -> Option<Vec<BigRational>> {
    let k = basis.len();
    // One strict inequality per coordinate: row · c > 0.
    let initial: Vec<Vec<BigRational>> = (0..n)
        .map(|i| basis.iter().map(|b| b[i].clone()).collect())
        .collect();
    if initial.iter().any(|row| row.iter().all(|x| x.is_zero())) {
        // Some coordinate vanishes on the whole nullspace.
        return None;
    }

    // stages[j] constrains c_0..c_j; stages[k-1] is the input system.
    let mut stages: Vec<Vec<Vec<BigRational>>> = vec![Vec::new(); k];
    stages[k - 1] = initial;
    for j in (1..k).rev() {
        let mut next: Vec<Vec<BigRational>> = Vec::new();
        let rows = stages[j].clone();
        let mut lower: Vec<&Vec<BigRational>> = Vec::new();
        let mut upper: Vec<&Vec<BigRational>> = Vec::new();
        for row in &rows {
            if row[j].is_positive() {
                lower.push(row);
            } else if row[j].is_negative() {
                upper.push(row);
            } else {
                next.push(row[..j].to_vec());
            }
        }
        for lo in &lower {
            for hi in &upper {
                // Strict separation of the bound pair: a new strict row.
                let derived: Vec<BigRational> = (0..j)
                    .map(|t| &lo[j] * &hi[t] - &hi[j] * &lo[t])
                    .collect();
                if derived.iter().all(|x| x.is_zero()) {
                    return None;
                }
                next.push(derived);
            }
        }
        stages[j - 1] = next;
    }

    // Base stage: rows α·c_0 > 0 force a single sign for c_0.
    let mut c = vec![BigRational::zero(); k];
    let mut has_pos = false;
    let mut has_neg = false;
    for row in &stages[0] {
        if row[0].is_positive() {
            has_pos = true;
        } else if row[0].is_negative() {
            has_neg = true;
        } else {
            return None;
        }
    }
    if has_pos && has_neg {
        return None;
    }
    c[0] = if has_neg {
        -BigRational::one()
    } else {
        BigRational::one()
    };

    // Back-substitute: at each stage the surviving rows bound c_j from
    // below and above; elimination already guaranteed the gap is nonempty.
    for j in 1..k {
        let mut lo: Option<BigRational> = None;
        let mut hi: Option<BigRational> = None;
        for row in &stages[j] {
            if row[j].is_zero() {
                continue;
            }
            let rest: BigRational = (0..j)
                .map(|t| &row[t] * &c[t])
                .fold(BigRational::zero(), |a, x| a + x);
            let bound = -rest / &row[j];
            if row[j].is_positive() {
                lo = Some(match lo {
                    None => bound,
                    Some(prev) => prev.max(bound),
                });
            } else {
                hi = Some(match hi {
                    None => bound,
                    Some(prev) => prev.min(bound),
                });
            }
        }
        let two = BigRational::from_integer(BigInt::from(2));
        c[j] = match (lo, hi) {
            (Some(a), Some(b)) => (a + b) / two,
            (Some(a), None) => a + BigRational::one(),
            (None, Some(b)) => b - BigRational::one(),
            (None, None) => BigRational::one(),
        };
    }
    Some(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational;

    type P = Polynomial<GaussianRational>;

    fn int(n: i64) -> GaussianRational {
        GaussianRational::from_integer(n)
    }

    fn cusp() -> P {
        P::from_terms(2, vec![(vec![2, 0], int(1)), (vec![0, 3], int(-1))])
    }

    #[test]
    fn monomial_weights() {
        let w = WeightSystem::new(vec![3, 2], 6).unwrap();
        assert_eq!(w.monomial_weight(&[2, 0]), 6);
        assert_eq!(w.monomial_weight(&[0, 3]), 6);
        assert_eq!(w.monomial_weight(&[0, 0]), 0);
    }

    #[test]
    fn cusp_is_quasihomogeneous() {
        let w = WeightSystem::for_polynomial(&cusp(), &[3, 2]).unwrap();
        assert_eq!(w.degree(), 6);
        assert_eq!(w.weight_of(&cusp()), Ok(6));
    }

    #[test]
    fn cubic_under_unit_weights() {
        // z1^3 + p z0^2 z1 + q z0^3 - z0 z2^2 is an ordinary cubic.
        let s = P::from_terms(
            3,
            vec![
                (vec![0, 3, 0], int(1)),
                (vec![2, 1, 0], int(-1)),
                (vec![1, 0, 2], int(-1)),
            ],
        );
        let w = WeightSystem::for_polynomial(&s, &[1, 1, 1]).unwrap();
        assert_eq!(w.degree(), 3);
    }

    #[test]
    fn mixed_weights_are_reported() {
        let p = P::from_terms(
            2,
            vec![
                (vec![2, 0], int(1)),
                (vec![0, 3], int(1)),
                (vec![1, 1], int(1)),
            ],
        );
        assert_eq!(
            p.homogeneity(&[3, 2]),
            Some(Homogeneity::Mixed(vec![5, 6]))
        );
        assert_eq!(
            WeightSystem::for_polynomial(&p, &[3, 2]),
            Err(WeightError::NotQuasihomogeneous(vec![5, 6]))
        );
    }

    #[test]
    fn constructor_normalizes_common_factor() {
        let w = WeightSystem::new(vec![6, 4], 12).unwrap();
        assert_eq!(w.weights(), &[3, 2]);
        assert_eq!(w.degree(), 6);
    }

    #[test]
    fn constructor_rejects_bad_input() {
        assert!(matches!(
            WeightSystem::new(vec![3, 0], 6),
            Err(WeightError::NonPositiveWeight(0))
        ));
        assert!(matches!(
            WeightSystem::new(vec![2, 4], 7),
            Err(WeightError::DegreeNotDivisible { .. })
        ));
    }

    #[test]
    fn infer_cusp_weights() {
        let w = infer_weights(&cusp()).unwrap();
        assert_eq!(w.weights(), &[3, 2]);
        assert_eq!(w.degree(), 6);
    }

    #[test]
    fn infer_brieskorn_pham_weights() {
        // z0^2 + z1^3 + z2^6 has weights lcm/b_i = (3, 2, 1), degree 6.
        let p = P::from_terms(
            3,
            vec![
                (vec![2, 0, 0], int(1)),
                (vec![0, 3, 0], int(1)),
                (vec![0, 0, 6], int(1)),
            ],
        );
        let w = infer_weights(&p).unwrap();
        assert_eq!(w.weights(), &[3, 2, 1]);
        assert_eq!(w.degree(), 6);
    }

    #[test]
    fn infer_rejects_inconsistent_support() {
        // z0 + z0^2 would need a0 = 2 a0 with a0 > 0.
        let p = P::from_terms(1, vec![(vec![1], int(1)), (vec![2], int(1))]);
        assert_eq!(infer_weights(&p), None);
    }

    #[test]
    fn infer_rejects_constants() {
        let p = P::constant(2, int(5));
        assert_eq!(infer_weights(&p), None);
    }

    #[test]
    fn infer_underdetermined_support() {
        // z1 + z0 z2^2 leaves a two-parameter cone; the uniform combination
        // of the nullspace basis is not positive, so the cone search runs.
        let p = P::from_terms(3, vec![(vec![0, 1, 0], int(1)), (vec![1, 0, 2], int(1))]);
        let w = infer_weights(&p).unwrap();
        assert!(w.weights().iter().all(|&a| a > 0));
        assert_eq!(w.weight_of(&p), Ok(w.degree()));
    }

    #[test]
    fn infer_single_monomial() {
        let p = P::monomial(2, vec![2, 1], int(1));
        let w = infer_weights(&p).unwrap();
        assert_eq!(w.weights(), &[1, 1]);
        assert_eq!(w.degree(), 3);
    }

    #[test]
    fn decompose_by_weight() {
        let p = P::from_terms(2, vec![(vec![0, 1], int(1)), (vec![2, 0], int(1))]);
        let parts = p.weight_decompose(&[3, 2]);
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0], (2, P::monomial(2, vec![0, 1], int(1))));
        assert_eq!(parts[1], (6, P::monomial(2, vec![2, 0], int(1))));
        let sum = parts
            .iter()
            .fold(P::zero(2), |acc, (_, q)| acc.add(q));
        assert_eq!(sum, p);
    }

    #[test]
    fn decompose_quasihomogeneous_is_identity() {
        let parts = cusp().weight_decompose(&[3, 2]);
        assert_eq!(parts, vec![(6, cusp())]);
    }

    #[test]
    fn decompose_zero_is_empty() {
        assert!(P::zero(2).weight_decompose(&[3, 2]).is_empty());
    }

    #[test]
    fn euler_identity_for_quasihomogeneous_polynomials() {
        // Σ a_i z_i ∂_i p = w·p for quasihomogeneous p.
        let s = cusp();
        let w = WeightSystem::for_polynomial(&s, &[3, 2]).unwrap();
        let mut lhs = P::zero(2);
        for i in 0..2 {
            let zi = P::variable(2, i);
            lhs = lhs.add(
                &zi.mul(&s.partial(i))
                    .scale(&int(w.weights()[i])),
            );
        }
        assert_eq!(lhs, s.scale(&int(w.degree())));
    }
}
