//! Sparse multivariate polynomials over a [`Scalar`] coefficient field.
//!
//! Variables are the fixed ambient coordinates `z0..z{n}`; every polynomial
//! carries its variable count and all binary operations require operands in
//! the same ambient space. Terms live in a `BTreeMap` keyed by exponent
//! vector under the graded lexicographic order, so the representation is
//! canonical (no zero coefficients, deterministic iteration) and structural
//! equality is value equality.
//!
//! Exponents are machine integers; products and powers check for exponent
//! overflow and panic loudly rather than wrap.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::scalar::Scalar;

/// Exponent vector of one monomial; index `i` is the power of `z_i`.
///
/// Ordered by total degree, ties broken lexicographically with `z0` most
/// significant, so `BTreeMap` iteration ascends in graded lex order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn unit(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn from_exponents(e: Vec<u32>) -> Self {
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    /// Product with overflow check per variable.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| {
                    a.checked_add(b)
                        .expect("monomial exponent overflow in product")
                })
                .collect(),
        )
    }

    /// Componentwise minimum (gcd of monomials).
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| a.min(b))
                .collect(),
        )
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(&a, &b)| a <= b)
    }

    /// Quotient, assuming `self.divides(other)` was checked.
    pub fn quotient_into(&self, other: &Monomial) -> Monomial {
        Monomial(
            other
                .0
                .iter()
                .zip(&self.0)
                .map(|(&b, &a)| b.checked_sub(a).expect("monomial quotient underflow"))
                .collect(),
        )
    }

    /// Weighted degree under integer variable weights.
    pub fn weight(&self, weights: &[i64]) -> i64 {
        debug_assert_eq!(self.0.len(), weights.len());
        self.0
            .iter()
            .zip(weights)
            .map(|(&e, &a)| e as i64 * a)
            .sum()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial in `z0..z{nvars-1}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polynomial<C: Scalar> {
    nvars: usize,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Scalar> Polynomial<C> {
    // ----- constructors -----

    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, C::one())
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::unit(nvars), c);
        }
        p
    }

    /// The coordinate `z_i`.
    pub fn variable(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {} out of range (nvars {})", i, nvars);
        let mut e = vec![0u32; nvars];
        e[i] = 1;
        Self::monomial(nvars, e, C::one())
    }

    pub fn monomial(nvars: usize, exponents: Vec<u32>, c: C) -> Self {
        assert_eq!(exponents.len(), nvars, "exponent vector length mismatch");
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::from_exponents(exponents), c);
        }
        p
    }

    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, C)>,
    {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length mismatch");
            p.add_term(Monomial::from_exponents(e), c);
        }
        p
    }

    // ----- accessors -----

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_unit())
    }

    /// The value of a constant polynomial; `None` when any variable appears.
    pub fn constant_value(&self) -> Option<C> {
        if self.terms.is_empty() {
            Some(C::zero())
        } else if self.is_constant() {
            Some(self.terms.values().next().unwrap().clone())
        } else {
            None
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    /// Leading term in graded lex order.
    pub fn leading(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Option<&C> {
        self.leading().map(|(_, c)| c)
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&C> {
        self.terms.get(m)
    }

    /// True when exactly one monomial appears.
    pub fn is_single_term(&self) -> bool {
        self.terms.len() == 1
    }

    fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    fn assert_same_space(&self, other: &Self) {
        assert_eq!(
            self.nvars, other.nvars,
            "polynomial operands live in different ambient spaces ({} vs {} variables)",
            self.nvars, other.nvars
        );
    }

    // ----- ring operations -----

    pub fn add(&self, other: &Self) -> Self {
        self.assert_same_space(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.assert_same_space(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.assert_same_space(other);
        let mut out = Self::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = v.clone() * c.clone();
        }
        out.terms.retain(|_, v| !v.is_zero());
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    // ----- calculus and substitution -----

    /// Partial derivative with respect to `z_i`.
    pub fn partial(&self, i: usize) -> Self {
        assert!(i < self.nvars, "variable index out of range");
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exponents()[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.exponents().to_vec();
            exps[i] = e - 1;
            out.add_term(
                Monomial::from_exponents(exps),
                c.clone() * C::from_int(e as i64),
            );
        }
        out
    }

    /// Gradient as the vector of partials.
    pub fn gradient(&self) -> Vec<Self> {
        (0..self.nvars).map(|i| self.partial(i)).collect()
    }

    /// Substitute `z_i := value`, keeping the ambient variable count.
    pub fn substitute(&self, i: usize, value: &C) -> Self {
        assert!(i < self.nvars, "variable index out of range");
        let max_e = self
            .terms
            .keys()
            .map(|m| m.exponents()[i])
            .max()
            .unwrap_or(0);
        let mut powers = Vec::with_capacity(max_e as usize + 1);
        powers.push(C::one());
        for k in 1..=max_e as usize {
            powers.push(powers[k - 1].clone() * value.clone());
        }
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exponents()[i];
            let mut exps = m.exponents().to_vec();
            exps[i] = 0;
            out.add_term(
                Monomial::from_exponents(exps),
                c.clone() * powers[e as usize].clone(),
            );
        }
        out
    }

    /// Reinterpret in a larger ambient space (new variables unused).
    pub fn extend_vars(&self, nvars: usize) -> Self {
        assert!(nvars >= self.nvars, "cannot shrink the ambient space");
        let mut out = Self::zero(nvars);
        for (m, c) in &self.terms {
            let mut e = m.exponents().to_vec();
            e.resize(nvars, 0);
            out.terms.insert(Monomial::from_exponents(e), c.clone());
        }
        out
    }

    pub fn map_coeff<D: Scalar>(&self, f: impl Fn(&C) -> D) -> Polynomial<D> {
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            let d = f(c);
            if !d.is_zero() {
                out.terms.insert(m.clone(), d);
            }
        }
        out
    }

    /// Binary64 image of this polynomial.
    pub fn approx(&self) -> Polynomial<Complex64> {
        self.map_coeff(Scalar::to_c64)
    }

    // ----- evaluation -----

    /// Evaluate at a point of the coefficient field itself.
    ///
    /// Per-variable power tables are built once; the terms are summed in the
    /// canonical graded lex order, so evaluation is deterministic.
    pub fn evaluate(&self, point: &[C]) -> C {
        assert_eq!(point.len(), self.nvars, "evaluation point length mismatch");
        let mut max_e = vec![0u32; self.nvars];
        for m in self.terms.keys() {
            for (i, &e) in m.exponents().iter().enumerate() {
                max_e[i] = max_e[i].max(e);
            }
        }
        let powers: Vec<Vec<C>> = (0..self.nvars)
            .map(|i| {
                let mut row = Vec::with_capacity(max_e[i] as usize + 1);
                row.push(C::one());
                for k in 1..=max_e[i] as usize {
                    let next = row[k - 1].clone() * point[i].clone();
                    row.push(next);
                }
                row
            })
            .collect();
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    term = term * powers[i][e as usize].clone();
                }
            }
            acc = acc + term;
        }
        acc
    }

    // ----- monomial content -----

    /// Greatest monomial dividing every term (the unit for the zero
    /// polynomial).
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        match it.next() {
            None => Monomial::unit(self.nvars),
            Some(first) => it.fold(first.clone(), |acc, m| acc.gcd(m)),
        }
    }

    /// Exact division by a monomial that divides every term.
    pub fn divide_by_monomial(&self, m: &Monomial) -> Self {
        let mut out = Self::zero(self.nvars);
        for (q, c) in &self.terms {
            assert!(m.divides(q), "monomial does not divide every term");
            out.terms.insert(m.quotient_into(q), c.clone());
        }
        out
    }

    /// `Some(lambda)` when `self == lambda * other` for a nonzero scalar.
    pub fn scalar_ratio_to(&self, other: &Self) -> Option<C> {
        if self.is_zero() || other.is_zero() || self.terms.len() != other.terms.len() {
            return None;
        }
        let mut ratio: Option<C> = None;
        for ((ma, ca), (mb, cb)) in self.terms.iter().zip(other.terms.iter()) {
            if ma != mb {
                return None;
            }
            let r = ca.clone() / cb.clone();
            match &ratio {
                None => ratio = Some(r),
                Some(prev) => {
                    if *prev != r {
                        return None;
                    }
                }
            }
        }
        ratio
    }
}

impl Polynomial<Complex64> {
    /// Sum of absolute term values at a point: the natural magnitude scale
    /// for residual tests such as the on-hypersurface tolerance.
    pub fn term_abs_sum(&self, point: &[Complex64]) -> f64 {
        assert_eq!(point.len(), self.nvars);
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let mut mag = c.norm();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    mag *= point[i].norm().powi(e as i32);
                }
            }
            acc += mag;
        }
        acc
    }
}

// Operator sugar on references; the methods above are the primitives.

impl<C: Scalar> std::ops::Add for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn add(self, rhs: Self) -> Polynomial<C> {
        Polynomial::add(self, rhs)
    }
}

impl<C: Scalar> std::ops::Sub for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn sub(self, rhs: Self) -> Polynomial<C> {
        Polynomial::sub(self, rhs)
    }
}

impl<C: Scalar> std::ops::Mul for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn mul(self, rhs: Self) -> Polynomial<C> {
        Polynomial::mul(self, rhs)
    }
}

impl<C: Scalar> std::ops::Neg for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn neg(self) -> Polynomial<C> {
        Polynomial::neg(self)
    }
}

impl<C: Scalar> fmt::Display for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::formlang::render::fmt_polynomial(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational;
    use num_traits::Zero;

    type P = Polynomial<GaussianRational>;

    fn var(i: usize) -> P {
        P::variable(3, i)
    }

    fn int(n: i64) -> GaussianRational {
        GaussianRational::from_integer(n)
    }

    #[test]
    fn binomial_square() {
        let z0 = P::variable(2, 0);
        let z1 = P::variable(2, 1);
        let sum = &z0 + &z1;
        let sq = sum.pow(2);
        let expected = P::from_terms(
            2,
            vec![
                (vec![2, 0], int(1)),
                (vec![1, 1], int(2)),
                (vec![0, 2], int(1)),
            ],
        );
        assert_eq!(sq, expected);
    }

    #[test]
    fn cancellation_annihilates() {
        let z0 = P::variable(2, 0);
        let z1 = P::variable(2, 1);
        let p = &z0 - &z1;
        let q = &z1 - &z0;
        assert!((&p + &q).is_zero());
    }

    #[test]
    fn difference_of_squares() {
        let z0 = P::variable(2, 0);
        let z1 = P::variable(2, 1);
        let lhs = (&z0 - &z1).mul(&(&z0 + &z1));
        let rhs = &z0.pow(2) - &z1.pow(2);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn partial_of_cubic_surface() {
        // s = z1^3 + p z0^2 z1 + q z0^3 - z0 z2^2 with p = q = 1:
        // d/dz2 s = -2 z0 z2.
        let s = P::from_terms(
            3,
            vec![
                (vec![0, 3, 0], int(1)),
                (vec![2, 1, 0], int(1)),
                (vec![3, 0, 0], int(1)),
                (vec![1, 0, 2], int(-1)),
            ],
        );
        let ds2 = s.partial(2);
        let expected = P::monomial(3, vec![1, 0, 1], int(-2));
        assert_eq!(ds2, expected);
    }

    #[test]
    fn partial_of_constant_is_zero() {
        let c = P::constant(3, int(7));
        assert!(c.partial(0).is_zero());
    }

    #[test]
    fn cusp_gradient() {
        // s = z0^2 - z1^3: grad = (2 z0, -3 z1^2).
        let s = Polynomial::<GaussianRational>::from_terms(
            2,
            vec![(vec![2, 0], int(1)), (vec![0, 3], int(-1))],
        );
        let g = s.gradient();
        assert_eq!(g[0], P::monomial(2, vec![1, 0], int(2)).extend_vars(2));
        assert_eq!(g[1], Polynomial::monomial(2, vec![0, 2], int(-3)));
    }

    #[test]
    fn graded_lex_leading_term() {
        let p = P::from_terms(
            3,
            vec![
                (vec![1, 1, 0], int(1)),
                (vec![2, 0, 0], int(1)),
                (vec![0, 0, 1], int(1)),
            ],
        );
        let (m, _) = p.leading().unwrap();
        assert_eq!(m.exponents(), &[2, 0, 0]);
    }

    #[test]
    fn evaluate_exact_on_cusp() {
        let s = Polynomial::<GaussianRational>::from_terms(
            2,
            vec![(vec![2, 0], int(1)), (vec![0, 3], int(-1))],
        );
        let v = s.evaluate(&[int(1), int(1)]);
        assert!(v.is_zero());
    }

    #[test]
    fn monomial_content_and_division() {
        let p = P::from_terms(
            3,
            vec![(vec![2, 1, 0], int(2)), (vec![1, 2, 0], int(-4))],
        );
        let c = p.monomial_content();
        assert_eq!(c.exponents(), &[1, 1, 0]);
        let q = p.divide_by_monomial(&c);
        assert_eq!(
            q,
            P::from_terms(3, vec![(vec![1, 0, 0], int(2)), (vec![0, 1, 0], int(-4))])
        );
    }

    #[test]
    fn scalar_ratio_detection() {
        let p = (&var(0) + &var(1)).scale(&int(3));
        let q = &var(0) + &var(1);
        assert_eq!(p.scalar_ratio_to(&q), Some(int(3)));
        assert_eq!(q.scalar_ratio_to(&p), Some(GaussianRational::from_ratio(1, 3)));
        assert_eq!(var(0).scalar_ratio_to(&var(1)), None);
    }

    #[test]
    #[should_panic(expected = "different ambient spaces")]
    fn mixed_ambient_spaces_panic() {
        let a = P::variable(3, 0);
        let b = Polynomial::<GaussianRational>::variable(2, 0);
        let _ = &a + &b;
    }

    #[test]
    fn substitute_merges_terms() {
        // z0^2 z1 + z1 at z0 := 1 collapses to 2 z1.
        let p = P::from_terms(3, vec![(vec![2, 1, 0], int(1)), (vec![0, 1, 0], int(1))]);
        let q = p.substitute(0, &int(1));
        assert_eq!(q, P::monomial(3, vec![0, 1, 0], int(2)));
    }
}
