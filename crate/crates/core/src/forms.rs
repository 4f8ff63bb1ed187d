//! Exterior algebra on coordinates `z0..z{n}` with rational-function
//! coefficients: wedge products, exterior derivative, interior products
//! against polynomial vector fields, and pointwise evaluation on frames.
//!
//! Rational functions are kept in a lightly reduced shape (monomial content
//! cancelled, constant denominators absorbed, exact scalar multiples of the
//! denominator collapsed); equality is decided by cross-multiplication, so
//! no multivariate gcd is needed anywhere.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::poly::Polynomial;
use crate::scalar::Scalar;
use crate::tol;
use crate::weights::WeightSystem;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FormError {
    #[error("denominator is the zero polynomial")]
    ZeroDenominator,
    #[error("division by an identically zero rational function")]
    DivisionByZero,
    #[error("wedge degree {got} exceeds the ambient dimension {nvars}")]
    DegreeOverflow { got: usize, nvars: usize },
    #[error("denominator magnitude {magnitude:.3e} at the point is below the pole threshold")]
    PoleProximity { magnitude: f64 },
    #[error("frame has {got} vectors for a degree-{expected} form")]
    FrameSizeMismatch { got: usize, expected: usize },
}

/// Quotient of two polynomials with nonzero denominator.
#[derive(Debug, Clone)]
pub struct RationalFunction<C: Scalar> {
    num: Polynomial<C>,
    den: Polynomial<C>,
}

impl<C: Scalar> RationalFunction<C> {
    pub fn new(num: Polynomial<C>, den: Polynomial<C>) -> Result<Self, FormError> {
        if den.is_zero() {
            return Err(FormError::ZeroDenominator);
        }
        Ok(Self::reduced(num, den))
    }

    pub fn from_poly(p: Polynomial<C>) -> Self {
        let nvars = p.nvars();
        Self {
            num: p,
            den: Polynomial::one(nvars),
        }
    }

    pub fn zero(nvars: usize) -> Self {
        Self::from_poly(Polynomial::zero(nvars))
    }

    pub fn one(nvars: usize) -> Self {
        Self::from_poly(Polynomial::one(nvars))
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        Self::from_poly(Polynomial::constant(nvars, c))
    }

    /// Caller guarantees `den` nonzero.
    fn reduced(num: Polynomial<C>, den: Polynomial<C>) -> Self {
        debug_assert!(!den.is_zero());
        let nvars = num.nvars();
        if num.is_zero() {
            return Self {
                num,
                den: Polynomial::one(nvars),
            };
        }
        // Shared monomial content.
        let content = num.monomial_content().gcd(&den.monomial_content());
        let (mut num, mut den) = if content.is_unit() {
            (num, den)
        } else {
            (num.divide_by_monomial(&content), den.divide_by_monomial(&content))
        };
        // Numerator an exact scalar multiple of the denominator.
        if let Some(ratio) = num.scalar_ratio_to(&den) {
            return Self {
                num: Polynomial::constant(nvars, ratio),
                den: Polynomial::one(nvars),
            };
        }
        // Constant denominators are absorbed into the numerator.
        if let Some(c) = den.constant_value() {
            return Self {
                num: num.scale(&(C::one() / c)),
                den: Polynomial::one(nvars),
            };
        }
        // Shared rational content, for exact scalars: 2/(2·z) becomes 1/z.
        if let Some(content) = C::content_of(
            num.terms().map(|(_, c)| c).chain(den.terms().map(|(_, c)| c)),
        ) {
            if !content.is_one() {
                let inv = C::one() / content;
                num = num.scale(&inv);
                den = den.scale(&inv);
            }
        }
        // Sign-normalize so the denominator's leading coefficient is
        // canonical; keeps printing and stored shapes deterministic.
        let unit = den
            .leading_coeff()
            .expect("nonzero denominator")
            .normalizing_unit();
        if !unit.is_one() {
            num = num.scale(&unit);
            den = den.scale(&unit);
        }
        Self { num, den }
    }

    pub fn num(&self) -> &Polynomial<C> {
        &self.num
    }

    pub fn den(&self) -> &Polynomial<C> {
        &self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True when the denominator is (reduced to) one.
    pub fn is_polynomial(&self) -> bool {
        self.den.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.den == other.den {
            return Self::reduced(self.num.add(&other.num), self.den.clone());
        }
        Self::reduced(
            &self.num.mul(&other.den) + &other.num.mul(&self.den),
            self.den.mul(&other.den),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        // Cancel factors that appear verbatim across the product first.
        let (n1, d2) = cancel_exact(&self.num, &other.den);
        let (n2, d1) = cancel_exact(&other.num, &self.den);
        Self::reduced(n1.mul(&n2), d1.mul(&d2))
    }

    pub fn mul_poly(&self, p: &Polynomial<C>) -> Self {
        let (p, den) = cancel_exact(p, &self.den);
        Self::reduced(self.num.mul(&p), den)
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::reduced(self.num.scale(c), self.den.clone())
    }

    pub fn pow(&self, k: u32) -> Self {
        Self::reduced(self.num.pow(k), self.den.pow(k))
    }

    pub fn div(&self, other: &Self) -> Result<Self, FormError> {
        if other.is_zero() {
            return Err(FormError::DivisionByZero);
        }
        Ok(self.mul(&Self {
            num: other.den.clone(),
            den: other.num.clone(),
        }))
    }

    /// Quotient-rule partial derivative with respect to `z_i`.
    pub fn partial(&self, i: usize) -> Self {
        let dnum = self.num.partial(i);
        if self.is_polynomial() {
            return Self::from_poly(dnum);
        }
        let dden = self.den.partial(i);
        Self::reduced(
            &dnum.mul(&self.den) - &self.num.mul(&dden),
            self.den.mul(&self.den),
        )
    }

    /// Exact evaluation inside the coefficient field; `None` on a zero
    /// denominator value.
    pub fn evaluate_exact(&self, point: &[C]) -> Option<C> {
        let d = self.den.evaluate(point);
        if d.is_zero() {
            return None;
        }
        Some(self.num.evaluate(point) / d)
    }

    /// Binary64 evaluation with an explicit pole-proximity guard.
    pub fn eval_c64(&self, point: &[Complex64]) -> Result<Complex64, FormError> {
        let d = self.den.approx().evaluate(point);
        if d.norm() < tol::POLE_PROXIMITY {
            return Err(FormError::PoleProximity { magnitude: d.norm() });
        }
        Ok(self.num.approx().evaluate(point) / d)
    }
}

/// `(p, q)` with an exact scalar multiple `p = λ·q` collapsed to `(λ, 1)`.
fn cancel_exact<C: Scalar>(
    p: &Polynomial<C>,
    q: &Polynomial<C>,
) -> (Polynomial<C>, Polynomial<C>) {
    let nvars = p.nvars();
    match p.scalar_ratio_to(q) {
        Some(ratio) => (Polynomial::constant(nvars, ratio), Polynomial::one(nvars)),
        None => (p.clone(), q.clone()),
    }
}

impl<C: Scalar> PartialEq for RationalFunction<C> {
    /// Cross-multiplication equality: `p/q = r/t` iff `p·t = r·q` exactly.
    fn eq(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl<C: Scalar> fmt::Display for RationalFunction<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::formlang::render::fmt_rational_function(self, f)
    }
}

/// Differential form of fixed degree with rational-function coefficients,
/// keyed by strictly increasing index tuples. No zero coefficients stored.
#[derive(Debug, Clone)]
pub struct DiffForm<C: Scalar> {
    nvars: usize,
    degree: usize,
    terms: BTreeMap<Vec<usize>, RationalFunction<C>>,
}

impl<C: Scalar> DiffForm<C> {
    pub fn zero(nvars: usize, degree: usize) -> Self {
        assert!(degree <= nvars, "form degree exceeds the ambient dimension");
        DiffForm {
            nvars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// A 0-form from a scalar coefficient.
    pub fn scalar(rf: RationalFunction<C>) -> Self {
        let mut form = Self::zero(rf.nvars(), 0);
        form.add_term(Vec::new(), rf);
        form
    }

    /// The coordinate differential `dz_i`.
    pub fn coordinate(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "coordinate index out of range");
        let mut form = Self::zero(nvars, 1);
        form.add_term(vec![i], RationalFunction::one(nvars));
        form
    }

    /// `dz_{i_1} ∧ … ∧ dz_{i_k}` for an arbitrary (possibly unsorted) tuple.
    pub fn basis(nvars: usize, indices: &[usize]) -> Self {
        let mut form = Self::zero(nvars, indices.len());
        form.add_signed_term(indices, RationalFunction::one(nvars));
        form
    }

    /// The top form `dz_0 ∧ … ∧ dz_n` scaled by a coefficient.
    pub fn top(nvars: usize, coeff: RationalFunction<C>) -> Self {
        let mut form = Self::zero(nvars, nvars);
        form.add_term((0..nvars).collect(), coeff);
        form
    }

    pub fn from_terms<I>(nvars: usize, degree: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<usize>, RationalFunction<C>)>,
    {
        let mut form = Self::zero(nvars, degree);
        for (tuple, rf) in terms {
            assert_eq!(tuple.len(), degree, "tuple length does not match degree");
            form.add_signed_term(&tuple, rf);
        }
        form
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &RationalFunction<C>)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, tuple: &[usize]) -> Option<&RationalFunction<C>> {
        self.terms.get(tuple)
    }

    /// Adds a coefficient at an already sorted duplicate-free tuple.
    fn add_term(&mut self, tuple: Vec<usize>, rf: RationalFunction<C>) {
        debug_assert!(tuple.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(tuple.iter().all(|&i| i < self.nvars));
        if rf.is_zero() {
            return;
        }
        match self.terms.entry(tuple) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(rf);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&rf);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// Adds a coefficient at an arbitrary tuple, sorting it and picking up
    /// the permutation sign; a repeated index contributes nothing.
    fn add_signed_term(&mut self, tuple: &[usize], rf: RationalFunction<C>) {
        let mut sorted = tuple.to_vec();
        let mut sign = 1i32;
        // Insertion sort, counting swaps.
        for i in 1..sorted.len() {
            let mut j = i;
            while j > 0 && sorted[j - 1] > sorted[j] {
                sorted.swap(j - 1, j);
                sign = -sign;
                j -= 1;
            }
        }
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return;
        }
        let rf = if sign < 0 { rf.neg() } else { rf };
        self.add_term(sorted, rf);
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars, "ambient dimension mismatch");
        assert_eq!(
            self.degree, other.degree,
            "cannot add forms of degrees {} and {}",
            self.degree, other.degree
        );
        let mut out = self.clone();
        for (tuple, rf) in &other.terms {
            out.add_term(tuple.clone(), rf.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for rf in out.terms.values_mut() {
            *rf = rf.neg();
        }
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.nvars, self.degree);
        for (tuple, rf) in &self.terms {
            out.add_term(tuple.clone(), rf.scale(c));
        }
        out
    }

    pub fn scale_rf(&self, factor: &RationalFunction<C>) -> Self {
        let mut out = Self::zero(self.nvars, self.degree);
        if factor.is_zero() {
            return out;
        }
        for (tuple, rf) in &self.terms {
            out.add_term(tuple.clone(), rf.mul(factor));
        }
        out
    }

    pub fn scale_poly(&self, p: &Polynomial<C>) -> Self {
        let mut out = Self::zero(self.nvars, self.degree);
        if p.is_zero() {
            return out;
        }
        for (tuple, rf) in &self.terms {
            out.add_term(tuple.clone(), rf.mul_poly(p));
        }
        out
    }

    /// Wedge product in canonical tuple order.
    pub fn wedge(&self, other: &Self) -> Result<Self, FormError> {
        assert_eq!(self.nvars, other.nvars, "ambient dimension mismatch");
        let degree = self.degree + other.degree;
        if degree > self.nvars {
            return Err(FormError::DegreeOverflow {
                got: degree,
                nvars: self.nvars,
            });
        }
        let mut out = Self::zero(self.nvars, degree);
        for (ta, rfa) in &self.terms {
            for (tb, rfb) in &other.terms {
                if let Some((sign, merged)) = merge_tuples(ta, tb) {
                    let rf = rfa.mul(rfb);
                    out.add_term(merged, if sign < 0 { rf.neg() } else { rf });
                }
            }
        }
        Ok(out)
    }

    /// Exterior derivative, raising the degree by one.
    pub fn exterior_derivative(&self) -> Self {
        assert!(
            self.degree < self.nvars,
            "exterior derivative of a top-degree form leaves the algebra"
        );
        let mut out = Self::zero(self.nvars, self.degree + 1);
        for (tuple, rf) in &self.terms {
            for v in 0..self.nvars {
                match tuple.binary_search(&v) {
                    Ok(_) => continue,
                    Err(pos) => {
                        let drf = rf.partial(v);
                        if drf.is_zero() {
                            continue;
                        }
                        let mut extended = tuple.clone();
                        extended.insert(pos, v);
                        let signed = if pos % 2 == 1 { drf.neg() } else { drf };
                        out.add_term(extended, signed);
                    }
                }
            }
        }
        out
    }

    /// Interior product against a polynomial vector field: a graded
    /// antiderivation of degree −1. A 0-form contracts to zero.
    pub fn interior_product(&self, field: &PolyVectorField<C>) -> Self {
        assert_eq!(self.nvars, field.nvars(), "ambient dimension mismatch");
        if self.degree == 0 {
            return Self::zero(self.nvars, 0);
        }
        let mut out = Self::zero(self.nvars, self.degree - 1);
        for (tuple, rf) in &self.terms {
            for (slot, &idx) in tuple.iter().enumerate() {
                let component = field.component(idx);
                if component.is_zero() {
                    continue;
                }
                let mut reduced_tuple = tuple.clone();
                reduced_tuple.remove(slot);
                let contracted = rf.mul_poly(component);
                let signed = if slot % 2 == 1 {
                    contracted.neg()
                } else {
                    contracted
                };
                out.add_term(reduced_tuple, signed);
            }
        }
        out
    }

    /// Substitutes `z_i := value` in every coefficient and drops terms whose
    /// tuple contains `i` (the slice of the form along that hyperplane).
    /// Errors when a substituted denominator vanishes identically.
    pub fn restrict(&self, i: usize, value: &C) -> Result<Self, FormError> {
        let mut out = Self::zero(self.nvars, self.degree);
        for (tuple, rf) in &self.terms {
            if tuple.contains(&i) {
                continue;
            }
            let den = rf.den().substitute(i, value);
            if den.is_zero() {
                return Err(FormError::ZeroDenominator);
            }
            let num = rf.num().substitute(i, value);
            out.add_term(tuple.clone(), RationalFunction::reduced(num, den));
        }
        Ok(out)
    }

    /// Multilinear alternating evaluation against `degree` frame vectors.
    pub fn evaluate(
        &self,
        point: &[Complex64],
        frame: &[Vec<Complex64>],
    ) -> Result<Complex64, FormError> {
        assert_eq!(point.len(), self.nvars, "point length mismatch");
        if frame.len() != self.degree {
            return Err(FormError::FrameSizeMismatch {
                got: frame.len(),
                expected: self.degree,
            });
        }
        for v in frame {
            assert_eq!(v.len(), self.nvars, "frame vector length mismatch");
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (tuple, rf) in &self.terms {
            let coeff = rf.eval_c64(point)?;
            let minor: Vec<Vec<Complex64>> = tuple
                .iter()
                .map(|&row| frame.iter().map(|v| v[row]).collect())
                .collect();
            acc += coeff * det_c64(minor);
        }
        Ok(acc)
    }
}

impl<C: Scalar> PartialEq for DiffForm<C> {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars
            && self.degree == other.degree
            && self.terms == other.terms
    }
}

impl<C: Scalar> fmt::Display for DiffForm<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::formlang::render::fmt_diff_form(self, f)
    }
}

/// Merges two strictly increasing tuples, counting the transpositions that
/// interleave them; `None` when they share an index.
fn merge_tuples(a: &[usize], b: &[usize]) -> Option<(i32, Vec<usize>)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut sign = 1i32;
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] < b[j] {
            out.push(a[i]);
            i += 1;
        } else if a[i] > b[j] {
            // b[j] moves past the remaining entries of a.
            if (a.len() - i) % 2 == 1 {
                sign = -sign;
            }
            out.push(b[j]);
            j += 1;
        } else {
            return None;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    Some((sign, out))
}

/// Determinant by Gaussian elimination with partial pivoting; the empty
/// matrix has determinant one.
pub(crate) fn det_c64(mut m: Vec<Vec<Complex64>>) -> Complex64 {
    let n = m.len();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let (pivot, magnitude) = (col..n)
            .map(|r| (r, m[r][col].norm()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty pivot range");
        if magnitude == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != col {
            m.swap(col, pivot);
            det = -det;
        }
        det *= m[col][col];
        let inv = m[col][col].inv();
        for r in col + 1..n {
            let factor = m[r][col] * inv;
            if factor == Complex64::new(0.0, 0.0) {
                continue;
            }
            let (top, bottom) = m.split_at_mut(r);
            let src = &top[col];
            let dst = &mut bottom[0];
            for c in col..n {
                dst[c] -= factor * src[c];
            }
        }
    }
    det
}

/// Polynomial vector field `Σ V_i ∂/∂z_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyVectorField<C: Scalar> {
    nvars: usize,
    components: Vec<Polynomial<C>>,
}

impl<C: Scalar> PolyVectorField<C> {
    pub fn new(components: Vec<Polynomial<C>>) -> Self {
        let nvars = components.len();
        assert!(nvars > 0, "vector field needs at least one component");
        for c in &components {
            assert_eq!(c.nvars(), nvars, "component count must equal the variable count");
        }
        PolyVectorField { nvars, components }
    }

    /// The unit field `∂/∂z_i`.
    pub fn coordinate(nvars: usize, i: usize) -> Self {
        let mut components = vec![Polynomial::zero(nvars); nvars];
        components[i] = Polynomial::one(nvars);
        Self::new(components)
    }

    /// The Euler field `Σ a_i·z_i·∂/∂z_i` of a weight system.
    pub fn euler(ws: &WeightSystem) -> Self {
        let nvars = ws.nvars();
        let components = (0..nvars)
            .map(|i| {
                Polynomial::variable(nvars, i).scale(&C::from_int(ws.weights()[i]))
            })
            .collect();
        Self::new(components)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn component(&self, i: usize) -> &Polynomial<C> {
        &self.components[i]
    }
}
