//! Canonical text rendering for polynomials, rational functions, and
//! differential forms. Output is deterministic (graded lexicographic
//! monomial order, ascending index tuples) and reparses to an equal value,
//! so golden files stay stable.

use std::fmt;

use crate::forms::{DiffForm, RationalFunction};
use crate::poly::{Monomial, Polynomial};
use crate::scalar::Scalar;

pub(crate) fn fmt_polynomial<C: Scalar>(
    p: &Polynomial<C>,
    f: &mut fmt::Formatter<'_>,
) -> fmt::Result {
    f.write_str(&polynomial_string(p))
}

pub(crate) fn fmt_rational_function<C: Scalar>(
    rf: &RationalFunction<C>,
    f: &mut fmt::Formatter<'_>,
) -> fmt::Result {
    f.write_str(&rational_function_string(rf))
}

pub(crate) fn fmt_diff_form<C: Scalar>(
    form: &DiffForm<C>,
    f: &mut fmt::Formatter<'_>,
) -> fmt::Result {
    f.write_str(&diff_form_string(form))
}

/// Monomials in descending graded lexicographic order, signs folded into
/// the separators: `z0^2 + 2*z0*z1 - z1^3`.
pub(crate) fn polynomial_string<C: Scalar>(p: &Polynomial<C>) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (position, (monomial, coeff)) in p.terms().rev().enumerate() {
        let unit = coeff.normalizing_unit();
        let negative = !unit.is_one();
        let canonical = if negative {
            coeff.clone() * unit
        } else {
            coeff.clone()
        };
        if position == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        push_term(&mut out, &canonical, monomial);
    }
    out
}

/// One sign-normalized term: coefficient (if not one), `*`, monomial.
fn push_term<C: Scalar>(out: &mut String, coeff: &C, monomial: &Monomial) {
    if monomial.is_unit() {
        push_coefficient(out, coeff);
        return;
    }
    if !coeff.is_one() {
        push_coefficient(out, coeff);
        out.push('*');
    }
    push_monomial(out, monomial);
}

/// Coefficients with both real and imaginary part need parentheses so the
/// inner sign does not leak into the surrounding sum.
fn push_coefficient<C: Scalar>(out: &mut String, coeff: &C) {
    if coeff.needs_parens_in_product() {
        out.push('(');
        out.push_str(&coeff.to_string());
        out.push(')');
    } else {
        out.push_str(&coeff.to_string());
    }
}

fn push_monomial(out: &mut String, monomial: &Monomial) {
    let mut first = true;
    for (i, &e) in monomial.exponents().iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            out.push('*');
        }
        first = false;
        out.push('z');
        out.push_str(&i.to_string());
        if e > 1 {
            out.push('^');
            out.push_str(&e.to_string());
        }
    }
}

/// `num/den` with parentheses only where reparsing needs them; polynomial
/// values print bare.
pub(crate) fn rational_function_string<C: Scalar>(rf: &RationalFunction<C>) -> String {
    if rf.is_polynomial() {
        return polynomial_string(rf.num());
    }
    let mut out = String::new();
    push_quotient(&mut out, rf);
    out
}

fn push_quotient<C: Scalar>(out: &mut String, rf: &RationalFunction<C>) {
    let num = rf.num();
    if num.is_single_term() {
        out.push_str(&polynomial_string(num));
    } else {
        out.push('(');
        out.push_str(&polynomial_string(num));
        out.push(')');
    }
    out.push('/');
    push_denominator(out, rf.den());
}

fn push_denominator<C: Scalar>(out: &mut String, den: &Polynomial<C>) {
    if is_simple_denominator(den) {
        out.push_str(&polynomial_string(den));
    } else {
        out.push('(');
        out.push_str(&polynomial_string(den));
        out.push(')');
    }
}

/// A power of a single coordinate with unit coefficient renders without
/// parentheses after `/`.
fn is_simple_denominator<C: Scalar>(den: &Polynomial<C>) -> bool {
    if !den.is_single_term() {
        return false;
    }
    let (monomial, coeff) = den.leading().expect("single term");
    coeff.is_one() && monomial.exponents().iter().filter(|&&e| e > 0).count() == 1
}

/// Terms in ascending tuple order; each coefficient's leading sign is
/// pulled into the separator: `-z1/(z0*z2) * dz0 + dz1/z2`.
pub(crate) fn diff_form_string<C: Scalar>(form: &DiffForm<C>) -> String {
    if form.is_zero() {
        return "0".to_string();
    }
    if form.degree() == 0 {
        let rf = form
            .coefficient(&[])
            .expect("nonzero 0-form has an empty-tuple coefficient");
        return rational_function_string(rf);
    }
    let mut out = String::new();
    for (position, (tuple, rf)) in form.terms().enumerate() {
        let unit = rf
            .num()
            .leading_coeff()
            .expect("stored coefficients are nonzero")
            .normalizing_unit();
        let negative = !unit.is_one();
        let positive_rf = if negative { rf.neg() } else { rf.clone() };
        if position == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        push_form_term(&mut out, &positive_rf, tuple);
    }
    out
}

fn push_form_term<C: Scalar>(out: &mut String, rf: &RationalFunction<C>, tuple: &[usize]) {
    let unit_coefficient = rf.is_polynomial()
        && rf.num().constant_value().is_some_and(|c| c.is_one());
    if unit_coefficient {
        push_differentials(out, tuple);
        return;
    }
    // `dz1/z2` for a unit numerator over a simple denominator.
    let unit_numerator = rf.num().constant_value().is_some_and(|c| c.is_one());
    if unit_numerator && is_simple_denominator(rf.den()) {
        push_differentials(out, tuple);
        out.push('/');
        out.push_str(&polynomial_string(rf.den()));
        return;
    }
    if rf.is_polynomial() {
        if rf.num().is_single_term() {
            out.push_str(&polynomial_string(rf.num()));
        } else {
            out.push('(');
            out.push_str(&polynomial_string(rf.num()));
            out.push(')');
        }
    } else {
        push_quotient(out, rf);
    }
    out.push_str(" * ");
    push_differentials(out, tuple);
}

fn push_differentials(out: &mut String, tuple: &[usize]) {
    let mut first = true;
    for &i in tuple {
        if !first {
            out.push('^');
        }
        first = false;
        out.push_str("dz");
        out.push_str(&i.to_string());
    }
}
