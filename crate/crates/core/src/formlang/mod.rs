//! Text grammar for polynomials and differential forms: the single
//! ingestion path for the command line and for test fixtures.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := atom ('^' (uint | atom))*
//! atom   := uint | 'i' | name | 'z'k | 'dz'k | '(' expr ')'
//! ```
//!
//! Coordinates are fixed as `z0..zn` with `n` inferred from the highest
//! index used (or pinned via [`ParseOptions::nvars`]). Free names must be
//! bound to exact constants before parsing; nothing symbolic survives into
//! the kernel. `^` is a wedge when its left operand involves a
//! differential and an integer power otherwise.

pub(crate) mod lexer;
pub mod parser;
pub(crate) mod render;

use std::collections::BTreeMap;

use num_rational::BigRational;

use crate::forms::{DiffForm, FormError, RationalFunction};
use crate::poly::Polynomial;
use crate::scalar::GaussianRational;

pub use parser::{Expr, ExprKind};

type Poly = Polynomial<GaussianRational>;
type Rf = RationalFunction<GaussianRational>;
type Form = DiffForm<GaussianRational>;

/// Parse or elaboration failure, tagged with a 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }

    fn at(expr: &Expr, message: impl Into<String>) -> Self {
        Self::new(expr.line, expr.column, message)
    }
}

/// Knobs for the parse entry points.
#[derive(Debug, Clone, Default)]
pub struct ParseOptions {
    /// Constant values substituted for free names such as `p` and `q`.
    pub bindings: BTreeMap<String, GaussianRational>,
    /// Ambient coordinate count; inferred from the highest index if `None`.
    pub nvars: Option<usize>,
    /// Reject a repeated differential inside one wedge term instead of
    /// dropping it as a zero term with a warning.
    pub strict_repeated_differential: bool,
}

/// A parsed value plus any non-fatal warnings (dropped zero wedge terms).
#[derive(Debug, Clone)]
pub struct Parsed<T> {
    pub value: T,
    pub warnings: Vec<String>,
}

/// Parses a polynomial. The expression must elaborate to a scalar with
/// constant denominator.
pub fn parse_poly(text: &str, opts: &ParseOptions) -> Result<Parsed<Poly>, ParseError> {
    let (ast, value, warnings) = elaborate(text, opts)?;
    match value {
        Value::Scalar(rf) if rf.is_polynomial() => Ok(Parsed {
            value: rf.num().clone(),
            warnings,
        }),
        Value::Scalar(_) => Err(ParseError::at(
            &ast,
            "expression is not a polynomial: a nonconstant denominator remains",
        )),
        Value::Form(_) => Err(ParseError::at(
            &ast,
            "expected a polynomial, found a differential form",
        )),
    }
}

/// Parses a differential form; a plain scalar elaborates to a 0-form.
pub fn parse_form(text: &str, opts: &ParseOptions) -> Result<Parsed<Form>, ParseError> {
    let (_, value, warnings) = elaborate(text, opts)?;
    let value = match value {
        Value::Form(f) => f,
        Value::Scalar(rf) => Form::scalar(rf),
    };
    Ok(Parsed { value, warnings })
}

/// Parses a constant scalar, for binding values on the command line.
pub fn parse_constant(text: &str, opts: &ParseOptions) -> Result<GaussianRational, ParseError> {
    let (ast, value, _) = elaborate(text, opts)?;
    if let Value::Scalar(rf) = value {
        if rf.is_polynomial() {
            if let Some(c) = rf.num().constant_value() {
                return Ok(c);
            }
        }
    }
    Err(ParseError::at(&ast, "binding value must be a constant"))
}

enum Value {
    Scalar(Rf),
    Form(Form),
}

struct Env<'a> {
    nvars: usize,
    opts: &'a ParseOptions,
    warnings: Vec<String>,
}

fn elaborate(
    text: &str,
    opts: &ParseOptions,
) -> Result<(Expr, Value, Vec<String>), ParseError> {
    let ast = parser::parse(text)?;
    let nvars = match (opts.nvars, max_index(&ast)) {
        (Some(n), Some((k, line, column))) if k >= n => {
            return Err(ParseError::new(
                line,
                column,
                format!(
                    "coordinate index {} out of range: the expression was declared over {} variables",
                    k, n
                ),
            ));
        }
        (Some(n), _) => n,
        (None, Some((k, _, _))) => k + 1,
        (None, None) => 0,
    };
    let mut env = Env {
        nvars,
        opts,
        warnings: Vec::new(),
    };
    let value = eval(&ast, &mut env)?;
    Ok((ast, value, env.warnings))
}

/// Highest coordinate or differential index with its position.
fn max_index(expr: &Expr) -> Option<(usize, usize, usize)> {
    match &expr.kind {
        ExprKind::Variable(k) | ExprKind::Differential(k) => {
            Some((*k, expr.line, expr.column))
        }
        ExprKind::Number(_) | ExprKind::ImaginaryUnit | ExprKind::Identifier(_) => None,
        ExprKind::Neg(a) | ExprKind::Pow(a, _) => max_index(a),
        ExprKind::Add(a, b)
        | ExprKind::Mul(a, b)
        | ExprKind::Quot(a, b)
        | ExprKind::Wedge(a, b) => match (max_index(a), max_index(b)) {
            (None, r) => r,
            (l, None) => l,
            (Some(l), Some(r)) => Some(if r.0 > l.0 { r } else { l }),
        },
    }
}

fn eval(expr: &Expr, env: &mut Env) -> Result<Value, ParseError> {
    match &expr.kind {
        ExprKind::Number(n) => Ok(Value::Scalar(Rf::constant(
            env.nvars,
            GaussianRational::from_rational(BigRational::from_integer(n.clone())),
        ))),
        ExprKind::ImaginaryUnit => Ok(Value::Scalar(Rf::constant(
            env.nvars,
            GaussianRational::i(),
        ))),
        ExprKind::Identifier(name) => match env.opts.bindings.get(name) {
            Some(c) => Ok(Value::Scalar(Rf::constant(env.nvars, c.clone()))),
            None => {
                let hint = if env.opts.bindings.is_empty() {
                    " (no bindings are defined)".to_string()
                } else {
                    let names: Vec<&str> =
                        env.opts.bindings.keys().map(String::as_str).collect();
                    format!("; bound names: {}", names.join(", "))
                };
                Err(ParseError::at(
                    expr,
                    format!("unknown identifier '{}'{}", name, hint),
                ))
            }
        },
        ExprKind::Variable(k) => Ok(Value::Scalar(Rf::from_poly(Poly::variable(
            env.nvars,
            *k,
        )))),
        ExprKind::Differential(k) => Ok(Value::Form(Form::coordinate(env.nvars, *k))),
        ExprKind::Neg(a) => Ok(match eval(a, env)? {
            Value::Scalar(x) => Value::Scalar(x.neg()),
            Value::Form(f) => Value::Form(f.neg()),
        }),
        ExprKind::Add(a, b) => {
            let lhs = eval(a, env)?;
            let rhs = eval(b, env)?;
            add_values(expr, lhs, rhs)
        }
        ExprKind::Mul(a, b) => {
            let lhs = eval(a, env)?;
            let rhs = eval(b, env)?;
            match (lhs, rhs) {
                (Value::Scalar(x), Value::Scalar(y)) => Ok(Value::Scalar(x.mul(&y))),
                (Value::Scalar(x), Value::Form(f)) | (Value::Form(f), Value::Scalar(x)) => {
                    Ok(Value::Form(f.scale_rf(&x)))
                }
                (Value::Form(_), Value::Form(_)) => Err(ParseError::at(
                    expr,
                    "cannot multiply two differential forms with '*'; use '^' for the wedge product",
                )),
            }
        }
        ExprKind::Quot(a, b) => {
            let lhs = eval(a, env)?;
            let rhs = eval(b, env)?;
            let Value::Scalar(y) = rhs else {
                return Err(ParseError::at(expr, "cannot divide by a differential form"));
            };
            if y.is_zero() {
                return Err(ParseError::at(
                    expr,
                    "division by an expression that is identically zero",
                ));
            }
            match lhs {
                Value::Scalar(x) => {
                    let q = x.div(&y).expect("nonzero divisor");
                    Ok(Value::Scalar(q))
                }
                Value::Form(f) => {
                    let recip = Rf::one(env.nvars).div(&y).expect("nonzero divisor");
                    Ok(Value::Form(f.scale_rf(&recip)))
                }
            }
        }
        ExprKind::Pow(a, k) => match eval(a, env)? {
            Value::Scalar(x) => Ok(Value::Scalar(x.pow(*k))),
            Value::Form(_) => Err(ParseError::at(
                expr,
                "cannot raise a differential form to a power",
            )),
        },
        ExprKind::Wedge(a, b) => {
            let lhs = eval(a, env)?;
            let rhs = eval(b, env)?;
            let (Value::Form(f), Value::Form(g)) = (lhs, rhs) else {
                return Err(ParseError::at(
                    expr,
                    "wedge operands must both be differential forms",
                ));
            };
            if let Some(k) = shared_differential(&f, &g) {
                if env.opts.strict_repeated_differential {
                    return Err(ParseError::at(
                        expr,
                        format!("repeated differential dz{} in a wedge term", k),
                    ));
                }
                env.warnings.push(format!(
                    "repeated differential dz{} at {}:{}: the term vanishes",
                    k, expr.line, expr.column
                ));
            }
            match f.wedge(&g) {
                Ok(w) => Ok(Value::Form(w)),
                Err(FormError::DegreeOverflow { got, nvars }) => Err(ParseError::at(
                    expr,
                    format!(
                        "wedge degree {} exceeds the number of coordinates {}",
                        got, nvars
                    ),
                )),
                Err(other) => Err(ParseError::at(expr, other.to_string())),
            }
        }
    }
}

fn add_values(expr: &Expr, lhs: Value, rhs: Value) -> Result<Value, ParseError> {
    match (lhs, rhs) {
        (Value::Scalar(x), Value::Scalar(y)) => Ok(Value::Scalar(x.add(&y))),
        (Value::Form(f), Value::Form(g)) => {
            if f.is_zero() && f.degree() != g.degree() {
                return Ok(Value::Form(g));
            }
            if g.is_zero() && f.degree() != g.degree() {
                return Ok(Value::Form(f));
            }
            if f.degree() != g.degree() {
                return Err(ParseError::at(
                    expr,
                    format!(
                        "cannot add forms of degree {} and {}",
                        f.degree(),
                        g.degree()
                    ),
                ));
            }
            Ok(Value::Form(f.add(&g)))
        }
        (Value::Scalar(x), Value::Form(f)) | (Value::Form(f), Value::Scalar(x)) => {
            if x.is_zero() {
                return Ok(Value::Form(f));
            }
            if f.degree() == 0 {
                return Ok(Value::Form(f.add(&Form::scalar(x))));
            }
            if f.is_zero() {
                return Ok(Value::Scalar(x));
            }
            Err(ParseError::at(
                expr,
                format!("cannot add a scalar and a degree-{} form", f.degree()),
            ))
        }
    }
}

/// First coordinate index that appears in terms on both sides of a wedge.
fn shared_differential(f: &Form, g: &Form) -> Option<usize> {
    for (ta, _) in f.terms() {
        for (tb, _) in g.terms() {
            if let Some(&k) = ta.iter().find(|i| tb.contains(i)) {
                return Some(k);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn opts() -> ParseOptions {
        ParseOptions::default()
    }

    fn int(n: i64) -> GaussianRational {
        GaussianRational::from_integer(n)
    }

    fn poly(text: &str) -> Poly {
        parse_poly(text, &opts()).unwrap().value
    }

    fn form(text: &str) -> Form {
        parse_form(text, &opts()).unwrap().value
    }

    #[test]
    fn parses_the_cubic_surface_with_bindings() {
        let mut o = opts();
        o.bindings.insert("p".to_string(), int(-1));
        o.bindings.insert("q".to_string(), int(0));
        let s = parse_poly("z1^3 + p*z0^2*z1 + q*z0^3 - z0*z2^2", &o)
            .unwrap()
            .value;
        let expected = Poly::from_terms(
            3,
            vec![
                (vec![0, 3, 0], int(1)),
                (vec![2, 1, 0], int(-1)),
                (vec![1, 0, 2], int(-1)),
            ],
        );
        assert_eq!(s, expected);
    }

    #[test]
    fn parses_zero() {
        assert!(poly("0").is_zero());
    }

    #[test]
    fn parses_complex_rational_coefficients() {
        let p = poly("(1/2)*i*z0^2");
        let expected = Poly::monomial(
            1,
            vec![2],
            GaussianRational::new(
                BigRational::zero(),
                BigRational::new(1.into(), 2.into()),
            ),
        );
        assert_eq!(p, expected);
    }

    #[test]
    fn wedge_of_coordinates() {
        assert_eq!(form("dz0^dz1"), Form::basis(2, &[0, 1]));
        assert_eq!(form("dz1^dz0"), Form::basis(2, &[0, 1]).neg());
    }

    #[test]
    fn parses_the_chart_residue_shape() {
        let f = form("-1/(2*z0*z2) * dz0^dz1");
        let den = Poly::monomial(3, vec![1, 0, 1], int(2));
        let coeff = Rf::new(Poly::constant(3, int(-1)), den).unwrap();
        assert_eq!(f, Form::from_terms(3, 2, vec![(vec![0, 1], coeff)]));
    }

    #[test]
    fn division_chains_left_to_right() {
        // 12/3/2 = 2, and z0/z1/z2 = z0/(z1 z2).
        let c = parse_constant("12/3/2", &opts()).unwrap();
        assert_eq!(c, int(2));
        let f = parse_form("z0/z1/z2", &opts()).unwrap().value;
        let expected = Rf::new(
            Poly::variable(3, 0),
            Poly::variable(3, 1).mul(&Poly::variable(3, 2)),
        )
        .unwrap();
        assert_eq!(f, Form::scalar(expected));
    }

    #[test]
    fn powers_associate_left() {
        assert_eq!(poly("z0^2^3"), Poly::monomial(1, vec![6], int(1)));
    }

    #[test]
    fn wedges_associate_left() {
        assert_eq!(form("dz0^dz1^dz2"), Form::basis(3, &[0, 1, 2]));
    }

    #[test]
    fn reports_positions_in_errors() {
        let err = parse_poly("z0 + $", &opts()).unwrap_err();
        assert_eq!((err.line, err.column), (1, 6));
        let err = parse_poly("z0 +\n* z1", &opts()).unwrap_err();
        assert_eq!(err.line, 2);
    }

    #[test]
    fn unknown_identifier_lists_bound_names() {
        let mut o = opts();
        o.bindings.insert("q".to_string(), int(1));
        let err = parse_poly("p*z0", &o).unwrap_err();
        assert!(err.message.contains("unknown identifier 'p'"));
        assert!(err.message.contains("q"));
    }

    #[test]
    fn exponent_overflow_is_reported() {
        let err = parse_poly("z0^99999999999", &opts()).unwrap_err();
        assert!(err.message.contains("32 bits"));
    }

    #[test]
    fn scalar_wedge_is_rejected() {
        let err = parse_form("dz0^2", &opts()).unwrap_err();
        assert!(err.message.contains("wedge operands"));
    }

    #[test]
    fn form_products_point_to_wedge() {
        let err = parse_form("dz0*dz1", &opts()).unwrap_err();
        assert!(err.message.contains("use '^'"));
    }

    #[test]
    fn mixed_degrees_are_rejected() {
        let err = parse_form("dz0 + dz0^dz1", &opts()).unwrap_err();
        assert!(err.message.contains("degree 1 and 2"));
    }

    #[test]
    fn scalar_plus_form_is_rejected() {
        let err = parse_form("1 + dz0", &opts()).unwrap_err();
        assert!(err.message.contains("scalar"));
    }

    #[test]
    fn repeated_differential_lenient_and_strict() {
        // Two coordinates so the vanishing 2-form is representable.
        let lenient = ParseOptions {
            nvars: Some(2),
            ..opts()
        };
        let parsed = parse_form("dz0^dz0", &lenient).unwrap();
        assert!(parsed.value.is_zero());
        assert_eq!(parsed.warnings.len(), 1);
        let strict = ParseOptions {
            nvars: Some(2),
            strict_repeated_differential: true,
            ..opts()
        };
        let err = parse_form("dz0^dz0", &strict).unwrap_err();
        assert!(err.message.contains("repeated differential dz0"));
    }

    #[test]
    fn division_by_zero_is_reported() {
        let err = parse_form("z0/(z1 - z1)", &opts()).unwrap_err();
        assert!(err.message.contains("identically zero"));
    }

    #[test]
    fn nonpolynomial_input_to_parse_poly_is_rejected() {
        let err = parse_poly("z0/z1", &opts()).unwrap_err();
        assert!(err.message.contains("not a polynomial"));
    }

    #[test]
    fn declared_variable_count_is_enforced() {
        let pinned = ParseOptions {
            nvars: Some(2),
            ..opts()
        };
        let err = parse_poly("z0 + z5", &pinned).unwrap_err();
        assert!(err.message.contains("out of range"));
        let ok = parse_poly("z0", &pinned).unwrap().value;
        assert_eq!(ok.nvars(), 2);
    }

    #[test]
    fn binding_values_must_be_constant() {
        let err = parse_constant("z0 + 1", &opts()).unwrap_err();
        assert!(err.message.contains("constant"));
        let c = parse_constant("-1/4 + 2*i", &opts()).unwrap();
        assert_eq!(
            c,
            GaussianRational::new(
                BigRational::new((-1).into(), 4.into()),
                BigRational::from_integer(2.into()),
            )
        );
    }

    #[test]
    fn renders_polynomials_in_descending_graded_lex() {
        let p = poly("z1^2 + z0^2 + 2*z0*z1");
        assert_eq!(p.to_string(), "z0^2 + 2*z0*z1 + z1^2");
        let q = poly("-z0^2*z1 - z0*z2^2 + z1^3");
        assert_eq!(q.to_string(), "-z0^2*z1 - z0*z2^2 + z1^3");
    }

    #[test]
    fn renders_complex_coefficients_with_parens() {
        let p = poly("(1 + i)*z0 - i*z1");
        assert_eq!(p.to_string(), "(1 + i)*z0 - i*z1");
    }

    #[test]
    fn renders_rational_coefficients_and_simple_denominators() {
        let f = form("-1/(2*z0*z2) * dz0^dz1");
        assert_eq!(f.to_string(), "-1/(2*z0*z2) * dz0^dz1");
        let g = form("dz1/z2 - z1/(z0*z2) * dz0");
        assert_eq!(g.to_string(), "-z1/(z0*z2) * dz0 + dz1/z2");
    }

    #[test]
    fn round_trips_parse_render_parse() {
        let samples = [
            "z0^2 + 2*z0*z1 + z1^2",
            "-z0^2*z1 - z0*z2^2 + z1^3",
            "(1/2 - 2/3*i)*z0^3 - 7",
            "0",
        ];
        for text in samples {
            let p = poly(text);
            assert_eq!(poly(&p.to_string()), p, "poly round trip for {}", text);
        }
        let form_samples = [
            "dz0^dz1",
            "-1/(2*z0*z2) * dz0^dz1",
            "-2*z1^2/(z0^2 - z1^3) * dz0 + 3*z0*z1/(z0^2 - z1^3) * dz1",
            "z0 + 1",
            "(z0 + z1) * dz0^dz2 - dz1^dz2",
        ];
        for text in form_samples {
            let f = form(text);
            assert_eq!(form(&f.to_string()), f, "form round trip for {}", text);
        }
    }
}
