//! Coefficient scalars for the algebra layer.
//!
//! The polynomial, rational-function, and differential-form types are generic
//! over a [`Scalar`]. Two instantiations are provided:
//!
//! - [`GaussianRational`]: exact arithmetic in Q(i), the crate's default
//!   coefficient field. Components are arbitrary-precision rationals kept in
//!   lowest terms with positive denominator.
//! - [`Complex64`]: the binary64 lane used by the numeric module, so that
//!   evaluation loops run on hardware floats after a one-time conversion.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Coefficient requirements for the algebra layer: a field with exact
/// equality semantics (floating equality for the float lane), construction
/// from small integers, and a bridge to `Complex64` for evaluation.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + Div<Output = Self>
{
    /// Embed a machine integer.
    fn from_int(n: i64) -> Self;

    /// A unit `u` (for Q(i): ±1) such that `u * self` is sign-canonical:
    /// positive real part, or zero real part and positive imaginary part.
    /// Returns one for zero. Renderers use this to place minus signs.
    fn normalizing_unit(&self) -> Self;

    /// Nearest binary64 complex value.
    fn to_c64(&self) -> Complex64;

    /// True when a renderer must parenthesize this coefficient inside a
    /// product (it would otherwise parse as a sum).
    fn needs_parens_in_product(&self) -> bool;

    /// Greatest common rational content of the nonzero values, when the
    /// scalar has exact rational parts; `None` for floating-point scalars
    /// or when every value is zero. Quotient normalisation divides shared
    /// content out of numerator and denominator (2/(2·z) becomes 1/z).
    fn content_of<'a, I>(values: I) -> Option<Self>
    where
        Self: 'a,
        I: IntoIterator<Item = &'a Self>,
    {
        let _ = values;
        None
    }
}

// ======================= Gaussian rationals =======================

/// An element of Q(i): `re + im*i` with exact rational components.
///
/// Both components are reduced fractions with positive denominators
/// (maintained by `BigRational` itself), so structural equality is value
/// equality and hashing is consistent.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        GaussianRational::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_integer(n: i64) -> Self {
        GaussianRational::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    /// `n/d` as a real element. Panics if `d == 0`.
    pub fn from_ratio(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator in rational constant");
        GaussianRational::new(
            BigRational::new(BigInt::from(n), BigInt::from(d)),
            BigRational::zero(),
        )
    }

    pub fn from_rational(re: BigRational) -> Self {
        GaussianRational::new(re, BigRational::zero())
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational::new(self.re.clone(), -self.im.clone())
    }

    /// `|self|^2 = re^2 + im^2`, exact.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        assert!(!n.is_zero(), "division by zero in Q(i)");
        GaussianRational::new(&self.re / &n, -(&self.im / &n))
    }

    /// True for the sign-canonical representative: `re > 0`, or `re == 0`
    /// and `im > 0`, or zero.
    fn is_sign_canonical(&self) -> bool {
        if self.re.is_zero() {
            !self.im.is_negative()
        } else {
            self.re.is_positive()
        }
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        GaussianRational::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        GaussianRational::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let re = &self.re * &o.re - &self.im * &o.im;
        let im = &self.re * &o.im + &self.im * &o.re;
        GaussianRational::new(re, im)
    }
}

impl Div for GaussianRational {
    type Output = Self;
    // Complex division is multiplication by the conjugate reciprocal.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Self) -> Self {
        self * o.recip()
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        GaussianRational::new(-self.re, -self.im)
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        GaussianRational::new(BigRational::zero(), BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        GaussianRational::from_integer(1)
    }
}

impl Scalar for GaussianRational {
    fn from_int(n: i64) -> Self {
        GaussianRational::from_integer(n)
    }

    fn normalizing_unit(&self) -> Self {
        if self.is_zero() || self.is_sign_canonical() {
            GaussianRational::one()
        } else {
            -GaussianRational::one()
        }
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    fn needs_parens_in_product(&self) -> bool {
        !self.re.is_zero() && !self.im.is_zero()
    }

    fn content_of<'a, I>(values: I) -> Option<Self>
    where
        I: IntoIterator<Item = &'a Self>,
    {
        let mut acc: Option<BigRational> = None;
        for value in values {
            for part in [&value.re, &value.im] {
                if part.is_zero() {
                    continue;
                }
                let part = part.abs();
                acc = Some(match acc {
                    None => part,
                    Some(c) => rational_gcd(&c, &part),
                });
            }
        }
        acc.map(GaussianRational::from_rational)
    }
}

/// gcd(a/b, c/d) = gcd(a·d, c·b)/(b·d), the largest rational with both
/// arguments as integer multiples. Arguments must be positive.
fn rational_gcd(x: &BigRational, y: &BigRational) -> BigRational {
    use num_integer::Integer;
    let numer = (x.numer() * y.denom()).gcd(&(y.numer() * x.denom()));
    BigRational::new(numer, x.denom() * y.denom())
}

fn fmt_rational(r: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.denom().is_one() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussianRational {
    /// Canonical text form, re-parseable by the expression grammar:
    /// `0`, `-3/2`, `i`, `-2*i`, `1/2 + i`, `1 - 2/3*i`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn fmt_imag_mag(im: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            let mag = im.abs();
            if mag.is_one() {
                write!(f, "i")
            } else {
                fmt_rational(&mag, f)?;
                write!(f, "*i")
            }
        }
        if self.is_zero() {
            return write!(f, "0");
        }
        if self.im.is_zero() {
            return fmt_rational(&self.re, f);
        }
        if self.re.is_zero() {
            if self.im.is_negative() {
                write!(f, "-")?;
            }
            return fmt_imag_mag(&self.im, f);
        }
        fmt_rational(&self.re, f)?;
        write!(f, "{}", if self.im.is_negative() { " - " } else { " + " })?;
        fmt_imag_mag(&self.im, f)
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

// ======================= binary64 lane =======================

impl Scalar for Complex64 {
    fn from_int(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }

    fn normalizing_unit(&self) -> Self {
        let canonical = self.re > 0.0 || (self.re == 0.0 && self.im >= 0.0);
        if canonical {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(-1.0, 0.0)
        }
    }

    fn to_c64(&self) -> Complex64 {
        *self
    }

    fn needs_parens_in_product(&self) -> bool {
        self.re != 0.0 && self.im != 0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> GaussianRational {
        GaussianRational::from_ratio(n, d)
    }

    #[test]
    fn field_arithmetic() {
        let a = GaussianRational::new(
            BigRational::new(1.into(), 2.into()),
            BigRational::new(1.into(), 3.into()),
        );
        let b = GaussianRational::from_integer(2) + GaussianRational::i();
        let prod = a.clone() * b.clone();
        let back = prod / b;
        assert_eq!(back, a);
    }

    #[test]
    fn i_squares_to_minus_one() {
        let i = GaussianRational::i();
        assert_eq!(i.clone() * i, GaussianRational::from_integer(-1));
    }

    #[test]
    fn norm_and_conjugate() {
        let a = GaussianRational::new(
            BigRational::new(3.into(), 1.into()),
            BigRational::new(4.into(), 1.into()),
        );
        assert_eq!(a.norm_sqr(), BigRational::from_integer(25.into()));
        assert_eq!(a.clone() * a.conj(), GaussianRational::from_integer(25));
    }

    #[test]
    fn display_forms() {
        assert_eq!(GaussianRational::zero().to_string(), "0");
        assert_eq!(q(-1, 2).to_string(), "-1/2");
        assert_eq!(GaussianRational::i().to_string(), "i");
        assert_eq!((-GaussianRational::i()).to_string(), "-i");
        assert_eq!(
            (q(2, 3) * GaussianRational::i()).to_string(),
            "2/3*i"
        );
        let mixed = q(1, 2) - q(2, 3) * GaussianRational::i();
        assert_eq!(mixed.to_string(), "1/2 - 2/3*i");
    }

    #[test]
    fn normalizing_unit_makes_sign_canonical() {
        for v in [
            q(3, 1),
            q(-3, 1),
            GaussianRational::i(),
            -GaussianRational::i(),
            q(-1, 1) + GaussianRational::i(),
            q(-1, 1) - GaussianRational::i(),
        ] {
            let u = v.normalizing_unit();
            let w = u * v;
            assert!(w.is_sign_canonical(), "not canonical: {}", w);
        }
    }

    #[test]
    fn to_c64_matches_components() {
        let a = q(1, 4) + q(-2, 1) * GaussianRational::i();
        let c = a.to_c64();
        assert_eq!(c.re, 0.25);
        assert_eq!(c.im, -2.0);
    }
}
