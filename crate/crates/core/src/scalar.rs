//! Scalar fields K used for the per-atom values of L0 elements.
//!
//! Four instantiations are provided: exact rationals, exact Gaussian
//! rationals, `f64` and `Complex<f64>`. Exact types ignore every tolerance
//! argument; float types treat magnitudes at or below the tolerance as zero.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;
pub type GaussianRational = Complex<BigRational>;
pub type Complex64 = Complex<f64>;

/// Error produced when a numeric literal cannot be read.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("bad numeric literal `{literal}`: {reason}")]
pub struct LiteralError {
    pub literal: String,
    pub reason: String,
}

impl LiteralError {
    fn new(literal: &str, reason: impl Into<String>) -> Self {
        Self {
            literal: literal.to_string(),
            reason: reason.into(),
        }
    }
}

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    type Real: RealScalar;

    /// True for the rational types, where zero tests are decidable.
    const EXACT: bool;
    const COMPLEX: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero_within(&self, tol: f64) -> bool;
    /// Multiplicative inverse. Callers guarantee `self` is nonzero.
    fn recip(&self) -> Self;
    fn conj(&self) -> Self;
    fn abs_sq(&self) -> Self::Real;
    fn from_real(r: Self::Real) -> Self;
    fn re(&self) -> Self::Real;
    fn im(&self) -> Self::Real;
    fn from_parts(re: Self::Real, im: Self::Real) -> Option<Self>;
    /// Rough magnitude used for pivot selection and tolerance scaling.
    fn magnitude(&self) -> f64;
    fn parse_literal(s: &str) -> Result<Self, LiteralError>;
    fn render(&self) -> String;

    fn from_i64(n: i64) -> Self {
        Self::from_real(Self::Real::from_ratio(n, 1))
    }

    fn div(&self, other: &Self) -> Self {
        self.clone() * other.recip()
    }

    /// Imaginary part vanishes (within tolerance for float types).
    fn is_real_within(&self, tol: f64) -> bool {
        Self::from_real(self.im()).is_zero_within(tol)
    }
}

pub trait RealScalar: Scalar<Real = Self> + PartialOrd {
    fn from_ratio(p: i64, q: i64) -> Self;
    fn from_rational(q: &Rational) -> Self;
    /// Square root when it exists in the field (always for `f64`).
    fn sqrt_exact(&self) -> Option<Self>;
    fn to_f64(&self) -> f64;
}

// ---------------------------------------------------------------------------
// literal helpers

fn parse_rational(s: &str) -> Result<Rational, LiteralError> {
    let t = s.trim();
    if t.is_empty() {
        return Err(LiteralError::new(s, "empty"));
    }
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p
            .trim()
            .parse()
            .map_err(|_| LiteralError::new(s, "numerator is not an integer"))?;
        let q: BigInt = q
            .trim()
            .parse()
            .map_err(|_| LiteralError::new(s, "denominator is not an integer"))?;
        if q.is_zero() {
            return Err(LiteralError::new(s, "zero denominator"));
        }
        return Ok(Rational::new(p, q));
    }
    parse_decimal(t).ok_or_else(|| LiteralError::new(s, "expected `p/q` or a decimal"))
}

/// Exact value of a decimal literal such as `-1.25e-3`.
fn parse_decimal(t: &str) -> Option<Rational> {
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(pos) => (&t[..pos], t[pos + 1..].parse::<i32>().ok()?),
        None => (t, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first()? {
        b'-' => (true, &mantissa[1..]),
        b'+' => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let all: String = format!("{int_part}{frac_part}");
    let mut numer: BigInt = if all.is_empty() {
        BigInt::zero()
    } else {
        all.parse().ok()?
    };
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    let value = if scale >= 0 {
        Rational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Some(value)
}

fn parse_f64(s: &str) -> Result<f64, LiteralError> {
    let t = s.trim();
    if let Some((p, q)) = t.split_once('/') {
        let p: f64 = p
            .trim()
            .parse()
            .map_err(|_| LiteralError::new(s, "bad numerator"))?;
        let q: f64 = q
            .trim()
            .parse()
            .map_err(|_| LiteralError::new(s, "bad denominator"))?;
        if q == 0.0 {
            return Err(LiteralError::new(s, "zero denominator"));
        }
        return Ok(p / q);
    }
    let v: f64 = t
        .parse()
        .map_err(|_| LiteralError::new(s, "expected `p/q` or a decimal"))?;
    if !v.is_finite() {
        return Err(LiteralError::new(s, "value is not finite"));
    }
    Ok(v)
}

/// Splits `a+bi`, `a-bi`, `bi` or `a` into textual real and imaginary parts.
pub(crate) fn split_complex(s: &str) -> Result<(String, String), LiteralError> {
    let t = s.trim();
    let Some(body) = t.strip_suffix('i') else {
        return Ok((t.to_string(), "0".to_string()));
    };
    let bytes = body.as_bytes();
    let mut split = None;
    for pos in (1..bytes.len()).rev() {
        if (bytes[pos] == b'+' || bytes[pos] == b'-') && !matches!(bytes[pos - 1], b'e' | b'E') {
            split = Some(pos);
            break;
        }
    }
    let (re, im) = match split {
        Some(pos) => (&body[..pos], &body[pos..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1".to_string(),
        "-" => "-1".to_string(),
        other => other.trim_start_matches('+').to_string(),
    };
    if re.trim().is_empty() {
        return Err(LiteralError::new(s, "missing real part"));
    }
    Ok((re.to_string(), im))
}

fn render_complex<T: RealScalar>(re: &T, im: &T) -> String {
    let zero = T::zero();
    if *im == zero {
        return re.render();
    }
    let im_text = im.render();
    if *re == zero {
        return format!("{im_text}i");
    }
    if im_text.starts_with('-') {
        format!("{}{}i", re.render(), im_text)
    } else {
        format!("{}+{}i", re.render(), im_text)
    }
}

fn rational_to_f64(q: &Rational) -> f64 {
    ToPrimitive::to_f64(q).unwrap_or_else(|| {
        // Very large numerators/denominators: fall back to a ratio of floats.
        let n = q.numer().to_f64().unwrap_or(f64::MAX);
        let d = q.denom().to_f64().unwrap_or(f64::MAX);
        n / d
    })
}

fn is_perfect_square(n: &BigInt) -> Option<BigInt> {
    if n.sign() == Sign::Minus {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

// ---------------------------------------------------------------------------
// exact rationals

impl Scalar for Rational {
    type Real = Rational;
    const EXACT: bool = true;
    const COMPLEX: bool = false;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero_within(&self, _tol: f64) -> bool {
        Zero::is_zero(self)
    }
    fn recip(&self) -> Self {
        Rational::recip(self)
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn abs_sq(&self) -> Self::Real {
        self * self
    }
    fn from_real(r: Self::Real) -> Self {
        r
    }
    fn re(&self) -> Self::Real {
        self.clone()
    }
    fn im(&self) -> Self::Real {
        Zero::zero()
    }
    fn from_parts(re: Self::Real, im: Self::Real) -> Option<Self> {
        Zero::is_zero(&im).then_some(re)
    }
    fn magnitude(&self) -> f64 {
        rational_to_f64(&self.abs())
    }
    fn parse_literal(s: &str) -> Result<Self, LiteralError> {
        let (re, im) = split_complex(s)?;
        let im = parse_rational(&im)?;
        if !Zero::is_zero(&im) {
            return Err(LiteralError::new(s, "complex value in a real field"));
        }
        parse_rational(&re)
    }
    fn render(&self) -> String {
        // BigRational is always reduced with a positive denominator.
        self.to_string()
    }
}

impl RealScalar for Rational {
    fn from_ratio(p: i64, q: i64) -> Self {
        Rational::new(BigInt::from(p), BigInt::from(q))
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn sqrt_exact(&self) -> Option<Self> {
        let n = is_perfect_square(self.numer())?;
        let d = is_perfect_square(self.denom())?;
        Some(Rational::new(n, d))
    }
    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
}

// ---------------------------------------------------------------------------
// exact Gaussian rationals

impl Scalar for GaussianRational {
    type Real = Rational;
    const EXACT: bool = true;
    const COMPLEX: bool = true;

    fn zero() -> Self {
        Complex::new(Zero::zero(), Zero::zero())
    }
    fn one() -> Self {
        Complex::new(One::one(), Zero::zero())
    }
    fn is_zero_within(&self, _tol: f64) -> bool {
        Zero::is_zero(&self.re) && Zero::is_zero(&self.im)
    }
    fn recip(&self) -> Self {
        let d = self.norm_sqr();
        Complex::new(&self.re / &d, -&self.im / &d)
    }
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn abs_sq(&self) -> Self::Real {
        self.norm_sqr()
    }
    fn from_real(r: Self::Real) -> Self {
        Complex::new(r, Zero::zero())
    }
    fn re(&self) -> Self::Real {
        self.re.clone()
    }
    fn im(&self) -> Self::Real {
        self.im.clone()
    }
    fn from_parts(re: Self::Real, im: Self::Real) -> Option<Self> {
        Some(Complex::new(re, im))
    }
    fn magnitude(&self) -> f64 {
        rational_to_f64(&self.re).hypot(rational_to_f64(&self.im))
    }
    fn parse_literal(s: &str) -> Result<Self, LiteralError> {
        let (re, im) = split_complex(s)?;
        Ok(Complex::new(parse_rational(&re)?, parse_rational(&im)?))
    }
    fn render(&self) -> String {
        render_complex(&self.re, &self.im)
    }
}

// ---------------------------------------------------------------------------
// floats

fn clean_zero(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

impl Scalar for f64 {
    type Real = f64;
    const EXACT: bool = false;
    const COMPLEX: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero_within(&self, tol: f64) -> bool {
        self.abs() <= tol
    }
    fn recip(&self) -> Self {
        1.0 / self
    }
    fn conj(&self) -> Self {
        *self
    }
    fn abs_sq(&self) -> Self::Real {
        self * self
    }
    fn from_real(r: Self::Real) -> Self {
        r
    }
    fn re(&self) -> Self::Real {
        *self
    }
    fn im(&self) -> Self::Real {
        0.0
    }
    fn from_parts(re: Self::Real, im: Self::Real) -> Option<Self> {
        (im == 0.0).then_some(re)
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn parse_literal(s: &str) -> Result<Self, LiteralError> {
        let (re, im) = split_complex(s)?;
        if parse_f64(&im)? != 0.0 {
            return Err(LiteralError::new(s, "complex value in a real field"));
        }
        parse_f64(&re)
    }
    fn render(&self) -> String {
        format!("{}", clean_zero(*self))
    }
}

impl RealScalar for f64 {
    fn from_ratio(p: i64, q: i64) -> Self {
        p as f64 / q as f64
    }
    fn from_rational(q: &Rational) -> Self {
        rational_to_f64(q)
    }
    fn sqrt_exact(&self) -> Option<Self> {
        Some(self.max(0.0).sqrt())
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for Complex64 {
    type Real = f64;
    const EXACT: bool = false;
    const COMPLEX: bool = true;

    fn zero() -> Self {
        Complex::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex::new(1.0, 0.0)
    }
    fn is_zero_within(&self, tol: f64) -> bool {
        self.norm() <= tol
    }
    fn recip(&self) -> Self {
        self.inv()
    }
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn abs_sq(&self) -> Self::Real {
        self.norm_sqr()
    }
    fn from_real(r: Self::Real) -> Self {
        Complex::new(r, 0.0)
    }
    fn re(&self) -> Self::Real {
        self.re
    }
    fn im(&self) -> Self::Real {
        self.im
    }
    fn from_parts(re: Self::Real, im: Self::Real) -> Option<Self> {
        Some(Complex::new(re, im))
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn parse_literal(s: &str) -> Result<Self, LiteralError> {
        let (re, im) = split_complex(s)?;
        Ok(Complex::new(parse_f64(&re)?, parse_f64(&im)?))
    }
    fn render(&self) -> String {
        render_complex(&clean_zero(self.re), &clean_zero(self.im))
    }
}

/// Converts an exact Gaussian rational into any field, rejecting a nonzero
/// imaginary part for real fields.
pub fn from_gaussian<K: Scalar>(value: &GaussianRational) -> Option<K> {
    K::from_parts(
        K::Real::from_rational(&value.re),
        K::Real::from_rational(&value.im),
    )
}

/// Converts an exact rational into any field.
pub fn from_rational<K: Scalar>(value: &Rational) -> K {
    K::from_real(K::Real::from_rational(value))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> Rational {
        Rational::from_ratio(p, d)
    }

    #[test]
    fn rational_literals() {
        assert_eq!(Rational::parse_literal("3/6").unwrap(), q(1, 2));
        assert_eq!(Rational::parse_literal("-1.25").unwrap(), q(-5, 4));
        assert_eq!(Rational::parse_literal("1e-3").unwrap(), q(1, 1000));
        assert_eq!(Rational::parse_literal("2.5E2").unwrap(), q(250, 1));
        assert_eq!(Rational::parse_literal(".5").unwrap(), q(1, 2));
        assert!(Rational::parse_literal("1/0").is_err());
        assert!(Rational::parse_literal("abc").is_err());
        assert!(Rational::parse_literal("1+2i").is_err());
        assert_eq!(Rational::parse_literal("4+0i").unwrap(), q(4, 1));
    }

    #[test]
    fn gaussian_literals() {
        let z = GaussianRational::parse_literal("1/2-3/4i").unwrap();
        assert_eq!(z, Complex::new(q(1, 2), q(-3, 4)));
        assert_eq!(
            GaussianRational::parse_literal("-i").unwrap(),
            Complex::new(q(0, 1), q(-1, 1))
        );
        assert_eq!(
            GaussianRational::parse_literal("2i").unwrap(),
            Complex::new(q(0, 1), q(2, 1))
        );
        assert_eq!(
            GaussianRational::parse_literal("1e-2+1e+1i").unwrap(),
            Complex::new(q(1, 100), q(10, 1))
        );
        for text in ["1/2-3/4i", "5i", "-7", "0", "2+1i", "-1/3-1i"] {
            let z = GaussianRational::parse_literal(text).unwrap();
            assert_eq!(GaussianRational::parse_literal(&z.render()).unwrap(), z);
        }
    }

    #[test]
    fn float_round_trip() {
        for x in [0.1, -2.5, 1.0e-7, 3.0, 123456.789] {
            assert_eq!(f64::parse_literal(&x.render()).unwrap(), x);
        }
        assert_eq!((-0.0f64).render(), "0");
        assert_eq!(f64::parse_literal("1/4").unwrap(), 0.25);
    }

    #[test]
    fn exact_square_roots() {
        assert_eq!(q(25, 4).sqrt_exact(), Some(q(5, 2)));
        assert_eq!(q(2, 1).sqrt_exact(), None);
        assert_eq!(q(-4, 1).sqrt_exact(), None);
    }

    #[test]
    fn gaussian_inverse() {
        let z = Complex::new(q(1, 1), q(2, 1));
        let w = z.recip();
        assert_eq!(z * w, <GaussianRational as Scalar>::one());
    }
}
