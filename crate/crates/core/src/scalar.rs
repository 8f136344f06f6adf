//! Scalars: exact rationals or `f64`, behind a single trait.
//!
//! Every algorithm in the crate is generic over [`Scalar`]. Exact mode uses
//! [`Rational`] (arbitrary precision) so the worked examples reproduce with
//! no rounding; float mode uses `f64` with an explicit [`Tolerance`].

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary precision rational number.
pub type Rational = BigRational;

/// Default tolerance used in float mode.
pub const DEFAULT_TAU: f64 = 1e-9;

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// `true` for rational arithmetic.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn to_f64(&self) -> f64;
    fn abs(&self) -> Self;
    fn is_zero(&self) -> bool;

    /// Converts an `f64`. Exact mode keeps the binary value exactly.
    fn from_f64(v: f64) -> Option<Self>;

    /// Canonical text form: `"1/4"` for rationals, shortest round-trip decimal for floats.
    fn to_repr(&self) -> String;

    /// Parses `"3"`, `"-1/4"`, `"0.25"` or `"1e-3"`.
    fn parse_repr(s: &str) -> Option<Self>;

    fn is_positive(&self) -> bool {
        *self > Self::zero()
    }

    fn is_negative(&self) -> bool {
        *self < Self::zero()
    }

    fn max_of(a: Self, b: Self) -> Self {
        if a >= b {
            a
        } else {
            b
        }
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_f64(v: f64) -> Option<Self> {
        BigRational::from_float(v)
    }
    fn to_repr(&self) -> String {
        if self.is_integer() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }
    fn parse_repr(s: &str) -> Option<Self> {
        parse_exact(s)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn from_f64(v: f64) -> Option<Self> {
        v.is_finite().then_some(v)
    }
    fn to_repr(&self) -> String {
        // `Display` for f64 is the shortest string that round-trips.
        let s = format!("{}", self);
        if s == "-0" {
            "0".to_string()
        } else {
            s
        }
    }
    fn parse_repr(s: &str) -> Option<Self> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n: f64 = n.trim().parse().ok()?;
            let d: f64 = d.trim().parse().ok()?;
            if d == 0.0 {
                return None;
            }
            return Some(n / d);
        }
        f64::from_str(s).ok().filter(|v| v.is_finite())
    }
}

/// Parses an integer, fraction or finite decimal literal into an exact rational.
pub fn parse_exact(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).ok()?;
        let d = BigInt::from_str(d.trim()).ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Ok(i) = BigInt::from_str(s) {
        return Some(BigRational::from_integer(i));
    }
    // decimal with optional exponent, e.g. -1.25e-3
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(p) => (&s[..p], s[p + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{}{}", int_part, frac_part);
    let mut value = BigRational::from_integer(BigInt::from_str(&digits).ok()?);
    let scale = exponent - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    let pow = num_traits::pow::pow(ten, scale.unsigned_abs() as usize);
    if scale >= 0 {
        value *= pow;
    } else {
        value /= pow;
    }
    Some(if neg { -value } else { value })
}

/// `true` when the literal is an integer or fraction (no decimal point or exponent).
pub fn is_rational_literal(s: &str) -> bool {
    let s = s.trim();
    !s.is_empty() && s.chars().all(|c| c.is_ascii_digit() || matches!(c, '-' | '+' | '/' | ' '))
}

/// Decision threshold for turning residuals into flags.
///
/// Exact mode requires a residual of exactly zero. Float mode accepts
/// `|r| <= tau * max(1, scale)` where `scale` is the norm of the tensors
/// entering the comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub tau: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { tau: DEFAULT_TAU }
    }
}

impl Tolerance {
    pub fn new(tau: f64) -> Self {
        Self { tau }
    }

    pub fn negligible<S: Scalar>(&self, residual: &S) -> bool {
        self.negligible_scaled(residual, 1.0)
    }

    pub fn negligible_scaled<S: Scalar>(&self, residual: &S, scale: f64) -> bool {
        if S::EXACT {
            residual.is_zero()
        } else {
            residual.to_f64().abs() <= self.tau * scale.max(1.0)
        }
    }

    /// Pivot test for elimination: exact zero, or below `tau` in float mode.
    pub fn is_pivot_zero<S: Scalar>(&self, x: &S) -> bool {
        if S::EXACT {
            x.is_zero()
        } else {
            x.to_f64().abs() <= self.tau
        }
    }
}

/// Max-abs norm of a slice of scalars.
pub fn max_abs<'a, S: Scalar>(values: impl IntoIterator<Item = &'a S>) -> S {
    values
        .into_iter()
        .fold(S::zero(), |acc, v| S::max_of(acc, v.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn parses_exact_literals() {
        assert_eq!(parse_exact("1/4"), Some(q(1, 4)));
        assert_eq!(parse_exact("-3"), Some(q(-3, 1)));
        assert_eq!(parse_exact("0.25"), Some(q(1, 4)));
        assert_eq!(parse_exact("-1.5e-1"), Some(q(-3, 20)));
        assert_eq!(parse_exact("2e2"), Some(q(200, 1)));
        assert_eq!(parse_exact("1/0"), None);
        assert_eq!(parse_exact("abc"), None);
        assert_eq!(parse_exact("."), None);
    }

    #[test]
    fn repr_round_trips() {
        for s in ["1/4", "-7/3", "0", "12"] {
            let v = Rational::parse_repr(s).unwrap();
            assert_eq!(v.to_repr(), s);
        }
        for v in [0.1f64, -2.5, 1e-12, 3.0] {
            assert_eq!(f64::parse_repr(&v.to_repr()), Some(v));
        }
        assert_eq!((-0.0f64).to_repr(), "0");
    }

    #[test]
    fn tolerance_modes() {
        let tol = Tolerance::default();
        assert!(tol.negligible(&1e-12f64));
        assert!(!tol.negligible(&1e-6f64));
        assert!(tol.negligible_scaled(&1e-7f64, 1e3));
        assert!(!tol.negligible(&q(1, 1_000_000_000_000)));
        assert!(tol.negligible(&q(0, 1)));
    }

    #[test]
    fn literal_kind() {
        assert!(is_rational_literal("-1/4"));
        assert!(is_rational_literal("3"));
        assert!(!is_rational_literal("0.5"));
        assert!(!is_rational_literal("1e3"));
    }
}
