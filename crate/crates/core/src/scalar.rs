//! Number types shared by every module.
//!
//! Reference facts are checked in exact rational arithmetic; optimizer
//! output and irrational constructions (the honeycomb block, `A_d` root
//! lattices, rotated bases) live in `f64`. Algorithms are written once
//! against [`Scalar`] and compare values through [`Scalar::approx_eq`],
//! which is exact equality for rationals and a relative tolerance for floats.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};

/// Exact rational number.
pub type Rational = BigRational;

/// Tolerance used for every float comparison (orthogonality, residuals,
/// norm shells, integrality of coefficients).
pub const FLOAT_TOL: f64 = 1e-9;

pub trait Scalar:
    Num + Signed + Clone + PartialOrd + Debug + Display + FromPrimitive + Send + Sync + 'static
{
    /// Whether comparisons are exact.
    const EXACT: bool;

    fn approx_eq(&self, other: &Self) -> bool;

    fn approx_zero(&self) -> bool;

    fn to_f64(&self) -> f64;

    /// Nearest integer (ties away from zero).
    fn round_i64(&self) -> i64;

    /// `Some(n)` iff the value is an integer (within tolerance for floats).
    fn as_integer(&self) -> Option<i64>;

    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("integer conversion")
    }

    /// `a <= b` up to the comparison tolerance.
    fn approx_le(&self, other: &Self) -> bool {
        self <= other || self.approx_eq(other)
    }

    /// Render for reports: `p/q` for rationals, 12 significant digits for floats.
    fn to_text(&self) -> String;

    /// Converts a parsed number; rationals reject float syntax.
    fn from_number(n: &Number) -> Option<Self>;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn approx_eq(&self, other: &Self) -> bool {
        let scale = 1f64.max(self.abs()).max(other.abs());
        (self - other).abs() <= FLOAT_TOL * scale
    }

    fn approx_zero(&self) -> bool {
        self.abs() <= FLOAT_TOL
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn round_i64(&self) -> i64 {
        self.round() as i64
    }

    fn as_integer(&self) -> Option<i64> {
        let r = self.round();
        if (self - r).abs() <= FLOAT_TOL * 1f64.max(self.abs()) {
            Some(r as i64)
        } else {
            None
        }
    }

    fn to_text(&self) -> String {
        fmt_sig(*self, 12)
    }

    fn from_number(n: &Number) -> Option<Self> {
        Some(n.to_f64())
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn approx_eq(&self, other: &Self) -> bool {
        self == other
    }

    fn approx_zero(&self) -> bool {
        self.is_zero()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn round_i64(&self) -> i64 {
        self.round().to_integer().to_i64().expect("rounded value fits i64")
    }

    fn as_integer(&self) -> Option<i64> {
        if self.is_integer() {
            self.to_integer().to_i64()
        } else {
            None
        }
    }

    fn to_text(&self) -> String {
        format!("{}", self)
    }

    fn from_number(n: &Number) -> Option<Self> {
        match n {
            Number::Exact(q) => Some(q.clone()),
            Number::Float(_) => None,
        }
    }
}

/// `p/q` as an exact rational.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int<S: Scalar>(n: i64) -> S {
    S::from_int(n)
}

/// Parses `p/q`, an integer, or (returning `None` in the first slot) a decimal.
///
/// Returns the exact value when the token is rational syntax, otherwise the
/// float value. `Err` carries a short description.
pub fn parse_number(token: &str) -> Result<Number, String> {
    if let Some((p, q)) = token.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| format!("bad numerator in '{token}'"))?;
        let q: BigInt = q.trim().parse().map_err(|_| format!("bad denominator in '{token}'"))?;
        if q.is_zero() {
            return Err(format!("zero denominator in '{token}'"));
        }
        return Ok(Number::Exact(Rational::new(p, q)));
    }
    if let Ok(n) = token.parse::<BigInt>() {
        return Ok(Number::Exact(Rational::from_integer(n)));
    }
    match token.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(Number::Float(x)),
        _ => Err(format!("not a number: '{token}'")),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Number {
    Exact(Rational),
    Float(f64),
}

impl Number {
    pub fn to_f64(&self) -> f64 {
        match self {
            Number::Exact(q) => Scalar::to_f64(q),
            Number::Float(x) => *x,
        }
    }
}

/// Formats `x` with `digits` significant digits, `%g` style.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".to_string() } else { format!("{x}") };
    }
    let exp = x.abs().log10().floor() as i32;
    let s = format!("{:.*e}", digits.saturating_sub(1), x);
    // Re-read the exponent after rounding (9.99..e2 may round to 1.0e3).
    let exp = s
        .rsplit_once('e')
        .and_then(|(_, e)| e.parse::<i32>().ok())
        .unwrap_or(exp);
    if exp < -5 || exp >= digits as i32 {
        let (mant, _) = s.split_once('e').unwrap();
        let mant = trim_zeros(mant);
        return format!("{mant}e{exp}");
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, x)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
