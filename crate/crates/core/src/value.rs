//! Set-function values: exact rationals or doubles.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Comparison tolerance applied whenever a float-backed value is involved.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// The value of a set function at one subset.
///
/// Exact values are kept in lowest terms with a positive denominator (the
/// `BigRational` invariant). Arithmetic mixing an exact and an approximate
/// value yields an approximate one.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Exact(Rational),
    Approx(f64),
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

impl Value {
    pub fn zero() -> Self {
        Value::Exact(Rational::zero())
    }

    pub fn one() -> Self {
        Value::Exact(Rational::one())
    }

    pub fn integer(v: i64) -> Self {
        Value::Exact(Rational::from_integer(v.into()))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Value::Exact(ratio(num, den))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Value::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Value::Exact(r) => Some(r),
            Value::Approx(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Value::Approx(v) => *v,
        }
    }

    /// Compares two values, exactly when both are exact and otherwise with
    /// absolute tolerance `tau`.
    pub fn compare(&self, other: &Value, tau: f64) -> Ordering {
        match (self, other) {
            (Value::Exact(a), Value::Exact(b)) => a.cmp(b),
            _ => {
                let d = self.to_f64() - other.to_f64();
                if d > tau {
                    Ordering::Greater
                } else if d < -tau {
                    Ordering::Less
                } else {
                    Ordering::Equal
                }
            }
        }
    }

    /// Sign relative to zero under [`Value::compare`].
    pub fn signum(&self, tau: f64) -> Ordering {
        self.compare(&Value::zero(), tau)
    }

    pub fn abs(&self) -> Value {
        match self {
            Value::Exact(r) => Value::Exact(r.abs()),
            Value::Approx(v) => Value::Approx(v.abs()),
        }
    }
}

impl From<Rational> for Value {
    fn from(r: Rational) -> Self {
        Value::Exact(r)
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Approx(v)
    }
}

impl From<i64> for Value {
    fn from(v: i64) -> Self {
        Value::integer(v)
    }
}

fn combine(
    a: &Value,
    b: &Value,
    exact: impl Fn(&Rational, &Rational) -> Rational,
    approx: impl Fn(f64, f64) -> f64,
) -> Value {
    match (a, b) {
        (Value::Exact(x), Value::Exact(y)) => Value::Exact(exact(x, y)),
        _ => Value::Approx(approx(a.to_f64(), b.to_f64())),
    }
}

impl Add for &Value {
    type Output = Value;
    fn add(self, rhs: &Value) -> Value {
        combine(self, rhs, |x, y| x + y, |x, y| x + y)
    }
}

impl Sub for &Value {
    type Output = Value;
    fn sub(self, rhs: &Value) -> Value {
        combine(self, rhs, |x, y| x - y, |x, y| x - y)
    }
}

impl Add for Value {
    type Output = Value;
    fn add(self, rhs: Value) -> Value {
        &self + &rhs
    }
}

impl Sub for Value {
    type Output = Value;
    fn sub(self, rhs: Value) -> Value {
        &self - &rhs
    }
}

impl Neg for Value {
    type Output = Value;
    fn neg(self) -> Value {
        match self {
            Value::Exact(r) => Value::Exact(-r),
            Value::Approx(v) => Value::Approx(-v),
        }
    }
}

impl Neg for &Value {
    type Output = Value;
    fn neg(self) -> Value {
        -self.clone()
    }
}

/// Formats a double with 17 significant digits.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Exact values print as `p/q` (integers too, e.g. `1/1`); approximate values
/// print in scientific notation with 17 significant digits.
impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Value::Approx(v) => f.write_str(&format_f64(*v)),
        }
    }
}

/// Parses `p/q`, plain decimals (`-0.25`, `3`) as exact rationals; anything
/// else that parses as a finite `f64` (exponent notation) is approximate.
impl FromStr for Value {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p: BigInt = p
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
            let q: BigInt = q
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            return Ok(Value::Exact(Rational::new(p, q)));
        }
        if let Some(r) = parse_decimal(s) {
            return Ok(Value::Exact(r));
        }
        match s.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(Value::Approx(v)),
            _ => Err(Error::Parse(format!("not a number: {s:?}"))),
        }
    }
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (neg, body) = match s.as_bytes().first()? {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("0{int}{frac}").parse().ok()?;
    let scale = num_traits::pow(BigInt::from(10), frac.len());
    let r = Rational::new(digits, scale);
    Some(if neg { -r } else { r })
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Value {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
