//! Values in `Q ∪ {∞}`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

/// Builds the rational `n / d`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"a"` or `"a/b"` into a reduced rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).ok()?;
            let d = BigInt::from_str(d.trim()).ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => BigInt::from_str(s).ok().map(Rational::from_integer),
    }
}

/// Formats a rational as `n` or `n/d`.
pub fn fmt_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Least common multiple of the denominators, as a positive integer.
pub fn lcm_denominators<'a>(qs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    qs.into_iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

/// An element of `Q ∪ {∞}`. `Infinity` is larger than every finite value.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Value {
    Finite(Rational),
    Infinity,
}

impl Value {
    pub fn zero() -> Self {
        Value::Finite(Rational::zero())
    }

    pub fn int(n: i64) -> Self {
        Value::Finite(Rational::from_integer(BigInt::from(n)))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Value::Finite(rat(n, d))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Value::Infinity)
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Value::Finite(q) => Some(q),
            Value::Infinity => None,
        }
    }

    /// The finite rational; panics on `Infinity`.
    pub fn expect_finite(&self) -> &Rational {
        self.finite().expect("finite value expected")
    }

    /// Multiplication by a nonnegative integer. `0·∞` is taken to be `0`.
    pub fn times(&self, n: u64) -> Value {
        match self {
            Value::Finite(q) => Value::Finite(q * BigInt::from(n)),
            Value::Infinity if n == 0 => Value::zero(),
            Value::Infinity => Value::Infinity,
        }
    }

    pub fn min(self, other: Value) -> Value {
        if self <= other {
            self
        } else {
            other
        }
    }
}

impl PartialOrd for Value {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Value {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Value::Infinity, Value::Infinity) => Ordering::Equal,
            (Value::Infinity, _) => Ordering::Greater,
            (_, Value::Infinity) => Ordering::Less,
            (Value::Finite(a), Value::Finite(b)) => a.cmp(b),
        }
    }
}

impl Add for Value {
    type Output = Value;
    fn add(self, rhs: Value) -> Value {
        &self + &rhs
    }
}

impl<'a> Add<&'a Value> for &'a Value {
    type Output = Value;
    fn add(self, rhs: &Value) -> Value {
        match (self, rhs) {
            (Value::Finite(a), Value::Finite(b)) => Value::Finite(a + b),
            _ => Value::Infinity,
        }
    }
}

impl Add<Rational> for Value {
    type Output = Value;
    fn add(self, rhs: Rational) -> Value {
        match self {
            Value::Finite(a) => Value::Finite(a + rhs),
            Value::Infinity => Value::Infinity,
        }
    }
}

/// Subtraction of a finite value; `∞ - a = ∞`.
impl Sub<&Rational> for &Value {
    type Output = Value;
    fn sub(self, rhs: &Rational) -> Value {
        match self {
            Value::Finite(a) => Value::Finite(a - rhs),
            Value::Infinity => Value::Infinity,
        }
    }
}

impl Mul<&Rational> for &Value {
    type Output = Value;
    fn mul(self, rhs: &Rational) -> Value {
        assert!(!rhs.is_negative(), "values scale only by nonnegative factors");
        match self {
            Value::Finite(a) => Value::Finite(a * rhs),
            Value::Infinity if rhs.is_zero() => Value::zero(),
            Value::Infinity => Value::Infinity,
        }
    }
}

impl Neg for &Value {
    type Output = Value;
    fn neg(self) -> Value {
        match self {
            Value::Finite(a) => Value::Finite(-a),
            Value::Infinity => panic!("cannot negate infinity"),
        }
    }
}

impl From<Rational> for Value {
    fn from(q: Rational) -> Self {
        Value::Finite(q)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Finite(q) => f.write_str(&fmt_rational(q)),
            Value::Infinity => f.write_str("infinity"),
        }
    }
}

impl FromStr for Value {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("infinity") || t == "inf" || t == "∞" {
            return Ok(Value::Infinity);
        }
        parse_rational(t)
            .map(Value::Finite)
            .ok_or_else(|| format!("not a value: {s:?}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinity_is_top() {
        assert!(Value::Infinity > Value::int(1_000_000));
        assert_eq!(Value::Infinity + Value::frac(1, 2), Value::Infinity);
        assert_eq!(Value::frac(1, 2) + Value::frac(1, 3), Value::frac(5, 6));
    }

    #[test]
    fn parse_and_print() {
        assert_eq!("3/6".parse::<Value>().unwrap().to_string(), "1/2");
        assert_eq!("infinity".parse::<Value>().unwrap(), Value::Infinity);
        assert_eq!(Value::int(-2).to_string(), "-2");
        assert!("1/0".parse::<Value>().is_err());
    }

    #[test]
    fn scalar_multiples() {
        assert_eq!(Value::frac(1, 3).times(3), Value::int(1));
        assert_eq!(Value::Infinity.times(0), Value::zero());
    }
}
