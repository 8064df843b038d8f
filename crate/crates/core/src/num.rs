//! Exact scalars and the extended cone coordinate.

use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub use num_rational::BigRational as Rational;

/// Builds the rational `n/d`. Panics if `d == 0`.
pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Builds the integer `n` as a rational.
pub fn qi(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn half(x: &Rational) -> Rational {
    x / qi(2)
}

pub fn is_positive(x: &Rational) -> bool {
    x.is_positive()
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Smallest integer `n` with `n >= x`.
pub fn ceil_int(x: &Rational) -> i64 {
    let c = x.ceil();
    i64::try_from(c.to_integer()).unwrap_or(i64::MAX)
}

/// Largest integer `n` with `n <= x`.
pub fn floor_int(x: &Rational) -> i64 {
    let f = x.floor();
    i64::try_from(f.to_integer()).unwrap_or(i64::MIN)
}

/// Formats a rational as `p/q` (or `p` for integers).
pub struct Pq<'a>(pub &'a Rational);

impl fmt::Display for Pq<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

/// A cone level: a rational, or the symbol `∞` standing for the vertex.
///
/// Ordering is total with every finite value below `∞`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtendedLevel {
    Finite(Rational),
    Infinity,
}

impl ExtendedLevel {
    pub fn finite(value: Rational) -> Self {
        ExtendedLevel::Finite(value)
    }

    pub fn int(n: i64) -> Self {
        ExtendedLevel::Finite(qi(n))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        ExtendedLevel::Finite(q(n, d))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtendedLevel::Infinity)
    }

    pub fn as_finite(&self) -> Option<&Rational> {
        match self {
            ExtendedLevel::Finite(v) => Some(v),
            ExtendedLevel::Infinity => None,
        }
    }

    /// Translation by a rational; `∞` is fixed.
    pub fn shifted(&self, by: &Rational) -> Self {
        match self {
            ExtendedLevel::Finite(v) => ExtendedLevel::Finite(v + by),
            ExtendedLevel::Infinity => ExtendedLevel::Infinity,
        }
    }
}

impl From<Rational> for ExtendedLevel {
    fn from(v: Rational) -> Self {
        ExtendedLevel::Finite(v)
    }
}

impl PartialOrd for ExtendedLevel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtendedLevel {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtendedLevel::Finite(a), ExtendedLevel::Finite(b)) => a.cmp(b),
            (ExtendedLevel::Finite(_), ExtendedLevel::Infinity) => Ordering::Less,
            (ExtendedLevel::Infinity, ExtendedLevel::Finite(_)) => Ordering::Greater,
            (ExtendedLevel::Infinity, ExtendedLevel::Infinity) => Ordering::Equal,
        }
    }
}

impl fmt::Display for ExtendedLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedLevel::Finite(v) => write!(f, "{}", Pq(v)),
            ExtendedLevel::Infinity => f.write_str("inf"),
        }
    }
}

/// Parses `p/q`, `p`, or `inf`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

pub fn parse_level(s: &str) -> Option<ExtendedLevel> {
    match s.trim() {
        "inf" | "∞" => Some(ExtendedLevel::Infinity),
        other => parse_rational(other).map(ExtendedLevel::Finite),
    }
}
