//! Exact rational helpers and the extended rationals `Q ∪ {+∞}`.

use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn from_uint(n: &BigUint) -> Rational {
    Rational::from_integer(BigInt::from(n.clone()))
}

pub fn from_u64(n: u64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `a`, `-a` or `a/b` with `b > 0`. Surrounding whitespace is ignored.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (text, None),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = match den {
        Some(d) => {
            if d.starts_with('-') || d.starts_with('+') {
                return None;
            }
            d.parse().ok()?
        }
        None => BigInt::one(),
    };
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

/// `"num/den"`, or just `"num"` for integers.
pub fn format_rational(r: &Rational) -> String {
    alloc::format!("{}", r)
}

/// Returns the value as a non-negative integer, if it is one.
pub fn to_uint(r: &Rational) -> Option<BigUint> {
    if r.is_integer() && !r.is_negative() {
        r.to_integer().to_biguint()
    } else {
        None
    }
}

pub fn min_rat(a: Rational, b: Rational) -> Rational {
    if a <= b {
        a
    } else {
        b
    }
}

pub fn max_rat(a: Rational, b: Rational) -> Rational {
    if a >= b {
        a
    } else {
        b
    }
}

/// A rational number or `+∞`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtendedRational {
    Finite(Rational),
    Infinity,
}

impl ExtendedRational {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtendedRational::Finite(r) => Some(r),
            ExtendedRational::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtendedRational::Infinity)
    }

    /// `1/x`, with `1/∞ = 0` and `1/0 = ∞`.
    pub fn recip(&self) -> ExtendedRational {
        match self {
            ExtendedRational::Infinity => ExtendedRational::Finite(Rational::zero()),
            ExtendedRational::Finite(r) if r.is_zero() => ExtendedRational::Infinity,
            ExtendedRational::Finite(r) => ExtendedRational::Finite(r.recip()),
        }
    }

    pub fn cmp_rational(&self, other: &Rational) -> Ordering {
        match self {
            ExtendedRational::Infinity => Ordering::Greater,
            ExtendedRational::Finite(r) => r.cmp(other),
        }
    }
}

impl From<Rational> for ExtendedRational {
    fn from(r: Rational) -> Self {
        ExtendedRational::Finite(r)
    }
}

impl PartialOrd for ExtendedRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtendedRational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtendedRational::Infinity, ExtendedRational::Infinity) => Ordering::Equal,
            (ExtendedRational::Infinity, _) => Ordering::Greater,
            (_, ExtendedRational::Infinity) => Ordering::Less,
            (ExtendedRational::Finite(a), ExtendedRational::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for ExtendedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedRational::Finite(r) => write!(f, "{}", r),
            ExtendedRational::Infinity => f.write_str("inf"),
        }
    }
}
