//! Exact rational scalars and the extended line used by growth exponents.

use crate::error::{GibbsError, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

pub type Rat = BigRational;

/// Rational from a machine-integer fraction.
pub fn rat(num: i64, den: i64) -> Rat {
    assert!(den != 0, "zero denominator");
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(num: i64) -> Rat {
    Rat::from(BigInt::from(num))
}

pub fn to_f64(x: &Rat) -> f64 {
    x.to_f64().expect("rational out of f64 range")
}

/// Parses `"p/q"`, integer, or finite decimal notation. The minus sign may
/// be ASCII `-` or U+2212.
pub fn parse_rational(s: &str) -> Result<Rat> {
    let cleaned: String = s.trim().replace('\u{2212}', "-");
    let bad = || GibbsError::InvalidConfig(format!("cannot parse rational from {s:?}"));
    if cleaned.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = cleaned.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| bad())?;
        let d: BigInt = den.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((int_part, frac_part)) = cleaned.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int_part.starts_with('-');
        let int_digits = int_part.strip_prefix('-').unwrap_or(int_part);
        let int_digits = if int_digits.is_empty() { "0" } else { int_digits };
        let joined = format!("{int_digits}{frac_part}");
        let n: BigInt = joined.parse().map_err(|_| bad())?;
        let d = BigInt::from(10u32).pow(frac_part.len() as u32);
        let v = Rat::new(n, d);
        return Ok(if negative { -v } else { v });
    }
    let n: BigInt = cleaned.parse().map_err(|_| bad())?;
    Ok(Rat::from(n))
}

/// Renders without spaces, `p/q` for non-integers.
pub fn format_rational(x: &Rat) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// `[0, +inf]`-valued quantities: growth exponents and integrability
/// thresholds where an unsatisfiable constraint set yields infinity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtRational {
    Finite(Rat),
    PosInfinity,
}

impl ExtRational {
    pub fn finite(x: Rat) -> Self {
        ExtRational::Finite(x)
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtRational::Finite(_))
    }

    pub fn as_finite(&self) -> Option<&Rat> {
        match self {
            ExtRational::Finite(x) => Some(x),
            ExtRational::PosInfinity => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExtRational::Finite(x) => to_f64(x),
            ExtRational::PosInfinity => f64::INFINITY,
        }
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }
}

impl From<Rat> for ExtRational {
    fn from(x: Rat) -> Self {
        ExtRational::Finite(x)
    }
}

impl PartialOrd for ExtRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtRational {
    fn cmp(&self, other: &Self) -> Ordering {
        use ExtRational::*;
        match (self, other) {
            (PosInfinity, PosInfinity) => Ordering::Equal,
            (PosInfinity, Finite(_)) => Ordering::Greater,
            (Finite(_), PosInfinity) => Ordering::Less,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

impl Add for ExtRational {
    type Output = ExtRational;
    fn add(self, rhs: Self) -> Self {
        use ExtRational::*;
        match (self, rhs) {
            (Finite(a), Finite(b)) => Finite(a + b),
            _ => PosInfinity,
        }
    }
}

impl Sub<Rat> for ExtRational {
    type Output = ExtRational;
    fn sub(self, rhs: Rat) -> Self {
        match self {
            ExtRational::Finite(a) => ExtRational::Finite(a - rhs),
            ExtRational::PosInfinity => ExtRational::PosInfinity,
        }
    }
}

impl Mul<Rat> for ExtRational {
    type Output = ExtRational;
    /// Scaling by a strictly positive rational; keeps infinity absorbing.
    fn mul(self, rhs: Rat) -> Self {
        assert!(rhs.is_positive(), "extended scaling needs a positive factor");
        match self {
            ExtRational::Finite(a) => ExtRational::Finite(a * rhs),
            ExtRational::PosInfinity => ExtRational::PosInfinity,
        }
    }
}

impl Div<Rat> for ExtRational {
    type Output = ExtRational;
    fn div(self, rhs: Rat) -> Self {
        assert!(rhs.is_positive(), "extended division needs a positive divisor");
        match self {
            ExtRational::Finite(a) => ExtRational::Finite(a / rhs),
            ExtRational::PosInfinity => ExtRational::PosInfinity,
        }
    }
}

impl Neg for ExtRational {
    type Output = ExtRational;
    fn neg(self) -> Self {
        match self {
            ExtRational::Finite(a) => ExtRational::Finite(-a),
            ExtRational::PosInfinity => panic!("negating +infinity"),
        }
    }
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRational::Finite(x) => write!(f, "{}", format_rational(x)),
            ExtRational::PosInfinity => write!(f, "inf"),
        }
    }
}

pub fn one() -> Rat {
    Rat::one()
}

pub fn zero() -> Rat {
    Rat::zero()
}
