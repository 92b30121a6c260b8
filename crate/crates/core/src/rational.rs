//! Exact rationals and extended exponents.
//!
//! Every numeric input of the library is an arbitrary precision fraction.
//! Text form is `"a/b"` or `"a"`; exponents additionally accept `"inf"` and
//! `"-inf"`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || Error::parse(text, "expected a rational \"a/b\" or integer \"a\"");
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::parse(text, "zero denominator"));
    }
    Ok(Rational::new(n, d))
}

pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // numerator/denominator too large for a direct conversion
        let shift = r.numer().bits().max(r.denom().bits()) as i64 - 1000;
        let scaled = if shift > 0 {
            Rational::new(r.numer() >> shift as usize, r.denom() >> shift as usize)
        } else {
            r.clone()
        };
        scaled.to_f64().unwrap_or(f64::NAN)
    })
}

/// Exact rational value of a finite `f64`.
pub fn from_f64(x: f64) -> Rational {
    Rational::from_float(x).expect("finite float")
}

pub fn floor_int(r: &Rational) -> BigInt {
    r.floor().to_integer()
}

pub fn ceil_int(r: &Rational) -> BigInt {
    r.ceil().to_integer()
}

pub fn pow_int(r: &Rational, e: i32) -> Rational {
    num_traits::pow::Pow::pow(r, e)
}

/// Exponent in `ℚ ∪ {±∞}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Exponent {
    Finite(Rational),
    PosInf,
    NegInf,
}

impl Exponent {
    pub fn finite(r: Rational) -> Self {
        Exponent::Finite(r)
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Exponent::Finite(rat(n, d))
    }

    pub fn as_finite(&self) -> Option<&Rational> {
        match self {
            Exponent::Finite(r) => Some(r),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Exponent::Finite(r) if r.is_zero())
    }

    /// Validates `p ≥ 1` and finite, the only exponents used for p-combinations.
    pub fn check_p(&self) -> Result<&Rational> {
        match self {
            Exponent::Finite(p) if p >= &Rational::one() => Ok(p),
            Exponent::Finite(_) => Err(Error::invalid("p", "p must satisfy p >= 1")),
            _ => Err(Error::invalid("p", "p must be a finite rational >= 1")),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Exponent::Finite(r) => to_f64(r),
            Exponent::PosInf => f64::INFINITY,
            Exponent::NegInf => f64::NEG_INFINITY,
        }
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        use std::cmp::Ordering::*;
        Some(match (self, other) {
            (Exponent::Finite(a), Exponent::Finite(b)) => a.cmp(b),
            (a, b) if a == b => Equal,
            (Exponent::NegInf, _) | (_, Exponent::PosInf) => Less,
            (Exponent::PosInf, _) | (_, Exponent::NegInf) => Greater,
        })
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(r) => f.write_str(&format_rational(r)),
            Exponent::PosInf => f.write_str("inf"),
            Exponent::NegInf => f.write_str("-inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "+inf" => Ok(Exponent::PosInf),
            "-inf" => Ok(Exponent::NegInf),
            other => parse_rational(other).map(Exponent::Finite),
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Rational` fields written as `"a/b"` text.
pub mod text {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// `p = r/s` in lowest terms as machine integers.
pub fn small_ratio(p: &Rational) -> Result<(u32, u32)> {
    let r = p.numer().to_u32();
    let s = p.denom().to_u32();
    match (r, s) {
        (Some(r), Some(s)) if r <= 64 && s <= 64 => Ok((r, s)),
        _ => Err(Error::invalid(
            "p",
            "numerator and denominator of p must not exceed 64",
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_formats() {
        assert_eq!(parse_rational("6/4").unwrap(), rat(3, 2));
        assert_eq!(parse_rational(" -7 ").unwrap(), int(-7));
        assert!(parse_rational("1.5").is_err());
        assert!(parse_rational("1/0").is_err());
        assert_eq!(format_rational(&rat(-3, 6)), "-1/2");
        assert_eq!(format_rational(&int(4)), "4");
    }

    #[test]
    fn exponent_text_and_order() {
        let e: Exponent = "inf".parse().unwrap();
        assert_eq!(e, Exponent::PosInf);
        assert_eq!("-inf".parse::<Exponent>().unwrap(), Exponent::NegInf);
        assert!(Exponent::NegInf < Exponent::from_ratio(-5, 1));
        assert!(Exponent::from_ratio(3, 2) < Exponent::PosInf);
        assert_eq!(Exponent::from_ratio(2, 4).to_string(), "1/2");
    }

    #[test]
    fn huge_to_f64() {
        let big = Rational::new(BigInt::from(3) << 3000usize, BigInt::from(2) << 3000usize);
        assert!((to_f64(&big) - 1.5).abs() < 1e-12);
    }
}
