//! Rational interval enclosures of real numbers.
//!
//! Irrational quantities (p-th roots, fractional powers) are carried as
//! `[lo, hi]` with rational endpoints. Precision is expressed in bits of
//! relative width; comparisons that do not separate are retried at a finer
//! precision by [`decide`].

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::rational::{format_rational, pow_int, to_f64, Rational};

/// Relative width `2^-110 ≈ 7.7e-34`.
pub const DEFAULT_BITS: u32 = 110;
/// Relative width `2^-1000 ≈ 9.3e-302`; comparisons give up beyond this.
pub const MAX_BITS: u32 = 1000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifiedReal {
    lo: Rational,
    hi: Rational,
}

impl CertifiedReal {
    pub fn exact(r: Rational) -> Self {
        CertifiedReal {
            lo: r.clone(),
            hi: r,
        }
    }

    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "enclosure with lo > hi");
        CertifiedReal { lo, hi }
    }

    pub fn zero() -> Self {
        Self::exact(Rational::zero())
    }

    pub fn one() -> Self {
        Self::exact(Rational::one())
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn exact_value(&self) -> Option<&Rational> {
        self.is_exact().then_some(&self.lo)
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn width_f64(&self) -> f64 {
        to_f64(&self.width())
    }

    pub fn mid(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2.into())
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.mid())
    }

    pub fn contains(&self, r: &Rational) -> bool {
        &self.lo <= r && r <= &self.hi
    }

    pub fn is_nonneg(&self) -> bool {
        !self.lo.is_negative()
    }

    pub fn add(&self, o: &Self) -> Self {
        CertifiedReal {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        CertifiedReal {
            lo: &self.lo - &o.hi,
            hi: &self.hi - &o.lo,
        }
    }

    pub fn neg(&self) -> Self {
        CertifiedReal {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let a = &self.lo * c;
        let b = &self.hi * c;
        if c.is_negative() {
            CertifiedReal { lo: b, hi: a }
        } else {
            CertifiedReal { lo: a, hi: b }
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_nonneg() && o.is_nonneg() {
            return CertifiedReal {
                lo: &self.lo * &o.lo,
                hi: &self.hi * &o.hi,
            };
        }
        let c = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        CertifiedReal { lo, hi }
    }

    /// Division by an enclosure that excludes zero.
    pub fn div(&self, o: &Self) -> Self {
        assert!(
            o.lo.is_positive() || o.hi.is_negative(),
            "division by an enclosure containing zero"
        );
        let inv = CertifiedReal {
            lo: o.hi.recip(),
            hi: o.lo.recip(),
        };
        self.mul(&inv)
    }

    pub fn max(&self, o: &Self) -> Self {
        CertifiedReal {
            lo: (&self.lo).max(&o.lo).clone(),
            hi: (&self.hi).max(&o.hi).clone(),
        }
    }

    pub fn min(&self, o: &Self) -> Self {
        CertifiedReal {
            lo: (&self.lo).min(&o.lo).clone(),
            hi: (&self.hi).min(&o.hi).clone(),
        }
    }

    /// Smallest enclosure containing both.
    pub fn hull(&self, o: &Self) -> Self {
        CertifiedReal {
            lo: (&self.lo).min(&o.lo).clone(),
            hi: (&self.hi).max(&o.hi).clone(),
        }
    }

    /// Integer power of a nonnegative enclosure.
    pub fn powi(&self, e: i32) -> Self {
        assert!(self.is_nonneg(), "powi of a possibly negative enclosure");
        if e >= 0 {
            CertifiedReal {
                lo: pow_int(&self.lo, e),
                hi: pow_int(&self.hi, e),
            }
        } else {
            assert!(self.lo.is_positive(), "negative power of zero");
            CertifiedReal {
                lo: pow_int(&self.hi, e),
                hi: pow_int(&self.lo, e),
            }
        }
    }

    /// `self^(1/k)` for a nonnegative enclosure.
    pub fn root(&self, k: u32, bits: u32) -> Self {
        assert!(self.is_nonneg(), "root of a possibly negative enclosure");
        if self.is_exact() {
            return root_rational(&self.lo, k, bits);
        }
        let lo = root_rational(&self.lo, k, bits).lo;
        let hi = root_rational(&self.hi, k, bits).hi;
        CertifiedReal { lo, hi }
    }

    /// `self^e` for a nonnegative enclosure and rational exponent `e`.
    ///
    /// `0^e` with `e < 0` panics; callers own that convention.
    pub fn pow_rational(&self, e: &Rational, bits: u32) -> Self {
        if e.is_zero() {
            return Self::one();
        }
        let k = u32::try_from(e.denom().clone()).expect("exponent denominator too large");
        let m = i32::try_from(e.numer().clone()).expect("exponent numerator too large");
        if self.is_exact() {
            return root_rational(&pow_int(&self.lo, m), k, bits);
        }
        self.powi(m).root(k, bits)
    }

    /// Rounds the endpoints outward to dyadic rationals with about `bits`
    /// bits of relative precision, keeping the enclosure property.
    pub fn coarsen(&self, bits: u32) -> Self {
        if self.is_exact() && self.lo.denom().bits() < bits as u64 {
            return self.clone();
        }
        let scale_bits = |r: &Rational| -> i64 {
            if r.is_zero() {
                0
            } else {
                r.numer().bits() as i64 - r.denom().bits() as i64
            }
        };
        let mag = scale_bits(&self.lo).max(scale_bits(&self.hi));
        let shift = (bits as i64 - mag + 2).max(0) as usize;
        let den = BigInt::one() << shift;
        let lo = Rational::new((&self.lo * Rational::from_integer(den.clone())).floor().to_integer(), den.clone());
        let hi = Rational::new((&self.hi * Rational::from_integer(den.clone())).ceil().to_integer(), den);
        CertifiedReal { lo, hi }
    }

    /// `Some(ordering)` when the enclosures separate, or both are the same
    /// exact value.
    pub fn cmp_certified(&self, o: &Self) -> Option<Ordering> {
        if self.hi < o.lo {
            Some(Ordering::Less)
        } else if self.lo > o.hi {
            Some(Ordering::Greater)
        } else if self.is_exact() && o.is_exact() && self.lo == o.lo {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn cmp_rational(&self, r: &Rational) -> Option<Ordering> {
        self.cmp_certified(&Self::exact(r.clone()))
    }

    /// Decimal rendering `[lo, hi]` with `digits` fractional digits, rounded
    /// outward; exact values print as a single rational.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        if let Some(v) = self.exact_value() {
            return format_rational(v);
        }
        format!(
            "[{}, {}]",
            decimal(&self.lo, digits, false),
            decimal(&self.hi, digits, true)
        )
    }
}

impl From<Rational> for CertifiedReal {
    fn from(r: Rational) -> Self {
        CertifiedReal::exact(r)
    }
}

impl fmt::Display for CertifiedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string(12))
    }
}

/// Decimal rendering of a rational with `digits` fractional digits, rounded
/// down or up.
pub fn decimal(r: &Rational, digits: usize, up: bool) -> String {
    let scale = Rational::from_integer(BigInt::from(10).pow(digits as u32));
    let scaled = r * scale;
    let n = if up { scaled.ceil() } else { scaled.floor() }.to_integer();
    let neg = n.is_negative();
    let s = n.abs().to_string();
    let s = if s.len() <= digits {
        format!("{}{}", "0".repeat(digits + 1 - s.len()), s)
    } else {
        s
    };
    let (ip, fp) = s.split_at(s.len() - digits);
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{ip}")
    } else {
        format!("{sign}{ip}.{fp}")
    }
}

fn exact_int_root(n: &BigInt, k: u32) -> Option<BigInt> {
    let r = n.nth_root(k);
    (num_traits::pow(r.clone(), k as usize) == *n).then_some(r)
}

/// Enclosure of `x^(1/k)` for rational `x ≥ 0`, exact when `x` is a perfect
/// `k`-th power.
pub fn root_rational(x: &Rational, k: u32, bits: u32) -> CertifiedReal {
    assert!(!x.is_negative(), "root of a negative rational");
    assert!(k >= 1);
    if k == 1 || x.is_zero() {
        return CertifiedReal::exact(x.clone());
    }
    if let (Some(n), Some(d)) = (exact_int_root(x.numer(), k), exact_int_root(x.denom(), k)) {
        return CertifiedReal::exact(Rational::new(n, d));
    }
    // floor((x * 2^(k*B))^(1/k)) / 2^B brackets the root to 2^-B absolute.
    let mag = (x.numer().bits() as i64 - x.denom().bits() as i64) / k as i64;
    let b = (bits as i64 - mag + 2).max(0) as usize;
    let scaled = (x.numer() << (k as usize * b)) / x.denom();
    let r = scaled.nth_root(k);
    let den = BigInt::one() << b;
    CertifiedReal {
        lo: Rational::new(r.clone(), den.clone()),
        hi: Rational::new(r + 1, den),
    }
}

/// Enclosure of `Π baseᵢ^(eᵢ)` for nonnegative rational bases, evaluated as a
/// single root so that exact results are recognised.
pub fn pow_product(terms: &[(&Rational, &Rational)], bits: u32) -> CertifiedReal {
    use num_integer::Integer;
    let k = terms
        .iter()
        .fold(BigInt::one(), |acc, (_, e)| acc.lcm(e.denom()));
    let k32 = u32::try_from(k.clone()).expect("exponent denominator too large");
    let mut prod = Rational::one();
    for (b, e) in terms {
        if e.is_zero() {
            continue;
        }
        if b.is_zero() {
            assert!(e.is_positive(), "negative power of zero");
            return CertifiedReal::zero();
        }
        let m = (*e * Rational::from_integer(k.clone())).to_integer();
        let m = i32::try_from(m).expect("exponent too large");
        prod *= pow_int(b, m);
    }
    root_rational(&prod, k32, bits)
}

/// Certified comparison with precision escalation.
///
/// `f(bits)` must return enclosures of the two quantities at the requested
/// precision. Returns `None` when they still overlap at [`MAX_BITS`].
pub fn decide<F>(mut f: F) -> Option<Ordering>
where
    F: FnMut(u32) -> (CertifiedReal, CertifiedReal),
{
    let mut bits = 64;
    loop {
        let (a, b) = f(bits);
        if let Some(o) = a.cmp_certified(&b) {
            return Some(o);
        }
        if bits >= MAX_BITS {
            return None;
        }
        bits = (bits * 2).min(MAX_BITS);
    }
}

impl serde::Serialize for CertifiedReal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("CertifiedReal", 3)?;
        st.serialize_field("lo", &crate::rational::format_rational(&self.lo))?;
        st.serialize_field("hi", &crate::rational::format_rational(&self.hi))?;
        st.serialize_field("approx", &self.to_f64())?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn exact_roots_are_detected() {
        assert_eq!(root_rational(&rat(9, 4), 2, 64), CertifiedReal::exact(rat(3, 2)));
        assert_eq!(root_rational(&int(27), 3, 64), CertifiedReal::exact(int(3)));
    }

    #[test]
    fn sqrt2_enclosure() {
        let r = root_rational(&int(2), 2, DEFAULT_BITS);
        assert!(r.width() < rat(1, 1) / Rational::from_integer(BigInt::from(10).pow(30)));
        assert!(pow_int(r.lo(), 2) <= int(2) && pow_int(r.hi(), 2) >= int(2));
        assert!((r.to_f64() - std::f64::consts::SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn tiny_and_huge_roots() {
        let tiny = rat(1, 1_000_000_007);
        let r = root_rational(&tiny, 3, 80);
        assert!(pow_int(r.lo(), 3) <= tiny && pow_int(r.hi(), 3) >= tiny);
        assert!(r.width_f64() / r.to_f64() < 1e-20);
        let huge = Rational::from_integer(BigInt::from(7) << 500usize);
        let r = root_rational(&huge, 2, 80);
        assert!(r.width_f64() / r.to_f64() < 1e-20);
    }

    #[test]
    fn pow_rational_matches_float() {
        let x = CertifiedReal::exact(int(2));
        let v = x.pow_rational(&rat(5, 3), DEFAULT_BITS);
        assert!((v.to_f64() - 2f64.powf(5.0 / 3.0)).abs() < 1e-14);
        let w = x.pow_rational(&rat(-1, 2), DEFAULT_BITS);
        assert!((w.to_f64() - 0.5f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn decide_escalates_and_detects_equality() {
        let sqrt2 = |b| root_rational(&int(2), 2, b);
        assert_eq!(
            decide(|b| (sqrt2(b).mul(&sqrt2(b)), CertifiedReal::exact(int(2)))),
            None
        );
        assert_eq!(
            decide(|b| (sqrt2(b), CertifiedReal::exact(rat(141421356237, 100000000000)))),
            Some(Ordering::Greater)
        );
        assert_eq!(
            decide(|b| (root_rational(&int(4), 2, b), CertifiedReal::exact(int(2)))),
            Some(Ordering::Equal)
        );
    }

    #[test]
    fn pow_product_is_exact_when_possible() {
        let v = pow_product(&[(&int(4), &rat(2, 3)), (&int(4), &rat(1, 3))], 64);
        assert_eq!(v, CertifiedReal::exact(int(4)));
        let w = pow_product(&[(&int(2), &rat(1, 2)), (&int(3), &rat(1, 3))], 80);
        assert!((w.to_f64() - 2f64.sqrt() * 3f64.cbrt()).abs() < 1e-15);
    }

    #[test]
    fn coarsen_keeps_enclosure() {
        let x = root_rational(&int(3), 2, 400);
        let c = x.coarsen(60);
        assert!(c.lo() <= x.lo() && c.hi() >= x.hi());
        assert!(c.width_f64() < 1e-15);
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal(&rat(-1, 3), 3, false), "-0.334");
        assert_eq!(decimal(&rat(1, 3), 3, true), "0.334");
        assert_eq!(decimal(&rat(5, 2), 0, false), "2");
    }
}
