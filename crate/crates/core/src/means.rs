//! α-sums, α-means, Hölder coefficient pairs and the exponent transform of
//! the Borell–Brascamp–Lieb conclusion.
//!
//! Conventions: `S_α(a, b; t, s) = (t aᵅ + s bᵅ)^(1/α)` for finite `α ≠ 0`,
//! `max`/`min` at `±∞`, and `0` whenever `ab = 0`. The mean `M_α(a, b; λ)`
//! uses weights `(1 − λ, λ)` and is the weighted geometric mean at `α = 0`.

use num_traits::{One, Signed, Zero};

use crate::certified::{pow_product, CertifiedReal};
use crate::error::{Error, Result};
use crate::rational::{Exponent, Rational};

/// Hölder conjugate `q` of `p`, with `q = ∞` for `p = 1`.
pub fn conjugate_exponent(p: &Exponent) -> Result<Exponent> {
    let p = p.check_p()?;
    if p.is_one() {
        Ok(Exponent::PosInf)
    } else {
        Ok(Exponent::Finite(p / (p - Rational::one())))
    }
}

/// `1/q = (p − 1)/p`, which is `0` for `p = 1`.
pub fn inverse_conjugate(p: &Rational) -> Rational {
    (p - Rational::one()) / p
}

fn positivity(x: &CertifiedReal, name: &str) -> Result<bool> {
    if x.lo().is_negative() {
        return Err(Error::invalid(name, "must be nonnegative"));
    }
    if x.exact_value().is_some_and(|v| v.is_zero()) {
        return Ok(false);
    }
    if x.lo().is_zero() {
        return Err(Error::Ambiguous(format!(
            "cannot decide whether {name} is zero"
        )));
    }
    Ok(true)
}

/// `S_α(a, b; t, s)`. Zero coefficients are allowed (the endpoints of the
/// Hölder arc); `α = 0` is rejected.
pub fn alpha_sum(
    a: &CertifiedReal,
    b: &CertifiedReal,
    t: &CertifiedReal,
    s: &CertifiedReal,
    alpha: &Exponent,
    bits: u32,
) -> Result<CertifiedReal> {
    if alpha.is_zero() {
        return Err(Error::invalid("alpha", "alpha = 0 has no alpha-sum; use alpha_mean"));
    }
    if t.lo().is_negative() || s.lo().is_negative() {
        return Err(Error::invalid("t, s", "coefficients must be nonnegative"));
    }
    let a_pos = positivity(a, "a")?;
    let b_pos = positivity(b, "b")?;
    if !a_pos || !b_pos {
        return Ok(CertifiedReal::zero());
    }
    match alpha {
        Exponent::PosInf => Ok(a.max(b)),
        Exponent::NegInf => Ok(a.min(b)),
        Exponent::Finite(al) => {
            let inner = t
                .mul(&a.pow_rational(al, bits))
                .add(&s.mul(&b.pow_rational(al, bits)));
            if inner.lo().is_zero() {
                return Err(Error::invalid("t, s", "coefficients must not both vanish"));
            }
            Ok(inner.pow_rational(&al.recip(), bits))
        }
    }
}

/// Rational-input convenience form of [`alpha_sum`].
pub fn alpha_sum_rational(
    a: &Rational,
    b: &Rational,
    t: &Rational,
    s: &Rational,
    alpha: &Exponent,
    bits: u32,
) -> Result<CertifiedReal> {
    alpha_sum(
        &a.clone().into(),
        &b.clone().into(),
        &t.clone().into(),
        &s.clone().into(),
        alpha,
        bits,
    )
}

fn check_lambda_open(lambda: &Rational) -> Result<()> {
    if lambda.is_positive() && lambda < &Rational::one() {
        Ok(())
    } else {
        Err(Error::invalid("lambda", "lambda must lie in (0, 1)"))
    }
}

/// `M_α(a, b; λ)`.
pub fn alpha_mean(
    a: &CertifiedReal,
    b: &CertifiedReal,
    lambda: &Rational,
    alpha: &Exponent,
    bits: u32,
) -> Result<CertifiedReal> {
    check_lambda_open(lambda)?;
    let one_minus = Rational::one() - lambda;
    if alpha.is_zero() {
        if !positivity(a, "a")? || !positivity(b, "b")? {
            return Ok(CertifiedReal::zero());
        }
        if let (Some(av), Some(bv)) = (a.exact_value(), b.exact_value()) {
            return Ok(pow_product(&[(av, &one_minus), (bv, lambda)], bits));
        }
        return Ok(a
            .pow_rational(&one_minus, bits)
            .mul(&b.pow_rational(lambda, bits)));
    }
    alpha_sum(
        a,
        b,
        &one_minus.into(),
        &lambda.clone().into(),
        alpha,
        bits,
    )
}

pub fn alpha_mean_rational(
    a: &Rational,
    b: &Rational,
    lambda: &Rational,
    alpha: &Exponent,
    bits: u32,
) -> Result<CertifiedReal> {
    alpha_mean(&a.clone().into(), &b.clone().into(), lambda, alpha, bits)
}

/// Exponent `pα/(nα + 1)` of the L_p Borell–Brascamp–Lieb conclusion.
pub fn bbl_exponent(alpha: &Exponent, n: usize, p: &Exponent) -> Result<Exponent> {
    let p = p.check_p()?;
    if n == 0 {
        return Err(Error::invalid("n", "dimension must be positive"));
    }
    let n_r = Rational::from_integer(n.into());
    let floor = -n_r.recip();
    match alpha {
        Exponent::NegInf => Err(Error::invalid("alpha", "alpha must be >= -1/n")),
        Exponent::PosInf => Ok(Exponent::Finite(p / &n_r)),
        Exponent::Finite(a) if a < &floor => Err(Error::invalid("alpha", "alpha must be >= -1/n")),
        Exponent::Finite(a) if *a == floor => Ok(Exponent::NegInf),
        Exponent::Finite(a) => Ok(Exponent::Finite(p * a / (&n_r * a + Rational::one()))),
    }
}

/// Transform `α/(nα + 1)` without the `p` factor (the `(t, s)` form).
pub fn bbl_exponent_ts(alpha: &Exponent, n: usize) -> Result<Exponent> {
    bbl_exponent(alpha, n, &Exponent::Finite(Rational::one()))
}

/// Coefficient pair `t = (1−λ)^(1/p) (1−μ)^(1/q)`, `s = λ^(1/p) μ^(1/q)`.
#[derive(Clone, Debug)]
pub struct HolderPair {
    pub t: CertifiedReal,
    pub s: CertifiedReal,
    pub lambda: Rational,
    pub mu: CertifiedReal,
    pub p: Exponent,
}

impl HolderPair {
    pub fn sum(&self) -> CertifiedReal {
        self.t.add(&self.s)
    }
}

pub fn holder_coefficients(
    lambda: &Rational,
    mu: &Rational,
    p: &Exponent,
    bits: u32,
) -> Result<HolderPair> {
    holder_coefficients_enclosed(lambda, &CertifiedReal::exact(mu.clone()), p, bits)
}

/// [`holder_coefficients`] at a `μ` known only through an enclosure.
pub fn holder_coefficients_enclosed(
    lambda: &Rational,
    mu: &CertifiedReal,
    p: &Exponent,
    bits: u32,
) -> Result<HolderPair> {
    check_lambda_open(lambda)?;
    let pr = p.check_p()?;
    if mu.lo().is_negative() || mu.hi() > &Rational::one() {
        return Err(Error::invalid("mu", "mu must lie in [0, 1]"));
    }
    let one = Rational::one();
    let inv_p = pr.recip();
    let inv_q = inverse_conjugate(pr);
    let one_minus_l = &one - lambda;
    let c1 = root_pow(&one_minus_l, &inv_p, bits);
    let c2 = root_pow(lambda, &inv_p, bits);
    let (t, s) = if pr.is_one() {
        (c1, c2)
    } else if let Some(m) = mu.exact_value() {
        let one_minus_m = &one - m;
        (
            pow_product(&[(&one_minus_l, &inv_p), (&one_minus_m, &inv_q)], bits),
            pow_product(&[(lambda, &inv_p), (m, &inv_q)], bits),
        )
    } else {
        let one_c = CertifiedReal::one();
        (
            c1.mul(&one_c.sub(mu).pow_rational(&inv_q, bits)),
            c2.mul(&mu.pow_rational(&inv_q, bits)),
        )
    };
    Ok(HolderPair {
        t,
        s,
        lambda: lambda.clone(),
        mu: mu.clone(),
        p: p.clone(),
    })
}

fn root_pow(x: &Rational, e: &Rational, bits: u32) -> CertifiedReal {
    if e.is_one() {
        return CertifiedReal::exact(x.clone());
    }
    CertifiedReal::exact(x.clone()).pow_rational(e, bits)
}

/// The `μ₀` that turns the `(t, s)` sum into the `λ`-mean:
/// `μ₀ = λ G^(pβ) / ((1−λ) F^(pβ) + λ G^(pβ))` with `F = Σf`, `G = Σg`.
pub fn optimal_mu0(
    lambda: &Rational,
    p: &Exponent,
    beta: &Exponent,
    sum_f: &Rational,
    sum_g: &Rational,
    bits: u32,
) -> Result<CertifiedReal> {
    check_lambda_open(lambda)?;
    let pr = p.check_p()?;
    let beta = match beta {
        Exponent::Finite(b) if !b.is_zero() => b,
        _ => return Err(Error::invalid("beta", "beta must be finite and nonzero")),
    };
    if !sum_f.is_positive() || !sum_g.is_positive() {
        return Err(Error::invalid("sums", "sums of f and g must be positive"));
    }
    if sum_f == sum_g {
        return Ok(CertifiedReal::exact(lambda.clone()));
    }
    // μ₀ = λ / ((1−λ) (F/G)^(pβ) + λ), one occurrence of the irrational factor.
    let ratio = CertifiedReal::exact(sum_f / sum_g).pow_rational(&(pr * beta), bits);
    let denom = ratio
        .scale(&(Rational::one() - lambda))
        .add(&CertifiedReal::exact(lambda.clone()));
    Ok(CertifiedReal::exact(lambda.clone()).div(&denom))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certified::DEFAULT_BITS;
    use crate::rational::{int, rat};
    use std::cmp::Ordering;

    const B: u32 = DEFAULT_BITS;

    fn ex(n: i64, d: i64) -> Exponent {
        Exponent::from_ratio(n, d)
    }

    #[test]
    fn conjugates() {
        assert_eq!(conjugate_exponent(&ex(2, 1)).unwrap(), ex(2, 1));
        assert_eq!(conjugate_exponent(&ex(1, 1)).unwrap(), Exponent::PosInf);
        assert_eq!(conjugate_exponent(&ex(3, 1)).unwrap(), ex(3, 2));
        assert!(conjugate_exponent(&ex(1, 2)).is_err());
        assert!(conjugate_exponent(&Exponent::PosInf).is_err());
    }

    #[test]
    fn alpha_sum_examples() {
        let half = rat(1, 2);
        let v = alpha_sum_rational(&int(2), &int(3), &half, &half, &ex(2, 1), B).unwrap();
        assert!((v.to_f64() - 6.5f64.sqrt()).abs() < 1e-15);
        assert!(v.width_f64() < 1e-30);
        let z = alpha_sum_rational(&int(5), &int(0), &int(1), &int(1), &ex(2, 1), B).unwrap();
        assert_eq!(z, CertifiedReal::zero());
        let w = alpha_sum_rational(&int(2), &int(2), &int(1), &int(1), &ex(3, 2), B).unwrap();
        assert!((w.to_f64() - 2f64.powf(5.0 / 3.0)).abs() < 1e-14);
        assert!(alpha_sum_rational(&int(1), &int(1), &int(1), &int(1), &ex(0, 1), B).is_err());
        let mx = alpha_sum_rational(&int(1), &int(7), &int(1), &int(1), &Exponent::PosInf, B).unwrap();
        assert_eq!(mx, CertifiedReal::exact(int(7)));
        let zero_inf =
            alpha_sum_rational(&int(0), &int(7), &int(1), &int(1), &Exponent::PosInf, B).unwrap();
        assert_eq!(zero_inf, CertifiedReal::zero());
    }

    #[test]
    fn alpha_mean_examples() {
        for a in [ex(-3, 1), ex(0, 1), ex(1, 2), ex(5, 1), Exponent::PosInf, Exponent::NegInf] {
            let v = alpha_mean_rational(&int(4), &int(4), &rat(1, 3), &a, B).unwrap();
            assert_eq!(v.cmp_rational(&int(4)), Some(Ordering::Equal), "alpha {a}");
        }
        let v = alpha_mean_rational(&int(2), &int(3), &rat(1, 2), &ex(2, 1), B).unwrap();
        assert!((v.to_f64() - 6.5f64.sqrt()).abs() < 1e-15);
        // λ → 0⁺ drives the mean to the first argument
        let small = alpha_mean_rational(&int(1), &int(2), &rat(1, 1_000_000), &ex(2, 1), B).unwrap();
        assert!((small.to_f64() - 1.0).abs() < 2e-6);
        let geo = alpha_mean_rational(&int(1), &int(4), &rat(1, 2), &ex(0, 1), B).unwrap();
        assert_eq!(geo, CertifiedReal::exact(int(2)));
        assert!(alpha_mean_rational(&int(1), &int(4), &rat(5, 4), &ex(1, 1), B).is_err());
    }

    #[test]
    fn bbl_exponent_examples() {
        assert_eq!(bbl_exponent(&ex(-1, 3), 3, &ex(2, 1)).unwrap(), Exponent::NegInf);
        assert_eq!(bbl_exponent(&ex(0, 1), 2, &ex(2, 1)).unwrap(), ex(0, 1));
        assert_eq!(bbl_exponent(&ex(1, 1), 1, &ex(2, 1)).unwrap(), ex(1, 1));
        assert_eq!(bbl_exponent(&Exponent::PosInf, 2, &ex(3, 1)).unwrap(), ex(3, 2));
        assert!(bbl_exponent(&ex(-1, 1), 2, &ex(2, 1)).is_err());
    }

    #[test]
    fn holder_examples() {
        let h = holder_coefficients(&rat(1, 3), &rat(1, 3), &ex(3, 2), B).unwrap();
        assert_eq!(h.sum().cmp_rational(&int(1)), Some(Ordering::Equal));
        let h = holder_coefficients(&rat(1, 2), &int(0), &ex(2, 1), B).unwrap();
        assert!((h.t.to_f64() - 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(h.s, CertifiedReal::zero());
        let h = holder_coefficients(&rat(1, 4), &rat(9, 10), &ex(1, 1), B).unwrap();
        assert_eq!(h.t, CertifiedReal::exact(rat(3, 4)));
        assert_eq!(h.s, CertifiedReal::exact(rat(1, 4)));
        let h = holder_coefficients(&rat(1, 2), &rat(1, 5), &ex(2, 1), B).unwrap();
        assert_eq!(h.sum().cmp_rational(&int(1)), Some(Ordering::Less));
    }

    #[test]
    fn mu0_examples() {
        let m = optimal_mu0(&rat(1, 3), &ex(2, 1), &ex(1, 2), &int(5), &int(5), B).unwrap();
        assert_eq!(m, CertifiedReal::exact(rat(1, 3)));
        // λ=1/2, p=2, β=1/2, Σf=1, Σg=4: pβ = 1 so μ₀ = 2/(1/2 + 2) = 4/5.
        let m = optimal_mu0(&rat(1, 2), &ex(2, 1), &ex(1, 2), &int(1), &int(4), B).unwrap();
        assert_eq!(m, CertifiedReal::exact(rat(4, 5)));
        let h = holder_coefficients_enclosed(&rat(1, 2), &m, &ex(2, 1), B).unwrap();
        let lhs = alpha_sum(&int(1).into(), &int(4).into(), &h.t, &h.s, &ex(1, 2), B).unwrap();
        assert!(lhs.contains(&rat(5, 2)));
        assert!(lhs.width_f64() < 1e-30);
        let tiny = optimal_mu0(&rat(1, 1_000_000), &ex(2, 1), &ex(1, 2), &int(1), &int(4), B).unwrap();
        assert!(tiny.to_f64() < 1e-5);
        assert!(optimal_mu0(&rat(1, 2), &ex(2, 1), &ex(1, 2), &int(0), &int(4), B).is_err());
    }
}
