use std::time::Instant;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
#[cfg(feature = "parallel")]
use rayon::prelude::*;

use super::BITS;
use crate::certified::CertifiedReal;
use crate::error::{Error, Result};
use crate::geometry::{hull2d, p_combo_membership, p_combo_support, MembershipVerdict, PCombo, Point, SetRep};
use crate::rational::{from_f64, Exponent, Rational};
use crate::report::CheckReport;

/// Two-sided 99% normal quantile.
const Z99: f64 = 2.5758293035489004;
const CHUNK: u64 = 4096;

/// Exact volume of a box, interval, planar polygon or finite set.
pub fn exact_volume(set: &SetRep) -> Option<Rational> {
    match set {
        SetRep::FinitePoints { .. } => Some(Rational::zero()),
        SetRep::Interval1D { .. } | SetRep::AxisBox { .. } => {
            let b = set.as_box()?;
            Some(b.iter().map(|iv| if iv.is_empty() { Rational::zero() } else { &iv.hi - &iv.lo }).product())
        }
        SetRep::VPolytope { vertices } => match set.dim() {
            1 => {
                let xs = vertices.iter().map(|v| &v.0[0]);
                Some(xs.clone().max()? - xs.min()?)
            }
            2 => {
                let h = hull2d(vertices);
                let m = h.len();
                let twice: Rational = (0..m)
                    .map(|i| {
                        let (a, b) = (&h[i], &h[(i + 1) % m]);
                        &a.0[0] * &b.0[1] - &b.0[0] * &a.0[1]
                    })
                    .sum();
                Some(twice / Rational::from_integer(2.into()))
            }
            _ => None,
        },
    }
}

/// Hits among samples `[start, end)` of the seeded stream.
fn sample_chunk(combo: &PCombo, bounds: &[(f64, f64)], seed: u64, chunk: u64, count: u64, tol: &Rational) -> Result<(u64, u64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    let (mut hits, mut unsure) = (0, 0);
    for _ in 0..count {
        let z = Point(bounds.iter().map(|(lo, hi)| from_f64(lo + (hi - lo) * rng.gen::<f64>())).collect());
        match p_combo_membership(&z, combo, tol)? {
            MembershipVerdict::Inside => hits += 1,
            MembershipVerdict::Outside => {}
            MembershipVerdict::Ambiguous(_) => unsure += 1,
        }
    }
    Ok((hits, unsure))
}

/// Monte Carlo volume of the combination with a 99% confidence enclosure.
pub fn monte_carlo_volume(combo: &PCombo, samples: u64, seed: u64, tol: &Rational) -> Result<(CertifiedReal, u64, u64)> {
    if samples == 0 {
        return Err(Error::invalid("samples", "need at least one sample"));
    }
    let bounds: Vec<(f64, f64)> = combo
        .bounds()?
        .iter()
        .map(|(lo, hi)| (crate::rational::to_f64(lo), crate::rational::to_f64(hi)))
        .collect();
    let box_vol: f64 = bounds.iter().map(|(lo, hi)| hi - lo).product();
    let chunks: Vec<(u64, u64)> = (0..samples.div_ceil(CHUNK))
        .map(|c| (c, CHUNK.min(samples - c * CHUNK)))
        .collect();
    let run = |&(c, len): &(u64, u64)| sample_chunk(combo, &bounds, seed, c, len, tol);
    #[cfg(feature = "parallel")]
    let parts: Vec<Result<(u64, u64)>> = chunks.par_iter().map(run).collect();
    #[cfg(not(feature = "parallel"))]
    let parts: Vec<Result<(u64, u64)>> = chunks.iter().map(run).collect();
    let (mut hits, mut unsure) = (0u64, 0u64);
    for p in parts {
        let (h, u) = p?;
        hits += h;
        unsure += u;
    }
    let nf = samples as f64;
    let (lo_frac, hi_frac) = (hits as f64 / nf, (hits + unsure) as f64 / nf);
    let spread = |f: f64| Z99 * (f * (1.0 - f) / nf).sqrt().max(0.5 / nf);
    let lo = ((lo_frac - spread(lo_frac)).max(0.0) * box_vol).max(0.0);
    let hi = (hi_frac + spread(hi_frac)).min(1.0) * box_vol;
    Ok((CertifiedReal::new(from_f64(lo), from_f64(hi)), hits, unsure))
}

/// `vol(M_p)^(p/n) ≥ (1−λ) vol(K)^(p/n) + λ vol(L)^(p/n)`; exact in one
/// dimension and when `K = L`, Monte Carlo otherwise.
pub fn check_volume_lpbm(
    k: &SetRep,
    l: &SetRep,
    lambda: &Rational,
    p: &Exponent,
    samples: u64,
    seed: u64,
    tol: &Rational,
) -> Result<CheckReport> {
    let start = Instant::now();
    let combo = PCombo::lambda(k.clone(), l.clone(), lambda.clone(), p.clone())?;
    if !k.is_convex() || !l.is_convex() {
        return Err(Error::invalid("K, L", "volume check needs convex sets"));
    }
    let n = k.dim();
    let (Some(vk), Some(vl)) = (exact_volume(k), exact_volume(l)) else {
        return Err(Error::Unsupported("volume of polytopes in dimension 3 or more".into()));
    };
    let pr = p.check_p()?;
    let e = pr / Rational::from_integer(n.into());
    let pw = |v: &CertifiedReal| v.pow_rational(&e, BITS);
    let rhs = pw(&CertifiedReal::exact(vk.clone()))
        .scale(&(Rational::one() - lambda))
        .add(&pw(&CertifiedReal::exact(vl.clone())).scale(lambda));
    let (vol, method) = if n == 1 {
        let up = p_combo_support(&combo, &Point::from_ints(&[1]))?;
        let down = p_combo_support(&combo, &Point::from_ints(&[-1]))?;
        (up.add(&down), "exact".to_string())
    } else if k == l && k.contains_origin() {
        (CertifiedReal::exact(vk.clone()), "idempotent".to_string())
    } else {
        let (v, hits, unsure) = monte_carlo_volume(&combo, samples, seed, tol)?;
        (v, format!("monte-carlo samples={samples} hits={hits} undecided={unsure} seed={seed} confidence=0.99"))
    };
    let lhs = pw(&vol);
    let mut r = CheckReport::new("volume-lpbm", lhs, rhs, false);
    if method.starts_with("monte") && r.verdict == crate::report::Verdict::HoldsWithEquality {
        r.verdict = crate::report::Verdict::AmbiguousWithinTolerance;
    }
    Ok(r.with("method", method)
        .with("volume", crate::report::show_enclosure(&vol, 12))
        .with("vol(K)", &vk)
        .with("vol(L)", &vl)
        .timed(start))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Interval;
    use crate::rational::{int, rat};
    use crate::report::Verdict;

    fn tol() -> Rational {
        rat(1, 1_000_000_000)
    }

    #[test]
    fn volumes() {
        assert_eq!(exact_volume(&SetRep::cube(int(0), int(2), 3)), Some(int(8)));
        let tri = SetRep::polytope(vec![Point::from_ints(&[0, 0]), Point::from_ints(&[2, 0]), Point::from_ints(&[0, 3])]);
        assert_eq!(exact_volume(&tri), Some(int(3)));
    }

    #[test]
    fn one_dimensional_identity() {
        let k = SetRep::interval(int(0), int(1));
        let l = SetRep::interval(int(0), int(2));
        let r = check_volume_lpbm(&k, &l, &rat(1, 2), &Exponent::from_ratio(2, 1), 0, 1, &tol()).unwrap();
        assert_eq!(r.verdict, Verdict::HoldsWithEquality);
        assert!((r.lhs.to_f64() - 2.5).abs() < 1e-15);
        let k = SetRep::interval(int(-1), int(1));
        let r = check_volume_lpbm(&k, &l, &rat(1, 2), &Exponent::from_ratio(2, 1), 0, 1, &tol()).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
    }

    #[test]
    fn equal_bodies_and_monte_carlo() {
        let k = SetRep::cube(int(0), int(1), 2);
        let r = check_volume_lpbm(&k, &k, &rat(1, 3), &Exponent::from_ratio(2, 1), 10, 1, &tol()).unwrap();
        assert_eq!(r.verdict, Verdict::HoldsWithEquality);
        let k = SetRep::AxisBox { intervals: vec![Interval::closed(int(0), int(1)), Interval::closed(int(0), int(2))] };
        let l = SetRep::AxisBox { intervals: vec![Interval::closed(int(0), int(2)), Interval::closed(int(0), int(1))] };
        let a = check_volume_lpbm(&k, &l, &rat(1, 2), &Exponent::from_ratio(2, 1), 20_000, 7, &tol()).unwrap();
        let b = check_volume_lpbm(&k, &l, &rat(1, 2), &Exponent::from_ratio(2, 1), 20_000, 7, &tol()).unwrap();
        assert_eq!(a.verdict, Verdict::Holds);
        assert_eq!((&a.lhs, a.witness("method")), (&b.lhs, b.witness("method")));
    }
}
