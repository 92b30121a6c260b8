use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::volume::{exact_volume, monte_carlo_volume};
use super::{open_unit_cube, BITS};
use crate::certified::CertifiedReal;
use crate::error::{Error, Result};
use crate::functions::{cell_sup_discretize, upper_riemann_sum, PiecewiseConstant};
use crate::geometry::{p_combo_support, Interval, PCombo, Point, SetRep};
use crate::lattice::{gcount_pcombo_plus_cube, Lattice};
use crate::means::{alpha_mean, bbl_exponent};
use crate::rational::{ceil_int, Exponent, Rational};

const MC_SAMPLES: u64 = 200_000;

#[derive(Clone, Debug, Serialize)]
pub struct ConvergeRow {
    pub m: u32,
    /// `2^(−mn) Σ h^◇`
    pub lhs: CertifiedReal,
    /// the mean of the scaled sums
    pub rhs: CertifiedReal,
    pub gap: f64,
    pub count: u64,
    pub ambiguous_points: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergeTable {
    pub lhs_limit: CertifiedReal,
    pub rhs_limit: CertifiedReal,
    /// How `lhs_limit` was obtained: exact or Monte Carlo.
    pub lhs_limit_method: String,
    pub rows: Vec<ConvergeRow>,
    pub runtime_ms: u64,
}

impl ConvergeTable {
    /// Whether the gaps never grow by more than one grid step `2^(−m)`.
    pub fn gaps_settle(&self) -> bool {
        self.rows
            .windows(2)
            .all(|w| w[1].gap <= w[0].gap + (w[1].m as f64).exp2().recip())
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("m,lhs,rhs,lhs_limit,rhs_limit,gap\n");
        for r in &self.rows {
            s.push_str(&format!(
                "{},{:.12},{:.12},{:.12},{:.12},{:.6e}\n",
                r.m,
                r.lhs.to_f64(),
                r.rhs.to_f64(),
                self.lhs_limit.to_f64(),
                self.rhs_limit.to_f64(),
                r.gap
            ));
        }
        s
    }
}

fn as_box(set: &SetRep, name: &str) -> Result<Vec<Interval>> {
    set.as_box()
        .filter(|b| b.iter().all(|iv| !iv.is_empty()))
        .ok_or_else(|| Error::invalid(name, "must be a nonempty box or interval"))
}

/// Integer index box of the grid anchors `x ∈ 2^(−m)ℤⁿ ∩ C₀` whose cells meet
/// `b`, read off the cell-sup discretisation of `χ_b`.
fn anchor_box(b: &[Interval], m: u32, c: &SetRep) -> Result<(SetRep, u64, Rational)> {
    let fm = cell_sup_discretize(&PiecewiseConstant::indicator(b.to_vec()), m, c)?;
    let scale = Rational::from_integer(BigInt::one() << m as usize);
    let n = b.len();
    let mut lo: Vec<Option<Rational>> = vec![None; n];
    let mut hi: Vec<Option<Rational>> = vec![None; n];
    for s in &fm.support {
        for i in 0..n {
            let v = &s.0 .0[i] * &scale;
            if lo[i].as_ref().is_none_or(|x| &v < x) {
                lo[i] = Some(v.clone());
            }
            if hi[i].as_ref().is_none_or(|x| &v > x) {
                hi[i] = Some(v);
            }
        }
    }
    let intervals: Vec<Interval> = lo
        .into_iter()
        .zip(hi)
        .map(|(l, h)| Interval::closed(l.expect("nonempty"), h.expect("nonempty")))
        .collect();
    Ok((
        SetRep::AxisBox { intervals },
        fm.support.len() as u64,
        upper_riemann_sum(&fm, m),
    ))
}

fn continuous_lhs(combo: &PCombo, k: &SetRep, l: &SetRep, seed: u64, tol: &Rational) -> Result<(CertifiedReal, String)> {
    let n = combo.dim();
    if n == 1 {
        let up = p_combo_support(combo, &Point::from_ints(&[1]))?;
        let down = p_combo_support(combo, &Point::from_ints(&[-1]))?;
        return Ok((up.add(&down), "exact".into()));
    }
    // L = cK with K ∋ 0: the combination is ((1−λ) + λ c^p)^(1/p) K
    if let (Some(kb), Some(lb)) = (k.as_box(), l.as_box()) {
        let c = kb
            .iter()
            .zip(&lb)
            .find(|(a, _)| !a.hi.is_zero())
            .map(|(a, b)| &b.hi / &a.hi);
        if let Some(c) = c.filter(|c| c.is_positive()) {
            let homothetic = kb.iter().zip(&lb).all(|(a, b)| &a.lo * &c == b.lo && &a.hi * &c == b.hi);
            if homothetic && k.contains_origin() {
                let (t, s) = (&combo.terms[0].weight, &combo.terms[1].weight);
                let p = combo.p.check_p()?;
                let base = CertifiedReal::exact(t.clone()).add(&pow_rat(&c, p).scale(s));
                let factor = base.pow_rational(&(Rational::from_integer(n.into()) / p), BITS);
                let vk = exact_volume(k).expect("box");
                return Ok((factor.scale(&vk), "exact".into()));
            }
        }
    }
    let (v, hits, unsure) = monte_carlo_volume(combo, MC_SAMPLES, seed, tol)?;
    Ok((v, format!("monte-carlo samples={MC_SAMPLES} hits={hits} undecided={unsure} confidence=0.99")))
}

fn pow_rat(c: &Rational, p: &Rational) -> CertifiedReal {
    CertifiedReal::exact(c.clone()).pow_rational(p, BITS)
}

/// Discretises `χ_K`, `χ_L` on `2^(−m)ℤⁿ` for `m = 0..=m_max`, counts the
/// conjugated discrete left-hand side and compares both scaled sides with
/// their continuous values.
pub fn converge_experiment(
    k: &SetRep,
    l: &SetRep,
    lambda: &Rational,
    p: &Exponent,
    alpha: &Exponent,
    m_max: u32,
    tol: &Rational,
) -> Result<ConvergeTable> {
    let start = Instant::now();
    let kb = as_box(k, "K")?;
    let lb = as_box(l, "L")?;
    if kb.len() != lb.len() {
        return Err(Error::invalid("L", "dimension differs from K"));
    }
    match alpha {
        Exponent::PosInf => {}
        Exponent::Finite(a) if a.is_positive() => {}
        _ => {
            return Err(Error::Unsupported(
                "the convergence experiment uses characteristic functions and needs alpha > 0".into(),
            ))
        }
    }
    let n = kb.len();
    let beta = bbl_exponent(alpha, n, p)?;
    let combo = PCombo::lambda(k.clone(), l.clone(), lambda.clone(), p.clone())?;
    let reach = kb
        .iter()
        .chain(&lb)
        .flat_map(|iv| [iv.lo.abs(), iv.hi.abs()])
        .max()
        .expect("nonempty");
    let kc = Rational::from_integer(ceil_int(&reach) + 1);
    let c = SetRep::cube(-kc.clone(), kc, n);
    let vk = exact_volume(k).expect("box");
    let vl = exact_volume(l).expect("box");
    let rhs_limit = alpha_mean(&vk.clone().into(), &vl.clone().into(), lambda, &beta, BITS)?;
    let (lhs_limit, method) = continuous_lhs(&combo, k, l, 0x5eed, tol)?;
    let mut rows = Vec::new();
    for m in 0..=m_max {
        let (km, ck, fk) = anchor_box(&kb, m, &c)?;
        let (lm, _, gl) = anchor_box(&lb, m, &c)?;
        let grid = PCombo::lambda(km, lm, lambda.clone(), p.clone())?;
        let count = gcount_pcombo_plus_cube(&grid, &open_unit_cube(n), &Lattice::standard(n), tol)?;
        let cell = Rational::from_integer(BigInt::one() << (m as usize * n));
        debug_assert_eq!(fk, Rational::from_integer(ck.into()) / &cell);
        let lhs = CertifiedReal::exact(Rational::from_integer(count.count.into()) / &cell);
        let rhs = alpha_mean(&fk.into(), &gl.into(), lambda, &beta, BITS)?;
        let rel = |a: &CertifiedReal, b: &CertifiedReal| ((a.to_f64() - b.to_f64()) / b.to_f64()).abs();
        let gap = rel(&lhs, &lhs_limit).max(rel(&rhs, &rhs_limit));
        rows.push(ConvergeRow {
            m,
            lhs,
            rhs,
            gap,
            count: count.count,
            ambiguous_points: count.ambiguous_points.len(),
        });
    }
    Ok(ConvergeTable {
        lhs_limit,
        rhs_limit,
        lhs_limit_method: method,
        rows,
        runtime_ms: start.elapsed().as_millis() as u64,
    })
}
