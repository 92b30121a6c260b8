use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::arc::{find_point, ArcParams, ArcPoint, ArcVerdict, Constraint};
use super::{edge_normals2d, hull2d, Interval, Point, SetRep};
use crate::certified::{root_rational, CertifiedReal, DEFAULT_BITS};
use crate::error::{Error, Result};
use crate::rational::{pow_int, small_ratio, text, to_f64, Exponent, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    #[serde(with = "text")]
    pub weight: Rational,
    pub set: SetRep,
}

/// `t·K +_p s·L`, the union over `μ ∈ [0, 1]` of
/// `t^(1/p) (1−μ)^(1/q) K + s^(1/p) μ^(1/q) L`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PCombo {
    pub p: Exponent,
    pub terms: Vec<Term>,
}

impl PCombo {
    pub fn new(t: Rational, k: SetRep, s: Rational, l: SetRep, p: Exponent) -> Result<Self> {
        let c = PCombo {
            p,
            terms: vec![Term { weight: t, set: k }, Term { weight: s, set: l }],
        };
        c.validate()?;
        Ok(c)
    }

    /// `(1−λ)·K +_p λ·L`.
    pub fn lambda(k: SetRep, l: SetRep, lambda: Rational, p: Exponent) -> Result<Self> {
        if !lambda.is_positive() || lambda >= Rational::one() {
            return Err(Error::invalid("lambda", "must lie in (0, 1)"));
        }
        PCombo::new(Rational::one() - &lambda, k, lambda, l, p)
    }

    pub fn validate(&self) -> Result<()> {
        let p = self.p.check_p()?;
        small_ratio(p)?;
        if self.terms.len() != 2 {
            return Err(Error::invalid("terms", "a combination has exactly two terms"));
        }
        for t in &self.terms {
            t.set.validate()?;
            if t.weight.is_negative() {
                return Err(Error::invalid("weight", "must be >= 0"));
            }
        }
        if self.terms.iter().all(|t| t.weight.is_zero()) {
            return Err(Error::invalid("weight", "weights must not both be 0"));
        }
        if self.terms[0].set.dim() != self.terms[1].set.dim() {
            return Err(Error::invalid("terms", "dimension mismatch"));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.terms[0].set.dim()
    }

    pub fn k(&self) -> &SetRep {
        &self.terms[0].set
    }

    pub fn l(&self) -> &SetRep {
        &self.terms[1].set
    }

    pub fn arc(&self) -> Result<ArcParams> {
        ArcParams::new(
            self.terms[0].weight.clone(),
            self.terms[1].weight.clone(),
            self.p.check_p()?,
        )
    }

    /// Rational upper bounds of the coefficient ranges `a ≤ c₁`, `b ≤ c₂`.
    pub fn coefficient_bounds(&self) -> Result<(Rational, Rational)> {
        let p = self.p.check_p()?;
        let (r, s) = small_ratio(p)?;
        let up = |w: &Rational| root_rational(&pow_int(w, s as i32), r, 64).hi().clone();
        Ok((up(&self.terms[0].weight), up(&self.terms[1].weight)))
    }

    /// Coordinatewise rational bounds of the closure of the combination.
    pub fn bounds(&self) -> Result<Vec<(Rational, Rational)>> {
        let (c1, c2) = self.coefficient_bounds()?;
        let bk = self.k().bounds();
        let bl = self.l().bounds();
        let zero = Rational::zero();
        Ok(bk
            .iter()
            .zip(&bl)
            .map(|((klo, khi), (llo, lhi))| {
                let lo = (&c1 * klo).min(zero.clone()) + (&c2 * llo).min(zero.clone());
                let hi = (&c1 * khi).max(zero.clone()) + (&c2 * lhi).max(zero.clone());
                (lo, hi)
            })
            .collect())
    }

    fn closure(&self) -> PCombo {
        let mut c = self.clone();
        for t in &mut c.terms {
            if let Some(b) = t.set.as_box() {
                let ivs: Vec<Interval> = b.iter().map(Interval::closure).collect();
                t.set = match t.set {
                    SetRep::Interval1D { .. } => SetRep::Interval1D {
                        interval: ivs[0].clone(),
                    },
                    _ => SetRep::AxisBox { intervals: ivs },
                };
            }
        }
        c
    }
}

impl fmt::Display for PCombo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}·{} +_{} {}·{}",
            self.terms[0].weight, self.terms[0].set, self.p, self.terms[1].weight, self.terms[1].set
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MembershipVerdict {
    Inside,
    Outside,
    /// Undecided; carries the unresolved parameter window.
    Ambiguous(CertifiedReal),
}

impl MembershipVerdict {
    pub fn is_inside(&self) -> bool {
        matches!(self, MembershipVerdict::Inside)
    }

    pub fn is_ambiguous(&self) -> bool {
        matches!(self, MembershipVerdict::Ambiguous(_))
    }
}

impl fmt::Display for MembershipVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MembershipVerdict::Inside => f.write_str("inside"),
            MembershipVerdict::Outside => f.write_str("outside"),
            MembershipVerdict::Ambiguous(g) => write!(f, "ambiguous (window {:.3e})", g.width_f64()),
        }
    }
}

/// Convex pieces whose union is a set.
#[derive(Clone, Debug)]
enum Piece {
    Box(Vec<Interval>),
    Poly(Vec<Point>),
}

impl Piece {
    fn float_bounds(&self) -> Vec<(f64, f64)> {
        match self {
            Piece::Box(b) => b.iter().map(|iv| (to_f64(&iv.lo), to_f64(&iv.hi))).collect(),
            Piece::Poly(v) => (0..v[0].dim())
                .map(|i| {
                    let xs = v.iter().map(|p| to_f64(&p.0[i]));
                    (xs.clone().fold(f64::MAX, f64::min), xs.fold(f64::MIN, f64::max))
                })
                .collect(),
        }
    }

    fn vertices(&self) -> Vec<Point> {
        match self {
            Piece::Poly(v) => v.clone(),
            Piece::Box(b) => SetRep::AxisBox { intervals: b.clone() }.vertices().unwrap(),
        }
    }
}

fn pieces(set: &SetRep) -> Result<Vec<Piece>> {
    Ok(match set {
        SetRep::FinitePoints { points } => points
            .iter()
            .map(|p| Piece::Box(p.0.iter().cloned().map(Interval::point).collect()))
            .collect(),
        SetRep::VPolytope { vertices } => match set.dim() {
            1 => {
                let b = set.bounds();
                vec![Piece::Box(vec![Interval::closed(b[0].0.clone(), b[0].1.clone())])]
            }
            2 => vec![Piece::Poly(hull2d(vertices))],
            _ => {
                return Err(Error::Unsupported(
                    "polytope combinations are implemented for n <= 2".into(),
                ))
            }
        },
        _ => vec![Piece::Box(set.as_box().unwrap())],
    })
}

/// Constraints on `(a, b)` for `aK + bL` to meet the target box. The flags
/// say whether `a` and `b` are positive, which fixes whether open ends of
/// `K` and `L` matter.
fn pair_constraints(k: &Piece, l: &Piece, target: &[Interval], a_pos: bool, b_pos: bool) -> Vec<Constraint> {
    let mut out = Vec::new();
    if let (Piece::Box(kb), Piece::Box(lb)) = (k, l) {
        for ((ki, li), ti) in kb.iter().zip(lb).zip(target) {
            let lo_open = (ki.lo_open && a_pos) || (li.lo_open && b_pos) || ti.hi_open;
            out.push(Constraint::new(ki.lo.clone(), li.lo.clone(), ti.hi.clone(), lo_open));
            let hi_open = (ki.hi_open && a_pos) || (li.hi_open && b_pos) || ti.lo_open;
            out.push(Constraint::greater(ki.hi.clone(), li.hi.clone(), ti.lo.clone(), hi_open));
        }
        return out;
    }
    // separating axes of the planar sets aK + bL and the target box
    let kv = k.vertices();
    let lv = l.vertices();
    let mut axes: Vec<Point> = Vec::new();
    for vs in [&kv, &lv] {
        axes.extend(edge_normals2d(vs));
        let h = hull2d(vs);
        if h.len() == 2 {
            let d = h[1].sub(&h[0]);
            axes.push(d.scale(&-Rational::one()));
            axes.push(d);
        }
    }
    for i in 0..2 {
        for sgn in [1i64, -1] {
            let mut u = Point::origin(2);
            u.0[i] = Rational::from_integer(sgn.into());
            axes.push(u);
        }
    }
    axes.sort();
    axes.dedup();
    for u in axes {
        let hk = kv.iter().map(|v| v.dot(&u)).max().unwrap();
        let hl = lv.iter().map(|v| v.dot(&u)).max().unwrap();
        let mut m = Rational::zero();
        let mut strict = false;
        for (ui, ti) in u.0.iter().zip(target) {
            if ui.is_positive() {
                m += ui * &ti.lo;
                strict |= ti.lo_open;
            } else if ui.is_negative() {
                m += ui * &ti.hi;
                strict |= ti.hi_open;
            }
        }
        out.push(Constraint::greater(hk, hl, m, strict));
    }
    out
}

/// Constraints on `(a, b)` for `ax + by` to lie in the target box.
pub(crate) fn point_pair_constraints(x: &Point, y: &Point, target: &[Interval]) -> Vec<Constraint> {
    let k = Piece::Box(x.0.iter().cloned().map(Interval::point).collect());
    let l = Piece::Box(y.0.iter().cloned().map(Interval::point).collect());
    pair_constraints(&k, &l, target, true, true)
}

fn satisfied_at(arc: &ArcParams, pt: &ArcPoint, cons: &[Constraint]) -> bool {
    cons.iter().all(|c| match arc.sign_at(c, pt) {
        std::cmp::Ordering::Less => true,
        std::cmp::Ordering::Equal => !c.strict,
        std::cmp::Ordering::Greater => false,
    })
}

fn pair_verdict(arc: &ArcParams, k: &Piece, l: &Piece, target: &[Interval], tol: &Rational) -> ArcVerdict {
    let zero = Rational::zero();
    let two = Rational::from_integer(2.into());
    if arc.is_single_point() {
        let cons = pair_constraints(k, l, target, arc.t.is_positive(), arc.s.is_positive());
        let pt = arc.point_at(&zero);
        return if satisfied_at(arc, &pt, &cons) {
            ArcVerdict::Feasible { theta: zero }
        } else {
            ArcVerdict::Infeasible
        };
    }
    let cons = pair_constraints(k, l, target, true, true);
    let v = find_point(arc, &cons, tol);
    if matches!(v, ArcVerdict::Feasible { .. }) {
        return v;
    }
    for (theta, a_pos, b_pos) in [(zero, true, false), (two, false, true)] {
        let cons = pair_constraints(k, l, target, a_pos, b_pos);
        if satisfied_at(arc, &arc.point_at(&theta), &cons) {
            return ArcVerdict::Feasible { theta };
        }
    }
    v
}

/// Whether the combination meets the box `target` (a product of intervals
/// with open or closed ends).
pub fn meets_box(combo: &PCombo, target: &[Interval], tol: &Rational) -> Result<MembershipVerdict> {
    combo.validate()?;
    if target.len() != combo.dim() {
        return Err(Error::invalid("target", "dimension mismatch"));
    }
    if !tol.is_positive() {
        return Err(Error::invalid("tol", "must be > 0"));
    }
    if target.iter().any(Interval::is_empty) {
        return Ok(MembershipVerdict::Outside);
    }
    let arc = combo.arc()?;
    let kp = pieces(combo.k())?;
    let lp = pieces(combo.l())?;
    let (c1, c2) = combo.coefficient_bounds()?;
    let (c1, c2) = (to_f64(&c1) * (1.0 + 1e-9), to_f64(&c2) * (1.0 + 1e-9));
    let tb: Vec<(f64, f64)> = target.iter().map(|iv| (to_f64(&iv.lo), to_f64(&iv.hi))).collect();
    let lbounds: Vec<Vec<(f64, f64)>> = lp.iter().map(Piece::float_bounds).collect();
    let mut ambiguous = false;
    for k in &kp {
        let kb = k.float_bounds();
        for (l, lb) in lp.iter().zip(&lbounds) {
            // cheap reject: the reachable box misses the target
            let far = kb.iter().zip(lb).zip(&tb).any(|(((klo, khi), (llo, lhi)), (tlo, thi))| {
                let lo = (c1 * klo).min(0.0) + (c2 * llo).min(0.0);
                let hi = (c1 * khi).max(0.0) + (c2 * lhi).max(0.0);
                let slack = 1e-9 * (1.0 + lo.abs() + hi.abs() + tlo.abs() + thi.abs());
                lo > thi + slack || hi < tlo - slack
            });
            if far {
                continue;
            }
            match pair_verdict(&arc, k, l, target, tol) {
                ArcVerdict::Feasible { .. } => return Ok(MembershipVerdict::Inside),
                ArcVerdict::Ambiguous => ambiguous = true,
                ArcVerdict::Infeasible => {}
            }
        }
    }
    Ok(if ambiguous {
        MembershipVerdict::Ambiguous(CertifiedReal::new(Rational::zero(), tol.clone()))
    } else {
        MembershipVerdict::Outside
    })
}

/// Certified decision of `z ∈ t·K +_p s·L`.
pub fn p_combo_membership(z: &Point, combo: &PCombo, tol: &Rational) -> Result<MembershipVerdict> {
    let target: Vec<Interval> = z.0.iter().cloned().map(Interval::point).collect();
    meets_box(combo, &target, tol)
}

/// `h(t·K +_p s·L, u) = (t h_K(u)^p + s h_L(u)^p)^(1/p)`.
pub fn p_combo_support(combo: &PCombo, u: &Point) -> Result<CertifiedReal> {
    combo.validate()?;
    let hk = super::support_function(combo.k(), u)?;
    let hl = super::support_function(combo.l(), u)?;
    let (hk, hl) = (hk.exact_value().unwrap().clone(), hl.exact_value().unwrap().clone());
    let p = combo.p.check_p()?;
    let (r, s) = small_ratio(p)?;
    let (t, w) = (&combo.terms[0].weight, &combo.terms[1].weight);
    if hk == hl {
        let f = root_rational(&pow_int(&(t + w), s as i32), r, DEFAULT_BITS);
        return Ok(f.scale(&hk));
    }
    if s == 1 {
        let sum = t * pow_int(&hk, r as i32) + w * pow_int(&hl, r as i32);
        return Ok(root_rational(&sum, r, DEFAULT_BITS));
    }
    let pw = |h: &Rational| CertifiedReal::exact(h.clone()).pow_rational(p, DEFAULT_BITS);
    let sum = pw(&hk).scale(t).add(&pw(&hl).scale(w));
    Ok(sum.pow_rational(&p.recip(), DEFAULT_BITS))
}

/// Enclosure of `inf{‖z − m‖_∞ : m ∈ t·K +_p s·L}` (over the closure).
pub fn chebyshev_distance(z: &Point, combo: &PCombo) -> Result<CertifiedReal> {
    if z.dim() != combo.dim() {
        return Err(Error::invalid("z", "dimension mismatch"));
    }
    let combo = combo.closure();
    let tol = Rational::new(1.into(), num_bigint::BigInt::one() << 80usize);
    let meets = |delta: &Rational| {
        let target: Vec<Interval> = z
            .0
            .iter()
            .map(|x| Interval::closed(x - delta, x + delta))
            .collect();
        meets_box(&combo, &target, &tol)
    };
    let bounds = combo.bounds()?;
    let mut hi = Rational::zero();
    for (x, (lo_b, hi_b)) in z.0.iter().zip(&bounds) {
        hi = hi.max((x - lo_b).abs()).max((x - hi_b).abs());
    }
    let mut hi = hi.ceil();
    let mut lo = Rational::zero();
    if meets(&lo)?.is_inside() {
        return Ok(CertifiedReal::zero());
    }
    let two = Rational::from_integer(2.into());
    let stop = 1e-13 * (1.0 + to_f64(&hi));
    while to_f64(&(&hi - &lo)) > stop {
        let mid = (&lo + &hi) / &two;
        match meets(&mid)? {
            MembershipVerdict::Inside => hi = mid,
            MembershipVerdict::Outside => lo = mid,
            MembershipVerdict::Ambiguous(_) => break,
        }
    }
    Ok(CertifiedReal::new(lo, hi))
}
