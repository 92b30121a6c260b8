//! The Hölder coefficient arc of a binary p-combination and a certified
//! search for arc points satisfying linear constraints.
//!
//! For `T·K +_p S·L` the coefficient pairs are
//! `(a, b) = (T^(1/p) (1−μ)^(1/q), S^(1/p) μ^(1/q))`, `μ ∈ [0, 1]`, which is
//! the quarter curve `(a/c₁)^q + (b/c₂)^q = 1`. Instead of `μ` the arc is
//! parameterized by `θ ∈ [0, 2]` through the outward normal `(1, w)`:
//!
//! * `θ ≤ 1`, `v = θ`, `w = vˢ`: `(a, b) = (T, S v^(r−s)) / (T + S vʳ)^e`
//! * `θ ≥ 1`, `v = 2 − θ`, `w = v⁻ˢ`: `(a, b) = (T v^(r−s), S) / (T vʳ + S)^e`
//!
//! where `p = r/s` and `e = (r − s)/r = 1/q`. Coordinates are polynomial in
//! `v` over a positive denominator, so derivatives stay bounded, and at
//! every rational `θ` both coordinates share the single radical `D^e`: the
//! sign of `αa + βb − γ` is then decided exactly by comparing `N^r` against
//! `γ^r D^(r−s)`.
//!
//! A linear functional restricted to the arc has at most one interior
//! extremum, located where the arc normal is parallel to `(α, β)`. Between
//! those tangency parameters every constraint is monotone, so its range on a
//! piece is spanned by its endpoint values.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use crate::certified::{decide, root_rational, CertifiedReal};
use crate::error::{Error, Result};
use crate::rational::{from_f64, pow_int, small_ratio, to_f64, Rational};

/// `αa + βb − γ < 0` (strict) or `≤ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub alpha: Rational,
    pub beta: Rational,
    pub gamma: Rational,
    pub strict: bool,
}

impl Constraint {
    pub fn new(alpha: Rational, beta: Rational, gamma: Rational, strict: bool) -> Self {
        Constraint {
            alpha,
            beta,
            gamma,
            strict,
        }
    }

    /// `αa + βb > γ` rewritten in the `< 0` form.
    pub fn greater(alpha: Rational, beta: Rational, gamma: Rational, strict: bool) -> Self {
        Constraint::new(-alpha, -beta, -gamma, strict)
    }

    fn satisfied_by(&self, sign: Ordering) -> bool {
        match sign {
            Ordering::Less => true,
            Ordering::Equal => !self.strict,
            Ordering::Greater => false,
        }
    }
}

/// A point of the arc at rational parameter: `(p1, p2) / d^e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcPoint {
    pub p1: Rational,
    pub p2: Rational,
    pub d: Rational,
}

#[derive(Clone, Debug)]
pub struct ArcParams {
    pub t: Rational,
    pub s: Rational,
    pub p: Rational,
    r: u32,
    sd: u32,
    t_f: f64,
    s_f: f64,
    p_f: f64,
    e_f: f64,
}

impl ArcParams {
    pub fn new(t: Rational, s: Rational, p: &Rational) -> Result<Self> {
        if p < &Rational::one() {
            return Err(Error::invalid("p", "p must satisfy p >= 1"));
        }
        if t.is_negative() || s.is_negative() || (t.is_zero() && s.is_zero()) {
            return Err(Error::invalid("weights", "weights must be nonnegative and not both 0"));
        }
        let (r, sd) = small_ratio(p)?;
        Ok(ArcParams {
            t_f: to_f64(&t),
            s_f: to_f64(&s),
            p_f: to_f64(p),
            e_f: (r - sd) as f64 / r as f64,
            t,
            s,
            p: p.clone(),
            r,
            sd,
        })
    }

    /// The combination reduces to one coefficient pair: `p = 1` or a zero
    /// weight (the surviving term scaled by its weight to the power `1/p`).
    pub fn is_single_point(&self) -> bool {
        self.r == self.sd || self.t.is_zero() || self.s.is_zero()
    }

    pub fn exponent_parts(&self) -> (u32, u32) {
        (self.r, self.sd)
    }

    fn single_point(&self) -> ArcPoint {
        if self.r == self.sd {
            ArcPoint {
                p1: self.t.clone(),
                p2: self.s.clone(),
                d: Rational::one(),
            }
        } else if self.t.is_zero() {
            ArcPoint {
                p1: Rational::zero(),
                p2: self.s.clone(),
                d: self.s.clone(),
            }
        } else {
            ArcPoint {
                p1: self.t.clone(),
                p2: Rational::zero(),
                d: self.t.clone(),
            }
        }
    }

    pub fn point_at(&self, theta: &Rational) -> ArcPoint {
        if self.is_single_point() {
            return self.single_point();
        }
        let m = (self.r - self.sd) as i32;
        let one = Rational::one();
        if theta <= &one {
            let v = theta;
            ArcPoint {
                p1: self.t.clone(),
                p2: &self.s * pow_int(v, m),
                d: &self.t + &self.s * pow_int(v, self.r as i32),
            }
        } else {
            let v = Rational::from_integer(2.into()) - theta;
            ArcPoint {
                p1: &self.t * pow_int(&v, m),
                p2: self.s.clone(),
                d: &self.t * pow_int(&v, self.r as i32) + &self.s,
            }
        }
    }

    pub fn point_at_f64(&self, theta: f64) -> (f64, f64) {
        if self.is_single_point() {
            let pt = self.single_point();
            let f = to_f64(&pt.d).powf(-self.e_f);
            return (to_f64(&pt.p1) * f, to_f64(&pt.p2) * f);
        }
        let m = (self.r - self.sd) as i32;
        let (p1, p2, d) = if theta <= 1.0 {
            let v = theta.max(0.0);
            (self.t_f, self.s_f * v.powi(m), self.t_f + self.s_f * v.powi(self.r as i32))
        } else {
            let v = (2.0 - theta).max(0.0);
            (self.t_f * v.powi(m), self.s_f, self.t_f * v.powi(self.r as i32) + self.s_f)
        };
        let f = d.powf(-self.e_f);
        (p1 * f, p2 * f)
    }

    /// `μ` of the arc point at `θ` (rational at every rational `θ`).
    pub fn mu_at(&self, theta: &Rational) -> Rational {
        if self.r == self.sd {
            return Rational::zero();
        }
        if self.t.is_zero() {
            return Rational::one();
        }
        if self.s.is_zero() {
            return Rational::zero();
        }
        let one = Rational::one();
        if theta <= &one {
            let vr = &self.s * pow_int(theta, self.r as i32);
            &vr / (&self.t + &vr)
        } else {
            let v = Rational::from_integer(2.into()) - theta;
            &self.s / (&self.t * pow_int(&v, self.r as i32) + &self.s)
        }
    }

    /// Enclosures of the coefficients `(a, b)` at `θ`.
    pub fn coefficients(&self, theta: &Rational, bits: u32) -> (CertifiedReal, CertifiedReal) {
        let pt = self.point_at(theta);
        let m = (self.r - self.sd) as i32;
        let k = self.r;
        let coord = |c: &Rational| {
            if m == 0 {
                CertifiedReal::exact(c.clone())
            } else {
                root_rational(&(pow_int(c, k as i32) / pow_int(&pt.d, m)), k, bits)
            }
        };
        (coord(&pt.p1), coord(&pt.p2))
    }

    /// Exact sign of `αa + βb − γ` at an arc point.
    pub fn sign_at(&self, c: &Constraint, pt: &ArcPoint) -> Ordering {
        let n = &c.alpha * &pt.p1 + &c.beta * &pt.p2;
        let m = (self.r - self.sd) as i32;
        if m == 0 || pt.d.is_one() {
            return n.cmp(&c.gamma);
        }
        let sn = n.signum();
        let sg = c.gamma.signum();
        if sn != sg || sn.is_zero() {
            return sn.cmp(&sg).then(Ordering::Equal);
        }
        let k = self.r as i32;
        let lhs = pow_int(&n.abs(), k);
        let rhs = pow_int(&c.gamma.abs(), k) * pow_int(&pt.d, m);
        if sn.is_positive() {
            lhs.cmp(&rhs)
        } else {
            rhs.cmp(&lhs)
        }
    }

    /// Float value of `αa + βb − γ` and a bound on its rounding error.
    fn value_f64(&self, c: &ConstraintF, theta: f64) -> (f64, f64) {
        let (a, b) = self.point_at_f64(theta);
        let x = c.alpha * a;
        let y = c.beta * b;
        let g = x + y - c.gamma;
        (g, 1e-11 * (x.abs() + y.abs() + c.gamma.abs() + 1e-300))
    }

    /// Tangency parameter of direction `(α, β)` when `αβ > 0`.
    pub fn tangency(&self, alpha: &Rational, beta: &Rational) -> Option<Tangency> {
        if self.is_single_point() || (alpha * beta).signum() != Rational::one() {
            return None;
        }
        let w = beta / alpha;
        let one = Rational::one();
        let two = Rational::from_integer(2.into());
        let (x, upper) = if w <= one { (w, false) } else { (w.recip(), true) };
        let v = root_rational(&x, self.sd, 64);
        let place = |v: &Rational| if upper { &two - v } else { v.clone() };
        Some(match v.exact_value() {
            Some(v) => Tangency::Exact(place(v)),
            None => {
                let (a, b) = (place(v.lo()), place(v.hi()));
                let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                Tangency::Bracket(lo.max(Rational::zero()), hi.min(two))
            }
        })
    }

    fn tangency_f64(&self, alpha: f64, beta: f64) -> Option<f64> {
        if self.is_single_point() || !(alpha * beta > 0.0) {
            return None;
        }
        let w = beta / alpha;
        let inv_s = 1.0 / self.sd as f64;
        Some(if w <= 1.0 {
            w.powf(inv_s)
        } else {
            2.0 - w.recip().powf(inv_s)
        })
    }

    /// Enclosure of `sup` over the arc of `αa + βb` for `α, β > 0`:
    /// `(T αᵖ + S βᵖ)^(1/p)`.
    pub fn support_value(&self, alpha: &Rational, beta: &Rational, bits: u32) -> CertifiedReal {
        let pw = |x: &Rational| CertifiedReal::exact(x.clone()).pow_rational(&self.p, bits);
        pw(alpha)
            .scale(&self.t)
            .add(&pw(beta).scale(&self.s))
            .pow_rational(&self.p.recip(), bits)
    }

    fn support_value_f64(&self, alpha: f64, beta: f64) -> f64 {
        (self.t_f * alpha.powf(self.p_f) + self.s_f * beta.powf(self.p_f)).powf(1.0 / self.p_f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tangency {
    Exact(Rational),
    Bracket(Rational, Rational),
}

#[derive(Clone, Debug)]
struct ConstraintF {
    alpha: f64,
    beta: f64,
    gamma: f64,
}

/// Shape of a constraint along the arc.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Shape {
    Monotone,
    /// interior maximum: the minimum over any piece sits at an endpoint
    Cap,
    /// interior minimum at the tangency parameter
    Cup,
}

fn shape_of(alpha: &Rational, beta: &Rational) -> Shape {
    if alpha.is_positive() && beta.is_positive() {
        Shape::Cap
    } else if alpha.is_negative() && beta.is_negative() {
        Shape::Cup
    } else {
        Shape::Monotone
    }
}

/// Outcome of an arc search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArcVerdict {
    /// An arc point satisfying every constraint exists; `theta` is one.
    Feasible { theta: Rational },
    Infeasible,
    /// The boundary of the feasible set could not be resolved above `tol`.
    Ambiguous,
}

/// Pieces of `[0, 2]` classified by a complete search.
#[derive(Clone, Debug, Default)]
pub struct ArcRegion {
    /// Intervals on which every constraint holds.
    pub feasible: Vec<(Rational, Rational)>,
    /// Unresolved intervals narrower than the tolerance, possibly feasible.
    pub boundary: Vec<(Rational, Rational)>,
}

impl ArcRegion {
    pub fn is_empty(&self) -> bool {
        self.feasible.is_empty() && self.boundary.is_empty()
    }
}

trait Oracle {
    type P: Clone + PartialOrd;
    fn sign(&self, k: usize, at: &Self::P) -> Option<Ordering>;
    /// Sign of the interior minimum of a `Cup` constraint.
    fn cup_min_sign(&self, k: usize) -> Option<Ordering>;
    fn mid(&self, a: &Self::P, b: &Self::P) -> Self::P;
    fn narrow(&self, a: &Self::P, b: &Self::P) -> bool;
}

struct FloatOracle<'a> {
    arc: &'a ArcParams,
    cons: Vec<ConstraintF>,
    tol: f64,
}

impl Oracle for FloatOracle<'_> {
    type P = f64;

    fn sign(&self, k: usize, at: &f64) -> Option<Ordering> {
        let (g, err) = self.arc.value_f64(&self.cons[k], *at);
        if g > err {
            Some(Ordering::Greater)
        } else if g < -err {
            Some(Ordering::Less)
        } else {
            None
        }
    }

    fn cup_min_sign(&self, k: usize) -> Option<Ordering> {
        let c = &self.cons[k];
        let m = -self.arc.support_value_f64(-c.alpha, -c.beta);
        let g = m - c.gamma;
        let err = 1e-11 * (m.abs() + c.gamma.abs() + 1e-300);
        if g > err {
            Some(Ordering::Greater)
        } else if g < -err {
            Some(Ordering::Less)
        } else {
            None
        }
    }

    fn mid(&self, a: &f64, b: &f64) -> f64 {
        0.5 * (a + b)
    }

    fn narrow(&self, a: &f64, b: &f64) -> bool {
        b - a < self.tol
    }
}

struct ExactOracle<'a> {
    arc: &'a ArcParams,
    cons: &'a [Constraint],
    cons_f: Vec<ConstraintF>,
    tangency: Vec<Option<Tangency>>,
    tol: Rational,
}

impl Oracle for ExactOracle<'_> {
    type P = Rational;

    fn sign(&self, k: usize, at: &Rational) -> Option<Ordering> {
        let (g, err) = self.arc.value_f64(&self.cons_f[k], to_f64(at));
        if g.abs() > 4.0 * err {
            return Some(if g > 0.0 { Ordering::Greater } else { Ordering::Less });
        }
        Some(self.arc.sign_at(&self.cons[k], &self.arc.point_at(at)))
    }

    fn cup_min_sign(&self, k: usize) -> Option<Ordering> {
        let c = &self.cons[k];
        match &self.tangency[k] {
            Some(Tangency::Exact(th)) => self.sign(k, th),
            _ => {
                let (na, nb) = (-&c.alpha, -&c.beta);
                let neg_gamma = CertifiedReal::exact(-&c.gamma);
                // min = −σ(−α, −β); sign(min − γ) = sign(−γ − σ)
                decide(|bits| (neg_gamma.clone(), self.arc.support_value(&na, &nb, bits)))
            }
        }
    }

    fn mid(&self, a: &Rational, b: &Rational) -> Rational {
        (a + b) / Rational::from_integer(2.into())
    }

    fn narrow(&self, a: &Rational, b: &Rational) -> bool {
        (b - a) < self.tol
    }
}

struct Piece<P> {
    lo: P,
    hi: P,
    s_lo: Vec<Option<Ordering>>,
    s_hi: Vec<Option<Ordering>>,
    /// constraint indices with an interior extremum inside the piece
    inner: Vec<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    FirstPoint,
    Complete,
}

struct Search<P> {
    feasible: Vec<(P, P)>,
    boundary: Vec<(P, P)>,
    point: Option<P>,
}

fn explore<O: Oracle>(
    oracle: &O,
    shapes: &[Shape],
    cons_strict: &[bool],
    pieces: Vec<(O::P, O::P, Vec<usize>)>,
    mode: Mode,
) -> Search<O::P> {
    let n = shapes.len();
    let satisfied = |k: usize, s: Option<Ordering>| -> Option<bool> {
        s.map(|s| match s {
            Ordering::Less => true,
            Ordering::Equal => !cons_strict[k],
            Ordering::Greater => false,
        })
    };
    let signs = |at: &O::P| (0..n).map(|k| oracle.sign(k, at)).collect::<Vec<_>>();
    let mut out = Search {
        feasible: Vec::new(),
        boundary: Vec::new(),
        point: None,
    };
    let mut stack: Vec<Piece<O::P>> = Vec::new();
    for (lo, hi, inner) in pieces.into_iter().rev() {
        let s_lo = signs(&lo);
        let s_hi = signs(&hi);
        stack.push(Piece {
            lo,
            hi,
            s_lo,
            s_hi,
            inner,
        });
    }
    let cup_cache: Vec<Option<Ordering>> = (0..n)
        .map(|k| {
            if shapes[k] == Shape::Cup {
                oracle.cup_min_sign(k)
            } else {
                None
            }
        })
        .collect();
    while let Some(pc) = stack.pop() {
        // exclusion: one constraint violated on the whole piece
        let excluded = (0..n).any(|k| {
            let is_inner = pc.inner.contains(&k);
            if is_inner && shapes[k] == Shape::Cup {
                satisfied(k, cup_cache[k]) == Some(false)
            } else {
                satisfied(k, pc.s_lo[k]) == Some(false) && satisfied(k, pc.s_hi[k]) == Some(false)
            }
        });
        if excluded {
            continue;
        }
        let lo_ok = (0..n).all(|k| satisfied(k, pc.s_lo[k]) == Some(true));
        let hi_ok = (0..n).all(|k| satisfied(k, pc.s_hi[k]) == Some(true));
        if lo_ok || hi_ok {
            out.point = Some(if lo_ok { pc.lo.clone() } else { pc.hi.clone() });
            if mode == Mode::FirstPoint {
                return out;
            }
        }
        let whole = lo_ok
            && hi_ok
            && !pc
                .inner
                .iter()
                .any(|&k| shapes[k] == Shape::Cap);
        if whole {
            out.feasible.push((pc.lo, pc.hi));
            continue;
        }
        if oracle.narrow(&pc.lo, &pc.hi) {
            out.boundary.push((pc.lo, pc.hi));
            continue;
        }
        let mid = oracle.mid(&pc.lo, &pc.hi);
        let s_mid = signs(&mid);
        stack.push(Piece {
            lo: mid.clone(),
            hi: pc.hi,
            s_lo: s_mid.clone(),
            s_hi: pc.s_hi,
            inner: pc.inner.clone(),
        });
        stack.push(Piece {
            lo: pc.lo,
            hi: mid,
            s_lo: pc.s_lo,
            s_hi: s_mid,
            inner: pc.inner,
        });
    }
    out
}

/// Simplified constraint system, or a proof that it is unsatisfiable.
fn normalize(cons: &[Constraint]) -> Option<Vec<Constraint>> {
    let mut kept: Vec<Constraint> = Vec::new();
    for c in cons {
        if c.alpha.is_zero() && c.beta.is_zero() {
            let ok = c.satisfied_by(Rational::zero().cmp(&c.gamma));
            if !ok {
                return None;
            }
            continue;
        }
        // scale so the direction is canonical
        let scale = c.alpha.abs().max(c.beta.abs());
        let n = Constraint::new(&c.alpha / &scale, &c.beta / &scale, &c.gamma / &scale, c.strict);
        if let Some(prev) = kept
            .iter_mut()
            .find(|k| k.alpha == n.alpha && k.beta == n.beta)
        {
            if n.gamma < prev.gamma || (n.gamma == prev.gamma && n.strict) {
                *prev = n;
            }
            continue;
        }
        kept.push(n);
    }
    // opposite directions bound a strip `γ_l ◁ ℓ ◁ γ_u`
    for i in 0..kept.len() {
        for j in i + 1..kept.len() {
            let (u, l) = (&kept[i], &kept[j]);
            if u.alpha == -&l.alpha && u.beta == -&l.beta {
                let lower = -&l.gamma;
                match lower.cmp(&u.gamma) {
                    Ordering::Greater => return None,
                    Ordering::Equal if u.strict || l.strict => return None,
                    _ => {}
                }
            }
        }
    }
    Some(kept)
}

/// Rational arc parameters where two constraint lines cross exactly on the
/// arc; added as breakpoints so exact touching is decided at a sample.
fn vertex_breakpoints(arc: &ArcParams, cons: &[Constraint]) -> Vec<Rational> {
    let (r, sd) = arc.exponent_parts();
    let m = r - sd;
    let two = Rational::from_integer(2.into());
    let mut out = Vec::new();
    for i in 0..cons.len() {
        for j in i + 1..cons.len() {
            let (c1, c2) = (&cons[i], &cons[j]);
            let det = &c1.alpha * &c2.beta - &c1.beta * &c2.alpha;
            if det.is_zero() {
                continue;
            }
            let a = (&c1.gamma * &c2.beta - &c1.beta * &c2.gamma) / &det;
            let b = (&c1.alpha * &c2.gamma - &c1.gamma * &c2.alpha) / &det;
            if !a.is_positive() || !b.is_positive() {
                continue;
            }
            let ratio_a = &b * &arc.t / (&a * &arc.s);
            let candidates = [(ratio_a.clone(), false), (ratio_a.recip(), true)];
            for (rho, upper) in candidates {
                let root = root_rational(&rho, m, 64);
                let Some(v) = root.exact_value() else { continue };
                if v > &Rational::one() {
                    continue;
                }
                let theta = if upper { &two - v } else { v.clone() };
                let pt = arc.point_at(&theta);
                let on = |c: &Rational, x: &Rational| {
                    pow_int(c, r as i32) == pow_int(x, r as i32) * pow_int(&pt.d, m as i32)
                };
                if on(&pt.p1, &a) && on(&pt.p2, &b) {
                    out.push(theta);
                }
            }
        }
    }
    out
}

fn floatify(cons: &[Constraint]) -> Vec<ConstraintF> {
    cons.iter()
        .map(|c| ConstraintF {
            alpha: to_f64(&c.alpha),
            beta: to_f64(&c.beta),
            gamma: to_f64(&c.gamma),
        })
        .collect()
}

/// Builds the monotone pieces of `[0, 2]` for exact search.
fn exact_pieces(
    arc: &ArcParams,
    cons: &[Constraint],
    tangency: &[Option<Tangency>],
    extra: &[Rational],
) -> Vec<(Rational, Rational, Vec<usize>)> {
    let zero = Rational::zero();
    let two = Rational::from_integer(2.into());
    let mut cuts = vec![zero.clone(), Rational::one(), two.clone()];
    cuts.extend(extra.iter().cloned());
    let mut brackets: Vec<(Rational, Rational, usize)> = Vec::new();
    for (k, t) in tangency.iter().enumerate() {
        match t {
            Some(Tangency::Exact(th)) => cuts.push(th.clone()),
            Some(Tangency::Bracket(lo, hi)) => {
                cuts.push(lo.clone());
                cuts.push(hi.clone());
                brackets.push((lo.clone(), hi.clone(), k));
            }
            None => {}
        }
    }
    cuts.extend(vertex_breakpoints(arc, cons));
    cuts.retain(|c| c >= &zero && c <= &two);
    cuts.sort();
    cuts.dedup();
    cuts.windows(2)
        .map(|w| {
            let inner = brackets
                .iter()
                .filter(|(lo, hi, _)| lo < &w[1] && hi > &w[0])
                .map(|(_, _, k)| *k)
                .collect();
            (w[0].clone(), w[1].clone(), inner)
        })
        .collect()
}

fn float_pieces(arc: &ArcParams, cons: &[ConstraintF], extra: &[f64]) -> Vec<(f64, f64, Vec<usize>)> {
    let mut cuts = vec![0.0, 1.0, 2.0];
    cuts.extend_from_slice(extra);
    for c in cons {
        if let Some(t) = arc.tangency_f64(c.alpha, c.beta) {
            cuts.push(t);
        }
    }
    cuts.retain(|c| (0.0..=2.0).contains(c));
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();
    cuts.windows(2).map(|w| (w[0], w[1], Vec::new())).collect()
}

/// Decides whether some arc point satisfies every constraint.
///
/// A float pass with explicit rounding margins settles most instances; the
/// rest are searched with exact signs down to parameter width `tol`.
pub fn find_point(arc: &ArcParams, cons: &[Constraint], tol: &Rational) -> ArcVerdict {
    let Some(cons) = normalize(cons) else {
        return ArcVerdict::Infeasible;
    };
    if arc.is_single_point() {
        let pt = arc.point_at(&Rational::zero());
        let ok = cons.iter().all(|c| c.satisfied_by(arc.sign_at(c, &pt)));
        return if ok {
            ArcVerdict::Feasible {
                theta: Rational::zero(),
            }
        } else {
            ArcVerdict::Infeasible
        };
    }
    let shapes: Vec<Shape> = cons.iter().map(|c| shape_of(&c.alpha, &c.beta)).collect();
    let strict: Vec<bool> = cons.iter().map(|c| c.strict).collect();
    let cons_f = floatify(&cons);

    let fo = FloatOracle {
        arc,
        cons: cons_f.clone(),
        tol: 1e-7,
    };
    let fs = explore(&fo, &shapes, &strict, float_pieces(arc, &cons_f, &[]), Mode::FirstPoint);
    if let Some(th) = fs.point {
        return ArcVerdict::Feasible { theta: from_f64(th) };
    }
    if fs.boundary.is_empty() {
        return ArcVerdict::Infeasible;
    }

    let tangency: Vec<Option<Tangency>> = cons
        .iter()
        .map(|c| arc.tangency(&c.alpha, &c.beta))
        .collect();
    let eo = ExactOracle {
        arc,
        cons: &cons,
        cons_f,
        tangency: tangency.clone(),
        tol: tol.clone(),
    };
    let pieces = exact_pieces(arc, &cons, &tangency, &[]);
    let es = explore(&eo, &shapes, &strict, pieces, Mode::FirstPoint);
    match es.point {
        Some(theta) => ArcVerdict::Feasible { theta },
        None if es.boundary.is_empty() => ArcVerdict::Infeasible,
        None => ArcVerdict::Ambiguous,
    }
}

/// Complete classification of `[0, 2]`, with extra breakpoints (for example
/// the tangency parameter of an objective to be maximized afterwards).
pub fn feasible_region(
    arc: &ArcParams,
    cons: &[Constraint],
    extra: &[Rational],
    tol: &Rational,
) -> ArcRegion {
    let Some(cons) = normalize(cons) else {
        return ArcRegion::default();
    };
    let zero = Rational::zero();
    if arc.is_single_point() {
        let pt = arc.point_at(&zero);
        let ok = cons.iter().all(|c| c.satisfied_by(arc.sign_at(c, &pt)));
        let mut region = ArcRegion::default();
        if ok {
            region.feasible.push((zero.clone(), zero));
        }
        return region;
    }
    let shapes: Vec<Shape> = cons.iter().map(|c| shape_of(&c.alpha, &c.beta)).collect();
    let strict: Vec<bool> = cons.iter().map(|c| c.strict).collect();
    let cons_f = floatify(&cons);
    let tangency: Vec<Option<Tangency>> = cons
        .iter()
        .map(|c| arc.tangency(&c.alpha, &c.beta))
        .collect();
    let eo = ExactOracle {
        arc,
        cons: &cons,
        cons_f,
        tangency: tangency.clone(),
        tol: tol.clone(),
    };
    let pieces = exact_pieces(arc, &cons, &tangency, extra);
    let es = explore(&eo, &shapes, &strict, pieces, Mode::Complete);
    let mut region = ArcRegion {
        feasible: es.feasible,
        boundary: es.boundary,
    };
    // isolated feasible points (closed constraints touching at a breakpoint)
    if region.is_empty() {
        if let Some(p) = es.point {
            region.feasible.push((p.clone(), p));
        }
    }
    region
}
