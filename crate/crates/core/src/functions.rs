//! Finitely supported functions, the sup-convolution with a cube, the
//! minimal admissible `h` and the discrete Borell–Brascamp–Lieb checks.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certified::{pow_product, CertifiedReal};
use crate::error::{Error, Result};
use crate::geometry::arc::{feasible_region, ArcParams, Constraint, Tangency};
use crate::geometry::combo::point_pair_constraints;
use crate::geometry::{meets_box, Interval, MembershipVerdict, PCombo, Point, SetRep};
use crate::lattice::Lattice;
use crate::means::{alpha_mean, alpha_sum, bbl_exponent, bbl_exponent_ts};
use crate::rational::{ceil_int, floor_int, from_f64, pow_int, text, Exponent, Rational};
use crate::report::CheckReport;

const BITS: u32 = 96;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sample(pub Point, #[serde(with = "text")] pub Rational);

/// A nonnegative function that vanishes off a finite list of points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridFunction {
    pub support: Vec<Sample>,
    pub domain: SetRep,
}

impl GridFunction {
    pub fn new(support: Vec<(Point, Rational)>, domain: SetRep) -> Result<Self> {
        let f = GridFunction {
            support: support.into_iter().map(|(p, v)| Sample(p, v)).collect(),
            domain,
        };
        f.validate()?;
        Ok(f)
    }

    /// `χ` of a finite point set.
    pub fn indicator(points: &[Point]) -> Self {
        GridFunction {
            support: points.iter().map(|p| Sample(p.clone(), Rational::one())).collect(),
            domain: SetRep::points(points.to_vec()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.domain.validate()?;
        let n = self.domain.dim();
        let mut seen = std::collections::BTreeSet::new();
        for Sample(p, v) in &self.support {
            if p.dim() != n {
                return Err(Error::invalid("support", format!("point {p} has the wrong dimension")));
            }
            if v.is_negative() {
                return Err(Error::invalid("support", format!("negative value at {p}")));
            }
            if !self.domain.contains(p)? {
                return Err(Error::invalid("support", format!("point {p} lies outside the domain")));
            }
            if !seen.insert(p.clone()) {
                return Err(Error::invalid("support", format!("point {p} listed twice")));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn value(&self, z: &Point) -> Rational {
        self.support
            .iter()
            .find(|s| &s.0 == z)
            .map(|s| s.1.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn positive(&self) -> impl Iterator<Item = &Sample> {
        self.support.iter().filter(|s| s.1.is_positive())
    }

    /// `Σ_{x ∈ S ∩ ℤⁿ} f(x)`.
    pub fn lattice_sum(&self, set: &SetRep) -> Result<Rational> {
        let mut total = Rational::zero();
        for Sample(p, v) in &self.support {
            if p.0.iter().all(|c| c.is_integer()) && set.contains(p)? {
                total += v;
            }
        }
        Ok(total)
    }

    fn pull_back(&self, lattice: &Lattice) -> Result<GridFunction> {
        Ok(GridFunction {
            support: self
                .support
                .iter()
                .map(|Sample(p, v)| Sample(lattice.phi_inv(p), v.clone()))
                .collect(),
            domain: lattice.pull_back_set(&self.domain)?,
        })
    }
}

/// `φ^◇(z) = sup_{u ∈ (−1,1)ⁿ} φ(z + u)`.
pub fn sup_convolution(phi: &GridFunction, z: &Point) -> Rational {
    let q = vec![Interval::open(-Rational::one(), Rational::one()); z.dim()];
    sup_convolution_box(phi, z, &q)
}

/// `sup_{q ∈ Q} φ(z − q)` for a box `Q`.
pub fn sup_convolution_box(phi: &GridFunction, z: &Point, q: &[Interval]) -> Rational {
    let window: Vec<Interval> = q.iter().zip(&z.0).map(|(iv, zi)| iv.reflect_from(zi)).collect();
    phi.support
        .iter()
        .filter(|s| s.0 .0.iter().zip(&window).all(|(x, iv)| iv.contains(x)))
        .map(|s| s.1.clone())
        .max()
        .unwrap_or_else(Rational::zero)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum HMode {
    Explicit { h: GridFunction },
    MinimalOracle,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BblInstance {
    pub n: usize,
    pub p: Exponent,
    pub lambda: Rational,
    pub alpha: Exponent,
    pub k: SetRep,
    pub l: SetRep,
    pub f: GridFunction,
    pub g: GridFunction,
    pub h: HMode,
}

/// Which inequality the check evaluates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BblForm {
    /// `M_p = (1−λ)·K +_p λ·L` with the open cube `(−1, 1)ⁿ`.
    Lambda,
    /// `M = tK + sL` with the cube `(−1, ⌈t + s⌉)ⁿ`.
    Ts { t: Rational, s: Rational },
}

impl BblInstance {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::invalid("n", "must be positive"));
        }
        self.p.check_p()?;
        if !self.lambda.is_positive() || self.lambda >= Rational::one() {
            return Err(Error::invalid("lambda", "lambda must lie in (0, 1)"));
        }
        bbl_exponent(&self.alpha, self.n, &self.p)?;
        for (name, set) in [("K", &self.k), ("L", &self.l)] {
            set.validate()?;
            if set.dim() != self.n {
                return Err(Error::invalid(name, "dimension differs from n"));
            }
        }
        for (name, func, set) in [("f", &self.f, &self.k), ("g", &self.g, &self.l)] {
            func.validate()?;
            if func.dim() != self.n {
                return Err(Error::invalid(name, "dimension differs from n"));
            }
            for s in func.positive() {
                if !set.contains(&s.0)? {
                    return Err(Error::invalid(name, format!("support point {} lies outside the set", s.0)));
                }
            }
        }
        if let HMode::Explicit { h } = &self.h {
            h.validate()?;
        }
        Ok(())
    }

    fn arc(&self, form: &BblForm) -> Result<ArcParams> {
        match form {
            BblForm::Lambda => ArcParams::new(Rational::one() - &self.lambda, self.lambda.clone(), self.p.check_p()?),
            BblForm::Ts { t, s } => ArcParams::new(t.clone(), s.clone(), &Rational::one()),
        }
    }

    fn combo(&self, form: &BblForm) -> Result<PCombo> {
        match form {
            BblForm::Lambda => PCombo::lambda(self.k.clone(), self.l.clone(), self.lambda.clone(), self.p.clone()),
            BblForm::Ts { t, s } => PCombo::new(
                t.clone(),
                self.k.clone(),
                s.clone(),
                self.l.clone(),
                Exponent::Finite(Rational::one()),
            ),
        }
    }
}

/// The added cube `(−1, 1)ⁿ` or `(−1, ⌈t + s⌉)ⁿ`.
pub fn form_cube(form: &BblForm, n: usize) -> Vec<Interval> {
    let hi = match form {
        BblForm::Lambda => Rational::one(),
        BblForm::Ts { t, s } => Rational::from_integer(ceil_int(&(t + s))),
    };
    vec![Interval::open(-Rational::one(), hi); n]
}

/// `S_α(F, G; a, b)` along the arc, with the value powers cached.
struct Objective {
    alpha: Exponent,
    fv: Rational,
    gv: Rational,
    fa: CertifiedReal,
    ga: CertifiedReal,
}

impl Objective {
    fn new(fv: &Rational, gv: &Rational, alpha: &Exponent) -> Self {
        let pw = |x: &Rational| match alpha {
            Exponent::Finite(a) if a.is_integer() => CertifiedReal::exact(pow_int(x, to_i32(a))),
            Exponent::Finite(a) => CertifiedReal::exact(x.clone()).pow_rational(a, BITS),
            _ => CertifiedReal::exact(x.clone()),
        };
        Objective {
            alpha: alpha.clone(),
            fv: fv.clone(),
            gv: gv.clone(),
            fa: pw(fv),
            ga: pw(gv),
        }
    }

    fn at(&self, arc: &ArcParams, theta: &Rational) -> CertifiedReal {
        let (a, b) = arc.coefficients(theta, BITS);
        match &self.alpha {
            Exponent::PosInf => CertifiedReal::exact(self.fv.clone().max(self.gv.clone())),
            Exponent::NegInf => CertifiedReal::exact(self.fv.clone().min(self.gv.clone())),
            Exponent::Finite(al) => {
                let inner = a.mul(&self.fa).add(&b.mul(&self.ga));
                if al.is_one() {
                    inner
                } else {
                    inner.pow_rational(&al.recip(), BITS)
                }
            }
        }
    }

    /// Global maximum over the arc for `α > 0`: `(T F^(αp) + S G^(αp))^(1/(αp))`.
    fn arc_max(&self, arc: &ArcParams) -> Result<CertifiedReal> {
        let Exponent::Finite(al) = &self.alpha else {
            unreachable!()
        };
        alpha_sum(
            &CertifiedReal::exact(self.fv.clone()),
            &CertifiedReal::exact(self.gv.clone()),
            &CertifiedReal::exact(arc.t.clone()),
            &CertifiedReal::exact(arc.s.clone()),
            &Exponent::Finite(al * &arc.p),
            BITS,
        )
    }

    /// Parameter of the maximum for `α > 0`: exact when possible.
    fn peak(&self, arc: &ArcParams) -> Option<Rational> {
        match (self.fa.exact_value(), self.ga.exact_value()) {
            (Some(fa), Some(ga)) => match arc.tangency(fa, ga)? {
                Tangency::Exact(t) => Some(t),
                Tangency::Bracket(lo, hi) => Some((lo + hi) / Rational::from_integer(2.into())),
            },
            _ => {
                let w = self.ga.to_f64() / self.fa.to_f64();
                let (_, sd) = arc.exponent_parts();
                let th = if w <= 1.0 {
                    w.powf(1.0 / sd as f64)
                } else {
                    2.0 - w.recip().powf(1.0 / sd as f64)
                };
                Some(from_f64(th.clamp(0.0, 2.0)))
            }
        }
    }
}

fn to_i32(a: &Rational) -> i32 {
    i32::try_from(a.to_integer()).expect("small exponent")
}

/// Enclosure of the sup of `S_α` over the arc parameters satisfying `cons`,
/// or `None` when no parameter does.
fn pair_sup(
    arc: &ArcParams,
    cons: &[Constraint],
    obj: &Objective,
    tol: &Rational,
) -> Result<Option<CertifiedReal>> {
    let positive_alpha = matches!(&obj.alpha, Exponent::Finite(a) if a.is_positive());
    let peak = if positive_alpha && !arc.is_single_point() {
        obj.peak(arc)
    } else {
        None
    };
    let extra: Vec<Rational> = peak.iter().cloned().collect();
    let region = feasible_region(arc, cons, &extra, tol);
    if region.is_empty() {
        return Ok(None);
    }
    let mut lo: Option<Rational> = None;
    let mut hi: Option<Rational> = None;
    let mut bump = |x: &CertifiedReal, lower: bool| {
        if lower {
            lo = Some(lo.take().map_or(x.lo().clone(), |v| v.max(x.lo().clone())));
        }
        hi = Some(hi.take().map_or(x.hi().clone(), |v| v.max(x.hi().clone())));
    };
    let global = if positive_alpha && !arc.is_single_point() {
        Some(obj.arc_max(arc)?)
    } else {
        None
    };
    let pieces = region
        .feasible
        .iter()
        .map(|p| (p, true))
        .chain(region.boundary.iter().map(|p| (p, false)));
    for ((a, b), feasible) in pieces {
        bump(&obj.at(arc, a), feasible);
        bump(&obj.at(arc, b), feasible);
        if let (Some(pk), Some(g)) = (&peak, &global) {
            let margin = Rational::new(BigInt::one(), BigInt::one() << 40usize);
            if pk >= &(a - &margin) && pk <= &(b + &margin) {
                bump(g, false);
                if feasible {
                    let c = pk.clone().max(a.clone()).min(b.clone());
                    bump(&obj.at(arc, &c), true);
                }
            }
        }
    }
    let hi = hi.expect("nonempty region");
    Ok(Some(CertifiedReal::new(lo.unwrap_or_else(Rational::zero).min(hi.clone()), hi)))
}

fn target_box(z: &Point, cube: Option<&[Interval]>) -> Vec<Interval> {
    match cube {
        Some(q) => q.iter().zip(&z.0).map(|(iv, zi)| iv.reflect_from(zi)).collect(),
        None => z.0.iter().cloned().map(Interval::point).collect(),
    }
}

fn minimal_h_at(
    inst: &BblInstance,
    form: &BblForm,
    arc: &ArcParams,
    objectives: &[(Point, Point, Objective)],
    target: &[Interval],
    tol: &Rational,
) -> Result<CertifiedReal> {
    let mut best = CertifiedReal::zero();
    if inst.alpha.is_zero() {
        // only μ = λ, where (a, b) = (1 − λ, λ)
        let one_minus = Rational::one() - &inst.lambda;
        for (x, y, obj) in objectives {
            let w = x.scale(&one_minus).add(&y.scale(&inst.lambda));
            if w.0.iter().zip(target).all(|(c, iv)| iv.contains(c)) {
                let v = pow_product(&[(&obj.fv, &one_minus), (&obj.gv, &inst.lambda)], BITS);
                best = best.max(&v);
            }
        }
        return Ok(best);
    }
    let _ = form;
    for (x, y, obj) in objectives {
        let cons = point_pair_constraints(x, y, target);
        if let Some(v) = pair_sup(arc, &cons, obj, tol)? {
            best = best.max(&v);
        }
    }
    Ok(best)
}

fn objectives(inst: &BblInstance) -> Vec<(Point, Point, Objective)> {
    let mut out = Vec::new();
    for fs in inst.f.positive() {
        for gs in inst.g.positive() {
            out.push((fs.0.clone(), gs.0.clone(), Objective::new(&fs.1, &gs.1, &inst.alpha)));
        }
    }
    out
}

fn check_form(inst: &BblInstance, form: &BblForm) -> Result<()> {
    if let BblForm::Ts { t, s } = form {
        if !t.is_positive() || !s.is_positive() {
            return Err(Error::invalid("t, s", "weights must be positive"));
        }
        if inst.alpha.is_zero() {
            return Err(Error::invalid("alpha", "the (t,s) form needs alpha != 0"));
        }
    }
    Ok(())
}

/// Smallest admissible value of `h` at `z`, or of `h^◇(z)` with
/// `relax_cube`.
pub fn minimal_admissible_h(
    inst: &BblInstance,
    form: &BblForm,
    z: &Point,
    relax_cube: bool,
    tol: &Rational,
) -> Result<CertifiedReal> {
    inst.validate()?;
    check_form(inst, form)?;
    if !matches!(inst.h, HMode::MinimalOracle) {
        return Err(Error::invalid("h", "minimal oracle requested for an explicit h"));
    }
    let cube = form_cube(form, inst.n);
    let target = target_box(z, relax_cube.then_some(&cube[..]));
    let arc = inst.arc(form)?;
    minimal_h_at(inst, form, &arc, &objectives(inst), &target, tol)
}

/// Checks the hypothesis of the inequality for an explicit `h`.
fn check_admissible(inst: &BblInstance, form: &BblForm, h: &GridFunction) -> Result<()> {
    let arc = inst.arc(form)?;
    for (x, y, obj) in objectives(inst) {
        let (w, need) = if inst.alpha.is_zero() {
            let one_minus = Rational::one() - &inst.lambda;
            let w = x.scale(&one_minus).add(&y.scale(&inst.lambda));
            (w, pow_product(&[(&obj.fv, &one_minus), (&obj.gv, &inst.lambda)], BITS))
        } else if arc.is_single_point() {
            let (a, b) = arc.coefficients(&Rational::zero(), BITS);
            let (Some(a), Some(b)) = (a.exact_value(), b.exact_value()) else {
                return Err(Error::NotAdmissible("irrational combination weights".into()));
            };
            (x.scale(a).add(&y.scale(b)), obj.at(&arc, &Rational::zero()))
        } else if x.0.iter().chain(&y.0).all(|c| c.is_zero()) {
            let top = if matches!(&inst.alpha, Exponent::Finite(a) if a.is_positive()) {
                obj.arc_max(&arc)?
            } else {
                obj.at(&arc, &Rational::zero()).max(&obj.at(&arc, &Rational::from_integer(2.into())))
            };
            (x.clone(), top)
        } else {
            return Err(Error::NotAdmissible(format!(
                "h vanishes on most of the curve from x = {x} to y = {y}"
            )));
        };
        let have = CertifiedReal::exact(h.value(&w));
        if have.cmp_certified(&need) != Some(std::cmp::Ordering::Greater)
            && have.cmp_certified(&need) != Some(std::cmp::Ordering::Equal)
            && !(need.width() < crate::report::equality_eps() && have.contains(need.lo()))
        {
            return Err(Error::NotAdmissible(format!("h({w}) is below the required value")));
        }
    }
    Ok(())
}

/// Integer candidates for `z` with `h^◇(z) > 0`.
fn candidates(inst: &BblInstance, form: &BblForm, cube: &[Interval]) -> Result<Vec<Point>> {
    let n = inst.n;
    let sup_f: Vec<Point> = inst.f.positive().map(|s| s.0.clone()).collect();
    let sup_g: Vec<Point> = inst.g.positive().map(|s| s.0.clone()).collect();
    if sup_f.is_empty() || sup_g.is_empty() {
        return Ok(Vec::new());
    }
    let reach = match form {
        BblForm::Lambda => PCombo::lambda(
            SetRep::points(sup_f),
            SetRep::points(sup_g),
            inst.lambda.clone(),
            inst.p.clone(),
        )?,
        BblForm::Ts { t, s } => PCombo::new(
            t.clone(),
            SetRep::points(sup_f),
            s.clone(),
            SetRep::points(sup_g),
            Exponent::Finite(Rational::one()),
        )?,
    };
    let b = reach.bounds()?;
    let ranges: Vec<(BigInt, BigInt)> = b
        .iter()
        .zip(cube)
        .map(|((lo, hi), q)| (floor_int(&(lo + &q.lo)), ceil_int(&(hi + &q.hi))))
        .collect();
    let mut out = vec![Vec::new()];
    for (lo, hi) in &ranges {
        let mut next = Vec::new();
        for p in &out {
            let mut x = lo.clone();
            while &x <= hi {
                let mut q: Vec<Rational> = p.clone();
                q.push(Rational::from_integer(x.clone()));
                next.push(q);
                x += 1;
            }
        }
        out = next;
    }
    debug_assert!(out.iter().all(|p| p.len() == n));
    Ok(out.into_iter().map(Point).collect())
}

/// The discrete inequality `Σ_{z ∈ (M + Q) ∩ ℤⁿ} h^◇(z) ≥ RHS`.
pub fn check_discrete_bbl(inst: &BblInstance, form: &BblForm, tol: &Rational) -> Result<CheckReport> {
    let start = Instant::now();
    inst.validate()?;
    check_form(inst, form)?;
    let n = inst.n;
    let cube = form_cube(form, n);
    let arc = inst.arc(form)?;
    let sum_f = inst.f.lattice_sum(&inst.k)?;
    let sum_g = inst.g.lattice_sum(&inst.l)?;
    let (rhs, id) = match form {
        BblForm::Lambda => {
            let e = bbl_exponent(&inst.alpha, n, &inst.p)?;
            let r = alpha_mean(&sum_f.clone().into(), &sum_g.clone().into(), &inst.lambda, &e, BITS)?;
            (r, "discrete-bbl")
        }
        BblForm::Ts { t, s } => {
            let e = bbl_exponent_ts(&inst.alpha, n)?;
            let r = alpha_sum(&sum_f.clone().into(), &sum_g.clone().into(), &t.clone().into(), &s.clone().into(), &e, BITS)?;
            (r, "discrete-bbl-ts")
        }
    };
    let cands = candidates(inst, form, &cube)?;
    let mut ambiguous = 0usize;
    let lhs = match &inst.h {
        HMode::MinimalOracle => {
            let objs = objectives(inst);
            let eval = |z: &Point| -> Result<CertifiedReal> {
                let target = target_box(z, Some(&cube));
                minimal_h_at(inst, form, &arc, &objs, &target, tol)
            };
            #[cfg(feature = "parallel")]
            let vals: Vec<Result<CertifiedReal>> = cands.par_iter().map(eval).collect();
            #[cfg(not(feature = "parallel"))]
            let vals: Vec<Result<CertifiedReal>> = cands.iter().map(eval).collect();
            let mut total = CertifiedReal::zero();
            for v in vals {
                total = total.add(&v?);
            }
            total
        }
        HMode::Explicit { h } => {
            check_admissible(inst, form, h)?;
            let combo = inst.combo(form)?;
            let mut total = Rational::zero();
            let mut near: BTreeMap<Point, ()> = BTreeMap::new();
            for s in h.positive() {
                let window: Vec<(BigInt, BigInt)> = s
                    .0
                     .0
                    .iter()
                    .zip(&cube)
                    .map(|(w, q)| (floor_int(&(w + &q.lo)), ceil_int(&(w + &q.hi))))
                    .collect();
                let mut pts = vec![Vec::new()];
                for (lo, hi) in &window {
                    let mut next = Vec::new();
                    for p in &pts {
                        let mut x = lo.clone();
                        while &x <= hi {
                            let mut q: Vec<Rational> = p.clone();
                            q.push(Rational::from_integer(x.clone()));
                            next.push(q);
                            x += 1;
                        }
                    }
                    pts = next;
                }
                for p in pts {
                    near.insert(Point(p), ());
                }
            }
            for z in near.keys() {
                let v = sup_convolution_box(h, z, &cube);
                if v.is_zero() {
                    continue;
                }
                let target = target_box(z, Some(&cube));
                match meets_box(&combo, &target, tol)? {
                    MembershipVerdict::Inside => total += v,
                    MembershipVerdict::Outside => {}
                    MembershipVerdict::Ambiguous(_) => ambiguous += 1,
                }
            }
            CertifiedReal::exact(total)
        }
    };
    let report = CheckReport::new(id, lhs, rhs, ambiguous > 0)
        .with("n", n)
        .with("p", &inst.p)
        .with("lambda", &inst.lambda)
        .with("alpha", &inst.alpha)
        .with("sum_f", &sum_f)
        .with("sum_g", &sum_g)
        .with("candidates", cands.len())
        .with("ambiguous_points", ambiguous);
    let report = match form {
        BblForm::Lambda => report,
        BblForm::Ts { t, s } => report.with("t", t).with("s", s),
    };
    Ok(report.timed(start))
}

/// The inequality over `Λ = φ(ℤⁿ)`, evaluated by conjugating to `ℤⁿ`.
pub fn check_lattice_variant(inst: &BblInstance, lattice: &Lattice, tol: &Rational) -> Result<CheckReport> {
    if lattice.dim() != inst.n {
        return Err(Error::invalid("lattice", "dimension differs from n"));
    }
    let pulled = BblInstance {
        k: lattice.pull_back_set(&inst.k)?,
        l: lattice.pull_back_set(&inst.l)?,
        f: inst.f.pull_back(lattice)?,
        g: inst.g.pull_back(lattice)?,
        h: match &inst.h {
            HMode::MinimalOracle => HMode::MinimalOracle,
            HMode::Explicit { h } => HMode::Explicit { h: h.pull_back(lattice)? },
        },
        ..inst.clone()
    };
    let mut r = check_discrete_bbl(&pulled, &BblForm::Lambda, tol)?;
    r.inequality_id = "discrete-bbl-lattice".into();
    let basis: Vec<String> = lattice.basis().iter().map(|v| v.to_string()).collect();
    Ok(r.with("basis", basis.join(" ")))
}

/// Piecewise constant function: the largest value among the boxes
/// containing a point, `0` off all boxes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiecewiseConstant {
    pub pieces: Vec<Piece>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Piece(pub Vec<Interval>, #[serde(with = "text")] pub Rational);

impl PiecewiseConstant {
    pub fn indicator(b: Vec<Interval>) -> Self {
        PiecewiseConstant {
            pieces: vec![Piece(b, Rational::one())],
        }
    }

    pub fn dim(&self) -> usize {
        self.pieces.first().map_or(0, |p| p.0.len())
    }

    pub fn value(&self, x: &Point) -> Rational {
        self.pieces
            .iter()
            .filter(|Piece(b, _)| b.iter().zip(&x.0).all(|(iv, c)| iv.contains(c)))
            .map(|Piece(_, v)| v.clone())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// `∫ f` when the pieces are pairwise disjoint.
    pub fn integral_disjoint(&self) -> Rational {
        self.pieces
            .iter()
            .map(|Piece(b, v)| b.iter().map(|iv| &iv.hi - &iv.lo).product::<Rational>() * v)
            .sum()
    }
}

/// `f_m(x) = sup_{x + [0, 2^(−m))ⁿ} f` on `C₀ ∩ 2^(−m)ℤⁿ` with `C₀` the
/// half-open version `[lo, hi)ⁿ` of `C`; zero values are omitted.
pub fn cell_sup_discretize(f: &PiecewiseConstant, m: u32, c: &SetRep) -> Result<GridFunction> {
    let SetRep::AxisBox { intervals: cb } = c else {
        return Err(Error::invalid("C", "must be an axis box"));
    };
    if f.dim() != cb.len() {
        return Err(Error::invalid("f", "dimension differs from C"));
    }
    let scale = Rational::from_integer(BigInt::one() << m as usize);
    let step = scale.recip();
    let mut values: BTreeMap<Vec<BigInt>, Rational> = BTreeMap::new();
    for Piece(b, v) in &f.pieces {
        if !v.is_positive() || b.iter().any(Interval::is_empty) {
            continue;
        }
        // grid indices i with [i h, (i+1) h) ∩ piece ∩ C₀ ≠ ∅
        let mut ranges = Vec::new();
        for (iv, ci) in b.iter().zip(cb) {
            let lo_i = floor_int(&(&iv.lo * &scale)).max(ceil_int(&(&ci.lo * &scale)));
            let cap = &ci.hi * &scale;
            let mut hi_i = floor_int(&(&iv.hi * &scale));
            if iv.hi_open && Rational::from_integer(hi_i.clone()) == &iv.hi * &scale {
                hi_i -= 1;
            }
            let c0_top = ceil_int(&cap) - 1;
            ranges.push((lo_i, hi_i.min(c0_top)));
        }
        let mut idx = vec![Vec::new()];
        for (lo, hi) in &ranges {
            let mut next = Vec::new();
            for p in &idx {
                let mut x = lo.clone();
                while &x <= hi {
                    let mut q: Vec<BigInt> = p.clone();
                    q.push(x.clone());
                    next.push(q);
                    x += 1;
                }
            }
            idx = next;
        }
        for i in idx {
            let cell_meets = i.iter().zip(b).all(|(k, iv)| {
                let x = Rational::from_integer(k.clone()) * &step;
                let top = &x + &step;
                let below_top = iv.lo < top;
                let above_x = if iv.hi_open { iv.hi > x } else { iv.hi >= x };
                below_top && above_x
            });
            if cell_meets {
                let e = values.entry(i).or_insert_with(Rational::zero);
                if v > e {
                    *e = v.clone();
                }
            }
        }
    }
    let support: Vec<Sample> = values
        .into_iter()
        .map(|(i, v)| {
            Sample(
                Point(i.into_iter().map(|k| Rational::from_integer(k) * &step).collect()),
                v,
            )
        })
        .collect();
    Ok(GridFunction {
        support,
        domain: c.clone(),
    })
}

/// `2^(−mn) Σ f_m(x)`.
pub fn upper_riemann_sum(fm: &GridFunction, m: u32) -> Rational {
    let n = fm.dim();
    let total: Rational = fm.support.iter().map(|s| s.1.clone()).sum();
    total / Rational::from_integer(BigInt::one() << (m as usize * n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat, to_f64};
    use crate::report::Verdict;

    fn pts1(xs: &[i64]) -> Vec<Point> {
        xs.iter().map(|&x| Point::from_ints(&[x])).collect()
    }

    fn tol() -> Rational {
        rat(1, 1_000_000_000_000)
    }

    #[test]
    fn sup_convolution_examples() {
        let f = GridFunction::new(
            vec![(Point::from_ints(&[0]), int(1)), (Point::from_ints(&[2]), int(3))],
            SetRep::interval(int(0), int(2)),
        )
        .unwrap();
        assert_eq!(sup_convolution(&f, &Point::from_ints(&[1])), int(0));
        assert_eq!(sup_convolution(&f, &Point::new(vec![rat(3, 2)])), int(3));
        let single = GridFunction::new(vec![(Point::from_ints(&[0, 0]), rat(5, 2))], SetRep::cube(int(0), int(0), 2)).unwrap();
        assert_eq!(sup_convolution(&single, &Point::new(vec![rat(1, 2), rat(-9, 10)])), rat(5, 2));
        assert_eq!(sup_convolution(&single, &Point::from_ints(&[1, 0])), int(0));
        let chi = GridFunction::indicator(&pts1(&[0, 3]));
        for z in -2..=5 {
            let want = if [0, 3].iter().any(|&c| (z - c as i64).abs() < 1) { 1 } else { 0 };
            assert_eq!(sup_convolution(&chi, &Point::from_ints(&[z])), int(want));
        }
    }

    fn point_mass_instance(a: Rational, b: Rational, alpha: Exponent, p: Exponent, lambda: Rational) -> BblInstance {
        let origin = vec![Point::from_ints(&[0])];
        BblInstance {
            n: 1,
            p,
            lambda,
            alpha,
            k: SetRep::points(origin.clone()),
            l: SetRep::points(origin.clone()),
            f: GridFunction::new(vec![(origin[0].clone(), a)], SetRep::points(origin.clone())).unwrap(),
            g: GridFunction::new(vec![(origin[0].clone(), b)], SetRep::points(origin.clone())).unwrap(),
            h: HMode::MinimalOracle,
        }
    }

    #[test]
    fn minimal_h_point_masses_reach_p_alpha_mean() {
        for (alpha, p) in [(rat(1, 1), rat(2, 1)), (rat(2, 1), rat(3, 2)), (rat(1, 2), rat(3, 1))] {
            let lam = rat(1, 3);
            let inst = point_mass_instance(int(2), int(5), Exponent::Finite(alpha.clone()), Exponent::Finite(p.clone()), lam.clone());
            let h = minimal_admissible_h(&inst, &BblForm::Lambda, &Point::from_ints(&[0]), false, &tol()).unwrap();
            let want = alpha_mean(&int(2).into(), &int(5).into(), &lam, &Exponent::Finite(&alpha * &p), BITS).unwrap();
            assert!((h.to_f64() - want.to_f64()).abs() < 1e-12, "alpha={alpha} p={p}: {} vs {}", h.to_f64(), want.to_f64());
            assert!(h.width_f64() < 1e-12);
            // brute force over μ
            let (af, pf) = (to_f64(&alpha), to_f64(&p));
            let q = pf / (pf - 1.0);
            let mut best: f64 = 0.0;
            for i in 0..=100_000 {
                let mu = i as f64 / 100_000.0;
                let t = (2.0f64 / 3.0).powf(1.0 / pf) * (1.0 - mu).powf(1.0 / q);
                let s = (1.0f64 / 3.0).powf(1.0 / pf) * mu.powf(1.0 / q);
                best = best.max((t * 2f64.powf(af) + s * 5f64.powf(af)).powf(1.0 / af));
            }
            assert!(h.to_f64() >= best - 1e-12 && h.to_f64() - best < 1e-6);
        }
    }

    #[test]
    fn minimal_h_zero_and_infinite_alpha() {
        let inst = point_mass_instance(int(4), int(9), Exponent::from_ratio(0, 1), Exponent::from_ratio(2, 1), rat(1, 2));
        let h = minimal_admissible_h(&inst, &BblForm::Lambda, &Point::from_ints(&[0]), false, &tol()).unwrap();
        assert_eq!(h, CertifiedReal::exact(int(6)));
        let inst = point_mass_instance(int(4), int(9), Exponent::PosInf, Exponent::from_ratio(2, 1), rat(1, 2));
        let h = minimal_admissible_h(&inst, &BblForm::Lambda, &Point::from_ints(&[0]), false, &tol()).unwrap();
        assert_eq!(h, CertifiedReal::exact(int(9)));
        let mut zero = inst.clone();
        zero.f = GridFunction::new(vec![(Point::from_ints(&[0]), int(0))], zero.k.clone()).unwrap();
        let h = minimal_admissible_h(&zero, &BblForm::Lambda, &Point::from_ints(&[0]), true, &tol()).unwrap();
        assert_eq!(h, CertifiedReal::zero());
    }

    #[test]
    fn characteristic_functions_reach_set() {
        // f = χ_K, g = χ_L, α = ∞: h = 1 on the reachable set
        let k = pts1(&[0, 1]);
        let l = pts1(&[0, 2]);
        let inst = BblInstance {
            n: 1,
            p: Exponent::from_ratio(2, 1),
            lambda: rat(1, 2),
            alpha: Exponent::PosInf,
            k: SetRep::points(k.clone()),
            l: SetRep::points(l.clone()),
            f: GridFunction::indicator(&k),
            g: GridFunction::indicator(&l),
            h: HMode::MinimalOracle,
        };
        let at = |z: Rational, relax: bool| {
            minimal_admissible_h(&inst, &BblForm::Lambda, &Point::new(vec![z]), relax, &tol()).unwrap()
        };
        // single parameter hits are only bracketed
        assert_eq!(at(int(1), false).hi(), &int(1));
        assert_eq!(at(rat(3, 2), false).hi(), &int(1));
        assert_eq!(at(rat(8, 5), false), CertifiedReal::zero());
        assert_eq!(at(int(-1), false), CertifiedReal::zero());
        assert_eq!(at(int(2), true), CertifiedReal::one());
        assert_eq!(at(int(3), true), CertifiedReal::zero());
    }

    #[test]
    fn point_mass_check_is_equality() {
        for alpha in [Exponent::from_ratio(1, 1), Exponent::from_ratio(0, 1), Exponent::PosInf] {
            let inst = point_mass_instance(int(1), int(1), alpha.clone(), Exponent::from_ratio(3, 2), rat(1, 3));
            let r = check_discrete_bbl(&inst, &BblForm::Lambda, &tol()).unwrap();
            assert_eq!(r.verdict, Verdict::HoldsWithEquality, "alpha={alpha}: {:?} vs {:?}", r.lhs, r.rhs);
        }
        // for α < 0 the μ = 1 end of the hypothesis gives s^(1/α) g > g
        let inst = point_mass_instance(int(1), int(1), Exponent::from_ratio(-1, 2), Exponent::from_ratio(3, 2), rat(1, 3));
        let r = check_discrete_bbl(&inst, &BblForm::Lambda, &tol()).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        let s1 = (1.0f64 / 3.0).powf(2.0 / 3.0);
        assert!((r.lhs.to_f64() - s1.powf(-2.0)).abs() < 1e-12);
    }

    #[test]
    fn ts_form_uses_the_long_cube() {
        // t = s = 1, K = L = {0}, f = g = 1, α = ∞: Σ h^◇ over (−1, 2) is 2
        let mut inst = point_mass_instance(int(1), int(1), Exponent::PosInf, Exponent::from_ratio(1, 1), rat(1, 2));
        inst.h = HMode::MinimalOracle;
        let r = check_discrete_bbl(&inst, &BblForm::Ts { t: int(1), s: int(1) }, &tol()).unwrap();
        assert_eq!(r.lhs, CertifiedReal::exact(int(2)));
        assert_eq!(r.verdict, Verdict::HoldsWithEquality);
    }

    #[test]
    fn explicit_h_prekopa_leindler() {
        let k = pts1(&[0, 2]);
        let l = pts1(&[0, 2]);
        let mut inst = BblInstance {
            n: 1,
            p: Exponent::from_ratio(2, 1),
            lambda: rat(1, 2),
            alpha: Exponent::from_ratio(0, 1),
            k: SetRep::points(k.clone()),
            l: SetRep::points(l.clone()),
            f: GridFunction::indicator(&k),
            g: GridFunction::indicator(&l),
            h: HMode::Explicit {
                h: GridFunction::indicator(&pts1(&[0, 1, 2])),
            },
        };
        let r = check_discrete_bbl(&inst, &BblForm::Lambda, &tol()).unwrap();
        assert!(r.verdict.holds());
        inst.h = HMode::Explicit {
            h: GridFunction::indicator(&pts1(&[0, 2])),
        };
        assert!(matches!(check_discrete_bbl(&inst, &BblForm::Lambda, &tol()), Err(Error::NotAdmissible(_))));
    }

    #[test]
    fn lattice_variant_identity_and_scaling() {
        let k = pts1(&[0, 1, 3]);
        let l = pts1(&[0, 2]);
        let inst = BblInstance {
            n: 1,
            p: Exponent::from_ratio(2, 1),
            lambda: rat(1, 3),
            alpha: Exponent::from_ratio(1, 1),
            k: SetRep::points(k.clone()),
            l: SetRep::points(l.clone()),
            f: GridFunction::new(vec![(k[0].clone(), int(1)), (k[1].clone(), int(2)), (k[2].clone(), rat(1, 2))], SetRep::points(k.clone())).unwrap(),
            g: GridFunction::new(vec![(l[0].clone(), int(3)), (l[1].clone(), int(1))], SetRep::points(l.clone())).unwrap(),
            h: HMode::MinimalOracle,
        };
        let plain = check_discrete_bbl(&inst, &BblForm::Lambda, &tol()).unwrap();
        assert_eq!(plain.verdict, Verdict::Holds);
        let id = check_lattice_variant(&inst, &Lattice::standard(1), &tol()).unwrap();
        assert_eq!((id.lhs.clone(), id.rhs.clone(), id.verdict), (plain.lhs.clone(), plain.rhs.clone(), plain.verdict));
        let two = int(2);
        let scaled = BblInstance {
            k: inst.k.scale(&two),
            l: inst.l.scale(&two),
            f: GridFunction {
                support: inst.f.support.iter().map(|s| Sample(s.0.scale(&two), s.1.clone())).collect(),
                domain: inst.f.domain.scale(&two),
            },
            g: GridFunction {
                support: inst.g.support.iter().map(|s| Sample(s.0.scale(&two), s.1.clone())).collect(),
                domain: inst.g.domain.scale(&two),
            },
            ..inst.clone()
        };
        let lat2 = Lattice::new(vec![Point::from_ints(&[2])]).unwrap();
        let r = check_lattice_variant(&scaled, &lat2, &tol()).unwrap();
        assert_eq!((r.lhs, r.rhs, r.verdict), (plain.lhs, plain.rhs, plain.verdict));
    }

    #[test]
    fn cell_sup_examples() {
        let f = PiecewiseConstant::indicator(vec![Interval::closed(int(0), int(1))]);
        let c = SetRep::cube(int(-2), int(2), 1);
        let fm = cell_sup_discretize(&f, 1, &c).unwrap();
        let xs: Vec<Rational> = fm.support.iter().map(|s| s.0 .0[0].clone()).collect();
        assert_eq!(xs, vec![int(0), rat(1, 2), int(1)]);
        assert_eq!(upper_riemann_sum(&fm, 1), rat(3, 2));
        // with C = [−1, 1] the cell at 1 lies outside C₀ = [−1, 1)
        let fm = cell_sup_discretize(&f, 1, &SetRep::cube(int(-1), int(1), 1)).unwrap();
        assert_eq!(upper_riemann_sum(&fm, 1), int(1));
        let cst = PiecewiseConstant {
            pieces: vec![Piece(vec![Interval::closed(int(0), int(1)); 2], rat(7, 3))],
        };
        for m in 0..4 {
            let fm = cell_sup_discretize(&cst, m, &SetRep::cube(int(0), int(1), 2)).unwrap();
            assert_eq!(upper_riemann_sum(&fm, m), rat(7, 3));
        }
        let stair = PiecewiseConstant {
            pieces: vec![
                Piece(vec![Interval { lo: int(0), hi: rat(1, 3), lo_open: false, hi_open: true }], int(2)),
                Piece(vec![Interval::closed(rat(1, 3), int(1))], int(1)),
            ],
        };
        let mut last = None;
        for m in 0..=8 {
            let fm = cell_sup_discretize(&stair, m, &SetRep::cube(int(-2), int(2), 1)).unwrap();
            for s in &fm.support {
                let x = &s.0 .0[0];
                let top = x + rat(1, 1 << m);
                let want = if x < &rat(1, 3) && top > int(0) { int(2) } else if x <= &int(1) && top > rat(1, 3) { int(1) } else { int(0) };
                assert_eq!(s.1, want);
            }
            let u = upper_riemann_sum(&fm, m);
            if let Some(prev) = last {
                assert!(u <= prev);
            }
            assert!(u >= stair.integral_disjoint());
            last = Some(u);
        }
    }
}
