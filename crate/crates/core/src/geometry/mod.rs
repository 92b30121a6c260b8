//! Bounded sets in ℝⁿ with rational data and their L_p combinations.

pub mod arc;
pub(crate) mod combo;
mod simplex;

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::certified::{root_rational, CertifiedReal};
use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, text, Exponent, Rational};

pub use combo::{
    chebyshev_distance, meets_box, p_combo_membership, p_combo_support, MembershipVerdict,
    PCombo,
};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point(pub Vec<Rational>);

impl Point {
    pub fn new(coords: Vec<Rational>) -> Self {
        Point(coords)
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Point(c.iter().map(|&x| Rational::from_integer(x.into())).collect())
    }

    pub fn origin(n: usize) -> Self {
        Point(vec![Rational::zero(); n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn dot(&self, u: &Point) -> Rational {
        self.0.iter().zip(&u.0).map(|(a, b)| a * b).sum()
    }

    pub fn add(&self, o: &Point) -> Point {
        Point(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &Point) -> Point {
        Point(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, c: &Rational) -> Point {
        Point(self.0.iter().map(|a| a * c).collect())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(crate::rational::to_f64).collect()
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(format_rational).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let parts: Vec<String> = self.0.iter().map(format_rational).collect();
        parts.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<String>::deserialize(d)?;
        parts
            .iter()
            .map(|p| parse_rational(p))
            .collect::<Result<Vec<_>>>()
            .map(Point)
            .map_err(serde::de::Error::custom)
    }
}

/// Interval with independently open or closed ends.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    #[serde(with = "text")]
    pub lo: Rational,
    #[serde(with = "text")]
    pub hi: Rational,
    #[serde(default)]
    pub lo_open: bool,
    #[serde(default)]
    pub hi_open: bool,
}

impl Interval {
    pub fn closed(lo: Rational, hi: Rational) -> Self {
        Interval {
            lo,
            hi,
            lo_open: false,
            hi_open: false,
        }
    }

    pub fn open(lo: Rational, hi: Rational) -> Self {
        Interval {
            lo,
            hi,
            lo_open: true,
            hi_open: true,
        }
    }

    pub fn point(x: Rational) -> Self {
        Interval::closed(x.clone(), x)
    }

    pub fn is_empty(&self) -> bool {
        match self.lo.cmp(&self.hi) {
            Ordering::Greater => true,
            Ordering::Equal => self.lo_open || self.hi_open,
            Ordering::Less => false,
        }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let above = if self.lo_open { x > &self.lo } else { x >= &self.lo };
        let below = if self.hi_open { x < &self.hi } else { x <= &self.hi };
        above && below
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
            lo_open: self.lo_open || o.lo_open,
            hi_open: self.hi_open || o.hi_open,
        }
    }

    /// `c·I` for `c ≥ 0`.
    pub fn scale(&self, c: &Rational) -> Interval {
        if c.is_zero() {
            return Interval::point(Rational::zero());
        }
        Interval {
            lo: &self.lo * c,
            hi: &self.hi * c,
            lo_open: self.lo_open,
            hi_open: self.hi_open,
        }
    }

    /// `x − I`.
    pub fn reflect_from(&self, x: &Rational) -> Interval {
        Interval {
            lo: x - &self.hi,
            hi: x - &self.lo,
            lo_open: self.hi_open,
            hi_open: self.lo_open,
        }
    }

    pub fn closure(&self) -> Interval {
        Interval::closed(self.lo.clone(), self.hi.clone())
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_open { "(" } else { "[" },
            format_rational(&self.lo),
            format_rational(&self.hi),
            if self.hi_open { ")" } else { "]" }
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SetRep {
    FinitePoints { points: Vec<Point> },
    #[serde(rename = "interval")]
    Interval1D { interval: Interval },
    AxisBox { intervals: Vec<Interval> },
    /// Convex hull of the listed points.
    #[serde(rename = "polytope")]
    VPolytope { vertices: Vec<Point> },
}

impl SetRep {
    pub fn points(points: Vec<Point>) -> Self {
        SetRep::FinitePoints { points }
    }

    pub fn interval(lo: Rational, hi: Rational) -> Self {
        SetRep::Interval1D {
            interval: Interval::closed(lo, hi),
        }
    }

    pub fn cube(lo: Rational, hi: Rational, n: usize) -> Self {
        SetRep::AxisBox {
            intervals: vec![Interval::closed(lo, hi); n],
        }
    }

    pub fn polytope(vertices: Vec<Point>) -> Self {
        SetRep::VPolytope { vertices }
    }

    pub fn dim(&self) -> usize {
        match self {
            SetRep::FinitePoints { points } => points.first().map_or(0, Point::dim),
            SetRep::Interval1D { .. } => 1,
            SetRep::AxisBox { intervals } => intervals.len(),
            SetRep::VPolytope { vertices } => vertices.first().map_or(0, Point::dim),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let same_dim = |pts: &[Point], what: &str| -> Result<()> {
            let n = pts.first().map(Point::dim).unwrap_or(0);
            if pts.is_empty() {
                return Err(Error::invalid(what, "must be nonempty"));
            }
            if n == 0 || pts.iter().any(|p| p.dim() != n) {
                return Err(Error::invalid(what, "points must share a dimension n >= 1"));
            }
            Ok(())
        };
        match self {
            SetRep::FinitePoints { points } => same_dim(points, "points"),
            SetRep::VPolytope { vertices } => same_dim(vertices, "vertices"),
            SetRep::Interval1D { interval } => {
                if interval.is_empty() {
                    Err(Error::invalid("interval", "must be nonempty with lo <= hi"))
                } else {
                    Ok(())
                }
            }
            SetRep::AxisBox { intervals } => {
                if intervals.is_empty() {
                    return Err(Error::invalid("intervals", "box needs dimension n >= 1"));
                }
                if intervals.iter().any(Interval::is_empty) {
                    return Err(Error::invalid("intervals", "every side must be nonempty"));
                }
                Ok(())
            }
        }
    }

    pub fn is_convex(&self) -> bool {
        !matches!(self, SetRep::FinitePoints { .. })
    }

    /// Box view of interval and box variants.
    pub fn as_box(&self) -> Option<Vec<Interval>> {
        match self {
            SetRep::Interval1D { interval } => Some(vec![interval.clone()]),
            SetRep::AxisBox { intervals } => Some(intervals.clone()),
            _ => None,
        }
    }

    /// Vertices of the closure, for convex variants.
    pub fn vertices(&self) -> Option<Vec<Point>> {
        match self {
            SetRep::FinitePoints { .. } => None,
            SetRep::VPolytope { vertices } => Some(vertices.clone()),
            _ => {
                let b = self.as_box()?;
                let mut out = vec![Point(Vec::new())];
                for iv in &b {
                    let mut next = Vec::with_capacity(out.len() * 2);
                    for p in &out {
                        for x in [&iv.lo, &iv.hi] {
                            let mut q = p.0.clone();
                            q.push(x.clone());
                            next.push(Point(q));
                        }
                    }
                    next.dedup();
                    out = next;
                }
                out.sort();
                out.dedup();
                Some(out)
            }
        }
    }

    pub fn contains(&self, z: &Point) -> Result<bool> {
        if z.dim() != self.dim() {
            return Err(Error::invalid("z", "dimension mismatch"));
        }
        Ok(match self {
            SetRep::FinitePoints { points } => points.contains(z),
            SetRep::VPolytope { vertices } => {
                let shifted: Vec<Point> = vertices.iter().map(|v| v.sub(z)).collect();
                simplex::origin_in_hull(&shifted)
            }
            _ => {
                let b = self.as_box().expect("box variant");
                b.iter().zip(&z.0).all(|(iv, x)| iv.contains(x))
            }
        })
    }

    /// Coordinatewise bounds of the closure.
    pub fn bounds(&self) -> Vec<(Rational, Rational)> {
        if let Some(b) = self.as_box() {
            return b.into_iter().map(|iv| (iv.lo, iv.hi)).collect();
        }
        let pts = match self {
            SetRep::FinitePoints { points } => points,
            SetRep::VPolytope { vertices } => vertices,
            _ => unreachable!(),
        };
        (0..self.dim())
            .map(|i| {
                let lo = pts.iter().map(|p| &p.0[i]).min().unwrap().clone();
                let hi = pts.iter().map(|p| &p.0[i]).max().unwrap().clone();
                (lo, hi)
            })
            .collect()
    }

    pub fn contains_origin(&self) -> bool {
        self.contains(&Point::origin(self.dim())).unwrap_or(false)
    }

    /// `c·A` for rational `c ≥ 0`.
    pub fn scale(&self, c: &Rational) -> SetRep {
        match self {
            SetRep::FinitePoints { points } => {
                let mut pts: Vec<Point> = points.iter().map(|p| p.scale(c)).collect();
                pts.sort();
                pts.dedup();
                SetRep::FinitePoints { points: pts }
            }
            SetRep::VPolytope { vertices } => SetRep::VPolytope {
                vertices: vertices.iter().map(|p| p.scale(c)).collect(),
            },
            SetRep::Interval1D { interval } => SetRep::Interval1D {
                interval: interval.scale(c),
            },
            SetRep::AxisBox { intervals } => SetRep::AxisBox {
                intervals: intervals.iter().map(|iv| iv.scale(c)).collect(),
            },
        }
    }

    pub fn translate(&self, v: &Point) -> SetRep {
        match self {
            SetRep::FinitePoints { points } => SetRep::FinitePoints {
                points: points.iter().map(|p| p.add(v)).collect(),
            },
            SetRep::VPolytope { vertices } => SetRep::VPolytope {
                vertices: vertices.iter().map(|p| p.add(v)).collect(),
            },
            SetRep::Interval1D { interval } => SetRep::Interval1D {
                interval: interval.add(&Interval::point(v.0[0].clone())),
            },
            SetRep::AxisBox { intervals } => SetRep::AxisBox {
                intervals: intervals
                    .iter()
                    .zip(&v.0)
                    .map(|(iv, x)| iv.add(&Interval::point(x.clone())))
                    .collect(),
            },
        }
    }
}

impl fmt::Display for SetRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |pts: &[Point]| pts.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ");
        match self {
            SetRep::FinitePoints { points } => write!(f, "{{{}}}", list(points)),
            SetRep::Interval1D { interval } => write!(f, "{interval}"),
            SetRep::AxisBox { intervals } => {
                let parts: Vec<String> = intervals.iter().map(|i| i.to_string()).collect();
                f.write_str(&parts.join(" x "))
            }
            SetRep::VPolytope { vertices } => write!(f, "conv{{{}}}", list(vertices)),
        }
    }
}

/// `h(K, u) = max{⟨x, u⟩ : x ∈ K}` for a convex set containing the origin.
pub fn support_function(set: &SetRep, u: &Point) -> Result<CertifiedReal> {
    if !set.is_convex() {
        return Err(Error::Unsupported(
            "support function needs an interval, box or polytope".into(),
        ));
    }
    if u.dim() != set.dim() {
        return Err(Error::invalid("u", "dimension mismatch"));
    }
    if !set.contains_origin() && !closure_contains_origin(set) {
        return Err(Error::invalid("set", "must contain the origin"));
    }
    Ok(CertifiedReal::exact(support_exact(set, u)))
}

fn closure_contains_origin(set: &SetRep) -> bool {
    match set.as_box() {
        Some(b) => b.iter().all(|iv| iv.closure().contains(&Rational::zero())),
        None => false,
    }
}

/// Support value of the closure of a convex variant.
pub(crate) fn support_exact(set: &SetRep, u: &Point) -> Rational {
    match set.as_box() {
        Some(b) => b
            .iter()
            .zip(&u.0)
            .map(|(iv, ui)| if ui.is_negative() { &iv.lo * ui } else { &iv.hi * ui })
            .sum(),
        None => {
            let vs = set.vertices().expect("convex set");
            vs.iter().map(|v| v.dot(u)).max().expect("nonempty")
        }
    }
}

/// `λ ·_p A = λ^(1/p) A`, materialized when the factor is rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledSet {
    pub factor: CertifiedReal,
    pub set: SetRep,
}

impl ScaledSet {
    pub fn materialize(&self) -> Option<SetRep> {
        self.factor.exact_value().map(|c| self.set.scale(c))
    }
}

pub fn p_scalar_mult(lambda: &Rational, set: &SetRep, p: &Exponent) -> Result<ScaledSet> {
    if lambda.is_negative() {
        return Err(Error::invalid("lambda", "must be >= 0"));
    }
    let p = p.check_p()?;
    let factor = if lambda.is_one() || lambda.is_zero() {
        CertifiedReal::exact(lambda.clone())
    } else {
        let x = num_traits::pow::Pow::pow(lambda, p.denom());
        let k = u32::try_from(p.numer().clone())
            .map_err(|_| Error::invalid("p", "numerator too large"))?;
        root_rational(&x, k, crate::certified::DEFAULT_BITS)
    };
    Ok(ScaledSet {
        factor,
        set: set.clone(),
    })
}

pub fn minkowski_sum(a: &SetRep, b: &SetRep) -> Result<SetRep> {
    if a.dim() != b.dim() {
        return Err(Error::invalid("sets", "dimension mismatch"));
    }
    match (a, b) {
        (SetRep::FinitePoints { points: pa }, SetRep::FinitePoints { points: pb }) => {
            let mut out: Vec<Point> = pa
                .iter()
                .flat_map(|x| pb.iter().map(move |y| x.add(y)))
                .collect();
            out.sort();
            out.dedup();
            Ok(SetRep::FinitePoints { points: out })
        }
        (SetRep::VPolytope { vertices: va }, SetRep::VPolytope { vertices: vb }) => {
            let sums: Vec<Point> = va
                .iter()
                .flat_map(|x| vb.iter().map(move |y| x.add(y)))
                .collect();
            let vertices = if a.dim() == 2 { hull2d(&sums) } else { sums };
            Ok(SetRep::VPolytope { vertices })
        }
        (x, y) => match (x.as_box(), y.as_box()) {
            (Some(bx), Some(by)) => {
                let ivs: Vec<Interval> = bx.iter().zip(&by).map(|(i, j)| i.add(j)).collect();
                Ok(match x {
                    SetRep::Interval1D { .. } => SetRep::Interval1D {
                        interval: ivs[0].clone(),
                    },
                    _ => SetRep::AxisBox { intervals: ivs },
                })
            }
            _ => Err(Error::Unsupported(
                "Minkowski sum of mixed representations".into(),
            )),
        },
    }
}

fn cross(o: &Point, a: &Point, b: &Point) -> Rational {
    (&a.0[0] - &o.0[0]) * (&b.0[1] - &o.0[1]) - (&a.0[1] - &o.0[1]) * (&b.0[0] - &o.0[0])
}

/// Counterclockwise hull vertices of planar points (monotone chain).
pub fn hull2d(points: &[Point]) -> Vec<Point> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<Point> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && !cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive() {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && !cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive() {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Outward edge normals (both orientations) of a planar point set's hull.
pub(crate) fn edge_normals2d(points: &[Point]) -> Vec<Point> {
    let h = hull2d(points);
    let mut out = Vec::new();
    if h.len() < 2 {
        return out;
    }
    let m = h.len();
    let edges = if m == 2 { 1 } else { m };
    for i in 0..edges {
        let (a, b) = (&h[i], &h[(i + 1) % m]);
        let n = Point(vec![&b.0[1] - &a.0[1], &a.0[0] - &b.0[0]]);
        out.push(n.scale(&-Rational::one()));
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn support_examples() {
        let bx = SetRep::cube(int(0), int(3), 3);
        assert_eq!(
            support_function(&bx, &Point::from_ints(&[1, 0, 0])).unwrap(),
            CertifiedReal::exact(int(3))
        );
        let k = SetRep::interval(int(0), int(1));
        assert_eq!(
            support_function(&k, &Point::from_ints(&[-1])).unwrap(),
            CertifiedReal::zero()
        );
        let tri = SetRep::polytope(vec![
            Point::from_ints(&[0, 0]),
            Point::from_ints(&[2, 0]),
            Point::from_ints(&[0, 2]),
        ]);
        assert_eq!(
            support_function(&tri, &Point::from_ints(&[1, 1])).unwrap(),
            CertifiedReal::exact(int(2))
        );
        let pts = SetRep::points(vec![Point::from_ints(&[0])]);
        assert!(support_function(&pts, &Point::from_ints(&[1])).is_err());
        let off = SetRep::polytope(vec![Point::from_ints(&[1, 1]), Point::from_ints(&[2, 1])]);
        assert!(support_function(&off, &Point::from_ints(&[1, 0])).is_err());
    }

    #[test]
    fn scalar_mult_examples() {
        let two = Exponent::from_ratio(2, 1);
        let s = p_scalar_mult(&rat(1, 2), &SetRep::interval(int(0), int(2)), &two).unwrap();
        assert!(s.factor.contains(&rat(7071067811865475, 10_000_000_000_000_000)) || s.factor.width_f64() < 1e-30);
        assert!((s.factor.to_f64() * 2.0 - 2f64.sqrt()).abs() < 1e-15);
        let id = p_scalar_mult(&int(1), &SetRep::interval(int(0), int(2)), &Exponent::from_ratio(7, 3)).unwrap();
        assert_eq!(id.materialize().unwrap(), SetRep::interval(int(0), int(2)));
        let q = p_scalar_mult(&rat(1, 4), &SetRep::points(vec![Point::from_ints(&[2, 0])]), &two).unwrap();
        assert_eq!(q.materialize().unwrap(), SetRep::points(vec![Point::from_ints(&[1, 0])]));
    }

    #[test]
    fn minkowski_examples() {
        let b = SetRep::points(vec![Point::from_ints(&[0]), Point::from_ints(&[1])]);
        assert_eq!(
            minkowski_sum(&b, &b).unwrap(),
            SetRep::points(vec![Point::from_ints(&[0]), Point::from_ints(&[1]), Point::from_ints(&[2])])
        );
        assert_eq!(
            minkowski_sum(&SetRep::interval(int(0), int(1)), &SetRep::interval(int(0), int(2))).unwrap(),
            SetRep::interval(int(0), int(3))
        );
        let open = SetRep::AxisBox {
            intervals: vec![Interval::open(int(-1), int(1)); 2],
        };
        assert_eq!(
            minkowski_sum(&SetRep::cube(int(0), int(1), 2), &open).unwrap(),
            SetRep::AxisBox {
                intervals: vec![Interval::open(int(-1), int(2)); 2]
            }
        );
        assert!(minkowski_sum(&b, &SetRep::interval(int(0), int(1))).is_err());
    }

    #[test]
    fn hull_and_containment() {
        let pts: Vec<Point> = [[0, 0], [2, 0], [1, 1], [0, 2], [2, 2], [1, 0]]
            .iter()
            .map(|c| Point::from_ints(c))
            .collect();
        assert_eq!(hull2d(&pts).len(), 4);
        let sq = SetRep::polytope(pts);
        assert!(sq.contains(&Point::new(vec![rat(1, 2), rat(3, 2)])).unwrap());
        assert!(!sq.contains(&Point::new(vec![rat(5, 2), rat(1, 2)])).unwrap());
        let simplex3 = SetRep::polytope(vec![
            Point::from_ints(&[-1, -1, -1]),
            Point::from_ints(&[3, 0, 0]),
            Point::from_ints(&[0, 3, 0]),
            Point::from_ints(&[0, 0, 3]),
        ]);
        assert!(simplex3.contains_origin());
        assert!(!simplex3.contains(&Point::from_ints(&[2, 2, 2])).unwrap());
    }

    #[test]
    fn serde_roundtrip() {
        let s = SetRep::AxisBox {
            intervals: vec![Interval {
                lo: rat(-1, 2),
                hi: int(3),
                lo_open: true,
                hi_open: false,
            }],
        };
        let j = serde_json::to_string(&s).unwrap();
        assert!(j.contains("\"-1/2\""));
        assert_eq!(serde_json::from_str::<SetRep>(&j).unwrap(), s);
    }
}
