//! Lattice point enumeration `G(M) = |M ∩ Λ|`.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{meets_box, Interval, MembershipVerdict, PCombo, Point, SetRep};
use crate::rational::{ceil_int, floor_int, Rational};

/// Candidate scans above this size are refused.
pub const MAX_CANDIDATES: u64 = 50_000_000;

/// `Λ = φ(ℤⁿ)` with `φ(x) = Σ xᵢ vᵢ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    basis: Vec<Point>,
    inverse: Vec<Vec<Rational>>,
}

impl Lattice {
    pub fn new(basis: Vec<Point>) -> Result<Self> {
        let n = basis.len();
        if n == 0 || basis.iter().any(|v| v.dim() != n) {
            return Err(Error::invalid("basis", "need n vectors of dimension n"));
        }
        let inverse = invert(&basis)
            .ok_or_else(|| Error::invalid("basis", "vectors are linearly dependent"))?;
        Ok(Lattice { basis, inverse })
    }

    pub fn standard(n: usize) -> Self {
        Lattice::scaled(n, Rational::one())
    }

    /// `2^(−m) ℤⁿ`.
    pub fn refined(n: usize, m: u32) -> Self {
        Lattice::scaled(n, Rational::new(BigInt::one(), BigInt::one() << m as usize))
    }

    fn scaled(n: usize, c: Rational) -> Self {
        let basis = (0..n)
            .map(|i| {
                let mut v = Point::origin(n);
                v.0[i] = c.clone();
                v
            })
            .collect();
        Lattice::new(basis).expect("nonsingular")
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Point] {
        &self.basis
    }

    pub fn phi(&self, x: &Point) -> Point {
        let n = self.dim();
        Point(
            (0..n)
                .map(|r| (0..n).map(|i| &x.0[i] * &self.basis[i].0[r]).sum())
                .collect(),
        )
    }

    pub fn phi_inv(&self, z: &Point) -> Point {
        Point(
            self.inverse
                .iter()
                .map(|row| row.iter().zip(&z.0).map(|(a, b)| a * b).sum())
                .collect(),
        )
    }

    pub fn determinant(&self) -> Rational {
        det(&self.basis)
    }

    /// `φ⁻¹(S)`, for point sets, polytopes, closed boxes and boxes under a
    /// diagonal basis.
    pub fn pull_back_set(&self, set: &SetRep) -> Result<SetRep> {
        if set.dim() != self.dim() {
            return Err(Error::invalid("lattice", "dimension differs from the set"));
        }
        match set {
            SetRep::FinitePoints { points } => Ok(SetRep::points(points.iter().map(|p| self.phi_inv(p)).collect())),
            SetRep::VPolytope { vertices } => Ok(SetRep::polytope(vertices.iter().map(|p| self.phi_inv(p)).collect())),
            _ => {
                let b = set.as_box().expect("box variant");
                if let Some(d) = self.diagonal() {
                    let ivs: Vec<Interval> = b
                        .iter()
                        .zip(&d)
                        .map(|(iv, di)| {
                            let c = di.recip();
                            if c.is_positive() {
                                iv.scale(&c)
                            } else {
                                iv.scale(&-c).reflect_from(&Rational::zero())
                            }
                        })
                        .collect();
                    return Ok(match set {
                        SetRep::Interval1D { .. } => SetRep::Interval1D { interval: ivs[0].clone() },
                        _ => SetRep::AxisBox { intervals: ivs },
                    });
                }
                if b.iter().any(|iv| iv.lo_open || iv.hi_open) {
                    return Err(Error::Unsupported(
                        "open boxes under a non-diagonal lattice basis".into(),
                    ));
                }
                let v = set.vertices().expect("box variant");
                Ok(SetRep::polytope(v.iter().map(|p| self.phi_inv(p)).collect()))
            }
        }
    }

    /// Diagonal entries when the basis is diagonal.
    fn diagonal(&self) -> Option<Vec<Rational>> {
        let n = self.dim();
        for (i, v) in self.basis.iter().enumerate() {
            for r in 0..n {
                if r != i && !v.0[r].is_zero() {
                    return None;
                }
            }
        }
        Some((0..n).map(|i| self.basis[i].0[i].clone()).collect())
    }

    /// Integer box containing `φ⁻¹` of the rational box `b`.
    fn preimage_box(&self, b: &[(Rational, Rational)]) -> Vec<(BigInt, BigInt)> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let row = &self.inverse[i];
                let (mut lo, mut hi) = (Rational::zero(), Rational::zero());
                for (c, (l, h)) in row.iter().zip(b) {
                    let (x, y) = (c * l, c * h);
                    if x <= y {
                        lo += x;
                        hi += y;
                    } else {
                        lo += y;
                        hi += x;
                    }
                }
                (floor_int(&lo), ceil_int(&hi))
            })
            .collect()
    }
}

fn det(rows: &[Point]) -> Rational {
    let n = rows.len();
    let mut m: Vec<Vec<Rational>> = rows.iter().map(|p| p.0.clone()).collect();
    let mut d = Rational::one();
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return Rational::zero();
        };
        if piv != c {
            m.swap(piv, c);
            d = -d;
        }
        d *= &m[c][c];
        for r in c + 1..n {
            let f = &m[r][c] / &m[c][c];
            for k in c..n {
                let t = &f * &m[c][k];
                m[r][k] -= t;
            }
        }
    }
    d
}

/// Inverse of the matrix whose columns are `basis`.
fn invert(basis: &[Point]) -> Option<Vec<Vec<Rational>>> {
    let n = basis.len();
    let mut a: Vec<Vec<Rational>> = (0..n)
        .map(|r| {
            let mut row: Vec<Rational> = (0..n).map(|c| basis[c].0[r].clone()).collect();
            row.extend((0..n).map(|c| if c == r { Rational::one() } else { Rational::zero() }));
            row
        })
        .collect();
    for c in 0..n {
        let piv = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(piv, c);
        let p = a[c][c].clone();
        for x in a[c].iter_mut() {
            *x /= &p;
        }
        let prow = a[c].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != c && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&prow) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CountResult {
    pub count: u64,
    /// Lattice points whose membership could not be certified, sorted.
    pub ambiguous_points: Vec<Point>,
}

impl CountResult {
    pub fn is_exact(&self) -> bool {
        self.ambiguous_points.is_empty()
    }
}

/// Integers `x` with `x ∈ I`.
pub fn integers_in(iv: &Interval) -> u64 {
    let lo = if iv.lo_open {
        floor_int(&iv.lo) + 1
    } else {
        ceil_int(&iv.lo)
    };
    let hi = if iv.hi_open {
        ceil_int(&iv.hi) - 1
    } else {
        floor_int(&iv.hi)
    };
    if hi < lo {
        0
    } else {
        (hi - lo + BigInt::one()).to_u64().unwrap_or(u64::MAX)
    }
}

fn scan_size(b: &[(BigInt, BigInt)]) -> Result<u64> {
    let mut total: u64 = 1;
    for (lo, hi) in b {
        let w = (hi - lo + BigInt::one()).to_u64().unwrap_or(u64::MAX);
        total = total.saturating_mul(w);
    }
    if total > MAX_CANDIDATES {
        return Err(Error::invalid(
            "set",
            format!("enumeration box has {total} candidates, above {MAX_CANDIDATES}"),
        ));
    }
    Ok(total)
}

/// All integer points of an integer box, in lexicographic order.
fn box_points(b: &[(BigInt, BigInt)]) -> Vec<Point> {
    let mut out = vec![Vec::new()];
    for (lo, hi) in b {
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
    out.into_iter().map(Point).collect()
}

/// `|M ∩ Λ|` for a set given by any representation.
pub fn gcount(set: &SetRep, lattice: &Lattice) -> Result<CountResult> {
    set.validate()?;
    if set.dim() != lattice.dim() {
        return Err(Error::invalid("lattice", "dimension mismatch"));
    }
    if let SetRep::FinitePoints { points } = set {
        let mut pre: Vec<Point> = points.iter().map(|p| lattice.phi_inv(p)).collect();
        pre.sort();
        pre.dedup();
        let count = pre.iter().filter(|x| x.0.iter().all(|c| c.is_integer())).count();
        return Ok(CountResult {
            count: count as u64,
            ambiguous_points: Vec::new(),
        });
    }
    if let (Some(b), Some(d)) = (set.as_box(), lattice.diagonal()) {
        let mut count: u64 = 1;
        for (iv, di) in b.iter().zip(&d) {
            let mut scaled = iv.scale(&di.abs().recip());
            if di.is_negative() {
                scaled = scaled.reflect_from(&Rational::zero());
            }
            count = count.saturating_mul(integers_in(&scaled));
        }
        return Ok(CountResult {
            count,
            ambiguous_points: Vec::new(),
        });
    }
    let scan = lattice.preimage_box(&set.bounds());
    scan_size(&scan)?;
    let mut count: u64 = 0;
    for x in box_points(&scan) {
        if set.contains(&lattice.phi(&x))? {
            count += 1;
        }
    }
    Ok(CountResult {
        count,
        ambiguous_points: Vec::new(),
    })
}

/// `|M ∩ 2^(−m) ℤⁿ|`.
pub fn gcount_refined(set: &SetRep, m: u32) -> Result<CountResult> {
    gcount(set, &Lattice::refined(set.dim(), m))
}

fn map_verdicts<F>(cands: Vec<Point>, f: F) -> Result<Vec<(Point, MembershipVerdict)>>
where
    F: Fn(&Point) -> Result<MembershipVerdict> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    let it = cands.into_par_iter();
    #[cfg(not(feature = "parallel"))]
    let it = cands.into_iter();
    it.map(|x| f(&x).map(|v| (x, v))).collect()
}

/// Verdict for every lattice point of the scan box of `M_p + C`, where `C`
/// is a box (with any open or closed ends) or a finite set such as
/// `{0, 1}ⁿ`. Points are listed in sorted order.
pub fn classify_pcombo_plus_cube(
    combo: &PCombo,
    cube: &SetRep,
    lattice: &Lattice,
    tol: &Rational,
) -> Result<Vec<(Point, MembershipVerdict)>> {
    combo.validate()?;
    cube.validate()?;
    let n = combo.dim();
    if cube.dim() != n || lattice.dim() != n {
        return Err(Error::invalid("cube", "dimension mismatch"));
    }
    let shifts: Vec<Vec<Interval>> = match cube {
        SetRep::FinitePoints { points } => points
            .iter()
            .map(|c| c.0.iter().cloned().map(Interval::point).collect())
            .collect(),
        SetRep::VPolytope { .. } => {
            return Err(Error::Unsupported("the added cube must be a box or a finite set".into()))
        }
        _ => vec![cube.as_box().unwrap()],
    };
    let mb = combo.bounds()?;
    let cb = cube.bounds();
    let region: Vec<(Rational, Rational)> = mb
        .iter()
        .zip(&cb)
        .map(|((ml, mh), (cl, ch))| (ml + cl, mh + ch))
        .collect();
    let scan = lattice.preimage_box(&region);
    scan_size(&scan)?;
    let verdicts = map_verdicts(box_points(&scan), |x| {
        let z = lattice.phi(x);
        let mut ambiguous = None;
        for c in &shifts {
            let target: Vec<Interval> = c.iter().zip(&z.0).map(|(iv, zi)| iv.reflect_from(zi)).collect();
            match meets_box(combo, &target, tol)? {
                MembershipVerdict::Inside => return Ok(MembershipVerdict::Inside),
                MembershipVerdict::Outside => {}
                a => ambiguous = Some(a),
            }
        }
        Ok(ambiguous.unwrap_or(MembershipVerdict::Outside))
    })?;
    let mut out: Vec<(Point, MembershipVerdict)> = verdicts.into_iter().map(|(x, v)| (lattice.phi(&x), v)).collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

/// `|(M_p + C) ∩ Λ|` where `M_p` is the combination and `C` a box (with
/// any open or closed ends) or a finite set such as `{0, 1}ⁿ`.
pub fn gcount_pcombo_plus_cube(
    combo: &PCombo,
    cube: &SetRep,
    lattice: &Lattice,
    tol: &Rational,
) -> Result<CountResult> {
    let mut out = CountResult::default();
    for (z, v) in classify_pcombo_plus_cube(combo, cube, lattice, tol)? {
        match v {
            MembershipVerdict::Inside => out.count += 1,
            MembershipVerdict::Outside => {}
            MembershipVerdict::Ambiguous(_) => out.ambiguous_points.push(z),
        }
    }
    Ok(out)
}

/// `|M_p ∩ Λ|` without an added cube.
pub fn gcount_pcombo(combo: &PCombo, lattice: &Lattice, tol: &Rational) -> Result<CountResult> {
    let origin = SetRep::points(vec![Point::origin(combo.dim())]);
    gcount_pcombo_plus_cube(combo, &origin, lattice, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat, Exponent};

    #[test]
    fn box_counts() {
        let m = 4;
        let b = SetRep::cube(int(0), int(m), 3);
        assert_eq!(gcount(&b, &Lattice::standard(3)).unwrap().count, 125);
        let half = SetRep::Interval1D {
            interval: Interval {
                lo: int(-1),
                hi: rat(1, 2),
                lo_open: true,
                hi_open: false,
            },
        };
        assert_eq!(gcount(&half, &Lattice::standard(1)).unwrap().count, 1);
        assert_eq!(gcount_refined(&SetRep::interval(int(0), int(1)), 1).unwrap().count, 3);
        assert_eq!(gcount_refined(&SetRep::cube(int(0), int(1), 2), 2).unwrap().count, 25);
        let k = 3;
        let c = SetRep::cube(int(-k), int(k), 2);
        assert_eq!(gcount_refined(&c, 3).unwrap().count, (2u64.pow(4) * 3 + 1).pow(2));
    }

    #[test]
    fn general_lattice_matches_conjugation() {
        let basis = vec![Point::new(vec![int(1), int(0)]), Point::new(vec![rat(1, 2), int(1)])];
        let lat = Lattice::new(basis).unwrap();
        assert_eq!(lat.determinant(), int(1));
        let x = Point::from_ints(&[3, -2]);
        assert_eq!(lat.phi_inv(&lat.phi(&x)), x);
        let tri = SetRep::polytope(vec![
            Point::from_ints(&[0, 0]),
            Point::from_ints(&[4, 0]),
            Point::from_ints(&[0, 4]),
        ]);
        // brute force over φ(ℤ²) ∩ tri
        let mut want = 0;
        for a in -10..=10 {
            for b in -10..=10 {
                if tri.contains(&lat.phi(&Point::from_ints(&[a, b]))).unwrap() {
                    want += 1;
                }
            }
        }
        assert_eq!(gcount(&tri, &lat).unwrap().count, want);
        assert!(Lattice::new(vec![Point::from_ints(&[1, 2]), Point::from_ints(&[2, 4])]).is_err());
    }

    #[test]
    fn sharp_cube_family() {
        let m = 3;
        for (lam, p) in [(rat(1, 2), Exponent::from_ratio(2, 1)), (rat(1, 5), Exponent::from_ratio(3, 2))] {
            let k = SetRep::cube(int(0), int(m), 2);
            let c = PCombo::lambda(k.clone(), k, lam, p).unwrap();
            let cube = SetRep::AxisBox {
                intervals: vec![Interval::open(int(-1), int(1)); 2],
            };
            let r = gcount_pcombo_plus_cube(&c, &cube, &Lattice::standard(2), &rat(1, 1_000_000_000)).unwrap();
            assert_eq!(r.count, ((m + 1) * (m + 1)) as u64);
            assert!(r.is_exact());
        }
    }

    #[test]
    fn half_open_cube_floor_formula() {
        // K = [0,1], L = [0,2]: M_p + (−1, a] holds ⌊M_p(1,2;λ) + a⌋ + 1 integers
        let lam = rat(1, 100);
        let k = SetRep::interval(int(0), int(1));
        let l = SetRep::interval(int(0), int(2));
        for (p, a) in [(2, rat(1, 2)), (3, rat(9, 10)), (1, rat(1, 4))] {
            let c = PCombo::lambda(k.clone(), l.clone(), lam.clone(), Exponent::from_ratio(p, 1)).unwrap();
            let cube = SetRep::Interval1D {
                interval: Interval {
                    lo: int(-1),
                    hi: a.clone(),
                    lo_open: true,
                    hi_open: false,
                },
            };
            let r = gcount_pcombo_plus_cube(&c, &cube, &Lattice::standard(1), &rat(1, 1_000_000_000)).unwrap();
            let mp = (0.99 + 0.01 * 2f64.powi(p as i32)).powf(1.0 / p as f64);
            let want = (mp + crate::rational::to_f64(&a)).floor() as u64 + 1;
            assert_eq!(r.count, want, "p={p}");
        }
    }
}
