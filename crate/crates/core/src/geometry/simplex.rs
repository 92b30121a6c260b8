//! Exact phase-one simplex for convex-hull membership.

use num_traits::{Signed, Zero};

use super::Point;
use crate::rational::Rational;

/// Whether `0 ∈ conv(points)`: feasibility of `Σλⱼvⱼ = 0, Σλⱼ = 1, λ ≥ 0`.
pub(crate) fn origin_in_hull(points: &[Point]) -> bool {
    if points.is_empty() {
        return false;
    }
    let n = points[0].dim();
    let m = points.len();
    let rows = n + 1;
    let cols = m + rows;
    // tableau: rows × (cols + 1), last column is the right-hand side
    let mut t: Vec<Vec<Rational>> = (0..rows)
        .map(|i| {
            let mut r = vec![Rational::zero(); cols + 1];
            for (j, p) in points.iter().enumerate() {
                r[j] = if i < n { p.0[i].clone() } else { Rational::from_integer(1.into()) };
            }
            r[m + i] = Rational::from_integer(1.into());
            if i == n {
                r[cols] = Rational::from_integer(1.into());
            }
            r
        })
        .collect();
    let mut basis: Vec<usize> = (m..cols).collect();
    // reduced costs of the phase-one objective Σ artificials
    let mut cost = vec![Rational::zero(); cols + 1];
    for r in &t {
        for j in 0..m {
            cost[j] -= &r[j];
        }
        cost[cols] -= &r[cols];
    }
    loop {
        let Some(enter) = (0..cols).find(|&j| cost[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Rational)> = None;
        for (i, r) in t.iter().enumerate() {
            if r[enter].is_positive() {
                let ratio = &r[cols] / &r[enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((li, _)) = leave else { break };
        let piv = t[li][enter].clone();
        for x in t[li].iter_mut() {
            *x /= &piv;
        }
        let prow = t[li].clone();
        for (i, r) in t.iter_mut().enumerate() {
            if i != li && !r[enter].is_zero() {
                let f = r[enter].clone();
                for (x, y) in r.iter_mut().zip(&prow) {
                    *x -= &f * y;
                }
            }
        }
        if !cost[enter].is_zero() {
            let f = cost[enter].clone();
            for (x, y) in cost.iter_mut().zip(&prow) {
                *x -= &f * y;
            }
        }
        basis[li] = enter;
    }
    cost[cols].is_zero()
}
