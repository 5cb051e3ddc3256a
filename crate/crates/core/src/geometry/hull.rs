use itertools::Itertools;

use super::arrangement::{Arrangement, Generator};
use super::{depth, ConstraintSet};
use crate::arith::{check_dim, RatVector, Rational, RowEchelon};
use crate::error::Result;

/// Convex-hull membership by enumerating subsets of at most `d + 1`
/// points and solving for barycentric coordinates.
pub fn caratheodory_membership(x: &RatVector, points: &[RatVector]) -> Result<bool> {
    let d = x.dim();
    for p in points {
        check_dim(d, p.dim())?;
    }
    for k in 1..=points.len().min(d + 1) {
        for combo in (0..points.len()).combinations(k) {
            let mut rows: Vec<Vec<Rational>> =
                (0..d).map(|c| combo.iter().map(|&j| points[j][c].clone()).collect()).collect();
            rows.push(vec![Rational::one(); k]);
            let mut rhs: Vec<Rational> = x.entries().to_vec();
            rhs.push(Rational::one());
            let ech = RowEchelon::new(k, &rows, &rhs);
            if ech.rank() < k {
                continue;
            }
            if let Some(lambda) = ech.particular_solution() {
                if lambda.iter().all(|l| !l.is_negative()) {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}

/// Is `x` in `conv(points) + cone(rays) + span(lines)`? Decided by an
/// exact phase-one simplex.
pub fn lp_hull_membership(
    x: &[Rational],
    points: &[Vec<Rational>],
    rays: &[Vec<Rational>],
    lines: &[Vec<Rational>],
) -> bool {
    if points.is_empty() {
        return false;
    }
    let d = x.len();
    let mut cols: Vec<Vec<Rational>> = Vec::new();
    for p in points {
        let mut c = p.clone();
        c.push(Rational::one());
        cols.push(c);
    }
    for r in rays {
        let mut c = r.clone();
        c.push(Rational::zero());
        cols.push(c);
    }
    for l in lines {
        let mut c = l.clone();
        c.push(Rational::zero());
        cols.push(c.clone());
        cols.push(c.iter().map(|v| -v).collect());
    }
    let a: Vec<Vec<Rational>> =
        (0..=d).map(|row| cols.iter().map(|c| c[row].clone()).collect()).collect();
    let mut b = x.to_vec();
    b.push(Rational::one());
    nonneg_solution_exists(&a, &b)
}

/// Whether some `z >= 0` satisfies `A z = b` (phase one with Bland's rule).
pub(crate) fn nonneg_solution_exists(a: &[Vec<Rational>], b: &[Rational]) -> bool {
    let m = a.len();
    if m == 0 {
        return true;
    }
    let n = a[0].len();
    let width = n + m + 1;
    let mut t: Vec<Vec<Rational>> = Vec::with_capacity(m);
    for (i, (row, bi)) in a.iter().zip(b).enumerate() {
        let flip = bi.is_negative();
        let mut r: Vec<Rational> = row.iter().map(|v| if flip { -v } else { v.clone() }).collect();
        r.extend((0..m).map(|j| if j == i { Rational::one() } else { Rational::zero() }));
        r.push(if flip { -bi } else { bi.clone() });
        t.push(r);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    let mut obj: Vec<Rational> = (0..width)
        .map(|j| {
            if (n..n + m).contains(&j) {
                Rational::zero()
            } else {
                -t.iter().map(|r| &r[j]).sum::<Rational>()
            }
        })
        .collect();
    while let Some(enter) = (0..n + m).find(|&j| obj[j].is_negative()) {
        let mut leave: Option<(usize, Rational)> = None;
        for (i, row) in t.iter().enumerate() {
            if !row[enter].is_positive() {
                continue;
            }
            let ratio = &row[width - 1] / &row[enter];
            let better = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let Some((pr, _)) = leave else {
            // Unbounded below cannot happen for a sum of nonnegative
            // artificials; treat defensively as infeasible.
            return false;
        };
        let inv = t[pr][enter].recip().expect("positive pivot");
        for v in t[pr].iter_mut() {
            *v *= &inv;
        }
        let pivot = t[pr].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i == pr || row[enter].is_zero() {
                continue;
            }
            let f = row[enter].clone();
            for (j, pv) in pivot.iter().enumerate() {
                if !pv.is_zero() {
                    row[j] -= &f * pv;
                }
            }
        }
        if !obj[enter].is_zero() {
            let f = obj[enter].clone();
            for (j, pv) in pivot.iter().enumerate() {
                if !pv.is_zero() {
                    obj[j] -= &f * pv;
                }
            }
        }
        basis[pr] = enter;
    }
    obj[width - 1].is_zero()
}

/// Brute-force `cdepth`: the largest `k` with `x` in the closed convex
/// hull of the points of depth at least `k`.
///
/// The hull of each level set is generated by the arrangement's minimal
/// flats, its edge directions reaching depth `k` at infinity, and its
/// lineality space, so unbounded arrangements are handled as well.
pub fn cdepth_oracle(s: &ConstraintSet, x: &RatVector) -> Result<usize> {
    let base = depth(s, x)?;
    if base == s.len() {
        return Ok(base);
    }
    let arr = Arrangement::from_constraints(s);
    let verts = arr.vertices();
    let rays = arr.rays();
    let lines = arr.lineality();
    let top = verts.iter().map(|v| v.depth).max().unwrap_or(0);
    let member = |k: usize| {
        let pick = |g: &[Generator]| -> Vec<Vec<Rational>> {
            g.iter().filter(|v| v.depth >= k).map(|v| v.coords.clone()).collect()
        };
        lp_hull_membership(x.entries(), &pick(&verts), &pick(&rays), &lines)
    };
    // Level sets shrink as k grows, so membership is monotone.
    let (mut lo, mut hi) = (base, top.max(base));
    while lo < hi {
        let mid = (lo + hi).div_ceil(2);
        if member(mid) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    Ok(lo)
}
