use std::collections::HashMap;

use super::{ConstraintSet, Label, LabeledPoint};
use crate::arith::{check_dim, RatVector, Rational};
use crate::error::Result;

/// `<coeffs, x> >= rhs`, or `>` when strict.
#[derive(Clone, Debug)]
pub(crate) struct Ineq {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
    pub strict: bool,
}

impl Ineq {
    pub fn weak(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Ineq { coeffs, rhs, strict: false }
    }

    pub fn strict(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Ineq { coeffs, rhs, strict: true }
    }
}

/// Keeps, per normalized left-hand side, only the tightest right-hand side.
/// Returns `false` as soon as a variable-free inequality fails.
fn absorb(store: &mut HashMap<Vec<Rational>, (Rational, bool)>, mut q: Ineq) -> bool {
    let Some(lead) = q.coeffs.iter().find(|c| !c.is_zero()).map(Rational::abs) else {
        let zero = Rational::zero();
        return if q.strict { zero > q.rhs } else { zero >= q.rhs };
    };
    for c in q.coeffs.iter_mut() {
        *c = &*c / &lead;
    }
    q.rhs = q.rhs / &lead;
    match store.get_mut(&q.coeffs) {
        Some((rhs, strict)) => {
            if q.rhs > *rhs || (q.rhs == *rhs && q.strict) {
                *rhs = q.rhs;
                *strict = q.strict;
            }
        }
        None => {
            store.insert(q.coeffs, (q.rhs, q.strict));
        }
    }
    true
}

/// Exact Fourier–Motzkin feasibility of a system of weak and strict
/// inequalities.
pub(crate) fn fm_feasible(ineqs: Vec<Ineq>, nvars: usize) -> bool {
    let mut store = HashMap::new();
    for q in ineqs {
        if !absorb(&mut store, q) {
            return false;
        }
    }
    for k in (0..nvars).rev() {
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), HashMap::new());
        for (coeffs, (rhs, strict)) in store.drain() {
            let q = Ineq { coeffs, rhs, strict };
            if q.coeffs[k].is_positive() {
                pos.push(q);
            } else if q.coeffs[k].is_negative() {
                neg.push(q);
            } else if !absorb(&mut rest, q) {
                return false;
            }
        }
        for p in &pos {
            for n in &neg {
                let sp = p.coeffs[k].recip().expect("nonzero");
                let sn = (-&n.coeffs[k]).recip().expect("nonzero");
                let coeffs = p
                    .coeffs
                    .iter()
                    .zip(&n.coeffs)
                    .map(|(a, b)| a * &sp + b * &sn)
                    .collect();
                let q = Ineq {
                    coeffs,
                    rhs: &p.rhs * &sp + &n.rhs * &sn,
                    strict: p.strict || n.strict,
                };
                if !absorb(&mut rest, q) {
                    return false;
                }
            }
        }
        store = rest;
    }
    true
}

/// Whether some point satisfies every constraint of `s`.
pub fn is_realizable(s: &ConstraintSet) -> bool {
    let ineqs = s
        .iter()
        .map(|c| Ineq::weak(c.a().iter().map(Rational::from).collect(), Rational::from(c.w())))
        .collect();
    fm_feasible(ineqs, s.d())
}

/// Whether some halfspace classifies every labeled point correctly.
///
/// Any halfspace can be rescaled so that its offset lies in {-1, 0, 1};
/// for each offset this is a linear system in the normal, weak for
/// positive points and strict for negative ones.
pub fn is_realizable_points(s: &[LabeledPoint]) -> Result<bool> {
    let Some(first) = s.first() else {
        return Ok(true);
    };
    let d = first.x.dim();
    for p in s {
        check_dim(d, p.x.dim())?;
    }
    for w in [-1i64, 0, 1] {
        let w = Rational::from(w);
        let ineqs = s
            .iter()
            .map(|p| match p.y {
                Label::Pos => Ineq::weak(p.x.entries().to_vec(), w.clone()),
                Label::Neg => Ineq::strict(p.x.entries().iter().map(|v| -v).collect(), -&w),
            })
            .collect();
        if fm_feasible(ineqs, d) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Convex-hull membership phrased as a Fourier–Motzkin system in the
/// barycentric weights.
pub fn fm_hull_membership(x: &RatVector, points: &[RatVector]) -> Result<bool> {
    for p in points {
        check_dim(x.dim(), p.dim())?;
    }
    let n = points.len();
    if n == 0 {
        return Ok(false);
    }
    let unit = |j: usize| {
        (0..n).map(|i| if i == j { Rational::one() } else { Rational::zero() }).collect::<Vec<_>>()
    };
    let mut ineqs: Vec<Ineq> = (0..n).map(|j| Ineq::weak(unit(j), Rational::zero())).collect();
    ineqs.push(Ineq::weak(vec![Rational::one(); n], Rational::one()));
    ineqs.push(Ineq::weak(vec![-Rational::one(); n], -Rational::one()));
    for c in 0..x.dim() {
        let row: Vec<Rational> = points.iter().map(|p| p[c].clone()).collect();
        ineqs.push(Ineq::weak(row.iter().map(|v| -v).collect(), -&x[c]));
        ineqs.push(Ineq::weak(row, x[c].clone()));
    }
    Ok(fm_feasible(ineqs, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Constraint;

    fn set(d: usize, cs: &[(&[i64], i64)]) -> ConstraintSet {
        let items = cs.iter().map(|(a, w)| Constraint::from_i64(a, *w).unwrap()).collect();
        ConstraintSet::new(d, 5, items).unwrap()
    }

    #[test]
    fn realizability_examples() {
        assert!(is_realizable(&set(1, &[(&[1], 0), (&[-1], -1)])));
        assert!(!is_realizable(&set(1, &[(&[1], 1), (&[-1], 0)])));
        let pair = set(2, &[(&[-1, 1], 0), (&[-1, -1], 0)]);
        assert!(is_realizable(&pair));
        let witness = RatVector::from_ints(&[-1, 0]);
        assert_eq!(crate::geometry::depth(&pair, &witness).unwrap(), 2);
        assert!(is_realizable(&ConstraintSet::empty(3, 1).unwrap()));
    }

    #[test]
    fn strictness_matters() {
        // x >= 0 and -x > 0 is infeasible; with -x >= 0 it is feasible.
        let q = |v: i64| Rational::from(v);
        assert!(!fm_feasible(vec![Ineq::weak(vec![q(1)], q(0)), Ineq::strict(vec![q(-1)], q(0))], 1));
        assert!(fm_feasible(vec![Ineq::weak(vec![q(1)], q(0)), Ineq::weak(vec![q(-1)], q(0))], 1));
    }

    #[test]
    fn labeled_realizability() {
        let lp = |x: &[i64], y| LabeledPoint::from_ints(x, y).unwrap();
        assert!(is_realizable_points(&[lp(&[1, 1], 1), lp(&[-1, -1], -1)]).unwrap());
        // The same point with both labels cannot be separated.
        assert!(!is_realizable_points(&[lp(&[1, 0], 1), lp(&[1, 0], -1)]).unwrap());
        // XOR pattern.
        let xor = [lp(&[1, 1], 1), lp(&[-1, -1], 1), lp(&[1, -1], -1), lp(&[-1, 1], -1)];
        assert!(!is_realizable_points(&xor).unwrap());
        assert!(is_realizable_points(&[]).unwrap());
    }

    #[test]
    fn hull_by_elimination() {
        let p = vec![RatVector::from_ints(&[0, 0]), RatVector::from_ints(&[2, 0]), RatVector::from_ints(&[0, 2])];
        assert!(fm_hull_membership(&RatVector::from_ints(&[1, 1]), &p).unwrap());
        assert!(!fm_hull_membership(&RatVector::from_ints(&[2, 1]), &p).unwrap());
    }
}
