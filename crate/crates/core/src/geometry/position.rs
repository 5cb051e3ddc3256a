use itertools::Itertools;
use num_bigint::BigInt;

use super::{Hypothesis, LabeledPoint};
use crate::arith::{check_dim, determinant_raw, RatVector, Rational};
use crate::error::Result;

/// True iff no `d + 1` of the points lie on a common hyperplane.
pub fn general_position_check(points: &[RatVector]) -> Result<bool> {
    let Some(first) = points.first() else {
        return Ok(true);
    };
    let d = first.dim();
    for p in points {
        check_dim(d, p.dim())?;
    }
    for combo in (0..points.len()).combinations(d + 1) {
        let last = &points[combo[d]];
        let rows: Vec<Vec<Rational>> = combo[..d]
            .iter()
            .map(|&i| points[i].iter().zip(last.iter()).map(|(a, b)| a - b).collect())
            .collect();
        if determinant_raw(&rows).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every point at Euclidean distance at least `1/xp` from the boundary of
/// `h`, compared exactly through squares.
pub fn margin_satisfied(s: &[LabeledPoint], h: &Hypothesis, xp: &BigInt) -> Result<bool> {
    let norm2 = h.a().norm_squared();
    let xp2 = Rational::from(xp * xp);
    for p in s {
        let gap = h.a().dot(&p.x)? - h.w();
        if &gap * &gap * &xp2 < norm2 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn general_position_examples() {
        let pts = |v: &[[i64; 2]]| v.iter().map(|p| RatVector::from_ints(p)).collect::<Vec<_>>();
        assert!(!general_position_check(&pts(&[[0, 0], [1, 1], [2, 2]])).unwrap());
        assert!(general_position_check(&pts(&[[0, 0], [1, 0], [0, 1]])).unwrap());
        assert!(general_position_check(&pts(&[[0, 0], [1, 1]])).unwrap());
        assert!(!general_position_check(&pts(&[[0, 0], [1, 0], [0, 1], [1, 0]])).unwrap());
    }

    #[test]
    fn margin_examples() {
        let one = BigInt::from(1);
        let h = Hypothesis::new(RatVector::from_ints(&[1]), Rational::zero()).unwrap();
        assert!(margin_satisfied(&[LabeledPoint::from_ints(&[1], 1).unwrap()], &h, &one).unwrap());
        assert!(!margin_satisfied(&[LabeledPoint::from_ints(&[0], 1).unwrap()], &h, &one).unwrap());
        let h2 = Hypothesis::new(RatVector::from_ints(&[1, 1]), Rational::zero()).unwrap();
        let p = [LabeledPoint::from_ints(&[1, 1], 1).unwrap()];
        for xp in [1, 7, 1000] {
            assert!(margin_satisfied(&p, &h2, &BigInt::from(xp)).unwrap());
        }
    }
}
