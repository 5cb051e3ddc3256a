//! Halfspace learning through the point/halfspace dual, plus the noise
//! and rescaling steps that put data in general position.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{RatVector, Rational};
use crate::deep_point::{find_deep_point_with, DeepPointOptions, DeepPointRun};
use crate::dp::{basic_composition, exponential_mechanism, PrivacyParams, RandomSource, ScoredCandidate};
use crate::error::{Error, Result};
use crate::geometry::{empirical_error, val, Constraint, ConstraintSet, Hypothesis, LabeledPoint};

/// Offsets tried by the learner after normalizing `w`.
pub const OFFSETS: [i64; 3] = [-1, 0, 1];

/// `(y·x, y·w)` for every labeled point. Coordinates must be integers.
pub fn dualize(s: &[LabeledPoint], w: i64) -> Result<ConstraintSet> {
    let first = s.first().ok_or_else(|| Error::InvalidParameter("empty sample".into()))?;
    let d = first.x.dim();
    let mut bound = BigInt::one();
    let mut items = Vec::with_capacity(s.len());
    for p in s {
        let y = BigInt::from(p.y.sign());
        let a = p
            .x
            .iter()
            .map(|c| c.to_integer().map(|v| &y * v).ok_or_else(|| Error::NonIntegral(c.to_string())))
            .collect::<Result<Vec<BigInt>>>()?;
        for v in &a {
            bound = bound.max(v.abs());
        }
        if a.iter().all(|v| v.sign() == num_bigint::Sign::NoSign) {
            return Err(Error::InvalidParameter("the origin has no dual halfspace".into()));
        }
        items.push(Constraint::new(a, &y * w)?);
    }
    ConstraintSet::new(d, bound, items)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    pub w: i64,
    pub run: DeepPointRun,
    pub val: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LearnRun {
    pub hypothesis: Hypothesis,
    pub val: usize,
    pub empirical_error: Rational,
    pub branches: Vec<Branch>,
    /// Budget charged to each deep-point run and to the final selection.
    pub per_branch: PrivacyParams,
    pub selection: PrivacyParams,
    pub total: PrivacyParams,
}

impl LearnRun {
    /// Every branch's own accounting fits its budget, and the budgets
    /// compose to at most `(eps, delta)`.
    pub fn accounting_ok(&self, budget: &PrivacyParams) -> bool {
        self.branches.iter().all(|b| b.run.accounted.within(&self.per_branch)) && self.total.within(budget)
    }
}

pub fn learn_halfspace(
    s: &[LabeledPoint],
    alpha: f64,
    beta: f64,
    eps: f64,
    delta: f64,
    rng: &mut RandomSource,
) -> Result<LearnRun> {
    learn_halfspace_with(s, alpha, beta, eps, delta, rng, &DeepPointOptions::default())
}

/// Runs the deep-point search on the three dual systems and picks one of
/// the resulting halfspaces by the exponential mechanism on `val`.
pub fn learn_halfspace_with(
    s: &[LabeledPoint],
    alpha: f64,
    beta: f64,
    eps: f64,
    delta: f64,
    rng: &mut RandomSource,
    opts: &DeepPointOptions,
) -> Result<LearnRun> {
    let per_branch = PrivacyParams { eps: eps / 4.0, delta: delta / 3.0 };
    let selection = PrivacyParams { eps: eps / 4.0, delta: 0.0 };
    let mut branches = Vec::with_capacity(OFFSETS.len());
    for (tag, &w) in OFFSETS.iter().enumerate() {
        let sw = dualize(s, w)?;
        let mut branch_rng = rng.fork(tag as u64);
        let run = find_deep_point_with(&sw, alpha / 2.0, beta / 2.0, per_branch.eps, per_branch.delta, &mut branch_rng, opts)?;
        let h = Hypothesis::unchecked(run.point.clone(), Rational::from(w));
        let v = val(s, &h)?;
        branches.push(Branch { w, run, val: v });
    }
    let cands: Vec<ScoredCandidate<usize>> = branches
        .iter()
        .enumerate()
        .map(|(j, b)| ScoredCandidate { payload: j, quality: Rational::from(b.val as i64) })
        .collect();
    let j = exponential_mechanism(&cands, selection.eps, &mut rng.fork(OFFSETS.len() as u64))?.payload;
    let chosen = &branches[j];
    let hypothesis = Hypothesis::unchecked(chosen.run.point.clone(), Rational::from(chosen.w));
    let total = basic_composition(&[per_branch, per_branch, per_branch, selection]);
    Ok(LearnRun {
        empirical_error: empirical_error(s, &hypothesis)?,
        val: chosen.val,
        hypothesis,
        branches,
        per_branch,
        selection,
        total,
    })
}

/// `2 d^2 (d!)^(d^3) X^(d^6)`: any grid point is at least `1/X'` from a
/// consistent halfspace that keeps it on the correct side.
pub fn margin_bound(d: usize, x: &BigInt) -> BigInt {
    let fact: BigInt = (1..=d).fold(BigInt::one(), |acc, k| acc * k);
    let d3 = (d * d * d) as u32;
    BigInt::from(2 * d * d) * fact.pow(d3) * x.pow(d3 * d3)
}

/// The noise alphabet `A = [±Δ]/Δ'`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoiseGrid {
    #[serde(with = "crate::io::bigint_text")]
    pub delta: BigInt,
    #[serde(with = "crate::io::bigint_text")]
    pub delta_prime: BigInt,
}

impl NoiseGrid {
    /// `Δ = ⌈d s^d / (2β)⌉` and `Δ' = 2 Δ X' ⌈√d⌉`, computed exactly from
    /// the rational value of `beta`.
    pub fn new(d: usize, s: usize, beta: f64, x: &BigInt) -> Result<Self> {
        if !(beta > 0.0 && beta < 1.0) {
            return Err(Error::InvalidParameter("beta must lie in (0, 1)".into()));
        }
        let beta = Rational::from_f64(beta).ok_or_else(|| Error::InvalidParameter("beta is not finite".into()))?;
        let num = Rational::from(BigInt::from(d) * BigInt::from(s).pow(d as u32));
        let delta = (num / (Rational::from(2) * beta)).ceil();
        let root = BigInt::from(d).sqrt();
        let ceil_root = if &root * &root == BigInt::from(d) { root } else { root + 1 };
        let delta_prime = BigInt::from(2) * &delta * margin_bound(d, x) * ceil_root;
        Ok(NoiseGrid { delta, delta_prime })
    }

    pub fn size(&self) -> BigInt {
        BigInt::from(2) * &self.delta + 1
    }

    /// Largest coordinate magnitude `Δ/Δ'`.
    pub fn max_offset(&self) -> Rational {
        Rational::new(self.delta.clone(), self.delta_prime.clone()).expect("positive")
    }

    fn sample(&self, rng: &mut RandomSource) -> Result<Rational> {
        let delta = self.delta.to_i64().ok_or_else(|| Error::OutOfRange(format!("Δ = {}", self.delta)))?;
        Rational::new(rng.gen_range(-delta..=delta), self.delta_prime.clone())
    }
}

/// Adds independent uniform noise from the grid's alphabet to every
/// coordinate; labels are kept.
pub fn add_noise(
    s: &[LabeledPoint],
    beta: f64,
    size: usize,
    x: &BigInt,
    rng: &mut RandomSource,
) -> Result<(Vec<LabeledPoint>, NoiseGrid)> {
    let d = s.first().map_or(1, |p| p.x.dim());
    let grid = NoiseGrid::new(d, size, beta, x)?;
    let noisy = s
        .iter()
        .map(|p| {
            let z = (0..d).map(|_| grid.sample(rng)).collect::<Result<Vec<_>>>()?;
            Ok(LabeledPoint::new(p.x.add(&RatVector::new(z)?)?, p.y))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((noisy, grid))
}

/// Scales every coordinate by `Δ'`, returning integer points and the new
/// grid bound `Δ'(X + Δ)`.
pub fn rescale_to_grid(s: &[LabeledPoint], grid: &NoiseGrid, x: &BigInt) -> Result<(Vec<LabeledPoint>, BigInt)> {
    let scale = Rational::from(grid.delta_prime.clone());
    let out = s
        .iter()
        .map(|p| {
            let scaled = p.x.scale(&scale);
            if let Some(c) = scaled.iter().find(|c| !c.is_integer()) {
                return Err(Error::NonIntegral(c.to_string()));
            }
            Ok(LabeledPoint::new(scaled, p.y))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((out, &grid.delta_prime * (x + &grid.delta)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{depth, Label};

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn dual_examples() {
        let pos = LabeledPoint::from_ints(&[3, -2], 1).unwrap();
        let neg = LabeledPoint::from_ints(&[3, -2], -1).unwrap();
        let s = dualize(std::slice::from_ref(&pos), 1).unwrap();
        assert_eq!(s.items()[0], Constraint::from_i64(&[3, -2], 1).unwrap());
        let s = dualize(std::slice::from_ref(&neg), 1).unwrap();
        assert_eq!(s.items()[0], Constraint::from_i64(&[-3, 2], -1).unwrap());
        let s = dualize(&[pos, neg], 0).unwrap();
        assert!(s.iter().all(|c| c.w() == &BigInt::from(0)));
        let frac = LabeledPoint::new(RatVector::new(vec![q(1, 2), q(1, 1)]).unwrap(), Label::Pos);
        assert!(matches!(dualize(&[frac], 1), Err(Error::NonIntegral(_))));
    }

    #[test]
    fn margin_values() {
        assert_eq!(margin_bound(1, &BigInt::from(2)), BigInt::from(4));
        assert_eq!(margin_bound(2, &BigInt::from(1)), BigInt::from(2048));
        assert!(margin_bound(2, &BigInt::from(2)) > margin_bound(2, &BigInt::from(1)));
    }

    #[test]
    fn noise_grid() {
        let g = NoiseGrid::new(1, 2, 0.5, &BigInt::from(1)).unwrap();
        assert_eq!(g.delta, BigInt::from(2));
        assert_eq!(g.size(), BigInt::from(5));
        let g = NoiseGrid::new(2, 6, 0.1, &BigInt::from(1)).unwrap();
        assert_eq!(g.delta, BigInt::from(360));
        assert_eq!(g.delta_prime, BigInt::from(2 * 360 * 2048 * 2));
        // Every noise vector has norm at most 1/(2X').
        let xp = Rational::from(margin_bound(2, &BigInt::from(1)));
        let m = g.max_offset();
        let norm2 = Rational::from(2) * &m * &m;
        let cap = Rational::one() / (Rational::from(4) * &xp * &xp);
        assert!(norm2 <= cap);
    }

    #[test]
    fn rescale() {
        let g = NoiseGrid::new(1, 2, 0.5, &BigInt::from(3)).unwrap();
        let dp = g.delta_prime.clone();
        let x = Rational::from(3) + Rational::new(BigInt::one(), dp.clone()).unwrap();
        let p = LabeledPoint::new(RatVector::new(vec![x]).unwrap(), Label::Neg);
        let (out, bound) = rescale_to_grid(&[p], &g, &BigInt::from(3)).unwrap();
        assert_eq!(out[0].x[0], Rational::from(BigInt::from(3) * &dp + 1));
        assert_eq!(out[0].y, Label::Neg);
        assert!(out[0].x[0].abs() <= Rational::from(bound));
        let bad = LabeledPoint::new(RatVector::new(vec![q(1, 5)]).unwrap(), Label::Pos);
        assert!(rescale_to_grid(&[bad], &g, &BigInt::from(3)).is_err());
    }

    #[test]
    fn dual_depth_counts_weak_pairs() {
        let s = vec![
            LabeledPoint::from_ints(&[1, 0], 1).unwrap(),
            LabeledPoint::from_ints(&[0, 1], -1).unwrap(),
            LabeledPoint::from_ints(&[-1, -1], -1).unwrap(),
        ];
        let a = RatVector::from_ints(&[2, -1]);
        for w in OFFSETS {
            let sw = dualize(&s, w).unwrap();
            let count = s
                .iter()
                .filter(|p| {
                    let y = Rational::from(p.y.sign());
                    &y * &a.dot(&p.x).unwrap() >= &y * &Rational::from(w)
                })
                .count();
            assert_eq!(depth(&sw, &a).unwrap(), count);
        }
    }
}
