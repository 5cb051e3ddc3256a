use itertools::Itertools;
use rand::Rng;

use crate::arith::{determinant_raw, RatVector, Rational, RowEchelon};
use crate::dp::RandomSource;
use crate::error::{Error, Result};
use crate::geometry::{Constraint, ConstraintSet, Hypothesis, Label, LabeledPoint};

/// Denominator of the grid the hidden feasible point is drawn from.
pub const HIDDEN_POINT_DENOM: i64 = 4;

/// Draws per requested item before giving up.
pub const REJECTION_FACTOR: usize = 1000;

fn check_dims(d: usize, x: i64) -> Result<()> {
    if d == 0 || x <= 0 {
        return Err(Error::InvalidParameter(format!("need d >= 1 and X >= 1, got d={d}, X={x}")));
    }
    Ok(())
}

fn random_normal(d: usize, x: i64, rng: &mut RandomSource) -> Vec<i64> {
    loop {
        let a: Vec<i64> = (0..d).map(|_| rng.gen_range(-x..=x)).collect();
        if a.iter().any(|v| *v != 0) {
            return a;
        }
    }
}

/// A realizable instance together with the hidden point satisfying it.
#[derive(Clone, Debug)]
pub struct FeasibilityInstance {
    pub constraints: ConstraintSet,
    pub hidden: RatVector,
}

/// Box constraints `-X <= x_j <= X` (as many of the `2d` as fit in `m`)
/// followed by random grid constraints satisfied at a hidden point.
pub fn generate_feasibility_instance_with_point(
    d: usize,
    x: i64,
    m: usize,
    rng: &mut RandomSource,
) -> Result<FeasibilityInstance> {
    check_dims(d, x)?;
    let g = HIDDEN_POINT_DENOM;
    let hidden: Vec<Rational> = (0..d)
        .map(|_| Rational::new(rng.gen_range(-g * x..=g * x), g).expect("nonzero"))
        .collect();
    let mut items = Vec::with_capacity(m);
    'boxes: for j in 0..d {
        for sign in [1, -1] {
            if items.len() == m {
                break 'boxes;
            }
            let mut a = vec![0; d];
            a[j] = sign;
            items.push(Constraint::from_i64(&a, -x)?);
        }
    }
    let budget = REJECTION_FACTOR * m.max(1);
    let mut draws = 0;
    while items.len() < m {
        draws += 1;
        if draws > budget {
            return Err(Error::RejectionBudget(budget));
        }
        let a = random_normal(d, x, rng);
        let w = rng.gen_range(-x..=x);
        let c = Constraint::from_i64(&a, w)?;
        if c.contains(&hidden) {
            items.push(c);
        }
    }
    Ok(FeasibilityInstance {
        constraints: ConstraintSet::new(d, x, items)?,
        hidden: RatVector::new(hidden)?,
    })
}

pub fn generate_feasibility_instance(d: usize, x: i64, m: usize, rng: &mut RandomSource) -> Result<ConstraintSet> {
    Ok(generate_feasibility_instance_with_point(d, x, m, rng)?.constraints)
}

/// Uniform grid constraints with no feasibility requirement.
pub fn generate_arbitrary_instance(d: usize, x: i64, m: usize, rng: &mut RandomSource) -> Result<ConstraintSet> {
    check_dims(d, x)?;
    let items = (0..m)
        .map(|_| {
            let a = random_normal(d, x, rng);
            Constraint::from_i64(&a, rng.gen_range(-x..=x))
        })
        .collect::<Result<Vec<_>>>()?;
    ConstraintSet::new(d, x, items)
}

/// Labeled sample together with the hidden halfspace that labels it.
#[derive(Clone, Debug)]
pub struct LabeledInstance {
    pub points: Vec<LabeledPoint>,
    pub hidden: Hypothesis,
}

/// Whether `cand` is affinely independent of every `min(|pool|, d)` pool
/// points, so no `d + 1` points of `pool + cand` share a hyperplane.
fn extends_general_position(pool: &[Vec<Rational>], cand: &[Rational]) -> bool {
    let d = cand.len();
    let k = pool.len().min(d);
    pool.iter().combinations(k).all(|others| {
        let rows: Vec<Vec<Rational>> = others
            .iter()
            .map(|p| p.iter().zip(cand).map(|(a, b)| a - b).collect())
            .collect();
        if k == d {
            !determinant_raw(&rows).is_zero()
        } else {
            RowEchelon::homogeneous(d, &rows).rank() == k
        }
    })
}

/// Nonzero grid points labeled by a hidden halfspace `(a*, w*)` with
/// `w* ∈ {-1, 0, 1}`; points on its boundary are positive, as the weak
/// inequality dictates.
pub fn generate_labeled_instance_with_hidden(
    d: usize,
    x: i64,
    m: usize,
    rng: &mut RandomSource,
    require_general_position: bool,
) -> Result<LabeledInstance> {
    check_dims(d, x)?;
    let a_star = random_normal(d, x, rng);
    let w_star = rng.gen_range(-1..=1i64);
    let hidden = Hypothesis::new(RatVector::from_ints(&a_star), Rational::from(w_star))?;
    let budget = REJECTION_FACTOR * m.max(1);
    let mut pool: Vec<Vec<Rational>> = Vec::with_capacity(m);
    let mut draws = 0;
    while pool.len() < m {
        draws += 1;
        if draws > budget {
            return Err(Error::RejectionBudget(budget));
        }
        let p: Vec<Rational> = (0..d).map(|_| Rational::from(rng.gen_range(-x..=x))).collect();
        // The origin has no dual halfspace.
        if p.iter().all(Rational::is_zero) {
            continue;
        }
        if require_general_position && !extends_general_position(&pool, &p) {
            continue;
        }
        pool.push(p);
    }
    let points = pool
        .into_iter()
        .map(|p| {
            let x = RatVector::new(p)?;
            let y = hidden.classify(&x)?;
            Ok(LabeledPoint::new(x, y))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LabeledInstance { points, hidden })
}

pub fn generate_labeled_instance(
    d: usize,
    x: i64,
    m: usize,
    rng: &mut RandomSource,
    require_general_position: bool,
) -> Result<Vec<LabeledPoint>> {
    Ok(generate_labeled_instance_with_hidden(d, x, m, rng, require_general_position)?.points)
}

/// `count` positives at `x = 1` and `count` negatives at `x = -1`.
pub fn separable_line(count: usize) -> Vec<LabeledPoint> {
    let mut s = vec![LabeledPoint::new(RatVector::from_ints(&[1]), Label::Pos); count];
    s.extend(vec![LabeledPoint::new(RatVector::from_ints(&[-1]), Label::Neg); count]);
    s
}
