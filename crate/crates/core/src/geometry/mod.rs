//! Constraints, halfspaces, depth and the exact geometric oracles.

mod arrangement;
mod fm;
mod hull;
mod position;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{check_dim, dot_int, RatVector, Rational};
use crate::error::{Error, Result};

pub use arrangement::Arrangement;
pub use fm::{fm_hull_membership, is_realizable, is_realizable_points};
pub use hull::{caratheodory_membership, cdepth_oracle, lp_hull_membership};
pub use position::{general_position_check, margin_satisfied};

/// One linear constraint `<a, x> >= w` with integer data.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Constraint {
    a: Vec<BigInt>,
    w: BigInt,
}

impl Constraint {
    pub fn new(a: Vec<BigInt>, w: BigInt) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::InvalidParameter("constraint dimension must be positive".into()));
        }
        if a.iter().all(Zero::is_zero) {
            return Err(Error::InvalidParameter("constraint normal must be nonzero".into()));
        }
        Ok(Constraint { a, w })
    }

    pub fn from_i64(a: &[i64], w: i64) -> Result<Self> {
        Self::new(a.iter().map(|&v| BigInt::from(v)).collect(), BigInt::from(w))
    }

    pub fn a(&self) -> &[BigInt] {
        &self.a
    }

    pub fn w(&self) -> &BigInt {
        &self.w
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    /// Largest absolute entry among `a` and `w`.
    pub fn magnitude(&self) -> BigInt {
        self.a
            .iter()
            .chain(std::iter::once(&self.w))
            .map(|v| v.abs())
            .max()
            .unwrap_or_default()
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        dot_int(&self.a, x) >= Rational::from(&self.w)
    }
}

/// Multiset of constraints over a common dimension and grid bound.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConstraintSet {
    d: usize,
    bound: BigInt,
    items: Vec<Constraint>,
}

impl ConstraintSet {
    pub fn new(d: usize, bound: impl Into<BigInt>, items: Vec<Constraint>) -> Result<Self> {
        let bound = bound.into();
        if d == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        if !bound.is_positive() {
            return Err(Error::InvalidParameter("grid bound must be positive".into()));
        }
        for c in &items {
            check_dim(d, c.dim())?;
            if c.magnitude() > bound {
                return Err(Error::InvalidParameter(format!(
                    "constraint entry exceeds grid bound {bound}"
                )));
            }
        }
        Ok(ConstraintSet { d, bound, items })
    }

    pub fn empty(d: usize, bound: impl Into<BigInt>) -> Result<Self> {
        Self::new(d, bound, Vec::new())
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// The grid bound `X`.
    pub fn bound(&self) -> &BigInt {
        &self.bound
    }

    pub fn items(&self) -> &[Constraint] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Constraint> {
        self.items.iter()
    }

    pub fn push(&mut self, c: Constraint) -> Result<()> {
        check_dim(self.d, c.dim())?;
        if c.magnitude() > self.bound {
            return Err(Error::InvalidParameter("constraint entry exceeds grid bound".into()));
        }
        self.items.push(c);
        Ok(())
    }

    /// A neighboring multiset: entry `i` swapped for `c`.
    pub fn replaced(&self, i: usize, c: Constraint) -> Result<Self> {
        let mut items = self.items.clone();
        if i >= items.len() {
            return Err(Error::InvalidParameter(format!("index {i} out of range")));
        }
        items[i] = c;
        Self::new(self.d, self.bound.clone(), items)
    }
}

/// Number of constraints of `s` satisfied by `x`.
pub fn depth(s: &ConstraintSet, x: &RatVector) -> Result<usize> {
    check_dim(s.d(), x.dim())?;
    Ok(s.iter().filter(|c| c.contains(x.entries())).count())
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Label {
    Neg,
    Pos,
}

impl Label {
    pub fn sign(self) -> i64 {
        match self {
            Label::Neg => -1,
            Label::Pos => 1,
        }
    }

    pub fn from_sign(y: i64) -> Result<Self> {
        match y {
            1 => Ok(Label::Pos),
            -1 => Ok(Label::Neg),
            _ => Err(Error::InvalidParameter(format!("label must be -1 or 1, got {y}"))),
        }
    }
}

impl Serialize for Label {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i64(self.sign())
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Label::from_sign(i64::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct LabeledPoint {
    pub x: RatVector,
    pub y: Label,
}

impl LabeledPoint {
    pub fn new(x: RatVector, y: Label) -> Self {
        LabeledPoint { x, y }
    }

    pub fn from_ints(x: &[i64], y: i64) -> Result<Self> {
        Ok(LabeledPoint { x: RatVector::from_ints(x), y: Label::from_sign(y)? })
    }
}

/// Halfspace `{x : <a, x> >= w}`.
///
/// Learner outputs may carry `a = 0`, which denotes the constant
/// classifier `0 >= w`; `new` rejects it for hand-built hypotheses.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Hypothesis {
    a: RatVector,
    w: Rational,
}

impl Hypothesis {
    pub fn new(a: RatVector, w: Rational) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::InvalidParameter("hypothesis normal must be nonzero".into()));
        }
        Ok(Hypothesis { a, w })
    }

    pub(crate) fn unchecked(a: RatVector, w: Rational) -> Self {
        Hypothesis { a, w }
    }

    pub fn a(&self) -> &RatVector {
        &self.a
    }

    pub fn w(&self) -> &Rational {
        &self.w
    }

    pub fn contains(&self, x: &RatVector) -> Result<bool> {
        Ok(self.a.dot(x)? >= self.w)
    }

    pub fn classify(&self, x: &RatVector) -> Result<Label> {
        Ok(if self.contains(x)? { Label::Pos } else { Label::Neg })
    }
}

/// Positives inside plus negatives strictly outside.
pub fn val(s: &[LabeledPoint], h: &Hypothesis) -> Result<usize> {
    let mut n = 0;
    for p in s {
        if h.classify(&p.x)? == p.y {
            n += 1;
        }
    }
    Ok(n)
}

/// Fraction of misclassified points; zero on an empty sample.
pub fn empirical_error(s: &[LabeledPoint], h: &Hypothesis) -> Result<Rational> {
    if s.is_empty() {
        return Ok(Rational::zero());
    }
    let wrong = s.len() - val(s, h)?;
    Rational::new(wrong as i64, s.len() as i64)
}
