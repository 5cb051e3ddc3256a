use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::Rational;
use crate::error::{Error, Result};

/// Default limit on `|numerators| * |denominators|` for explicit domains.
pub const DEFAULT_ENUMERATION_CAP: u128 = 5_000_000;

/// A domain value together with the unreduced fraction `s/t` it came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainElement {
    pub value: Rational,
    #[serde(with = "crate::io::bigint_text")]
    pub s: BigInt,
    #[serde(with = "crate::io::bigint_text")]
    pub t: BigInt,
}

impl DomainElement {
    pub fn new(s: BigInt, t: BigInt) -> Result<Self> {
        let value = Rational::new(s.clone(), t.clone())?;
        Ok(DomainElement { value, s, t })
    }
}

/// Already-chosen leading coordinates `x*_1, ..., x*_{i-1}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prefix {
    elements: Vec<DomainElement>,
}

impl Prefix {
    pub fn new() -> Self {
        Prefix::default()
    }

    /// A prefix of arbitrary rationals, each witnessed by its reduced form.
    pub fn from_values(values: &[Rational]) -> Self {
        let elements = values
            .iter()
            .map(|v| DomainElement { value: v.clone(), s: v.numer().clone(), t: v.denom().clone() })
            .collect();
        Prefix { elements }
    }

    pub fn push(&mut self, e: DomainElement) {
        self.elements.push(e);
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[DomainElement] {
        &self.elements
    }

    pub fn values(&self) -> Vec<Rational> {
        self.elements.iter().map(|e| e.value.clone()).collect()
    }

    /// Witness denominator of the last element, or 1 when empty.
    pub fn t_prev(&self) -> BigInt {
        self.elements.last().map_or_else(BigInt::one, |e| e.t.clone())
    }

    /// Whether every witness lies in the domain its position requires.
    pub fn is_valid_chain(&self, d: usize, x: &BigInt) -> bool {
        let mut t_prev = BigInt::one();
        for (j, e) in self.elements.iter().enumerate() {
            let Ok(spec) = domain_spec(d, x, j + 1, &t_prev) else {
                return false;
            };
            if !spec.contains_witness(&e.s, &e.t) || Rational::new(e.s.clone(), e.t.clone()).ok() != Some(e.value.clone()) {
                return false;
            }
            t_prev = e.t.clone();
        }
        true
    }
}

/// Parameters of the grid `[±N_i] / (([±D] · t_prev) \ {0})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DomainSpec {
    pub d: usize,
    pub i: usize,
    pub numer_bound: BigInt,
    pub denom_base: BigInt,
    pub t_prev: BigInt,
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn domain_spec(d: usize, x: &BigInt, i: usize, t_prev: &BigInt) -> Result<DomainSpec> {
    if i == 0 || i > d {
        return Err(Error::InvalidParameter(format!("coordinate index {i} outside 1..={d}")));
    }
    if t_prev.is_zero() {
        return Err(Error::InvalidParameter("t_prev must be nonzero".into()));
    }
    if !x.is_positive() {
        return Err(Error::InvalidParameter("grid bound must be positive".into()));
    }
    let fact = factorial(d);
    let xd = x.pow(d as u32);
    let numer_bound = (BigInt::from(d) * &fact).pow(i as u32) * xd.pow(i as u32);
    Ok(DomainSpec { d, i, numer_bound, denom_base: fact * xd, t_prev: t_prev.clone() })
}

impl DomainSpec {
    /// `|[±N]| · |[±D] \ {0}|`, the work of explicit enumeration.
    pub fn pair_count(&self) -> BigInt {
        (BigInt::from(2) * &self.numer_bound + 1) * (BigInt::from(2) * &self.denom_base)
    }

    /// Largest element of the domain, `N / |t_prev|`.
    pub fn extreme(&self) -> Rational {
        Rational::new(self.numer_bound.clone(), self.t_prev.abs()).expect("nonzero")
    }

    pub fn contains_witness(&self, s: &BigInt, t: &BigInt) -> bool {
        if t.is_zero() || s.abs() > self.numer_bound {
            return false;
        }
        let (u, r) = t.div_rem(&self.t_prev);
        r.is_zero() && !u.is_zero() && u.abs() <= self.denom_base
    }
}

/// All distinct values of the domain in ascending order, each with its
/// minimal-`|t|` witness (positive `t` on ties).
pub fn enumerate_domain(spec: &DomainSpec, cap: u128) -> Result<Vec<DomainElement>> {
    let pairs = spec.pair_count();
    let size = pairs.to_u128().unwrap_or(u128::MAX);
    if size > cap {
        return Err(Error::DomainTooLarge { size, cap });
    }
    let too_big = || Error::DomainTooLarge { size, cap };
    let n = spec.numer_bound.to_i64().ok_or_else(too_big)?;
    let dmax = spec.denom_base.to_i64().ok_or_else(too_big)?;
    let tp = spec.t_prev.to_i64().ok_or_else(too_big)?;
    let tmax = (dmax as i128) * (tp as i128).abs();
    if tmax > i64::MAX as i128 {
        return Err(too_big());
    }
    // Reduced value (num, den>0) -> witness (s, t).
    let mut seen: HashMap<(i64, i64), (i64, i64)> = HashMap::new();
    let better = |cand: (i64, i64), cur: (i64, i64)| {
        let (a, b) = (cand.1.unsigned_abs(), cur.1.unsigned_abs());
        a < b || (a == b && cand.1 > 0 && cur.1 < 0)
    };
    for u in (-dmax..=dmax).filter(|u| *u != 0) {
        let t = u * tp;
        for s in -n..=n {
            let g = s.gcd(&t);
            let (mut num, mut den) = (s / g, t / g);
            if den < 0 {
                num = -num;
                den = -den;
            }
            seen.entry((num, den))
                .and_modify(|w| {
                    if better((s, t), *w) {
                        *w = (s, t);
                    }
                })
                .or_insert((s, t));
        }
    }
    let mut keys: Vec<(i64, i64)> = seen.keys().copied().collect();
    keys.sort_by(|a, b| ((a.0 as i128) * (b.1 as i128)).cmp(&((b.0 as i128) * (a.1 as i128))));
    Ok(keys
        .into_iter()
        .map(|k| {
            let (s, t) = seen[&k];
            DomainElement {
                value: Rational::new(k.0, k.1).expect("positive denominator"),
                s: BigInt::from(s),
                t: BigInt::from(t),
            }
        })
        .collect())
}
