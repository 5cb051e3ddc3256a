use std::collections::BTreeMap;

use serde::Serialize;

use super::domain::{domain_spec, DomainElement, Prefix};
use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::geometry::{Arrangement, ConstraintSet};

/// Sorted `(x, Q(x))` pairs: every decreasing point of `Q` inside the
/// domain range plus the two range endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecreasingPointList {
    entries: Vec<(Rational, usize)>,
}

impl DecreasingPointList {
    pub fn entries(&self) -> &[(Rational, usize)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn lo(&self) -> &Rational {
        &self.entries[0].0
    }

    pub fn hi(&self) -> &Rational {
        &self.entries[self.entries.len() - 1].0
    }

    pub fn global_max(&self) -> usize {
        self.entries.iter().map(|e| e.1).max().unwrap_or(0)
    }

    /// Debug form: `[["x", k], ...]`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.entries
                .iter()
                .map(|(x, k)| serde_json::json!([x.to_string(), k]))
                .collect(),
        )
    }
}

/// Raw pass: every `x_i` pinned down by at most `d - i + 1` slice
/// hyperplanes, with the best depth seen at a witness of that intersection.
pub fn intersection_candidates(arr: &Arrangement) -> BTreeMap<Rational, usize> {
    let mut cands: BTreeMap<Rational, usize> = BTreeMap::new();
    for size in 1..=arr.dim() {
        arr.for_each_independent(size, |_, ech| {
            if let Some(v) = ech.determined_value(0) {
                let witness = ech.particular_solution().expect("consistent");
                let k = arr.depth(&witness);
                let e = cands.entry(v).or_insert(0);
                *e = (*e).max(k);
            }
        });
    }
    cands
}

/// Q on the whole line: the value far to the left, the decreasing points,
/// and the value far to the right.
pub(crate) fn full_line(arr: &Arrangement) -> (usize, Vec<(Rational, usize)>, usize) {
    let cands = intersection_candidates(arr);
    let one = Rational::one();
    let far_left = cands.keys().next().map_or_else(Rational::zero, |x| x - &one);
    let far_right = cands.keys().next_back().map_or_else(Rational::zero, |x| x + &one);
    let left = arr.fix_first(&far_left).max_depth();
    let right = arr.fix_first(&far_right).max_depth();

    // An entry survives iff it beats everything on one side of it; this
    // drops witnesses whose depth understates Q and non-decreasing points.
    let raw: Vec<(Rational, usize)> = cands.into_iter().collect();
    let mut prefix_max = Vec::with_capacity(raw.len());
    let mut m = left;
    for (_, k) in &raw {
        prefix_max.push(m);
        m = m.max(*k);
    }
    let mut keep = vec![false; raw.len()];
    let mut m = right;
    for j in (0..raw.len()).rev() {
        let k = raw[j].1;
        keep[j] = k > prefix_max[j] || k > m;
        m = m.max(k);
    }
    let entries = raw.into_iter().zip(keep).filter(|(_, k)| *k).map(|(e, _)| e).collect();
    (left, entries, right)
}

fn bracket(left: usize, entries: &[(Rational, usize)], right: usize, x: &Rational) -> usize {
    match entries.binary_search_by(|e| e.0.cmp(x)) {
        Ok(j) => entries[j].1,
        Err(j) => {
            let l = if j == 0 { left } else { entries[j - 1].1 };
            let r = if j == entries.len() { right } else { entries[j].1 };
            l.min(r)
        }
    }
}

/// The decreasing-point list of `Q_{prefix}(S, ·)` over the range of the
/// domain for coordinate `prefix.len() + 1`.
pub fn build_decreasing_list(s: &ConstraintSet, prefix: &Prefix) -> Result<DecreasingPointList> {
    let spec = domain_spec(s.d(), s.bound(), prefix.len() + 1, &prefix.t_prev())?;
    let arr = Arrangement::slice(s, &prefix.values())?;
    let top = spec.extreme();
    let bottom = -&top;
    let (left, inner, right) = full_line(&arr);
    let mut entries = vec![(bottom.clone(), bracket(left, &inner, right, &bottom))];
    entries.extend(inner.iter().filter(|(x, _)| *x > bottom && *x < top).cloned());
    entries.push((top.clone(), bracket(left, &inner, right, &top)));
    Ok(DecreasingPointList { entries })
}

/// `Q(x) = min(k', k'')` over the entries bracketing `x`.
pub fn q_eval(l: &DecreasingPointList, x: &Rational) -> Result<usize> {
    if x < l.lo() || x > l.hi() {
        return Err(Error::OutOfRange(x.to_string()));
    }
    let e = &l.entries;
    Ok(match e.binary_search_by(|p| p.0.cmp(x)) {
        Ok(j) => e[j].1,
        Err(j) => e[j - 1].1.min(e[j].1),
    })
}

/// Largest `k` such that some window of `2^j` consecutive domain elements
/// has `Q >= k` throughout.
///
/// The domain is the sorted grid the list was built for; windows are
/// counted in domain elements.
pub fn q_interval_min(l: &DecreasingPointList, domain: &[DomainElement], j: u32) -> Result<usize> {
    let width = 1usize.checked_shl(j).filter(|w| *w <= domain.len()).ok_or_else(|| {
        Error::InvalidParameter(format!("window 2^{j} exceeds domain of {} elements", domain.len()))
    })?;
    let mut levels: Vec<usize> = l.entries.iter().map(|e| e.1).collect();
    levels.sort_unstable();
    levels.dedup();
    for &k in levels.iter().rev() {
        // Superlevel sets of a quasi-concave list are intervals between the
        // first and last entries reaching k.
        let first = l.entries.iter().find(|e| e.1 >= k).expect("level exists");
        let last = l.entries.iter().rev().find(|e| e.1 >= k).expect("level exists");
        let a = domain.partition_point(|e| e.value < first.0);
        let b = domain.partition_point(|e| e.value <= last.0);
        if b.saturating_sub(a) >= width {
            return Ok(k);
        }
    }
    Ok(levels.first().copied().unwrap_or(0))
}
