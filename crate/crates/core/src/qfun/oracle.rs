use super::domain::Prefix;
use crate::arith::Rational;
use crate::error::Result;
use crate::geometry::{Arrangement, ConstraintSet};

/// Definitional `Q_{prefix}(S, ·)`, precomputed as one interval per level.
///
/// For each `k`, the projection of `C(k)` onto the free coordinate is the
/// interval spanned by the slice generators: minimal flats of depth at
/// least `k`, edge directions reaching `k` at infinity, and lineality.
#[derive(Clone, Debug)]
pub struct QOracle {
    // levels[k - 1] = (lo_k, hi_k); `None` is unbounded.
    levels: Vec<(Option<Rational>, Option<Rational>)>,
}

impl QOracle {
    pub fn new(s: &ConstraintSet, prefix: &Prefix) -> Result<Self> {
        let arr = Arrangement::slice(s, &prefix.values())?;
        let verts = arr.vertices();
        let rays = arr.rays();
        let free_line = arr.lineality().iter().any(|v| !v[0].is_zero());
        let top = verts.iter().map(|v| v.depth).max().unwrap_or(0);
        let levels = (1..=top)
            .map(|k| {
                let xs = verts.iter().filter(|v| v.depth >= k).map(|v| &v.coords[0]);
                let lo = xs.clone().min().cloned();
                let hi = xs.max().cloned();
                let reach = |neg: bool| {
                    free_line
                        || rays.iter().any(|r| {
                            r.depth >= k && if neg { r.coords[0].is_negative() } else { r.coords[0].is_positive() }
                        })
                };
                (if reach(true) { None } else { lo }, if reach(false) { None } else { hi })
            })
            .collect();
        Ok(QOracle { levels })
    }

    pub fn eval(&self, x: &Rational) -> usize {
        self.levels
            .iter()
            .rposition(|(lo, hi)| lo.as_ref().is_none_or(|l| l <= x) && hi.as_ref().is_none_or(|h| x <= h))
            .map_or(0, |p| p + 1)
    }

    /// `max Q` over the whole line.
    pub fn max(&self) -> usize {
        self.levels.len()
    }

    /// Every finite interval endpoint, useful as probe points.
    pub fn breakpoints(&self) -> Vec<Rational> {
        let mut out: Vec<Rational> =
            self.levels.iter().flat_map(|(l, h)| l.iter().chain(h.iter()).cloned()).collect();
        out.sort();
        out.dedup();
        out
    }
}

/// `Q_{prefix}(S, x)`: the largest `cdepth` over completions of
/// `(prefix, x)`, measured in the slice through the prefix.
pub fn q_definitional(s: &ConstraintSet, prefix: &Prefix, x: &Rational) -> Result<usize> {
    Ok(QOracle::new(s, prefix)?.eval(x))
}
