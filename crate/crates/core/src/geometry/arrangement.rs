use std::collections::HashMap;

use itertools::Itertools;

use super::ConstraintSet;
use crate::arith::{dot, dot_int, Rational, RowEchelon};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
struct Plane {
    normal: Vec<Rational>,
    rhs: Rational,
    weight: usize,
}

/// A weighted multiset of halfspaces `<n, y> >= c` in a (possibly
/// lower-dimensional) affine slice, with identical halfspaces merged.
///
/// Halfspaces whose normal vanishes on the slice are constant; the ones
/// that hold everywhere are folded into `constant`.
#[derive(Clone, Debug)]
pub struct Arrangement {
    dim: usize,
    planes: Vec<Plane>,
    index: HashMap<(Vec<Rational>, Rational), usize>,
    constant: usize,
    total: usize,
}

/// A generator of the closed sets `C(k)`: a point or a direction, tagged
/// with the depth it certifies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub coords: Vec<Rational>,
    pub depth: usize,
}

impl Arrangement {
    pub fn new(dim: usize) -> Self {
        Arrangement { dim, planes: Vec::new(), index: HashMap::new(), constant: 0, total: 0 }
    }

    pub fn from_constraints(s: &ConstraintSet) -> Self {
        let mut arr = Arrangement::new(s.d());
        for c in s.iter() {
            let normal = c.a().iter().map(Rational::from).collect();
            arr.add(normal, Rational::from(c.w()), 1);
        }
        arr
    }

    /// The arrangement restricted to `x_j = prefix_j` for the leading
    /// coordinates, in the remaining `d - prefix.len()` variables.
    pub fn slice(s: &ConstraintSet, prefix: &[Rational]) -> Result<Self> {
        let k = prefix.len();
        if k >= s.d() {
            return Err(Error::InvalidParameter(format!(
                "prefix of length {k} leaves no free coordinate in dimension {}",
                s.d()
            )));
        }
        let mut arr = Arrangement::new(s.d() - k);
        for c in s.iter() {
            let fixed = dot_int(&c.a()[..k], prefix);
            let normal = c.a()[k..].iter().map(Rational::from).collect();
            arr.add(normal, Rational::from(c.w()) - fixed, 1);
        }
        Ok(arr)
    }

    pub fn add(&mut self, mut normal: Vec<Rational>, mut rhs: Rational, weight: usize) {
        assert_eq!(normal.len(), self.dim, "normal has wrong dimension");
        self.total += weight;
        let Some(lead) = normal.iter().find(|v| !v.is_zero()).map(Rational::abs) else {
            if Rational::zero() >= rhs {
                self.constant += weight;
            }
            return;
        };
        for v in normal.iter_mut() {
            *v = &*v / &lead;
        }
        rhs = rhs / &lead;
        let key = (normal, rhs);
        match self.index.get(&key) {
            Some(&i) => self.planes[i].weight += weight,
            None => {
                self.index.insert(key.clone(), self.planes.len());
                self.planes.push(Plane { normal: key.0, rhs: key.1, weight });
            }
        }
    }

    /// The sub-slice `y_0 = c`.
    pub fn fix_first(&self, c: &Rational) -> Arrangement {
        let mut arr = Arrangement::new(self.dim - 1);
        arr.constant = self.constant;
        arr.total = self.total - self.planes.iter().map(|p| p.weight).sum::<usize>();
        for p in &self.planes {
            let rhs = &p.rhs - &p.normal[0] * c;
            arr.add(p.normal[1..].to_vec(), rhs, p.weight);
        }
        arr
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Size of the underlying multiset.
    pub fn total(&self) -> usize {
        self.total
    }

    pub fn distinct_planes(&self) -> usize {
        self.planes.len()
    }

    pub fn depth(&self, y: &[Rational]) -> usize {
        self.constant
            + self
                .planes
                .iter()
                .filter(|p| dot(&p.normal, y) >= p.rhs)
                .map(|p| p.weight)
                .sum::<usize>()
    }

    /// Depth of `p + t·dir` for all sufficiently large `t`.
    pub fn depth_at_infinity(&self, p: &[Rational], dir: &[Rational]) -> usize {
        let mut n = self.constant;
        for pl in &self.planes {
            let s = dot(&pl.normal, dir);
            if s.is_positive() || (s.is_zero() && dot(&pl.normal, p) >= pl.rhs) {
                n += pl.weight;
            }
        }
        n
    }

    fn normals(&self, idx: &[usize]) -> Vec<Vec<Rational>> {
        idx.iter().map(|&i| self.planes[i].normal.clone()).collect()
    }

    fn rhs(&self, idx: &[usize]) -> Vec<Rational> {
        idx.iter().map(|&i| self.planes[i].rhs.clone()).collect()
    }

    pub fn rank(&self) -> usize {
        let all: Vec<usize> = (0..self.planes.len()).collect();
        RowEchelon::homogeneous(self.dim, &self.normals(&all)).rank()
    }

    /// Basis of the directions along which every halfspace is constant.
    pub fn lineality(&self) -> Vec<Vec<Rational>> {
        let all: Vec<usize> = (0..self.planes.len()).collect();
        RowEchelon::homogeneous(self.dim, &self.normals(&all)).null_space()
    }

    /// Calls `f` with the echelon form of every subset of `size` planes
    /// whose normals are linearly independent.
    pub(crate) fn for_each_independent(&self, size: usize, mut f: impl FnMut(&[usize], &RowEchelon)) {
        for idx in (0..self.planes.len()).combinations(size) {
            let ech = RowEchelon::new(self.dim, &self.normals(&idx), &self.rhs(&idx));
            if ech.rank() == size {
                f(&idx, &ech);
            }
        }
    }

    /// One point per minimal flat of the arrangement, with its depth.
    pub fn vertices(&self) -> Vec<Generator> {
        let r = self.rank();
        let mut seen = HashMap::new();
        self.for_each_independent(r, |_, ech| {
            let p = ech.particular_solution().expect("independent rows are consistent");
            seen.entry(p).or_insert(());
        });
        let mut out: Vec<Generator> = seen
            .into_keys()
            .map(|p| {
                let depth = self.depth(&p);
                Generator { coords: p, depth }
            })
            .collect();
        out.sort_by(|a, b| a.coords.cmp(&b.coords));
        out
    }

    /// Edge directions of the arrangement modulo its lineality, both
    /// orientations, each with the largest depth reached at infinity.
    pub fn rays(&self) -> Vec<Generator> {
        let r = self.rank();
        if r == 0 {
            return Vec::new();
        }
        let mut best: HashMap<Vec<Rational>, usize> = HashMap::new();
        self.for_each_independent(r - 1, |idx, ech| {
            let hom = RowEchelon::homogeneous(self.dim, &self.normals(idx));
            let dir = hom
                .null_space()
                .into_iter()
                .find(|v| self.planes.iter().any(|p| !dot(&p.normal, v).is_zero()))
                .expect("an edge leaves the lineality space");
            let p = ech.particular_solution().expect("independent rows are consistent");
            for sign in [Rational::one(), -Rational::one()] {
                let v: Vec<Rational> = dir.iter().map(|c| c * &sign).collect();
                let k = self.depth_at_infinity(&p, &v);
                let key = normalize_direction(v);
                let e = best.entry(key).or_insert(0);
                *e = (*e).max(k);
            }
        });
        let mut out: Vec<Generator> =
            best.into_iter().map(|(coords, depth)| Generator { coords, depth }).collect();
        out.sort_by(|a, b| a.coords.cmp(&b.coords));
        out
    }

    /// Largest depth attained anywhere in the slice.
    pub fn max_depth(&self) -> usize {
        self.vertices().iter().map(|v| v.depth).max().unwrap_or(self.constant)
    }
}

fn normalize_direction(mut v: Vec<Rational>) -> Vec<Rational> {
    if let Some(lead) = v.iter().find(|c| !c.is_zero()).map(Rational::abs) {
        for c in v.iter_mut() {
            *c = &*c / &lead;
        }
    }
    v
}
