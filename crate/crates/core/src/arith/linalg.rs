use std::ops::Index;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::Rational;
use crate::error::{Error, Result};

/// Dense vector of exact rationals with positive dimension.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RatVector(Vec<Rational>);

impl RatVector {
    pub fn new(entries: Vec<Rational>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidParameter("vector dimension must be positive".into()));
        }
        Ok(RatVector(entries))
    }

    pub fn zeros(dim: usize) -> Self {
        RatVector(vec![Rational::zero(); dim.max(1)])
    }

    pub fn from_ints(xs: &[i64]) -> Self {
        assert!(!xs.is_empty(), "vector dimension must be positive");
        RatVector(xs.iter().map(|&x| Rational::from(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<Rational> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Rational::is_zero)
    }

    pub fn dot(&self, other: &RatVector) -> Result<Rational> {
        check_dim(self.dim(), other.dim())?;
        Ok(dot(&self.0, &other.0))
    }

    /// Inner product against an integer coefficient vector.
    pub fn dot_int(&self, a: &[BigInt]) -> Result<Rational> {
        check_dim(self.dim(), a.len())?;
        Ok(dot_int(a, &self.0))
    }

    pub fn add(&self, other: &RatVector) -> Result<RatVector> {
        check_dim(self.dim(), other.dim())?;
        Ok(RatVector(self.0.iter().zip(&other.0).map(|(x, y)| x + y).collect()))
    }

    pub fn sub(&self, other: &RatVector) -> Result<RatVector> {
        check_dim(self.dim(), other.dim())?;
        Ok(RatVector(self.0.iter().zip(&other.0).map(|(x, y)| x - y).collect()))
    }

    pub fn scale(&self, c: &Rational) -> RatVector {
        RatVector(self.0.iter().map(|x| x * c).collect())
    }

    pub fn norm_squared(&self) -> Rational {
        dot(&self.0, &self.0)
    }
}

impl Index<usize> for RatVector {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl std::fmt::Debug for RatVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

pub(crate) fn dot(x: &[Rational], y: &[Rational]) -> Rational {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub(crate) fn dot_int(a: &[BigInt], x: &[Rational]) -> Rational {
    // Common-denominator accumulation keeps the big-integer work linear.
    let den = Rational::lcm_denom(x);
    let mut num = BigInt::zero();
    for (c, v) in a.iter().zip(x) {
        if !c.is_zero() && !v.is_zero() {
            num += c * v.numer() * (&den / v.denom());
        }
    }
    Rational::new(num, den).expect("positive denominator")
}

/// Row-major rational matrix.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize, Debug)]
pub struct RatMatrix {
    rows: Vec<RatVector>,
    ncols: usize,
}

impl RatMatrix {
    pub fn new(rows: Vec<RatVector>) -> Result<Self> {
        let ncols = rows
            .first()
            .map(RatVector::dim)
            .ok_or_else(|| Error::InvalidParameter("matrix needs at least one row".into()))?;
        for r in &rows {
            check_dim(ncols, r.dim())?;
        }
        Ok(RatMatrix { rows, ncols })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Self::new(rows.iter().map(|r| RatVector::from_ints(r)).collect())
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| {
                RatVector(
                    (0..n)
                        .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                        .collect(),
                )
            })
            .collect();
        RatMatrix { rows, ncols: n }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn row(&self, i: usize) -> &RatVector {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[RatVector] {
        &self.rows
    }

    pub fn mul_vec(&self, x: &RatVector) -> Result<RatVector> {
        check_dim(self.ncols, x.dim())?;
        Ok(RatVector(self.rows.iter().map(|r| dot(&r.0, &x.0)).collect()))
    }

    fn raw_rows(&self) -> Vec<Vec<Rational>> {
        self.rows.iter().map(|r| r.0.clone()).collect()
    }
}

/// Solves `A x = b` for square `A`. `Ok(None)` signals a singular matrix.
pub fn solve_linear_system(a: &RatMatrix, b: &RatVector) -> Result<Option<RatVector>> {
    if a.nrows() != a.ncols() {
        return Err(Error::NotSquare { rows: a.nrows(), cols: a.ncols() });
    }
    check_dim(a.nrows(), b.dim())?;
    let ech = RowEchelon::new(a.ncols(), &a.raw_rows(), &b.0);
    if ech.rank() < a.ncols() {
        return Ok(None);
    }
    Ok(ech.particular_solution().map(RatVector))
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(a: &RatMatrix) -> Result<Rational> {
    if a.nrows() != a.ncols() {
        return Err(Error::NotSquare { rows: a.nrows(), cols: a.ncols() });
    }
    Ok(determinant_raw(&a.raw_rows()))
}

pub(crate) fn determinant_raw(rows: &[Vec<Rational>]) -> Rational {
    let n = rows.len();
    // Clear denominators row by row, then run integer Bareiss.
    let mut scale = BigInt::one();
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            let l = Rational::lcm_denom(r);
            let out = r.iter().map(|v| v.numer() * (&l / v.denom())).collect();
            scale *= &l;
            out
        })
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return Rational::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    let det = if n == 0 { BigInt::one() } else { m[n - 1][n - 1].clone() };
    Rational::new(sign * det, scale).expect("nonzero scale")
}

/// Reduced row echelon form of an augmented system `[A | b]`.
#[derive(Clone, Debug)]
pub struct RowEchelon {
    rows: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
    ncols: usize,
    consistent: bool,
}

impl RowEchelon {
    pub fn new(ncols: usize, a: &[Vec<Rational>], b: &[Rational]) -> Self {
        let mut rows: Vec<Vec<Rational>> = a
            .iter()
            .zip(b)
            .map(|(r, v)| {
                let mut row = r.clone();
                row.push(v.clone());
                row
            })
            .collect();
        let mut pivots = Vec::new();
        let mut next = 0;
        for col in 0..ncols {
            let Some(p) = (next..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
                continue;
            };
            rows.swap(next, p);
            let inv = rows[next][col].recip().expect("nonzero pivot");
            for v in rows[next].iter_mut().skip(col) {
                *v *= &inv;
            }
            let pivot_row = rows[next].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r == next || row[col].is_zero() {
                    continue;
                }
                let f = row[col].clone();
                for (c, pv) in pivot_row.iter().enumerate().skip(col) {
                    if !pv.is_zero() {
                        row[c] -= &f * pv;
                    }
                }
            }
            pivots.push(col);
            next += 1;
            if next == rows.len() {
                break;
            }
        }
        let consistent = rows[next..].iter().all(|r| r[ncols].is_zero());
        rows.truncate(next);
        RowEchelon { rows, pivots, ncols, consistent }
    }

    pub fn homogeneous(ncols: usize, a: &[Vec<Rational>]) -> Self {
        let zeros = vec![Rational::zero(); a.len()];
        Self::new(ncols, a, &zeros)
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_consistent(&self) -> bool {
        self.consistent
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn is_pivot(&self, col: usize) -> Option<usize> {
        self.pivots.iter().position(|&p| p == col)
    }

    /// Solution with every free variable set to zero.
    pub fn particular_solution(&self) -> Option<Vec<Rational>> {
        if !self.consistent {
            return None;
        }
        let mut x = vec![Rational::zero(); self.ncols];
        for (r, &p) in self.pivots.iter().enumerate() {
            x[p] = self.rows[r][self.ncols].clone();
        }
        Some(x)
    }

    /// Value of variable `col` if it is the same in every solution.
    pub fn determined_value(&self, col: usize) -> Option<Rational> {
        if !self.consistent {
            return None;
        }
        let r = self.is_pivot(col)?;
        let row = &self.rows[r];
        let free_clear = (0..self.ncols)
            .filter(|c| self.is_pivot(*c).is_none())
            .all(|c| row[c].is_zero());
        free_clear.then(|| row[self.ncols].clone())
    }

    /// Basis of the solution space of the homogeneous system.
    pub fn null_space(&self) -> Vec<Vec<Rational>> {
        let mut basis = Vec::new();
        for free in (0..self.ncols).filter(|c| self.is_pivot(*c).is_none()) {
            let mut v = vec![Rational::zero(); self.ncols];
            v[free] = Rational::one();
            for (r, &p) in self.pivots.iter().enumerate() {
                v[p] = -&self.rows[r][free];
            }
            basis.push(v);
        }
        basis
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn identity_solve() {
        let x = solve_linear_system(&RatMatrix::identity(3), &RatVector::from_ints(&[1, 2, 3]))
            .unwrap()
            .unwrap();
        assert_eq!(x, RatVector::from_ints(&[1, 2, 3]));
    }

    #[test]
    fn diagonal_solve() {
        let a = RatMatrix::from_ints(&[&[2, 0], &[0, 2]]).unwrap();
        let x = solve_linear_system(&a, &RatVector::from_ints(&[2, 4])).unwrap().unwrap();
        assert_eq!(x, RatVector::from_ints(&[1, 2]));
    }

    #[test]
    fn singular_is_data() {
        let a = RatMatrix::from_ints(&[&[1, 1], &[2, 2]]).unwrap();
        assert_eq!(solve_linear_system(&a, &RatVector::from_ints(&[1, 1])).unwrap(), None);
    }

    #[test]
    fn solve_shape_errors() {
        let a = RatMatrix::from_ints(&[&[1, 1, 0], &[2, 2, 1]]).unwrap();
        assert!(matches!(
            solve_linear_system(&a, &RatVector::from_ints(&[1, 1])),
            Err(Error::NotSquare { .. })
        ));
        let b = RatMatrix::identity(2);
        assert!(solve_linear_system(&b, &RatVector::from_ints(&[1, 1, 1])).is_err());
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant(&RatMatrix::identity(4)).unwrap(), Rational::one());
        let a = RatMatrix::from_ints(&[&[1, 2], &[3, 4]]).unwrap();
        assert_eq!(determinant(&a).unwrap(), Rational::from(-2));
        let s = RatMatrix::from_ints(&[&[1, 1], &[2, 2]]).unwrap();
        assert_eq!(determinant(&s).unwrap(), Rational::zero());
        let p = RatMatrix::from_ints(&[&[0, 1], &[1, 0]]).unwrap();
        assert_eq!(determinant(&p).unwrap(), Rational::from(-1));
    }

    #[test]
    fn rational_determinant() {
        let a = RatMatrix::new(vec![
            RatVector::new(vec![q(1, 2), q(1, 3)]).unwrap(),
            RatVector::new(vec![q(1, 4), q(1, 5)]).unwrap(),
        ])
        .unwrap();
        assert_eq!(determinant(&a).unwrap(), q(1, 10) - q(1, 12));
    }

    #[test]
    fn echelon_reports_free_coordinates() {
        // x + y = 1: y is free, x is not determined.
        let ech = RowEchelon::new(2, &[vec![q(1, 1), q(1, 1)]], &[q(1, 1)]);
        assert_eq!(ech.rank(), 1);
        assert_eq!(ech.determined_value(0), None);
        assert_eq!(ech.null_space().len(), 1);
        // x = 2 with y free: x determined.
        let ech = RowEchelon::new(2, &[vec![q(3, 1), q(0, 1)]], &[q(6, 1)]);
        assert_eq!(ech.determined_value(0), Some(q(2, 1)));
        assert_eq!(ech.determined_value(1), None);
        let bad = RowEchelon::new(1, &[vec![q(1, 1)], vec![q(1, 1)]], &[q(0, 1), q(1, 1)]);
        assert!(!bad.is_consistent());
    }
}
