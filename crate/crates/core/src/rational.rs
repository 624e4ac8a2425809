//! Exact rational scalars, vectors and matrices.
//!
//! All geometry and linear programming in this crate runs on
//! arbitrary-precision rationals; nothing is ever rounded. `Rational` is
//! `num_rational::BigRational`, which keeps values in lowest terms with a
//! positive denominator after every operation.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Shorthand for a rational from an integer pair; panics on `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from an integer.
pub fn rat_int(num: i64) -> Rational {
    Rational::from_integer(BigInt::from(num))
}

/// Parses "p/q" or "p" with arbitrary-precision integers.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let q: Rational = s
        .parse()
        .map_err(|_| Error::input(format!("cannot parse rational `{s}`")))?;
    Ok(q)
}

/// Renders a rational as "p" when integral, "p/q" otherwise.
pub fn rational_string(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// A dense rational vector with a fixed dimension (at least 1).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RatVector(Vec<Rational>);

impl RatVector {
    pub fn new(entries: Vec<Rational>) -> Self {
        assert!(!entries.is_empty(), "vector dimension must be at least 1");
        RatVector(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(vec![Rational::zero(); dim])
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = vec![Rational::zero(); dim];
        v[i] = Rational::one();
        Self::new(v)
    }

    pub fn from_ints(entries: &[i64]) -> Self {
        Self::new(entries.iter().map(|&x| rat_int(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Rational> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    pub fn dot(&self, other: &RatVector) -> Rational {
        assert_eq!(self.len(), other.len(), "dot: dimension mismatch");
        let mut acc = Rational::zero();
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            if !a.is_zero() && !b.is_zero() {
                acc += a * b;
            }
        }
        acc
    }

    pub fn add(&self, other: &RatVector) -> RatVector {
        assert_eq!(self.len(), other.len(), "add: dimension mismatch");
        RatVector(self.0.iter().zip(other.iter()).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &RatVector) -> RatVector {
        assert_eq!(self.len(), other.len(), "sub: dimension mismatch");
        RatVector(self.0.iter().zip(other.iter()).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> RatVector {
        RatVector(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, c: &Rational) -> RatVector {
        RatVector(self.0.iter().map(|a| a * c).collect())
    }

    /// Canonical representative of {v, -v}: the lexicographically larger one.
    pub fn sign_canonical(&self) -> RatVector {
        let n = self.neg();
        if *self >= n {
            self.clone()
        } else {
            n
        }
    }
}

impl Index<usize> for RatVector {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl IndexMut<usize> for RatVector {
    fn index_mut(&mut self, i: usize) -> &mut Rational {
        &mut self.0[i]
    }
}

impl fmt::Debug for RatVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", rational_string(x))?;
        }
        write!(f, ")")
    }
}

/// A dense row-major rational matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "matrix dimensions must be at least 1");
        RatMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<RatVector>) -> Self {
        assert!(!rows.is_empty(), "matrix must have at least one row");
        let cols = rows[0].len();
        assert!(
            rows.iter().all(|r| r.len() == cols),
            "rows must share a length"
        );
        let data = rows.into_iter().flat_map(|r| r.into_vec()).collect();
        RatMatrix {
            rows: 0,
            cols,
            data,
        }
        .with_row_count()
    }

    fn with_row_count(mut self) -> Self {
        self.rows = self.data.len() / self.cols;
        self
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| RatVector::from_ints(r)).collect())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[RatVector]) -> Self {
        assert!(!cols.is_empty());
        let rows = cols[0].len();
        assert!(cols.iter().all(|c| c.len() == rows));
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for i in 0..rows {
                m[(i, j)] = c[i].clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vector(&self, i: usize) -> RatVector {
        RatVector::new(self.row(i).to_vec())
    }

    pub fn column(&self, j: usize) -> RatVector {
        RatVector::new((0..self.rows).map(|i| self[(i, j)].clone()).collect())
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut t = RatMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &RatVector) -> RatVector {
        assert_eq!(self.cols, v.len(), "mul_vec: dimension mismatch");
        RatVector::new(
            (0..self.rows)
                .map(|i| {
                    let mut acc = Rational::zero();
                    for (a, b) in self.row(i).iter().zip(v.iter()) {
                        if !a.is_zero() && !b.is_zero() {
                            acc += a * b;
                        }
                    }
                    acc
                })
                .collect(),
        )
    }

    pub fn mul_mat(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows, "mul_mat: dimension mismatch");
        let mut out = RatMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let prod = a * b;
                        out[(i, j)] += prod;
                    }
                }
            }
        }
        out
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{} ", rational_string(&self[(i, j)]))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Exact rank by Gaussian elimination over the rationals.
pub fn matrix_rank(m: &RatMatrix) -> usize {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut rank = 0;
    let mut pivot_row = 0;
    for col in 0..cols {
        let Some(p) = (pivot_row..rows).find(|&r| !a[(r, col)].is_zero()) else {
            continue;
        };
        if p != pivot_row {
            for j in 0..cols {
                let tmp = a[(p, j)].clone();
                a[(p, j)] = a[(pivot_row, j)].clone();
                a[(pivot_row, j)] = tmp;
            }
        }
        let inv = a[(pivot_row, col)].recip();
        for r in pivot_row + 1..rows {
            if a[(r, col)].is_zero() {
                continue;
            }
            let factor = &a[(r, col)] * &inv;
            for j in col..cols {
                let sub = &factor * &a[(pivot_row, j)];
                a[(r, j)] -= sub;
            }
        }
        rank += 1;
        pivot_row += 1;
        if pivot_row == rows {
            break;
        }
    }
    rank
}

/// Outcome of solving a square-or-rectangular exact linear system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearSolve {
    Unique(RatVector),
    Underdetermined,
    Inconsistent,
}

/// Solves `a * x = b` exactly by Gauss-Jordan elimination.
///
/// Inconsistency takes precedence over rank deficiency, so a system that is
/// both contradictory and rank-deficient reports `Inconsistent`.
pub fn solve_linear_system(a: &RatMatrix, b: &RatVector) -> Result<LinearSolve> {
    if a.rows() != b.len() {
        return Err(Error::input(format!(
            "solve_linear_system: {} rows vs rhs of length {}",
            a.rows(),
            b.len()
        )));
    }
    let rows = a.rows();
    let cols = a.cols();
    // Augmented matrix [a | b].
    let mut m = RatMatrix::zeros(rows, cols + 1);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = a[(i, j)].clone();
        }
        m[(i, cols)] = b[i].clone();
    }
    let mut pivot_cols = Vec::new();
    let mut pivot_row = 0;
    for col in 0..cols {
        let Some(p) = (pivot_row..rows).find(|&r| !m[(r, col)].is_zero()) else {
            continue;
        };
        if p != pivot_row {
            for j in 0..=cols {
                let tmp = m[(p, j)].clone();
                m[(p, j)] = m[(pivot_row, j)].clone();
                m[(pivot_row, j)] = tmp;
            }
        }
        let inv = m[(pivot_row, col)].recip();
        for j in col..=cols {
            m[(pivot_row, j)] *= inv.clone();
        }
        for r in 0..rows {
            if r == pivot_row || m[(r, col)].is_zero() {
                continue;
            }
            let factor = m[(r, col)].clone();
            for j in col..=cols {
                let sub = &factor * &m[(pivot_row, j)];
                m[(r, j)] -= sub;
            }
        }
        pivot_cols.push(col);
        pivot_row += 1;
        if pivot_row == rows {
            break;
        }
    }
    for r in pivot_row..rows {
        if !m[(r, cols)].is_zero() {
            return Ok(LinearSolve::Inconsistent);
        }
    }
    if pivot_cols.len() < cols {
        return Ok(LinearSolve::Underdetermined);
    }
    let mut x = vec![Rational::zero(); cols];
    for (r, &col) in pivot_cols.iter().enumerate() {
        x[col] = m[(r, cols)].clone();
    }
    Ok(LinearSolve::Unique(RatVector::new(x)))
}

/// Exact inverse of a square matrix, or `None` when singular.
pub fn invert(m: &RatMatrix) -> Option<RatMatrix> {
    assert!(m.is_square(), "invert: matrix must be square");
    let n = m.rows();
    let mut a = m.clone();
    let mut inv = RatMatrix::identity(n);
    for col in 0..n {
        let p = (col..n).find(|&r| !a[(r, col)].is_zero())?;
        if p != col {
            for j in 0..n {
                let tmp = a[(p, j)].clone();
                a[(p, j)] = a[(col, j)].clone();
                a[(col, j)] = tmp;
                let tmp = inv[(p, j)].clone();
                inv[(p, j)] = inv[(col, j)].clone();
                inv[(col, j)] = tmp;
            }
        }
        let piv = a[(col, col)].recip();
        for j in 0..n {
            a[(col, j)] *= piv.clone();
            inv[(col, j)] *= piv.clone();
        }
        for r in 0..n {
            if r == col || a[(r, col)].is_zero() {
                continue;
            }
            let factor = a[(r, col)].clone();
            for j in 0..n {
                let sub = &factor * &a[(col, j)];
                a[(r, j)] -= sub;
                let sub = &factor * &inv[(col, j)];
                inv[(r, j)] -= sub;
            }
        }
    }
    Some(inv)
}

/// Absolute value helper.
pub fn rabs(q: &Rational) -> Rational {
    q.abs()
}
