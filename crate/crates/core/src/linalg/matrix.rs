use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use super::field::Field;
use super::poly::Polynomial;
use crate::error::{Error, Result};

/// Dense row-major matrix over a [`Field`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<T>,
}

impl<T: Field> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn scalar(n: usize, value: T) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { value.clone() } else { T::zero() })
    }

    pub fn diagonal(values: &[T]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| if i == j { values[i].clone() } else { T::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self { rows, cols, entries }
    }

    /// Builds a matrix from row vectors; fails on ragged input.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Self {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_vec(rows: usize, cols: usize, entries: Vec<T>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| x.clone() * c.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(T::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && *self == self.transpose()
    }

    pub fn is_skew(&self) -> bool {
        self.is_square() && *self == -self.transpose()
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let (n, p, q) = (self.rows, self.cols, other.cols);
        let mut out = Vec::with_capacity(n * q);
        for i in 0..n {
            for j in 0..q {
                let mut acc = T::zero();
                for l in 0..p {
                    let a = &self.entries[i * p + l];
                    if a.is_zero() {
                        continue;
                    }
                    acc = acc + a.clone() * other.entries[l * q + j].clone();
                }
                out.push(acc);
            }
        }
        Matrix {
            rows: n,
            cols: q,
            entries: out,
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::identity(self.rows), |acc, _| &acc * self)
    }

    /// Row echelon reduction in place; returns pivot columns and the
    /// determinant sign/scale factor accumulated from swaps and pivots.
    fn eliminate(&mut self, full: bool) -> (Vec<usize>, T) {
        let mut pivots = Vec::new();
        let mut det = T::one();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let best = (r..self.rows)
                .filter_map(|i| self[(i, c)].pivot_weight().map(|w| (i, w)))
                .fold(None, |best: Option<(usize, f64)>, (i, w)| match best {
                    Some((_, bw)) if bw >= w => best,
                    _ => Some((i, w)),
                });
            let Some((p, _)) = best else {
                continue;
            };
            if p != r {
                self.swap_rows(p, r);
                det = -det;
            }
            let pivot = self[(r, c)].clone();
            det = det * pivot.clone();
            let inv = T::one() / pivot;
            for j in c..self.cols {
                let v = self[(r, j)].clone() * inv.clone();
                self[(r, j)] = v;
            }
            let targets: Vec<usize> = if full {
                (0..self.rows).filter(|&i| i != r).collect()
            } else {
                (r + 1..self.rows).collect()
            };
            for i in targets {
                let factor = self[(i, c)].clone();
                if factor.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let v = self[(i, j)].clone() - factor.clone() * self[(r, j)].clone();
                    self[(i, j)] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (pivots, det)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        work.eliminate(false).0.len()
    }

    /// Dimension of the right kernel {x : M x = 0}.
    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    pub fn determinant(&self) -> Result<T> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("determinant of non-square matrix".into()));
        }
        let mut work = self.clone();
        let (pivots, det) = work.eliminate(false);
        if pivots.len() < self.rows {
            Ok(T::zero())
        } else {
            Ok(det)
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                T::one()
            } else {
                T::zero()
            }
        });
        let (pivots, _) = aug.eliminate(true);
        if pivots.len() < n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
            return Err(Error::Singular);
        }
        Ok(Self::from_fn(n, n, |i, j| aug[(i, n + j)].clone()))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// det(λI − M), via the Faddeev–LeVerrier recurrence (characteristic zero).
    pub fn charpoly(&self) -> Result<Polynomial<T>> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("charpoly of non-square matrix".into()));
        }
        let n = self.rows;
        let mut coeffs = vec![T::zero(); n + 1];
        coeffs[n] = T::one();
        let mut m_k = Self::zeros(n, n);
        let ident = Self::identity(n);
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I
            m_k = &(self * &m_k) + &ident.scale(&coeffs[n - k + 1]);
            let am = self * &m_k;
            coeffs[n - k] = -(am.trace() / T::from_i64(k as i64));
        }
        Ok(Polynomial::new(coeffs))
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.entries[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.entries[i * self.cols + j]
    }
}

impl<'a, T: Field> Mul<&'a Matrix<T>> for &'a Matrix<T> {
    type Output = Matrix<T>;

    fn mul(self, rhs: &'a Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        self.mul_unchecked(rhs)
    }
}

impl<'a, T: Field> Add<&'a Matrix<T>> for &'a Matrix<T> {
    type Output = Matrix<T>;

    fn add(self, rhs: &'a Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }
}

impl<'a, T: Field> Sub<&'a Matrix<T>> for &'a Matrix<T> {
    type Output = Matrix<T>;

    fn sub(self, rhs: &'a Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }
}

impl<T: Field> Neg for Matrix<T> {
    type Output = Matrix<T>;

    fn neg(self) -> Matrix<T> {
        self.map(|x| -x.clone())
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_list();
        for i in 0..self.rows {
            list.entry(&&self.entries[i * self.cols..(i + 1) * self.cols]);
        }
        list.finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::field::{int, rat, Rational};

    fn m(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect())
            .unwrap()
    }

    #[test]
    fn inverse_of_identity() {
        let i = Matrix::<Rational>::identity(2);
        assert_eq!(i.inverse().unwrap(), i);
    }

    #[test]
    fn inverse_of_rotation_like() {
        let a = m(&[&[1, 1], &[-1, 1]]);
        let inv = a.inverse().unwrap();
        let expected = m(&[&[1, -1], &[1, 1]]).scale(&rat(1, 2));
        assert_eq!(inv, expected);
        assert_eq!(&inv * &a, Matrix::identity(2));
    }

    #[test]
    fn inverse_of_rank_one_fails() {
        assert_eq!(m(&[&[1, 1], &[1, 1]]).inverse(), Err(Error::Singular));
    }

    #[test]
    fn determinant_and_rank() {
        let a = m(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 1]]);
        // 2(3-2) - 0 + 1(1-3) = 0
        assert_eq!(a.determinant().unwrap(), int(0));
        assert_eq!(a.rank(), 2);
        assert_eq!(a.nullity(), 1);
        let b = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(b.determinant().unwrap(), int(-1));
    }

    #[test]
    fn charpoly_small() {
        let a = m(&[&[0, 1], &[-1, 0]]);
        assert_eq!(a.charpoly().unwrap().coeffs(), &[int(1), int(0), int(1)]);
        let b = m(&[&[1, 2], &[3, 4]]);
        assert_eq!(b.charpoly().unwrap().coeffs(), &[int(-2), int(-5), int(1)]);
    }

    #[test]
    fn float_inverse_uses_partial_pivoting() {
        let a = Matrix::from_rows(vec![vec![1e-20, 1.0], vec![1.0, 1.0]]).unwrap();
        let inv = a.inverse().unwrap();
        let prod = &a * &inv;
        for i in 0..2 {
            for j in 0..2 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((prod[(i, j)] - want).abs() < 1e-12);
            }
        }
    }
}
