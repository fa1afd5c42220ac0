#![allow(dead_code)]

use proptest::prelude::*;
use syminv::linalg::{int, Matrix, Rational};

pub fn mat(rows: &[&[i64]]) -> Matrix<Rational> {
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()).unwrap()
}

pub fn from_ints(side: usize, v: &[i64]) -> Matrix<Rational> {
    Matrix::from_fn(side, side, |i, j| int(v[i * side + j]))
}

pub fn any_matrix(side: usize, bound: i64) -> impl Strategy<Value = Matrix<Rational>> {
    prop::collection::vec(-bound..=bound, side * side).prop_map(move |v| from_ints(side, &v))
}

pub fn invertible_matrix(side: usize, bound: i64) -> impl Strategy<Value = Matrix<Rational>> {
    any_matrix(side, bound).prop_filter("invertible", |m| m.is_invertible())
}

pub fn skew_matrix(side: usize, bound: i64) -> impl Strategy<Value = Matrix<Rational>> {
    any_matrix(side, bound).prop_map(|a| &a - &a.transpose())
}

pub fn symmetric_matrix(side: usize, bound: i64) -> impl Strategy<Value = Matrix<Rational>> {
    any_matrix(side, bound).prop_map(|a| &a + &a.transpose())
}

/// Pfaffian by expansion along the first row; independent of the
/// elimination used in the library.
pub fn pfaffian_by_expansion(a: &Matrix<Rational>) -> Rational {
    let n = a.rows();
    if n == 0 {
        return int(1);
    }
    let mut acc = int(0);
    for j in 1..n {
        let keep: Vec<usize> = (1..n).filter(|&t| t != j).collect();
        let minor = Matrix::from_fn(keep.len(), keep.len(), |r, c| a[(keep[r], keep[c])].clone());
        let sign = if j % 2 == 1 { int(1) } else { int(-1) };
        acc = acc + sign * a[(0, j)].clone() * pfaffian_by_expansion(&minor);
    }
    acc
}

/// Determinant by Laplace expansion; independent of elimination.
pub fn det_by_expansion(a: &Matrix<Rational>) -> Rational {
    let n = a.rows();
    if n == 1 {
        return a[(0, 0)].clone();
    }
    let mut acc = int(0);
    for j in 0..n {
        let minor = Matrix::from_fn(n - 1, n - 1, |r, c| a[(r + 1, if c < j { c } else { c + 1 })].clone());
        let sign = if j % 2 == 0 { int(1) } else { int(-1) };
        acc = acc + sign * a[(0, j)].clone() * det_by_expansion(&minor);
    }
    acc
}
