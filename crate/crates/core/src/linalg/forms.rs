//! Operations on bilinear forms: symmetric/antisymmetric splitting,
//! Pfaffians, Pfaffian pencils and congruence signatures.

use super::field::Field;
use super::matrix::Matrix;
use super::poly::Polynomial;
use crate::error::{Error, Result};

pub fn mat_inverse<T: Field>(m: &Matrix<T>) -> Result<Matrix<T>> {
    m.inverse()
}

/// Returns `(b_s, b_a) = ((b + bᵗ)/2, (b − bᵗ)/2)`.
pub fn split_parts<T: Field>(b: &Matrix<T>) -> Result<(Matrix<T>, Matrix<T>)> {
    if !b.is_square() {
        return Err(Error::DimensionMismatch("bilinear form must be square".into()));
    }
    let bt = b.transpose();
    let half = T::one() / T::from_i64(2);
    Ok(((b + &bt).scale(&half), (b - &bt).scale(&half)))
}

/// Squarefreeness of det(λI − M): the exact stand-in for a simple spectrum.
pub fn charpoly_is_squarefree<T: Field>(m: &Matrix<T>) -> bool {
    m.charpoly().map(|p| p.is_squarefree()).unwrap_or(false)
}

fn check_skew<T: Field>(m: &Matrix<T>) -> Result<()> {
    if !m.is_skew() {
        return Err(Error::NotSkew);
    }
    if m.rows() % 2 != 0 {
        return Err(Error::OddDimension(m.rows()));
    }
    Ok(())
}

/// Pfaffian by skew-symmetric Gaussian elimination: pivot on a nonzero
/// entry of the first row, then recurse on the Schur complement of the
/// leading 2×2 block.
pub fn pfaffian<T: Field>(m: &Matrix<T>) -> Result<T> {
    check_skew(m)?;
    let mut a = m.clone();
    let mut n = a.rows();
    let mut acc = T::one();
    while n > 0 {
        let Some(j) = (1..n).find(|&j| !a[(0, j)].is_zero()) else {
            return Ok(T::zero());
        };
        if j != 1 {
            a = swap_index(&a, 1, j);
            acc = -acc;
        }
        let pivot = a[(0, 1)].clone();
        acc = acc * pivot.clone();
        let next = Matrix::from_fn(n - 2, n - 2, |i, j| {
            let (i, j) = (i + 2, j + 2);
            a[(i, j)].clone()
                - (a[(i, 1)].clone() * a[(0, j)].clone() - a[(i, 0)].clone() * a[(1, j)].clone())
                    / pivot.clone()
        });
        a = next;
        n -= 2;
    }
    Ok(acc)
}

fn swap_index<T: Field>(a: &Matrix<T>, p: usize, q: usize) -> Matrix<T> {
    let perm = |i: usize| {
        if i == p {
            q
        } else if i == q {
            p
        } else {
            i
        }
    };
    Matrix::from_fn(a.rows(), a.cols(), |i, j| a[(perm(i), perm(j))].clone())
}

/// Pf(ω − λα) as a polynomial in λ of degree at most r = side/2, obtained
/// by interpolating r+1 exact point evaluations.
pub fn pfaffian_pencil<T: Field>(omega: &Matrix<T>, alpha: &Matrix<T>) -> Result<Polynomial<T>> {
    check_skew(omega)?;
    check_skew(alpha)?;
    if omega.rows() != alpha.rows() {
        return Err(Error::DimensionMismatch(format!(
            "pencil of sides {} and {}",
            omega.rows(),
            alpha.rows()
        )));
    }
    let r = omega.rows() / 2;
    let points = (0..=r)
        .map(|i| {
            let lambda = T::from_i64(i as i64);
            let value = pfaffian(&(omega - &alpha.scale(&lambda)))?;
            Ok((lambda, value))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Polynomial::interpolate(&points))
}

/// Inertia `(positive, negative)` of a nonsingular symmetric form, by
/// Lagrange reduction. Zero diagonals are handled with a hyperbolic 2×2
/// step, which contributes one positive and one negative square.
pub fn signature<T: Field>(m: &Matrix<T>) -> Result<(usize, usize)> {
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    if !m.is_invertible() {
        return Err(Error::Singular);
    }
    let (mut pos, mut neg) = (0, 0);
    let mut a = m.clone();
    while a.rows() > 0 {
        let n = a.rows();
        if let Some(i) = (0..n).find(|&i| !a[(i, i)].is_zero()) {
            let d = a[(i, i)].clone();
            if d.sign() > 0 {
                pos += 1;
            } else {
                neg += 1;
            }
            let keep: Vec<usize> = (0..n).filter(|&t| t != i).collect();
            a = Matrix::from_fn(n - 1, n - 1, |r, c| {
                let (r, c) = (keep[r], keep[c]);
                a[(r, c)].clone() - a[(r, i)].clone() * a[(i, c)].clone() / d.clone()
            });
            continue;
        }
        // every diagonal entry vanishes; nonsingularity gives an off-diagonal pivot
        let (i, j) = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .find(|&(i, j)| i != j && !a[(i, j)].is_zero())
            .ok_or(Error::Singular)?;
        pos += 1;
        neg += 1;
        let c = a[(i, j)].clone();
        let keep: Vec<usize> = (0..n).filter(|&t| t != i && t != j).collect();
        // Schur complement of [[0, c], [c, 0]], whose inverse is [[0, 1/c], [1/c, 0]]
        a = Matrix::from_fn(n - 2, n - 2, |r, s| {
            let (r, s) = (keep[r], keep[s]);
            a[(r, s)].clone()
                - (a[(r, i)].clone() * a[(j, s)].clone() + a[(r, j)].clone() * a[(i, s)].clone())
                    / c.clone()
        });
    }
    Ok((pos, neg))
}

/// Standard symplectic form of side 2r: block diagonal of [[0,1],[−1,0]].
pub fn standard_symplectic<T: Field>(side: usize) -> Matrix<T> {
    Matrix::from_fn(side, side, |i, j| {
        if i % 2 == 0 && j == i + 1 {
            T::one()
        } else if j % 2 == 0 && i == j + 1 {
            -T::one()
        } else {
            T::zero()
        }
    })
}
