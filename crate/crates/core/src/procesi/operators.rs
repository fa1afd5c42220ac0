//! Operators attached to a single bilinear form b: the Cayley pair
//! H = b⁻ᵗb, S = b_s⁻¹b_a and the b-adjoint.

use crate::error::Result;
use crate::linalg::{charpoly_is_squarefree, split_parts, Field, Matrix};

/// S^b = b_s⁻¹ b_a.
pub fn s_operator<T: Field>(b: &Matrix<T>) -> Result<Matrix<T>> {
    let (sym, anti) = split_parts(b)?;
    Ok(&sym.inverse()? * &anti)
}

/// H^b = b⁻ᵗ b.
pub fn h_operator<T: Field>(b: &Matrix<T>) -> Result<Matrix<T>> {
    Ok(&b.inverse()?.transpose() * b)
}

/// A_b = b⁻ᵗ Aᵗ bᵗ, characterised by b(Ax, y) = b(x, A_b y).
pub fn b_adjoint<T: Field>(a: &Matrix<T>, b: &Matrix<T>) -> Result<Matrix<T>> {
    let inv_t = b.inverse()?.transpose();
    Ok(&(&inv_t * &a.transpose()) * &b.transpose())
}

/// b and b_s invertible, and S^b with squarefree characteristic polynomial.
pub fn is_nondegenerate_form<T: Field>(b: &Matrix<T>) -> bool {
    if !b.is_square() || !b.is_invertible() {
        return false;
    }
    match s_operator(b) {
        Ok(s) => charpoly_is_squarefree(&s),
        Err(_) => false,
    }
}

/// Why a form fails [`is_nondegenerate_form`], if it does.
pub(crate) fn degeneracy_reason<T: Field>(b: &Matrix<T>) -> Option<&'static str> {
    if !b.is_invertible() {
        return Some("form is singular");
    }
    let Ok(s) = s_operator(b) else {
        return Some("symmetric part is singular");
    };
    if !charpoly_is_squarefree(&s) {
        return Some("S-operator spectrum is not simple");
    }
    None
}
