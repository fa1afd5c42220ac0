//! Exact dense linear algebra over an abstract scalar field.

pub mod field;
pub mod forms;
pub mod matrix;
pub mod poly;

pub use field::{format_rational, int, parse_rational, rat, Field, Rational};
pub use forms::{
    charpoly_is_squarefree, mat_inverse, pfaffian, pfaffian_pencil, signature, split_parts,
    standard_symplectic,
};
pub use matrix::Matrix;
pub use poly::Polynomial;
