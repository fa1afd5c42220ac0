//! Exact trace invariants of symbols of linear differential operators and
//! equivalence testing under GL(T) × GL(E)/ℤ₂.

pub mod cli;
pub mod error;
pub mod io;
pub mod linalg;
pub mod procesi;
pub mod symbols;
pub mod verify;

pub use error::{Error, Result};
