//! Operator tuples built from a symbol's values, trace words, and the
//! fingerprints (tables of exact traces) used to decide equivalence.

mod fingerprint;
mod operators;
mod special;
mod tuple;
mod words;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub use fingerprint::{
    fingerprint, fingerprint_with, trace_values, trace_word, tuples_equivalent, Fingerprint,
    FingerprintMeta, TupleVerdict,
};
pub use operators::{b_adjoint, h_operator, is_nondegenerate_form, s_operator};
pub use special::{
    fingerprint_for_forms, select_special_tuple, symbol_fingerprint, symbols_equivalent, Gate,
    Q1Choice, SpecialTuple, SymbolVerdict, Verdict,
};
pub use tuple::{build_tuple, OperatorTuple};
pub use words::{enumerate_words, procesi_cap, Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    General,
    SelfAdjoint,
    Skew,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::General => "general",
            Mode::SelfAdjoint => "self-adjoint",
            Mode::Skew => "skew",
        }
    }

    /// Skew symbols need an even, positive fiber dimension.
    pub fn check_dimension(self, m: usize) -> Result<()> {
        if m == 0 {
            return Err(Error::ShapeMismatch("fiber dimension must be positive".into()));
        }
        if self == Mode::Skew && m % 2 != 0 {
            return Err(Error::OddDimension(m));
        }
        Ok(())
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "general" => Ok(Mode::General),
            "self-adjoint" => Ok(Mode::SelfAdjoint),
            "skew" => Ok(Mode::Skew),
            other => Err(Error::parse("mode", format!("unknown mode {other:?}"))),
        }
    }
}
