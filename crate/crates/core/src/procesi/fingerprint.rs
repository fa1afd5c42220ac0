use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;

use super::tuple::OperatorTuple;
use super::words::{enumerate_words, Word};
use super::Mode;
use crate::error::{Error, Result};
use crate::linalg::{signature, Field, Matrix, Rational};
use crate::verify::condition_star_pair;

/// tr(X₁ ⋯ X_s) with Xⱼ the operator or its adjoint for the tuple's form.
pub fn trace_word<T: Field>(tuple: &OperatorTuple<T>, word: &Word) -> Result<T> {
    let len = tuple.ops().len();
    if let Some(bad) = word.letters().iter().find(|l| l.op >= len) {
        return Err(Error::IndexOutOfRange { index: bad.op, len });
    }
    Ok(word_product(tuple, word).trace())
}

fn word_product<T: Field>(tuple: &OperatorTuple<T>, word: &Word) -> Matrix<T> {
    let pick = |l: &super::Letter| {
        if l.adjoint {
            &tuple.adjoints()[l.op]
        } else {
            &tuple.ops()[l.op]
        }
    };
    let mut letters = word.letters().iter();
    let first = pick(letters.next().expect("non-empty word")).clone();
    letters.fold(first, |acc, l| &acc * pick(l))
}

/// Traces of `words`, evaluated in parallel against the shared tuple.
pub fn trace_values<T: Field>(tuple: &OperatorTuple<T>, words: &[Word]) -> Result<Vec<T>> {
    words.par_iter().map(|w| trace_word(tuple, w)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FingerprintMeta {
    pub mode: Mode,
    pub m: usize,
    /// Number of forms σ_{q_i} the tuple was built from.
    pub num_forms: usize,
    pub cap: usize,
    /// Inertia of the reference symmetric form (real fields only).
    pub signature: Option<(usize, usize)>,
    pub labels: Vec<usize>,
    pub q1_choice: Option<String>,
    /// (n, k) when the fingerprint comes from a symbol.
    pub shape: Option<(usize, usize)>,
    pub warnings: Vec<String>,
}

/// Canonical words mapped to their exact traces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fingerprint {
    pub entries: BTreeMap<Word, Rational>,
    pub meta: FingerprintMeta,
}

impl Fingerprint {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, word: &Word) -> Option<&Rational> {
        self.entries.get(&word.canonical())
    }

    /// Some entry of word length ≥ 3 is nonzero.
    pub fn has_high_degree_invariant(&self) -> bool {
        self.entries.iter().any(|(w, v)| w.len() >= 3 && !v.is_zero())
    }

    /// Entry-wise equality plus matching signatures.
    pub fn same_invariants(&self, other: &Self) -> bool {
        self.entries == other.entries && self.meta.signature == other.meta.signature
    }
}

pub fn fingerprint(tuple: &OperatorTuple<Rational>, cap: usize) -> Result<Fingerprint> {
    fingerprint_with(tuple, cap, true)
}

/// Fingerprint at word-length `cap`; `real` attaches the signature of the
/// symmetric reference form in general and self-adjoint modes.
pub fn fingerprint_with(tuple: &OperatorTuple<Rational>, cap: usize, real: bool) -> Result<Fingerprint> {
    let words = enumerate_words(tuple.ops().len(), cap);
    let values = trace_values(tuple, &words)?;
    let signature = match (real, tuple.mode()) {
        (true, Mode::General | Mode::SelfAdjoint) => Some(signature(tuple.form())?),
        _ => None,
    };
    let mut warnings = Vec::new();
    if tuple.ops().is_empty() {
        warnings.push("tuple has no operators; fingerprint is empty".to_string());
    }
    Ok(Fingerprint {
        entries: words.into_iter().zip(values).collect(),
        meta: FingerprintMeta {
            mode: tuple.mode(),
            m: tuple.dim(),
            num_forms: tuple.labels().last().copied().unwrap_or(1),
            cap,
            signature,
            labels: tuple.labels().to_vec(),
            q1_choice: None,
            shape: None,
            warnings,
        },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TupleVerdict {
    pub equivalent: bool,
    /// Both tuples contain a condition (*) pair, so equal fingerprints
    /// separate orbits.
    pub regular: bool,
}

pub fn tuples_equivalent(
    t1: &OperatorTuple<Rational>,
    t2: &OperatorTuple<Rational>,
    cap: usize,
) -> Result<TupleVerdict> {
    if t1.mode() != t2.mode() || t1.dim() != t2.dim() || t1.ops().len() != t2.ops().len() {
        return Err(Error::ShapeMismatch(format!(
            "tuples ({}, m={}, {} ops) and ({}, m={}, {} ops)",
            t1.mode(),
            t1.dim(),
            t1.ops().len(),
            t2.mode(),
            t2.dim(),
            t2.ops().len()
        )));
    }
    let f1 = fingerprint(t1, cap)?;
    let f2 = fingerprint(t2, cap)?;
    Ok(TupleVerdict {
        equivalent: f1.same_invariants(&f2),
        regular: condition_star_pair(t1).is_some() && condition_star_pair(t2).is_some(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, Matrix};
    use crate::procesi::{build_tuple, Letter};
    use crate::symbols::{act_gl_e, random_invertible, random_symbol, DualKind, KForm};

    fn m(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect())
            .unwrap()
    }

    fn units(n: usize) -> Vec<KForm> {
        (0..n).map(|i| KForm::unit(n, i)).collect()
    }

    #[test]
    fn single_letter_trace() {
        let forms = [Matrix::identity(2), Matrix::diagonal(&[int(1), int(2)])];
        let t = OperatorTuple::from_forms(&forms, Mode::SelfAdjoint).unwrap();
        let w = Word::new(vec![Letter::plain(0)]);
        assert_eq!(trace_word(&t, &w).unwrap(), int(3));
        let bad = Word::new(vec![Letter::plain(4)]);
        assert_eq!(trace_word(&t, &bad), Err(Error::IndexOutOfRange { index: 4, len: 1 }));
    }

    #[test]
    fn s_operator_square_trace() {
        let forms = [m(&[&[1, 1], &[-1, 1]])];
        let t = OperatorTuple::from_forms(&forms, Mode::General).unwrap();
        let f = fingerprint(&t, 3).unwrap();
        let w = Word::new(vec![Letter::plain(0), Letter::plain(0)]);
        assert_eq!(f.get(&w), Some(&int(-2)));
    }

    #[test]
    fn reversed_adjoint_words_agree() {
        let s = random_symbol(2, 2, 3, DualKind::Star, Mode::General, 21).unwrap();
        let t = build_tuple(&s, &units(3), Mode::General).unwrap();
        let w = Word::new(vec![Letter::plain(1), Letter::adj(2), Letter::plain(0), Letter::plain(2)]);
        let a = trace_word(&t, &w).unwrap();
        let b = trace_word(&t, &w.reversed_adjoint()).unwrap();
        let c = trace_word(&t, &w.rotated(1)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn gl_e_invariance_small() {
        let s = random_symbol(2, 2, 2, DualKind::Star, Mode::General, 8).unwrap();
        let a = random_invertible(99, 2, 4);
        let moved = act_gl_e(&a, &s).unwrap();
        let f1 = fingerprint(&build_tuple(&s, &units(3), Mode::General).unwrap(), 3).unwrap();
        let f2 = fingerprint(&build_tuple(&moved, &units(3), Mode::General).unwrap(), 3).unwrap();
        assert_eq!(f1, f2);
        let v = tuples_equivalent(
            &build_tuple(&s, &units(3), Mode::General).unwrap(),
            &build_tuple(&moved, &units(3), Mode::General).unwrap(),
            3,
        )
        .unwrap();
        assert!(v.equivalent);
    }

    #[test]
    fn empty_tuple_is_flagged() {
        let t = OperatorTuple::from_forms(&[Matrix::<Rational>::identity(2)], Mode::SelfAdjoint).unwrap();
        let f = fingerprint(&t, 3).unwrap();
        assert!(f.is_empty());
        assert_eq!(f.meta.warnings.len(), 1);
    }

    #[test]
    fn shape_mismatch() {
        let t1 = OperatorTuple::from_forms(&[Matrix::<Rational>::identity(2)], Mode::SelfAdjoint).unwrap();
        let t2 = OperatorTuple::from_forms(
            &[Matrix::<Rational>::identity(2), Matrix::identity(2)],
            Mode::SelfAdjoint,
        )
        .unwrap();
        assert!(matches!(tuples_equivalent(&t1, &t2, 3), Err(Error::ShapeMismatch(_))));
    }
}
