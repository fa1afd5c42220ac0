//! Special tuples (the monomial basis of SᵏT*, possibly with a substitute
//! first form) and symbol-level equivalence verdicts.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::fingerprint::{fingerprint, Fingerprint};
use super::tuple::{build_tuple, OperatorTuple};
use super::Mode;
use crate::error::{Error, Result};
use crate::linalg::{format_rational, Field, Rational};
use crate::symbols::{monomial_basis, KForm, SymbolTensor};
use crate::verify::condition_star_pair;

const COMBINATION_ATTEMPTS: usize = 20;
const COMBINATION_SEED: u64 = 0x5eed_0001;
const COMBINATION_BOUND: i64 = 2;

/// How the first form q₁ of the special tuple was chosen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Q1Choice {
    /// The monomial at this basis position was moved to the front.
    Monomial { position: usize },
    /// The first monomial was replaced by an integer combination of the basis.
    Combination { attempt: usize, coeffs: Vec<Rational> },
}

impl fmt::Display for Q1Choice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Q1Choice::Monomial { position } => write!(f, "monomial:{position}"),
            Q1Choice::Combination { attempt, coeffs } => {
                let c: Vec<String> = coeffs.iter().map(format_rational).collect();
                write!(f, "combination:{attempt}:[{}]", c.join(","))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialTuple {
    pub qs: Vec<KForm>,
    pub choice: Q1Choice,
}

/// Candidate special tuples in the fixed trial order: each monomial as q₁
/// (the rest keep their order), then seeded integer combinations.
fn candidates(n: usize, k: usize) -> impl Iterator<Item = SpecialTuple> {
    let size = monomial_basis(n, k).len();
    let monomials = (0..size).map(move |position| {
        let mut qs = vec![KForm::unit(size, position)];
        qs.extend((0..size).filter(|&j| j != position).map(|j| KForm::unit(size, j)));
        SpecialTuple {
            qs,
            choice: Q1Choice::Monomial { position },
        }
    });
    let mut rng = ChaCha8Rng::seed_from_u64(COMBINATION_SEED);
    let combos: Vec<SpecialTuple> = (0..COMBINATION_ATTEMPTS)
        .map(|attempt| {
            let coeffs: Vec<Rational> = loop {
                let c: Vec<Rational> = (0..size)
                    .map(|_| Rational::from_i64(rng.gen_range(-COMBINATION_BOUND..=COMBINATION_BOUND)))
                    .collect();
                if c.iter().any(|x| !num_traits::Zero::is_zero(x)) {
                    break c;
                }
            };
            let mut qs = vec![KForm::new(coeffs.clone())];
            qs.extend((1..size).map(|j| KForm::unit(size, j)));
            SpecialTuple {
                qs,
                choice: Q1Choice::Combination { attempt, coeffs },
            }
        })
        .collect();
    monomials.chain(combos)
}

/// First admissible special tuple for `sigma` in `mode`.
pub fn select_special_tuple(sigma: &SymbolTensor, mode: Mode) -> Result<(SpecialTuple, OperatorTuple<Rational>)> {
    select_common(&[sigma], mode).map(|(s, mut t)| (s, t.remove(0)))
}

fn select_common(symbols: &[&SymbolTensor], mode: Mode) -> Result<(SpecialTuple, Vec<OperatorTuple<Rational>>)> {
    let first = symbols[0];
    mode.check_dimension(first.m())?;
    let mut last_err = None;
    for cand in candidates(first.n(), first.k()) {
        let built: Result<Vec<_>> = symbols.iter().map(|s| build_tuple(s, &cand.qs, mode)).collect();
        match built {
            Ok(tuples) => return Ok((cand, tuples)),
            Err(e @ Error::ModeMismatch(_)) => return Err(e),
            Err(e) => last_err = Some(e),
        }
    }
    Err(Error::DegenerateSymbol(format!(
        "no admissible first form among monomials and {COMBINATION_ATTEMPTS} combinations (last failure: {})",
        last_err.map_or_else(|| "none".to_string(), |e| e.to_string())
    )))
}

/// Fingerprint of the tuple built from the explicit forms `qs`.
pub fn fingerprint_for_forms(sigma: &SymbolTensor, qs: &[KForm], mode: Mode, cap: usize) -> Result<Fingerprint> {
    let tuple = build_tuple(sigma, qs, mode)?;
    let mut f = fingerprint(&tuple, cap)?;
    f.meta.shape = Some((sigma.n(), sigma.k()));
    Ok(f)
}

/// Fingerprint of the special tuple: the invariants of the symbol itself.
pub fn symbol_fingerprint(sigma: &SymbolTensor, mode: Mode, cap: usize) -> Result<Fingerprint> {
    let (special, tuple) = select_special_tuple(sigma, mode)?;
    Ok(decorate(fingerprint(&tuple, cap)?, sigma, &special, &tuple))
}

fn decorate(mut f: Fingerprint, sigma: &SymbolTensor, special: &SpecialTuple, tuple: &OperatorTuple<Rational>) -> Fingerprint {
    f.meta.shape = Some((sigma.n(), sigma.k()));
    f.meta.q1_choice = Some(special.choice.to_string());
    f.meta.num_forms = special.qs.len();
    if condition_star_pair(tuple).is_none() {
        f.meta
            .warnings
            .push("no operator pair satisfies condition (*); separation is unreliable".into());
    }
    f
}

/// Non-degeneracy gate of one symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gate {
    /// Labels (form indices) of the first operator pair meeting condition (*).
    pub star_pair: Option<(usize, usize)>,
    /// Some trace word of length ≥ 3 is nonzero.
    pub high_degree: bool,
}

impl Gate {
    pub fn passed(&self) -> bool {
        self.star_pair.is_some() && self.high_degree
    }

    pub fn of(tuple: &OperatorTuple<Rational>, fp: &Fingerprint) -> Self {
        Self {
            star_pair: condition_star_pair(tuple).map(|(i, j)| (tuple.labels()[i], tuple.labels()[j])),
            high_degree: fp.has_high_degree_invariant(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Equivalent,
    NotEquivalent,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Equivalent => "equivalent",
            Verdict::NotEquivalent => "not_equivalent",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolVerdict {
    pub verdict: Verdict,
    pub cap: usize,
    pub q1_choice: Q1Choice,
    pub gates: [Gate; 2],
    /// Number of fingerprint entries that differ.
    pub differing: usize,
    pub signatures: [Option<(usize, usize)>; 2],
}

/// Compares special-tuple fingerprints built from one common choice of q₁.
///
/// Equal fingerprints give `Equivalent`. Unequal fingerprints give
/// `NotEquivalent` only when both symbols pass the non-degeneracy gate,
/// otherwise `Inconclusive`.
pub fn symbols_equivalent(s1: &SymbolTensor, s2: &SymbolTensor, mode: Mode, cap: usize) -> Result<SymbolVerdict> {
    if !s1.same_shape(s2) {
        return Err(Error::ShapeMismatch(format!(
            "symbols of shape (n={}, k={}, m={}, {}) and (n={}, k={}, m={}, {})",
            s1.n(),
            s1.k(),
            s1.m(),
            s1.dual().as_str(),
            s2.n(),
            s2.k(),
            s2.m(),
            s2.dual().as_str()
        )));
    }
    let (special, tuples) = select_common(&[s1, s2], mode)?;
    let f1 = fingerprint(&tuples[0], cap)?;
    let f2 = fingerprint(&tuples[1], cap)?;
    let gates = [Gate::of(&tuples[0], &f1), Gate::of(&tuples[1], &f2)];
    let differing = f1
        .entries
        .iter()
        .zip(&f2.entries)
        .filter(|((_, a), (_, b))| a != b)
        .count();
    let verdict = if f1.same_invariants(&f2) {
        Verdict::Equivalent
    } else if gates.iter().all(Gate::passed) {
        Verdict::NotEquivalent
    } else {
        Verdict::Inconclusive
    };
    Ok(SymbolVerdict {
        verdict,
        cap,
        q1_choice: special.choice,
        gates,
        differing,
        signatures: [f1.meta.signature, f2.meta.signature],
    })
}
