//! Trace words and their canonical representatives.
//!
//! Two words give the same trace when one is a cyclic rotation of the
//! other, or a rotation of its reversal with every letter's adjoint flag
//! flipped (tr(A_b) = tr(A) and (XY)_b = Y_b X_b). Each class is
//! represented by its lexicographically least member.

use std::cmp::Ordering;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub op: usize,
    pub adjoint: bool,
}

impl Letter {
    pub fn plain(op: usize) -> Self {
        Self { op, adjoint: false }
    }

    pub fn adj(op: usize) -> Self {
        Self { op, adjoint: true }
    }

    fn flipped(self) -> Self {
        Self {
            op: self.op,
            adjoint: !self.adjoint,
        }
    }
}

/// Non-empty sequence of letters; ordered by length, then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        assert!(!letters.is_empty(), "trace words are non-empty");
        Self(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Reversed word with every adjoint flag flipped.
    pub fn reversed_adjoint(&self) -> Self {
        Self(self.0.iter().rev().map(|l| l.flipped()).collect())
    }

    pub fn rotated(&self, by: usize) -> Self {
        let mut v = self.0.clone();
        let len = v.len();
        v.rotate_left(by % len);
        Self(v)
    }

    pub fn canonical(&self) -> Self {
        let rev = self.reversed_adjoint();
        let mut best = self.0.clone();
        for source in [&self.0, &rev.0] {
            for r in 0..source.len() {
                let candidate = source[r..].iter().chain(&source[..r]);
                if candidate.clone().lt(best.iter()) {
                    best = candidate.copied().collect();
                }
            }
        }
        Self(best)
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical() == *self
    }

    /// Label rendering, e.g. `A2·A3*` with `*` marking an adjoint letter.
    pub fn render(&self, labels: &[usize]) -> String {
        self.0
            .iter()
            .map(|l| {
                let label = labels.get(l.op).copied().unwrap_or(l.op);
                format!("A{label}{}", if l.adjoint { "*" } else { "" })
            })
            .collect::<Vec<_>>()
            .join("·")
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<usize> = (0..=self.0.iter().map(|l| l.op).max().unwrap_or(0)).collect();
        f.write_str(&self.render(&labels))
    }
}

/// Canonical words over `num_ops` operators (each plain or adjoint) of
/// length 1..=cap, in (length, lexicographic) order.
pub fn enumerate_words(num_ops: usize, cap: usize) -> Vec<Word> {
    let alphabet: Vec<Letter> = (0..num_ops)
        .flat_map(|op| [Letter::plain(op), Letter::adj(op)])
        .collect();
    let mut out = Vec::new();
    if alphabet.is_empty() {
        return out;
    }
    for len in 1..=cap {
        let mut digits = vec![0usize; len];
        'odometer: loop {
            let word = Word(digits.iter().map(|&d| alphabet[d]).collect());
            if word.is_canonical() {
                out.push(word);
            }
            let mut pos = len;
            loop {
                if pos == 0 {
                    break 'odometer;
                }
                pos -= 1;
                digits[pos] += 1;
                if digits[pos] < alphabet.len() {
                    break;
                }
                digits[pos] = 0;
            }
        }
    }
    out
}

/// Procesi bound 2^m − 1 on the word length.
pub fn procesi_cap(m: usize) -> usize {
    (1usize << m.min(usize::BITS as usize - 1)) - 1
}
