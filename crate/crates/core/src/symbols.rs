//! Symbols σ: SᵏT* → Hom(E, Eᵗ) stored by their values on the monomial
//! basis, together with the GL(E) and GL(T) actions.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, Rational};
use crate::procesi::{is_nondegenerate_form, Mode};

/// Exponent vector of a degree-k monomial in n variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(pub Vec<usize>);

impl MultiIndex {
    pub fn degree(&self) -> usize {
        self.0.iter().sum()
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Which twisted dual the symbol maps into.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DualKind {
    /// Eᵗ = Hom(E, field)
    Star,
    /// Eᵗ = Hom(E, ΛⁿT*); GL(T) picks up a det⁻¹ twist.
    Flat,
}

impl DualKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DualKind::Star => "star",
            DualKind::Flat => "flat",
        }
    }
}

impl std::str::FromStr for DualKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "star" => Ok(DualKind::Star),
            "flat" => Ok(DualKind::Flat),
            other => Err(Error::parse("dual", format!("unknown dual kind {other:?}"))),
        }
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// N = C(n+k−1, k), the dimension of SᵏT*.
pub fn num_monomials(n: usize, k: usize) -> usize {
    binomial(n + k - 1, k)
}

/// All degree-k exponent vectors in n variables, graded-lex order
/// (lexicographically decreasing exponents: x₁ᵏ first, xₙᵏ last).
pub fn monomial_basis(n: usize, k: usize) -> Vec<MultiIndex> {
    fn fill(prefix: &mut Vec<usize>, remaining: usize, slots: usize, out: &mut Vec<MultiIndex>) {
        if slots == 1 {
            prefix.push(remaining);
            out.push(MultiIndex(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=remaining).rev() {
            prefix.push(e);
            fill(prefix, remaining - e, slots - 1, out);
            prefix.pop();
        }
    }
    let mut out = Vec::with_capacity(num_monomials(n.max(1), k));
    if n == 0 {
        return out;
    }
    fill(&mut Vec::with_capacity(n), k, n, &mut out);
    out
}

/// A k-form q ∈ SᵏT*, as coefficients on [`monomial_basis`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KForm {
    pub coeffs: Vec<Rational>,
}

impl KForm {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        Self { coeffs }
    }

    pub fn unit(len: usize, index: usize) -> Self {
        Self::new(
            (0..len)
                .map(|i| if i == index { Rational::from_i64(1) } else { Rational::from_i64(0) })
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }
}

/// The symbol at a fixed point: one m×m coefficient matrix per monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolTensor {
    n: usize,
    k: usize,
    m: usize,
    dual: DualKind,
    values: Vec<Matrix<Rational>>,
}

impl SymbolTensor {
    pub fn new(n: usize, k: usize, m: usize, dual: DualKind, values: Vec<Matrix<Rational>>) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(Error::InvariantViolation("n and k must be positive".into()));
        }
        let expected = num_monomials(n, k);
        if values.len() != expected {
            return Err(Error::InvariantViolation(format!(
                "expected {expected} coefficient matrices, got {}",
                values.len()
            )));
        }
        if let Some(bad) = values.iter().position(|v| v.rows() != m || v.cols() != m) {
            return Err(Error::InvariantViolation(format!("coefficient {bad} is not {m}x{m}")));
        }
        Ok(Self { n, k, m, dual, values })
    }

    pub fn zero(n: usize, k: usize, m: usize, dual: DualKind) -> Self {
        let values = vec![Matrix::zeros(m, m); num_monomials(n, k)];
        Self { n, k, m, dual, values }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dual(&self) -> DualKind {
        self.dual
    }

    pub fn num_monomials(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Matrix<Rational>] {
        &self.values
    }

    pub fn value(&self, alpha: &MultiIndex) -> Option<&Matrix<Rational>> {
        monomial_basis(self.n, self.k)
            .iter()
            .position(|a| a == alpha)
            .map(|i| &self.values[i])
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        (self.n, self.k, self.m, self.dual) == (other.n, other.k, other.m, other.dual)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            values: self.values.iter().map(|v| v.scale(c)).collect(),
            ..self.clone()
        }
    }

    pub fn map_values(&self, f: impl Fn(&Matrix<Rational>) -> Matrix<Rational>) -> Self {
        Self {
            values: self.values.iter().map(f).collect(),
            ..self.clone()
        }
    }
}

/// σ_q = Σ_α q[α] · values[α].
pub fn evaluate(sigma: &SymbolTensor, q: &KForm) -> Result<Matrix<Rational>> {
    if q.coeffs.len() != sigma.values.len() {
        return Err(Error::DimensionMismatch(format!(
            "k-form has {} coefficients, symbol has {} monomials",
            q.coeffs.len(),
            sigma.values.len()
        )));
    }
    let mut acc = Matrix::zeros(sigma.m, sigma.m);
    for (c, v) in q.coeffs.iter().zip(&sigma.values) {
        if !num_traits::Zero::is_zero(c) {
            acc = &acc + &v.scale(c);
        }
    }
    Ok(acc)
}

/// A ∘ σ: every coefficient b becomes A⁻ᵗ b A⁻¹.
pub fn act_gl_e(a: &Matrix<Rational>, sigma: &SymbolTensor) -> Result<SymbolTensor> {
    if a.rows() != sigma.m || a.cols() != sigma.m {
        return Err(Error::DimensionMismatch(format!("GL(E) element must be {0}x{0}", sigma.m)));
    }
    let inv = a.inverse()?;
    let inv_t = inv.transpose();
    Ok(sigma.map_values(|b| &(&inv_t * b) * &inv))
}

/// Matrix P of the substitution p(x) ↦ p(Mᵗx) on degree-k polynomials in
/// the monomial basis, i.e. xᵢ ↦ Σⱼ M[j][i]·xⱼ. Satisfies P(M₁M₂) = P(M₁)P(M₂).
pub fn sym_power_matrix<T: Field>(m: &Matrix<T>, k: usize) -> Result<Matrix<T>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("substitution matrix must be square".into()));
    }
    let n = m.rows();
    let basis = monomial_basis(n, k);
    let position: BTreeMap<&MultiIndex, usize> = basis.iter().enumerate().map(|(i, a)| (a, i)).collect();
    let mut p = Matrix::zeros(basis.len(), basis.len());
    for (col, beta) in basis.iter().enumerate() {
        // expand Π_i (Σ_j M[j][i] x_j)^{β_i}
        let mut poly: BTreeMap<Vec<usize>, T> = BTreeMap::new();
        poly.insert(vec![0; n], T::one());
        for (i, &e) in beta.0.iter().enumerate() {
            for _ in 0..e {
                let mut next: BTreeMap<Vec<usize>, T> = BTreeMap::new();
                for (mono, c) in &poly {
                    for j in 0..n {
                        let w = &m[(j, i)];
                        if w.is_zero() {
                            continue;
                        }
                        let mut mono = mono.clone();
                        mono[j] += 1;
                        let entry = next.entry(mono).or_insert_with(T::zero);
                        *entry = entry.clone() + c.clone() * w.clone();
                    }
                }
                poly = next;
            }
        }
        for (mono, c) in poly {
            let row = position[&MultiIndex(mono)];
            p[(row, col)] = c;
        }
    }
    Ok(p)
}

/// q ↦ q ∘ M, the degree-k form q(Mx).
pub fn substitute(m: &Matrix<Rational>, k: usize, q: &KForm) -> Result<KForm> {
    let p = sym_power_matrix(&m.transpose(), k)?;
    if q.coeffs.len() != p.cols() {
        return Err(Error::DimensionMismatch(format!(
            "k-form has {} coefficients, expected {}",
            q.coeffs.len(),
            p.cols()
        )));
    }
    let col = Matrix::from_vec(q.coeffs.len(), 1, q.coeffs.clone())?;
    Ok(KForm::new((&p * &col).entries().to_vec()))
}

/// GL(T) action by pullback: (M·σ)(q) = det(M)^{-[flat]} σ(q ∘ M).
pub fn act_gl_t(m: &Matrix<Rational>, sigma: &SymbolTensor) -> Result<SymbolTensor> {
    if m.rows() != sigma.n || m.cols() != sigma.n {
        return Err(Error::DimensionMismatch(format!("GL(T) element must be {0}x{0}", sigma.n)));
    }
    let det = m.determinant()?;
    if num_traits::Zero::is_zero(&det) {
        return Err(Error::Singular);
    }
    let p = sym_power_matrix(&m.transpose(), sigma.k)?;
    let twist = match sigma.dual {
        DualKind::Star => Rational::from_i64(1),
        DualKind::Flat => Rational::from_i64(1) / det,
    };
    let size = sigma.values.len();
    let values = (0..size)
        .map(|alpha| {
            let mut acc = Matrix::zeros(sigma.m, sigma.m);
            for beta in 0..size {
                let c = &p[(beta, alpha)];
                if !num_traits::Zero::is_zero(c) {
                    acc = &acc + &sigma.values[beta].scale(c);
                }
            }
            acc.scale(&twist)
        })
        .collect();
    Ok(SymbolTensor { values, ..sigma.clone() })
}

pub(crate) const DEFAULT_ENTRY_BOUND: i64 = 5;
const GENERATION_ATTEMPTS: usize = 100;

pub(crate) fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, bound: i64) -> Matrix<Rational> {
    Matrix::from_fn(rows, cols, |_, _| Rational::from_i64(rng.gen_range(-bound..=bound)))
}

pub(crate) fn random_shaped(rng: &mut impl Rng, m: usize, mode: Mode, bound: i64) -> Matrix<Rational> {
    let raw = random_matrix(rng, m, m, bound);
    match mode {
        Mode::General => raw,
        Mode::SelfAdjoint => Matrix::from_fn(m, m, |i, j| raw[(i.min(j), i.max(j))].clone()),
        Mode::Skew => Matrix::from_fn(m, m, |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Less => raw[(i, j)].clone(),
            std::cmp::Ordering::Greater => -raw[(j, i)].clone(),
            std::cmp::Ordering::Equal => Rational::from_i64(0),
        }),
    }
}

/// Random invertible integer matrix, entries in [−bound, bound].
pub fn random_invertible(seed: u64, n: usize, bound: i64) -> Matrix<Rational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let a = random_matrix(&mut rng, n, n, bound);
        if a.is_invertible() {
            return a;
        }
    }
}

/// Deterministic random symbol with small integer coefficients.
///
/// General mode retries until every monomial's form is non-degenerate;
/// the other modes retry until the first monomial's form is invertible.
pub fn random_symbol(n: usize, k: usize, m: usize, dual: DualKind, mode: Mode, seed: u64) -> Result<SymbolTensor> {
    mode.check_dimension(m)?;
    let size = num_monomials(n, k);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..GENERATION_ATTEMPTS {
        let values: Vec<_> = (0..size)
            .map(|_| random_shaped(&mut rng, m, mode, DEFAULT_ENTRY_BOUND))
            .collect();
        let admissible = match mode {
            Mode::General => values.iter().all(is_nondegenerate_form),
            Mode::SelfAdjoint | Mode::Skew => values[0].is_invertible(),
        };
        if admissible {
            return SymbolTensor::new(n, k, m, dual, values);
        }
    }
    Err(Error::GenerationFailed(GENERATION_ATTEMPTS))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, rat};

    fn mi(e: &[usize]) -> MultiIndex {
        MultiIndex(e.to_vec())
    }

    #[test]
    fn monomial_basis_examples() {
        assert_eq!(monomial_basis(2, 2), vec![mi(&[2, 0]), mi(&[1, 1]), mi(&[0, 2])]);
        assert_eq!(monomial_basis(1, 5), vec![mi(&[5])]);
        assert_eq!(monomial_basis(3, 2).len(), 6);
        assert_eq!(
            monomial_basis(3, 2),
            vec![mi(&[2, 0, 0]), mi(&[1, 1, 0]), mi(&[1, 0, 1]), mi(&[0, 2, 0]), mi(&[0, 1, 1]), mi(&[0, 0, 2])]
        );
        for (n, k) in [(2, 3), (3, 3), (4, 2)] {
            assert_eq!(monomial_basis(n, k).len(), num_monomials(n, k));
        }
    }

    fn example_symbol() -> SymbolTensor {
        let i = Matrix::<Rational>::identity(2);
        SymbolTensor::new(2, 2, 2, DualKind::Star, vec![i.clone(), i.scale(&int(2)), Matrix::zeros(2, 2)]).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let s = example_symbol();
        assert_eq!(evaluate(&s, &KForm::unit(3, 1)).unwrap(), s.values()[1]);
        assert_eq!(evaluate(&s, &KForm::new(vec![int(0); 3])).unwrap(), Matrix::zeros(2, 2));
        let q = KForm::new(vec![int(1), int(1), int(0)]);
        assert_eq!(evaluate(&s, &q).unwrap(), Matrix::identity(2).scale(&int(3)));
        assert!(matches!(evaluate(&s, &KForm::new(vec![int(1)])), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn gl_e_examples() {
        let s = example_symbol();
        assert_eq!(act_gl_e(&Matrix::identity(2), &s).unwrap(), s);
        assert_eq!(act_gl_e(&-Matrix::identity(2), &s).unwrap(), s);
        let a = Matrix::diagonal(&[int(1), int(2)]);
        let got = act_gl_e(&a, &s).unwrap();
        assert_eq!(got.values()[0], Matrix::diagonal(&[int(1), rat(1, 4)]));
        let singular = Matrix::zeros(2, 2);
        assert_eq!(act_gl_e(&singular, &s), Err(Error::Singular));
    }

    #[test]
    fn gl_t_examples() {
        let s = random_symbol(2, 2, 2, DualKind::Star, Mode::General, 3).unwrap();
        assert_eq!(act_gl_t(&Matrix::identity(2), &s).unwrap(), s);
        let lambda = int(3);
        let scaled = act_gl_t(&Matrix::scalar(2, lambda.clone()), &s).unwrap();
        assert_eq!(scaled, s.scale(&int(9)));
        let swap = Matrix::from_rows(vec![vec![int(0), int(1)], vec![int(1), int(0)]]).unwrap();
        let swapped = act_gl_t(&swap, &s).unwrap();
        assert_eq!(swapped.values()[0], s.values()[2]);
        assert_eq!(swapped.values()[1], s.values()[1]);
        assert_eq!(swapped.values()[2], s.values()[0]);
    }

    #[test]
    fn gl_t_flat_twist() {
        let s = random_symbol(2, 2, 2, DualKind::Flat, Mode::General, 3).unwrap();
        // λI acts by λᵏ·λ⁻ⁿ = 1 when k = n
        let scaled = act_gl_t(&Matrix::scalar(2, int(5)), &s).unwrap();
        assert_eq!(scaled, s);
    }

    #[test]
    fn sym_power_examples() {
        let p = sym_power_matrix(&Matrix::<Rational>::identity(2), 2).unwrap();
        assert_eq!(p, Matrix::identity(3));
        let d = Matrix::diagonal(&[int(2), int(3)]);
        assert_eq!(
            sym_power_matrix(&d, 2).unwrap(),
            Matrix::diagonal(&[int(4), int(6), int(9)])
        );
        let a = random_invertible(11, 2, 3);
        let pa = sym_power_matrix(&a, 3).unwrap();
        let pinv = sym_power_matrix(&a.inverse().unwrap(), 3).unwrap();
        assert_eq!(&pa * &pinv, Matrix::identity(4));
    }

    #[test]
    fn random_symbol_modes() {
        let a = random_symbol(2, 2, 3, DualKind::Star, Mode::SelfAdjoint, 42).unwrap();
        let b = random_symbol(2, 2, 3, DualKind::Star, Mode::SelfAdjoint, 42).unwrap();
        assert_eq!(a, b);
        assert!(a.values().iter().all(Matrix::is_symmetric));
        let s = random_symbol(2, 2, 4, DualKind::Star, Mode::Skew, 1).unwrap();
        assert!(s.values().iter().all(Matrix::is_skew));
        assert!(random_symbol(2, 2, 3, DualKind::Star, Mode::Skew, 1).is_err());
    }
}
