//! Independent checks: condition (*), stabilizer dimensions, closed-form
//! orbit codimensions, finite-difference rank of the fingerprint map, and
//! witness verification.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{charpoly_is_squarefree, pfaffian_pencil, Field, Matrix, Rational};
use crate::procesi::{enumerate_words, select_special_tuple, trace_values, Gate, Mode, OperatorTuple};
use crate::procesi::fingerprint;
use crate::symbols::{act_gl_e, act_gl_t, evaluate, num_monomials, SymbolTensor};

/// Both operators have squarefree characteristic polynomials and they do
/// not commute.
pub fn condition_star<T: Field>(ai: &Matrix<T>, aj: &Matrix<T>) -> bool {
    ai.rows() == aj.rows()
        && charpoly_is_squarefree(ai)
        && charpoly_is_squarefree(aj)
        && !ai.commutator(aj).is_zero()
}

/// Symplectic variant for ω-self-adjoint operators, whose characteristic
/// polynomial is always a square: distinct eigenvalues means the Pfaffian
/// polynomial Pf(λω − ωA) is squarefree.
pub fn condition_star_symplectic<T: Field>(omega: &Matrix<T>, ai: &Matrix<T>, aj: &Matrix<T>) -> bool {
    pfaffian_squarefree(omega, ai) && pfaffian_squarefree(omega, aj) && !ai.commutator(aj).is_zero()
}

fn pfaffian_squarefree<T: Field>(omega: &Matrix<T>, a: &Matrix<T>) -> bool {
    let alpha = omega * a;
    // Pf(λω − α) = Pf((−α) − λ(−ω))
    match pfaffian_pencil(&-alpha, &-omega.clone()) {
        Ok(p) => p.is_squarefree() && p.degree() == Some(omega.rows() / 2),
        Err(_) => false,
    }
}

/// First pair (i, j), i < j, of tuple operators meeting condition (*),
/// skipping the S-operator slot of general mode.
pub fn condition_star_pair<T: Field>(tuple: &OperatorTuple<T>) -> Option<(usize, usize)> {
    let eligible: Vec<usize> = (0..tuple.ops().len())
        .filter(|&i| tuple.labels()[i] >= 2)
        .collect();
    let ops = tuple.ops();
    for (x, &i) in eligible.iter().enumerate() {
        for &j in &eligible[x + 1..] {
            let ok = match tuple.mode() {
                Mode::Skew => condition_star_symplectic(tuple.form(), &ops[i], &ops[j]),
                Mode::General | Mode::SelfAdjoint => condition_star(&ops[i], &ops[j]),
            };
            if ok {
                return Some((i, j));
            }
        }
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormGroup {
    Orthogonal,
    Symplectic,
}

impl FormGroup {
    pub fn for_mode(mode: Mode) -> Self {
        match mode {
            Mode::Skew => FormGroup::Symplectic,
            Mode::General | Mode::SelfAdjoint => FormGroup::Orthogonal,
        }
    }
}

/// dim { C : Cᵗ F + F C = 0, [C, Aᵢ] = 0 for all i }, the Lie algebra of
/// the stabilizer of the operators inside the group preserving F.
pub fn stabilizer_dimension(form: &Matrix<Rational>, ops: &[Matrix<Rational>], group: FormGroup) -> Result<usize> {
    let m = form.rows();
    if !form.is_square() || ops.iter().any(|a| a.rows() != m || a.cols() != m) {
        return Err(Error::ShapeMismatch("form and operators must share a square shape".into()));
    }
    match group {
        FormGroup::Orthogonal if !form.is_symmetric() => return Err(Error::NotSymmetric),
        FormGroup::Symplectic if !form.is_skew() => return Err(Error::NotSkew),
        _ => {}
    }
    if !form.is_invertible() {
        return Err(Error::Singular);
    }
    let mut rows = form_preserving_rows(form);
    for a in ops {
        rows.extend(commutator_rows(a));
    }
    let system = Matrix::from_rows(rows)?;
    Ok(system.nullity())
}

/// dim { C : [C, Aᵢ] = 0 for all i } inside gl(m).
pub fn commutant_dimension(m: usize, ops: &[Matrix<Rational>]) -> Result<usize> {
    if ops.iter().any(|a| a.rows() != m || a.cols() != m) {
        return Err(Error::ShapeMismatch("operators must be m×m".into()));
    }
    if ops.is_empty() {
        return Ok(m * m);
    }
    let rows: Vec<Vec<Rational>> = ops.iter().flat_map(commutator_rows).collect();
    Ok(Matrix::from_rows(rows)?.nullity())
}

// unknown C[l][s] sits at column l·m + s

fn form_preserving_rows(f: &Matrix<Rational>) -> Vec<Vec<Rational>> {
    let m = f.rows();
    let mut rows = Vec::with_capacity(m * m);
    for r in 0..m {
        for s in 0..m {
            // (CᵗF)[r][s] + (FC)[r][s] = Σ_l C[l][r] F[l][s] + F[r][l] C[l][s]
            let mut row = vec![Rational::from_i64(0); m * m];
            for l in 0..m {
                row[l * m + r] = row[l * m + r].clone() + f[(l, s)].clone();
                row[l * m + s] = row[l * m + s].clone() + f[(r, l)].clone();
            }
            rows.push(row);
        }
    }
    rows
}

fn commutator_rows(a: &Matrix<Rational>) -> Vec<Vec<Rational>> {
    let m = a.rows();
    let mut rows = Vec::with_capacity(m * m);
    for r in 0..m {
        for s in 0..m {
            // (CA − AC)[r][s] = Σ_l C[r][l] A[l][s] − A[r][l] C[l][s]
            let mut row = vec![Rational::from_i64(0); m * m];
            for l in 0..m {
                row[r * m + l] = row[r * m + l].clone() + a[(l, s)].clone();
                row[l * m + s] = row[l * m + s].clone() - a[(r, l)].clone();
            }
            rows.push(row);
        }
    }
    rows
}

/// Closed-form codimension of a regular orbit:
/// general (N−1)m², self-adjoint N·m(m+1)/2 − m², skew N·m(m−1)/2 − m².
pub fn expected_codimension(n: usize, k: usize, m: usize, mode: Mode) -> Result<i64> {
    mode.check_dimension(m)?;
    let big_n = num_monomials(n, k) as i64;
    let m = m as i64;
    Ok(match mode {
        Mode::General => (big_n - 1) * m * m,
        Mode::SelfAdjoint => big_n * m * (m + 1) / 2 - m * m,
        Mode::Skew => big_n * m * (m - 1) / 2 - m * m,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodimReport {
    pub mode: Mode,
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub num_forms: usize,
    pub expected_codim: i64,
    pub observed_rank: Option<usize>,
    pub cap_used: usize,
}

pub const DEFAULT_STEP: f64 = 1e-6;
pub const DEFAULT_TOL: f64 = 1e-6;
const CAP_RETRIES: usize = 2;

/// Numerical rank of the central-difference Jacobian of the fingerprint
/// map with respect to the independent entries of the special tuple's
/// forms. Retries with cap+1 and cap+2 while the rank is below the
/// expected codimension.
pub fn jacobian_rank(sigma: &SymbolTensor, mode: Mode, cap: usize, step: f64, tol: f64) -> Result<CodimReport> {
    let (special, tuple) = select_special_tuple(sigma, mode)?;
    let gate = Gate::of(&tuple, &fingerprint(&tuple, cap.max(3))?);
    if !gate.passed() {
        return Err(Error::DegenerateSymbol(format!(
            "non-degeneracy gate failed (condition (*) pair: {:?}, length ≥ 3 invariant: {})",
            gate.star_pair, gate.high_degree
        )));
    }
    let forms = float_forms(sigma, &special.qs)?;
    let expected = expected_codimension(sigma.n(), sigma.k(), sigma.m(), mode)?;
    let mut report = CodimReport {
        mode,
        n: sigma.n(),
        k: sigma.k(),
        m: sigma.m(),
        num_forms: forms.len(),
        expected_codim: expected,
        observed_rank: None,
        cap_used: cap,
    };
    for extra in 0..=CAP_RETRIES {
        let cap_now = cap + extra;
        let rank = finite_difference_rank(&forms, mode, cap_now, step, tol)?;
        report.observed_rank = Some(rank);
        report.cap_used = cap_now;
        if rank as i64 >= expected {
            break;
        }
    }
    Ok(report)
}

fn float_forms(sigma: &SymbolTensor, qs: &[crate::symbols::KForm]) -> Result<Vec<Matrix<f64>>> {
    qs.iter()
        .map(|q| evaluate(sigma, q).map(|f| f.map(Field::to_f64)))
        .collect()
}

/// Jacobian of the fingerprint map at a symbol's special tuple.
#[derive(Clone, Debug)]
pub struct FingerprintJacobian {
    /// Rows are fingerprint entries, columns independent form coordinates.
    pub matrix: DMatrix<f64>,
    /// The evaluation point in the same coordinates.
    pub point: Vec<f64>,
}

impl FingerprintJacobian {
    pub fn rank(&self, tol: f64) -> usize {
        numerical_rank(&self.matrix, tol)
    }

    /// Directional derivative along `direction` (column coordinates).
    pub fn directional(&self, direction: &[f64]) -> Vec<f64> {
        let v = nalgebra::DVector::from_column_slice(direction);
        (&self.matrix * v).iter().copied().collect()
    }
}

pub fn jacobian_at(sigma: &SymbolTensor, mode: Mode, cap: usize, step: f64) -> Result<FingerprintJacobian> {
    let (special, _) = select_special_tuple(sigma, mode)?;
    let forms = float_forms(sigma, &special.qs)?;
    let point = directions(forms.len(), sigma.m(), mode)
        .into_iter()
        .map(|(f, i, j)| forms[f][(i, j)])
        .collect();
    Ok(FingerprintJacobian {
        matrix: fingerprint_jacobian(&forms, mode, cap, step)?,
        point,
    })
}

/// Perturbation directions: one per independent entry of each form.
fn directions(num_forms: usize, m: usize, mode: Mode) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for f in 0..num_forms {
        for i in 0..m {
            for j in 0..m {
                let keep = match mode {
                    Mode::General => true,
                    Mode::SelfAdjoint => i <= j,
                    Mode::Skew => i < j,
                };
                if keep {
                    out.push((f, i, j));
                }
            }
        }
    }
    out
}

fn perturbed(forms: &[Matrix<f64>], mode: Mode, (f, i, j): (usize, usize, usize), h: f64) -> Vec<Matrix<f64>> {
    let mut out = forms.to_vec();
    out[f][(i, j)] += h;
    match mode {
        Mode::SelfAdjoint if i != j => out[f][(j, i)] += h,
        Mode::Skew => out[f][(j, i)] -= h,
        _ => {}
    }
    out
}

pub(crate) fn fingerprint_map(forms: &[Matrix<f64>], mode: Mode, words: &[crate::procesi::Word]) -> Result<Vec<f64>> {
    let tuple = OperatorTuple::from_forms_unchecked(forms, mode)?;
    trace_values(&tuple, words)
}

/// Central-difference Jacobian, rows = fingerprint entries, columns =
/// perturbation directions.
pub(crate) fn fingerprint_jacobian(forms: &[Matrix<f64>], mode: Mode, cap: usize, step: f64) -> Result<DMatrix<f64>> {
    let m = forms[0].rows();
    let num_ops = match mode {
        Mode::General => forms.len(),
        Mode::SelfAdjoint | Mode::Skew => forms.len() - 1,
    };
    let words = enumerate_words(num_ops, cap);
    let dirs = directions(forms.len(), m, mode);
    let columns = dirs
        .par_iter()
        .map(|&d| {
            let plus = fingerprint_map(&perturbed(forms, mode, d, step), mode, &words)?;
            let minus = fingerprint_map(&perturbed(forms, mode, d, -step), mode, &words)?;
            Ok(plus.iter().zip(&minus).map(|(p, q)| (p - q) / (2.0 * step)).collect::<Vec<f64>>())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DMatrix::from_fn(words.len(), dirs.len(), |r, c| columns[c][r]))
}

pub(crate) fn numerical_rank(jac: &DMatrix<f64>, tol: f64) -> usize {
    if jac.nrows() == 0 || jac.ncols() == 0 {
        return 0;
    }
    let sv = jac.singular_values();
    let largest = sv.iter().cloned().fold(0.0, f64::max);
    if largest == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * largest).count()
}

fn finite_difference_rank(forms: &[Matrix<f64>], mode: Mode, cap: usize, step: f64, tol: f64) -> Result<usize> {
    Ok(numerical_rank(&fingerprint_jacobian(forms, mode, cap, step)?, tol))
}

/// True iff act_gl_e(A2, act_gl_t(A1, s1)) = s2 exactly.
pub fn check_witness(s1: &SymbolTensor, s2: &SymbolTensor, a1: &Matrix<Rational>, a2: &Matrix<Rational>) -> Result<bool> {
    if !s1.same_shape(s2) {
        return Err(Error::ShapeMismatch("symbols differ in shape".into()));
    }
    if a1.rows() != s1.n() || a1.cols() != s1.n() || a2.rows() != s1.m() || a2.cols() != s1.m() {
        return Err(Error::ShapeMismatch(format!(
            "witness must be ({0}x{0}, {1}x{1})",
            s1.n(),
            s1.m()
        )));
    }
    Ok(act_gl_e(a2, &act_gl_t(a1, s1)?)? == *s2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;

    fn m(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect())
            .unwrap()
    }

    #[test]
    fn condition_star_examples() {
        let d = Matrix::diagonal(&[int(1), int(2)]);
        let swap = m(&[&[0, 1], &[1, 0]]);
        assert!(condition_star(&d, &swap));
        assert!(!condition_star(&d, &d));
        assert!(!condition_star(&Matrix::identity(2), &swap));
    }

    #[test]
    fn stabilizer_examples() {
        let i = Matrix::<Rational>::identity(2);
        assert_eq!(stabilizer_dimension(&i, &[], FormGroup::Orthogonal).unwrap(), 1);
        let d = Matrix::diagonal(&[int(1), int(2)]);
        let swap = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(stabilizer_dimension(&i, &[d.clone(), swap], FormGroup::Orthogonal).unwrap(), 0);
        let d2 = Matrix::diagonal(&[int(3), int(4)]);
        assert_eq!(stabilizer_dimension(&i, &[d.clone(), d2.clone()], FormGroup::Orthogonal).unwrap(), 0);
        assert_eq!(commutant_dimension(2, &[d, d2]).unwrap(), 2);
    }

    #[test]
    fn stabilizer_symplectic_empty_is_sp() {
        let w = crate::linalg::standard_symplectic::<Rational>(4);
        // dim sp(4) = 4·5/2
        assert_eq!(stabilizer_dimension(&w, &[], FormGroup::Symplectic).unwrap(), 10);
        assert_eq!(
            stabilizer_dimension(&w, &[], FormGroup::Orthogonal),
            Err(Error::NotSymmetric)
        );
    }

    #[test]
    fn codimension_examples() {
        assert_eq!(expected_codimension(2, 2, 2, Mode::General).unwrap(), 8);
        assert_eq!(expected_codimension(2, 2, 2, Mode::SelfAdjoint).unwrap(), 5);
        assert_eq!(expected_codimension(2, 2, 4, Mode::Skew).unwrap(), 2);
    }
}
