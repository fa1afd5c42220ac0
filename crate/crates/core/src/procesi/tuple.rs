use super::operators::{b_adjoint, degeneracy_reason, s_operator};
use super::Mode;
use crate::error::{Error, Result};
use crate::linalg::{split_parts, Field, Matrix, Rational};
use crate::symbols::{evaluate, KForm, SymbolTensor};

/// The reference form (g or ω) together with the operators it induces.
///
/// General mode: g = (σ_{q₁})_s, ops = [S^{σ_{q₁}}, g⁻¹σ_{q₂}, …].
/// Self-adjoint mode: g = σ_{q₁}, ops = [g⁻¹σ_{q₂}, …].
/// Skew mode: ω = σ_{q₁}, ops = [ω⁻¹σ_{q₂}, …].
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorTuple<T> {
    mode: Mode,
    form: Matrix<T>,
    ops: Vec<Matrix<T>>,
    adjoints: Vec<Matrix<T>>,
    labels: Vec<usize>,
}

impl<T: Field> OperatorTuple<T> {
    /// Builds the tuple from already evaluated forms σ_{q₁}, …, σ_{q_N},
    /// enforcing the mode's admissibility conditions.
    pub fn from_forms(forms: &[Matrix<T>], mode: Mode) -> Result<Self> {
        let first = forms
            .first()
            .ok_or_else(|| Error::DegenerateSymbol("no forms supplied".into()))?;
        let m = first.rows();
        if forms.iter().any(|f| f.rows() != m || f.cols() != m) {
            return Err(Error::ShapeMismatch("forms must share a square shape".into()));
        }
        match mode {
            Mode::General => {
                for (i, f) in forms.iter().enumerate() {
                    if let Some(reason) = degeneracy_reason(f) {
                        return Err(Error::DegenerateForm {
                            index: i + 1,
                            reason: reason.into(),
                        });
                    }
                }
            }
            Mode::SelfAdjoint | Mode::Skew => {
                if mode == Mode::Skew && m % 2 != 0 {
                    return Err(Error::ModeMismatch(format!("skew mode needs even m, got {m}")));
                }
                for (i, f) in forms.iter().enumerate() {
                    let ok = if mode == Mode::Skew { f.is_skew() } else { f.is_symmetric() };
                    if !ok {
                        return Err(Error::ModeMismatch(format!(
                            "form q{} is not {}",
                            i + 1,
                            if mode == Mode::Skew { "antisymmetric" } else { "symmetric" }
                        )));
                    }
                }
                if !first.is_invertible() {
                    return Err(Error::DegenerateForm {
                        index: 1,
                        reason: "reference form is singular".into(),
                    });
                }
            }
        }
        Self::from_forms_unchecked(forms, mode)
    }

    /// Same construction without the admissibility gates; used for
    /// floating-point probes near an admissible point.
    pub(crate) fn from_forms_unchecked(forms: &[Matrix<T>], mode: Mode) -> Result<Self> {
        let first = &forms[0];
        let (form, mut ops, mut labels) = match mode {
            Mode::General => {
                let (g, _) = split_parts(first)?;
                (g, vec![s_operator(first)?], vec![1])
            }
            Mode::SelfAdjoint | Mode::Skew => (first.clone(), Vec::new(), Vec::new()),
        };
        let inv = form.inverse()?;
        for (i, f) in forms.iter().enumerate().skip(1) {
            ops.push(&inv * f);
            labels.push(i + 1);
        }
        let adjoints = ops
            .iter()
            .enumerate()
            .map(|(i, op)| {
                if mode == Mode::General && i == 0 {
                    // S-operator is anti-self-adjoint for the symmetric part
                    Ok(-op.clone())
                } else {
                    b_adjoint(op, &form)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            mode,
            form,
            ops,
            adjoints,
            labels,
        })
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn form(&self) -> &Matrix<T> {
        &self.form
    }

    pub fn ops(&self) -> &[Matrix<T>] {
        &self.ops
    }

    pub fn adjoints(&self) -> &[Matrix<T>] {
        &self.adjoints
    }

    /// Index i of the form σ_{q_i} each operator came from (1-based).
    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.form.rows()
    }
}

pub fn build_tuple(sigma: &SymbolTensor, qs: &[KForm], mode: Mode) -> Result<OperatorTuple<Rational>> {
    let forms = qs
        .iter()
        .map(|q| evaluate(sigma, q))
        .collect::<Result<Vec<_>>>()?;
    OperatorTuple::from_forms(&forms, mode)
}
