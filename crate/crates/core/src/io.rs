//! UTF-8 JSON documents for symbols and fingerprints. Rationals are
//! always written as `"p/q"` strings so values cross the boundary exactly.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{format_rational, parse_rational, Matrix, Rational};
use crate::procesi::{Fingerprint, FingerprintMeta, Letter, Mode, Word};
use crate::symbols::{monomial_basis, DualKind, MultiIndex, SymbolTensor};

/// A symbol together with the mode it should be analysed in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolFile {
    pub symbol: SymbolTensor,
    pub mode: Mode,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSymbol {
    n: usize,
    k: usize,
    m: usize,
    dual: String,
    mode: String,
    field: String,
    entries: Vec<RawEntry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    alpha: Vec<usize>,
    matrix: Vec<Vec<String>>,
}

fn json_error(e: serde_json::Error) -> Error {
    Error::parse(format!("line {} column {}", e.line(), e.column()), e.to_string())
}

pub fn matrix_to_strings(m: &Matrix<Rational>) -> Vec<Vec<String>> {
    m.to_rows()
        .iter()
        .map(|row| row.iter().map(format_rational).collect())
        .collect()
}

fn matrix_from_strings(rows: &[Vec<String>], context: &str) -> Result<Matrix<Rational>> {
    let parsed = rows
        .iter()
        .enumerate()
        .map(|(r, row)| {
            row.iter()
                .enumerate()
                .map(|(c, s)| {
                    parse_rational(s).ok_or_else(|| {
                        Error::parse(format!("{context}[{r}][{c}]"), format!("not a rational: {s:?}"))
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(parsed).map_err(|_| Error::InvariantViolation(format!("{context} has ragged rows")))
}

pub fn parse_symbol(document: &str) -> Result<SymbolFile> {
    let raw: RawSymbol = serde_json::from_str(document).map_err(json_error)?;
    if raw.field != "rational" {
        return Err(Error::parse("field", format!("unsupported field {:?}", raw.field)));
    }
    let dual: DualKind = raw.dual.parse()?;
    let mode: Mode = raw.mode.parse()?;
    if raw.n == 0 || raw.k == 0 || raw.m == 0 {
        return Err(Error::InvariantViolation("n, k and m must be positive".into()));
    }
    mode.check_dimension(raw.m)
        .map_err(|_| Error::InvariantViolation(format!("skew mode needs even m, got {}", raw.m)))?;
    let basis = monomial_basis(raw.n, raw.k);
    let position: BTreeMap<&MultiIndex, usize> = basis.iter().enumerate().map(|(i, a)| (a, i)).collect();
    let mut values = vec![Matrix::zeros(raw.m, raw.m); basis.len()];
    let mut seen = BTreeSet::new();
    for (i, entry) in raw.entries.iter().enumerate() {
        let alpha = MultiIndex(entry.alpha.clone());
        if alpha.0.len() != raw.n || alpha.degree() != raw.k {
            return Err(Error::InvariantViolation(format!(
                "entries[{i}].alpha {alpha} is not a degree-{} index in {} variables",
                raw.k, raw.n
            )));
        }
        if !seen.insert(alpha.clone()) {
            return Err(Error::InvariantViolation(format!("duplicate alpha {alpha}")));
        }
        let matrix = matrix_from_strings(&entry.matrix, &format!("entries[{i}].matrix"))?;
        if matrix.rows() != raw.m || matrix.cols() != raw.m {
            return Err(Error::InvariantViolation(format!(
                "entries[{i}].matrix is {}x{}, expected {2}x{2}",
                matrix.rows(),
                matrix.cols(),
                raw.m
            )));
        }
        values[position[&alpha]] = matrix;
    }
    Ok(SymbolFile {
        symbol: SymbolTensor::new(raw.n, raw.k, raw.m, dual, values)?,
        mode,
    })
}

pub fn serialize_symbol(file: &SymbolFile) -> String {
    let s = &file.symbol;
    let raw = RawSymbol {
        n: s.n(),
        k: s.k(),
        m: s.m(),
        dual: s.dual().as_str().to_string(),
        mode: file.mode.as_str().to_string(),
        field: "rational".to_string(),
        entries: monomial_basis(s.n(), s.k())
            .into_iter()
            .zip(s.values())
            .map(|(alpha, v)| RawEntry {
                alpha: alpha.0,
                matrix: matrix_to_strings(v),
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&raw).expect("symbol serializes");
    out.push('\n');
    out
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFingerprint {
    metadata: RawMeta,
    entries: Vec<RawWordValue>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMeta {
    n: Option<usize>,
    k: Option<usize>,
    m: usize,
    #[serde(rename = "N")]
    num_forms: usize,
    mode: String,
    cap: usize,
    q1_choice: Option<String>,
    signature: Option<(usize, usize)>,
    labels: Vec<usize>,
    warnings: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWordValue {
    word: Vec<(usize, u8)>,
    value: String,
}

pub fn serialize_fingerprint(fp: &Fingerprint) -> String {
    let meta = &fp.meta;
    let raw = RawFingerprint {
        metadata: RawMeta {
            n: meta.shape.map(|s| s.0),
            k: meta.shape.map(|s| s.1),
            m: meta.m,
            num_forms: meta.num_forms,
            mode: meta.mode.as_str().to_string(),
            cap: meta.cap,
            q1_choice: meta.q1_choice.clone(),
            signature: meta.signature,
            labels: meta.labels.clone(),
            warnings: meta.warnings.clone(),
        },
        entries: fp
            .entries
            .iter()
            .map(|(w, v)| RawWordValue {
                word: w.letters().iter().map(|l| (l.op, l.adjoint as u8)).collect(),
                value: format_rational(v),
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&raw).expect("fingerprint serializes");
    out.push('\n');
    out
}

pub fn parse_fingerprint(document: &str) -> Result<Fingerprint> {
    let raw: RawFingerprint = serde_json::from_str(document).map_err(json_error)?;
    let shape = match (raw.metadata.n, raw.metadata.k) {
        (Some(n), Some(k)) => Some((n, k)),
        (None, None) => None,
        _ => return Err(Error::parse("metadata", "n and k must both be present or both absent")),
    };
    let mut entries = BTreeMap::new();
    for (i, e) in raw.entries.iter().enumerate() {
        if e.word.is_empty() {
            return Err(Error::InvariantViolation(format!("entries[{i}].word is empty")));
        }
        let letters = e
            .word
            .iter()
            .map(|&(op, adj)| match adj {
                0 => Ok(Letter::plain(op)),
                1 => Ok(Letter::adj(op)),
                other => Err(Error::parse(format!("entries[{i}].word"), format!("adjoint flag {other}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        let word = Word::new(letters);
        if !word.is_canonical() {
            return Err(Error::InvariantViolation(format!("entries[{i}].word is not canonical")));
        }
        let value = parse_rational(&e.value)
            .ok_or_else(|| Error::parse(format!("entries[{i}].value"), format!("not a rational: {:?}", e.value)))?;
        if entries.insert(word, value).is_some() {
            return Err(Error::InvariantViolation(format!("entries[{i}] repeats a word")));
        }
    }
    Ok(Fingerprint {
        entries,
        meta: FingerprintMeta {
            mode: raw.metadata.mode.parse()?,
            m: raw.metadata.m,
            num_forms: raw.metadata.num_forms,
            cap: raw.metadata.cap,
            signature: raw.metadata.signature,
            labels: raw.metadata.labels,
            q1_choice: raw.metadata.q1_choice,
            shape,
            warnings: raw.metadata.warnings,
        },
    })
}

/// Parses a matrix literal such as `[[1, 2], ["1/2", -3]]`.
pub fn parse_matrix_literal(text: &str) -> Result<Matrix<Rational>> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(json_error)?;
    let rows = value
        .as_array()
        .ok_or_else(|| Error::parse("matrix literal", "expected an array of rows"))?;
    let parsed = rows
        .iter()
        .enumerate()
        .map(|(r, row)| {
            row.as_array()
                .ok_or_else(|| Error::parse(format!("matrix literal row {r}"), "expected an array"))?
                .iter()
                .enumerate()
                .map(|(c, v)| {
                    let text = match v {
                        serde_json::Value::String(s) => s.clone(),
                        serde_json::Value::Number(n) if n.is_i64() => n.to_string(),
                        _ => String::new(),
                    };
                    parse_rational(&text).ok_or_else(|| {
                        Error::parse(format!("matrix literal [{r}][{c}]"), format!("not an exact rational: {v}"))
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(parsed)
}

/// Parses a comma-separated list of rationals, e.g. `1,0,-1/2`.
pub fn parse_rational_list(text: &str) -> Result<Vec<Rational>> {
    text.split(',')
        .enumerate()
        .map(|(i, s)| parse_rational(s).ok_or_else(|| Error::parse(format!("list item {i}"), format!("not a rational: {s:?}"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;

    #[test]
    fn minimal_document() {
        let doc = r#"{"n":1,"k":1,"m":1,"dual":"star","mode":"general","field":"rational",
                      "entries":[{"alpha":[1],"matrix":[["1"]]}]}"#;
        let f = parse_symbol(doc).unwrap();
        assert_eq!(f.symbol.values()[0], Matrix::identity(1));
        assert_eq!(parse_symbol(&serialize_symbol(&f)).unwrap(), f);
    }

    #[test]
    fn missing_alphas_are_zero_and_integers_parse() {
        let doc = r#"{"n":2,"k":1,"m":1,"dual":"flat","mode":"self-adjoint","field":"rational",
                      "entries":[{"alpha":[0,1],"matrix":[["3/1"]]}]}"#;
        let f = parse_symbol(doc).unwrap();
        assert_eq!(f.symbol.values()[0], Matrix::zeros(1, 1));
        assert_eq!(f.symbol.values()[1][(0, 0)], int(3));
    }

    #[test]
    fn invariant_violations() {
        let bad_degree = r#"{"n":2,"k":2,"m":1,"dual":"star","mode":"general","field":"rational",
                      "entries":[{"alpha":[1,0],"matrix":[["1"]]}]}"#;
        assert!(matches!(parse_symbol(bad_degree), Err(Error::InvariantViolation(_))));
        let duplicate = r#"{"n":1,"k":1,"m":1,"dual":"star","mode":"general","field":"rational",
                      "entries":[{"alpha":[1],"matrix":[["1"]]},{"alpha":[1],"matrix":[["2"]]}]}"#;
        assert!(matches!(parse_symbol(duplicate), Err(Error::InvariantViolation(_))));
        let not_square = r#"{"n":1,"k":1,"m":2,"dual":"star","mode":"general","field":"rational",
                      "entries":[{"alpha":[1],"matrix":[["1","2"]]}]}"#;
        assert!(matches!(parse_symbol(not_square), Err(Error::InvariantViolation(_))));
        let odd_skew = r#"{"n":1,"k":1,"m":3,"dual":"star","mode":"skew","field":"rational","entries":[]}"#;
        assert!(matches!(parse_symbol(odd_skew), Err(Error::InvariantViolation(_))));
    }

    #[test]
    fn parse_errors_carry_context() {
        let err = parse_symbol("{\n  \"n\": 1,\n  \"k\": }").unwrap_err();
        match err {
            Error::Parse { context, .. } => assert!(context.starts_with("line 3")),
            other => panic!("unexpected {other:?}"),
        }
        let bad_value = r#"{"n":1,"k":1,"m":1,"dual":"star","mode":"general","field":"rational",
                      "entries":[{"alpha":[1],"matrix":[["x"]]}]}"#;
        match parse_symbol(bad_value).unwrap_err() {
            Error::Parse { context, .. } => assert_eq!(context, "entries[0].matrix[0][0]"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn matrix_literals() {
        let m = parse_matrix_literal(r#"[[1, "1/2"], [0, -3]]"#).unwrap();
        assert_eq!(m[(0, 1)], crate::linalg::rat(1, 2));
        assert!(parse_matrix_literal("[[1.5]]").is_err());
        assert_eq!(parse_rational_list("1, -1/2,0").unwrap().len(), 3);
    }
}
