//! Command-line front end. Exit codes: 0 success or equivalent,
//! 1 not equivalent (or witness rejected), 2 error, 3 inconclusive.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::error::{Error, Result};
use crate::io::{
    matrix_to_strings, parse_matrix_literal, parse_rational_list, parse_symbol, serialize_fingerprint,
    serialize_symbol, SymbolFile,
};
use crate::linalg::{format_rational, pfaffian, pfaffian_pencil, signature, split_parts, Matrix, Rational};
use crate::procesi::{
    fingerprint_with, is_nondegenerate_form, procesi_cap, select_special_tuple, symbols_equivalent, Gate, Mode,
    Verdict,
};
use crate::symbols::{act_gl_e, act_gl_t, evaluate, random_symbol, DualKind, KForm, SymbolTensor};
use crate::verify::{
    condition_star_pair, expected_codimension, jacobian_rank, stabilizer_dimension, FormGroup, DEFAULT_STEP,
    DEFAULT_TOL,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_EQUIVALENT: i32 = 1;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

const MAX_DEFAULT_CAP: usize = 6;

#[derive(Parser, Debug)]
#[command(name = "syminv", version, about = "Exact trace invariants of differential operator symbols")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a random symbol file.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value = "general")]
        mode: String,
        #[arg(long, default_value = "star")]
        dual: String,
        #[arg(long)]
        seed: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the symbol at a k-form.
    Eval {
        #[arg(long = "in")]
        input: PathBuf,
        /// Comma-separated coefficients on the monomial basis.
        #[arg(long)]
        q: String,
    },
    /// Fingerprint of the special tuple.
    Fingerprint {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        opts: CapOpts,
        /// Omit the real signature.
        #[arg(long)]
        complex: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Decide equivalence of two symbols.
    Compare {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        opts: CapOpts,
    },
    /// Apply GL(E) and/or GL(T) transforms.
    Transform {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "gl-e")]
        gl_e: Option<String>,
        #[arg(long = "gl-t")]
        gl_t: Option<String>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Non-degeneracy gate report.
    Nondeg {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        opts: CapOpts,
    },
    /// Signature of the symmetric part of σ_q.
    Signature {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        q: FormSelect,
    },
    /// Pfaffian of σ_q.
    Pfaffian {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        q: FormSelect,
    },
    /// Pfaffian pencil Pf(σ_q − λ σ_p).
    Pencil {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        q: FormSelect,
        /// k-form for the pencil direction; defaults to the second special form.
        #[arg(long = "alpha-q")]
        alpha_q: Option<String>,
    },
    /// Stabilizer dimension of the special tuple.
    Stabilizer {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Finite-difference rank of the fingerprint map.
    Rank {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        opts: CapOpts,
        #[arg(long, default_value_t = DEFAULT_STEP)]
        step: f64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Check that (A1, A2) maps symbol a to symbol b.
    Witness {
        a: PathBuf,
        b: PathBuf,
        #[arg(long = "gl-t")]
        gl_t: String,
        #[arg(long = "gl-e")]
        gl_e: String,
    },
}

#[derive(Args, Debug)]
struct CapOpts {
    /// Word-length cap; default min(2^m − 1, 6).
    #[arg(long)]
    cap: Option<usize>,
}

#[derive(Args, Debug)]
struct FormSelect {
    /// Use the first form of the special tuple (default).
    #[arg(long, conflicts_with = "q")]
    q1: bool,
    /// Comma-separated k-form coefficients.
    #[arg(long)]
    q: Option<String>,
}

pub fn default_cap(m: usize) -> usize {
    procesi_cap(m).min(MAX_DEFAULT_CAP)
}

fn cap_for(opts: &CapOpts, m: usize) -> usize {
    opts.cap.unwrap_or_else(|| default_cap(m))
}

fn read_symbol(path: &Path) -> Result<SymbolFile> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::parse(path.display().to_string(), e.to_string()))?;
    parse_symbol(&text).map_err(|e| match e {
        Error::Parse { context, message } => Error::Parse {
            context: format!("{}: {context}", path.display()),
            message,
        },
        other => other,
    })
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Error::parse(path.display().to_string(), e.to_string())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| Error::parse("stdout", e.to_string()))
        }
    }
}

fn print_json(value: &serde_json::Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    emit(&None, &text)
}

fn select_form(file: &SymbolFile, q: &FormSelect) -> Result<Matrix<Rational>> {
    let sigma = &file.symbol;
    match &q.q {
        Some(list) => evaluate(sigma, &KForm::new(parse_rational_list(list)?)),
        None => first_special_form(sigma, file.mode, 0),
    }
}

/// Form at `index` of the special tuple, falling back to the monomial
/// order when no admissible special tuple exists.
fn first_special_form(sigma: &SymbolTensor, mode: Mode, index: usize) -> Result<Matrix<Rational>> {
    let qs = match select_special_tuple(sigma, mode) {
        Ok((special, _)) => special.qs,
        Err(_) => (0..sigma.num_monomials()).map(|i| KForm::unit(sigma.num_monomials(), i)).collect(),
    };
    let q = qs
        .get(index)
        .ok_or_else(|| Error::ShapeMismatch(format!("symbol has no form q{}", index + 1)))?;
    evaluate(sigma, q)
}

fn gate_json(gate: &Gate) -> serde_json::Value {
    json!({
        "condition_star_pair": gate.star_pair.map(|(i, j)| vec![i, j]),
        "length3_invariant": gate.high_degree,
        "passed": gate.passed(),
    })
}

fn execute(command: Command) -> Result<i32> {
    match command {
        Command::Gen { n, k, m, mode, dual, seed, out } => {
            let mode: Mode = mode.parse()?;
            let dual: DualKind = dual.parse()?;
            let symbol = random_symbol(n, k, m, dual, mode, seed)?;
            emit(&out, &serialize_symbol(&SymbolFile { symbol, mode }))?;
            Ok(EXIT_OK)
        }
        Command::Eval { input, q } => {
            let file = read_symbol(&input)?;
            let value = evaluate(&file.symbol, &KForm::new(parse_rational_list(&q)?))?;
            print_json(&json!({ "matrix": matrix_to_strings(&value) }))?;
            Ok(EXIT_OK)
        }
        Command::Fingerprint { input, opts, complex, out } => {
            let file = read_symbol(&input)?;
            let cap = cap_for(&opts, file.symbol.m());
            let (special, tuple) = select_special_tuple(&file.symbol, file.mode)?;
            let mut fp = fingerprint_with(&tuple, cap, !complex)?;
            fp.meta.shape = Some((file.symbol.n(), file.symbol.k()));
            fp.meta.q1_choice = Some(special.choice.to_string());
            fp.meta.num_forms = special.qs.len();
            if condition_star_pair(&tuple).is_none() {
                fp.meta
                    .warnings
                    .push("no operator pair satisfies condition (*); separation is unreliable".into());
            }
            emit(&out, &serialize_fingerprint(&fp))?;
            Ok(EXIT_OK)
        }
        Command::Compare { a, b, opts } => {
            let fa = read_symbol(&a)?;
            let fb = read_symbol(&b)?;
            if fa.mode != fb.mode {
                return Err(Error::ShapeMismatch(format!("modes {} and {} differ", fa.mode, fb.mode)));
            }
            let cap = cap_for(&opts, fa.symbol.m());
            let v = symbols_equivalent(&fa.symbol, &fb.symbol, fa.mode, cap)?;
            print_json(&json!({
                "verdict": v.verdict.as_str(),
                "mode": fa.mode.as_str(),
                "cap": v.cap,
                "q1_choice": v.q1_choice.to_string(),
                "differing_entries": v.differing,
                "signatures": v.signatures,
                "gates": [gate_json(&v.gates[0]), gate_json(&v.gates[1])],
            }))?;
            Ok(match v.verdict {
                Verdict::Equivalent => EXIT_OK,
                Verdict::NotEquivalent => EXIT_NOT_EQUIVALENT,
                Verdict::Inconclusive => EXIT_INCONCLUSIVE,
            })
        }
        Command::Transform { input, gl_e, gl_t, out } => {
            let mut file = read_symbol(&input)?;
            if let Some(lit) = gl_t {
                file.symbol = act_gl_t(&parse_matrix_literal(&lit)?, &file.symbol)?;
            }
            if let Some(lit) = gl_e {
                file.symbol = act_gl_e(&parse_matrix_literal(&lit)?, &file.symbol)?;
            }
            emit(&out, &serialize_symbol(&file))?;
            Ok(EXIT_OK)
        }
        Command::Nondeg { input, opts } => {
            let file = read_symbol(&input)?;
            let sigma = &file.symbol;
            let cap = cap_for(&opts, sigma.m());
            let per_form: Vec<bool> = sigma.values().iter().map(is_nondegenerate_form).collect();
            let report = match select_special_tuple(sigma, file.mode) {
                Ok((special, tuple)) => {
                    let fp = fingerprint_with(&tuple, cap, true)?;
                    json!({
                        "mode": file.mode.as_str(),
                        "cap": cap,
                        "monomial_forms_nondegenerate": per_form,
                        "q1_choice": special.choice.to_string(),
                        "gate": gate_json(&Gate::of(&tuple, &fp)),
                    })
                }
                Err(e) => json!({
                    "mode": file.mode.as_str(),
                    "cap": cap,
                    "monomial_forms_nondegenerate": per_form,
                    "q1_choice": null,
                    "error": e.to_string(),
                }),
            };
            print_json(&report)?;
            Ok(EXIT_OK)
        }
        Command::Signature { input, q } => {
            let file = read_symbol(&input)?;
            let (sym, _) = split_parts(&select_form(&file, &q)?)?;
            let (p, n) = signature(&sym)?;
            print_json(&json!({ "positive": p, "negative": n }))?;
            Ok(EXIT_OK)
        }
        Command::Pfaffian { input, q } => {
            let file = read_symbol(&input)?;
            let value = pfaffian(&select_form(&file, &q)?)?;
            print_json(&json!({ "pfaffian": format_rational(&value) }))?;
            Ok(EXIT_OK)
        }
        Command::Pencil { input, q, alpha_q } => {
            let file = read_symbol(&input)?;
            let omega = select_form(&file, &q)?;
            let alpha = match alpha_q {
                Some(list) => evaluate(&file.symbol, &KForm::new(parse_rational_list(&list)?))?,
                None => first_special_form(&file.symbol, file.mode, 1)?,
            };
            let poly = pfaffian_pencil(&omega, &alpha)?;
            let coeffs: Vec<String> = poly.coeffs().iter().map(format_rational).collect();
            print_json(&json!({ "coefficients_low_first": coeffs, "squarefree": poly.is_squarefree() }))?;
            Ok(EXIT_OK)
        }
        Command::Stabilizer { input } => {
            let file = read_symbol(&input)?;
            let (_, tuple) = select_special_tuple(&file.symbol, file.mode)?;
            let skip = usize::from(file.mode == Mode::General);
            let group = FormGroup::for_mode(file.mode);
            let dim = stabilizer_dimension(tuple.form(), &tuple.ops()[skip..], group)?;
            print_json(&json!({
                "group": match group { FormGroup::Orthogonal => "orthogonal", FormGroup::Symplectic => "symplectic" },
                "stabilizer_dimension": dim,
                "condition_star_pair": condition_star_pair(&tuple).map(|(i, j)| vec![tuple.labels()[i], tuple.labels()[j]]),
            }))?;
            Ok(EXIT_OK)
        }
        Command::Rank { input, opts, step, tol } => {
            let file = read_symbol(&input)?;
            let sigma = &file.symbol;
            let cap = cap_for(&opts, sigma.m());
            let report = jacobian_rank(sigma, file.mode, cap, step, tol)?;
            print_json(&json!({
                "mode": file.mode.as_str(),
                "n": report.n,
                "k": report.k,
                "m": report.m,
                "N": report.num_forms,
                "expected_codim": expected_codimension(sigma.n(), sigma.k(), sigma.m(), file.mode)?,
                "observed_rank": report.observed_rank,
                "cap_used": report.cap_used,
            }))?;
            Ok(EXIT_OK)
        }
        Command::Witness { a, b, gl_t, gl_e } => {
            let fa = read_symbol(&a)?;
            let fb = read_symbol(&b)?;
            let ok = crate::verify::check_witness(
                &fa.symbol,
                &fb.symbol,
                &parse_matrix_literal(&gl_t)?,
                &parse_matrix_literal(&gl_e)?,
            )?;
            print_json(&json!({ "witness": ok }))?;
            Ok(if ok { EXIT_OK } else { EXIT_NOT_EQUIVALENT })
        }
    }
}

fn configure_threads() {
    let threads = std::env::var("SYMINV_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .unwrap_or(0);
    // a second initialisation in the same process is harmless
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
}

/// Runs the CLI on `argv` (including the program name) and returns the exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    configure_threads();
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}
