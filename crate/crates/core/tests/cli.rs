use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use syminv::io::{parse_fingerprint, parse_symbol, serialize_fingerprint, serialize_symbol, SymbolFile};
use syminv::procesi::{symbol_fingerprint, Mode};
use syminv::symbols::{random_symbol, DualKind};
use tempfile::TempDir;

fn syminv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_syminv"))
        .args(args)
        .env("SYMINV_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn gen(dir: &TempDir, name: &str, m: &str, mode: &str, seed: &str) -> PathBuf {
    let out = dir.path().join(name);
    let res = syminv(&["gen", "--n", "2", "--k", "2", "--m", m, "--mode", mode, "--seed", seed, "-o", path_str(&out)]);
    assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));
    out
}

#[test]
fn gen_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let a = gen(&dir, "a.json", "2", "general", "9");
    let b = gen(&dir, "b.json", "2", "general", "9");
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}

#[test]
fn fingerprint_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let sym = gen(&dir, "s.json", "2", "self-adjoint", "3");
    let first = syminv(&["fingerprint", "--in", path_str(&sym)]);
    let second = syminv(&["fingerprint", "--in", path_str(&sym)]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let fp = parse_fingerprint(std::str::from_utf8(&first.stdout).unwrap()).unwrap();
    assert_eq!(fp.meta.cap, 3);
}

#[test]
fn compare_against_gl_e_image_is_equivalent() {
    let dir = TempDir::new().unwrap();
    let sym = gen(&dir, "s.json", "2", "general", "4");
    let moved = dir.path().join("t.json");
    let res = syminv(&["transform", "--in", path_str(&sym), "--gl-e", "[[2,1],[1,1]]", "-o", path_str(&moved)]);
    assert_eq!(res.status.code(), Some(0));
    let res = syminv(&["compare", path_str(&sym), path_str(&moved)]);
    assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stdout));
    let res = syminv(&["compare", path_str(&sym), path_str(&sym)]);
    assert_eq!(res.status.code(), Some(0));
}

#[test]
fn compare_of_independent_symbols_is_not_equivalent() {
    let dir = TempDir::new().unwrap();
    let a = gen(&dir, "a.json", "2", "general", "1");
    let b = gen(&dir, "b.json", "2", "general", "2");
    let res = syminv(&["compare", path_str(&a), path_str(&b)]);
    assert_eq!(res.status.code(), Some(1));
}

#[test]
fn pfaffian_of_general_form_is_an_error() {
    let dir = TempDir::new().unwrap();
    let sym = gen(&dir, "s.json", "3", "general", "5");
    let res = syminv(&["pfaffian", "--in", path_str(&sym)]);
    assert_eq!(res.status.code(), Some(2));
    assert!(!res.stderr.is_empty());
}

#[test]
fn skew_mode_rejects_odd_dimension() {
    let res = syminv(&["gen", "--n", "2", "--k", "2", "--m", "3", "--mode", "skew", "--seed", "1"]);
    assert_eq!(res.status.code(), Some(2));
}

#[test]
fn witness_and_stabilizer_commands() {
    let dir = TempDir::new().unwrap();
    let sym = gen(&dir, "s.json", "2", "general", "6");
    let moved = dir.path().join("t.json");
    let res = syminv(&["transform", "--in", path_str(&sym), "--gl-e", "[[1,2],[0,1]]", "--gl-t", "[[1,1],[0,1]]", "-o", path_str(&moved)]);
    assert_eq!(res.status.code(), Some(0));
    let res = syminv(&["witness", path_str(&sym), path_str(&moved), "--gl-t", "[[1,1],[0,1]]", "--gl-e", "[[1,2],[0,1]]"]);
    assert_eq!(res.status.code(), Some(0));
    let res = syminv(&["witness", path_str(&sym), path_str(&moved), "--gl-t", "[[1,0],[0,1]]", "--gl-e", "[[1,2],[0,1]]"]);
    assert_eq!(res.status.code(), Some(1));
    let res = syminv(&["stabilizer", "--in", path_str(&sym)]);
    assert_eq!(res.status.code(), Some(0));
}

#[test]
fn malformed_input_is_an_error() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"n\": 2}").unwrap();
    let res = syminv(&["fingerprint", "--in", path_str(&bad)]);
    assert_eq!(res.status.code(), Some(2));
}

#[test]
fn symbol_serialization_round_trips() {
    let modes = [(Mode::General, 2), (Mode::SelfAdjoint, 3), (Mode::Skew, 4)];
    for seed in 0..50u64 {
        let (mode, m) = modes[seed as usize % modes.len()];
        let dual = if seed % 2 == 0 { DualKind::Star } else { DualKind::Flat };
        let symbol = random_symbol(2, 1 + (seed as usize % 3), m, dual, mode, seed).unwrap();
        let file = SymbolFile { symbol, mode };
        let text = serialize_symbol(&file);
        let back = parse_symbol(&text).unwrap();
        assert_eq!(back, file);
        assert_eq!(serialize_symbol(&back), text);
    }
}

#[test]
fn fingerprint_serialization_round_trips() {
    let sigma = random_symbol(2, 2, 2, DualKind::Star, Mode::General, 8).unwrap();
    let fp = symbol_fingerprint(&sigma, Mode::General, 3).unwrap();
    let text = serialize_fingerprint(&fp);
    let back = parse_fingerprint(&text).unwrap();
    assert_eq!(serialize_fingerprint(&back), text);
    assert!(back.same_invariants(&fp));
}
