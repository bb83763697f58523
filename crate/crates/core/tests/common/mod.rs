#![allow(dead_code)]

use std::path::PathBuf;

use num_bigint::BigInt;
use num_rational::BigRational;
use tilecohom::exactalg::{AlgebraicNumber, NumberField};
use tilecohom::language::{Letter, Word};
use tilecohom::substitution::{parse_substitution, Substitution};

/// Primitive aperiodic fixtures used across the suites.
pub const MAIN_FIXTURES: [&str; 5] = [
    "thue_morse",
    "thue_morse_4",
    "a8b8",
    "fib_variant",
    "nonpisot",
];

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(format!("{name}.sub"))
}

pub fn fixture(name: &str) -> Substitution {
    let text = std::fs::read_to_string(fixture_path(name)).expect("fixture readable");
    parse_substitution(&text).expect("fixture parses")
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn alg(k: &std::sync::Arc<NumberField>, coords: &[(i64, i64)]) -> AlgebraicNumber {
    AlgebraicNumber::new(k, coords.iter().map(|&(n, d)| rat(n, d)).collect()).unwrap()
}

/// `phi^n(w)` by repeated letter replacement.
pub fn brute_iterate(s: &Substitution, w: &[Letter], n: u32) -> Vec<Letter> {
    let mut cur = w.to_vec();
    for _ in 0..n {
        cur = cur
            .iter()
            .flat_map(|&l| s.image(l).iter().copied())
            .collect();
    }
    cur
}

/// First `k` letters of `phi^n(w)`; a prefix of `phi(u)` depends only on the same-length prefix of `u`.
pub fn brute_prefix(s: &Substitution, w: &[Letter], n: u32, k: usize) -> Vec<Letter> {
    let mut cur: Vec<Letter> = w.iter().copied().take(k).collect();
    for _ in 0..n {
        cur = cur
            .iter()
            .flat_map(|&l| s.image(l).iter().copied())
            .take(k)
            .collect();
    }
    cur
}

/// Start positions `i < limit` where `p` occurs in `text`.
pub fn scan(p: &[Letter], text: &[Letter], limit: usize) -> u64 {
    if p.len() > text.len() {
        return 0;
    }
    (0..limit.min(text.len() + 1 - p.len()))
        .filter(|&i| &text[i..i + p.len()] == p)
        .count() as u64
}

pub fn word(s: &Substitution, text: &str) -> Word {
    s.word(text).unwrap()
}
