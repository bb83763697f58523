//! Substitution rules, their matrices, and exact Perron-Frobenius data.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactalg::{
    charpoly, count_roots, factor_squarefree_then_irreducible, isolate_real_roots, nullspace,
    rat_to_f64, second_modulus_interval, squarefree_part, sturm_sequence, AlgebraicNumber,
    IntMatrix, IntPoly, Interval, NumberField,
};
use crate::language::{factors_up_to, iterate_word, Letter, Word};

/// Default bound on `n` for the factor-complexity screen.
pub const DEFAULT_SCREEN_BOUND: usize = 64;

/// A substitution on a finite, ordered alphabet of named letters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Substitution {
    alphabet: Vec<String>,
    rules: Vec<Word>,
    lengths: Option<Vec<IntPoly>>,
}

impl Substitution {
    pub fn new(alphabet: Vec<String>, rules: Vec<Word>) -> Result<Self> {
        if alphabet.is_empty() {
            return Err(Error::Shape("empty alphabet".into()));
        }
        if alphabet.len() > Letter::MAX as usize {
            return Err(Error::Shape("alphabet too large".into()));
        }
        if rules.len() != alphabet.len() {
            return Err(Error::Shape(format!(
                "{} rules for {} letters",
                rules.len(),
                alphabet.len()
            )));
        }
        let mut seen = HashMap::new();
        for (i, a) in alphabet.iter().enumerate() {
            if seen.insert(a.as_str(), i).is_some() {
                return Err(Error::Shape(format!("duplicate letter {a}")));
            }
        }
        for (i, r) in rules.iter().enumerate() {
            if r.is_empty() {
                return Err(Error::Shape(format!("empty image for {}", alphabet[i])));
            }
            if r.iter().any(|&l| l as usize >= alphabet.len()) {
                return Err(Error::Shape(format!(
                    "unknown letter in image of {}",
                    alphabet[i]
                )));
            }
        }
        Ok(Substitution {
            alphabet,
            rules,
            lengths: None,
        })
    }

    /// Attach user tile lengths, as polynomials in the stretching factor.
    pub fn with_lengths(mut self, lengths: Vec<IntPoly>) -> Result<Self> {
        if lengths.len() != self.size() {
            return Err(Error::InvalidLengths(format!(
                "{} lengths for {} letters",
                lengths.len(),
                self.size()
            )));
        }
        self.lengths = Some(lengths);
        Ok(self)
    }

    pub fn user_lengths(&self) -> Option<&[IntPoly]> {
        self.lengths.as_deref()
    }

    pub fn size(&self) -> usize {
        self.alphabet.len()
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn name(&self, l: Letter) -> &str {
        &self.alphabet[l as usize]
    }

    pub fn letter_index(&self, name: &str) -> Option<Letter> {
        self.alphabet
            .iter()
            .position(|a| a == name)
            .map(|i| i as Letter)
    }

    pub fn image(&self, l: Letter) -> &[Letter] {
        &self.rules[l as usize]
    }

    pub fn rules(&self) -> &[Word] {
        &self.rules
    }

    fn single_char_names(&self) -> bool {
        self.alphabet.iter().all(|a| a.chars().count() == 1)
    }

    /// Parse a word written as whitespace-separated letter names, or as a run
    /// of characters when every letter name is a single character.
    pub fn word(&self, text: &str) -> Result<Word> {
        let names: Vec<String> = if text.split_whitespace().count() > 1 || !self.single_char_names()
        {
            text.split_whitespace().map(str::to_string).collect()
        } else {
            text.trim().chars().map(String::from).collect()
        };
        if names.is_empty() {
            return Err(Error::EmptyPatch);
        }
        names
            .iter()
            .map(|n| {
                self.letter_index(n)
                    .ok_or_else(|| Error::IllegalPatch(format!("{text} (unknown letter {n})")))
            })
            .collect()
    }

    pub fn render(&self, w: &[Letter]) -> String {
        let sep = if self.single_char_names() { "" } else { " " };
        w.iter()
            .map(|&l| self.name(l))
            .collect::<Vec<_>>()
            .join(sep)
    }

    /// `M[i][j]` = occurrences of letter `i` in the image of letter `j`.
    pub fn matrix(&self) -> IntMatrix {
        let n = self.size();
        let mut m = IntMatrix::zeros(n, n);
        for (j, r) in self.rules.iter().enumerate() {
            for &i in r.iter() {
                let v = m.get(i as usize, j) + BigInt::one();
                m.set(i as usize, j, v);
            }
        }
        m
    }

    /// The composed substitution `phi^k` (`k >= 1`).
    pub fn power(&self, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::Shape("substitution power must be positive".into()));
        }
        let rules = (0..self.size() as Letter)
            .map(|l| iterate_word(self, &[l], k, usize::MAX))
            .collect::<Result<Vec<_>>>()?;
        Substitution::new(self.alphabet.clone(), rules)
    }

    pub fn is_primitive(&self) -> Primitivity {
        is_primitive_matrix(&self.matrix())
    }

    /// All images share the first letter and all share the last letter.
    pub fn is_proper(&self) -> bool {
        let first = self.rules[0][0];
        let last = *self.rules[0].last().unwrap();
        self.rules
            .iter()
            .all(|r| r[0] == first && *r.last().unwrap() == last)
    }

    pub fn perron_data(&self) -> Result<PerronData> {
        perron_data_for_matrix(&self.matrix(), self.lengths.as_deref())
    }

    pub fn periodicity_screen(&self) -> PeriodicityVerdict {
        periodicity_screen(self, DEFAULT_SCREEN_BOUND)
    }
}

/// Primitivity verdict with the least power that is strictly positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Primitivity {
    pub primitive: bool,
    pub power: Option<u32>,
}

/// Checks powers up to Wielandt's bound `(n-1)^2 + 1`.
pub fn is_primitive_matrix(m: &IntMatrix) -> Primitivity {
    let n = m.rows();
    if n == 0 || !m.is_square() || m.entries().iter().any(|e| e.is_negative()) {
        return Primitivity {
            primitive: false,
            power: None,
        };
    }
    let pattern: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| !m.get(i, j).is_zero()).collect())
        .collect();
    let mut cur = pattern.clone();
    let bound = ((n - 1) * (n - 1) + 1) as u32;
    for k in 1..=bound {
        if cur.iter().all(|r| r.iter().all(|&b| b)) {
            return Primitivity {
                primitive: true,
                power: Some(k),
            };
        }
        cur = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).any(|t| cur[i][t] && pattern[t][j]))
                    .collect()
            })
            .collect();
    }
    Primitivity {
        primitive: false,
        power: None,
    }
}

/// Exact Perron-Frobenius data of a primitive matrix.
#[derive(Clone, Debug)]
pub struct PerronData {
    pub field: Arc<NumberField>,
    pub lambda: AlgebraicNumber,
    /// Minimal polynomial of the stretching factor.
    pub q: IntPoly,
    pub charpoly: IntPoly,
    /// Left eigenvector: natural tile lengths.
    pub lengths: Vec<AlgebraicNumber>,
    /// Right eigenvector: letter frequencies per unit length.
    pub letter_freqs: Vec<AlgebraicNumber>,
    /// Encloses the second-largest root modulus of the characteristic polynomial.
    pub lambda2_modulus: Interval,
}

impl PerronData {
    /// `min(1/d, 1 - log|lambda_2| / log lambda)`.
    pub fn gamma(&self, d: u32) -> f64 {
        let inv = 1.0 / f64::from(d.max(1));
        let rho = rat_to_f64(&self.lambda2_modulus.mid());
        if rho <= 0.0 {
            return inv;
        }
        let lam = self.lambda.to_f64();
        inv.min(1.0 - rho.ln() / lam.ln())
    }

    pub fn lambda_f64(&self) -> f64 {
        self.lambda.to_f64()
    }
}

/// Perron data for a square nonnegative primitive matrix; `user_lengths`, if
/// given, must be a positive left eigenvector.
pub fn perron_data_for_matrix(
    m: &IntMatrix,
    user_lengths: Option<&[IntPoly]>,
) -> Result<PerronData> {
    m.require_square()?;
    if !is_primitive_matrix(m).primitive {
        return Err(Error::NonPrimitive);
    }
    let n = m.rows();
    let chi = charpoly(m)?;
    let sqf = squarefree_part(&chi);
    let roots = isolate_real_roots(&sqf)?;
    let top = roots
        .last()
        .cloned()
        .ok_or_else(|| Error::Internal("no real eigenvalue".into()))?;
    let q = factor_squarefree_then_irreducible(&chi)?
        .into_iter()
        .map(|(f, _)| f)
        .find(|f| root_in(f, &top))
        .ok_or_else(|| Error::Internal("no factor vanishes at the top root".into()))?;
    let field = NumberField::new(&q, &top)?;
    let lambda = field.generator();
    let (lambda2_modulus, _) = second_modulus_interval(
        &sqf,
        field.root_interval(),
        &q,
        &BigRational::new(BigInt::one(), BigInt::from(10u64).pow(12)),
    )?;

    let entry = |i: usize, j: usize| {
        AlgebraicNumber::from_rational(&field, BigRational::from_integer(m.get(i, j).clone()))
    };
    let zero = AlgebraicNumber::zero(&field);
    // (M - lambda I) x = 0 and (M^T - lambda I) y = 0
    let shifted = |transpose: bool| -> Vec<Vec<AlgebraicNumber>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let e = if transpose { entry(j, i) } else { entry(i, j) };
                        if i == j {
                            &e - &lambda
                        } else {
                            e
                        }
                    })
                    .collect()
            })
            .collect()
    };
    let right = one_dim_kernel(&shifted(false), n, &zero)?;
    let left = one_dim_kernel(&shifted(true), n, &zero)?;

    let lengths = match user_lengths {
        Some(ls) => {
            let ls: Vec<AlgebraicNumber> = ls
                .iter()
                .map(|p| AlgebraicNumber::from_int_poly(&field, p))
                .collect();
            check_left_eigenvector(m, &ls, &lambda)?;
            ls
        }
        None => normalize_lengths(&left)?,
    };
    let dot = right
        .iter()
        .zip(&lengths)
        .fold(zero.clone(), |acc, (a, b)| &acc + &(a * b));
    let inv = dot.inv()?;
    let letter_freqs: Vec<AlgebraicNumber> = right.iter().map(|x| x * &inv).collect();
    if !letter_freqs.iter().all(AlgebraicNumber::is_positive) {
        return Err(Error::Internal("Perron eigenvector is not positive".into()));
    }
    Ok(PerronData {
        field,
        lambda,
        q,
        charpoly: chi,
        lengths,
        letter_freqs,
        lambda2_modulus,
    })
}

fn root_in(f: &IntPoly, iv: &Interval) -> bool {
    if f.sign_at(&iv.hi) == 0 {
        return true;
    }
    !iv.is_point() && count_roots(&sturm_sequence(f), &iv.lo, &iv.hi) > 0
}

fn one_dim_kernel(
    rows: &[Vec<AlgebraicNumber>],
    n: usize,
    zero: &AlgebraicNumber,
) -> Result<Vec<AlgebraicNumber>> {
    let mut ns = nullspace(rows, n, zero);
    if ns.len() != 1 {
        return Err(Error::Internal(format!(
            "Perron eigenspace has dimension {}",
            ns.len()
        )));
    }
    Ok(ns.pop().unwrap())
}

/// Divide by the last entry, clear all denominators, then divide out the
/// integer content of every coordinate.
fn normalize_lengths(v: &[AlgebraicNumber]) -> Result<Vec<AlgebraicNumber>> {
    let last = v
        .last()
        .ok_or_else(|| Error::Shape("empty eigenvector".into()))?;
    let inv = last.inv()?;
    let scaled: Vec<AlgebraicNumber> = v.iter().map(|x| x * &inv).collect();
    let den = scaled
        .iter()
        .flat_map(|x| x.coords().iter())
        .fold(BigInt::one(), |l, c| {
            num_integer::Integer::lcm(&l, c.denom())
        });
    let ints: Vec<AlgebraicNumber> = scaled
        .iter()
        .map(|x| x.scale(&BigRational::from_integer(den.clone())))
        .collect();
    let g = ints
        .iter()
        .flat_map(|x| x.coords().iter())
        .fold(BigInt::zero(), |g, c| {
            num_integer::Integer::gcd(&g, c.numer())
        });
    let out: Vec<AlgebraicNumber> = ints
        .iter()
        .map(|x| x.scale(&BigRational::new(BigInt::one(), g.clone())))
        .collect();
    if !out.iter().all(AlgebraicNumber::is_positive) {
        return Err(Error::Internal(
            "left Perron eigenvector is not positive".into(),
        ));
    }
    Ok(out)
}

fn check_left_eigenvector(
    m: &IntMatrix,
    ls: &[AlgebraicNumber],
    lambda: &AlgebraicNumber,
) -> Result<()> {
    let n = m.rows();
    if ls.len() != n {
        return Err(Error::InvalidLengths(format!(
            "{} lengths for {} letters",
            ls.len(),
            n
        )));
    }
    for j in 0..n {
        let lhs = (0..n).fold(AlgebraicNumber::zero(lambda.field()), |acc, i| {
            &acc + &ls[i].scale(&BigRational::from_integer(m.get(i, j).clone()))
        });
        if lhs != lambda * &ls[j] {
            return Err(Error::InvalidLengths(format!(
                "lengths are not a left eigenvector (column {j})"
            )));
        }
    }
    if !ls.iter().all(AlgebraicNumber::is_positive) {
        return Err(Error::InvalidLengths("lengths must be positive".into()));
    }
    Ok(())
}

/// Outcome of the factor-complexity screen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PeriodicityVerdict {
    /// `p(n) > n` for every `n` up to the bound.
    AperiodicEvidence,
    /// `p(n) <= n` for some `n`; by Morse-Hedlund the language is periodic.
    Periodic,
    /// The factor sets grew past the size guard before a verdict.
    Inconclusive,
}

/// Factor complexity `p(n)` for `n = 1..=bound`.
pub fn factor_complexity(s: &Substitution, bound: usize) -> Vec<usize> {
    factors_up_to(s, bound)
        .iter()
        .skip(1)
        .map(|set| set.len())
        .collect()
}

pub fn periodicity_screen(s: &Substitution, bound: usize) -> PeriodicityVerdict {
    // Factor counts of a primitive substitution grow at most linearly; a set
    // far beyond that signals something the screen cannot handle cheaply.
    let guard = 1_000_000usize;
    let mut total = 0usize;
    for (i, count) in factor_complexity(s, bound).into_iter().enumerate() {
        let n = i + 1;
        if count <= n {
            return PeriodicityVerdict::Periodic;
        }
        total += count;
        if total > guard {
            return PeriodicityVerdict::Inconclusive;
        }
    }
    PeriodicityVerdict::AperiodicEvidence
}

/// Parse the rule DSL: one `letter -> letter letter ...` per line, `#`
/// comments, blank lines ignored, and an optional `lengths: ...` header with
/// one integer polynomial in `L` per letter.
pub fn parse_substitution(text: &str) -> Result<Substitution> {
    let mut alphabet: Vec<String> = Vec::new();
    let mut images: Vec<Vec<(String, usize, usize)>> = Vec::new();
    let mut lengths: Option<(Vec<(String, usize)>, usize)> = None;
    for (ln, raw) in text.lines().enumerate() {
        let line_no = ln + 1;
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        if line.trim().is_empty() {
            continue;
        }
        let trimmed = line.trim_start();
        if let Some(rest) = trimmed.strip_prefix("lengths:") {
            if lengths.is_some() {
                return Err(perr(
                    line_no,
                    col_of(raw, trimmed),
                    "duplicate lengths header",
                ));
            }
            let base = raw.len() - rest.len();
            lengths = Some((tokens(rest, base), line_no));
            continue;
        }
        let Some(arrow) = line.find("->") else {
            return Err(perr(
                line_no,
                col_of(raw, trimmed),
                "expected `letter -> image`",
            ));
        };
        let lhs: Vec<(String, usize)> = tokens(&line[..arrow], 0);
        if lhs.len() != 1 {
            let col = lhs.get(1).map_or(1, |t| t.1);
            return Err(perr(line_no, col, "left side must be a single letter"));
        }
        let (name, col) = lhs[0].clone();
        if alphabet.contains(&name) {
            return Err(perr(line_no, col, &format!("duplicate rule for `{name}`")));
        }
        let rhs = tokens(&line[arrow + 2..], arrow + 2);
        if rhs.is_empty() {
            return Err(perr(
                line_no,
                arrow + 3,
                &format!("empty image for `{name}`"),
            ));
        }
        alphabet.push(name);
        images.push(rhs.into_iter().map(|(t, c)| (t, line_no, c)).collect());
    }
    if alphabet.is_empty() {
        return Err(perr(1, 1, "no rules"));
    }
    let mut rules = Vec::with_capacity(images.len());
    for img in images {
        let mut w = Vec::with_capacity(img.len());
        for (t, line, col) in img {
            match alphabet.iter().position(|a| *a == t) {
                Some(i) => w.push(i as Letter),
                None => return Err(perr(line, col, &format!("unknown letter `{t}`"))),
            }
        }
        rules.push(Word::new(w));
    }
    let s = Substitution::new(alphabet, rules)?;
    match lengths {
        None => Ok(s),
        Some((toks, line)) => {
            if toks.len() != s.size() {
                return Err(perr(
                    line,
                    1,
                    &format!("{} lengths for {} letters", toks.len(), s.size()),
                ));
            }
            let polys = toks
                .iter()
                .map(|(t, c)| parse_length_poly(t).map_err(|msg| perr(line, *c, &msg)))
                .collect::<Result<Vec<_>>>()?;
            s.with_lengths(polys)
        }
    }
}

fn perr(line: usize, col: usize, msg: &str) -> Error {
    Error::Parse {
        line,
        col,
        msg: msg.to_string(),
    }
}

fn col_of(raw: &str, part: &str) -> usize {
    raw.len() - part.len() + 1
}

/// Whitespace-separated tokens with 1-based columns, offset by `base` bytes.
fn tokens(s: &str, base: usize) -> Vec<(String, usize)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in s.char_indices().chain(std::iter::once((s.len(), ' '))) {
        if ch.is_whitespace() {
            if let Some(b) = start.take() {
                out.push((s[b..i].to_string(), base + b + 1));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    out
}

/// Integer polynomial in `L`, e.g. `L-1`, `2`, `3L^2+L-1`, `2*L`.
pub fn parse_length_poly(text: &str) -> std::result::Result<IntPoly, String> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err("empty length".into());
    }
    let mut coeffs: Vec<BigInt> = Vec::new();
    let bytes = t.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let mut sign = BigInt::one();
        if bytes[i] == b'+' || bytes[i] == b'-' {
            if bytes[i] == b'-' {
                sign = -sign;
            }
            i += 1;
        } else if i > 0 {
            return Err(format!("unexpected `{}`", bytes[i] as char));
        }
        let ds = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        let coef = if i > ds {
            t[ds..i].parse::<BigInt>().map_err(|e| e.to_string())?
        } else {
            BigInt::one()
        };
        if i < bytes.len() && bytes[i] == b'*' {
            i += 1;
        }
        let mut deg = 0usize;
        if i < bytes.len() && bytes[i] == b'L' {
            i += 1;
            deg = 1;
            if i < bytes.len() && bytes[i] == b'^' {
                i += 1;
                let es = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                deg = t[es..i]
                    .parse::<usize>()
                    .map_err(|_| "bad exponent".to_string())?;
            }
        } else if i == ds {
            return Err(format!("expected a number or `L` in `{text}`"));
        }
        if coeffs.len() <= deg {
            coeffs.resize(deg + 1, BigInt::zero());
        }
        coeffs[deg] += sign * coef;
    }
    Ok(IntPoly::new(coeffs))
}
