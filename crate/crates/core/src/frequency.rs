//! Exact patch frequencies in Q(λ), their denominator structure, the trace
//! pairing, and an empirical convergence harness.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cohomology::CohomologyPresentation;
use crate::error::{Error, Result};
use crate::exactalg::{integer_combination, nullspace, AlgebraicNumber, IntPoly};
use crate::language::{base_counts, collar, iterate, BlockSystem, Letter, Word};
use crate::par::ExecMode;
use crate::substitution::{PerronData, Substitution};

/// Occurrences per unit natural length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrequencyValue(pub AlgebraicNumber);

impl FrequencyValue {
    pub fn value(&self) -> &AlgebraicNumber {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }
}

/// Right Perron eigenvector of the collared matrix, normalized so that
/// `sum_c freq(c) * length(center(c)) = 1`.
pub fn collared_frequencies(bs: &BlockSystem, pd: &PerronData) -> Result<Vec<AlgebraicNumber>> {
    let n = bs.len();
    let k = &pd.field;
    let m = bs.matrix();
    let rows: Vec<Vec<AlgebraicNumber>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let e = AlgebraicNumber::from_rational(
                        k,
                        BigRational::from_integer(m.get(i, j).clone()),
                    );
                    if i == j {
                        &e - &pd.lambda
                    } else {
                        e
                    }
                })
                .collect()
        })
        .collect();
    let mut ns = nullspace(&rows, n, &AlgebraicNumber::zero(k));
    if ns.len() != 1 {
        return Err(Error::Internal(format!(
            "stretching factor has a {}-dimensional eigenspace on the collared matrix",
            ns.len()
        )));
    }
    let v = ns.pop().expect("one vector");
    let total = (0..n).fold(AlgebraicNumber::zero(k), |acc, c| {
        &acc + &(&v[c] * &pd.lengths[bs.center(c) as usize])
    });
    let inv = total.inv()?;
    let out: Vec<AlgebraicNumber> = v.iter().map(|x| x * &inv).collect();
    if !out.iter().all(AlgebraicNumber::is_positive) {
        return Err(Error::Internal(
            "collared frequencies are not positive".into(),
        ));
    }
    Ok(out)
}

/// Collared frequencies cached for repeated patch queries at one radius.
#[derive(Clone, Debug)]
pub struct FrequencyTable {
    bs: BlockSystem,
    pd: PerronData,
    freqs: Vec<AlgebraicNumber>,
}

impl FrequencyTable {
    pub fn new(s: &Substitution, radius: usize) -> Result<Self> {
        let pd = s.perron_data()?;
        let bs = collar(s, radius)?;
        Self::from_parts(bs, pd)
    }

    pub fn from_parts(bs: BlockSystem, pd: PerronData) -> Result<Self> {
        let freqs = collared_frequencies(&bs, &pd)?;
        Ok(FrequencyTable { bs, pd, freqs })
    }

    pub fn block_system(&self) -> &BlockSystem {
        &self.bs
    }

    pub fn perron(&self) -> &PerronData {
        &self.pd
    }

    pub fn collared(&self) -> &[AlgebraicNumber] {
        &self.freqs
    }

    pub fn frequency(&self, p: &[Letter]) -> Result<FrequencyValue> {
        if p.is_empty() {
            return Err(Error::EmptyPatch);
        }
        if self.bs.radius() < p.len() {
            return Err(Error::CollarTooSmall {
                radius: self.bs.radius(),
                need: p.len(),
            });
        }
        let counts = base_counts(p, &self.bs)?;
        let k = &self.pd.field;
        let f = counts
            .iter()
            .zip(&self.freqs)
            .filter(|(c, _)| !c.is_zero())
            .fold(AlgebraicNumber::zero(k), |acc, (c, x)| {
                &acc + &x.scale(&BigRational::from_integer(c.clone()))
            });
        Ok(FrequencyValue(f))
    }

    /// `sum c_P f(P)`.
    pub fn trace(&self, combination: &[(BigRational, Word)]) -> Result<AlgebraicNumber> {
        let mut acc = AlgebraicNumber::zero(&self.pd.field);
        for (c, p) in combination {
            acc = &acc + &self.frequency(p)?.0.scale(c);
        }
        Ok(acc)
    }

    /// Trace of a class given in eventual-image coordinates of `pres`, which
    /// must be built on the same collared alphabet.
    pub fn trace_class(
        &self,
        pres: &CohomologyPresentation,
        coords: &[BigRational],
    ) -> Result<AlgebraicNumber> {
        if pres.block_system.radius() != self.bs.radius() {
            return Err(Error::Shape(format!(
                "presentation radius {} differs from frequency radius {}",
                pres.block_system.radius(),
                self.bs.radius()
            )));
        }
        let h = pres.lift(coords);
        let k = &self.pd.field;
        Ok(pres
            .graph
            .non_tree_edges()
            .iter()
            .zip(&h)
            .fold(AlgebraicNumber::zero(k), |acc, (&e, x)| {
                &acc + &self.freqs[e].scale(x)
            }))
    }
}

/// Frequency of `p` from a freshly collared alphabet.
pub fn patch_frequency(p: &[Letter], bs: &BlockSystem, pd: &PerronData) -> Result<FrequencyValue> {
    FrequencyTable::from_parts(bs.clone(), pd.clone())?.frequency(p)
}

/// `f(P) = u_P(λ) / (L·D·q'(λ)·|q₀|ⁿ)` with `u_P` integral and `n` minimal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrequencyForm {
    pub u_p: IntPoly,
    pub n: u32,
    pub l: AlgebraicNumber,
    pub d: BigInt,
    pub qprime_at_lambda: AlgebraicNumber,
    /// Constant coefficient of `q`, with its sign.
    pub q0: BigInt,
}

impl FrequencyForm {
    /// `u_P(λ) / (L·D·q'(λ)·|q₀|ⁿ)`.
    pub fn reconstruct(&self) -> Result<AlgebraicNumber> {
        let k = self.l.field();
        let u = AlgebraicNumber::from_int_poly(k, &self.u_p);
        let q0n = num_traits::pow(self.q0.abs(), self.n as usize);
        let den =
            (&self.l * &self.qprime_at_lambda).scale(&BigRational::from_integer(&self.d * q0n));
        u.checked_div(&den)
    }

    /// `u_P` for the signed denominator `q₀ⁿ`.
    pub fn u_signed(&self) -> IntPoly {
        if self.q0.is_negative() && self.n % 2 == 1 {
            -&self.u_p
        } else {
            self.u_p.clone()
        }
    }
}

/// Default cap on the exponent search.
pub const DEFAULT_N_MAX: u32 = 64;

pub fn decompose_frequency(
    f: &FrequencyValue,
    l: &AlgebraicNumber,
    d: &BigInt,
    q: &IntPoly,
    n_max: u32,
) -> Result<FrequencyForm> {
    let k = f.0.field();
    let q0 = q.coeff(0);
    if q0.is_zero() {
        return Err(Error::Shape("q has zero constant term".into()));
    }
    let qprime = AlgebraicNumber::from_int_poly(k, &q.derivative());
    let mut g = (&(&f.0 * l) * &qprime).scale(&BigRational::from_integer(d.clone()));
    let step = BigRational::from_integer(q0.abs());
    for n in 0..=n_max {
        if g.coords().iter().all(BigRational::is_integer) {
            return Ok(FrequencyForm {
                u_p: IntPoly::new(g.coords().iter().map(|c| c.to_integer()).collect()),
                n,
                l: l.clone(),
                d: d.clone(),
                qprime_at_lambda: qprime,
                q0,
            });
        }
        g = g.scale(&step);
    }
    let denominators = g
        .coords()
        .iter()
        .map(|c| c.denom().to_string())
        .collect::<Vec<_>>()
        .join(", ");
    Err(Error::Decomposition {
        n_max,
        denominators,
    })
}

/// For each target, whether it is an integer combination of `basis`. The
/// basis may be linearly dependent over the rationals.
pub fn zspan_check(targets: &[FrequencyValue], basis: &[FrequencyValue]) -> Result<Vec<bool>> {
    let all: Vec<&AlgebraicNumber> = basis.iter().chain(targets).map(|f| &f.0).collect();
    if let Some(first) = all.first() {
        if all.iter().any(|x| x.checked_add(first).is_err()) {
            return Err(Error::MixedFields);
        }
    }
    let den = all
        .iter()
        .flat_map(|x| x.coords())
        .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let to_int = |x: &AlgebraicNumber| -> Vec<BigInt> {
        x.coords()
            .iter()
            .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
            .collect()
    };
    let gens: Vec<Vec<BigInt>> = basis.iter().map(|b| to_int(&b.0)).collect();
    Ok(targets
        .iter()
        .map(|t| integer_combination(&gens, &to_int(&t.0)).is_some())
        .collect())
}

/// Settings for the convergence harness.
#[derive(Clone, Debug)]
pub struct ConvergenceConfig {
    /// Window sizes in natural length.
    pub sizes: Vec<f64>,
    pub samples_per_size: usize,
    pub seed: u64,
    pub mode: ExecMode,
    /// Dimension used in the theoretical exponent.
    pub dim: u32,
}

/// Minimum number of window sizes for a fit.
pub const MIN_SCALES: usize = 8;

/// Default seed for all sampling.
pub const DEFAULT_SEED: u64 = 0x5EED_7111_0001;

impl ConvergenceConfig {
    /// `count` sizes spaced evenly in log scale over `[lo, hi]`.
    pub fn log_sizes(lo: f64, hi: f64, count: usize) -> Vec<f64> {
        if count < 2 {
            return vec![lo; count];
        }
        let (a, b) = (lo.ln(), hi.ln());
        (0..count)
            .map(|i| match i {
                0 => lo,
                _ if i == count - 1 => hi,
                _ => (a + (b - a) * i as f64 / (count - 1) as f64).exp(),
            })
            .collect()
    }
}

impl Default for ConvergenceConfig {
    fn default() -> Self {
        ConvergenceConfig {
            sizes: Self::log_sizes(10.0, 1e6, 11),
            samples_per_size: 2000,
            seed: DEFAULT_SEED,
            mode: ExecMode::default(),
            dim: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScaleRow {
    pub size: f64,
    pub sup_deviation: f64,
    pub samples: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    pub patch: Word,
    pub theoretical_gamma: f64,
    /// Negated least-squares slope of log deviation against log size; absent
    /// when fewer than two sizes show a nonzero deviation.
    pub fitted_exponent: Option<f64>,
    /// Smallest `K` with `deviation <= K V^{-gamma}` over every sample.
    pub envelope_constant: f64,
    pub rows: Vec<ScaleRow>,
    pub seed: u64,
    pub word_len: usize,
}

/// Sup deviation of the empirical frequency of `p` from `f` over random
/// windows at each size, with a log-log fit of the decay.
pub fn convergence_experiment(
    p: &[Letter],
    s: &Substitution,
    f: &FrequencyValue,
    cfg: &ConvergenceConfig,
) -> Result<ConvergenceReport> {
    if p.is_empty() {
        return Err(Error::EmptyPatch);
    }
    if cfg.sizes.len() < MIN_SCALES {
        return Err(Error::TooFewScales {
            need: MIN_SCALES,
            got: cfg.sizes.len(),
        });
    }
    if cfg.sizes.iter().any(|v| !v.is_finite() || *v <= 0.0) {
        return Err(Error::Shape("window sizes must be positive".into()));
    }
    let pd = s.perron_data()?;
    let gamma = pd.gamma(cfg.dim);
    let lens: Vec<f64> = pd.lengths.iter().map(AlgebraicNumber::to_f64).collect();
    let min_len = lens.iter().cloned().fold(f64::INFINITY, f64::min);
    let vmax = cfg.sizes.iter().cloned().fold(0.0, f64::max);
    let need = ((10.0 * vmax / min_len).ceil() as usize).max(10 * p.len());
    let word = long_word(s, need)?;
    let n = word.len();

    let mut cum = Vec::with_capacity(n + 1);
    cum.push(0.0f64);
    for &l in word.iter() {
        let last = *cum.last().expect("nonempty");
        cum.push(last + lens[l as usize]);
    }
    let mut occ = Vec::with_capacity(n + 1);
    occ.push(0u32);
    for i in 0..n {
        let hit = i + p.len() <= n && word[i..i + p.len()] == *p;
        occ.push(occ[i] + u32::from(hit));
    }
    let target = f.to_f64();
    let total = cum[n];
    let rows: Vec<(ScaleRow, f64)> = cfg.mode.map_range(cfg.sizes.len(), |i| {
        let v = cfg.sizes[i];
        let mut rng = ChaCha8Rng::seed_from_u64(
            cfg.seed
                .wrapping_add((i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)),
        );
        // last start with at least v of natural length after it
        let last_start = cum.partition_point(|&x| x <= total - v).saturating_sub(1);
        let mut sup = 0.0f64;
        let mut k = 0.0f64;
        for _ in 0..cfg.samples_per_size {
            let a = rng.gen_range(0..=last_start);
            let b = cum.partition_point(|&x| x < cum[a] + v).min(n);
            let covered = cum[b] - cum[a];
            let hits = if b >= a + p.len() {
                occ[b + 1 - p.len()] - occ[a]
            } else {
                0
            };
            let dev = (f64::from(hits) / covered - target).abs();
            sup = sup.max(dev);
            k = k.max(dev * covered.powf(gamma));
        }
        (
            ScaleRow {
                size: v,
                sup_deviation: sup,
                samples: cfg.samples_per_size,
            },
            k,
        )
    });
    let envelope_constant = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    let rows: Vec<ScaleRow> = rows.into_iter().map(|r| r.0).collect();
    Ok(ConvergenceReport {
        patch: Word::from(p),
        theoretical_gamma: gamma,
        fitted_exponent: fit_exponent(&rows),
        envelope_constant,
        rows,
        seed: cfg.seed,
        word_len: n,
    })
}

/// `phi^n(l)` for the least `n` reaching `len` letters, from a letter whose
/// image starts with itself when one exists.
pub fn long_word(s: &Substitution, len: usize) -> Result<Word> {
    let seed = (0..s.size() as Letter)
        .find(|&l| s.image(l)[0] == l)
        .unwrap_or(0);
    let mut n = 0;
    loop {
        let w = iterate(s, seed, n)?;
        if w.len() >= len {
            return Ok(w);
        }
        if n > 0 && w.len() <= 1 {
            return Err(Error::Internal("substitution does not grow".into()));
        }
        n += 1;
    }
}

fn fit_exponent(rows: &[ScaleRow]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.sup_deviation > 0.0)
        .map(|r| (r.size.ln(), r.sup_deviation.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / m, sy / m);
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    (sxx > 0.0).then(|| -sxy / sxx)
}
