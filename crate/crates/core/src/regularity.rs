//! Control patches, exact regularity coefficients and their window-level
//! certificates.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cohomology::{patch_class, CohomologyPresentation};
use crate::error::{Error, Result};
use crate::exactalg::{rank, solve, AlgebraicNumber, RatMatrix, RatVector};
use crate::frequency::{long_word, DEFAULT_SEED};
use crate::language::{
    count_anchored, factors, factors_up_to, iterate_word, min_order, Letter, Word,
    DEFAULT_LENGTH_GUARD,
};
use crate::par::ExecMode;
use crate::substitution::{PerronData, Substitution};

/// Return words of one letter: words `w` starting with the letter such that
/// `w` followed by that letter is legal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReturnWordReport {
    pub letter: Letter,
    pub return_words: Vec<Word>,
    pub return_lengths: Vec<AlgebraicNumber>,
    /// Least return length over every letter.
    pub l_default: Option<AlgebraicNumber>,
}

fn natural_length(w: &[Letter], pd: &PerronData) -> AlgebraicNumber {
    w.iter().fold(AlgebraicNumber::zero(&pd.field), |acc, &l| {
        &acc + &pd.lengths[l as usize]
    })
}

fn returns_by_len(s: &Substitution, max_len: usize) -> Vec<Word> {
    let sets = factors_up_to(s, max_len + 1);
    sets.iter()
        .skip(2)
        .flat_map(|set| set.iter())
        .filter(|u| u[0] == u[u.len() - 1])
        .map(|u| Word::from(&u[..u.len() - 1]))
        .collect()
}

pub fn return_words(s: &Substitution, letter: Letter, max_len: usize) -> Result<ReturnWordReport> {
    let pd = s.perron_data()?;
    let words: Vec<Word> = returns_by_len(s, max_len)
        .into_iter()
        .filter(|w| w[0] == letter)
        .collect();
    let return_lengths = words.iter().map(|w| natural_length(w, &pd)).collect();
    Ok(ReturnWordReport {
        letter,
        return_words: words,
        return_lengths,
        l_default: default_return_length(s, &pd).ok(),
    })
}

/// Least natural length of a return word of any letter.
pub fn default_return_length(s: &Substitution, pd: &PerronData) -> Result<AlgebraicNumber> {
    let min_tile = pd
        .lengths
        .iter()
        .map(AlgebraicNumber::to_f64)
        .fold(f64::INFINITY, f64::min);
    let mut best: Option<AlgebraicNumber> = None;
    let mut n = 1usize;
    loop {
        if let Some(b) = &best {
            // every return word of n letters has length at least n * min_tile
            if n as f64 * min_tile > b.to_f64() + 1e-9 {
                break;
            }
        }
        if n > 4096 {
            return Err(Error::Internal("no return word found".into()));
        }
        for u in factors(s, n + 1) {
            if u[0] == u[n] {
                let len = natural_length(&u[..n], pd);
                let better = match &best {
                    None => true,
                    Some(b) => len.checked_cmp(b)?.is_lt(),
                };
                if better {
                    best = Some(len);
                }
            }
        }
        n += 1;
    }
    best.ok_or_else(|| Error::Internal("no return word found".into()))
}

/// `k` patches whose classes span the direct limit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ControlPatchSet {
    pub patches: Vec<Word>,
    /// Column `i` holds the class of `patches[i]`.
    pub classes: RatMatrix,
    /// Number of candidate patches examined by the search.
    pub scanned: usize,
    pub max_len: usize,
}

/// Greedy scan over legal patches ordered by length, then lexicographically.
pub fn find_control_patches(
    pres: &CohomologyPresentation,
    max_len: usize,
) -> Result<ControlPatchSet> {
    let limit = max_len.min(pres.block_system.radius());
    let k = pres.k;
    let mut kept: Vec<(Word, RatVector)> = Vec::new();
    let mut scanned = 0;
    let sets = factors_up_to(&pres.substitution, limit);
    'search: for set in sets.iter().skip(1) {
        for w in set {
            if kept.len() == k {
                break 'search;
            }
            scanned += 1;
            let c = patch_class(w, pres)?.coords;
            let mut cols: Vec<RatVector> = kept.iter().map(|x| x.1.clone()).collect();
            cols.push(c.clone());
            if rank(&transpose(&cols, k)) == cols.len() {
                kept.push((w.clone(), c));
            }
        }
    }
    if kept.len() < k {
        return Err(Error::ControlSearch {
            achieved: kept.len(),
            k,
            max_len: limit,
        });
    }
    Ok(assemble(kept, k, scanned, limit))
}

/// Use the given patches as controls; they must have independent classes.
pub fn with_controls(pres: &CohomologyPresentation, patches: &[Word]) -> Result<ControlPatchSet> {
    let k = pres.k;
    if patches.len() != k {
        return Err(Error::Singular(format!(
            "{} controls for rank {k}",
            patches.len()
        )));
    }
    let kept = patches
        .iter()
        .map(|w| Ok((w.clone(), patch_class(w, pres)?.coords)))
        .collect::<Result<Vec<_>>>()?;
    let cols: Vec<RatVector> = kept.iter().map(|x| x.1.clone()).collect();
    if rank(&transpose(&cols, k)) < k {
        return Err(Error::Singular("control classes are dependent".into()));
    }
    let max_len = patches.iter().map(|w| w.len()).max().unwrap_or(0);
    Ok(assemble(kept, k, patches.len(), max_len))
}

fn transpose(cols: &[RatVector], k: usize) -> Vec<Vec<BigRational>> {
    (0..k)
        .map(|i| cols.iter().map(|c| c[i].clone()).collect())
        .collect()
}

fn assemble(
    kept: Vec<(Word, RatVector)>,
    k: usize,
    scanned: usize,
    max_len: usize,
) -> ControlPatchSet {
    let mut classes = RatMatrix::zeros(k, k);
    for (j, (_, c)) in kept.iter().enumerate() {
        for (i, x) in c.iter().enumerate() {
            classes.set(i, j, x.clone());
        }
    }
    ControlPatchSet {
        patches: kept.into_iter().map(|x| x.0).collect(),
        classes,
        scanned,
        max_len,
    }
}

/// The unique `c` with `[chi_P] = sum c_i [chi_{P_i}]`.
pub fn solve_coefficients(
    p: &[Letter],
    controls: &ControlPatchSet,
    pres: &CohomologyPresentation,
) -> Result<RatVector> {
    let target = patch_class(p, pres)?.coords;
    solve(&controls.classes.to_rows(), &target, &BigRational::zero())
        .filter(|_| controls.classes.rank() == pres.k)
        .ok_or_else(|| Error::Singular("control classes do not span".into()))
}

/// Sampling parameters for [`verify_certificate`].
#[derive(Clone, Debug)]
pub struct SampleConfig {
    pub samples: usize,
    /// Minimum letters in the sampled word.
    pub min_word_len: usize,
    /// Longest window in letters.
    pub max_window: usize,
    pub seed: u64,
    pub mode: ExecMode,
    /// First boundary radius; defaults to the patch's collar radius.
    pub rho_start: Option<usize>,
    /// Number of doublings tried after `rho_start`.
    pub rho_doublings: u32,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            samples: 10_000,
            min_word_len: 1_000_000,
            max_window: 100_000,
            seed: DEFAULT_SEED,
            mode: ExecMode::default(),
            rho_start: None,
            rho_doublings: 2,
        }
    }
}

/// Outcome of sampling the counting law for one patch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularityCertificate {
    pub patch: Word,
    pub controls: Vec<Word>,
    pub coefficients: RatVector,
    /// Boundary radius at which the error became a function of the collars.
    pub collar_radius: usize,
    /// Largest `|e|` over the sampled windows.
    pub error_bound: BigRational,
    /// Spread of the boundary potential: bounds `|e|` for every window.
    pub potential_spread: BigRational,
    pub boundary_map_checked: bool,
    pub windows: usize,
    pub distinct_collar_pairs: usize,
    /// Radii tried before success, with the reason each failed.
    pub rejected_radii: Vec<usize>,
}

/// Samples windows of `phi^N(seed)` and checks that
/// `e = count_P - sum c_i count_{P_i}` is a difference of a boundary
/// potential, i.e. bounded and determined by the two boundary collars.
pub fn verify_certificate(
    p: &[Letter],
    controls: &[Word],
    c: &[BigRational],
    s: &Substitution,
    cfg: &SampleConfig,
) -> Result<RegularityCertificate> {
    if p.is_empty() || controls.iter().any(|w| w.is_empty()) {
        return Err(Error::EmptyPatch);
    }
    if controls.len() != c.len() {
        return Err(Error::Shape(format!(
            "{} controls, {} coefficients",
            controls.len(),
            c.len()
        )));
    }
    let rho0 = cfg.rho_start.unwrap_or(p.len().max(1));
    let radii: Vec<usize> = (0..=cfg.rho_doublings).map(|i| rho0 << i).collect();
    let rho_max = *radii.last().expect("nonempty");
    let min_window = 2 * p.len();
    let max_window = cfg.max_window.max(min_window);
    let word = long_word(s, cfg.min_word_len.max(max_window + 2 * rho_max + 1))?;
    let n = word.len();

    let den = c.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let to_i128 = |x: BigInt| {
        x.to_i128()
            .ok_or_else(|| Error::Internal("coefficient overflow".into()))
    };
    let den_i = to_i128(den.clone())?;
    let weights: Vec<i128> = c
        .iter()
        .map(|x| to_i128((x * BigRational::from_integer(den.clone())).to_integer()))
        .collect::<Result<_>>()?;
    let prefix = |q: &[Letter]| -> Vec<u32> {
        let mut v = Vec::with_capacity(n + 1);
        v.push(0u32);
        for i in 0..n {
            let hit = i + q.len() <= n && word[i..i + q.len()] == *q;
            v.push(v[i] + u32::from(hit));
        }
        v
    };
    let main = prefix(p);
    let ctl: Vec<Vec<u32>> = controls.iter().map(|w| prefix(w)).collect();
    let count = |pre: &[u32], len: usize, a: usize, b: usize| -> i128 {
        if b >= a + len {
            i128::from(pre[b + 1 - len] - pre[a])
        } else {
            0
        }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (lo, hi) = ((min_window as f64).ln(), (max_window as f64).ln());
    let windows: Vec<(usize, usize)> = (0..cfg.samples)
        .map(|_| {
            let len = (rng.gen_range(lo..=hi).exp().round() as usize).clamp(min_window, max_window);
            let a = rng.gen_range(rho_max..=n - rho_max - len);
            (a, a + len)
        })
        .collect();
    let errors: Vec<i128> = cfg.mode.map_slice(&windows, |&(a, b)| {
        let mut e = den_i * count(&main, p.len(), a, b);
        for (i, w) in controls.iter().enumerate() {
            e -= weights[i] * count(&ctl[i], w.len(), a, b);
        }
        e
    });

    let scale = BigRational::new(BigInt::one(), den.clone());
    let mut rejected = Vec::new();
    for &rho in &radii {
        if let Some((spread, pairs)) = boundary_potential(&word, &windows, &errors, rho) {
            let max_e = errors.iter().map(|e| e.abs()).max().unwrap_or(0);
            if max_e > spread {
                return Err(Error::Regularity(format!(
                    "error {max_e} exceeds the boundary potential spread {spread}"
                )));
            }
            return Ok(RegularityCertificate {
                patch: Word::from(p),
                controls: controls.to_vec(),
                coefficients: c.to_vec(),
                collar_radius: rho,
                error_bound: BigRational::from_integer(max_e.into()) * &scale,
                potential_spread: BigRational::from_integer(spread.into()) * &scale,
                boundary_map_checked: true,
                windows: windows.len(),
                distinct_collar_pairs: pairs,
                rejected_radii: rejected,
            });
        }
        rejected.push(rho);
    }
    Err(Error::Regularity(format!(
        "error is not determined by boundary collars of radius up to {rho_max}"
    )))
}

/// Fit `e = g_R(right cut) - g_L(left cut)` with `g_L`, `g_R` functions of
/// the `2 rho` letters around a cut. The two differ because occurrences that
/// cross the right end are dropped. Returns the spread of the potentials
/// within components and the number of distinct collar pairs, or `None` if no
/// such potentials exist.
fn boundary_potential(
    word: &[Letter],
    windows: &[(usize, usize)],
    errors: &[i128],
    rho: usize,
) -> Option<(i128, usize)> {
    let mut ids: HashMap<(bool, &[Letter]), usize> = HashMap::new();
    let mut node = |x: usize, right: bool| -> usize {
        let key = (right, &word[x - rho..x + rho]);
        let next = ids.len();
        *ids.entry(key).or_insert(next)
    };
    let mut edges = Vec::with_capacity(windows.len());
    let mut pairs: HashMap<(usize, usize), i128> = HashMap::new();
    for (&(a, b), &e) in windows.iter().zip(errors) {
        let (l, r) = (node(a, false), node(b, true));
        if *pairs.entry((l, r)).or_insert(e) != e {
            return None;
        }
        edges.push((l, r, e));
    }
    let mut uf = WeightedUnionFind::new(ids.len());
    for &(l, r, e) in &edges {
        if !uf.relate(l, r, e) {
            return None;
        }
    }
    Some((uf.spread(), pairs.len()))
}

/// Union-find storing `g(x) - g(root)` for each element.
struct WeightedUnionFind {
    parent: Vec<usize>,
    offset: Vec<i128>,
}

impl WeightedUnionFind {
    fn new(n: usize) -> Self {
        WeightedUnionFind {
            parent: (0..n).collect(),
            offset: vec![0; n],
        }
    }

    fn find(&mut self, x: usize) -> (usize, i128) {
        let p = self.parent[x];
        if p == x {
            return (x, 0);
        }
        let (r, o) = self.find(p);
        self.parent[x] = r;
        self.offset[x] += o;
        (r, self.offset[x])
    }

    /// Record `g(r) - g(l) = e`; false on contradiction.
    fn relate(&mut self, l: usize, r: usize, e: i128) -> bool {
        let (rl, ol) = self.find(l);
        let (rr, or) = self.find(r);
        if rl == rr {
            return or - ol == e;
        }
        // g(rr) - g(rl) = e + ol - or
        self.parent[rr] = rl;
        self.offset[rr] = e + ol - or;
        true
    }

    fn spread(&mut self) -> i128 {
        let mut range: HashMap<usize, (i128, i128)> = HashMap::new();
        for x in 0..self.parent.len() {
            let (r, o) = self.find(x);
            let e = range.entry(r).or_insert((o, o));
            e.0 = e.0.min(o);
            e.1 = e.1.max(o);
        }
        range.values().map(|(lo, hi)| hi - lo).max().unwrap_or(0)
    }
}

/// Which supertile regions [`exact_on_supertiles`] examines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SupertileContexts {
    /// Every legal triple `l1 l2 l3`; requires a proper substitution.
    Proper,
    /// User-supplied triples `l1 l2 l3`.
    Triples(Vec<[Letter; 3]>),
    /// `phi^n(w)` followed by `phi^n(w[0])` for return words `w` up to a length.
    ReturnWords { max_len: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupertileReport {
    pub regions: usize,
    pub orders: Vec<u32>,
}

/// Least `n` at which all order-`n` supertiles share a prefix and a suffix
/// of `len` letters, so every supertile boundary looks the same to a patch.
fn shared_border_order(s: &Substitution, len: usize) -> Result<u32> {
    let letters: Vec<Letter> = (0..s.size() as Letter).collect();
    let mut heads: Vec<Vec<Letter>> = letters.iter().map(|&l| vec![l]).collect();
    let mut tails = heads.clone();
    for n in 0..=64 {
        let agree = |ws: &[Vec<Letter>]| {
            ws.iter()
                .all(|w| w.len() >= len && w[..len] == ws[0][..len])
        };
        let rev: Vec<Vec<Letter>> = tails
            .iter()
            .map(|w| w.iter().rev().copied().collect())
            .collect();
        if agree(&heads) && agree(&rev) {
            return Ok(n);
        }
        for w in heads.iter_mut() {
            *w = w
                .iter()
                .flat_map(|&l| s.image(l).iter().copied())
                .take(len)
                .collect();
        }
        for w in tails.iter_mut() {
            let img: Vec<Letter> = w.iter().flat_map(|&l| s.image(l).iter().copied()).collect();
            *w = img[img.len().saturating_sub(len)..].to_vec();
        }
    }
    Err(Error::Regularity(format!(
        "supertiles do not share {len}-letter borders by order 64"
    )))
}

/// Checks `count_P = sum c_i count_{P_i}` exactly on context-embedded
/// supertiles for every order in `orders` that is at least `n0`. For
/// proper substitutions `n0` also waits until all supertiles share borders
/// as long as the longest patch minus one.
pub fn exact_on_supertiles(
    p: &[Letter],
    controls: &[Word],
    c: &[BigRational],
    s: &Substitution,
    contexts: &SupertileContexts,
    orders: std::ops::RangeInclusive<u32>,
) -> Result<SupertileReport> {
    let longest = controls
        .iter()
        .map(|w| w.len())
        .chain([p.len()])
        .max()
        .unwrap_or(1);
    let mut n0 = min_order(s, longest);
    if *contexts == SupertileContexts::Proper {
        n0 = n0.max(shared_border_order(s, longest - 1)?);
    }
    let orders: Vec<u32> = orders.filter(|&n| n >= n0).collect();
    // (region word, right-context word) pairs at order zero
    let bases: Vec<(Word, Word)> = match contexts {
        SupertileContexts::Proper => {
            if !s.is_proper() {
                return Err(Error::Regularity("substitution is not proper".into()));
            }
            factors(s, 3)
                .into_iter()
                .map(|t| (Word::letter(t[1]), Word::letter(t[2])))
                .collect()
        }
        SupertileContexts::Triples(ts) => ts
            .iter()
            .map(|t| (Word::letter(t[1]), Word::letter(t[2])))
            .collect(),
        SupertileContexts::ReturnWords { max_len } => returns_by_len(s, *max_len)
            .into_iter()
            .map(|w| {
                let first = Word::letter(w[0]);
                (w, first)
            })
            .collect(),
    };
    let mut bases = bases;
    bases.sort();
    bases.dedup();
    for &n in &orders {
        for (region, ctx) in &bases {
            let big = iterate_word(s, region, n, DEFAULT_LENGTH_GUARD)?;
            let right = iterate_word(s, ctx, n, DEFAULT_LENGTH_GUARD)?;
            let mut e = BigRational::from_integer(count_anchored(p, &big, &right)?.into());
            for (w, ci) in controls.iter().zip(c) {
                e -= ci * BigRational::from_integer(count_anchored(w, &big, &right)?.into());
            }
            if !e.is_zero() {
                return Err(Error::Regularity(format!(
                    "e = {e} on order-{n} supertile of {:?} followed by {:?}",
                    s.render(region),
                    s.render(ctx)
                )));
            }
        }
    }
    Ok(SupertileReport {
        regions: bases.len(),
        orders,
    })
}
