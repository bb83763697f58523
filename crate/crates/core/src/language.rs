//! Words, legal factors, collared alphabets and occurrence counting.

use std::borrow::Borrow;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::Deref;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactalg::IntMatrix;
use crate::substitution::Substitution;

/// Index of a letter in the alphabet.
pub type Letter = u16;

/// Default cap on materialized word length.
pub const DEFAULT_LENGTH_GUARD: usize = 100_000_000;

/// A finite word over the alphabet, as letter indices.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    pub fn into_inner(self) -> Vec<Letter> {
        self.0
    }

    pub fn concat(&self, other: &[Letter]) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(other);
        Word(v)
    }
}

impl Deref for Word {
    type Target = [Letter];
    fn deref(&self) -> &[Letter] {
        &self.0
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

impl From<&[Letter]> for Word {
    fn from(v: &[Letter]) -> Self {
        Word(v.to_vec())
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl Borrow<[Letter]> for Word {
    fn borrow(&self) -> &[Letter] {
        &self.0
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word{:?}", self.0)
    }
}

/// Letter counts of `phi^n(l)` for every letter, saturating.
pub fn image_lengths(s: &Substitution, n: u32) -> Vec<u128> {
    let mut v = vec![1u128; s.size()];
    for _ in 0..n {
        v = (0..s.size())
            .map(|l| {
                s.image(l as Letter)
                    .iter()
                    .fold(0u128, |acc, &y| acc.saturating_add(v[y as usize]))
            })
            .collect();
    }
    v
}

/// `phi(w)`.
pub fn apply(s: &Substitution, w: &[Letter]) -> Word {
    let mut out = Vec::with_capacity(w.len() * 2);
    for &l in w {
        out.extend_from_slice(s.image(l));
    }
    Word(out)
}

/// `phi^n(w)` subject to a length guard.
pub fn iterate_word(s: &Substitution, w: &[Letter], n: u32, guard: usize) -> Result<Word> {
    let lens = image_lengths(s, n);
    let total = w
        .iter()
        .fold(0u128, |acc, &l| acc.saturating_add(lens[l as usize]));
    if total > guard as u128 {
        return Err(Error::LengthGuard { len: total, guard });
    }
    let mut cur = Word::from(w);
    for _ in 0..n {
        cur = apply(s, &cur);
    }
    Ok(cur)
}

/// `phi^n(l)` with the default length guard.
pub fn iterate(s: &Substitution, l: Letter, n: u32) -> Result<Word> {
    iterate_word(s, &[l], n, DEFAULT_LENGTH_GUARD)
}

/// Legal words of every length `1..=m`, indexed by length (index 0 is empty).
///
/// Closure argument: a legal word `w` with `|w| >= 2` lies inside `phi(v)`
/// for a legal `v` whose interior letters map inside `w`, so
/// `|v| <= (|w| - 2) / min_l |phi(l)| + 2`. Substituting the known words up
/// to that length and re-extracting subwords therefore reaches all of them.
pub fn factors_up_to(s: &Substitution, m: usize) -> Vec<BTreeSet<Word>> {
    let mut by_len: Vec<BTreeSet<Word>> = vec![BTreeSet::new(); m + 1];
    if m == 0 {
        return by_len;
    }
    let shortest = s.rules().iter().map(|r| r.len()).min().unwrap_or(1).max(1);
    let cover = if m < 2 {
        1
    } else {
        m.min((m - 2) / shortest + 2)
    };
    let mut frontier: Vec<Word> = (0..s.size() as Letter).map(Word::letter).collect();
    for w in &frontier {
        by_len[1].insert(w.clone());
    }
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for u in &frontier {
            let img = apply(s, u);
            for len in 1..=m.min(img.len()) {
                for win in img.windows(len) {
                    let w = Word::from(win);
                    if !by_len[len].contains(&w) {
                        by_len[len].insert(w.clone());
                        if len <= cover {
                            next.push(w);
                        }
                    }
                }
            }
        }
        frontier = next;
    }
    by_len
}

/// Legal words of length exactly `m`.
pub fn factors(s: &Substitution, m: usize) -> BTreeSet<Word> {
    factors_up_to(s, m).pop().unwrap_or_default()
}

pub fn is_legal(s: &Substitution, w: &[Letter]) -> bool {
    !w.is_empty() && factors(s, w.len()).contains(&Word::from(w))
}

/// Occurrences of `p` lying entirely inside `w`.
pub fn count_occurrences(p: &[Letter], w: &[Letter]) -> Result<u64> {
    if p.is_empty() {
        return Err(Error::EmptyPatch);
    }
    if p.len() > w.len() {
        return Ok(0);
    }
    Ok(w.windows(p.len()).filter(|x| *x == p).count() as u64)
}

/// Occurrences of `p` whose first letter lies in `w`, read in `w` followed by
/// `right_context`.
pub fn count_anchored(p: &[Letter], w: &[Letter], right_context: &[Letter]) -> Result<u64> {
    if p.is_empty() {
        return Err(Error::EmptyPatch);
    }
    if right_context.len() + 1 < p.len() {
        return Err(Error::ContextTooShort {
            need: p.len() - 1,
            got: right_context.len(),
        });
    }
    let mut text = Vec::with_capacity(w.len() + p.len());
    text.extend_from_slice(w);
    text.extend_from_slice(&right_context[..p.len() - 1]);
    Ok(text
        .windows(p.len())
        .take(w.len())
        .filter(|x| *x == p)
        .count() as u64)
}

/// A letter with `m` letters of context on either side.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CollaredLetter {
    pub left: Word,
    pub center: Letter,
    pub right: Word,
}

impl CollaredLetter {
    pub fn from_window(w: &[Letter]) -> Self {
        let m = w.len() / 2;
        CollaredLetter {
            left: Word::from(&w[..m]),
            center: w[m],
            right: Word::from(&w[m + 1..]),
        }
    }

    pub fn window(&self) -> Word {
        let mut v = self.left.to_vec();
        v.push(self.center);
        v.extend_from_slice(&self.right);
        Word(v)
    }
}

/// Collared alphabet of radius `m` with its induced substitution.
#[derive(Clone, Debug)]
pub struct BlockSystem {
    radius: usize,
    windows: Vec<Word>,
    index: HashMap<Word, usize>,
    images: Vec<Vec<usize>>,
    matrix: IntMatrix,
    adjacencies: Vec<(usize, usize)>,
    single_cycle: bool,
}

impl BlockSystem {
    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.windows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.windows.is_empty()
    }

    /// The `(2m+1)`-letter window of collared letter `c`.
    pub fn window(&self, c: usize) -> &Word {
        &self.windows[c]
    }

    pub fn windows(&self) -> &[Word] {
        &self.windows
    }

    pub fn collared(&self, c: usize) -> CollaredLetter {
        CollaredLetter::from_window(&self.windows[c])
    }

    pub fn center(&self, c: usize) -> Letter {
        self.windows[c][self.radius]
    }

    pub fn index_of(&self, window: &[Letter]) -> Option<usize> {
        self.index.get(window).copied()
    }

    /// Induced image of collared letter `c`, as collared letters.
    pub fn image(&self, c: usize) -> &[usize] {
        &self.images[c]
    }

    /// `M_c[c'][c]` counts `c'` in the image of `c`.
    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// Set for degenerate (periodic) inputs whose collared letters form one
    /// cycle under the induced substitution.
    /// Pairs `(c, c')` whose windows overlap in a legal word of length `2m+2`.
    pub fn adjacencies(&self) -> &[(usize, usize)] {
        &self.adjacencies
    }

    pub fn is_single_cycle(&self) -> bool {
        self.single_cycle
    }
}

/// Collar a primitive substitution with radius `m >= 1`.
pub fn collar(s: &Substitution, m: usize) -> Result<BlockSystem> {
    if m == 0 {
        return Err(Error::CollarTooSmall { radius: 0, need: 1 });
    }
    if !s.is_primitive().primitive {
        return Err(Error::NonPrimitive);
    }
    let mut by_len = factors_up_to(s, 2 * m + 2);
    let pairs = by_len.pop().unwrap_or_default();
    let windows: Vec<Word> = by_len.pop().unwrap_or_default().into_iter().collect();
    let index: HashMap<Word, usize> = windows
        .iter()
        .enumerate()
        .map(|(i, w)| (w.clone(), i))
        .collect();
    let n = windows.len();
    let mut images = Vec::with_capacity(n);
    let mut matrix = IntMatrix::zeros(n, n);
    for (c, w) in windows.iter().enumerate() {
        let left = apply(s, &w[..m]);
        let center = s.image(w[m]);
        let big = apply(s, w);
        let start = left.len();
        let mut img = Vec::with_capacity(center.len());
        for p in start..start + center.len() {
            let nw = &big[p - m..p + m + 1];
            let j = *index
                .get(nw)
                .ok_or_else(|| Error::Internal("collared image window is not legal".into()))?;
            img.push(j);
            let v = matrix.get(j, c) + BigInt::from(1);
            matrix.set(j, c, v);
        }
        images.push(img);
    }
    let adjacencies = pairs
        .iter()
        .map(|u| match (index.get(&u[..2 * m + 1]), index.get(&u[1..])) {
            (Some(&a), Some(&b)) => Ok((a, b)),
            _ => Err(Error::Internal("adjacent window is not legal".into())),
        })
        .collect::<Result<Vec<_>>>()?;
    let single_cycle = is_shift_cycle(&windows, m);
    Ok(BlockSystem {
        radius: m,
        windows,
        index,
        images,
        matrix,
        adjacencies,
        single_cycle,
    })
}

// Every window has a unique legal successor: the collared letters form one
// cycle under the shift, which is what a periodic tiling looks like.
fn is_shift_cycle(windows: &[Word], m: usize) -> bool {
    let mut succ: HashMap<&[Letter], usize> = HashMap::new();
    for w in windows {
        *succ.entry(&w[..2 * m]).or_default() += 1;
    }
    !windows.is_empty() && succ.values().all(|&k| k == 1)
}

/// Smallest `n <= max_n` such that, for every letter, all its legal 3-letter
/// contexts `l x r` give `phi^n(l)` the same last letter and `phi^n(r)` the
/// same first letter.
pub fn forces_border(s: &Substitution, max_n: u32) -> Option<u32> {
    let blocks: Vec<Word> = factors(s, 3).into_iter().collect();
    let mut last = (0..s.size() as Letter).collect::<Vec<_>>();
    let mut first = last.clone();
    for n in 0..=max_n {
        let ok = (0..s.size() as Letter).all(|x| {
            let ctx: Vec<&Word> = blocks.iter().filter(|b| b[1] == x).collect();
            ctx.windows(2).all(|p| {
                last[p[0][0] as usize] == last[p[1][0] as usize]
                    && first[p[0][2] as usize] == first[p[1][2] as usize]
            })
        });
        if ok {
            return Some(n);
        }
        last = (0..s.size())
            .map(|l| last[*s.image(l as Letter).last().unwrap() as usize])
            .collect();
        first = (0..s.size())
            .map(|l| first[s.image(l as Letter)[0] as usize])
            .collect();
    }
    None
}

/// Least `n` with `|phi^n(l)| >= len` for every letter.
pub fn min_order(s: &Substitution, len: usize) -> u32 {
    let mut n = 0;
    loop {
        if image_lengths(s, n).iter().all(|&x| x >= len as u128) {
            return n;
        }
        n += 1;
    }
}

/// Anchored counts of a patch on the order-`n` supertiles of every collared
/// letter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnchoredCountVector {
    pub patch: Word,
    pub order: u32,
    pub values: Vec<BigInt>,
}

/// Order-0 anchored counts: occurrences of `p` starting at the center of each
/// window, read inside the window.
pub fn base_counts(p: &[Letter], bs: &BlockSystem) -> Result<Vec<BigInt>> {
    if p.is_empty() {
        return Err(Error::EmptyPatch);
    }
    if bs.radius() + 1 < p.len() {
        return Err(Error::CollarTooSmall {
            radius: bs.radius(),
            need: p.len() - 1,
        });
    }
    let m = bs.radius();
    Ok(bs
        .windows()
        .iter()
        .map(|w| BigInt::from(u8::from(&w[m..m + p.len()] == p)))
        .collect())
}

/// One step of the supertile recursion `v_{n+1} = M_c^T v_n`.
pub fn push_counts(bs: &BlockSystem, v: &[BigInt]) -> Vec<BigInt> {
    (0..bs.len())
        .map(|c| {
            bs.image(c)
                .iter()
                .fold(BigInt::zero(), |acc, &j| acc + &v[j])
        })
        .collect()
}

/// Counts of `p` with first letter inside `phi^n(center(c))`, right context
/// `phi^n(right collar of c)`, for every collared letter `c`.
pub fn anchored_count_vector(
    s: &Substitution,
    p: &[Letter],
    bs: &BlockSystem,
    n: u32,
) -> Result<AnchoredCountVector> {
    if p.is_empty() {
        return Err(Error::EmptyPatch);
    }
    if bs.radius() < p.len() {
        return Err(Error::CollarTooSmall {
            radius: bs.radius(),
            need: p.len(),
        });
    }
    let n0 = min_order(s, p.len());
    if n < n0 {
        return Err(Error::OrderTooSmall { n, n0 });
    }
    let mut v = base_counts(p, bs)?;
    for _ in 0..n {
        v = push_counts(bs, &v);
    }
    Ok(AnchoredCountVector {
        patch: Word::from(p),
        order: n,
        values: v,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::substitution::parse_substitution;

    fn tm() -> Substitution {
        parse_substitution("a -> a b\nb -> b a").unwrap()
    }

    fn w(s: &Substitution, text: &str) -> Word {
        s.word(text).unwrap()
    }

    #[test]
    fn iterate_examples() {
        let s = tm();
        assert_eq!(iterate(&s, 0, 3).unwrap(), w(&s, "abbabaab"));
        assert_eq!(iterate(&s, 1, 3).unwrap(), w(&s, "baababba"));
        assert_eq!(iterate(&s, 0, 0).unwrap(), w(&s, "a"));
        assert!(matches!(
            iterate_word(&s, &[0], 30, 1000),
            Err(Error::LengthGuard { .. })
        ));
    }

    #[test]
    fn factor_sets() {
        let s = tm();
        assert_eq!(factors(&s, 2).len(), 4);
        let f3 = factors(&s, 3);
        assert!(!f3.contains(&w(&s, "aaa")) && !f3.contains(&w(&s, "bbb")));
        assert_eq!(factors(&s, 1).len(), 2);
    }

    #[test]
    fn counting() {
        let s = tm();
        assert_eq!(
            count_occurrences(&w(&s, "ab"), &w(&s, "abbabaab")).unwrap(),
            3
        );
        assert_eq!(
            count_occurrences(&w(&s, "aa"), &w(&s, "baababba")).unwrap(),
            1
        );
        assert!(count_occurrences(&[], &w(&s, "ab")).is_err());
        assert_eq!(
            count_anchored(&w(&s, "aa"), &w(&s, "baababba"), &w(&s, "a")).unwrap(),
            2
        );
        assert_eq!(
            count_anchored(&w(&s, "ba"), &w(&s, "ab"), &w(&s, "a")).unwrap(),
            1
        );
        assert_eq!(
            count_anchored(&w(&s, "ba"), &w(&s, "ab"), &w(&s, "b")).unwrap(),
            0
        );
        // abbabaab|abbabaab contains aababb at offset 5; abbabaab|baababba does not
        assert_eq!(
            count_anchored(&w(&s, "aababb"), &w(&s, "abbabaab"), &w(&s, "abbabaab")).unwrap(),
            1
        );
        assert_eq!(
            count_anchored(&w(&s, "aababb"), &w(&s, "abbabaab"), &w(&s, "baababba")).unwrap(),
            0
        );
        assert_eq!(
            count_anchored(&w(&s, "aababb"), &w(&s, "baababba"), &w(&s, "abbabaab")).unwrap(),
            1
        );
        assert!(count_anchored(&w(&s, "aababb"), &w(&s, "ab"), &w(&s, "ab")).is_err());
    }

    #[test]
    fn border_forcing() {
        let proper = parse_substitution("a -> a b b a b b\nb -> a a b a b").unwrap();
        assert_eq!(forces_border(&proper, 4), Some(1));
        assert_eq!(forces_border(&tm(), 1), None);
        let single = parse_substitution("a -> a a").unwrap();
        assert_eq!(forces_border(&single, 3), Some(0));
    }

    #[test]
    fn collared_thue_morse() {
        let s = tm();
        let bs = collar(&s, 1).unwrap();
        assert_eq!(bs.len(), 6);
        for c in 0..bs.len() {
            let total: usize = bs.image(c).len();
            assert_eq!(total, 2);
        }
        let periodic = parse_substitution("a -> a b\nb -> a b").unwrap();
        let bs = collar(&periodic, 1).unwrap();
        assert_eq!(bs.len(), 2);
        assert!(bs.is_single_cycle());
    }

    #[test]
    fn anchored_vector_examples() {
        let s = tm();
        let bs = collar(&s, 2).unwrap();
        let v = anchored_count_vector(&s, &w(&s, "ab"), &bs, 3).unwrap();
        for c in 0..bs.len() {
            let win = bs.window(c);
            let expect = match (win[2], win[3]) {
                (0, _) => 3,
                (1, 0) => 2,
                _ => 3,
            };
            assert_eq!(v.values[c], BigInt::from(expect), "window {:?}", win);
        }
        let bs1 = collar(&s, 1).unwrap();
        let v = anchored_count_vector(&s, &w(&s, "a"), &bs1, 0).unwrap();
        for c in 0..bs1.len() {
            assert_eq!(v.values[c], BigInt::from(u8::from(bs1.center(c) == 0)));
        }
        assert!(matches!(
            anchored_count_vector(&s, &w(&s, "aab"), &bs1, 3),
            Err(Error::CollarTooSmall { .. })
        ));
        assert!(matches!(
            anchored_count_vector(&s, &w(&s, "ab"), &bs, 0),
            Err(Error::OrderTooSmall { .. })
        ));
    }
}
