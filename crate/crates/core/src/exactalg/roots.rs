//! Real root isolation with Sturm sequences, root-modulus counting, and a
//! unit-disk containment test. Everything here is exact.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::IntPoly;
use crate::error::{Error, Result};

/// Closed rational interval `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Interval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn point(x: BigRational) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(2.into())
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Sturm chain `p, p', -rem(p, p'), ...`, each term rescaled by a positive
/// rational to a primitive integer polynomial.
pub fn sturm_sequence(p: &IntPoly) -> Vec<IntPoly> {
    let mut seq = vec![p.clone()];
    if p.deg() == 0 {
        return seq;
    }
    seq.push(p.derivative());
    loop {
        let n = seq.len();
        let r = seq[n - 2].to_rat().rem(&seq[n - 1].to_rat());
        if r.is_zero() {
            break;
        }
        seq.push(-r.to_int_scaled());
    }
    seq
}

pub fn sign_variations(seq: &[IntPoly], x: &BigRational) -> usize {
    let mut count = 0;
    let mut last = 0;
    for s in seq {
        let v = s.sign_at(x);
        if v != 0 {
            if last != 0 && v != last {
                count += 1;
            }
            last = v;
        }
    }
    count
}

/// Distinct real roots in the half-open interval `(a, b]`.
pub fn count_roots(seq: &[IntPoly], a: &BigRational, b: &BigRational) -> usize {
    sign_variations(seq, a) - sign_variations(seq, b)
}

/// `1 + max |a_i / a_n|`; every complex root lies strictly inside.
pub fn cauchy_bound(p: &IntPoly) -> BigRational {
    let lead = BigRational::from_integer(p.lead().abs());
    let m = p.coeffs()[..p.deg()]
        .iter()
        .map(|c| BigRational::from_integer(c.abs()))
        .max()
        .unwrap_or_else(BigRational::zero);
    BigRational::one() + m / lead
}

/// Disjoint isolating intervals for the real roots of a squarefree polynomial,
/// in increasing order. Non-point intervals have non-root endpoints with a sign
/// change between them.
pub fn isolate_real_roots(p: &IntPoly) -> Result<Vec<Interval>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.deg() == 0 {
        return Ok(Vec::new());
    }
    if p.to_rat().gcd(&p.derivative().to_rat()).deg() > 0 {
        return Err(Error::NotSquarefree(p.to_string()));
    }
    let seq = sturm_sequence(p);
    let b = cauchy_bound(p);
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        let n = count_roots(&seq, &lo, &hi);
        if n == 0 {
            continue;
        }
        if n == 1 {
            out.push(Interval::new(lo, hi));
            continue;
        }
        let mut mid = (&lo + &hi) / BigRational::from_integer(2.into());
        if p.sign_at(&mid) == 0 {
            out.push(Interval::point(mid.clone()));
            // Split on both sides of the exact root at non-root points.
            let mut eps = (&hi - &lo) / BigRational::from_integer(8.into());
            loop {
                let l = &mid - &eps;
                let r = &mid + &eps;
                if p.sign_at(&l) != 0 && p.sign_at(&r) != 0 && count_roots(&seq, &l, &r) == 1 {
                    stack.push((lo.clone(), l));
                    stack.push((r, hi.clone()));
                    break;
                }
                eps /= BigRational::from_integer(2.into());
            }
            continue;
        }
        // Keep endpoints off the roots so each interval has a clean sign change.
        let step = (&hi - &lo) / BigRational::from_integer(64.into());
        while p.sign_at(&mid) == 0 {
            mid += &step;
        }
        stack.push((lo, mid.clone()));
        stack.push((mid, hi));
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    Ok(out)
}

/// One bisection step on an isolating interval of a simple root.
pub fn refine_once(p: &IntPoly, iv: &Interval) -> Interval {
    if iv.is_point() {
        return iv.clone();
    }
    let mid = iv.mid();
    let sm = p.sign_at(&mid);
    if sm == 0 {
        return Interval::point(mid);
    }
    if sm == p.sign_at(&iv.lo) {
        Interval::new(mid, iv.hi.clone())
    } else {
        Interval::new(iv.lo.clone(), mid)
    }
}

/// Bisect until the width is at most `width`.
pub fn refine_to(p: &IntPoly, iv: &Interval, width: &BigRational) -> Interval {
    let mut cur = iv.clone();
    while &cur.width() > width {
        cur = refine_once(p, &cur);
    }
    cur
}

/// Number of roots of `f` (counted with multiplicity) strictly inside the unit
/// disk, or `None` when the Schur-Cohn recursion degenerates (which happens in
/// particular whenever `f` has a root on the unit circle).
pub fn roots_inside_unit_disk(f: &IntPoly) -> Option<usize> {
    if f.is_zero() {
        return None;
    }
    // inside(original) = sign * inside(f) + offset throughout.
    let mut f = f.primitive_part();
    let (mut sign, mut offset) = (1i64, 0i64);
    loop {
        while f.deg() > 0 && f.coeff(0).is_zero() {
            f = f.div_exact(&IntPoly::x()).expect("x divides");
            offset += sign;
        }
        let n = f.deg();
        if n == 0 {
            return usize::try_from(offset).ok();
        }
        let a0 = f.coeff(0);
        let an = f.lead();
        let delta = &a0 * &a0 - &an * &an;
        if delta.is_zero() {
            return None;
        }
        let rev = IntPoly::new(f.coeffs().iter().rev().cloned().collect());
        let t = &f.scale(&a0) - &rev.scale(&an);
        if t.is_zero() {
            return None;
        }
        if delta.is_negative() {
            // Rouche against the reversal: inside(f) = n - inside(Tf).
            offset += sign * n as i64;
            sign = -sign;
        }
        f = t.primitive_part();
    }
}

/// Roots of `f` with modulus strictly greater than `t > 0`, with multiplicity.
/// `None` if some root has modulus exactly `t` or the recursion degenerates.
pub fn count_modulus_above(f: &IntPoly, t: &BigRational) -> Option<usize> {
    // g(x) = b^n f(a x / b) has roots z / t.
    let (a, b) = (t.numer(), t.denom());
    let n = f.deg();
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut ap = BigInt::one();
    for (i, c) in f.coeffs().iter().enumerate() {
        coeffs.push(c * &ap * b.pow((n - i) as u32));
        ap *= a;
    }
    let inside = roots_inside_unit_disk(&IntPoly::new(coeffs))?;
    Some(n - inside)
}

/// Rational interval containing the second-largest root modulus of `f`, given
/// an isolating interval for a simple real root `lambda` of its factor
/// `lambda_poly`. Also returns the refined `lambda` interval whose lower end
/// certifies strict dominance. Fails if `lambda` is not strictly dominant.
pub fn second_modulus_interval(
    f: &IntPoly,
    lambda: &Interval,
    lambda_poly: &IntPoly,
    width: &BigRational,
) -> Result<(Interval, Interval)> {
    let mut f = f.clone();
    while f.deg() > 0 && f.coeff(0).is_zero() {
        f = f.div_exact(&IntPoly::x()).expect("x divides");
    }
    let zero = BigRational::zero();
    if f.deg() <= 1 {
        return Ok((Interval::point(zero), lambda.clone()));
    }
    let two = BigRational::from_integer(2.into());
    let mut lam = lambda.clone();
    let mut gap = lam.lo.abs() / &two;
    let mut certified = None;
    for _ in 0..256 {
        let t = if lam.is_point() {
            &lam.lo - &gap
        } else {
            lam.lo.clone()
        };
        if t.is_positive() && count_modulus_above(&f, &t) == Some(1) {
            certified = Some(t);
            break;
        }
        if lam.is_point() {
            gap /= &two;
        } else {
            lam = refine_once(lambda_poly, &lam);
        }
    }
    let mut hi = certified
        .ok_or_else(|| Error::Internal("stretching factor is not strictly dominant".into()))?;
    let mut lo = zero;
    while &(&hi - &lo) > width {
        let mut mid = (&lo + &hi) / &two;
        let nudge = (&hi - &lo) / BigRational::from_integer(1024.into());
        let mut c = count_modulus_above(&f, &mid);
        for _ in 0..64 {
            if c.is_some() {
                break;
            }
            mid += &nudge;
            c = count_modulus_above(&f, &mid);
        }
        match c {
            Some(1) => hi = mid,
            Some(_) => lo = mid,
            None => return Err(Error::Internal("modulus count kept degenerating".into())),
        }
    }
    Ok((Interval::new(lo, hi), lam))
}

/// Whether every root of the monic integer polynomial `f` lies in the closed
/// unit disk, decided by Graeffe root-squaring. `None` if the iteration cap is
/// reached without a verdict.
pub fn all_roots_in_closed_unit_disk(f: &IntPoly, max_iter: usize) -> Option<bool> {
    if f.deg() == 0 {
        return Some(true);
    }
    if !f.is_monic() {
        return None;
    }
    let n = f.deg();
    let binom: Vec<BigInt> = {
        let mut row = vec![BigInt::one()];
        for k in 1..=n {
            let prev = row[k - 1].clone();
            row.push(prev * BigInt::from(n - k + 1) / BigInt::from(k));
        }
        row
    };
    let mut seen = HashSet::new();
    let mut g = f.clone();
    for _ in 0..max_iter {
        // Elementary symmetric functions of roots in the disk are bounded by binomials.
        for (j, c) in g.coeffs().iter().enumerate() {
            if c.abs() > binom[n - j] {
                return Some(false);
            }
        }
        if !seen.insert(g.clone()) {
            return Some(true);
        }
        let prod = &g * &g.reflect();
        let half = IntPoly::new(prod.coeffs().iter().step_by(2).cloned().collect());
        g = if n % 2 == 1 { -half } else { half };
    }
    None
}
