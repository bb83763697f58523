//! Factorization over the rationals: squarefree decomposition, rational roots,
//! then Kronecker's interpolation search for the remaining factors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::{squarefree_decomposition, IntPoly, RatPoly};
use crate::error::{Error, Result};

/// Largest degree handed to the Kronecker search.
pub const DEFAULT_DEGREE_CAP: usize = 12;

/// Irreducible factors with multiplicities. Each factor is primitive with a
/// positive leading coefficient; their product equals `p` up to sign and content.
pub fn factor_squarefree_then_irreducible(p: &IntPoly) -> Result<Vec<(IntPoly, usize)>> {
    factor_with_cap(p, DEFAULT_DEGREE_CAP)
}

pub fn factor_with_cap(p: &IntPoly, cap: usize) -> Result<Vec<(IntPoly, usize)>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut out = Vec::new();
    for (f, mult) in squarefree_decomposition(p) {
        for g in factor_squarefree(&f, cap)? {
            out.push((g, mult));
        }
    }
    out.sort_by(|(a, _), (b, _)| {
        a.deg()
            .cmp(&b.deg())
            .then_with(|| a.coeffs().cmp(b.coeffs()))
    });
    Ok(out)
}

/// Irreducible factors of a squarefree primitive polynomial.
fn factor_squarefree(f: &IntPoly, cap: usize) -> Result<Vec<IntPoly>> {
    let mut out = Vec::new();
    let mut rest = f.primitive_part();
    if rest.deg() == 0 {
        return Ok(out);
    }
    if rest.coeff(0).is_zero() {
        out.push(IntPoly::x());
        rest = rest.div_exact(&IntPoly::x()).expect("x divides");
    }
    // Rational roots p/q with p | a0 and q | lead.
    if rest.deg() > 0 {
        let num_divs = divisors(&rest.coeff(0).abs())?;
        let den_divs = divisors(&rest.lead().abs())?;
        'search: for q in &den_divs {
            for p in &num_divs {
                for p in [p.clone(), -p.clone()] {
                    if !p.gcd(q).is_one() {
                        continue;
                    }
                    let lin = IntPoly::new(vec![-p.clone(), q.clone()]);
                    while rest.deg() > 0 {
                        match rest.div_exact(&lin) {
                            Some(r) => {
                                out.push(lin.clone());
                                rest = r;
                            }
                            None => break,
                        }
                    }
                    if rest.deg() == 0 {
                        break 'search;
                    }
                }
            }
        }
    }
    let mut pending = vec![rest];
    while let Some(g) = pending.pop() {
        let n = g.deg();
        if n == 0 {
            continue;
        }
        if n <= 3 {
            // No rational roots remain, so degree <= 3 is irreducible.
            out.push(g.primitive_part());
            continue;
        }
        if n > cap {
            return Err(Error::DegreeCap { degree: n, cap });
        }
        match kronecker_split(&g)? {
            Some(h) => {
                let other = g.div_exact(&h).expect("Kronecker factor divides");
                pending.push(h);
                pending.push(other);
            }
            None => out.push(g.primitive_part()),
        }
    }
    Ok(out.into_iter().map(|g| g.primitive_part()).collect())
}

/// A nontrivial factor of degree between 2 and `deg/2`, if one exists.
fn kronecker_split(f: &IntPoly) -> Result<Option<IntPoly>> {
    let n = f.deg();
    // Evaluation points with the fewest divisors keep the search small.
    let mut cands: Vec<(usize, BigInt, BigInt)> = Vec::new();
    for k in 0..(4 * n as i64 + 8) {
        let x = if k % 2 == 0 {
            BigInt::from(k / 2)
        } else {
            BigInt::from(-(k + 1) / 2)
        };
        let v = f.eval(&x);
        if v.is_zero() {
            continue;
        }
        let tau = divisors(&v.abs())?.len();
        cands.push((tau, x, v));
    }
    cands.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.abs().cmp(&b.1.abs())));
    for d in 2..=n / 2 {
        let pts = &cands[..d + 1];
        let xs: Vec<BigInt> = pts.iter().map(|c| c.1.clone()).collect();
        let choices: Vec<Vec<BigInt>> = pts
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let ds = divisors(&c.2.abs()).expect("already factored");
                if i == 0 {
                    ds
                } else {
                    ds.iter().flat_map(|x| [x.clone(), -x.clone()]).collect()
                }
            })
            .collect();
        let mut idx = vec![0usize; d + 1];
        loop {
            let ys: Vec<BigInt> = idx
                .iter()
                .enumerate()
                .map(|(i, &j)| choices[i][j].clone())
                .collect();
            if let Some(h) = interpolate(&xs, &ys).to_int_exact() {
                if h.deg() == d && f.div_exact(&h).is_some() {
                    return Ok(Some(h.primitive_part()));
                }
            }
            let mut i = 0;
            loop {
                if i == idx.len() {
                    break;
                }
                idx[i] += 1;
                if idx[i] < choices[i].len() {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
            if i == idx.len() {
                break;
            }
        }
    }
    Ok(None)
}

fn interpolate(xs: &[BigInt], ys: &[BigInt]) -> RatPoly {
    let mut acc = RatPoly::zero();
    for (i, (xi, yi)) in xs.iter().zip(ys).enumerate() {
        let mut basis = RatPoly::one();
        let mut denom = BigInt::one();
        for (j, xj) in xs.iter().enumerate() {
            if i != j {
                basis = &basis
                    * &RatPoly::new(vec![
                        BigRational::from_integer(-xj.clone()),
                        BigRational::one(),
                    ]);
                denom *= xi - xj;
            }
        }
        acc = &acc + &basis.scale(&BigRational::new(yi.clone(), denom));
    }
    acc
}

/// Positive divisors of a positive integer, by trial division.
pub fn divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    if n.is_zero() {
        return Err(Error::Internal("divisors of zero".into()));
    }
    let mut m = n
        .abs()
        .to_u128()
        .ok_or_else(|| Error::Internal(format!("integer {n} too large to factor")))?;
    let mut primes: Vec<(u128, u32)> = Vec::new();
    let mut p = 2u128;
    while p * p <= m {
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            primes.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
        if p > 1 << 32 {
            return Err(Error::Internal(format!("integer {n} too large to factor")));
        }
    }
    if m > 1 {
        primes.push((m, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (p, e) in primes {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= p;
            }
        }
        divs = next;
    }
    divs.sort();
    Ok(divs)
}

/// Distinct prime divisors of a nonzero integer.
pub fn prime_support(n: &BigInt) -> Result<Vec<BigInt>> {
    let divs = divisors(n)?;
    Ok(divs
        .iter()
        .filter(|d| !d.is_one() && divs.iter().filter(|e| d.is_multiple_of(e)).count() == 2)
        .cloned()
        .collect())
}
