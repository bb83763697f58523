//! Integer lattices: Hermite normal form, resultants, the reduced resultant,
//! and eventual images of integer matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::matrix::{rref, IntMatrix, RatMatrix};
use super::poly::IntPoly;
use crate::error::{Error, Result};

/// Row-style Hermite normal form `H = U A` with `U` unimodular: rows in echelon
/// form, positive pivots, entries above each pivot reduced into `[0, pivot)`.
pub fn row_hnf(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (m, n) = (a.rows(), a.cols());
    let mut h = a.to_rows();
    let mut u = IntMatrix::identity(m).to_rows();
    let mut row = 0;
    for col in 0..n {
        if row == m {
            break;
        }
        for i in row + 1..m {
            if h[i][col].is_zero() {
                continue;
            }
            let x = h[row][col].clone();
            let y = h[i][col].clone();
            let eg = x.extended_gcd(&y);
            let (g, s, t) = (eg.gcd, eg.x, eg.y);
            let (xg, yg) = (&x / &g, &y / &g);
            combine(&mut h, row, i, &s, &t, &yg, &xg);
            combine(&mut u, row, i, &s, &t, &yg, &xg);
        }
        if h[row][col].is_zero() {
            continue;
        }
        if h[row][col].is_negative() {
            negate(&mut h[row]);
            negate(&mut u[row]);
        }
        let p = h[row][col].clone();
        for k in 0..row {
            let q = h[k][col].div_floor(&p);
            if !q.is_zero() {
                sub_mul(&mut h, k, row, &q);
                sub_mul(&mut u, k, row, &q);
            }
        }
        row += 1;
    }
    (
        IntMatrix::from_rows(h).expect("rectangular"),
        IntMatrix::from_rows(u).expect("rectangular"),
    )
}

// rows (r, i) <- (s r + t i, -yg r + xg i); determinant s xg + t yg = 1.
fn combine(
    m: &mut [Vec<BigInt>],
    r: usize,
    i: usize,
    s: &BigInt,
    t: &BigInt,
    yg: &BigInt,
    xg: &BigInt,
) {
    for c in 0..m[r].len() {
        let a = m[r][c].clone();
        let b = m[i][c].clone();
        m[r][c] = s * &a + t * &b;
        m[i][c] = xg * &b - yg * &a;
    }
}

fn negate(row: &mut [BigInt]) {
    for x in row.iter_mut() {
        *x = -x.clone();
    }
}

fn sub_mul(m: &mut [Vec<BigInt>], k: usize, r: usize, q: &BigInt) {
    for c in 0..m[k].len() {
        let d = q * &m[r][c];
        m[k][c] -= d;
    }
}

/// Column-style Hermite normal form (the transpose of the row form of the
/// transpose).
pub fn hnf(a: &IntMatrix) -> IntMatrix {
    row_hnf(&a.transpose()).0.transpose()
}

/// Determinant by fraction-free elimination.
pub fn determinant(a: &IntMatrix) -> Result<BigInt> {
    a.require_square()?;
    let n = a.rows();
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut m = a.to_rows();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(p) => {
                    m.swap(k, p);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[k][k] * &m[i][j] - &m[i][k] * &m[k][j]) / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    Ok(sign * &m[n - 1][n - 1])
}

/// Sylvester matrix: `deg r` shifts of `q` followed by `deg q` shifts of `r`,
/// coefficients from the highest degree down.
pub fn sylvester_matrix(q: &IntPoly, r: &IntPoly) -> IntMatrix {
    let (dq, dr) = (q.deg(), r.deg());
    let n = dq + dr;
    let mut s = IntMatrix::zeros(n, n);
    for i in 0..dr {
        for (k, c) in q.coeffs().iter().rev().enumerate() {
            s.set(i, i + k, c.clone());
        }
    }
    for j in 0..dq {
        for (k, c) in r.coeffs().iter().rev().enumerate() {
            s.set(dr + j, j + k, c.clone());
        }
    }
    s
}

/// `Res(q, r)`, with sign.
pub fn resultant(q: &IntPoly, r: &IntPoly) -> Result<BigInt> {
    if q.is_zero() || r.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    determinant(&sylvester_matrix(q, r))
}

/// `Q q + R r = D` with `D` the least positive integer of that form,
/// `deg Q < deg r` and `deg R < deg q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BezoutWitness {
    pub d: BigInt,
    pub q_coeff: IntPoly,
    pub r_coeff: IntPoly,
}

impl BezoutWitness {
    pub fn verify(&self, q: &IntPoly, r: &IntPoly) -> bool {
        &self.q_coeff * q + &self.r_coeff * r == IntPoly::constant(self.d.clone())
    }
}

pub fn reduced_resultant(q: &IntPoly, r: &IntPoly) -> Result<BezoutWitness> {
    if q.is_zero() || r.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (dq, dr) = (q.deg(), r.deg());
    if dq == 0 && dr == 0 {
        let eg = q.coeff(0).extended_gcd(&r.coeff(0));
        return Ok(BezoutWitness {
            d: eg.gcd,
            q_coeff: IntPoly::constant(eg.x),
            r_coeff: IntPoly::constant(eg.y),
        });
    }
    if resultant(q, r)?.is_zero() {
        return Err(Error::NotCoprime(q.to_string(), r.to_string()));
    }
    // Rows x^i q and x^j r in coordinates ordered by descending degree, so the
    // last HNF row is (0, ..., 0, D).
    let n = dq + dr;
    let lattice = sylvester_matrix(q, r);
    let (h, u) = row_hnf(&lattice);
    let d = h.get(n - 1, n - 1).clone();
    if (0..n - 1).any(|j| !h.get(n - 1, j).is_zero()) || !d.is_positive() {
        return Err(Error::Internal(
            "reduced resultant lattice is not full rank".into(),
        ));
    }
    // Row i < dr of the Sylvester matrix is x^(dr-1-i) q; row dr+j is x^(dq-1-j) r.
    let mut qc = vec![BigInt::zero(); dr.max(1)];
    let mut rc = vec![BigInt::zero(); dq.max(1)];
    for i in 0..dr {
        qc[dr - 1 - i] = u.get(n - 1, i).clone();
    }
    for j in 0..dq {
        rc[dq - 1 - j] = u.get(n - 1, dr + j).clone();
    }
    let w = BezoutWitness {
        d,
        q_coeff: IntPoly::new(qc),
        r_coeff: IntPoly::new(rc),
    };
    if !w.verify(q, r) {
        return Err(Error::Internal("Bezout witness does not verify".into()));
    }
    Ok(w)
}

/// Basis of the column space of `M^dim`, as the columns of the returned
/// matrix, each scaled to a primitive integer vector. Zero columns for a
/// nilpotent `M`.
pub fn eventual_image(m: &IntMatrix) -> Result<RatMatrix> {
    m.require_square()?;
    let n = m.rows();
    let mr = m.to_rat();
    let mut basis: Vec<Vec<BigRational>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for _ in 0..n {
        let images: Vec<Vec<BigRational>> = basis.iter().map(|v| mr.mul_vec(v)).collect();
        let next: Vec<Vec<BigRational>> = column_basis(&images, n)
            .iter()
            .map(|v| primitive_integer(v))
            .collect();
        // Once the rank stops dropping, the image is invariant.
        let stable = next.len() == basis.len();
        basis = next;
        if stable || basis.is_empty() {
            break;
        }
    }
    let cols: Vec<Vec<BigRational>> = basis.iter().map(|v| primitive_integer(v)).collect();
    let mut out = RatMatrix::zeros(n, cols.len());
    for (j, c) in cols.iter().enumerate() {
        for (i, x) in c.iter().enumerate() {
            out.set(i, j, x.clone());
        }
    }
    Ok(out)
}

/// Linearly independent subset (first occurrences) of the given vectors.
pub fn column_basis(vectors: &[Vec<BigRational>], dim: usize) -> Vec<Vec<BigRational>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let mut rows: Vec<Vec<BigRational>> = (0..dim)
        .map(|i| vectors.iter().map(|v| v[i].clone()).collect())
        .collect();
    let pivots = rref(&mut rows);
    pivots.into_iter().map(|j| vectors[j].clone()).collect()
}

/// Scale a rational vector to a primitive integer vector with the same
/// direction (first nonzero entry keeps its sign).
pub fn primitive_integer(v: &[BigRational]) -> Vec<BigRational> {
    let den = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * BigRational::from_integer(den.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    ints.into_iter()
        .map(|x| BigRational::from_integer(x / &g))
        .collect()
}

/// Integer coefficients `c` with `sum c_i gens_i = target`, if any exist.
/// The generators may be linearly dependent.
pub fn integer_combination(gens: &[Vec<BigInt>], target: &[BigInt]) -> Option<Vec<BigInt>> {
    let n = target.len();
    if gens.is_empty() {
        return target.iter().all(Zero::is_zero).then(Vec::new);
    }
    let g = IntMatrix::from_rows(gens.to_vec()).ok()?;
    let (h, u) = row_hnf(&g);
    let mut v = target.to_vec();
    let mut coeffs = vec![BigInt::zero(); h.rows()];
    let mut r = 0;
    for col in 0..n {
        if r < h.rows() && !h.get(r, col).is_zero() && (0..col).all(|j| h.get(r, j).is_zero()) {
            let p = h.get(r, col);
            let (q, rem) = v[col].div_rem(p);
            if !rem.is_zero() {
                return None;
            }
            for j in col..n {
                let d = &q * h.get(r, j);
                v[j] -= d;
            }
            coeffs[r] = q;
            r += 1;
        } else if !v[col].is_zero() {
            return None;
        }
    }
    // target = coeffs . H = coeffs . U . G
    Some(
        (0..gens.len())
            .map(|j| {
                (0..h.rows())
                    .map(|i| &coeffs[i] * u.get(i, j))
                    .sum::<BigInt>()
            })
            .collect(),
    )
}
