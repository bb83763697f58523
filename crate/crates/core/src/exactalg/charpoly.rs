//! Characteristic and minimal polynomials, companion matrices.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::matrix::{solve, IntMatrix, RatMatrix};
use super::poly::IntPoly;
use crate::error::{Error, Result};

/// `det(xI - M)` by fraction-free elimination over `Z[x]`.
pub fn charpoly(m: &IntMatrix) -> Result<IntPoly> {
    m.require_square()?;
    let n = m.rows();
    if n == 0 {
        return Ok(IntPoly::one());
    }
    let mut a: Vec<Vec<IntPoly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = IntPoly::constant(-m.get(i, j).clone());
                    if i == j {
                        c + IntPoly::x()
                    } else {
                        c
                    }
                })
                .collect()
        })
        .collect();
    let mut negate = false;
    let mut prev = IntPoly::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            // xI - M always has a nonzero determinant, so some pivot exists.
            let p = (k + 1..n)
                .find(|&i| !a[i][k].is_zero())
                .ok_or_else(|| Error::Internal("singular xI - M".into()))?;
            a.swap(k, p);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = t
                    .div_exact(&prev)
                    .ok_or_else(|| Error::Internal("inexact Bareiss division".into()))?;
            }
            a[i][k] = IntPoly::zero();
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    Ok(if negate { -det } else { det })
}

/// Monic generator of the annihilating ideal of `M`, found as the first linear
/// dependence among `I, M, M^2, ...` over the rationals.
pub fn minpoly_matrix(m: &IntMatrix) -> Result<IntPoly> {
    minpoly_rat_matrix(&m.to_rat())
}

/// Minimal polynomial of a rational matrix whose minimal polynomial has
/// integer coefficients (e.g. the restriction of an integer matrix to an
/// invariant subspace); errors otherwise.
pub fn minpoly_rat_matrix(m: &RatMatrix) -> Result<IntPoly> {
    m.require_square()?;
    let n = m.rows();
    if n == 0 {
        return Ok(IntPoly::one());
    }
    let mut powers: Vec<Vec<BigRational>> = Vec::new();
    let mut cur = RatMatrix::identity(n);
    for d in 0..=n {
        let v = cur.entries().to_vec();
        if d > 0 {
            // Columns are vec(M^0..M^{d-1}); solve for vec(M^d).
            let rows: Vec<Vec<BigRational>> = (0..n * n)
                .map(|r| powers.iter().map(|p| p[r].clone()).collect())
                .collect();
            if let Some(c) = solve(&rows, &v, &BigRational::zero()) {
                let mut coeffs: Vec<BigInt> = Vec::with_capacity(d + 1);
                for ci in &c {
                    if !ci.is_integer() {
                        return Err(Error::Internal("non-integral minimal polynomial".into()));
                    }
                    coeffs.push(-ci.to_integer());
                }
                coeffs.push(BigInt::one());
                return Ok(IntPoly::new(coeffs));
            }
        }
        powers.push(v);
        cur = cur.mul(m);
    }
    Err(Error::Internal("Cayley-Hamilton bound exceeded".into()))
}

/// Characteristic polynomial of a rational matrix, required to be integral.
pub fn charpoly_rat_matrix(m: &RatMatrix) -> Result<IntPoly> {
    m.require_square()?;
    let n = m.rows();
    let den = m.entries().iter().fold(BigInt::one(), |l, x| {
        num_integer::Integer::lcm(&l, x.denom())
    });
    let scaled = m.map(|x| (x * BigRational::from_integer(den.clone())).to_integer());
    // charpoly(dM)(x) = d^n charpoly(M)(x/d)
    let c = charpoly(&scaled)?;
    let mut coeffs = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let dp = num_traits::pow(den.clone(), n - i);
        let (q, r) = num_integer::Integer::div_rem(&c.coeff(i), &dp);
        if !r.is_zero() {
            return Err(Error::Internal(
                "non-integral characteristic polynomial".into(),
            ));
        }
        coeffs.push(q);
    }
    Ok(IntPoly::new(coeffs))
}

/// Companion matrix with ones on the subdiagonal and `-q_0, ..., -q_{d-1}` in
/// the last column.
pub fn companion_matrix(q: &IntPoly) -> Result<IntMatrix> {
    if q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !q.is_monic() {
        return Err(Error::NotMonic(q.to_string()));
    }
    let d = q.deg();
    if d == 0 {
        return Err(Error::Shape("companion matrix of a constant".into()));
    }
    let mut c = IntMatrix::zeros(d, d);
    for i in 1..d {
        c.set(i, i - 1, BigInt::one());
    }
    for i in 0..d {
        c.set(i, d - 1, -q.coeff(i));
    }
    Ok(c)
}

/// Spectral radius bound `max row sum` of the absolute entries; used to seed
/// root searches.
pub fn row_sum_bound(m: &IntMatrix) -> BigInt {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|e| e.abs()).sum::<BigInt>())
        .max()
        .unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows).unwrap()
    }

    #[test]
    fn charpoly_examples() {
        assert_eq!(
            charpoly(&mat(&[vec![1, 1], vec![2, 0]])).unwrap(),
            IntPoly::from_i64s(&[-2, -1, 1])
        );
        assert_eq!(
            charpoly(&mat(&[vec![1, 0], vec![0, 1]])).unwrap(),
            IntPoly::from_i64s(&[1, -2, 1])
        );
        assert_eq!(
            charpoly(&mat(&[vec![8, 7], vec![8, 9]])).unwrap(),
            IntPoly::from_i64s(&[16, -17, 1])
        );
        // zero leading pivot forces a row swap
        assert_eq!(
            charpoly(&mat(&[vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]])).unwrap(),
            IntPoly::from_i64s(&[-1, 0, 0, 1])
        );
        assert!(charpoly(&IntMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn minpoly_examples() {
        assert_eq!(
            minpoly_matrix(&mat(&[vec![1, 1], vec![2, 0]])).unwrap(),
            IntPoly::from_i64s(&[-2, -1, 1])
        );
        assert_eq!(
            minpoly_matrix(&IntMatrix::identity(3)).unwrap(),
            IntPoly::from_i64s(&[-1, 1])
        );
        assert_eq!(
            minpoly_matrix(&mat(&[vec![2, 0], vec![0, 2]])).unwrap(),
            IntPoly::from_i64s(&[-2, 1])
        );
        assert_eq!(
            minpoly_matrix(&IntMatrix::zeros(2, 2)).unwrap(),
            IntPoly::x()
        );
    }

    #[test]
    fn companion_examples() {
        let c = companion_matrix(&IntPoly::from_i64s(&[-2, 1])).unwrap();
        assert_eq!(c, mat(&[vec![2]]));
        let q = IntPoly::from_i64s(&[-1, -4, 1]);
        let c = companion_matrix(&q).unwrap();
        assert_eq!(c, mat(&[vec![0, 1], vec![1, 4]]));
        assert_eq!(charpoly(&c).unwrap(), q);
        let q = IntPoly::from_i64s(&[-2, -1, 1]);
        assert_eq!(
            companion_matrix(&q).unwrap(),
            mat(&[vec![0, 2], vec![1, 1]])
        );
        assert!(companion_matrix(&IntPoly::from_i64s(&[1, 2])).is_err());
    }
}
