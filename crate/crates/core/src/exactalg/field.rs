//! Arithmetic in `Q(lambda)` for a designated real root `lambda` of an
//! irreducible integer polynomial, in the power basis `1, lambda, ...`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::matrix::FieldElem;
use super::poly::{IntPoly, RatPoly};
use super::roots::{
    count_roots, isolate_real_roots, refine_once, refine_to, sturm_sequence, Interval,
};
use crate::error::{Error, Result};

/// The field context: minimal polynomial plus an isolating interval for the
/// chosen real root.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct NumberField {
    minpoly: IntPoly,
    root: Interval,
    root_index: usize,
}

impl NumberField {
    /// `minpoly` must be irreducible; `root` must isolate exactly one real root.
    pub fn new(minpoly: &IntPoly, root: &Interval) -> Result<Arc<Self>> {
        if minpoly.deg() == 0 {
            return Err(Error::Shape("number field of a constant polynomial".into()));
        }
        let minpoly = minpoly.primitive_part();
        let roots = isolate_real_roots(&minpoly)?;
        let seq = sturm_sequence(&minpoly);
        let inside = if root.is_point() {
            usize::from(minpoly.sign_at(&root.lo) == 0)
        } else {
            count_roots(&seq, &root.lo, &root.hi) + usize::from(minpoly.sign_at(&root.lo) == 0)
        };
        if inside != 1 {
            return Err(Error::Internal(format!(
                "interval {root} isolates {inside} roots of {minpoly}"
            )));
        }
        // Sharpen once at construction so later sign queries rarely refine.
        let mut iv = root.clone();
        if minpoly.deg() == 1 {
            let c = minpoly.coeffs();
            iv = Interval::point(BigRational::new(-c[0].clone(), c[1].clone()));
        }
        if !iv.is_point() && minpoly.sign_at(&iv.hi) == 0 {
            iv = Interval::point(iv.hi.clone());
        }
        if !iv.is_point() && minpoly.sign_at(&iv.lo) == 0 {
            iv = Interval::point(iv.lo.clone());
        }
        let iv = refine_to(
            &minpoly,
            &iv,
            &BigRational::new(1.into(), BigInt::from(2).pow(64)),
        );
        let root_index = roots
            .iter()
            .position(|r| r.lo <= iv.hi && iv.lo <= r.hi)
            .ok_or_else(|| Error::Internal("root not among isolated roots".into()))?;
        Ok(Arc::new(NumberField {
            minpoly,
            root: iv,
            root_index,
        }))
    }

    /// `Q` presented as `Q(r)` for a rational `r`.
    pub fn rational(r: &BigRational) -> Arc<Self> {
        let minpoly = IntPoly::new(vec![-r.numer().clone(), r.denom().clone()]);
        Arc::new(NumberField {
            minpoly,
            root: Interval::point(r.clone()),
            root_index: 0,
        })
    }

    pub fn minpoly(&self) -> &IntPoly {
        &self.minpoly
    }

    pub fn degree(&self) -> usize {
        self.minpoly.deg()
    }

    pub fn root_interval(&self) -> &Interval {
        &self.root
    }

    pub fn root_index(&self) -> usize {
        self.root_index
    }

    /// Isolating interval for the root of width at most `width`.
    pub fn root_enclosure(&self, width: &BigRational) -> Interval {
        refine_to(&self.minpoly, &self.root, width)
    }

    pub fn generator(self: &Arc<Self>) -> AlgebraicNumber {
        if self.degree() == 1 {
            return AlgebraicNumber::from_rational(self, self.root.lo.clone());
        }
        let mut coords = vec![BigRational::zero(); self.degree()];
        coords[1] = BigRational::one();
        AlgebraicNumber {
            field: Arc::clone(self),
            coords,
        }
    }

    fn same(a: &Arc<Self>, b: &Arc<Self>) -> bool {
        Arc::ptr_eq(a, b) || (a.minpoly == b.minpoly && a.root_index == b.root_index)
    }
}

/// An element of `Q(lambda)`.
#[derive(Clone, Debug)]
pub struct AlgebraicNumber {
    field: Arc<NumberField>,
    coords: Vec<BigRational>,
}

impl PartialEq for AlgebraicNumber {
    fn eq(&self, o: &Self) -> bool {
        NumberField::same(&self.field, &o.field) && self.coords == o.coords
    }
}

impl Eq for AlgebraicNumber {}

impl AlgebraicNumber {
    pub fn new(field: &Arc<NumberField>, coords: Vec<BigRational>) -> Result<Self> {
        if coords.len() > field.degree() {
            return Err(Error::Shape(format!(
                "{} coordinates for a degree-{} field",
                coords.len(),
                field.degree()
            )));
        }
        let mut c = coords;
        c.resize(field.degree(), BigRational::zero());
        Ok(AlgebraicNumber {
            field: Arc::clone(field),
            coords: c,
        })
    }

    pub fn zero(field: &Arc<NumberField>) -> Self {
        AlgebraicNumber {
            field: Arc::clone(field),
            coords: vec![BigRational::zero(); field.degree()],
        }
    }

    pub fn one(field: &Arc<NumberField>) -> Self {
        Self::from_rational(field, BigRational::one())
    }

    pub fn from_rational(field: &Arc<NumberField>, r: BigRational) -> Self {
        let mut coords = vec![BigRational::zero(); field.degree()];
        coords[0] = r;
        AlgebraicNumber {
            field: Arc::clone(field),
            coords,
        }
    }

    pub fn from_int(field: &Arc<NumberField>, n: i64) -> Self {
        Self::from_rational(field, BigRational::from_integer(n.into()))
    }

    /// `p(lambda)` for a rational polynomial `p`.
    pub fn from_poly(field: &Arc<NumberField>, p: &RatPoly) -> Self {
        if field.degree() == 1 {
            let v = p.eval(&field.root.lo);
            return Self::from_rational(field, v);
        }
        let r = p.rem(&field.minpoly.to_rat());
        Self::new(field, r.coeffs().to_vec()).expect("reduced below the field degree")
    }

    pub fn from_int_poly(field: &Arc<NumberField>, p: &IntPoly) -> Self {
        Self::from_poly(field, &p.to_rat())
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// The value as a rational, when it lies in `Q`.
    pub fn to_rational(&self) -> Option<BigRational> {
        if self.coords[1..].iter().all(Zero::is_zero) {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }

    pub fn as_poly(&self) -> RatPoly {
        RatPoly::new(self.coords.clone())
    }

    fn check(&self, o: &Self) -> Result<()> {
        if NumberField::same(&self.field, &o.field) {
            Ok(())
        } else {
            Err(Error::MixedFields)
        }
    }

    fn with(&self, coords: Vec<BigRational>) -> Self {
        AlgebraicNumber {
            field: Arc::clone(&self.field),
            coords,
        }
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(self.with(
            self.coords
                .iter()
                .zip(&o.coords)
                .map(|(a, b)| a + b)
                .collect(),
        ))
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(self.with(
            self.coords
                .iter()
                .zip(&o.coords)
                .map(|(a, b)| a - b)
                .collect(),
        ))
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        if self.field.degree() == 1 {
            return Ok(self.with(vec![&self.coords[0] * &o.coords[0]]));
        }
        if self.is_zero() || o.is_zero() {
            return Ok(Self::zero(&self.field));
        }
        Ok(Self::from_poly(
            &self.field,
            &(&self.as_poly() * &o.as_poly()),
        ))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.field.degree() == 1 {
            return Ok(self.with(vec![self.coords[0].recip()]));
        }
        let (g, s, _) = self.as_poly().ext_gcd(&self.field.minpoly.to_rat());
        if g.deg() != 0 {
            return Err(Error::Internal("field polynomial is reducible".into()));
        }
        let s = s.scale(&g.coeff(0).recip());
        Ok(Self::from_poly(&self.field, &s))
    }

    pub fn checked_div(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        self.checked_mul(&o.inv()?)
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        self.with(self.coords.iter().map(|a| a * k).collect())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Interval enclosure of the real value, computed from an enclosure of the
    /// root of the given width.
    fn enclose_with(&self, root: &Interval) -> Interval {
        let mut lo = BigRational::zero();
        let mut hi = BigRational::zero();
        for c in self.coords.iter().rev() {
            // [lo, hi] * [rlo, rhi] + c
            let cands = [
                &lo * &root.lo,
                &lo * &root.hi,
                &hi * &root.lo,
                &hi * &root.hi,
            ];
            let mn = cands.iter().min().unwrap().clone();
            let mx = cands.iter().max().unwrap().clone();
            lo = mn + c;
            hi = mx + c;
        }
        Interval::new(lo, hi)
    }

    /// Rational enclosure of the value whose width is at most `width`.
    pub fn enclosure(&self, width: &BigRational) -> Interval {
        let mut root = self.field.root.clone();
        loop {
            let e = self.enclose_with(&root);
            if &e.width() <= width {
                return e;
            }
            root = refine_once(&self.field.minpoly, &root);
        }
    }

    /// Sign of the real value: -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        if self.is_zero() {
            return 0;
        }
        let mut root = self.field.root.clone();
        loop {
            let e = self.enclose_with(&root);
            if e.lo.is_positive() {
                return 1;
            }
            if e.hi.is_negative() {
                return -1;
            }
            // A nonzero element cannot vanish at an irrational root; a point
            // root gives an exact enclosure, handled above.
            root = refine_once(&self.field.minpoly, &root);
        }
    }

    pub fn checked_cmp(&self, o: &Self) -> Result<Ordering> {
        Ok(match self.checked_sub(o)?.signum() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        })
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn to_f64(&self) -> f64 {
        let e = self.enclosure(&BigRational::new(1.into(), BigInt::from(2).pow(60)));
        rat_to_f64(&e.mid())
    }

    /// Decimal rendering with `digits` fractional digits, plus the width of the
    /// rational enclosure it was read from.
    pub fn decimal(&self, digits: u32) -> (String, BigRational) {
        let w = BigRational::new(1.into(), BigInt::from(10).pow(digits + 2));
        let e = self.enclosure(&w);
        (fmt_decimal(&e.mid(), digits), e.width())
    }
}

pub fn rat_to_f64(x: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or_else(|| {
        // Fall back on a scaled conversion for huge numerators and denominators.
        let shift = x.numer().bits().max(x.denom().bits()).saturating_sub(1000);
        let n = (x.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (x.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Round-half-away decimal string of a rational with a fixed digit count.
pub fn fmt_decimal(x: &BigRational, digits: u32) -> String {
    let scale = BigInt::from(10).pow(digits);
    let scaled = (x * BigRational::from_integer(scale.clone()))
        .round()
        .to_integer();
    let neg = scaled.is_negative();
    let a = scaled.abs();
    let int = &a / &scale;
    let frac = &a % &scale;
    let mut s = String::new();
    if neg {
        s.push('-');
    }
    s.push_str(&int.to_string());
    if digits > 0 {
        s.push('.');
        s.push_str(&format!(
            "{:0>width$}",
            frac.to_string(),
            width = digits as usize
        ));
    }
    s
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.to_rational() {
            return write!(f, "{r}");
        }
        let poly = RatPoly::new(self.coords.clone());
        write!(f, "{}", poly.to_string().replace('x', "L"))
    }
}

macro_rules! field_ops {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr for &AlgebraicNumber {
            type Output = AlgebraicNumber;
            /// Panics if the operands come from different fields.
            fn $m(self, o: &AlgebraicNumber) -> AlgebraicNumber {
                self.$checked(o)
                    .expect("operands from different number fields")
            }
        }
        impl $tr for AlgebraicNumber {
            type Output = AlgebraicNumber;
            fn $m(self, o: AlgebraicNumber) -> AlgebraicNumber {
                (&self).$m(&o)
            }
        }
    };
}

field_ops!(Add, add, checked_add);
field_ops!(Sub, sub, checked_sub);
field_ops!(Mul, mul, checked_mul);

impl Neg for &AlgebraicNumber {
    type Output = AlgebraicNumber;
    fn neg(self) -> AlgebraicNumber {
        self.with(self.coords.iter().map(|a| -a).collect())
    }
}

impl Neg for AlgebraicNumber {
    type Output = AlgebraicNumber;
    fn neg(self) -> AlgebraicNumber {
        -&self
    }
}

impl FieldElem for AlgebraicNumber {
    fn zero_like(&self) -> Self {
        Self::zero(&self.field)
    }
    fn one_like(&self) -> Self {
        Self::one(&self.field)
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn inv_ref(&self) -> Self {
        self.inv().expect("pivot is nonzero")
    }
}
