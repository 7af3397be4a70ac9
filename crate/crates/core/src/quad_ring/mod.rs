//! Exact arithmetic in the ring of integers of Q(√−D) for D ∈ {2, 7, 11}.
//!
//! Elements are stored in an integral basis `u + v·w`, where `w = √−2` for
//! D = 2 (rectangular lattice) and `w = (1 + √−D)/2` for D = 7, 11
//! (hexagonal lattice). The coordinate type is generic: [`BigInt`] is the
//! default and never overflows, while `i64` is used by the bulk pipelines
//! (the workspace builds with overflow checks enabled, so an overflow panics
//! instead of producing a wrong answer).

mod domain;
mod elem;
mod parse;

pub use domain::{contains_triple, nearest_integer_triple, DomainPoint, Region};
pub use elem::KElem;
pub use parse::ParseError;

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("unsupported discriminant D = {0}; only 2, 7 and 11 are supported")]
    UnsupportedD(u32),
    #[error("ring mismatch: D = {0} vs D = {1}")]
    Mismatch(u32, u32),
    #[error("gcd of two zero elements is undefined")]
    BothZero,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("coordinate does not fit the target integer type")]
    Overflow,
}

/// Integer types usable as lattice coordinates.
pub trait Coord:
    Clone
    + fmt::Debug
    + fmt::Display
    + Eq
    + Ord
    + Hash
    + Integer
    + Signed
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    fn lit(v: i64) -> Self {
        <Self as FromPrimitive>::from_i64(v).expect("small literal fits every coordinate type")
    }

    fn to_bigint(&self) -> BigInt;

    fn from_bigint(b: &BigInt) -> Option<Self>;
}

impl Coord for i64 {
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn from_bigint(b: &BigInt) -> Option<Self> {
        b.to_i64()
    }
}

impl Coord for i128 {
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn from_bigint(b: &BigInt) -> Option<Self> {
        b.to_i128()
    }
}

impl Coord for BigInt {
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
    fn from_bigint(b: &BigInt) -> Option<Self> {
        Some(b.clone())
    }
}

/// Shape of the integral basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisKind {
    /// basis 1, √−2
    Rectangular,
    /// basis 1, ω = (1 + √−D)/2
    Hexagonal,
}

/// The ring O_K for one of the supported discriminants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RingSpec {
    d: u32,
}

impl RingSpec {
    pub const SUPPORTED: [u32; 3] = [2, 7, 11];

    pub fn new(d: u32) -> Result<Self, RingError> {
        if Self::SUPPORTED.contains(&d) {
            Ok(Self { d })
        } else {
            Err(RingError::UnsupportedD(d))
        }
    }

    pub fn d(self) -> u32 {
        self.d
    }

    pub fn basis_kind(self) -> BasisKind {
        if self.d == 2 {
            BasisKind::Rectangular
        } else {
            BasisKind::Hexagonal
        }
    }

    pub fn is_hexagonal(self) -> bool {
        self.basis_kind() == BasisKind::Hexagonal
    }

    /// The unit group, which is {+1, −1} for every supported D.
    pub fn units(self) -> [i64; 2] {
        [1, -1]
    }

    /// `m` with ω² = ω − m for the hexagonal rings (m = (D+1)/4).
    pub(crate) fn omega_const(self) -> i64 {
        (self.d as i64 + 1) / 4
    }

    /// Area of a fundamental domain of the lattice, i.e. vol(I_D).
    pub fn covolume(self) -> f64 {
        match self.basis_kind() {
            BasisKind::Rectangular => 2f64.sqrt(),
            BasisKind::Hexagonal => (self.d as f64).sqrt() / 2.0,
        }
    }

    /// Complex embedding of the basis element `w`.
    pub fn basis_element(self) -> (f64, f64) {
        match self.basis_kind() {
            BasisKind::Rectangular => (0.0, 2f64.sqrt()),
            BasisKind::Hexagonal => (0.5, (self.d as f64).sqrt() / 2.0),
        }
    }

    pub(crate) fn check(self, other: RingSpec) -> Result<(), RingError> {
        if self == other {
            Ok(())
        } else {
            Err(RingError::Mismatch(self.d, other.d))
        }
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(sqrt(-{}))", self.d)
    }
}

/// An algebraic integer `u + v·w`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadInt<T = BigInt> {
    ring: RingSpec,
    u: T,
    v: T,
}

impl<T: Coord> QuadInt<T> {
    pub fn new(ring: RingSpec, u: T, v: T) -> Self {
        Self { ring, u, v }
    }

    pub fn from_i64s(ring: RingSpec, u: i64, v: i64) -> Self {
        Self::new(ring, T::lit(u), T::lit(v))
    }

    pub fn zero(ring: RingSpec) -> Self {
        Self::from_i64s(ring, 0, 0)
    }

    pub fn one(ring: RingSpec) -> Self {
        Self::from_i64s(ring, 1, 0)
    }

    /// The basis element `w` (√−2 or ω).
    pub fn w(ring: RingSpec) -> Self {
        Self::from_i64s(ring, 0, 1)
    }

    pub fn from_int(ring: RingSpec, n: T) -> Self {
        Self::new(ring, n, T::zero())
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn u(&self) -> &T {
        &self.u
    }

    pub fn v(&self) -> &T {
        &self.v
    }

    pub fn into_parts(self) -> (T, T) {
        (self.u, self.v)
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    /// Rational integers, i.e. v = 0.
    pub fn is_rational(&self) -> bool {
        self.v.is_zero()
    }

    /// u² + 2v² (D = 2) or u² + uv + v²(D+1)/4 (D = 7, 11).
    pub fn norm(&self) -> T {
        let (u, v) = (&self.u, &self.v);
        match self.ring.basis_kind() {
            BasisKind::Rectangular => u.clone() * u.clone() + T::lit(2) * v.clone() * v.clone(),
            BasisKind::Hexagonal => {
                u.clone() * u.clone()
                    + u.clone() * v.clone()
                    + T::lit(self.ring.omega_const()) * v.clone() * v.clone()
            }
        }
    }

    /// Complex conjugation; conj(ω) = 1 − ω in the hexagonal case.
    pub fn conj(&self) -> Self {
        match self.ring.basis_kind() {
            BasisKind::Rectangular => Self::new(self.ring, self.u.clone(), -self.v.clone()),
            BasisKind::Hexagonal => {
                Self::new(self.ring, self.u.clone() + self.v.clone(), -self.v.clone())
            }
        }
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self, RingError> {
        self.ring.check(rhs.ring)?;
        Ok(Self::new(
            self.ring,
            self.u.clone() + rhs.u.clone(),
            self.v.clone() + rhs.v.clone(),
        ))
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self, RingError> {
        self.ring.check(rhs.ring)?;
        Ok(Self::new(
            self.ring,
            self.u.clone() - rhs.u.clone(),
            self.v.clone() - rhs.v.clone(),
        ))
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self, RingError> {
        self.ring.check(rhs.ring)?;
        let (a, b, c, d) = (&self.u, &self.v, &rhs.u, &rhs.v);
        let bd = b.clone() * d.clone();
        let cross = a.clone() * d.clone() + b.clone() * c.clone();
        Ok(match self.ring.basis_kind() {
            // w² = −2
            BasisKind::Rectangular => {
                Self::new(self.ring, a.clone() * c.clone() - T::lit(2) * bd, cross)
            }
            // ω² = ω − m
            BasisKind::Hexagonal => Self::new(
                self.ring,
                a.clone() * c.clone() - T::lit(self.ring.omega_const()) * bd.clone(),
                cross + bd,
            ),
        })
    }

    pub fn scale(&self, k: &T) -> Self {
        Self::new(self.ring, self.u.clone() * k.clone(), self.v.clone() * k.clone())
    }

    /// Returns `Some(q)` with `self = q·divisor` when the division is exact.
    pub fn divides_exactly(&self, divisor: &Self) -> Result<Option<Self>, RingError> {
        self.ring.check(divisor.ring)?;
        if divisor.is_zero() {
            return Err(RingError::ZeroDenominator);
        }
        let n = divisor.norm();
        let p = self.try_mul(&divisor.conj())?;
        let (qu, ru) = p.u.div_rem(&n);
        let (qv, rv) = p.v.div_rem(&n);
        if ru.is_zero() && rv.is_zero() {
            Ok(Some(Self::new(self.ring, qu, qv)))
        } else {
            Ok(None)
        }
    }

    /// The associate whose first nonzero coordinate is positive.
    pub fn canonical(&self) -> Self {
        if self.is_canonical() {
            self.clone()
        } else {
            -self
        }
    }

    /// Zero counts as canonical.
    pub fn is_canonical(&self) -> bool {
        self.u.is_positive() || (self.u.is_zero() && !self.v.is_negative())
    }

    /// Nearest-integer division: `self = q·divisor + r` with `r/divisor ∈ Ĩ_D`.
    pub fn div_round(&self, divisor: &Self) -> Result<(Self, Self), RingError> {
        self.ring.check(divisor.ring)?;
        if divisor.is_zero() {
            return Err(RingError::ZeroDenominator);
        }
        let p = self.try_mul(&divisor.conj())?;
        let q = nearest_integer_triple(self.ring, &p.u, &p.v, &divisor.norm());
        let r = self.try_sub(&q.try_mul(divisor)?)?;
        Ok((q, r))
    }

    /// Euclidean gcd, normalized to its canonical associate.
    pub fn gcd(&self, other: &Self) -> Result<Self, RingError> {
        self.ring.check(other.ring)?;
        if self.is_zero() && other.is_zero() {
            return Err(RingError::BothZero);
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_round(&b)?;
            debug_assert!(r.norm() < b.norm(), "Euclidean remainder must shrink");
            a = b;
            b = r;
        }
        Ok(a.canonical())
    }

    /// Approximate complex embedding.
    pub fn to_complex(&self) -> (f64, f64) {
        let u = self.u.to_f64().unwrap_or(f64::NAN);
        let v = self.v.to_f64().unwrap_or(f64::NAN);
        let (wr, wi) = self.ring.basis_element();
        (u + v * wr, v * wi)
    }

    pub fn convert<U: Coord>(&self) -> Result<QuadInt<U>, RingError> {
        let cvt = |x: &T| U::from_bigint(&x.to_bigint()).ok_or(RingError::Overflow);
        Ok(QuadInt::new(self.ring, cvt(&self.u)?, cvt(&self.v)?))
    }

    pub fn to_big(&self) -> QuadInt<BigInt> {
        QuadInt::new(self.ring, self.u.to_bigint(), self.v.to_bigint())
    }
}

impl QuadInt<BigInt> {
    /// Narrow to `i64` coordinates when they fit.
    pub fn to_small(&self) -> Result<QuadInt<i64>, RingError> {
        self.convert()
    }
}

impl<T: Coord> fmt::Display for QuadInt<T> {
    /// `u+v*w` / `u-v*w`, with `w` the basis element of the ring.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.v.is_negative() {
            write!(f, "{}-{}*w", self.u, self.v.abs())
        } else {
            write!(f, "{}+{}*w", self.u, self.v)
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<'a, T: Coord> $tr<&'a QuadInt<T>> for &'a QuadInt<T> {
            type Output = QuadInt<T>;
            /// Panics when the operands live in different rings.
            fn $method(self, rhs: &'a QuadInt<T>) -> QuadInt<T> {
                self.$checked(rhs).expect("QuadInt operands must share a ring")
            }
        }
        impl<T: Coord> $tr for QuadInt<T> {
            type Output = QuadInt<T>;
            fn $method(self, rhs: QuadInt<T>) -> QuadInt<T> {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl<T: Coord> Neg for &QuadInt<T> {
    type Output = QuadInt<T>;
    fn neg(self) -> QuadInt<T> {
        QuadInt::new(self.ring, -self.u.clone(), -self.v.clone())
    }
}

impl<T: Coord> Neg for QuadInt<T> {
    type Output = QuadInt<T>;
    fn neg(self) -> QuadInt<T> {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(d: u32) -> RingSpec {
        RingSpec::new(d).unwrap()
    }

    fn q(d: u32, u: i64, v: i64) -> QuadInt {
        QuadInt::from_i64s(r(d), u, v)
    }

    #[test]
    fn rejects_unsupported_discriminants() {
        for d in [0, 1, 3, 5, 19] {
            assert_eq!(RingSpec::new(d), Err(RingError::UnsupportedD(d)));
        }
        assert_eq!(r(7).units(), [1, -1]);
    }

    #[test]
    fn basis_squares() {
        // (√−2)² = −2
        assert_eq!(q(2, 0, 1) * q(2, 0, 1), q(2, -2, 0));
        // ω·conj(ω) = 2 for D = 7
        let w = q(7, 0, 1);
        assert_eq!(&w * &w.conj(), q(7, 2, 0));
        assert_eq!(w.norm(), BigInt::from(2));
        // ω² = ω − 3 for D = 11
        assert_eq!(q(11, 0, 1) * q(11, 0, 1), q(11, -3, 1));
    }

    #[test]
    fn norm_examples() {
        assert_eq!(q(2, 3, 2).norm(), BigInt::from(17));
        assert_eq!(q(7, 1, 1).norm(), BigInt::from(1 + 1 + 2));
    }

    #[test]
    fn mismatched_rings_are_rejected() {
        assert_eq!(q(2, 1, 0).try_add(&q(7, 1, 0)), Err(RingError::Mismatch(2, 7)));
        assert!(q(2, 1, 0).gcd(&q(11, 1, 0)).is_err());
    }

    #[test]
    fn exact_division() {
        let a = q(7, 3, -2);
        let b = q(7, 1, 4);
        let prod = &a * &b;
        assert_eq!(prod.divides_exactly(&b).unwrap(), Some(a.clone()));
        assert_eq!(q(7, 1, 0).divides_exactly(&q(7, 0, 1)).unwrap(), None);
        assert_eq!(a.divides_exactly(&q(7, 0, 0)), Err(RingError::ZeroDenominator));
    }

    #[test]
    fn gcd_examples() {
        // 2 = −(√−2)²
        assert_eq!(q(2, 2, 0).gcd(&q(2, 0, 1)).unwrap(), q(2, 0, 1));
        assert_eq!(q(2, 3, 0).gcd(&q(2, 5, 0)).unwrap(), q(2, 1, 0));
        assert_eq!(q(2, -4, 3).gcd(&q(2, 0, 0)).unwrap(), q(2, 4, -3));
        assert_eq!(q(7, 0, 0).gcd(&q(7, 0, 0)), Err(RingError::BothZero));
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(q(2, -1, 5).canonical(), q(2, 1, -5));
        assert_eq!(q(2, 0, -3).canonical(), q(2, 0, 3));
        assert!(q(11, 0, 0).is_canonical());
    }

    #[test]
    fn display_format() {
        assert_eq!(q(2, 3, -2).to_string(), "3-2*w");
        assert_eq!(q(7, 0, 1).to_string(), "0+1*w");
    }

    #[test]
    fn small_and_big_agree() {
        let a = q(11, 123, -77);
        let b = q(11, -5, 19);
        let (sa, sb) = (a.to_small().unwrap(), b.to_small().unwrap());
        assert_eq!((&sa * &sb).to_big(), &a * &b);
        assert_eq!(sa.gcd(&sb).unwrap().to_big(), a.gcd(&b).unwrap());
    }
}
