use std::fmt;

use num_bigint::BigInt;

use super::{Coord, QuadInt, RingError, RingSpec};

/// A field element `num/den` of K = Q(√−D), always kept reduced
/// (gcd(num, den) is a unit) with `den` in canonical unit orbit.
/// Equality and hashing are therefore equality of field elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KElem<T: Coord = BigInt> {
    num: QuadInt<T>,
    den: QuadInt<T>,
}

impl<T: Coord> KElem<T> {
    /// Reduce `num/den` to canonical form.
    pub fn new(num: QuadInt<T>, den: QuadInt<T>) -> Result<Self, RingError> {
        num.ring().check(den.ring())?;
        if den.is_zero() {
            return Err(RingError::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(Self::zero(num.ring()));
        }
        let g = num.gcd(&den)?;
        let num = num.divides_exactly(&g)?.expect("gcd divides");
        let den = den.divides_exactly(&g)?.expect("gcd divides");
        Ok(Self::from_coprime(num, den))
    }

    /// Build from an already coprime pair; only the unit normalization is applied.
    pub(crate) fn from_coprime(num: QuadInt<T>, den: QuadInt<T>) -> Self {
        debug_assert!(!den.is_zero());
        if den.is_canonical() {
            Self { num, den }
        } else {
            Self { num: -num, den: -den }
        }
    }

    pub fn zero(ring: RingSpec) -> Self {
        Self { num: QuadInt::zero(ring), den: QuadInt::one(ring) }
    }

    pub fn from_int(x: QuadInt<T>) -> Self {
        let ring = x.ring();
        Self { num: x, den: QuadInt::one(ring) }
    }

    pub fn ring(&self) -> RingSpec {
        self.num.ring()
    }

    pub fn num(&self) -> &QuadInt<T> {
        &self.num
    }

    pub fn den(&self) -> &QuadInt<T> {
        &self.den
    }

    pub fn into_parts(self) -> (QuadInt<T>, QuadInt<T>) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_unit()
    }

    /// |den|², the squared height.
    pub fn height_sq(&self) -> T {
        self.den.norm()
    }

    /// `(xn, yn, n)` with `self = (xn + yn·w)/n`, `n = |den|² > 0`.
    pub fn triple(&self) -> (T, T, T) {
        let p = &self.num * &self.den.conj();
        let (xn, yn) = p.into_parts();
        (xn, yn, self.den.norm())
    }

    pub fn neg(&self) -> Self {
        Self { num: -&self.num, den: self.den.clone() }
    }

    pub fn conj(&self) -> Self {
        Self::from_coprime(self.num.conj(), self.den.conj())
    }

    pub fn inv(&self) -> Result<Self, RingError> {
        if self.is_zero() {
            return Err(RingError::ZeroDenominator);
        }
        Ok(Self::from_coprime(self.den.clone(), self.num.clone()))
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, RingError> {
        let num = self.num.try_mul(&rhs.den)?.try_add(&rhs.num.try_mul(&self.den)?)?;
        Self::new(num, self.den.try_mul(&rhs.den)?)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, RingError> {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, RingError> {
        Self::new(self.num.try_mul(&rhs.num)?, self.den.try_mul(&rhs.den)?)
    }

    pub fn div(&self, rhs: &Self) -> Result<Self, RingError> {
        self.mul(&rhs.inv()?)
    }

    pub fn add_int(&self, alpha: &QuadInt<T>) -> Result<Self, RingError> {
        let num = self.num.try_add(&alpha.try_mul(&self.den)?)?;
        Ok(Self::from_coprime(num, self.den.clone()))
    }

    pub fn to_complex(&self) -> (f64, f64) {
        let (nr, ni) = self.num.to_complex();
        let (dr, di) = self.den.to_complex();
        let d = dr * dr + di * di;
        ((nr * dr + ni * di) / d, (ni * dr - nr * di) / d)
    }

    pub fn convert<U: Coord>(&self) -> Result<KElem<U>, RingError> {
        Ok(KElem { num: self.num.convert()?, den: self.den.convert()? })
    }

    pub fn to_big(&self) -> KElem<BigInt> {
        KElem { num: self.num.to_big(), den: self.den.to_big() }
    }
}

impl<T: Coord> fmt::Display for KElem<T> {
    /// `num/den`, e.g. `0+1*w/2+0*w`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}
