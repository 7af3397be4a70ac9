//! Fundamental domains and nearest-lattice-point rounding.
//!
//! Every predicate works on an integer triple `(xn, yn, n)` with `n > 0`,
//! standing for `z = (xn + yn·w)/n`. The domain inequalities only involve
//! rational linear forms once √D is cleared, so all decisions are exact.
//!
//! The half-open domain Ĩ_D keeps exactly one representative of every coset:
//!
//! * D = 2: `−1/2 ≤ x < 1/2` and `−1/2 ≤ y < 1/2` in basis coordinates;
//! * D = 7, 11: with `R = Re z` and `Y = Im z·√D`, the closed hexagon is
//!   `|R| ≤ 1/2`, `|Y ± R| ≤ (D+1)/4`. Ĩ_D drops the edges `R = 1/2`
//!   (shared with I_D + 1), `Y + R = (D+1)/4` (shared with I_D + ω) and
//!   `Y − R = −(D+1)/4` (shared with I_D + 1 − ω). The two surviving corners
//!   are the two left vertices, one per vertex orbit.

use num_rational::Ratio;
use num_traits::Zero;

use super::{BasisKind, Coord, KElem, QuadInt, RingSpec};

/// Which version of the fundamental domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Region {
    /// I_D, boundary included.
    Closed,
    /// Ĩ_D, the strict fundamental domain.
    HalfOpen,
}

/// `(xn + yn·w)/n ∈ region`, for `n > 0`.
pub fn contains_triple<T: Coord>(ring: RingSpec, xn: &T, yn: &T, n: &T, region: Region) -> bool {
    debug_assert!(n.is_positive());
    let two = T::lit(2);
    match ring.basis_kind() {
        BasisKind::Rectangular => {
            let (x2, y2) = (two.clone() * xn.clone(), two * yn.clone());
            match region {
                Region::Closed => x2.abs() <= *n && y2.abs() <= *n,
                Region::HalfOpen => {
                    let lo = -n.clone();
                    x2 >= lo && x2 < *n && y2 >= lo && y2 < *n
                }
            }
        }
        BasisKind::Hexagonal => {
            let d = ring.d() as i64;
            // 2n·Re z
            let l1 = two * xn.clone() + yn.clone();
            // 4n·(Y + R) and 4n·(Y − R)
            let l2 = T::lit(4) * xn.clone() + T::lit(2 * (d + 1)) * yn.clone();
            let l3 = T::lit(2 * (d - 1)) * yn.clone() - T::lit(4) * xn.clone();
            let c = T::lit(d + 1) * n.clone();
            match region {
                Region::Closed => l1.abs() <= *n && l2.abs() <= c && l3.abs() <= c,
                Region::HalfOpen => {
                    let lo = -n.clone();
                    let clo = -c.clone();
                    l1 >= lo && l1 < *n && l2 >= clo && l2 < c && l3 > clo && l3 <= c
                }
            }
        }
    }
}

/// The unique `α ∈ O_K` with `(xn + yn·w)/n − α ∈ Ĩ_D`.
pub fn nearest_integer_triple<T: Coord>(ring: RingSpec, xn: &T, yn: &T, n: &T) -> QuadInt<T> {
    debug_assert!(n.is_positive());
    let two_n = T::lit(2) * n.clone();
    match ring.basis_kind() {
        BasisKind::Rectangular => {
            let u = (T::lit(2) * xn.clone() + n.clone()).div_floor(&two_n);
            let v = (T::lit(2) * yn.clone() + n.clone()).div_floor(&two_n);
            QuadInt::new(ring, u, v)
        }
        BasisKind::Hexagonal => {
            // |y| < 1 on Ĩ_D, so the ω-coordinate is floor(y) or floor(y) + 1;
            // for each candidate the real-part condition fixes u.
            let fy = yn.div_floor(n);
            for v in [fy.clone(), fy + T::one()] {
                let u = (T::lit(2) * xn.clone() + yn.clone() - v.clone() * n.clone() + n.clone())
                    .div_floor(&two_n);
                let rx = xn.clone() - u.clone() * n.clone();
                let ry = yn.clone() - v.clone() * n.clone();
                if contains_triple(ring, &rx, &ry, n, Region::HalfOpen) {
                    return QuadInt::new(ring, u, v);
                }
            }
            unreachable!("Ĩ_D tiles the plane; some candidate must match")
        }
    }
}

/// A point of K given by exact rational coordinates in the integral basis:
/// `z = x + y·w`.
///
/// Cartesian form: `Re z = x` and `Im z = y·√2` for D = 2; `Re z = x + y/2`
/// and `Im z = y·√D/2` for D = 7, 11.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DomainPoint<T: Coord = num_bigint::BigInt> {
    ring: RingSpec,
    x: Ratio<T>,
    y: Ratio<T>,
}

impl<T: Coord> DomainPoint<T> {
    pub fn new(ring: RingSpec, x: Ratio<T>, y: Ratio<T>) -> Self {
        Self { ring, x, y }
    }

    pub fn from_kelem(z: &KElem<T>) -> Self {
        let (xn, yn, n) = z.triple();
        Self::new(
            z.ring(),
            Ratio::new(xn, n.clone()),
            Ratio::new(yn, n),
        )
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn x(&self) -> &Ratio<T> {
        &self.x
    }

    pub fn y(&self) -> &Ratio<T> {
        &self.y
    }

    /// Real part, exact.
    pub fn re(&self) -> Ratio<T> {
        match self.ring.basis_kind() {
            BasisKind::Rectangular => self.x.clone(),
            BasisKind::Hexagonal => self.x.clone() + self.y.clone() / T::lit(2),
        }
    }

    /// Rational factor `c` with `Im z = c·√2` (D = 2) or `Im z = c·√D` (D = 7, 11).
    pub fn im_radical_coeff(&self) -> Ratio<T> {
        match self.ring.basis_kind() {
            BasisKind::Rectangular => self.y.clone(),
            BasisKind::Hexagonal => self.y.clone() / T::lit(2),
        }
    }

    /// Common-denominator form `(xn, yn, n)` with `n > 0`.
    pub fn triple(&self) -> (T, T, T) {
        let n = self.x.denom().lcm(self.y.denom());
        let xn = self.x.numer().clone() * (n.clone() / self.x.denom().clone());
        let yn = self.y.numer().clone() * (n.clone() / self.y.denom().clone());
        (xn, yn, n)
    }

    pub fn to_kelem(&self) -> KElem<T> {
        let (xn, yn, n) = self.triple();
        KElem::new(QuadInt::new(self.ring, xn, yn), QuadInt::from_int(self.ring, n))
            .expect("denominator is positive")
    }

    pub fn contains(&self, region: Region) -> bool {
        let (xn, yn, n) = self.triple();
        contains_triple(self.ring, &xn, &yn, &n, region)
    }

    pub fn nearest_integer(&self) -> QuadInt<T> {
        let (xn, yn, n) = self.triple();
        nearest_integer_triple(self.ring, &xn, &yn, &n)
    }

    /// `self − α`.
    pub fn translate_by(&self, alpha: &QuadInt<T>) -> Self {
        Self::new(
            self.ring,
            self.x.clone() - Ratio::from_integer(alpha.u().clone()),
            self.y.clone() - Ratio::from_integer(alpha.v().clone()),
        )
    }

    pub fn to_complex(&self) -> (f64, f64) {
        let f = |r: &Ratio<T>| {
            r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
        };
        let (wr, wi) = self.ring.basis_element();
        let (x, y) = (f(&self.x), f(&self.y));
        (x + y * wr, y * wi)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }
}
