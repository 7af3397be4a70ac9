//! Normalized Sczech sums, the cost functional S, and classical Dedekind sums.
//!
//! `imd(x) = (2/√D)·Im x` is rational on K: it is `2v` for `x = u + v√−2`
//! and `v` for `x = u + vω`. With `a/c = [a_0; a_1, …, a_n]` the normalized
//! sum is
//!
//! ```text
//! D̃(a/c) = imd( P(0,a_1..a_n)/P(a_1..a_n) + (−1)^{n+1} P(0,a_n..a_1)/P(a_n..a_1)
//!               + a_1 − a_2 + … + (−1)^{n+1} a_n )
//! ```
//!
//! and `S` is the alternating digit part alone.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::hurwitz_cf::{cf_expand, convergents, CfError, CfExpansion};
use crate::quad_ring::{BasisKind, Coord, KElem, QuadInt, RingError, RingSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SczechError {
    #[error("zero argument")]
    Zero,
    #[error("arguments are not coprime (gcd {0})")]
    NotCoprime(String),
    #[error("tail continuant P(a_{0}, …, a_n) vanishes")]
    VanishingTail(usize),
    #[error("classical Dedekind sum needs k > 0 and gcd(h, k) = 1, got ({0}, {1})")]
    BadClassical(i64, i64),
    #[error(transparent)]
    Cf(#[from] CfError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// `imd` of a ring element.
pub fn imd_int<T: Coord>(x: &QuadInt<T>) -> T {
    match x.ring().basis_kind() {
        BasisKind::Rectangular => T::lit(2) * x.v().clone(),
        BasisKind::Hexagonal => x.v().clone(),
    }
}

/// `imd(p/q)` for `q ≠ 0`, without reducing the fraction.
pub fn imd_quotient<T: Coord>(p: &QuadInt<T>, q: &QuadInt<T>) -> Result<Ratio<T>, RingError> {
    let top = p.try_mul(&q.conj())?;
    Ok(Ratio::new(imd_int(&top), q.norm()))
}

pub fn imd<T: Coord>(x: &KElem<T>) -> Ratio<T> {
    imd_quotient(x.num(), x.den()).expect("reduced elements stay in range")
}

/// Confirms `P(a_m, …, a_n) ≠ 0` for `m = 1..=n`.
pub fn check_tail_continuants<T: Coord>(ring: RingSpec, digits: &[QuadInt<T>]) -> Result<(), SczechError> {
    // backward recursion P(a_m..a_n) = a_m·P(a_{m+1}..a_n) + P(a_{m+2}..a_n)
    let mut next = QuadInt::one(ring);
    let mut next2 = QuadInt::zero(ring);
    for (m, a) in digits.iter().enumerate().rev() {
        let cur = a.try_mul(&next)?.try_add(&next2)?;
        if cur.is_zero() {
            return Err(SczechError::VanishingTail(m + 1));
        }
        next2 = std::mem::replace(&mut next, cur);
    }
    Ok(())
}

/// Alternating digit sum `Σ (−1)^{j+1} imd(α_j)`, an integer.
pub fn cost_from_cf<T: Coord>(cf: &CfExpansion<T>) -> T {
    let mut s = T::zero();
    for (j, a) in cf.digits.iter().enumerate() {
        if j % 2 == 0 {
            s = s + imd_int(a);
        } else {
            s = s - imd_int(a);
        }
    }
    s
}

/// D̃ from an expansion, together with S.
pub fn dtilde_from_cf<T: Coord>(cf: &CfExpansion<T>) -> Result<(Ratio<T>, T), SczechError> {
    let s = cost_from_cf(cf);
    let n = cf.len();
    if n == 0 {
        return Ok((Ratio::zero(), s));
    }
    let ring = cf.ring();
    check_tail_continuants(ring, &cf.digits)?;
    let conv = convergents(&QuadInt::zero(ring), &cf.digits)?;
    let (p_n, q_n) = &conv[n];
    let q_prev = &conv[n - 1].1;
    let r1 = imd_quotient(p_n, q_n)?;
    let r2 = imd_quotient(q_prev, q_n)?;
    let ends = if n % 2 == 1 { r1 + r2 } else { r1 - r2 };
    Ok((ends + Ratio::from_integer(s.clone()), s))
}

/// D̃(a, c) = D̃(a/c); zero when `c` is a unit.
pub fn sczech_tilde<T: Coord>(a: &QuadInt<T>, c: &QuadInt<T>) -> Result<Ratio<T>, SczechError> {
    if c.is_zero() {
        return Err(SczechError::Zero);
    }
    let z = KElem::new(a.clone(), c.clone())?;
    Ok(dtilde_from_cf(&cf_expand(&z)?)?.0)
}

/// S(z).
pub fn cost_s<T: Coord>(z: &KElem<T>) -> Result<T, SczechError> {
    Ok(cost_from_cf(&cf_expand(z)?))
}

/// `D̃(a,c) + D̃(c,a) − imd(a/c + c/a + 1/(ac))`, which should vanish identically.
pub fn reciprocity_defect<T: Coord>(a: &QuadInt<T>, c: &QuadInt<T>) -> Result<Ratio<T>, SczechError> {
    if a.is_zero() || c.is_zero() {
        return Err(SczechError::Zero);
    }
    let g = a.gcd(c)?;
    if !g.is_unit() {
        return Err(SczechError::NotCoprime(g.to_string()));
    }
    let lhs = sczech_tilde(a, c)? + sczech_tilde(c, a)?;
    let one = QuadInt::one(a.ring());
    let top = a.try_mul(a)?.try_add(&c.try_mul(c)?)?.try_add(&one)?;
    let rhs = imd_quotient(&top, &a.try_mul(c)?)?;
    Ok(lhs - rhs)
}

/// One Farey point with its exact statistics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SczechSample<T: Coord = BigInt> {
    pub z: KElem<T>,
    pub height_sq: T,
    pub ell: usize,
    /// S is always an integer.
    pub s: T,
    pub dtilde: Ratio<T>,
}

impl<T: Coord> SczechSample<T> {
    pub fn compute(z: KElem<T>) -> Result<Self, SczechError> {
        let cf = cf_expand(&z)?;
        let (dtilde, s) = dtilde_from_cf(&cf)?;
        Ok(Self { height_sq: z.height_sq(), ell: cf.len(), s, dtilde, z })
    }

    pub fn dtilde_f64(&self) -> f64 {
        ratio_to_f64(&self.dtilde)
    }

    pub fn s_f64(&self) -> f64 {
        self.s.to_f64().unwrap_or(f64::NAN)
    }
}

pub(crate) fn ratio_to_f64<T: Coord>(r: &Ratio<T>) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

#[derive(Serialize)]
pub struct SczechReport {
    #[serde(rename = "Dtilde")]
    pub dtilde: String,
    #[serde(rename = "S")]
    pub s: String,
    pub ell: usize,
    pub defect: String,
}

/// Exact classical Dedekind sum `𝔰(h,k) = Σ_{l=1}^{k−1} ((l/k))((hl/k))`.
///
/// For `0 < l < k` and `gcd(h,k) = 1` neither argument is an integer, so each
/// term is `(2l − k)(2(hl mod k) − k)/(4k²)`.
pub fn classical_dedekind(h: i64, k: i64) -> Result<Ratio<i64>, SczechError> {
    if k <= 0 || h.gcd(&k) != 1 {
        return Err(SczechError::BadClassical(h, k));
    }
    let (hh, kk) = (h.rem_euclid(k) as i128, k as i128);
    let mut acc: i128 = 0;
    for l in 1..kk {
        acc += (2 * l - kk) * (2 * ((hh * l) % kk) - kk);
    }
    let r = Ratio::new(acc, 4 * kk * kk);
    Ok(Ratio::new(
        i64::try_from(*r.numer()).expect("numerator fits"),
        i64::try_from(*r.denom()).expect("denominator fits"),
    ))
}

/// `𝔰(h,k)` by the Euclidean descent through `𝔰(h,k) + 𝔰(k,h) = (h/k + k/h + 1/(hk))/12 − 1/4`.
pub fn classical_dedekind_fast(h: i64, k: i64) -> Result<Ratio<i128>, SczechError> {
    if k <= 0 || h.gcd(&k) != 1 {
        return Err(SczechError::BadClassical(h, k));
    }
    let (mut h, mut k) = (h.rem_euclid(k) as i128, k as i128);
    let mut acc = Ratio::<i128>::zero();
    let mut sign = Ratio::<i128>::one();
    let quarter = Ratio::new(1, 4);
    while k > 1 {
        let term = Ratio::new(h * h + k * k + 1, 12 * h * k) - quarter;
        acc += sign * term;
        sign = -sign;
        let r = k % h;
        k = h;
        h = r;
    }
    Ok(acc)
}

/// Float value of `𝔰(h,k)` by the same descent, for bulk sampling.
pub fn classical_dedekind_f64(h: i64, k: i64) -> f64 {
    let (mut h, mut k) = (h.rem_euclid(k) as f64, k as f64);
    let mut acc = 0.0;
    let mut sign = 1.0;
    while k > 1.0 {
        acc += sign * ((h * h + k * k + 1.0) / (12.0 * h * k) - 0.25);
        sign = -sign;
        let r = k % h;
        k = h;
        h = r;
    }
    acc
}
