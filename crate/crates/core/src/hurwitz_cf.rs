//! Hurwitz continued fractions over O_K.
//!
//! The Gauss map is `G(z) = 1/z − [1/z]` with `[·]` the rounding into Ĩ_D.
//! Every iterate is kept as a reduced fraction; because `next = r/a` with
//! `r = c − α·a`, coprimality of `(a, c)` is inherited and no gcd is needed
//! after the first reduction.

use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::quad_ring::{contains_triple, Coord, KElem, QuadInt, Region, RingError, RingSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CfError {
    #[error("the Gauss map is undefined at 0")]
    Zero,
    #[error("point {0} lies outside the closed fundamental domain")]
    OutsideDomain(String),
    #[error("empty digit list")]
    EmptyDigits,
    #[error("continuant P({0}) vanishes")]
    VanishingContinuant(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// `z = a0 + 1/(α_1 + 1/(α_2 + … + 1/α_ℓ))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CfExpansion<T: Coord = BigInt> {
    pub a0: QuadInt<T>,
    pub digits: Vec<QuadInt<T>>,
}

impl<T: Coord> CfExpansion<T> {
    /// ℓ(z).
    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn ring(&self) -> RingSpec {
        self.a0.ring()
    }

    /// Evaluate `a0 + h_{α_1}∘…∘h_{α_ℓ}(0)` from the inside out.
    pub fn reconstruct(&self) -> Result<KElem<T>, CfError> {
        let ring = self.ring();
        let mut w = KElem::zero(ring);
        for alpha in self.digits.iter().rev() {
            w = w.add_int(alpha)?.inv()?;
        }
        Ok(w.add_int(&self.a0)?)
    }
}

impl<T: Coord> fmt::Display for CfExpansion<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}", self.a0)?;
        for (i, a) in self.digits.iter().enumerate() {
            write!(f, "{}{}", if i == 0 { "; " } else { ", " }, a)?;
        }
        write!(f, "]")
    }
}

/// One step of the Hurwitz map on `z ∈ I_D \ {0}`: returns `([1/z], 1/z − [1/z])`.
pub fn gauss_step<T: Coord>(z: &KElem<T>) -> Result<(QuadInt<T>, KElem<T>), CfError> {
    if z.is_zero() {
        return Err(CfError::Zero);
    }
    let (xn, yn, n) = z.triple();
    if !contains_triple(z.ring(), &xn, &yn, &n, Region::Closed) {
        return Err(CfError::OutsideDomain(z.to_string()));
    }
    Ok(gauss_step_unchecked(z.num(), z.den())?)
}

/// `c/a ↦ ([c/a], (c − [c/a]·a)/a)` on a coprime pair, skipping the domain check.
fn gauss_step_unchecked<T: Coord>(
    a: &QuadInt<T>,
    c: &QuadInt<T>,
) -> Result<(QuadInt<T>, KElem<T>), RingError> {
    let (digit, r) = c.div_round(a)?;
    Ok((digit, KElem::from_coprime(r, a.clone())))
}

/// Full expansion. `a0 = [z]` is split off first, so every later iterate
/// lies in Ĩ_D.
pub fn cf_expand<T: Coord>(z: &KElem<T>) -> Result<CfExpansion<T>, CfError> {
    let (a0, r) = z.num().div_round(z.den())?;
    let mut cur = KElem::from_coprime(r, z.den().clone());
    let mut digits = Vec::new();
    while !cur.is_zero() {
        let (digit, next) = gauss_step_unchecked(cur.num(), cur.den())?;
        debug_assert!(next.height_sq() < cur.height_sq());
        digits.push(digit);
        cur = next;
    }
    Ok(CfExpansion { a0, digits })
}

/// The iterates `z − a0, G(z − a0), …, 0`, for inspection of the Euclidean descent.
pub fn orbit<T: Coord>(z: &KElem<T>) -> Result<Vec<KElem<T>>, CfError> {
    let (_, r) = z.num().div_round(z.den())?;
    let mut cur = KElem::from_coprime(r, z.den().clone());
    let mut out = vec![cur.clone()];
    while !cur.is_zero() {
        cur = gauss_step_unchecked(cur.num(), cur.den())?.1;
        out.push(cur.clone());
    }
    Ok(out)
}

/// P(a_0, …, a_m) via `P(..., a_m) = P(..., a_{m−1})·a_m + P(..., a_{m−2})`;
/// P() = 1.
pub fn continuant<T: Coord>(ring: RingSpec, seq: &[QuadInt<T>]) -> Result<QuadInt<T>, RingError> {
    let mut prev = QuadInt::zero(ring);
    let mut cur = QuadInt::one(ring);
    for a in seq {
        let next = cur.try_mul(a)?.try_add(&prev)?;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// `(p_n, q_n)` for `n = 0..=ℓ`, with `p_n = P(a0, α_1..α_n)` and `q_n = P(α_1..α_n)`.
pub fn convergents<T: Coord>(
    a0: &QuadInt<T>,
    digits: &[QuadInt<T>],
) -> Result<Vec<(QuadInt<T>, QuadInt<T>)>, RingError> {
    let ring = a0.ring();
    let (mut p_prev, mut q_prev) = (QuadInt::one(ring), QuadInt::zero(ring));
    let (mut p, mut q) = (a0.clone(), QuadInt::one(ring));
    let mut out = Vec::with_capacity(digits.len() + 1);
    out.push((p.clone(), q.clone()));
    for a in digits {
        let p_next = p.try_mul(a)?.try_add(&p_prev)?;
        let q_next = q.try_mul(a)?.try_add(&q_prev)?;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
        out.push((p.clone(), q.clone()));
    }
    Ok(out)
}

/// Checks `p_n·q_{n−1} − p_{n−1}·q_n = (−1)^{n+1}` for every consecutive pair;
/// returns the first failing `n`.
pub fn check_determinants<T: Coord>(conv: &[(QuadInt<T>, QuadInt<T>)]) -> Result<(), usize> {
    for n in 1..conv.len() {
        let (p, q) = &conv[n];
        let (pp, qp) = &conv[n - 1];
        let det = p * qp - pp * q;
        let expect = if n % 2 == 1 { QuadInt::one(p.ring()) } else { -QuadInt::one(p.ring()) };
        if det != expect {
            return Err(n);
        }
    }
    Ok(())
}

/// `P(0, α_1..α_ℓ)/P(α_1..α_ℓ)` and `P(0, α_ℓ..α_1)/P(α_ℓ..α_1)`.
///
/// The palindrome identity gives `P(α_ℓ..α_1) = q_ℓ` and
/// `P(0, α_ℓ..α_1) = q_{ℓ−1}`; both are recomputed from the reversed list
/// and compared.
pub fn reversed_tail_ratios<T: Coord>(
    ring: RingSpec,
    digits: &[QuadInt<T>],
) -> Result<(KElem<T>, KElem<T>), CfError> {
    if digits.is_empty() {
        return Err(CfError::EmptyDigits);
    }
    let conv = convergents(&QuadInt::zero(ring), digits)?;
    let (p_n, q_n) = conv.last().cloned().expect("non-empty");
    let q_prev = conv[conv.len() - 2].1.clone();

    let rev: Vec<_> = digits.iter().rev().cloned().collect();
    let rev_den = continuant(ring, &rev)?;
    let mut zero_rev = vec![QuadInt::zero(ring)];
    zero_rev.extend(rev.iter().cloned());
    let rev_num = continuant(ring, &zero_rev)?;
    assert_eq!(rev_den, q_n, "palindrome identity failed");
    assert_eq!(rev_num, q_prev, "palindrome identity failed");

    if q_n.is_zero() {
        let names: Vec<_> = digits.iter().map(|d| d.to_string()).collect();
        return Err(CfError::VanishingContinuant(names.join(", ")));
    }
    Ok((KElem::new(p_n, q_n.clone())?, KElem::new(q_prev, q_n)?))
}

/// Expansion of `a/c` in one call, for callers holding a raw pair.
pub fn cf_expand_pair<T: Coord>(a: &QuadInt<T>, c: &QuadInt<T>) -> Result<CfExpansion<T>, CfError> {
    cf_expand(&KElem::new(a.clone(), c.clone())?)
}

#[derive(Serialize)]
pub struct CfReport {
    pub a0: String,
    pub digits: Vec<String>,
    pub convergents: Vec<(String, String)>,
    pub ell: usize,
}

impl CfReport {
    pub fn new<T: Coord>(cf: &CfExpansion<T>) -> Result<Self, CfError> {
        let conv = convergents(&cf.a0, &cf.digits)?;
        Ok(Self {
            a0: cf.a0.to_string(),
            digits: cf.digits.iter().map(|d| d.to_string()).collect(),
            convergents: conv.iter().map(|(p, q)| (p.to_string(), q.to_string())).collect(),
            ell: cf.len(),
        })
    }
}
