//! The Farey sets K_{•,D}(X) = {a/b ∈ I_D : 1 ≤ |b|² < X}.
//!
//! Denominators are taken one per unit orbit and numerators coprime to them,
//! so every field element appears once. Work is split by denominator and the
//! output order is fixed by the denominator order, independent of threads.

use num_integer::{Integer, Roots};
use rayon::prelude::*;

use crate::quad_ring::{contains_triple, BasisKind, KElem, QuadInt, Region, RingSpec};
use crate::sczech::{SczechError, SczechSample};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FareyQuery {
    pub ring: RingSpec,
    /// Strict upper bound on |b|².
    pub x_bound: i64,
    pub include_zero: bool,
    /// Closed I_D when true, Ĩ_D otherwise.
    pub closed: bool,
}

impl FareyQuery {
    pub fn new(ring: RingSpec, x_bound: i64) -> Self {
        assert!(x_bound >= 1, "X must be at least 1");
        Self { ring, x_bound, include_zero: true, closed: true }
    }

    pub fn exclude_zero(mut self) -> Self {
        self.include_zero = false;
        self
    }

    pub fn half_open(mut self) -> Self {
        self.closed = false;
        self
    }

    fn region(&self) -> Region {
        if self.closed {
            Region::Closed
        } else {
            Region::HalfOpen
        }
    }
}

/// Canonical `b` with `1 ≤ N(b) < X`, sorted by `(N(b), u, v)`.
pub fn enumerate_denominators(ring: RingSpec, x_bound: i64) -> Vec<QuadInt<i64>> {
    let mut out = Vec::new();
    for_each_in_disk(ring, x_bound - 1, |u, v| {
        let b = QuadInt::new(ring, u, v);
        if !b.is_zero() && b.is_canonical() {
            out.push(b);
        }
    });
    out.sort_by_key(|b| (b.norm(), *b.u(), *b.v()));
    out
}

/// Visit every `(u, v)` with `N(u + v·w) ≤ r`, using an integer bounding box.
fn for_each_in_disk(ring: RingSpec, r: i64, mut f: impl FnMut(i64, i64)) {
    if r < 0 {
        return;
    }
    let d = ring.d() as i64;
    match ring.basis_kind() {
        BasisKind::Rectangular => {
            let vmax = (r / 2).sqrt();
            let umax = r.sqrt();
            for v in -vmax..=vmax {
                for u in -umax..=umax {
                    if u * u + 2 * v * v <= r {
                        f(u, v);
                    }
                }
            }
        }
        BasisKind::Hexagonal => {
            // 4N = (2u + v)² + D·v²
            let m = (d + 1) / 4;
            let vmax = (4 * r / d).sqrt();
            let smax = (4 * r).sqrt();
            for v in -vmax..=vmax {
                let lo = Integer::div_floor(&(-smax - v), &2);
                let hi = Integer::div_ceil(&(smax - v), &2);
                for u in lo..=hi {
                    if u * u + u * v + m * v * v <= r {
                        f(u, v);
                    }
                }
            }
        }
    }
}

/// Reduced numerators `a` with `a/b` in the query region.
fn numerators_for(q: &FareyQuery, b: &QuadInt<i64>) -> Vec<KElem<i64>> {
    let n = b.norm();
    let bc = b.conj();
    let mut out = Vec::new();
    // |a/b| < 1 on I_D, so a lies in the disk N(a) ≤ N(b).
    for_each_in_disk(q.ring, n, |u, v| {
        let a = QuadInt::new(q.ring, u, v);
        if a.is_zero() && !q.include_zero {
            return;
        }
        let (xn, yn) = (&a * &bc).into_parts();
        if !contains_triple(q.ring, &xn, &yn, &n, q.region()) {
            return;
        }
        if a.gcd(b).expect("b is nonzero").is_unit() {
            out.push(KElem::new(a, b.clone()).expect("b is nonzero"));
        }
    });
    out.sort_by_key(|z| (*z.num().u(), *z.num().v()));
    out
}

/// All points of the Farey set, ordered by denominator then numerator.
pub fn enumerate_farey(q: &FareyQuery) -> Vec<KElem<i64>> {
    enumerate_denominators(q.ring, q.x_bound)
        .par_iter()
        .flat_map_iter(|b| numerators_for(q, b))
        .collect()
}

/// Serial reference path with the same output as [`enumerate_farey`].
pub fn enumerate_farey_serial(q: &FareyQuery) -> Vec<KElem<i64>> {
    enumerate_denominators(q.ring, q.x_bound).iter().flat_map(|b| numerators_for(q, b)).collect()
}

pub fn count_farey(q: &FareyQuery) -> u64 {
    enumerate_denominators(q.ring, q.x_bound)
        .par_iter()
        .map(|b| numerators_for(q, b).len() as u64)
        .sum()
}

/// Every Farey point together with its S and D̃.
pub fn farey_samples(q: &FareyQuery) -> Result<Vec<SczechSample<i64>>, SczechError> {
    enumerate_denominators(q.ring, q.x_bound)
        .par_iter()
        .flat_map_iter(|b| numerators_for(q, b))
        .map(SczechSample::compute)
        .collect()
}

/// Ito's region B_2 = {0 ≤ Re z < 1, 0 < Im z ≤ 1/√2} for D = 2, folded into I_2:
/// translating by 1 identifies it with `−1/2 < x ≤ 1/2`, `0 < y ≤ 1/2` in basis
/// coordinates, so each point of K_2(X) ∩ B_2 is counted exactly once.
pub fn in_b2(z: &KElem<i64>) -> bool {
    assert_eq!(z.ring().d(), 2, "B_2 is defined for D = 2");
    let (xn, yn, n) = z.triple();
    -n < 2 * xn && 2 * xn <= n && yn > 0 && 2 * yn <= n
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(d: u32) -> RingSpec {
        RingSpec::new(d).unwrap()
    }

    fn q(d: u32, u: i64, v: i64) -> QuadInt<i64> {
        QuadInt::new(r(d), u, v)
    }

    #[test]
    fn denominator_examples() {
        assert_eq!(enumerate_denominators(r(2), 2), vec![q(2, 1, 0)]);
        assert_eq!(enumerate_denominators(r(2), 3), vec![q(2, 1, 0), q(2, 0, 1)]);
        assert_eq!(enumerate_denominators(r(7), 2), vec![q(7, 1, 0)]);
        // norm 2 in O_7: ω and its conjugate 1 − ω
        let d7 = enumerate_denominators(r(7), 3);
        assert_eq!(d7.len(), 3);
        assert!(d7.iter().skip(1).all(|b| b.norm() == 2));
    }

    #[test]
    fn farey_examples() {
        let one = enumerate_farey(&FareyQuery::new(r(2), 2));
        assert_eq!(one, vec![KElem::zero(r(2))]);
        let three = enumerate_farey(&FareyQuery::new(r(2), 3));
        assert_eq!(three.len(), 3);
        let half = KElem::new(q(2, 1, 0), q(2, 0, 1)).unwrap();
        assert!(three.contains(&half));
        assert!(three.contains(&half.neg()));
        assert_eq!(count_farey(&FareyQuery::new(r(2), 2)), 1);
        assert_eq!(count_farey(&FareyQuery::new(r(2), 3)), 3);
        assert_eq!(count_farey(&FareyQuery::new(r(2), 3).exclude_zero()), 2);
    }

    #[test]
    fn half_open_drops_boundary_duplicates() {
        // ±√−2/2 differ by √−2; only y = −1/2 survives in Ĩ_2
        let q3 = FareyQuery::new(r(2), 3).half_open();
        assert_eq!(count_farey(&q3), 2);
    }

    #[test]
    fn serial_matches_parallel() {
        for d in RingSpec::SUPPORTED {
            let q = FareyQuery::new(r(d), 60);
            assert_eq!(enumerate_farey(&q), enumerate_farey_serial(&q));
        }
    }

    #[test]
    fn b2_filter() {
        let z = KElem::new(q(2, 1, 1), q(2, 3, 0)).unwrap();
        assert!(in_b2(&z));
        assert!(!in_b2(&z.conj()));
        // the two vertical edges x = ±1/2 fold onto one point
        let right = KElem::new(q(2, 1, 1), q(2, 2, 0)).unwrap();
        let left = KElem::new(q(2, -1, 1), q(2, 2, 0)).unwrap();
        assert!(in_b2(&right) && !in_b2(&left));
    }
}
