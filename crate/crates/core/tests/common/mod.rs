//! Slow reference implementations, written without the library's own
//! rounding, domain tests or continued fractions.
#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};

/// Basis coordinates of a ring element or field element.
pub type Pair<T> = (T, T);

/// `m` in `w² = w − m` (hexagonal) or `None` for `w = √−2`.
fn hex_m(d: u32) -> Option<i64> {
    (d != 2).then_some((d as i64 + 1) / 4)
}

fn lit<T: num_traits::Num>(k: i64) -> T {
    (0..k).fold(T::zero(), |acc, _| acc + T::one())
}

pub fn mul<T>(d: u32, a: &Pair<T>, b: &Pair<T>) -> Pair<T>
where
    T: Clone + num_traits::Num,
{
    let (u1, v1) = a.clone();
    let (u2, v2) = b.clone();
    match hex_m(d) {
        None => (u1.clone() * u2.clone() - lit::<T>(2) * v1.clone() * v2.clone(), u1 * v2 + u2 * v1),
        Some(m) => (
            u1.clone() * u2.clone() - lit::<T>(m) * v1.clone() * v2.clone(),
            u1 * v2.clone() + u2 * v1.clone() + v1 * v2,
        ),
    }
}

pub fn conj<T>(d: u32, a: &Pair<T>) -> Pair<T>
where
    T: Clone + std::ops::Add<Output = T> + std::ops::Neg<Output = T>,
{
    let (u, v) = a.clone();
    match hex_m(d) {
        None => (u, -v),
        // w̄ = 1 − w
        Some(_) => (u + v.clone(), -v),
    }
}

pub fn norm_i64(d: u32, a: (i64, i64)) -> i64 {
    let (u, v) = a;
    match hex_m(d) {
        None => u * u + 2 * v * v,
        Some(m) => u * u + u * v + m * v * v,
    }
}

/// `a/b` in basis coordinates.
pub fn quotient(d: u32, a: (i64, i64), b: (i64, i64)) -> Pair<Ratio<i64>> {
    let p = mul(d, &a, &conj(d, &b));
    let n = norm_i64(d, b);
    (Ratio::new(p.0, n), Ratio::new(p.1, n))
}

/// `Re(z·λ̄)` for rational `z` and integral `λ`.
fn re_of_product(d: u32, z: &Pair<Ratio<i64>>, lam: (i64, i64)) -> Ratio<i64> {
    let lc = conj(d, &lam);
    let p = mul(d, z, &(Ratio::from_integer(lc.0), Ratio::from_integer(lc.1)));
    match hex_m(d) {
        None => p.0,
        Some(_) => p.0 + p.1 / 2,
    }
}

fn neighbours(d: u32) -> Vec<(i64, i64)> {
    match hex_m(d) {
        None => vec![(1, 0), (-1, 0), (0, 1), (0, -1)],
        Some(_) => vec![(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)],
    }
}

/// Closed Voronoi cell at 0: `|z|² ≤ |z − λ|²` for every nearest neighbour λ,
/// i.e. `2·Re(z λ̄) ≤ N(λ)`.
pub fn in_voronoi(d: u32, z: &Pair<Ratio<i64>>) -> bool {
    neighbours(d).into_iter().all(|l| re_of_product(d, z, l) * 2 <= Ratio::from_integer(norm_i64(d, l)))
}

/// All lattice points with norm below `bound`, by a generous bounding box.
pub fn lattice_disk(d: u32, bound: i64) -> Vec<(i64, i64)> {
    let r = ((bound as f64).sqrt() * 2.0).ceil() as i64 + 2;
    let mut out = Vec::new();
    for u in -r..=r {
        for v in -r..=r {
            if norm_i64(d, (u, v)) < bound {
                out.push((u, v));
            }
        }
    }
    out
}

/// The Farey set K(X) on the closed domain, as reduced basis coordinates,
/// from every pair `(a, b)` with `1 ≤ N(b) < X`. A point with reduced
/// denominator of norm < X arises from that very pair; any other pair
/// representing it has a denominator of norm at least as large.
pub fn brute_farey(d: u32, x_bound: i64) -> BTreeSet<Pair<Ratio<i64>>> {
    let dens: Vec<(i64, i64)> = lattice_disk(d, x_bound).into_iter().filter(|b| *b != (0, 0)).collect();
    let mut out = BTreeSet::new();
    for &b in &dens {
        // I_D lies inside the unit disk, so N(a) < N(b)
        for a in lattice_disk(d, norm_i64(d, b)) {
            let z = quotient(d, a, b);
            if in_voronoi(d, &z) {
                out.insert(z);
            }
        }
    }
    out
}

/// `(2/√D)·Im z` for `z = x + y·w`.
pub fn imd_coords<T: Clone + Integer>(d: u32, z: &Pair<Ratio<T>>) -> Ratio<T> {
    let two = T::one() + T::one();
    match hex_m(d) {
        None => z.1.clone() * Ratio::from_integer(two),
        Some(_) => z.1.clone(),
    }
}

type Big = Pair<BigInt>;

fn big(a: (i64, i64)) -> Big {
    (BigInt::from(a.0), BigInt::from(a.1))
}

fn big_norm(d: u32, a: &Big) -> BigInt {
    mul(d, a, &conj(d, a)).0
}

fn big_quotient(d: u32, a: &Big, b: &Big) -> Pair<BigRational> {
    let p = mul(d, a, &conj(d, b));
    let n = big_norm(d, b);
    (BigRational::new(p.0, n.clone()), BigRational::new(p.1, n))
}

/// A lattice point at distance < 1 from `z`, by exhaustive comparison of
/// the nearby candidates.
fn near_point(d: u32, z: &Pair<BigRational>) -> Big {
    let (fx, fy) = (z.0.floor().to_integer(), z.1.floor().to_integer());
    let mut best: Option<(BigRational, Big)> = None;
    for du in -1..=2 {
        for dv in -1..=2 {
            let l = (&fx + BigInt::from(du), &fy + BigInt::from(dv));
            let diff = (z.0.clone() - BigRational::from_integer(l.0.clone()), z.1.clone() - BigRational::from_integer(l.1.clone()));
            let n = mul(d, &diff, &conj(d, &diff)).0;
            if best.as_ref().map_or(true, |(b, _)| n < *b) {
                best = Some((n, l));
            }
        }
    }
    best.unwrap().1
}

/// D̃(a/c) by Euclidean descent on the two laws `D̃(z + m) = D̃(z)` and
/// `D̃(a,c) + D̃(c,a) = imd((a² + c² + 1)/(ac))`, for coprime `a, c`.
pub fn dtilde_descent(d: u32, a: (i64, i64), c: (i64, i64)) -> BigRational {
    let (mut a, mut c) = (big(a), big(c));
    let mut acc = BigRational::zero();
    let mut sign = BigRational::one();
    loop {
        if big_norm(d, &c).is_one() {
            return acc;
        }
        let q = near_point(d, &big_quotient(d, &a, &c));
        let qc = mul(d, &q, &c);
        let r = (&a.0 - &qc.0, &a.1 - &qc.1);
        assert!(!(r.0.is_zero() && r.1.is_zero()), "a and c are not coprime");
        // D̃(r, c) = imd((r² + c² + 1)/(rc)) − D̃(c, r)
        let rr = mul(d, &r, &r);
        let cc = mul(d, &c, &c);
        let top = (&rr.0 + &cc.0 + BigInt::one(), &rr.1 + &cc.1);
        let term = imd_coords(d, &big_quotient(d, &top, &mul(d, &r, &c)));
        acc += sign.clone() * term;
        sign = -sign;
        a = c;
        c = r;
    }
}

/// Classical `s(h,k)` from the cotangent sum `(1/4k) Σ cot(πl/k) cot(πhl/k)`.
pub fn classical_cot(h: i64, k: i64) -> f64 {
    let pi = std::f64::consts::PI;
    let mut s = 0.0;
    for l in 1..k {
        let a = pi * l as f64 / k as f64;
        let b = pi * (h * l).rem_euclid(k) as f64 / k as f64;
        s += 1.0 / (a.tan() * b.tan());
    }
    s / (4 * k) as f64
}

/// Composite Simpson rule on `[a, b]` with `n` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}
