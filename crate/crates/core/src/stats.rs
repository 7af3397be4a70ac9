//! Distributional statistics of Sczech samples and the classical Cauchy contrast.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{Cauchy, ContinuousCDF, Normal};
use thiserror::Error;

use crate::sczech::classical_dedekind_f64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("need at least {need} values, got {got}")]
    TooFew { need: usize, got: usize },
    #[error("sample has zero variance")]
    ZeroVariance,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Reference {
    Gaussian,
    Cauchy,
}

#[derive(Clone, Debug, Serialize)]
pub struct Standardized {
    #[serde(skip)]
    pub values: Vec<f64>,
    pub mean: f64,
    pub std: f64,
}

/// `(x − mean)/std` with the population standard deviation.
pub fn standardize(values: &[f64]) -> Result<Standardized, StatsError> {
    if values.len() < 2 {
        return Err(StatsError::TooFew { need: 2, got: values.len() });
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    if var <= 0.0 {
        return Err(StatsError::ZeroVariance);
    }
    let std = var.sqrt();
    Ok(Standardized { values: values.iter().map(|x| (x - mean) / std).collect(), mean, std })
}

/// `std/√(log X · log log X)`.
pub fn scale_ratio(std: f64, x_bound: f64) -> f64 {
    std / (x_bound.ln() * x_bound.ln().ln()).sqrt()
}

fn reference_cdf(reference: Reference) -> Box<dyn Fn(f64) -> f64 + Sync> {
    match reference {
        Reference::Gaussian => {
            let n = Normal::new(0.0, 1.0).expect("valid");
            Box::new(move |x| n.cdf(x))
        }
        Reference::Cauchy => {
            let c = Cauchy::new(0.0, 1.0).expect("valid");
            Box::new(move |x| c.cdf(x))
        }
    }
}

/// Kolmogorov–Smirnov distance between the empirical CDF and a reference.
pub fn ks_distance(sample: &[f64], reference: Reference) -> f64 {
    let cdf = reference_cdf(reference);
    ks_distance_with(sample, |x| cdf(x))
}

/// KS distance against any continuous CDF. Ties are handled by comparing
/// both one-sided limits at each jump of the empirical CDF.
pub fn ks_distance_with(sample: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut xs = sample.to_vec();
    xs.par_sort_unstable_by(|a, b| a.total_cmp(b));
    ks_sorted(&xs, cdf)
}

fn ks_sorted(xs: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < xs.len() {
        let mut j = i;
        while j < xs.len() && xs[j] == xs[i] {
            j += 1;
        }
        let f = cdf(xs[i]);
        d = d.max((f - i as f64 / n).abs()).max((j as f64 / n - f).abs());
        i = j;
    }
    d
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Moments {
    pub count: usize,
    pub mean: f64,
    /// Population variance.
    pub var: f64,
    /// Unbiased (n − 1) variance.
    pub var_unbiased: f64,
    pub skewness: f64,
    pub excess_kurtosis: f64,
    pub mean_abs: f64,
}

/// Moments of exact rational values. Power sums are accumulated exactly,
/// grouped by denominator so the common denominator stays small, and only the
/// final central moments are rounded.
pub fn moments_exact(values: &[Ratio<i64>]) -> Result<Moments, StatsError> {
    if values.len() < 4 {
        return Err(StatsError::TooFew { need: 4, got: values.len() });
    }
    // per denominator: Σ|p|, Σp, Σp², Σp³, Σp⁴
    let mut groups: BTreeMap<i64, [i128; 5]> = BTreeMap::new();
    for v in values {
        let p = *v.numer() as i128;
        let e = groups.entry(*v.denom()).or_insert([0; 5]);
        e[0] += p.abs();
        e[1] += p;
        e[2] += p * p;
        e[3] += p * p * p;
        e[4] += p * p * p * p;
    }
    let mut sums: [BigRational; 5] = Default::default();
    for (den, g) in &groups {
        let den = BigInt::from(*den);
        for (k, s) in sums.iter_mut().enumerate() {
            let pow = if k == 0 { 1 } else { k as u32 };
            *s += BigRational::new(BigInt::from(g[k]), den.pow(pow));
        }
    }
    let n = BigRational::from_integer(BigInt::from(values.len()));
    let mean = &sums[1] / &n;
    let e2 = &sums[2] / &n;
    let e3 = &sums[3] / &n;
    let e4 = &sums[4] / &n;
    let m2 = &e2 - &mean * &mean;
    let m3 = &e3 - BigRational::from_integer(3.into()) * &mean * &e2
        + BigRational::from_integer(2.into()) * mean.pow(3);
    let m4 = &e4 - BigRational::from_integer(4.into()) * &mean * &e3
        + BigRational::from_integer(6.into()) * mean.pow(2) * &e2
        - BigRational::from_integer(3.into()) * mean.pow(4);
    if m2.is_zero() {
        return Err(StatsError::ZeroVariance);
    }
    let f = |r: &BigRational| r.to_f64().unwrap_or(f64::NAN);
    let (var, m3, m4) = (f(&m2), f(&m3), f(&m4));
    let count = values.len();
    Ok(Moments {
        count,
        mean: f(&mean),
        var,
        var_unbiased: var * count as f64 / (count - 1) as f64,
        skewness: m3 / var.powf(1.5),
        excess_kurtosis: m4 / (var * var) - 3.0,
        mean_abs: f(&(&sums[0] / &n)),
    })
}

/// The same quantities from floats in two passes.
pub fn moments_f64(values: &[f64]) -> Result<Moments, StatsError> {
    let count = values.len();
    if count < 4 {
        return Err(StatsError::TooFew { need: 4, got: count });
    }
    let n = count as f64;
    let mean = values.iter().sum::<f64>() / n;
    let (mut m2, mut m3, mut m4, mut ma) = (0.0, 0.0, 0.0, 0.0);
    for x in values {
        let d = x - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
        ma += x.abs();
    }
    let (var, m3, m4) = (m2 / n, m3 / n, m4 / n);
    if var <= 0.0 {
        return Err(StatsError::ZeroVariance);
    }
    Ok(Moments {
        count,
        mean,
        var,
        var_unbiased: var * n / (n - 1.0),
        skewness: m3 / var.powf(1.5),
        excess_kurtosis: m4 / (var * var) - 3.0,
        mean_abs: ma / n,
    })
}

/// `χ(t) = (1/N) Σ e^{itS}` for each `t`, with values grouped by multiplicity.
pub fn char_fn(values: &[i64], t_grid: &[f64]) -> Vec<Complex64> {
    let mut counts: BTreeMap<i64, u64> = BTreeMap::new();
    for v in values {
        *counts.entry(*v).or_default() += 1;
    }
    let n = values.len() as f64;
    t_grid
        .iter()
        .map(|&t| {
            let s: Complex64 =
                counts.iter().map(|(&v, &c)| c as f64 * Complex64::from_polar(1.0, t * v as f64)).sum();
            s / n
        })
        .collect()
}

/// `a_{n,t} = Σ_{h(v)² = n} e^{itS(v)}` from `(height², S)` pairs.
pub fn dirichlet_coeffs(pairs: &[(i64, i64)], t: f64) -> BTreeMap<i64, Complex64> {
    let mut out: BTreeMap<i64, Complex64> = BTreeMap::new();
    for &(h, s) in pairs {
        *out.entry(h).or_default() += Complex64::from_polar(1.0, t * s as f64);
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
}

/// Freedman–Diaconis bins; a degenerate spread falls back to a single bin.
pub fn histogram_fd(values: &[f64]) -> Histogram {
    let mut xs = values.to_vec();
    xs.sort_unstable_by(|a, b| a.total_cmp(b));
    let (lo, hi) = match (xs.first(), xs.last()) {
        (Some(&lo), Some(&hi)) => (lo, hi),
        _ => return Histogram { edges: vec![], counts: vec![] },
    };
    let iqr = quantile_sorted(&xs, 0.75) - quantile_sorted(&xs, 0.25);
    let width = 2.0 * iqr / (xs.len() as f64).cbrt();
    let bins = if width > 0.0 && hi > lo { ((hi - lo) / width).ceil().clamp(1.0, 1e6) as usize } else { 1 };
    let step = if hi > lo { (hi - lo) / bins as f64 } else { 1.0 };
    let edges: Vec<f64> = (0..=bins).map(|i| lo + step * i as f64).collect();
    let mut counts = vec![0u64; bins];
    for x in &xs {
        let k = (((x - lo) / step) as usize).min(bins - 1);
        counts[k] += 1;
    }
    Histogram { edges, counts }
}

/// Linear-interpolated quantile of sorted data.
pub fn quantile_sorted(xs: &[f64], p: f64) -> f64 {
    let pos = p * (xs.len() - 1) as f64;
    let i = pos.floor() as usize;
    let frac = pos - i as f64;
    if i + 1 < xs.len() {
        xs[i] * (1.0 - frac) + xs[i + 1] * frac
    } else {
        xs[i]
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct LinearFit {
    pub intercept: f64,
    pub slope: f64,
    pub r_squared: f64,
}

/// Ordinary least squares `y ≈ intercept + slope·x`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> LinearFit {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy > 0.0 { sxy * sxy / (sxx * syy) } else { 1.0 };
    LinearFit { intercept, slope, r_squared }
}

/// `𝔰(h/k)/log Q` over Ω_Q = {h/k ∈ [0,1] reduced, 1 ≤ k ≤ Q}.
pub fn vardi_values(q: i64) -> Vec<f64> {
    let lq = (q as f64).ln();
    (1..=q)
        .into_par_iter()
        .flat_map_iter(|k| {
            (0..=k).filter(move |h| h.gcd(&k) == 1).map(move |h| classical_dedekind_f64(h, k) / lq)
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct VardiReport {
    pub q: i64,
    pub count: usize,
    pub median: f64,
    /// KS distance of `2π·𝔰/log Q` to the standard Cauchy law.
    pub ks_cauchy: f64,
    /// Smallest KS distance to a centred Cauchy law over all scales.
    pub ks_cauchy_best: f64,
    pub cauchy_scale: f64,
    /// Smallest KS distance to a centred Gaussian over all scales.
    pub ks_gaussian_best: f64,
    pub gaussian_sigma: f64,
    pub excess_kurtosis: f64,
}

/// Minimize the KS distance over the scale of a centred reference family:
/// a coarse scan in log-scale followed by golden-section refinement.
fn best_scale(sorted: &[f64], family: Reference) -> (f64, f64) {
    let ks_at = |log_scale: f64| {
        let s = log_scale.exp();
        match family {
            Reference::Gaussian => {
                let g = Normal::new(0.0, s).expect("valid");
                ks_sorted(sorted, |x| g.cdf(x))
            }
            Reference::Cauchy => {
                let c = Cauchy::new(0.0, s).expect("valid");
                ks_sorted(sorted, |x| c.cdf(x))
            }
        }
    };
    let grid: Vec<f64> = (0..=60).map(|i| -4.0 + 0.15 * i as f64).collect();
    let coarse = grid
        .par_iter()
        .map(|&s| (ks_at(s), s))
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .expect("non-empty grid");
    let (mut a, mut b) = (coarse.1 - 0.15, coarse.1 + 0.15);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..40 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if ks_at(c) < ks_at(d) {
            b = d;
        } else {
            a = c;
        }
    }
    let mid = 0.5 * (a + b);
    let refined = (ks_at(mid), mid);
    let best = if refined.0 < coarse.0 { refined } else { coarse };
    (best.0, best.1.exp())
}

pub fn vardi_contrast(q: i64) -> VardiReport {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut ys: Vec<f64> = vardi_values(q).into_iter().map(|v| two_pi * v).collect();
    ys.par_sort_unstable_by(|a, b| a.total_cmp(b));
    let cauchy = Cauchy::new(0.0, 1.0).expect("valid");
    let ks_cauchy = ks_sorted(&ys, |x| cauchy.cdf(x));
    let (ks_cauchy_best, cauchy_scale) = best_scale(&ys, Reference::Cauchy);
    let (ks_gaussian_best, gaussian_sigma) = best_scale(&ys, Reference::Gaussian);
    let m = moments_f64(&ys).expect("Ω_Q is large");
    VardiReport {
        q,
        count: ys.len(),
        median: quantile_sorted(&ys, 0.5) / two_pi,
        ks_cauchy,
        ks_cauchy_best,
        cauchy_scale,
        ks_gaussian_best,
        gaussian_sigma,
        excess_kurtosis: m.excess_kurtosis,
    }
}
