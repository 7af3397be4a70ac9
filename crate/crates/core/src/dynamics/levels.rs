//! Lattice sums behind the measure of the level sets V_n.

use serde::Serialize;

use crate::quad_ring::{BasisKind, RingSpec};

#[derive(Clone, Copy, Debug, Serialize)]
pub struct LevelComparison {
    pub sum: f64,
    /// Closed-form value, already scaled by `n⁻³`.
    pub comparator: f64,
    pub rel_error: f64,
}

impl LevelComparison {
    fn new(sum: f64, comparator: f64) -> Self {
        Self { sum, comparator, rel_error: ((sum - comparator) / comparator).abs() }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum LevelSum {
    /// D = 2: `Σ_{|r| ≤ R} (r² + 2n²)⁻²` against `π/(4√2 n³)`.
    Rectangular(LevelComparison),
    /// D = 7, 11: the sums over `|2r + n| ≤ nD` and `|2r + n| ≥ nD`.
    Hexagonal { inner: LevelComparison, outer: LevelComparison },
}

/// Truncated level sums with their closed-form comparators. For D = 7, 11
/// the split point `|2r + n| = nD` is always attained; that term is given
/// weight 1/2 in each half, the trapezoid convention matching the split of
/// the integral at `|u| = D/2`.
pub fn level_sum(ring: RingSpec, n: i64, r_max: i64) -> LevelSum {
    assert!(n >= 1, "level index must be positive");
    let nf = n as f64;
    let n3 = nf.powi(3);
    match ring.basis_kind() {
        BasisKind::Rectangular => {
            let a = 2.0 * nf * nf;
            let mut s = 0.0;
            // smallest terms first
            for r in (1..=r_max).rev() {
                let rf = r as f64;
                s += 2.0 / (rf * rf + a).powi(2);
            }
            s += 1.0 / (a * a);
            let comp = std::f64::consts::PI / (4.0 * 2f64.sqrt() * n3);
            LevelSum::Rectangular(LevelComparison::new(s, comp))
        }
        BasisKind::Hexagonal => {
            let d = ring.d() as f64;
            let (mut inner, mut outer) = (0.0, 0.0);
            let split = n * ring.d() as i64;
            for r in (-r_max..=r_max).rev() {
                let k = (2 * r + n).abs();
                let c = r as f64 + nf / 2.0;
                let term = 1.0 / (c * c + nf * nf * d / 4.0).powi(2);
                if k < split {
                    inner += term;
                } else if k > split {
                    outer += term;
                } else {
                    inner += 0.5 * term;
                    outer += 0.5 * term;
                }
            }
            let at = d.sqrt().atan();
            let d32 = d.powf(1.5);
            let ci = (8.0 / (d * (d + 1.0)) + 8.0 * at / d32) / n3;
            let co = ((4.0 * std::f64::consts::PI - 8.0 * at) / d32 - 8.0 / (d * (d + 1.0))) / n3;
            LevelSum::Hexagonal {
                inner: LevelComparison::new(inner, ci),
                outer: LevelComparison::new(outer, co),
            }
        }
    }
}

impl LevelSum {
    pub fn max_rel_error(&self) -> f64 {
        match self {
            LevelSum::Rectangular(c) => c.rel_error,
            LevelSum::Hexagonal { inner, outer } => inner.rel_error.max(outer.rel_error),
        }
    }

    pub fn comparator_total(&self) -> f64 {
        match self {
            LevelSum::Rectangular(c) => c.comparator,
            LevelSum::Hexagonal { inner, outer } => inner.comparator + outer.comparator,
        }
    }
}
