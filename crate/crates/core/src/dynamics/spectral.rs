//! Quantities read off the invariant density and the twisted spectrum: the
//! constant A, the oscillatory integral, the root s₀(t) and the masses of the
//! level sets V_n.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::Ratio;
use serde::Serialize;

use crate::quad_ring::{BasisKind, Coord, DomainPoint, QuadInt, RingSpec};

use super::geometry::{integrate_domain, psi_levels, Domain};
use super::ulam::{twisted_eigen, ulam_twisted, DensityEstimate, UlamOperator};
use super::DynError;

/// The level set V_{r,n} = h_α(I_D), `h_α(z) = 1/(α + z)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelSetId {
    pub d: u32,
    pub r: i64,
    pub n: i64,
    /// `r + n·w` in the integral basis, so `Re α = r` (D = 2) or `r + n/2`.
    pub alpha: QuadInt<i64>,
}

impl LevelSetId {
    pub fn new(ring: RingSpec, r: i64, n: i64) -> Self {
        Self { d: ring.d(), r, n, alpha: QuadInt::new(ring, r, n) }
    }

    /// Value of ψ_R on the set.
    pub fn psi_r(&self) -> Ratio<i64> {
        match self.alpha.ring().basis_kind() {
            BasisKind::Rectangular => Ratio::from_integer(self.r),
            BasisKind::Hexagonal => Ratio::new(2 * self.r + self.n, 2),
        }
    }

    pub fn contains<T: Coord>(&self, z: &DomainPoint<T>) -> bool {
        match psi_levels(z) {
            Ok((re, im)) => {
                let (n, d) = (re.numer().to_i64(), re.denom().to_i64());
                im.to_i64() == Some(self.n) && n.zip(d).map(|(n, d)| Ratio::new(n, d)) == Some(self.psi_r())
            }
            Err(_) => false,
        }
    }
}

/// `A = ∫ log T dμ`, with `T(z) = |z·G(z)|⁴`.
pub fn a_constant(density: &DensityEstimate) -> f64 {
    density.bank.integrate(&density.masses, |x| x.log_t as f64)
}

/// `∫ (e^{itΨ} − 1) dμ`.
pub fn osc_integral(t: f64, density: &DensityEstimate) -> Complex64 {
    density.bank.integrate(&density.masses, |x| Complex64::from_polar(1.0, t * x.psi as f64) - 1.0)
}

/// `∫ (e^{it·imd([1/z])} − 1) dμ`, the single-digit variant.
pub fn osc_integral_single(t: f64, density: &DensityEstimate) -> Complex64 {
    density.bank.integrate(&density.masses, |x| Complex64::from_polar(1.0, t * x.psi1 as f64) - 1.0)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct S0Solution {
    pub t: f64,
    pub s0: f64,
    pub lambda_re: f64,
    pub lambda_im: f64,
    /// Number of eigenvalue evaluations.
    pub evaluations: usize,
}

pub const S0_BRACKET: (f64, f64) = (0.8, 1.0);

/// Root in `s` of `Re λ(s, t) = 1` on [0.8, 1], by the Illinois variant of
/// regula falsi. At `t = 0` the root is `s = 1` and is returned as such.
pub fn s0_solve(base: &UlamOperator, t: f64, tol: f64) -> Result<S0Solution, DynError> {
    if t.abs() > 0.3 + 1e-12 {
        return Err(DynError::InvalidParameter(format!("|t| = {} exceeds 0.3", t.abs())));
    }
    if t == 0.0 {
        return Ok(S0Solution { t, s0: 1.0, lambda_re: 1.0, lambda_im: 0.0, evaluations: 0 });
    }
    let mut warm: Option<Vec<Complex64>> = None;
    let mut evals = 0;
    let mut eval = |s: f64| -> Result<Complex64, DynError> {
        evals += 1;
        let e = twisted_eigen(&ulam_twisted(base, s, t)?, warm.as_deref())?;
        warm = Some(e.vector);
        Ok(e.lambda)
    };
    let (mut a, mut b) = S0_BRACKET;
    let (la, lb) = (eval(a)?, eval(b)?);
    let (mut fa, mut fb) = (la.re - 1.0, lb.re - 1.0);
    if fa.signum() == fb.signum() {
        return Err(DynError::NoBracket { s_lo: a, s_hi: b, f_lo: fa, f_hi: fb });
    }
    let mut side = 0i8;
    let mut last = lb;
    let mut c = b;
    for _ in 0..100 {
        c = (a * fb - b * fa) / (fb - fa);
        let lc = eval(c)?;
        last = lc;
        let fc = lc.re - 1.0;
        if fc == 0.0 || (b - a).abs() < tol {
            break;
        }
        if fc.signum() == fb.signum() {
            b = c;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
        if (b - a).abs() < tol {
            break;
        }
    }
    Ok(S0Solution { t, s0: c, lambda_re: last.re, lambda_im: last.im, evaluations: evals })
}

/// μ-masses of the level sets V_n = {ψ_I = n}.
#[derive(Clone, Debug, Serialize)]
pub struct LevelMasses {
    pub sub: usize,
    pub fine_sub: usize,
    pub by_n: BTreeMap<i64, f64>,
}

impl LevelMasses {
    pub fn get(&self, n: i64) -> f64 {
        self.by_n.get(&n).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.by_n.values().sum()
    }
}

/// Vertical spacing of the lattice rows, `Im w`.
fn imag_step(ring: RingSpec) -> f64 {
    ring.basis_element().1
}

/// Midpoint quadrature of the density over each cell on a `sub × sub`
/// sub-grid, classifying every point by the exact lattice row of `[1/z]`.
/// Cells meeting the disk that contains V_5, ..., V_∞ use `fine_sub`.
pub fn level_masses(density: &DensityEstimate, sub: usize, fine_sub: usize) -> LevelMasses {
    use rayon::prelude::*;
    let grid = density.grid();
    let dom = grid.domain;
    let r_fine = 1.0 / (5.0 * imag_step(dom.ring) - dom.half_height);
    let parts: Vec<BTreeMap<i64, f64>> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let (x0, y0) = grid.corner(i);
            let gap = |lo: f64, hi: f64| lo.max(0.0).max(-hi);
            let dist = gap(x0, x0 + grid.dx).hypot(gap(y0, y0 + grid.dy));
            let k = if dist <= r_fine { fine_sub } else { sub };
            let w = grid.dx * grid.dy / (k * k) as f64 * density.value(i);
            let mut acc = BTreeMap::new();
            for a in 0..k {
                for b in 0..k {
                    let z = Complex64::new(
                        x0 + (a as f64 + 0.5) / k as f64 * grid.dx,
                        y0 + (b as f64 + 0.5) / k as f64 * grid.dy,
                    );
                    if !dom.contains(z) {
                        continue;
                    }
                    if let Some(step) = dom.gauss(z) {
                        *acc.entry(step.v).or_insert(0.0) += w;
                    }
                }
            }
            acc
        })
        .collect();
    let mut by_n = BTreeMap::new();
    for p in parts {
        for (n, m) in p {
            *by_n.entry(n).or_insert(0.0) += m;
        }
    }
    LevelMasses { sub, fine_sub, by_n }
}

/// μ(V_n) from [`level_masses`] at sub-grids 32 and 128.
pub fn mu_level(density: &DensityEstimate, n: i64) -> Result<f64, DynError> {
    if n.abs() < 2 {
        return Err(DynError::InvalidParameter(format!("level n = {n} needs |n| ≥ 2")));
    }
    Ok(level_masses(density, 32, 128).get(n))
}

/// μ(V_n) as `Σ_r ∫_{I_D} ρ(h_α(w)) |α + w|⁻⁴ dw` over `α = r + n·w`,
/// `|r| ≤ r_max`. Independent of [`level_masses`]; valid when every branch
/// image lies inside I_D, which holds for `|n| ≥ 2`.
pub fn mu_level_pullback(density: &DensityEstimate, n: i64, r_max: i64, panels: usize) -> f64 {
    let dom: Domain = density.grid().domain;
    let mut total = 0.0;
    // smallest terms first
    let mut rs: Vec<i64> = (-r_max..=r_max).collect();
    rs.sort_by_key(|r| std::cmp::Reverse(r.abs()));
    for r in rs {
        let a = dom.lattice_point(r, n);
        total += integrate_domain(&dom, panels, 4, |w| {
            let q = a + w;
            density.at(q.inv()) / q.norm_sqr().powi(2)
        });
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{leading_eigen, ulam_build};
    use num_bigint::BigInt;

    fn ring(d: u32) -> RingSpec {
        RingSpec::new(d).unwrap()
    }

    #[test]
    fn level_set_ids() {
        let l = LevelSetId::new(ring(7), 2, 3);
        assert_eq!(l.psi_r(), Ratio::new(7, 2));
        // 1/(α + 0) lies in V_{r,n}
        let z = DomainPoint::from_kelem(
            &crate::quad_ring::KElem::new(QuadInt::one(ring(7)), l.alpha.to_big()).unwrap(),
        );
        assert!(l.contains::<BigInt>(&z));
        assert!(!LevelSetId::new(ring(7), 2, -3).contains::<BigInt>(&z));
    }

    #[test]
    fn small_grid_spectral_quantities() {
        let op = ulam_build(ring(2), 32, 100, 16, 1).unwrap();
        let (_, rho) = leading_eigen(&op).unwrap();
        let a = a_constant(&rho);
        assert!(a < 0.0, "T < 1 on I_D, so A = {a} must be negative");
        assert_eq!(osc_integral(0.0, &rho), Complex64::new(0.0, 0.0));
        let o = osc_integral(0.1, &rho);
        assert!(o.re < 0.0);
        assert_eq!(s0_solve(&op, 0.0, 1e-6).unwrap().s0, 1.0);
        let p = s0_solve(&op, 0.2, 1e-6).unwrap();
        let m = s0_solve(&op, -0.2, 1e-6).unwrap();
        assert!(p.s0 < 1.0 && (p.s0 - m.s0).abs() < 1e-6);
        assert!(s0_solve(&op, 0.5, 1e-6).is_err());
        let lm = level_masses(&rho, 8, 16);
        assert!((lm.total() - 1.0).abs() < 1e-2);
        assert!(mu_level(&rho, 1).is_err());
    }
}
