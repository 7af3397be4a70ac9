//! Floating-point geometry of I_D and the Hurwitz map, used by the numerics.
//!
//! I_D is the Voronoi cell of O_K at 0, so the float rounding `[z]` is the
//! nearest lattice point; ties only occur on a null set.

use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use num_rational::Ratio;

use crate::quad_ring::{BasisKind, Coord, DomainPoint, QuadInt, RingSpec};

use super::DynError;

/// Planar description of I_D in Cartesian coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Domain {
    pub ring: RingSpec,
    /// Largest |Im z| on I_D.
    pub half_height: f64,
    sqrt_d: f64,
}

impl Domain {
    pub fn new(ring: RingSpec) -> Self {
        let d = ring.d() as f64;
        let half_height = match ring.basis_kind() {
            BasisKind::Rectangular => 0.5 * 2f64.sqrt(),
            BasisKind::Hexagonal => (d + 1.0) / (4.0 * d.sqrt()),
        };
        Self { ring, half_height, sqrt_d: d.sqrt() }
    }

    /// Area of I_D, equal to the covolume of O_K.
    pub fn area(&self) -> f64 {
        self.ring.covolume()
    }

    /// Half-width of the vertical slice at `Re z = x`, for `|x| ≤ 1/2`.
    pub fn slice_half_height(&self, x: f64) -> f64 {
        match self.ring.basis_kind() {
            BasisKind::Rectangular => self.half_height,
            BasisKind::Hexagonal => {
                let d = self.ring.d() as f64;
                ((d + 1.0) / 4.0 - x.abs()) / self.sqrt_d
            }
        }
    }

    /// Closed membership, in floats.
    pub fn contains(&self, z: Complex64) -> bool {
        z.re.abs() <= 0.5 && z.im.abs() <= self.slice_half_height(z.re)
    }

    /// Vertices in counter-clockwise order.
    pub fn polygon(&self) -> Vec<(f64, f64)> {
        let h = self.half_height;
        match self.ring.basis_kind() {
            BasisKind::Rectangular => vec![(-0.5, -h), (0.5, -h), (0.5, h), (-0.5, h)],
            BasisKind::Hexagonal => {
                let e = self.slice_half_height(0.5);
                vec![(0.0, -h), (0.5, -e), (0.5, e), (0.0, h), (-0.5, e), (-0.5, -e)]
            }
        }
    }

    /// Lattice coordinates of the nearest lattice point.
    pub fn round(&self, z: Complex64) -> (i64, i64) {
        let (x, y) = self.to_basis(z);
        let (fx, fy) = (x.floor() as i64, y.floor() as i64);
        let mut best = (0, 0);
        let mut best_d = f64::INFINITY;
        for v in fy - 1..=fy + 2 {
            for u in fx - 2..=fx + 2 {
                let d = (z - self.lattice_point(u, v)).norm_sqr();
                if d < best_d {
                    best_d = d;
                    best = (u, v);
                }
            }
        }
        best
    }

    pub fn lattice_point(&self, u: i64, v: i64) -> Complex64 {
        let (wr, wi) = self.ring.basis_element();
        Complex64::new(u as f64 + v as f64 * wr, v as f64 * wi)
    }

    fn to_basis(&self, z: Complex64) -> (f64, f64) {
        let (wr, wi) = self.ring.basis_element();
        let y = z.im / wi;
        (z.re - y * wr, y)
    }

    /// Norm of the lattice point with coordinates `(u, v)`.
    pub fn lattice_norm(&self, u: i64, v: i64) -> i64 {
        match self.ring.basis_kind() {
            BasisKind::Rectangular => u * u + 2 * v * v,
            BasisKind::Hexagonal => u * u + u * v + (self.ring.d() as i64 + 1) / 4 * v * v,
        }
    }

    /// `imd` of the lattice point `(u, v)`.
    pub fn imd(&self, v: i64) -> f64 {
        match self.ring.basis_kind() {
            BasisKind::Rectangular => 2.0 * v as f64,
            BasisKind::Hexagonal => v as f64,
        }
    }

    /// One step of the Hurwitz map: the digit `[1/z]` and `G(z)`.
    pub fn gauss(&self, z: Complex64) -> Option<Step> {
        if z == Complex64::new(0.0, 0.0) {
            return None;
        }
        let w = z.inv();
        let (u, v) = self.round(w);
        Some(Step { u, v, image: w - self.lattice_point(u, v) })
    }

    /// Two Hurwitz steps with the weight data of the twisted operator.
    pub fn two_step(&self, z: Complex64) -> Option<TwoStep> {
        let s1 = self.gauss(z)?;
        let s2 = self.gauss(s1.image)?;
        // T(z) = |z·G(z)|⁴
        let log_t = 4.0 * (z.norm() * s1.image.norm()).ln();
        Some(TwoStep {
            first: s1,
            second: s2,
            psi: self.imd(s1.v) - self.imd(s2.v),
            log_t,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Step {
    pub u: i64,
    pub v: i64,
    pub image: Complex64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoStep {
    pub first: Step,
    pub second: Step,
    /// Ψ(z) = imd([1/z]) − imd([1/G(z)]).
    pub psi: f64,
    /// log T(z).
    pub log_t: f64,
}

/// `(ψ_R, ψ_I)` of `z ∈ I_D \ {0}`: `ψ_R = Re [1/z]` and `ψ_I` the
/// ω- (or √−2-) coordinate of `[1/z]`.
pub fn psi_levels<T: Coord>(z: &DomainPoint<T>) -> Result<(Ratio<T>, T), DynError> {
    if z.is_zero() {
        return Err(DynError::ZeroPoint);
    }
    let k = z.to_kelem();
    let alpha = k.den().div_round(k.num()).expect("same ring").0;
    let re = match z.ring().basis_kind() {
        BasisKind::Rectangular => Ratio::from_integer(alpha.u().clone()),
        BasisKind::Hexagonal => Ratio::new(T::lit(2) * alpha.u().clone() + alpha.v().clone(), T::lit(2)),
    };
    Ok((re, alpha.v().clone()))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    /// |difference| between the rule and its refinement.
    pub error: f64,
}

/// Tensor Gauss–Legendre over I_D with `panels` panels per half-width in each
/// direction; the hexagon is integrated slice-wise and split at `Re z = 0`.
pub fn integrate_domain(dom: &Domain, panels: usize, order: usize, f: impl Fn(Complex64) -> f64) -> f64 {
    let gl = GaussLegendre::new(NonZeroUsize::new(order).expect("order ≥ 1"));
    let mut total = 0.0;
    let step = 0.5 / panels as f64;
    for px in 0..2 * panels {
        let (x0, x1) = (-0.5 + px as f64 * step, -0.5 + (px + 1) as f64 * step);
        total += gl.integrate(x0, x1, |x| {
            let h = dom.slice_half_height(x);
            let ystep = 2.0 * h / (2 * panels) as f64;
            let mut inner = 0.0;
            for py in 0..2 * panels {
                let (y0, y1) = (-h + py as f64 * ystep, -h + (py + 1) as f64 * ystep);
                inner += gl.integrate(y0, y1, |y| f(Complex64::new(x, y)));
            }
            inner
        });
    }
    total
}

/// `∫_{I_D} |z + α|⁻⁴ dx dy`, the area of `h_α(I_D)`.
pub fn branch_image_volume(
    ring: RingSpec,
    alpha: &QuadInt<i64>,
    order: usize,
    rel_tol: f64,
) -> Result<Quadrature, DynError> {
    if alpha.norm() < 2 {
        return Err(DynError::SmallDigit(alpha.to_string()));
    }
    let dom = Domain::new(ring);
    let a = dom.lattice_point(*alpha.u(), *alpha.v());
    let f = |z: Complex64| (z + a).norm_sqr().powi(-2);
    let mut panels = 1;
    let mut prev = integrate_domain(&dom, panels, order, f);
    loop {
        panels *= 2;
        let cur = integrate_domain(&dom, panels, order, f);
        let err = (cur - prev).abs();
        if err <= rel_tol * cur.abs() {
            return Ok(Quadrature { value: cur, error: err });
        }
        if panels >= 64 {
            return Err(DynError::Quadrature { achieved: err / cur.abs() });
        }
        prev = cur;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn ring(d: u32) -> RingSpec {
        RingSpec::new(d).unwrap()
    }

    #[test]
    fn rounding_agrees_with_exact() {
        for d in RingSpec::SUPPORTED {
            let dom = Domain::new(ring(d));
            // generic points, away from rounding ties
            for (xn, yn, n) in [(7i64, -3i64, 5i64), (-11, 13, 4), (1, 2, 7), (23, -41, 9)] {
                let exact = crate::quad_ring::nearest_integer_triple(ring(d), &xn, &yn, &n);
                let z = dom.lattice_point(1, 0) * (xn as f64 / n as f64)
                    + dom.lattice_point(0, 1) * (yn as f64 / n as f64);
                assert_eq!(dom.round(z), (*exact.u(), *exact.v()), "D={d}");
            }
        }
    }

    #[test]
    fn domain_area_matches_polygon() {
        for d in RingSpec::SUPPORTED {
            let dom = Domain::new(ring(d));
            let p = dom.polygon();
            let mut a = 0.0;
            for i in 0..p.len() {
                let (x0, y0) = p[i];
                let (x1, y1) = p[(i + 1) % p.len()];
                a += x0 * y1 - x1 * y0;
            }
            assert!((0.5 * a - dom.area()).abs() < 1e-12);
            assert!((integrate_domain(&dom, 2, 4, |_| 1.0) - dom.area()).abs() < 1e-12);
        }
    }

    #[test]
    fn psi_level_examples() {
        let r2 = ring(2);
        let half = |x: (i64, i64), y: (i64, i64)| {
            DomainPoint::new(
                r2,
                Ratio::new(BigInt::from(x.0), BigInt::from(x.1)),
                Ratio::new(BigInt::from(y.0), BigInt::from(y.1)),
            )
        };
        // 1/√−2 = −√−2/2
        let (re, im) = psi_levels(&half((0, 1), (-1, 2))).unwrap();
        assert_eq!((re, im), (Ratio::from_integer(BigInt::from(0)), BigInt::from(1)));
        let (re, im) = psi_levels(&half((2, 5), (0, 1))).unwrap();
        assert_eq!((re, im), (Ratio::from_integer(BigInt::from(3)), BigInt::from(0)));
        assert!(psi_levels(&half((0, 1), (0, 1))).is_err());
    }

    #[test]
    fn branch_volume_symmetries() {
        for d in RingSpec::SUPPORTED {
            let r = ring(d);
            let a = QuadInt::new(r, 3, 2);
            let v = branch_image_volume(r, &a, 8, 1e-10).unwrap().value;
            let vn = branch_image_volume(r, &(-&a), 8, 1e-10).unwrap().value;
            let vc = branch_image_volume(r, &a.conj(), 8, 1e-10).unwrap().value;
            assert!((v - vn).abs() < 1e-12 * v && (v - vc).abs() < 1e-12 * v);
        }
        let r = ring(2);
        let big = QuadInt::new(r, 100, 0);
        let v = branch_image_volume(r, &big, 8, 1e-10).unwrap().value;
        assert!((v * 1e8 / r.covolume() - 1.0).abs() < 1e-3);
        assert!(branch_image_volume(r, &QuadInt::new(r, 1, 0), 8, 1e-8).is_err());
    }

    #[test]
    fn two_step_weights() {
        let dom = Domain::new(ring(7));
        let z = Complex64::new(0.13, -0.21);
        let s = dom.two_step(z).unwrap();
        let g = s.first.image;
        assert!(dom.contains(g) && dom.contains(s.second.image));
        assert!((s.log_t - (z * g).norm().powi(4).ln()).abs() < 1e-12);
        assert!(s.log_t < 0.0);
    }
}
