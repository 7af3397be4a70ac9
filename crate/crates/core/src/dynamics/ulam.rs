//! Ulam discretization of the transfer operator on a g×g grid over I_D.
//!
//! Operators act on cell masses from the left: `m'_j = Σ_i m_i K_ij`. A
//! sample whose digit norm exceeds the cutoff (or whose image falls in a
//! dropped cell) is not followed; its weight is spread over all cells in
//! proportion to their area, which keeps the untwisted rows stochastic. The
//! weight lost that way is reported per row, and [`UlamOperator::truncated`]
//! drops it instead.

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::quad_ring::RingSpec;

use super::geometry::Domain;
use super::DynError;

/// Cells whose clipped area is below this fraction of the box are dropped.
const DROP_FRACTION: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Cell {
    pub ix: u32,
    pub iy: u32,
    /// Area of the box clipped to I_D.
    pub area: f64,
}

#[derive(Clone, Debug)]
pub struct UlamGrid {
    pub domain: Domain,
    pub g: usize,
    pub dx: f64,
    pub dy: f64,
    pub cells: Vec<Cell>,
    cell_of: Vec<Option<u32>>,
    total_area: f64,
}

impl UlamGrid {
    pub fn new(ring: RingSpec, g: usize) -> Result<Self, DynError> {
        if g < 2 || g % 2 != 0 {
            return Err(DynError::InvalidParameter(format!("grid size must be even and ≥ 2, got {g}")));
        }
        let domain = Domain::new(ring);
        let dx = 1.0 / g as f64;
        let dy = 2.0 * domain.half_height / g as f64;
        let poly = domain.polygon();
        let mut cells = Vec::new();
        let mut cell_of = vec![None; g * g];
        for iy in 0..g {
            for ix in 0..g {
                let (x0, y0) = (-0.5 + ix as f64 * dx, -domain.half_height + iy as f64 * dy);
                let rect = vec![(x0, y0), (x0 + dx, y0), (x0 + dx, y0 + dy), (x0, y0 + dy)];
                let area = shoelace(&clip_convex(rect, &poly));
                if area > DROP_FRACTION * dx * dy {
                    cell_of[iy * g + ix] = Some(cells.len() as u32);
                    cells.push(Cell { ix: ix as u32, iy: iy as u32, area });
                }
            }
        }
        let total_area = cells.iter().map(|c| c.area).sum();
        Ok(Self { domain, g, dx, dy, cells, cell_of, total_area })
    }

    pub fn ring(&self) -> RingSpec {
        self.domain.ring
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Sum of the kept cell areas.
    pub fn total_area(&self) -> f64 {
        self.total_area
    }

    /// Lower-left corner of the box of cell `i`.
    pub fn corner(&self, i: usize) -> (f64, f64) {
        let c = self.cells[i];
        (-0.5 + c.ix as f64 * self.dx, -self.domain.half_height + c.iy as f64 * self.dy)
    }

    pub fn center(&self, i: usize) -> Complex64 {
        let (x, y) = self.corner(i);
        Complex64::new(x + 0.5 * self.dx, y + 0.5 * self.dy)
    }

    pub fn locate(&self, z: Complex64) -> Option<usize> {
        let fx = ((z.re + 0.5) / self.dx).floor();
        let fy = ((z.im + self.domain.half_height) / self.dy).floor();
        let clamp = |f: f64| (f.max(0.0) as usize).min(self.g - 1);
        self.cell_of[clamp(fy) * self.g + clamp(fx)].map(|c| c as usize)
    }

    fn index_at(&self, ix: usize, iy: usize) -> Option<usize> {
        self.cell_of[iy * self.g + ix].map(|c| c as usize)
    }

    /// Index of the image of cell `i` under z → −z.
    pub fn neg_index(&self, i: usize) -> Option<usize> {
        let c = self.cells[i];
        self.index_at(self.g - 1 - c.ix as usize, self.g - 1 - c.iy as usize)
    }

    /// Index of the image of cell `i` under z → z̄.
    pub fn conj_index(&self, i: usize) -> Option<usize> {
        let c = self.cells[i];
        self.index_at(c.ix as usize, self.g - 1 - c.iy as usize)
    }
}

/// Sutherland–Hodgman clipping of `subject` against a counter-clockwise convex polygon.
fn clip_convex(subject: Vec<(f64, f64)>, clip: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut out = subject;
    for k in 0..clip.len() {
        if out.is_empty() {
            break;
        }
        let (a, b) = (clip[k], clip[(k + 1) % clip.len()]);
        let side = |p: (f64, f64)| (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
        let input = std::mem::take(&mut out);
        for i in 0..input.len() {
            let (p, q) = (input[i], input[(i + 1) % input.len()]);
            let (sp, sq) = (side(p), side(q));
            if sp >= 0.0 {
                out.push(p);
            }
            if (sp >= 0.0) != (sq >= 0.0) {
                let t = sp / (sp - sq);
                out.push((p.0 + t * (q.0 - p.0), p.1 + t * (q.1 - p.1)));
            }
        }
    }
    out
}

fn shoelace(p: &[(f64, f64)]) -> f64 {
    let mut a = 0.0;
    for i in 0..p.len() {
        let (x0, y0) = p[i];
        let (x1, y1) = p[(i + 1) % p.len()];
        a += x0 * y1 - x1 * y0;
    }
    0.5 * a.abs()
}

const NONE: u32 = u32::MAX;

/// One stratified sample, reduced to what the operators need. Cells are
/// `u32::MAX` when the orbit is not followed: a digit beyond the cutoff, or
/// an image in a dropped cell.
#[derive(Clone, Copy, Debug)]
pub struct Sample {
    /// Cell of G(z).
    pub j1: u32,
    /// Cell of G²(z).
    pub j2: u32,
    /// imd([1/z]).
    pub psi1: i32,
    /// Ψ(z) = imd([1/z]) − imd([1/G(z)]).
    pub psi: i32,
    pub log_t: f32,
}

impl Sample {
    fn target(&self, steps: usize) -> Option<usize> {
        let j = if steps == 1 { self.j1 } else { self.j2 };
        (j != NONE).then_some(j as usize)
    }
}

/// Samples for every cell, reused by all operators built on the same grid.
#[derive(Clone, Debug)]
pub struct SampleBank {
    pub grid: Arc<UlamGrid>,
    pub cutoff: i64,
    pub seed: u64,
    pub samples: Vec<Sample>,
    /// `samples[offsets[i]..offsets[i + 1]]` lie in cell `i`, sorted by `j2`.
    pub offsets: Vec<usize>,
}

impl SampleBank {
    /// Jittered k×k sampling of every cell box (`k = ⌊√samples_per_cell⌋`),
    /// keeping points of I_D and topping up by rejection to k² per cell. Each
    /// cell draws from its own ChaCha stream, so the bank does not depend on
    /// the thread count.
    pub fn build(grid: Arc<UlamGrid>, cutoff: i64, samples_per_cell: usize, seed: u64) -> Result<Self, DynError> {
        let k = (samples_per_cell as f64).sqrt().floor() as usize;
        if k == 0 {
            return Err(DynError::InvalidParameter("samples_per_cell must be ≥ 1".into()));
        }
        let per_cell: Vec<Vec<Sample>> = (0..grid.len())
            .into_par_iter()
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(i as u64);
                let (x0, y0) = grid.corner(i);
                let dom = &grid.domain;
                let mut pts = Vec::with_capacity(k * k);
                for a in 0..k {
                    for b in 0..k {
                        let x = x0 + (a as f64 + rng.gen::<f64>()) / k as f64 * grid.dx;
                        let y = y0 + (b as f64 + rng.gen::<f64>()) / k as f64 * grid.dy;
                        let z = Complex64::new(x, y);
                        if dom.contains(z) {
                            pts.push(z);
                        }
                    }
                }
                while pts.len() < k * k {
                    let z = Complex64::new(x0 + rng.gen::<f64>() * grid.dx, y0 + rng.gen::<f64>() * grid.dy);
                    if dom.contains(z) {
                        pts.push(z);
                    }
                }
                let mut out: Vec<Sample> = pts.into_iter().filter_map(|z| sample_at(&grid, z, cutoff)).collect();
                out.sort_by_key(|x| x.j2);
                out
            })
            .collect();
        let mut offsets = Vec::with_capacity(grid.len() + 1);
        offsets.push(0);
        let mut samples = Vec::with_capacity(grid.len() * k * k);
        for s in per_cell {
            samples.extend(s);
            offsets.push(samples.len());
        }
        Ok(Self { grid, cutoff, seed, samples, offsets })
    }

    pub fn cell(&self, i: usize) -> &[Sample] {
        &self.samples[self.offsets[i]..self.offsets[i + 1]]
    }

    /// `Σ_i m_i · mean_{samples in i} f`, the integral of `f` against cell masses.
    pub fn integrate<T>(&self, masses: &[f64], f: impl Fn(&Sample) -> T + Sync) -> T
    where
        T: Send + std::iter::Sum<T> + std::ops::Mul<f64, Output = T> + Default,
    {
        let per_cell: Vec<T> = (0..self.grid.len())
            .into_par_iter()
            .map(|i| {
                let c = self.cell(i);
                if c.is_empty() {
                    return T::default();
                }
                c.iter().map(&f).sum::<T>() * (masses[i] / c.len() as f64)
            })
            .collect();
        per_cell.into_iter().sum()
    }
}

fn sample_at(grid: &UlamGrid, z: Complex64, cutoff: i64) -> Option<Sample> {
    let dom = &grid.domain;
    let two = dom.two_step(z)?;
    let (f, s) = (two.first, two.second);
    let follow = |step: &super::geometry::Step, w: Complex64| {
        if dom.lattice_norm(step.u, step.v) > cutoff {
            return NONE;
        }
        grid.locate(w).map_or(NONE, |j| j as u32)
    };
    let j1 = follow(&f, f.image);
    let j2 = if j1 == NONE { NONE } else { follow(&s, s.image) };
    Some(Sample {
        j1,
        j2,
        psi1: dom.imd(f.v) as i32,
        psi: two.psi as i32,
        log_t: two.log_t as f32,
    })
}

/// Sparse operator stored by columns for a gather mat-vec.
#[derive(Clone, Debug)]
pub struct UlamOperator {
    pub bank: Arc<SampleBank>,
    pub s: f64,
    pub t: f64,
    /// 1 for the Gauss map, 2 for K_{s,t} = ℒ²[g_{s,t}·].
    pub steps: usize,
    pub lump_tail: bool,
    col_ptr: Vec<usize>,
    rows: Vec<u32>,
    vals: Vec<Complex64>,
    /// Weight of row `i` not followed through the cutoff.
    tail: Vec<Complex64>,
}

/// Untwisted one-step operator of the Hurwitz map.
pub fn ulam_build(
    ring: RingSpec,
    grid_g: usize,
    cutoff: i64,
    samples_per_cell: usize,
    seed: u64,
) -> Result<UlamOperator, DynError> {
    if grid_g < 16 {
        return Err(DynError::InvalidParameter(format!("grid must be at least 16, got {grid_g}")));
    }
    if cutoff < 20 {
        return Err(DynError::InvalidParameter(format!("cutoff must be at least 20, got {cutoff}")));
    }
    let grid = Arc::new(UlamGrid::new(ring, grid_g)?);
    let bank = Arc::new(SampleBank::build(grid, cutoff, samples_per_cell, seed)?);
    Ok(UlamOperator::assemble(bank, 1.0, 0.0, 1))
}

/// The two-step operator K_{s,t} with weights `e^{itΨ}·T^{s−1}`, on the samples of `base`.
pub fn ulam_twisted(base: &UlamOperator, s: f64, t: f64) -> Result<UlamOperator, DynError> {
    if (s - 1.0).abs() > 0.2 + 1e-12 || t.abs() > 0.5 + 1e-12 {
        return Err(DynError::InvalidParameter(format!("(s, t) = ({s}, {t}) outside |s − 1| ≤ 0.2, |t| ≤ 0.5")));
    }
    Ok(UlamOperator::assemble(base.bank.clone(), s, t, 2))
}

impl UlamOperator {
    fn assemble(bank: Arc<SampleBank>, s: f64, t: f64, steps: usize) -> Self {
        let n = bank.grid.len();
        let weight = |x: &Sample| {
            if steps == 1 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::from_polar(((s - 1.0) * x.log_t as f64).exp(), t * x.psi as f64)
            }
        };
        let row_data: Vec<(Vec<(u32, Complex64)>, Complex64)> = (0..n)
            .into_par_iter()
            .map(|i| {
                let c = bank.cell(i);
                let inv = 1.0 / c.len().max(1) as f64;
                let mut entries = Vec::with_capacity(c.len());
                let mut tail = Complex64::new(0.0, 0.0);
                for x in c {
                    let w = weight(x) * inv;
                    match x.target(steps) {
                        Some(j) => entries.push((j as u32, w)),
                        None => tail += w,
                    }
                }
                // the bank is already ordered by j2
                if steps == 1 {
                    entries.sort_by_key(|e| e.0);
                }
                let mut merged: Vec<(u32, Complex64)> = Vec::with_capacity(entries.len());
                for (j, w) in entries {
                    match merged.last_mut() {
                        Some(last) if last.0 == j => last.1 += w,
                        _ => merged.push((j, w)),
                    }
                }
                (merged, tail)
            })
            .collect();
        // transpose rows into columns
        let mut counts = vec![0usize; n + 1];
        for (r, _) in &row_data {
            for &(j, _) in r {
                counts[j as usize + 1] += 1;
            }
        }
        for j in 0..n {
            counts[j + 1] += counts[j];
        }
        let col_ptr = counts.clone();
        let nnz = col_ptr[n];
        let mut rows = vec![0u32; nnz];
        let mut vals = vec![Complex64::new(0.0, 0.0); nnz];
        let mut fill = counts;
        let mut tail = Vec::with_capacity(n);
        for (i, (r, tl)) in row_data.into_iter().enumerate() {
            for (j, w) in r {
                let p = fill[j as usize];
                rows[p] = i as u32;
                vals[p] = w;
                fill[j as usize] += 1;
            }
            tail.push(tl);
        }
        Self { bank, s, t, steps, lump_tail: true, col_ptr, rows, vals, tail }
    }

    pub fn grid(&self) -> &UlamGrid {
        &self.bank.grid
    }

    pub fn dim(&self) -> usize {
        self.tail.len()
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// The same operator with the escaping weight dropped instead of lumped.
    pub fn truncated(&self) -> Self {
        Self { lump_tail: false, ..self.clone() }
    }

    pub fn is_real(&self) -> bool {
        self.t == 0.0
    }

    /// `m ↦ m·K`.
    pub fn apply(&self, m: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(m.len(), self.dim());
        let lumped: Complex64 = if self.lump_tail {
            m.iter().zip(&self.tail).map(|(a, b)| a * b).sum::<Complex64>() / self.grid().total_area()
        } else {
            Complex64::new(0.0, 0.0)
        };
        let cells = &self.grid().cells;
        (0..self.dim())
            .into_par_iter()
            .map(|j| {
                let mut acc = lumped * cells[j].area;
                for p in self.col_ptr[j]..self.col_ptr[j + 1] {
                    acc += m[self.rows[p] as usize] * self.vals[p];
                }
                acc
            })
            .collect()
    }

    /// Row sums, including the lumped tail when it is active.
    pub fn row_sums(&self) -> Vec<Complex64> {
        let mut sums = if self.lump_tail { self.tail.clone() } else { vec![Complex64::new(0.0, 0.0); self.dim()] };
        for (&r, &v) in self.rows.iter().zip(&self.vals) {
            sums[r as usize] += v;
        }
        sums
    }

    /// Fraction of each row's samples not followed through the cutoff.
    pub fn escape_by_row(&self) -> Vec<f64> {
        (0..self.dim())
            .map(|i| {
                let c = self.bank.cell(i);
                c.iter().filter(|x| x.target(self.steps).is_none()).count() as f64 / c.len().max(1) as f64
            })
            .collect()
    }

    /// Escaping mass under the cell masses `m`, i.e. `Σ_i m_i · escape_i`.
    pub fn escape_mass(&self, masses: &[f64]) -> f64 {
        self.escape_by_row().iter().zip(masses).map(|(e, m)| e * m).sum()
    }

    /// Lebesgue measure of the cells' escaping part, normalized by the area.
    pub fn escape_area(&self) -> f64 {
        let cells = &self.grid().cells;
        let masses: Vec<f64> = cells.iter().map(|c| c.area / self.grid().total_area()).collect();
        self.escape_mass(&masses)
    }
}

/// Leading eigenpair of an operator, computed by power iteration.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub lambda: Complex64,
    /// Left eigenvector, unit ℓ² norm, phase chosen so that its sum is real and positive.
    pub vector: Vec<Complex64>,
    pub iterations: usize,
    pub residual: f64,
}

pub const EIGEN_TOL: f64 = 1e-10;
const MAX_ITER: usize = 5000;

/// Power iteration with a Rayleigh-quotient readout; "leading" means largest modulus.
pub fn twisted_eigen(op: &UlamOperator, start: Option<&[Complex64]>) -> Result<Eigen, DynError> {
    let n = op.dim();
    let total = op.grid().total_area();
    let mut m: Vec<Complex64> = match start {
        Some(s) if s.len() == n => s.to_vec(),
        _ => op.grid().cells.iter().map(|c| Complex64::new(c.area / total, 0.0)).collect(),
    };
    normalize(&mut m);
    let mut residual = f64::INFINITY;
    for it in 1..=MAX_ITER {
        let y = op.apply(&m);
        let lambda: Complex64 = m.iter().zip(&y).map(|(a, b)| a.conj() * b).sum();
        residual = y.iter().zip(&m).map(|(b, a)| (b - lambda * a).norm_sqr()).sum::<f64>().sqrt();
        if residual <= EIGEN_TOL * lambda.norm().max(1e-300) {
            let mut vector = y;
            normalize(&mut vector);
            return Ok(Eigen { lambda, vector, iterations: it, residual });
        }
        m = y;
        normalize(&mut m);
    }
    Err(DynError::NonConvergence { iterations: MAX_ITER, residual })
}

fn normalize(m: &mut [Complex64]) {
    let norm = m.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let sum: Complex64 = m.iter().sum();
    let phase = if sum.norm() > 0.0 { sum.conj() / sum.norm() } else { Complex64::new(1.0, 0.0) };
    let scale = phase / norm;
    for x in m.iter_mut() {
        *x *= scale;
    }
}

/// Invariant density as cell masses summing to 1.
#[derive(Clone, Debug)]
pub struct DensityEstimate {
    pub bank: Arc<SampleBank>,
    pub masses: Vec<f64>,
}

impl DensityEstimate {
    pub fn grid(&self) -> &UlamGrid {
        &self.bank.grid
    }

    /// Density value (mass / area) on cell `i`.
    pub fn value(&self, i: usize) -> f64 {
        self.masses[i] / self.grid().cells[i].area
    }

    /// Density at `z`, or 0 outside the kept cells.
    pub fn at(&self, z: Complex64) -> f64 {
        self.grid().locate(z).map_or(0.0, |i| self.value(i))
    }

    /// L¹ distance between the density and its pull-back under z → −z and z → z̄.
    pub fn symmetry_defects(&self) -> (f64, f64) {
        let grid = self.grid();
        let defect = |map: &dyn Fn(usize) -> Option<usize>| {
            (0..grid.len())
                .map(|i| match map(i) {
                    Some(k) => (self.masses[i] - self.masses[k]).abs(),
                    None => self.masses[i],
                })
                .sum::<f64>()
        };
        (defect(&|i| grid.neg_index(i)), defect(&|i| grid.conj_index(i)))
    }
}

/// Leading eigenvalue and invariant density of an untwisted operator.
pub fn leading_eigen(op: &UlamOperator) -> Result<(f64, DensityEstimate), DynError> {
    if !op.is_real() {
        return Err(DynError::InvalidParameter("leading_eigen needs t = 0; use twisted_eigen".into()));
    }
    let e = twisted_eigen(op, None)?;
    let sum: f64 = e.vector.iter().map(|x| x.re).sum();
    let masses = e.vector.iter().map(|x| (x.re / sum).max(0.0)).collect();
    Ok((e.lambda.re, DensityEstimate { bank: op.bank.clone(), masses }))
}
