//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sczech_core::dynamics::{
    a_constant, branch_image_volume, leading_eigen, level_masses, level_sum, osc_integral, s0_solve,
    twisted_eigen, ulam_build, ulam_twisted, Domain, UlamOperator,
};
use sczech_core::farey::{count_farey, farey_samples, in_b2, FareyQuery};
use sczech_core::hurwitz_cf::{cf_expand, check_determinants, convergents, orbit};
use sczech_core::sczech::{classical_dedekind, reciprocity_defect, SczechSample};
use sczech_core::stats::{
    char_fn, ks_distance, linear_fit, moments_f64, standardize, vardi_contrast, Reference,
};
use sczech_core::{KElem, QuadInt, RingSpec};

use common::brute_farey;

const OPERATOR_SEED: u64 = 12345;

struct Line {
    pass: bool,
    detail: String,
}

fn line(pass: bool, detail: impl Into<String>) -> Line {
    Line { pass, detail: detail.into() }
}

fn ring(d: u32) -> RingSpec {
    RingSpec::new(d).unwrap()
}

fn c1_elliptic_reciprocity() -> Line {
    let mut bad = 0;
    let mut total = 0;
    for d in [2u32, 7, 11] {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + d as u64);
        let mut done = 0;
        while done < 10_000 {
            let mut pick = || QuadInt::from_i64s(ring(d), rng.gen_range(-100_000..=100_000), rng.gen_range(-100_000..=100_000));
            let (a, c): (QuadInt, QuadInt) = (pick(), pick());
            if a.is_zero() || c.is_zero() || !a.gcd(&c).unwrap().is_unit() {
                continue;
            }
            if !reciprocity_defect(&a, &c).unwrap().is_zero() {
                bad += 1;
            }
            done += 1;
        }
        total += done;
    }
    line(bad == 0, format!("{total} coprime pairs over D=2,7,11, {bad} nonzero defects"))
}

fn c2_classical_reciprocity() -> Line {
    let mut bad = 0;
    let mut pairs = 0;
    for k in 2..=500i64 {
        for h in 1..k {
            if num_integer::gcd(h, k) != 1 {
                continue;
            }
            pairs += 1;
            let lhs = classical_dedekind(h, k).unwrap() + classical_dedekind(k, h).unwrap();
            let rhs = Ratio::new(h * h + k * k + 1, 12 * h * k) - Ratio::new(1, 4);
            if lhs != rhs {
                bad += 1;
            }
        }
    }
    line(bad == 0, format!("{pairs} coprime pairs 1 ≤ h < k ≤ 500, {bad} failures"))
}

fn c3_cf_correctness() -> Line {
    let d = 2;
    let points = brute_farey(d, 200);
    let mut bad = 0;
    for (x, y) in &points {
        let n = x.denom().lcm(y.denom());
        let num: QuadInt = QuadInt::from_i64s(ring(d), x.numer() * (n / x.denom()), y.numer() * (n / y.denom()));
        let z = KElem::new(num, QuadInt::from_i64s(ring(d), n, 0)).unwrap();
        let cf = cf_expand(&z).unwrap();
        let ok = cf.reconstruct().unwrap() == z
            && cf.digits.iter().all(|a| a.norm() >= BigInt::from(2))
            && orbit(&z).unwrap().windows(2).all(|w| w[1].height_sq() < w[0].height_sq())
            && check_determinants(&convergents(&cf.a0, &cf.digits).unwrap()).is_ok();
        if !ok {
            bad += 1;
        }
    }
    line(bad == 0, format!("{} points of K(200) from the brute-force oracle, {bad} failures", points.len()))
}

fn c4_enumeration() -> Line {
    let mut mismatches = Vec::new();
    for d in [2u32, 7, 11] {
        for x in [10i64, 25, 50] {
            let q = FareyQuery::new(ring(d), x);
            let got: std::collections::BTreeSet<_> = sczech_core::farey::enumerate_farey(&q)
                .iter()
                .map(|z| common::quotient(d, (*z.num().u(), *z.num().v()), (*z.den().u(), *z.den().v())))
                .collect();
            if got != brute_farey(d, x) || count_farey(&q) as usize != got.len() {
                mismatches.push(format!("D={d} X={x}"));
            }
        }
    }
    let c = |x: i64| count_farey(&FareyQuery::new(ring(2), x)) as f64 / (x * x) as f64;
    let (a, b) = (c(1000), c(2500));
    let drift = (a - b).abs() / b;
    line(
        mismatches.is_empty() && drift < 0.10,
        format!(
            "oracle mismatches: {:?}; count/X² = {a:.5} (X=1000), {b:.5} (X=2500), drift {:.2}%",
            mismatches,
            100.0 * drift
        ),
    )
}

struct FareyRun {
    samples: Vec<SczechSample<i64>>,
}

impl FareyRun {
    fn dtilde_below(&self, x: i64) -> Vec<f64> {
        self.samples.iter().filter(|s| s.height_sq < x).map(|s| s.dtilde_f64()).collect()
    }
}

fn c5_gaussian_shape(run: &FareyRun) -> Line {
    let mut ks = Vec::new();
    for x in [500, 1000, 2500] {
        let st = standardize(&run.dtilde_below(x)).unwrap();
        ks.push(ks_distance(&st.values, Reference::Gaussian));
    }
    let all = run.dtilde_below(2500);
    let skew = moments_f64(&all).unwrap().skewness;
    let monotone = ks.windows(2).all(|w| w[1] < w[0]);
    line(
        ks[2] <= 0.05 && skew.abs() <= 0.15 && monotone,
        format!(
            "N={} KS(500,1000,2500) = {:.4}, {:.4}, {:.4} (≤ 0.05 at 2500: {}; decreasing: {}); skewness {:.2e}",
            all.len(),
            ks[0],
            ks[1],
            ks[2],
            ks[2] <= 0.05,
            monotone,
            skew
        ),
    )
}

fn c6_mean_growth(run: &FareyRun) -> Line {
    let mut means = Vec::new();
    let mut ratios = Vec::new();
    for x in [250i64, 500, 1000, 2500] {
        let v: Vec<f64> =
            run.samples.iter().filter(|s| s.height_sq < x && in_b2(&s.z)).map(|s| s.dtilde_f64().abs()).collect();
        let m = v.iter().sum::<f64>() / v.len() as f64;
        let lx = (x as f64).ln();
        means.push(m);
        ratios.push(m / (lx * lx.ln()).sqrt());
    }
    let increasing = means.windows(2).all(|w| w[1] > w[0]);
    let spread = ratios.iter().cloned().fold(f64::MIN, f64::max) / ratios.iter().cloned().fold(f64::MAX, f64::min);
    line(
        increasing && spread < 2.0,
        format!("mean|D̃| on B₂ = {means:.4?}; normalized {ratios:.4?}, max/min {spread:.3}"),
    )
}

fn c11_charfn(run: &FareyRun) -> Line {
    let s: Vec<i64> = run.samples.iter().map(|s| s.s).collect();
    let ts: Vec<f64> = (2..=20).map(|k| k as f64 / 100.0).collect();
    let chi = char_fn(&s, &ts);
    let x: Vec<f64> = ts.iter().map(|t| t * t * (1.0 / t).ln()).collect();
    let y: Vec<f64> = chi.iter().map(|c| c.norm().ln()).collect();
    let fit = linear_fit(&x, &y);
    line(
        fit.r_squared >= 0.9 && fit.slope < 0.0,
        format!("log|χ_S| on t²log(1/t), t ∈ [0.02, 0.2]: slope {:.3}, R² {:.4}", fit.slope, fit.r_squared),
    )
}

fn c7_level_sums() -> Line {
    let errs: Vec<f64> = [2u32, 7, 11].iter().map(|&d| level_sum(ring(d), 10, 1_000_000).max_rel_error()).collect();
    line(
        errs.iter().all(|e| *e < 1e-3),
        format!("n=10 relative errors D=2,7,11: {:.2e}, {:.2e}, {:.2e}", errs[0], errs[1], errs[2]),
    )
}

fn c8_branch_volumes() -> Line {
    let mut out = Vec::new();
    let mut pass = true;
    for d in [2u32, 7, 11] {
        let vol = Domain::new(ring(d)).area();
        let (mut lx, mut ly) = (Vec::new(), Vec::new());
        let mut last = 0.0;
        for k in 0..=10 {
            // α = m real, norm m² from 10² to 10⁴
            let m = (10.0 * 10f64.powf(k as f64 / 10.0)).round() as i64;
            let alpha = QuadInt::<i64>::new(ring(d), m, 0);
            let n = alpha.norm() as f64;
            let v = branch_image_volume(ring(d), &alpha, 8, 1e-13).map(|q| q.value).unwrap_or(f64::NAN);
            last = v * n * n;
            lx.push(n.ln());
            ly.push(((last - vol).abs() / vol).ln());
        }
        let fit = linear_fit(&lx, &ly);
        pass &= (fit.slope + 1.0).abs() <= 0.2;
        out.push(format!("D={d}: slope {:.3}, V·N² → {last:.6} (vol {vol:.6})", fit.slope));
    }
    line(pass, out.join("; "))
}

fn lambda_re(op: &UlamOperator, s: f64) -> f64 {
    twisted_eigen(&ulam_twisted(op, s, 0.0).unwrap(), None).unwrap().lambda.re
}

fn c9_operator(op: &UlamOperator) -> Line {
    let (lambda, rho) = leading_eigen(op).unwrap();
    let lambda_trunc = twisted_eigen(&op.truncated(), None).unwrap().lambda.re;
    let (neg, conj) = rho.symmetry_defects();
    let masses = level_masses(&rho, 32, 128);
    let scaled: Vec<f64> = (5..=15).map(|n| (n as f64).powi(3) * masses.get(n)).collect();
    let stab = scaled.iter().cloned().fold(f64::MIN, f64::max) / scaled.iter().cloned().fold(f64::MAX, f64::min) - 1.0;
    let ratios: Vec<f64> = (5..=15).map(|n| masses.get(n) / masses.get(-n)).collect();
    let ratio_ok = ratios.iter().all(|r| (0.95..=1.05).contains(r));
    let (rmin, rmax) = (
        ratios.iter().cloned().fold(f64::MAX, f64::min),
        ratios.iter().cloned().fold(f64::MIN, f64::max),
    );
    line(
        (0.995..=1.005).contains(&lambda) && neg <= 0.02 && conj <= 0.02 && stab <= 0.2 && ratio_ok,
        format!(
            "λ = {lambda:.6} (tail dropped: {lambda_trunc:.5}, escape {:.4}); defects −z {neg:.4}, z̄ {conj:.4}; \
             n³μ(V_n) spread {:.1}% over n ∈ [5,15]; μ(V_n)/μ(V_−n) ∈ [{rmin:.4}, {rmax:.4}]",
            op.escape_mass(&rho.masses),
            100.0 * stab
        ),
    )
}

fn c10_s0(op: &UlamOperator) -> Line {
    let (_, rho) = leading_eigen(op).unwrap();
    let a = a_constant(&rho);
    let h = 1e-3;
    let fd = (lambda_re(op, 1.0 + h) - lambda_re(op, 1.0 - h)) / (2.0 * h);
    let fd_err = (fd - a).abs() / a.abs();
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for t in [0.02, 0.05, 0.1, 0.15, 0.2] {
        let s0 = s0_solve(op, t, 1e-9).unwrap().s0 - 1.0;
        let osc: Complex64 = osc_integral(t, &rho);
        let pred = -osc.re / a;
        xs.push(t * t * (1.0 / t).ln());
        ys.push(s0);
        if t >= 0.05 {
            let e = (s0 - pred).abs() / pred.abs();
            worst = worst.max(e);
            parts.push(format!("t={t}: {s0:.3e} vs {pred:.3e} ({:.0}%)", 100.0 * e));
        }
    }
    let fit = linear_fit(&xs, &ys);
    line(
        a > 0.0 && fd_err <= 0.05 && worst <= 0.15 && fit.r_squared >= 0.9,
        format!(
            "A = {a:.4} (> 0: {}); ∂_sλ = {fd:.4}, off by {:.2}%; s₀−1 vs (1/A)∫(1−e^{{itΨ}})dμ: {}; \
             worst {:.0}%; R² on t²log(1/t) {:.4}",
            a > 0.0,
            100.0 * fd_err,
            parts.join(", "),
            100.0 * worst,
            fit.r_squared
        ),
    )
}

fn c12_cauchy() -> Line {
    let reps: Vec<_> = [500, 1000, 2000].iter().map(|&q| vardi_contrast(q)).collect();
    let r = &reps[2];
    let kurt: Vec<f64> = reps.iter().map(|r| r.excess_kurtosis).collect();
    let increasing = kurt.windows(2).all(|w| w[1] > w[0]);
    line(
        r.ks_cauchy < r.ks_gaussian_best && increasing,
        format!(
            "Q=2000: KS to Cauchy {:.4} vs best Gaussian {:.4} (best-scale Cauchy {:.4}); excess kurtosis {:.1?} (increasing: {increasing})",
            r.ks_cauchy, r.ks_gaussian_best, r.ks_cauchy_best, kurt
        ),
    )
}

fn main() -> ExitCode {
    let mut results: Vec<(u32, &str, Line, f64)> = Vec::new();
    let mut record = |id: u32, name: &'static str, f: &mut dyn FnMut() -> Line| {
        let t = Instant::now();
        let l = f();
        let secs = t.elapsed().as_secs_f64();
        println!("{} [{id:>2}] {name} ({secs:.1} s): {}", if l.pass { "PASS" } else { "FAIL" }, l.detail);
        results.push((id, name, l, secs));
    };
    record(1, "elliptic reciprocity", &mut c1_elliptic_reciprocity);
    record(2, "classical reciprocity", &mut c2_classical_reciprocity);
    record(3, "continued fractions", &mut c3_cf_correctness);
    record(4, "Farey enumeration", &mut c4_enumeration);

    let t = Instant::now();
    let run = FareyRun { samples: farey_samples(&FareyQuery::new(ring(2), 2500).exclude_zero()).unwrap() };
    println!("  (K(2500) for D=2: {} points in {:.1} s)", run.samples.len(), t.elapsed().as_secs_f64());
    record(5, "Gaussian shape of D̃", &mut || c5_gaussian_shape(&run));
    record(6, "mean |D̃| growth", &mut || c6_mean_growth(&run));
    record(11, "characteristic function shape", &mut || c11_charfn(&run));
    drop(run);

    record(7, "level-set sums", &mut c7_level_sums);
    record(8, "branch volumes", &mut c8_branch_volumes);

    let t = Instant::now();
    let op = ulam_build(ring(2), 128, 400, 1024, OPERATOR_SEED).unwrap();
    println!("  (Ulam operator D=2, grid 128, cutoff 400: built in {:.1} s)", t.elapsed().as_secs_f64());
    record(9, "transfer operator", &mut || c9_operator(&op));
    record(10, "s₀ and the oscillatory integral", &mut || c10_s0(&op));
    drop(op);

    record(12, "Cauchy contrast", &mut c12_cauchy);

    let failed: Vec<u32> = results.iter().filter(|r| !r.2.pass).map(|r| r.0).collect();
    println!(
        "acceptance: {} passed, {} failed{}",
        results.len() - failed.len(),
        failed.len(),
        if failed.is_empty() { String::new() } else { format!(" {failed:?}") }
    );
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
