use std::fs::File;
use std::io::{self, Write};
use std::sync::Arc;

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use sczech_core::dynamics::{
    a_constant, leading_eigen, level_masses, level_sum, mu_level_pullback, osc_integral, s0_solve,
    twisted_eigen, ulam_build, ulam_twisted, DensityEstimate, UlamOperator,
};
use sczech_core::farey::{farey_samples, in_b2, FareyQuery};
use sczech_core::hurwitz_cf::{cf_expand, CfReport};
use sczech_core::sczech::{
    classical_dedekind, classical_dedekind_fast, cost_s, reciprocity_defect, sczech_tilde, SczechReport,
    SczechSample,
};
use sczech_core::stats::{
    char_fn, histogram_fd, ks_distance, linear_fit, moments_exact, scale_ratio, standardize, vardi_contrast,
    Histogram, Reference,
};
use sczech_core::{KElem, QuadInt, RingSpec};

use crate::args::*;
use crate::error::CliError;
use crate::Meta;

type Res<T> = Result<T, CliError>;

pub fn run(cmd: &Command, meta: &dyn Fn(Option<u64>) -> Meta) -> Res<()> {
    match cmd {
        Command::Cf(a) => emit(cf(a)?, meta(None)),
        Command::Sczech(a) => emit(sczech(a)?, meta(None)),
        Command::Classical(a) => emit(classical(a)?, meta(None)),
        Command::Enumerate(a) => enumerate(a, meta),
        Command::Distribution(a) => distribution(a, meta),
        Command::Charfn(a) => emit(charfn(a)?, meta(None)),
        Command::Ulam(a) => ulam(a, meta),
        Command::Levelsets(a) => emit(levelsets(a)?, meta(Some(a.op.seed))),
        Command::S0curve(a) => s0curve(a, meta),
        Command::Vardi(a) => emit(vardi(a)?, meta(None)),
    }
}

/// Print one JSON object: the result fields plus `meta`.
fn emit(result: impl Serialize, meta: Meta) -> Res<()> {
    println!("{}", with_meta(result, meta));
    Ok(())
}

fn with_meta(result: impl Serialize, meta: Meta) -> Value {
    let mut v = serde_json::to_value(result).expect("reports serialize");
    let m = serde_json::to_value(meta).expect("meta serializes");
    match v.as_object_mut() {
        Some(obj) => {
            obj.insert("meta".into(), m);
            v
        }
        None => json!({ "result": v, "meta": m }),
    }
}

fn write_sidecar(path: &str, value: &Value) -> Res<()> {
    let mut f = File::create(format!("{path}.meta.json"))?;
    writeln!(f, "{value}")?;
    Ok(())
}

fn ring(d: u32) -> Res<RingSpec> {
    Ok(RingSpec::new(d)?)
}

fn cf(a: &CfArgs) -> Res<CfReport> {
    let r = ring(a.d)?;
    let num: QuadInt = QuadInt::parse(r, &a.num)?;
    let den = QuadInt::parse(r, &a.den)?;
    let z = KElem::new(num, den)?;
    Ok(CfReport::new(&cf_expand(&z)?)?)
}

fn sczech(a: &PairArgs) -> Res<SczechReport> {
    let r = ring(a.d)?;
    let num: QuadInt = QuadInt::parse(r, &a.a)?;
    let den: QuadInt = QuadInt::parse(r, &a.c)?;
    if den.is_zero() {
        return Err(CliError::Config("c must be nonzero".into()));
    }
    if !num.gcd(&den)?.is_unit() {
        return Err(CliError::Config(format!("a = {num} and c = {den} are not coprime")));
    }
    let z = KElem::new(num.clone(), den.clone())?;
    let cfx = cf_expand(&z)?;
    let dtilde = sczech_tilde(&num, &den)?;
    let s = cost_s(&z)?;
    let defect = if num.is_zero() {
        "undefined".to_string()
    } else {
        let d = reciprocity_defect(&num, &den)?;
        if !d.is_zero() {
            return Err(CliError::Contract(format!("reciprocity defect {d} for a = {num}, c = {den}")));
        }
        d.to_string()
    };
    Ok(SczechReport { dtilde: dtilde.to_string(), s: s.to_string(), ell: cfx.len(), defect })
}

#[derive(Serialize)]
struct ClassicalReport {
    h: i64,
    k: i64,
    value: String,
    value_f64: f64,
    /// `s(h,k) + s(k,h) − (h/k + k/h + 1/(hk))/12 + 1/4`, for `h > 0`.
    reciprocity_defect: Option<String>,
}

fn classical(a: &ClassicalArgs) -> Res<ClassicalReport> {
    let v = classical_dedekind(a.h, a.k)?;
    let fast = classical_dedekind_fast(a.h, a.k)?;
    if Ratio::new(*v.numer() as i128, *v.denom() as i128) != fast {
        return Err(CliError::Contract(format!("sawtooth {v} and descent {fast} disagree")));
    }
    let reciprocity_defect = if a.h > 0 {
        let back = classical_dedekind(a.k, a.h)?;
        let (h, k) = (a.h as i128, a.k as i128);
        let rhs = Ratio::new(h * h + k * k + 1, 12 * h * k) - Ratio::new(1, 4);
        let lhs = Ratio::new(*v.numer() as i128, *v.denom() as i128)
            + Ratio::new(*back.numer() as i128, *back.denom() as i128);
        let d = lhs - rhs;
        if !d.is_zero() {
            return Err(CliError::Contract(format!("classical reciprocity defect {d}")));
        }
        Some(d.to_string())
    } else {
        None
    };
    Ok(ClassicalReport {
        h: a.h,
        k: a.k,
        value: v.to_string(),
        value_f64: v.to_f64().unwrap_or(f64::NAN),
        reciprocity_defect,
    })
}

fn samples(f: &FareyArgs) -> Res<Vec<SczechSample<i64>>> {
    let r = ring(f.d)?;
    if f.x < 1 {
        return Err(CliError::Config(format!("X must be at least 1, got {}", f.x)));
    }
    if f.b2 && f.d != 2 {
        return Err(CliError::Config("--b2 needs D = 2".into()));
    }
    let mut q = FareyQuery::new(r, f.x);
    if f.exclude_zero {
        q = q.exclude_zero();
    }
    if f.half_open {
        q = q.half_open();
    }
    let mut out = farey_samples(&q)?;
    if f.b2 {
        out.retain(|s| in_b2(&s.z));
    }
    Ok(out)
}

fn enumerate(a: &EnumerateArgs, meta: &dyn Fn(Option<u64>) -> Meta) -> Res<()> {
    let rows = samples(&a.farey)?;
    let sink: Box<dyn Write> = match &a.csv {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    };
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["a_u", "a_v", "b_u", "b_v", "normsq_b", "ell", "S_num", "S_den", "Dt_num", "Dt_den"])?;
    for s in &rows {
        let (n, d) = (s.z.num(), s.z.den());
        w.write_record(&[
            n.u().to_string(),
            n.v().to_string(),
            d.u().to_string(),
            d.v().to_string(),
            s.height_sq.to_string(),
            s.ell.to_string(),
            s.s.to_string(),
            "1".to_string(),
            s.dtilde.numer().to_string(),
            s.dtilde.denom().to_string(),
        ])?;
    }
    w.flush()?;
    drop(w);
    let summary = with_meta(json!({ "count": rows.len() }), meta(None));
    match &a.csv {
        Some(p) => {
            write_sidecar(p, &summary)?;
            println!("{summary}");
        }
        None => eprintln!("{summary}"),
    }
    Ok(())
}

#[derive(Serialize)]
struct DistributionReport {
    stat: StatKind,
    count: usize,
    mean: f64,
    std: f64,
    /// std/√(log X · log log X).
    scale_ratio: f64,
    mean_abs: f64,
    max_abs_s_minus_dt: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    ks_gaussian: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ks_cauchy: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    moments: Option<sczech_core::stats::Moments>,
    histogram_bins: usize,
}

fn distribution(a: &DistributionArgs, meta: &dyn Fn(Option<u64>) -> Meta) -> Res<()> {
    let rows = samples(&a.farey)?;
    let exact: Vec<Ratio<i64>> = rows
        .iter()
        .map(|s| match a.stat {
            StatKind::Dt => s.dtilde,
            StatKind::S => Ratio::from_integer(s.s),
        })
        .collect();
    let values: Vec<f64> = exact.iter().map(|r| r.to_f64().unwrap_or(f64::NAN)).collect();
    let st = standardize(&values)?;
    let max_gap = rows.iter().map(|s| (s.s_f64() - s.dtilde_f64()).abs()).fold(0.0, f64::max);
    let mean_abs = values.iter().map(|v| v.abs()).sum::<f64>() / values.len() as f64;
    let moments = if a.moments { Some(moments_exact(&exact)?) } else { None };
    let raw = histogram_fd(&values);
    let centered: Vec<f64> = values.iter().map(|v| v - st.mean).collect();
    let hist_centered = histogram_fd(&centered);
    let hist_std = histogram_fd(&st.values);
    if let Some(p) = &a.csv {
        let mut w = csv::Writer::from_path(p)?;
        w.write_record(["kind", "lo", "hi", "count"])?;
        for (kind, h) in [("raw", &raw), ("centered", &hist_centered), ("standardized", &hist_std)] {
            write_hist(&mut w, kind, h)?;
        }
        w.flush()?;
    }
    let report = DistributionReport {
        stat: a.stat,
        count: values.len(),
        mean: st.mean,
        std: st.std,
        scale_ratio: scale_ratio(st.std, a.farey.x as f64),
        mean_abs,
        max_abs_s_minus_dt: max_gap,
        ks_gaussian: a.ks.then(|| ks_distance(&st.values, Reference::Gaussian)),
        ks_cauchy: a.ks.then(|| ks_distance(&st.values, Reference::Cauchy)),
        moments,
        histogram_bins: raw.counts.len(),
    };
    let out = with_meta(report, meta(None));
    if let Some(p) = &a.csv {
        write_sidecar(p, &out)?;
    }
    println!("{out}");
    Ok(())
}

fn write_hist<W: Write>(w: &mut csv::Writer<W>, kind: &str, h: &Histogram) -> Res<()> {
    for (i, c) in h.counts.iter().enumerate() {
        w.write_record(&[kind.to_string(), h.edges[i].to_string(), h.edges[i + 1].to_string(), c.to_string()])?;
    }
    Ok(())
}

/// `start:stop:step` (inclusive) or a comma-separated list.
pub fn parse_grid(s: &str) -> Res<Vec<f64>> {
    let bad = || CliError::Config(format!("bad grid `{s}`; use start:stop:step or a,b,c"));
    if s.contains(':') {
        let parts: Vec<f64> = s.split(':').map(|p| p.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|_| bad())?;
        let [a, b, step] = parts[..] else { return Err(bad()) };
        if step <= 0.0 || b < a {
            return Err(bad());
        }
        let n = ((b - a) / step + 1e-9).floor() as usize;
        Ok((0..=n).map(|i| a + i as f64 * step).collect())
    } else {
        s.split(',').map(|p| p.trim().parse::<f64>().map_err(|_| bad())).collect()
    }
}

#[derive(Serialize)]
struct CharfnPoint {
    t: f64,
    re: f64,
    im: f64,
    abs: f64,
}

fn charfn(a: &CharfnArgs) -> Res<Value> {
    let rows = samples(&a.farey)?;
    let ts = parse_grid(&a.tgrid)?;
    let s: Vec<i64> = rows.iter().map(|r| r.s).collect();
    let chi = char_fn(&s, &ts);
    let points: Vec<CharfnPoint> =
        ts.iter().zip(&chi).map(|(&t, c)| CharfnPoint { t, re: c.re, im: c.im, abs: c.norm() }).collect();
    // log|χ| against t² log(1/t) over 0 < t < 1
    let (xs, ys): (Vec<f64>, Vec<f64>) = points
        .iter()
        .filter(|p| p.t > 0.0 && p.t < 1.0 && p.abs > 0.0)
        .map(|p| (p.t * p.t * (1.0 / p.t).ln(), p.abs.ln()))
        .unzip();
    let fit = (xs.len() >= 3).then(|| linear_fit(&xs, &ys));
    Ok(json!({ "count": s.len(), "points": points, "fit_log_abs_vs_t2_log_inv_t": fit }))
}

struct Built {
    op: UlamOperator,
    lambda: f64,
    density: DensityEstimate,
}

fn build_operator(o: &OperatorArgs) -> Res<Built> {
    let op = ulam_build(ring(o.d)?, o.grid, o.cutoff, o.samples, o.seed)?;
    let (lambda, density) = leading_eigen(&op)?;
    Ok(Built { op, lambda, density })
}

#[derive(Serialize)]
struct UlamReport {
    cells: usize,
    nnz: usize,
    lambda_untwisted: f64,
    lambda_truncated: f64,
    s: f64,
    t: f64,
    lambda_re: f64,
    lambda_im: f64,
    a_constant: f64,
    escape_mass: f64,
    symmetry_defect_neg: f64,
    symmetry_defect_conj: f64,
    density_histogram: Histogram,
}

fn ulam(a: &UlamArgs, meta: &dyn Fn(Option<u64>) -> Meta) -> Res<()> {
    let b = build_operator(&a.op)?;
    let (lambda_truncated, _) = leading_eigen(&b.op.truncated())?;
    let twisted = twisted_eigen(&ulam_twisted(&b.op, a.s, a.t)?, None)?;
    let (neg, conj) = b.density.symmetry_defects();
    let values: Vec<f64> = (0..b.density.masses.len()).map(|i| b.density.value(i)).collect();
    if let Some(p) = &a.density_csv {
        let mut w = csv::Writer::from_path(p)?;
        w.write_record(["ix", "iy", "area", "mass", "density"])?;
        for (i, c) in b.op.grid().cells.iter().enumerate() {
            w.write_record(&[
                c.ix.to_string(),
                c.iy.to_string(),
                c.area.to_string(),
                b.density.masses[i].to_string(),
                values[i].to_string(),
            ])?;
        }
        w.flush()?;
    }
    let report = UlamReport {
        cells: b.op.dim(),
        nnz: b.op.nnz(),
        lambda_untwisted: b.lambda,
        lambda_truncated,
        s: a.s,
        t: a.t,
        lambda_re: twisted.lambda.re,
        lambda_im: twisted.lambda.im,
        a_constant: a_constant(&b.density),
        escape_mass: b.op.escape_mass(&b.density.masses),
        symmetry_defect_neg: neg,
        symmetry_defect_conj: conj,
        density_histogram: histogram_fd(&values),
    };
    let out = with_meta(report, meta(Some(a.op.seed)));
    if let Some(p) = &a.density_csv {
        write_sidecar(p, &out)?;
    }
    if a.json {
        println!("{out}");
    } else if let Value::Object(m) = &out {
        for (k, v) in m {
            if k != "density_histogram" && k != "meta" {
                println!("{k}: {v}");
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct LevelRow {
    n: i64,
    level_sum: f64,
    comparator: f64,
    level_sum_rel_error: f64,
    mu: f64,
    mu_neg: f64,
    n3_mu: f64,
    mu_pullback: Option<f64>,
}

fn levelsets(a: &LevelsetsArgs) -> Res<Value> {
    if a.nmax < 1 {
        return Err(CliError::Config("nmax must be at least 1".into()));
    }
    let r = ring(a.op.d)?;
    let b = build_operator(&a.op)?;
    let masses = level_masses(&b.density, 32, 128);
    let rows: Vec<LevelRow> = (1..=a.nmax)
        .map(|n| {
            let ls = level_sum(r, n, a.rmax);
            let sum = match ls {
                sczech_core::dynamics::LevelSum::Rectangular(c) => c.sum,
                sczech_core::dynamics::LevelSum::Hexagonal { inner, outer } => inner.sum + outer.sum,
            };
            let mu = masses.get(n);
            LevelRow {
                n,
                level_sum: sum,
                comparator: ls.comparator_total(),
                level_sum_rel_error: ls.max_rel_error(),
                mu,
                mu_neg: masses.get(-n),
                n3_mu: mu * (n * n * n) as f64,
                mu_pullback: (n >= 2).then(|| mu_level_pullback(&b.density, n, 200, 2)),
            }
        })
        .collect();
    Ok(json!({
        "lambda": b.lambda,
        "total_mass": masses.total(),
        "levels": rows,
    }))
}

fn s0curve(a: &S0curveArgs, meta: &dyn Fn(Option<u64>) -> Meta) -> Res<()> {
    let ts = parse_grid(&a.tgrid)?;
    let b = build_operator(&a.op)?;
    let op = Arc::new(b.op);
    let big_a = a_constant(&b.density);
    let sink: Box<dyn Write> = match &a.csv {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    };
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["t", "s0", "lambda_re", "lambda_im", "osc_re", "osc_im"])?;
    let mut fit_x = Vec::new();
    let mut fit_y = Vec::new();
    for &t in &ts {
        let sol = s0_solve(&op, t, a.tol)?;
        let osc: Complex64 = osc_integral(t, &b.density);
        w.write_record(&[
            t.to_string(),
            sol.s0.to_string(),
            sol.lambda_re.to_string(),
            sol.lambda_im.to_string(),
            osc.re.to_string(),
            osc.im.to_string(),
        ])?;
        if t > 0.0 && t < 1.0 {
            fit_x.push(t * t * (1.0 / t).ln());
            fit_y.push(sol.s0 - 1.0);
        }
    }
    w.flush()?;
    drop(w);
    let fit = (fit_x.len() >= 3).then(|| linear_fit(&fit_x, &fit_y));
    let summary = with_meta(
        json!({ "a_constant": big_a, "lambda": b.lambda, "fit_s0_minus_1_vs_t2_log_inv_t": fit }),
        meta(Some(a.op.seed)),
    );
    match &a.csv {
        Some(p) => {
            write_sidecar(p, &summary)?;
            println!("{summary}");
        }
        None => eprintln!("{summary}"),
    }
    Ok(())
}

fn vardi(a: &VardiArgs) -> Res<sczech_core::stats::VardiReport> {
    if !(2..=5000).contains(&a.q) {
        return Err(CliError::Config(format!("Q must lie in [2, 5000], got {}", a.q)));
    }
    Ok(vardi_contrast(a.q))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(parse_grid("0.1,0.2").unwrap(), vec![0.1, 0.2]);
        let g = parse_grid("0.02:0.2:0.02").unwrap();
        assert_eq!(g.len(), 10);
        assert!((g[9] - 0.2).abs() < 1e-12);
        assert!(parse_grid("1:0:0.1").is_err());
        assert!(parse_grid("a:b").is_err());
    }
}
