use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "sczech", version, about = "Elliptic Dedekind sums over Q(√−D), D ∈ {2, 7, 11}")]
pub struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Omit wall time from the metadata so that reruns are byte-identical.
    #[arg(long, global = true)]
    pub reproducible: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "subcommand", rename_all = "lowercase")]
pub enum Command {
    /// Hurwitz continued fraction of num/den.
    Cf(CfArgs),
    /// D̃(a/c), S and the reciprocity check.
    Sczech(PairArgs),
    /// Classical Dedekind sum s(h, k).
    Classical(ClassicalArgs),
    /// Farey points with their sums, as CSV.
    Enumerate(EnumerateArgs),
    /// Distribution of D̃ (or S) over a Farey set.
    Distribution(DistributionArgs),
    /// Empirical characteristic function of S.
    Charfn(CharfnArgs),
    /// Ulam discretization of the transfer operator.
    Ulam(UlamArgs),
    /// Masses of the level sets V_n and the lattice-sum comparators.
    Levelsets(LevelsetsArgs),
    /// s₀(t) and the oscillatory integral on a t-grid, as CSV.
    S0curve(S0curveArgs),
    /// Classical sums s/log Q against the Cauchy and Gaussian laws.
    Vardi(VardiArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct CfArgs {
    pub d: u32,
    /// Numerator, `u+v*w`.
    #[arg(allow_hyphen_values = true)]
    pub num: String,
    /// Denominator, `u+v*w`.
    #[arg(allow_hyphen_values = true)]
    pub den: String,
}

#[derive(Args, Debug, Serialize)]
pub struct PairArgs {
    pub d: u32,
    #[arg(allow_hyphen_values = true)]
    pub a: String,
    #[arg(allow_hyphen_values = true)]
    pub c: String,
}

#[derive(Args, Debug, Serialize)]
pub struct ClassicalArgs {
    #[arg(allow_hyphen_values = true)]
    pub h: i64,
    pub k: i64,
}

#[derive(Args, Debug, Serialize, Clone)]
pub struct FareyArgs {
    pub d: u32,
    /// Strict bound on |b|².
    pub x: i64,
    /// Drop z = 0.
    #[arg(long)]
    pub exclude_zero: bool,
    /// Use the half-open domain instead of the closed one.
    #[arg(long)]
    pub half_open: bool,
    /// Keep only points of the region B_2 (D = 2).
    #[arg(long)]
    pub b2: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct EnumerateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub farey: FareyArgs,
    /// Output file (stdout when absent).
    #[arg(long)]
    pub csv: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize, PartialEq, Eq)]
pub enum StatKind {
    #[value(name = "Dt", alias = "dt")]
    #[serde(rename = "Dt")]
    Dt,
    #[value(name = "S", alias = "s")]
    #[serde(rename = "S")]
    S,
}

#[derive(Args, Debug, Serialize)]
pub struct DistributionArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub farey: FareyArgs,
    #[arg(long, value_enum, default_value = "Dt")]
    pub stat: StatKind,
    /// Write raw and standardized histograms here.
    #[arg(long)]
    pub csv: Option<String>,
    /// KS distances to N(0,1) and the standard Cauchy law.
    #[arg(long)]
    pub ks: bool,
    /// Exact moments.
    #[arg(long)]
    pub moments: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct CharfnArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub farey: FareyArgs,
    /// `start:stop:step`, inclusive.
    #[arg(long, default_value = "0.02:0.2:0.01")]
    pub tgrid: String,
}

#[derive(Args, Debug, Serialize, Clone)]
pub struct OperatorArgs {
    pub d: u32,
    #[arg(long, default_value_t = 128)]
    pub grid: usize,
    /// Largest digit norm followed.
    #[arg(long, default_value_t = 400)]
    pub cutoff: i64,
    #[arg(long, default_value_t = 1024)]
    pub samples: usize,
    #[arg(long, default_value_t = 20240601)]
    pub seed: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct UlamArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub op: OperatorArgs,
    #[arg(long, default_value_t = 1.0)]
    pub s: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub t: f64,
    /// Emit JSON instead of `key: value` lines.
    #[arg(long)]
    pub json: bool,
    /// Per-cell density as CSV.
    #[arg(long)]
    pub density_csv: Option<String>,
}

#[derive(Args, Debug, Serialize)]
pub struct LevelsetsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub op: OperatorArgs,
    #[arg(long, default_value_t = 15)]
    pub nmax: i64,
    /// Truncation of the lattice sums.
    #[arg(long, default_value_t = 1_000_000)]
    pub rmax: i64,
}

#[derive(Args, Debug, Serialize)]
pub struct S0curveArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub op: OperatorArgs,
    #[arg(long, default_value = "0.02:0.2:0.02")]
    pub tgrid: String,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Output file (stdout when absent).
    #[arg(long)]
    pub csv: Option<String>,
}

#[derive(Args, Debug, Serialize)]
pub struct VardiArgs {
    pub q: i64,
}
