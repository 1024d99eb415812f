//! `recrel`: exact reliability polynomials, lifetime moments and asymptotic
//! expansions for recursive two-terminal networks.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use recrel::architectures::Family;

use report::Format;

/// Directory that relative `--output` paths are resolved against.
pub const OUT_DIR_ENV: &str = "RECREL_OUT_DIR";

#[derive(Debug, Parser, Serialize)]
#[command(
    name = "recrel",
    version,
    about = "Reliability polynomials, lifetime moments and asymptotic MTTF of recursive networks"
)]
#[command(
    long_about = "Reliability polynomials, lifetime moments and asymptotic MTTF of recursive two-terminal networks.\n\n\
Families: series, parallel, kofn (with --k), k4ladder, fan, doublefan, street3xn.\n\
Components fail independently; with exponential lifetimes p = exp(-lambda t).\n\n\
Exit codes: 0 success, 2 usage error, 3 computation error.\n\
Relative --output paths are resolved against $RECREL_OUT_DIR when it is set."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalOpts,
}

#[derive(Debug, Args, Serialize)]
pub struct GlobalOpts {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads for Monte Carlo and brute force; results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

/// Family and size selection shared by most commands.
#[derive(Debug, Args, Serialize, Clone)]
pub struct ArchOpts {
    /// Network family.
    #[arg(long, short)]
    #[serde(serialize_with = "as_display")]
    pub family: Family,
    /// Size `n`, or an inclusive range `lo..hi`.
    #[arg(long, short, value_parser = parse_range)]
    pub n: NRange,
    /// Threshold for `kofn`: the system works while at least `k` components do.
    #[arg(long)]
    pub k: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NRange {
    pub lo: u32,
    pub hi: u32,
}

impl NRange {
    pub fn iter(self) -> impl Iterator<Item = u32> {
        self.lo..=self.hi
    }
}

fn parse_range(s: &str) -> Result<NRange, String> {
    let num = |t: &str| t.trim().parse::<u32>().map_err(|_| format!("'{t}' is not a nonnegative integer"));
    match s.split_once("..") {
        Some((a, b)) => {
            let (lo, hi) = (num(a)?, num(b.trim_start_matches('='))?);
            if lo > hi {
                return Err(format!("empty range {s}"));
            }
            Ok(NRange { lo, hi })
        }
        None => {
            let n = num(s)?;
            Ok(NRange { lo: n, hi: n })
        }
    }
}

fn as_display<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// Component lifetime law.
#[derive(Debug, Args, Serialize, Clone)]
pub struct ModelOpts {
    /// Component failure law.
    #[arg(long, value_enum, default_value_t = ModelKind::Exponential)]
    pub model: ModelKind,
    /// Rate (or scale) lambda.
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    /// Weibull shape.
    #[arg(long, default_value_t = 1.0)]
    pub kappa: f64,
    /// Power-law exponent beta in `-chi'(p) ~ a_beta (1 - p)^beta` near p = 1.
    #[arg(long, default_value_t = 0.0)]
    pub beta: f64,
    /// Power-law amplitude `a_beta`.
    #[arg(long, default_value_t = 1.0)]
    pub a_beta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Exponential,
    Weibull,
    PowerLaw,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Command {
    /// Exact reliability polynomial R_n(p).
    #[command(long_about = "Exact two-terminal reliability polynomial R_n(p) = sum_k c_k p^k.\n\n\
series: p^n.  parallel: 1 - (1 - p)^n.  kofn: sum_{j>=k} C(n,j) p^j (1-p)^(n-j).\n\
k4ladder: R_n = T R_{n-1} - D R_{n-2}, T = p(2 + 4p - 14p^2 + 13p^3 - 4p^4),\n\
  D = p^3(4 - 18p + 36p^2 - 42p^3 + 30p^4 - 12p^5 + 2p^6), seeded with (1 + p)/2 and R_1.\n\
fan: R_n = [p^2 + p^n (1-p)^(n+2) (n p (1 - p + p^2) + 1 + p^2)] / (1 - p + p^2)^2.\n\
doublefan: 1 - R_n = U_n, U_n = (1-p)(1 + 2p(1-p)) U_{n-1} - p(1-p)^3 U_{n-2}, U_0 = 1, U_1 = 1 - p^2.\n\
street3xn: sum_n R_n z^n = N(z) / (D1(z) D2(z)).\n\n\
Without --p the coefficient list c_0, c_1, ... is printed; --p and --grid evaluate exactly.")]
    Exact(ExactArgs),
    /// Lifetime moments, cumulants and moment generating function.
    #[command(long_about = "Moments of the system lifetime T.\n\n\
Exponential components: lambda^m <T^m> = m! sum_k c_k / k^m, an exact rational.\n\
Cumulants: kappa_m = mu_m - sum_{j=1}^{m-1} C(m-1, j-1) kappa_j mu_{m-j}.\n\
k-out-of-n: kappa_m = (m-1)! lambda^(-m) sum_{i=k}^n i^(-m).\n\
MGF: <exp(z T)> = sum_k c_k k lambda / (k lambda - z), finite for z < lambda min{k : c_k != 0}.\n\
Other laws: <T^m> = m int_0^inf t^(m-1) R(exp(-H(t))) dt by quadrature.\n\
Fan limit (--limit): lambda^m <T^m> of R_inf(p) = p^2 / (1 - p + p^2)^2.")]
    Moments(MomentsArgs),
    /// Exact against asymptotic values over a range of sizes.
    #[command(long_about = "Exact against asymptotic values.\n\n\
Default: rows (n, exact, asymptotic, abs_err, rel_err) for <T^m>, with the asymptotic value from the\n\
same expansion as `asympt`.\n\
--weibull K: rows (x, exact, approx, abs_err) of R_n(exp(-x)) against the Weibull equivalent\n\
R(x) = exp(-n (a_i x^i + a_{i+1} x^(i+1))) of order K on x = lambda t in (0, --x-max]; the maximum\n\
deviation is reported in the summary.")]
    Compare(CompareArgs),
    /// Cut signature of a family.
    #[command(long_about = "Cut signature.\n\n\
Series-like: R_n = alpha_+ zeta_+^n + ... near p = 1, with -ln zeta_+ = sum_{j>=i} alpha_j q^j and\n\
alpha_+ = 1 + sum_{j>=1} alpha'_j q^j, q = 1 - p.\n\
Parallel-like: the same for the unavailability 1 - R_n near p = 0, with coefficients beta_j.\n\
The series come from the dominant eigenvalue (Newton iteration on its characteristic equation) or,\n\
with --sizes, from log-differences of the exact polynomials at those sizes.")]
    Signature(SignatureArgs),
    /// Asymptotic moment or MTTF estimate.
    #[command(long_about = "Asymptotic estimate of <T^m>.\n\n\
Series-like, with eta = (alpha_i n)^(-1/i):\n\
lambda^m <T^m> = (m/i) Gamma(m/i) eta^m [1 + eta-corrections built from alpha_{i+j} and alpha'_j].\n\
Parallel-like MTTF: lambda MTTF = (1/i)(ln(beta_i n) + C) + c_1 n^(-1/i) + ..., C the Euler constant,\n\
  c_1 = Gamma(1 + 1/i) beta_i^(-1/i) (beta_{i+1}/(i beta_i) - beta'_1) for i > 1,\n\
  c_1 = (beta_2 - beta_1/2)/beta_1^2 - beta'_1/beta_1 + 1/(2 beta_1) for i = 1.\n\
--terms counts power terms; for parallel-like families the log-and-constant part counts as one.\n\
Non-exponential laws with -chi'(p) ~ a_beta (1-p)^beta near p = 1:\n\
<T^m> ~ (a_beta/(beta+1))^m Gamma(1 + (beta+1)m/i) (n alpha_i)^(-(beta+1)m/i); Weibull kappa has beta = 1/kappa - 1.")]
    Asympt(AsymptArgs),
    /// Monte-Carlo lifetime estimates on the explicit graph.
    #[command(long_about = "Monte-Carlo lifetime estimates.\n\n\
Each sample draws edge lifetimes t_e = chi(U), and the system lifetime is the bottleneck value\n\
T = max over source-target paths of min_e t_e, found by adding edges in decreasing lifetime until the\n\
terminals join. Sample moments are reported with their standard errors; the seed fixes the result\n\
independently of --threads.")]
    Simulate(SimulateArgs),
    /// Regime of a family: series-like, parallel-like or saturating.
    #[command(long_about = "Regime classification.\n\n\
R_n(1/2) is computed exactly at n = 4, 8, 16 and extrapolated geometrically.\n\
A limit within 0.02 of 0 is series-like, within 0.02 of 1 parallel-like, otherwise saturating.\n\
Saturating families also report R_inf(p) in closed form.")]
    Classify(ClassifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Emit {
    Coeffs,
    Value,
}

#[derive(Debug, Args, Serialize)]
pub struct ExactArgs {
    #[command(flatten)]
    pub arch: ArchOpts,
    /// What to print; defaults to `value` when --p or --grid is given.
    #[arg(long, value_enum)]
    pub emit: Option<Emit>,
    /// Comma-separated probabilities (`a/b` or decimals).
    #[arg(long, value_delimiter = ',')]
    pub p: Vec<String>,
    /// Evaluate on p = j / G for j = 0..=G.
    #[arg(long)]
    pub grid: Option<u32>,
}

#[derive(Debug, Args, Serialize)]
pub struct MomentsArgs {
    #[command(flatten)]
    pub arch: ArchOpts,
    #[command(flatten)]
    pub model: ModelOpts,
    /// Comma-separated moment orders.
    #[arg(long, short, value_delimiter = ',', value_parser = clap::value_parser!(u32).range(1..), default_value = "1")]
    pub m: Vec<u32>,
    /// Report cumulants instead of moments.
    #[arg(long)]
    pub cumulants: bool,
    /// Evaluate the moment generating function at these z.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub mgf: Vec<f64>,
    /// Use the n -> infinity limit (fan only).
    #[arg(long)]
    pub limit: bool,
    /// Method for --limit.
    #[arg(long, value_enum, default_value_t = LimitMethod::Quadrature)]
    pub method: LimitMethod,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LimitMethod {
    Quadrature,
    ClosedForm,
}

#[derive(Debug, Args, Serialize)]
pub struct CompareArgs {
    #[command(flatten)]
    pub arch: ArchOpts,
    #[command(flatten)]
    pub model: ModelOpts,
    /// Moment order.
    #[arg(long, short, default_value_t = 1)]
    pub m: u32,
    /// Number of expansion terms.
    #[arg(long, default_value_t = 3)]
    pub terms: usize,
    /// Compare reliability curves against the Weibull equivalent of this order (0 or 1).
    #[arg(long)]
    pub weibull: Option<u32>,
    /// Upper end of the x = lambda t grid.
    #[arg(long, default_value_t = 2.0)]
    pub x_max: f64,
    /// Number of grid points.
    #[arg(long, default_value_t = 400)]
    pub points: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct SignatureArgs {
    /// Network family.
    #[arg(long, short)]
    #[serde(serialize_with = "as_display")]
    pub family: Family,
    /// Threshold for `kofn`.
    #[arg(long)]
    pub k: Option<u32>,
    /// Truncation order of the series.
    #[arg(long, default_value_t = 8)]
    pub order: usize,
    /// Extract from exact polynomials at these sizes (at least two).
    #[arg(long, value_delimiter = ',')]
    pub sizes: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Harmonic {
    Asymptotic,
    Exact,
}

#[derive(Debug, Args, Serialize)]
pub struct AsymptArgs {
    #[command(flatten)]
    pub arch: ArchOpts,
    #[command(flatten)]
    pub model: ModelOpts,
    /// Moment orders.
    #[arg(long, short, value_delimiter = ',', value_parser = clap::value_parser!(u32).range(1..), default_value = "1")]
    pub m: Vec<u32>,
    /// Number of expansion terms.
    #[arg(long, default_value_t = 3)]
    pub terms: usize,
    /// Harmonic part of a parallel-like MTTF: its expansion or the exact sum.
    #[arg(long, value_enum, default_value_t = Harmonic::Asymptotic)]
    pub harmonic: Harmonic,
}

#[derive(Debug, Args, Serialize)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub arch: ArchOpts,
    #[command(flatten)]
    pub model: ModelOpts,
    /// Moment orders.
    #[arg(long, short, value_delimiter = ',', value_parser = clap::value_parser!(u32).range(1..), default_value = "1")]
    pub m: Vec<u32>,
    /// Number of samples.
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    /// Random seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct ClassifyArgs {
    /// Family to classify; all built-in families when omitted.
    #[arg(long, short)]
    #[serde(serialize_with = "opt_display")]
    pub family: Option<Family>,
    /// Threshold for `kofn`.
    #[arg(long)]
    pub k: Option<u32>,
}

fn opt_display<T: std::fmt::Display, S: serde::Serializer>(v: &Option<T>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.collect_str(v),
        None => s.serialize_none(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(commands::Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(commands::Failure::Compute(e)) => {
            eprintln!("error[{}]: {e}", e.name());
            ExitCode::from(3)
        }
        Err(commands::Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
