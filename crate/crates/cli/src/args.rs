use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ggexp::inequalities::TheoremId;

/// Generalized Gegenbauer expansions on [-1, 1]: evaluation, quadrature
/// tables, forward transforms, and reproducible verification reports.
///
/// Verification reports are JSON with a stable `schema: 1` layout; every
/// number carries 17 significant digits, and the `payload_sha256` field
/// hashes the report minus its timestamp, so reruns with identical flags
/// are byte-identical on the hashed payload. The environment variable
/// GGEXP_THREADS caps internal parallelism (0 or unset = automatic).
#[derive(Debug, Parser)]
#[command(name = "ggexp", version, max_term_width = 100)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one generalized Gegenbauer polynomial at one point
    Eval(EvalArgs),
    /// Build a weighted Gaussian rule and emit "node,weight" CSV
    Quad(QuadArgs),
    /// Expand a polynomial in the orthonormal basis
    Transform(TransformArgs),
    /// Run a verification harness and emit a JSON report
    #[command(subcommand)]
    Verify(VerifyCommand),
}

/// Weight parameters, shared by every subcommand.
#[derive(Debug, Args, Serialize)]
pub struct ParamArgs {
    /// Exponent lambda of (1-t^2)^(lambda-1/2); must exceed -1/2
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: f64,
    /// Exponent mu of |t|^(2 mu); must be nonnegative
    #[arg(long, allow_hyphen_values = true)]
    pub mu: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct EvalArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub params: ParamArgs,
    /// Polynomial degree
    #[arg(long)]
    pub n: usize,
    /// Evaluation point in [-1, 1]
    #[arg(long, allow_hyphen_values = true)]
    pub t: f64,
    /// Evaluate the orthonormal family instead of the raw one
    #[arg(long)]
    pub orthonormal: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct QuadArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub params: ParamArgs,
    /// Signed node pairs; the emitted rule has 2 x points nodes
    #[arg(long)]
    pub points: usize,
    /// Output path (stdout when omitted)
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Args, Serialize)]
pub struct TransformArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub params: ParamArgs,
    /// Highest coefficient degree to compute
    #[arg(long)]
    pub degree: usize,
    /// Coefficient file ("# basis: monomial|orthonormal" header, one
    /// coefficient per line) or a built-in draw "family:PROFILE:CAP:SEED"
    /// with PROFILE one of flat, inverse-linear, inverse-square,
    /// single-mode, lacunary
    #[arg(long)]
    pub input: String,
    /// Output layout: "n,coefficient" CSV or a JSON document
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
    /// Output path (stdout when omitted)
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    /// Gram matrix of the orthonormal family vs the identity
    Orthonormality(OrthonormalityArgs),
    /// Sup-norm growth against the predicted degree power
    Supnorm(SupnormArgs),
    /// L_2 norm vs coefficient norm on random polynomials
    Parseval(ParsevalArgs),
    /// Forward Hardy-Littlewood-type scan at degree caps 64 and 128
    HardyLittlewood(ScanArgs),
    /// Forward Hausdorff-Young-type scan at degree caps 64 and 128
    HausdorffYoung(ScanArgs),
    /// Forward unified scan at degree caps 64 and 128
    Unified(ScanArgs),
    /// Integral connection to classical Gegenbauer polynomials
    Connection(ConnectionArgs),
    /// Partial-sum reconstruction from a finite coefficient sequence
    Converse(ConverseArgs),
}

/// Report destinations, shared by the verify subcommands. Paths do not
/// enter the hashed payload.
#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Report path (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Optional plot-ready CSV of (x, ratio) pairs
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct OrthonormalityArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub params: ParamArgs,
    /// Highest degree in the Gram matrix
    #[arg(long, default_value_t = 50)]
    pub nmax: usize,
    /// Entrywise deviation tolerance
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[command(flatten)]
    #[serde(skip)]
    pub report: ReportArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct SupnormArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub params: ParamArgs,
    /// First degree; subsequent degrees double up to nmax
    #[arg(long, default_value_t = 16)]
    pub nmin: usize,
    /// Last degree
    #[arg(long, default_value_t = 256)]
    pub nmax: usize,
    /// Max allowed ratio spread (max/min)
    #[arg(long, default_value_t = 10.0)]
    pub spread_tol: f64,
    /// Max allowed magnitude of the log-log fit slope
    #[arg(long, default_value_t = 0.1)]
    pub slope_tol: f64,
    #[command(flatten)]
    #[serde(skip)]
    pub report: ReportArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct ParsevalArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub params: ParamArgs,
    /// Degree cap of the random polynomials
    #[arg(long, default_value_t = 40)]
    pub nmax: usize,
    #[arg(long, default_value_t = 50)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Relative deviation tolerance on each ratio
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[command(flatten)]
    #[serde(skip)]
    pub report: ReportArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct ScanArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub params: ParamArgs,
    /// Lebesgue exponent, in (1, 2]
    #[arg(long, default_value_t = 1.5)]
    pub p: f64,
    /// Intermediate exponent for the unified scan (default: midpoint of
    /// [p, p'])
    #[arg(long)]
    pub s: Option<f64>,
    /// Trials per degree cap
    #[arg(long, default_value_t = 40)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Max allowed growth of the empirical constant when the degree cap
    /// doubles
    #[arg(long, default_value_t = 2.0)]
    pub growth_tol: f64,
    /// Optional CSV of per-trial records (seed,lhs,rhs,ratio) from the
    /// higher degree cap
    #[arg(long)]
    #[serde(skip)]
    pub trials_csv: Option<PathBuf>,
    #[command(flatten)]
    #[serde(skip)]
    pub report: ReportArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct ConnectionArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub params: ParamArgs,
    /// Highest degree checked
    #[arg(long, default_value_t = 20)]
    pub nmax: usize,
    /// Evaluation grid size
    #[arg(long, default_value_t = 64)]
    pub grid: usize,
    /// Pointwise discrepancy tolerance
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Tolerance on the degree-1 closed-form coefficient
    #[arg(long, default_value_t = 1e-11)]
    pub coeff_tol: f64,
    #[command(flatten)]
    #[serde(skip)]
    pub report: ReportArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoremArg {
    HardyLittlewood,
    HausdorffYoung,
    Unified,
}

impl TheoremArg {
    pub fn id(self) -> TheoremId {
        match self {
            Self::HardyLittlewood => TheoremId::Hl,
            Self::HausdorffYoung => TheoremId::Hy,
            Self::Unified => TheoremId::Unified,
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct ConverseArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub params: ParamArgs,
    /// Which converse bound supplies the functional
    #[arg(long, value_enum, default_value_t = TheoremArg::Unified)]
    pub theorem: TheoremArg,
    /// Lebesgue exponent, in [2, inf)
    #[arg(long, default_value_t = 3.0)]
    pub q: f64,
    /// Intermediate exponent for the unified converse (default: midpoint
    /// of [q', q])
    #[arg(long)]
    pub r: Option<f64>,
    /// Length of the random coefficient sequence
    #[arg(long, default_value_t = 32)]
    pub len: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Tolerance on the partial-sum stabilization distances
    #[arg(long, default_value_t = 1e-10)]
    pub limit_tol: f64,
    /// Tolerance on recovered coefficients
    #[arg(long, default_value_t = 1e-10)]
    pub recovery_tol: f64,
    #[command(flatten)]
    #[serde(skip)]
    pub report: ReportArgs,
}
