use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug, Serialize)]
#[command(
    name = "qchain",
    version,
    about = "Negativity measures, swapping chains and monogamy checks"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Common {
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Master seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Leave out the timing sidecar so reruns are byte-identical.
    #[arg(long, global = true)]
    pub deterministic: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Evaluate entanglement measures on a state.
    Measure(MeasureArgs),
    /// Compose a swapping chain.
    Chain(ChainArgs),
    /// Chains of 1..=l identical links.
    Sweep(ChainArgs),
    /// Monogamy scans, inequality grid checks and single-state residuals.
    Monogamy(MonogamyArgs),
    /// Group axioms and multiplicative reparametrizations of a composition law.
    Groupop(GroupopArgs),
    /// Covariance-matrix analysis of a two-mode Gaussian state.
    Gaussian(GaussianArgs),
    /// Recompute every reference fixture.
    Repro(ReproArgs),
}

#[derive(Args, Debug, Serialize)]
#[command(group(ArgGroup::new("source").required(true).args(["input", "tmsvs", "bell"])))]
pub struct MeasureArgs {
    /// State file (JSON).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Two-mode squeezed vacuum with this squeezing.
    #[arg(long)]
    pub tmsvs: Option<f64>,
    /// The two-qubit Bell state.
    #[arg(long)]
    pub bell: bool,
    /// Fock cutoff for --tmsvs; defaults to the tail-based choice.
    #[arg(long)]
    pub cutoff: Option<usize>,
    /// Comma-separated measure names.
    #[arg(long, value_delimiter = ',', default_value = "negativity,log_negativity,ratio")]
    pub measures: Vec<String>,
    /// Exponent for alpha_ratio.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Override party A (comma-separated subsystem indices).
    #[arg(long, value_delimiter = ',')]
    pub party_a: Option<Vec<usize>>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KindArg {
    Qubit,
    Qudit,
    Tmsvs,
}

#[derive(Args, Debug, Serialize)]
pub struct ChainArgs {
    /// Chain spec file (JSON).
    #[arg(long, conflicts_with_all = ["kind", "r", "concurrence", "schmidt"])]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, required_unless_present = "input")]
    pub kind: Option<KindArg>,
    /// Squeezing of each link (tmsvs).
    #[arg(long)]
    pub r: Option<f64>,
    /// Concurrence of each link (qubit).
    #[arg(long)]
    pub concurrence: Option<f64>,
    /// Schmidt coefficients of each link (qubit or qudit), comma-separated.
    #[arg(long, value_delimiter = ',')]
    pub schmidt: Option<Vec<f64>>,
    /// Number of links; for sweeps the largest chain length.
    #[arg(short = 'l', long)]
    pub length: Option<usize>,
    /// Measure to compose; defaults to the kind's native measure.
    #[arg(long)]
    pub measure: Option<String>,
    #[arg(long)]
    pub alpha: Option<f64>,
}

#[derive(Args, Debug, Serialize)]
pub struct MonogamyArgs {
    #[command(subcommand)]
    pub mode: MonogamyMode,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MonogamyMode {
    /// Haar-random CKW residual scan.
    Scan(ScanArgs),
    /// Two-term inequality on a lattice.
    Grid(GridArgs),
    /// CKW residual of one pure state file.
    State(StateArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct ScanArgs {
    /// Scan config file (JSON); flags below are ignored when given.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', default_value = "2,2,2")]
    pub dims: Vec<usize>,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Exponent of the alpha-ratio negativity; defaults to the threshold.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Residuals below minus this count as violations.
    #[arg(long)]
    pub tol_violation: Option<f64>,
}

#[derive(Args, Debug, Serialize)]
pub struct GridArgs {
    #[arg(long, default_value_t = 0.5)]
    pub a: f64,
    #[arg(long, default_value_t = 0.5)]
    pub b: f64,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Points per axis.
    #[arg(long, default_value_t = 500)]
    pub grid: usize,
    #[arg(long)]
    pub tol_grid: Option<f64>,
}

#[derive(Args, Debug, Serialize)]
pub struct StateArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value = "alpha_ratio")]
    pub measure: String,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    pub party_a: Option<Vec<usize>>,
}

#[derive(Args, Debug, Serialize)]
pub struct GroupopArgs {
    /// Built-in law: product, tanh_sum, min or sum.
    #[arg(long, default_value = "tanh_sum")]
    pub law: String,
    /// Points per axis.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Candidate multiplicative functions: identity, power (x^alpha) or odds ((1-x)/(1+x)).
    #[arg(long = "f", value_delimiter = ',')]
    pub candidates: Vec<String>,
    /// Exponent for the power candidate.
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long)]
    pub tol_closure: Option<f64>,
    #[arg(long)]
    pub tol_assoc: Option<f64>,
    #[arg(long)]
    pub tol_identity: Option<f64>,
    #[arg(long)]
    pub tol_solve: Option<f64>,
}

#[derive(Args, Debug, Serialize)]
#[command(group(ArgGroup::new("cm_source").required(true).args(["input", "r"])))]
pub struct GaussianArgs {
    /// Covariance-matrix file (JSON).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Two-mode squeezed vacuum with this squeezing.
    #[arg(long)]
    pub r: Option<f64>,
    /// Modes forming party A.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub modes_a: Vec<usize>,
    /// Fock cutoff of the comparison state for --r.
    #[arg(long)]
    pub cutoff: Option<usize>,
}

#[derive(Args, Debug, Serialize)]
pub struct ReproArgs {
    /// Run only these fixtures (comma-separated).
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<String>,
}
