use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qstail::simulate::{McEstimator, Model};
use qstail::Norm;

use crate::error::{CliError, Result};
use crate::ingest::Transform;

/// Tail dependence and conditional tail expectation estimators for
/// heavy-tailed bivariate data.
#[derive(Debug, Parser)]
#[command(name = "qstail", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw a sample from a model and write it as `x,y` CSV.
    Simulate(SimulateArgs),
    /// Read a two-column CSV, optionally convert prices to absolute log-returns.
    Ingest(IngestArgs),
    /// Run one estimator on a dataset.
    Estimate(EstimateArgs),
    /// Conditional tail curve over a grid of `y` or a sweep of `k`.
    Curve(CurveArgs),
    /// Monte Carlo study on a model.
    Mc(McArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    /// `Y = phi X + sigma |Z|`, `X` Pareto(alpha).
    Linear,
    /// Componentwise absolute value of a bivariate t.
    T,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    #[arg(long, value_enum, default_value_t = ModelKind::Linear)]
    pub model: ModelKind,
    #[arg(long, default_value_t = 0.8)]
    pub phi: f64,
    #[arg(long, default_value_t = 0.1)]
    pub sigma: f64,
    /// Tail index of the Pareto margin.
    #[arg(long, default_value_t = 4.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 4.0)]
    pub nu: f64,
    #[arg(long, default_value_t = 0.9)]
    pub rho: f64,
    /// Sample size.
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long, env = "QSTAIL_SEED", default_value_t = 1)]
    pub seed: u64,
}

impl ModelArgs {
    pub fn model(&self) -> Model {
        match self.model {
            ModelKind::Linear => Model::LinearPareto {
                phi: self.phi,
                sigma: self.sigma,
                alpha: self.alpha,
            },
            ModelKind::T => Model::BivariateT {
                nu: self.nu,
                rho: self.rho,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file; standard output when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Two-column CSV, `-` for standard input.
    #[arg(long, short)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = Transform::None)]
    pub transform: Transform,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Replication stream of the seed.
    #[arg(long, default_value_t = 0)]
    pub rep: u64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct IngestArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

/// Number of exceedances as a count or a fraction of `n`.
#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct KArgs {
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub k_frac: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
#[group(multiple = false)]
pub struct KAlphaArgs {
    /// Order statistics used by the Hill estimator [default: min(2k, n-1)].
    #[arg(long)]
    pub k_alpha: Option<usize>,
    #[arg(long)]
    pub k_alpha_frac: Option<f64>,
}

fn check_fraction(name: &str, f: f64) -> Result<()> {
    if f > 0.0 && f < 1.0 {
        Ok(())
    } else {
        Err(CliError::Usage(format!("{name} = {f} must lie in (0, 1)")))
    }
}

pub(crate) fn resolve_fraction(name: &str, f: f64, n: usize) -> Result<usize> {
    check_fraction(name, f)?;
    Ok(qstail::k_from_fraction(f, n))
}

impl KArgs {
    pub fn resolve(&self, n: usize) -> Result<usize> {
        match (self.k, self.k_frac) {
            (Some(k), _) => Ok(k),
            (None, Some(f)) => resolve_fraction("--k-frac", f, n),
            (None, None) => Err(CliError::Usage("one of --k or --k-frac is required".into())),
        }
    }
}

impl KAlphaArgs {
    pub fn resolve(&self, n: usize, k: usize) -> Result<usize> {
        match (self.k_alpha, self.k_alpha_frac) {
            (Some(ka), _) => Ok(ka),
            (None, Some(f)) => resolve_fraction("--k-alpha-frac", f, n),
            (None, None) => Ok((2 * k).min(n.saturating_sub(1)).max(1)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Empirical conditional tail probability.
    Empirical,
    /// Quasi-spectral probability with `--alpha`.
    Quasispectral,
    /// Quasi-spectral probability with Hill alpha.
    QuasispectralHill,
    /// CTE from `Y / X_{n:n-k}`.
    Aleph3,
    /// CTE from `Y / X` with `--alpha`.
    Aleph4,
    /// CTE from `Y / X` with Hill alpha.
    Aleph4Hill,
    /// Extremal dependence measure.
    Edm,
    /// Hill tail index of X on the top k order statistics.
    Hill,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormArg {
    L1,
    L2,
    Linf,
}

impl From<NormArg> for Norm {
    fn from(n: NormArg) -> Norm {
        match n {
            NormArg::L1 => Norm::L1,
            NormArg::L2 => Norm::L2,
            NormArg::Linf => Norm::Linf,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum)]
    pub method: Method,
    #[command(flatten)]
    pub k: KArgs,
    #[command(flatten)]
    pub k_alpha: KAlphaArgs,
    /// Level of the conditional tail probability `P(Y > y x | X > x)`.
    #[arg(long, default_value_t = 1.0)]
    pub y: f64,
    /// Known tail index.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, value_enum, default_value_t = NormArg::L2)]
    pub norm: NormArg,
    /// Extrapolate the CTE to `E[Y | X > U(1/p)]`.
    #[arg(long)]
    pub p: Option<f64>,
    /// Confidence level of the normal interval.
    #[arg(long, default_value_t = 0.95)]
    pub level: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CurveMethodArg {
    Empirical,
    Quasispectral,
    QuasispectralHill,
}

#[derive(Debug, Clone, Args)]
pub struct CurveArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [CurveMethodArg::Empirical, CurveMethodArg::QuasispectralHill])]
    pub methods: Vec<CurveMethodArg>,
    /// Grid of `y` values at fixed k.
    #[arg(long, value_delimiter = ',', conflicts_with = "k_fracs")]
    pub y_grid: Vec<f64>,
    /// Sweep of k fractions at fixed `y`.
    #[arg(long, value_delimiter = ',')]
    pub k_fracs: Vec<f64>,
    /// Fixed k for `--y-grid`.
    #[arg(long, conflicts_with = "k_frac")]
    pub k: Option<usize>,
    #[arg(long)]
    pub k_frac: Option<f64>,
    #[command(flatten)]
    pub k_alpha: KAlphaArgs,
    #[arg(long, default_value_t = 1.0)]
    pub y: f64,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum McEstimatorArg {
    TdcEmpirical,
    TdcQuasispectral,
    TdcQuasispectralHill,
    CteAleph3,
    CteAleph4,
    Hill,
}

impl From<McEstimatorArg> for McEstimator {
    fn from(e: McEstimatorArg) -> McEstimator {
        match e {
            McEstimatorArg::TdcEmpirical => McEstimator::TdcEmpirical,
            McEstimatorArg::TdcQuasispectral => McEstimator::TdcQuasiSpectral,
            McEstimatorArg::TdcQuasispectralHill => McEstimator::TdcQuasiSpectralHill,
            McEstimatorArg::CteAleph3 => McEstimator::CteAleph3,
            McEstimatorArg::CteAleph4 => McEstimator::CteAleph4,
            McEstimatorArg::Hill => McEstimator::Hill,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct McArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 1000)]
    pub reps: usize,
    #[arg(long, value_delimiter = ',', default_values_t = [0.05, 0.10, 0.20, 0.30, 0.40])]
    pub k_fracs: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_values_t = [0.20])]
    pub k_alpha_fracs: Vec<f64>,
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_values_t = [
            McEstimatorArg::TdcEmpirical,
            McEstimatorArg::TdcQuasispectral,
            McEstimatorArg::TdcQuasispectralHill,
        ]
    )]
    pub estimators: Vec<McEstimatorArg>,
    #[arg(long, default_value_t = 1.0)]
    pub y: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(flatten)]
    pub out: OutputArgs,
}
