//! Command-line surface and its validation into library types.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use voi_core::engine::{BetaGrid, BetaScale};
use voi_core::geometry::{Family, ModelSpec, PriorSpec};
use voi_core::io::{parse_cost_csv, parse_prior_csv};
use voi_core::measure::LogBase;
use voi_core::VoiError;

use crate::error::{invalid, CliResult};
use crate::output::read;

#[derive(Debug, Parser)]
#[command(
    name = "voi",
    version,
    about = "Value-of-information curves for Gibbs channels and circular transport costs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sweep β and write the VoI curve as CSV.
    Curve(CurveArgs),
    /// Hartley (partition experiment) values for k = 1..log2 n.
    Hartley(HartleyArgs),
    /// Maximum-Entropy cost and its large-n limit.
    Maxent(MaxentArgs),
    /// Run the invariant checks against independent references.
    Verify(VerifyArgs),
    /// Render curves as an SVG line chart.
    Plot(PlotArgs),
    /// Large-n limits: unit-circle partition function and circle Γ'.
    Limit(LimitArgs),
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse()
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// circle-linear, unit-circle-linear, unit-circle-log, unit-circle-root,
    /// one-way-line-linear or custom.
    #[arg(long, value_parser = parse_family)]
    pub model: Option<Family>,
    /// Number of points (even).
    #[arg(long)]
    pub n: Option<usize>,
    /// Prior weights file.
    #[arg(long)]
    pub prior: Option<PathBuf>,
    /// Cost matrix file: n, then n rows, then an optional prior row.
    #[arg(long)]
    pub cost: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScaleArg {
    Geometric,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BaseArg {
    Bits,
    Nats,
}

impl From<BaseArg> for LogBase {
    fn from(b: BaseArg) -> Self {
        match b {
            BaseArg::Bits => LogBase::Bits,
            BaseArg::Nats => LogBase::Nats,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    #[arg(long, default_value_t = 1e-3)]
    pub beta_min: f64,
    #[arg(long, default_value_t = 50.0)]
    pub beta_max: f64,
    #[arg(long, default_value_t = 200)]
    pub beta_count: usize,
    #[arg(long, value_enum, default_value_t = ScaleArg::Geometric)]
    pub beta_scale: ScaleArg,
    /// Do not prepend β = 0 (curves must still start at 0).
    #[arg(long)]
    pub no_zero: bool,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, value_enum, default_value_t = BaseArg::Bits)]
    pub base: BaseArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct HartleyArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_enum, default_value_t = BaseArg::Bits)]
    pub base: BaseArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MaxentArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Model to check; all bundled families when omitted.
    #[arg(long, value_parser = parse_family)]
    pub model: Option<Family>,
    #[arg(long, default_value_t = 8)]
    pub n: usize,
    #[arg(long)]
    pub prior: Option<PathBuf>,
    #[arg(long)]
    pub cost: Option<PathBuf>,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Replace every check tolerance with this value.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// Curve CSV written by `voi curve`; repeatable.
    #[arg(long = "curve")]
    pub curves: Vec<PathBuf>,
    /// Bundled model to sweep inline.
    #[arg(long, value_parser = parse_family)]
    pub model: Option<Family>,
    /// Sizes for the inline model; repeatable or comma separated.
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<usize>,
    /// Overlay Hartley points of the inline models.
    #[arg(long)]
    pub hartley: bool,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, value_enum, default_value_t = BaseArg::Bits)]
    pub base: BaseArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LimitArgs {
    /// Values of β > 0; repeatable or comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [0.1, 1.0, 10.0])]
    pub beta: Vec<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl GridArgs {
    pub fn points(&self) -> CliResult<Vec<f64>> {
        let grid = BetaGrid {
            min: self.beta_min,
            max: self.beta_max,
            count: self.beta_count,
            scale: match self.beta_scale {
                ScaleArg::Geometric => BetaScale::Geometric,
                ScaleArg::Linear => BetaScale::Linear,
            },
            include_zero: !self.no_zero,
        };
        grid.points()
            .map_err(|e| invalid("--beta-min/--beta-max/--beta-count/--beta-scale", e))
    }
}

fn size_error(e: VoiError) -> crate::error::CliError {
    match e {
        VoiError::InvalidSize { .. } => invalid("--n", e),
        other => other.into(),
    }
}

impl ModelArgs {
    /// Resolves flags and files into a `ModelSpec`.
    pub fn spec(&self) -> CliResult<ModelSpec> {
        let prior = match &self.prior {
            Some(path) => Some(parse_prior_csv(&read(path)?).map_err(|e| invalid("--prior", e))?),
            None => None,
        };
        if let Some(path) = &self.cost {
            if self.model.is_some_and(|m| m != Family::Custom) {
                return Err(invalid("--cost", "only valid with --model custom"));
            }
            let (cost, file_prior) =
                parse_cost_csv(&read(path)?).map_err(|e| invalid("--cost", e))?;
            if let Some(n) = self.n.filter(|&n| n != cost.n()) {
                return Err(invalid(
                    "--n",
                    format!("{n} does not match the cost file size {}", cost.n()),
                ));
            }
            let prior = match (prior, file_prior) {
                (Some(_), Some(_)) => {
                    return Err(invalid(
                        "--prior",
                        "the cost file already carries a prior row",
                    ))
                }
                (Some(p), None) | (None, Some(p)) => PriorSpec::Custom(p),
                (None, None) => PriorSpec::Uniform,
            };
            return ModelSpec::custom(cost, prior).map_err(|e| invalid("--prior", e));
        }
        let family = self
            .model
            .ok_or_else(|| invalid("--model", "required (or give --cost)"))?;
        if family == Family::Custom {
            return Err(invalid("--cost", "required for --model custom"));
        }
        let n = self.n.ok_or_else(|| invalid("--n", "required"))?;
        let spec = ModelSpec::new(family, n).map_err(size_error)?;
        match prior {
            Some(p) => spec.with_prior(p).map_err(|e| invalid("--prior", e)),
            None => Ok(spec),
        }
    }
}
