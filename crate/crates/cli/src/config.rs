//! Command-line arguments and the optional TOML config file.
//!
//! Every option is an `Option` so that a flag can be told apart from its
//! absence; flags win over the file, the file wins over the defaults.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

#[derive(Debug, Parser)]
#[command(
    name = "pasym",
    version,
    about = "Inner asymptotics of u_t + phi(u)_x = eps u_xx and their checks"
)]
pub struct Cli {
    /// TOML file with one table per subcommand, e.g. `[residual_order]`.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fitted order of the normalized residual over an eps sweep (JSON report).
    ResidualOrder(ResidualArgs),
    /// w10 against the outer fold root, or against the tanh profile (CSV).
    FoldProfile(FoldArgs),
    /// Composite and renormalized formulas against the reference solver (CSV).
    InitialLayer(LayerArgs),
    /// Reference solver on a single problem (CSV or binary field).
    OracleRun(OracleArgs),
    /// Scaling exponents sigma, mu, kappa as exact fractions (CSV).
    Exponents(ExponentArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FluxChoice {
    /// u²/2 + u³/6
    Cubic,
    /// u²/2
    Quadratic,
    /// u²/2
    Burgers,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileChoice {
    Tanh,
    Algebraic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TableChoice {
    /// One row per mu with both sup errors.
    Summary,
    /// Every compared node.
    Points,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialChoice {
    /// -tanh(x/(2 eps)) shifted and scaled to the nu values (viscous shock)
    Shock,
    /// tanh profile of width `width`
    Tanh,
    /// nu_minus everywhere
    Constant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeChoice {
    Central,
    Llf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormatChoice {
    Csv,
    Binary,
}

macro_rules! merge_fields {
    ($a:ident, $b:ident; $($f:ident),* $(,)?) => {
        Self { $($f: $a.$f.or($b.$f)),* }
    };
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ResidualArgs {
    /// Singularity index n >= 1 [default: 1]
    #[arg(long)]
    pub n: Option<u32>,
    /// Flux [default: cubic]
    #[arg(long, value_enum)]
    pub flux: Option<FluxChoice>,
    /// Comma-separated eps values [default: 1e-2,1e-3,1e-4,1e-5]
    #[arg(long, value_delimiter = ',')]
    pub eps: Option<Vec<f64>>,
    /// Quasi-random samples per eps [default: 10000]
    #[arg(long)]
    pub samples: Option<usize>,
    /// Size K of the region [default: 1]
    #[arg(long)]
    pub k: Option<f64>,
    /// x exponent of the region: kappa, sigma or a fraction p/q [default: kappa]
    #[arg(long)]
    pub domain_exponent: Option<String>,
    /// Half-width of the accepted band around the predicted order [default: 0.1]
    #[arg(long)]
    pub band: Option<f64>,
    /// Minimum r² of the fit [default: 0.95]
    #[arg(long)]
    pub min_r_squared: Option<f64>,
    /// Report path [default: stdout]
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl ResidualArgs {
    pub fn merge(self, file: Self) -> Self {
        merge_fields!(self, file; n, flux, eps, samples, k, domain_exponent, band, min_r_squared, out)
    }
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FoldArgs {
    /// Comma-separated tau values [default: -20,-10,-5; with --tanh: 10,20,40]
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub tau: Option<Vec<f64>>,
    /// Lower end of the xi (or z with --tanh) range [default: -3]
    #[arg(long, allow_hyphen_values = true)]
    pub min: Option<f64>,
    /// Upper end of the xi (or z with --tanh) range [default: 3]
    #[arg(long, allow_hyphen_values = true)]
    pub max: Option<f64>,
    /// Points in the range [default: 61]
    #[arg(long)]
    pub points: Option<usize>,
    /// phi''(0) [default: 1]
    #[arg(long)]
    pub phi2: Option<f64>,
    /// Compare with -sqrt(tau) tanh(z)/phi'' at z = xi sqrt(tau)/2 instead
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub tanh: Option<bool>,
    /// CSV path [default: stdout]
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl FoldArgs {
    pub fn merge(self, file: Self) -> Self {
        merge_fields!(self, file; tau, min, max, points, phi2, tanh, out)
    }
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LayerArgs {
    /// Comma-separated mu = rho/eps values [default: 0.2,0.1,0.05]
    #[arg(long, value_delimiter = ',')]
    pub mu: Option<Vec<f64>>,
    /// Viscosity [default: 0.1]
    #[arg(long)]
    pub eps: Option<f64>,
    /// Initial profile shape [default: tanh]
    #[arg(long, value_enum)]
    pub profile: Option<ProfileChoice>,
    /// Left limit of the profile [default: 1]
    #[arg(long, allow_hyphen_values = true)]
    pub nu_minus: Option<f64>,
    /// Right limit of the profile [default: -1]
    #[arg(long, allow_hyphen_values = true)]
    pub nu_plus: Option<f64>,
    /// Flux [default: burgers]
    #[arg(long, value_enum)]
    pub flux: Option<FluxChoice>,
    /// Final time [default: 0.5]
    #[arg(long)]
    pub t_end: Option<f64>,
    /// Errors measured on |x| <= window [default: 1]
    #[arg(long)]
    pub window: Option<f64>,
    /// Solver domain half-width [default: 3]
    #[arg(long)]
    pub domain: Option<f64>,
    /// Solver nodes [default: 3000]
    #[arg(long)]
    pub nx: Option<usize>,
    /// Stored time slices [default: 51]
    #[arg(long)]
    pub nt: Option<usize>,
    /// Time steps per stored slice [default: 20]
    #[arg(long)]
    pub substeps: Option<usize>,
    /// Smallest mesh spacing is rho / cells_per_rho [default: 20]
    #[arg(long)]
    pub cells_per_rho: Option<f64>,
    /// Output table [default: summary]
    #[arg(long, value_enum)]
    pub table: Option<TableChoice>,
    /// CSV path [default: stdout]
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl LayerArgs {
    pub fn merge(self, file: Self) -> Self {
        merge_fields!(self, file; mu, eps, profile, nu_minus, nu_plus, flux, t_end, window, domain, nx, nt, substeps,
            cells_per_rho, table, out)
    }
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleArgs {
    /// Flux [default: burgers]
    #[arg(long, value_enum)]
    pub flux: Option<FluxChoice>,
    /// Viscosity [default: 0.1]
    #[arg(long)]
    pub eps: Option<f64>,
    /// Initial data [default: shock]
    #[arg(long, value_enum)]
    pub initial: Option<InitialChoice>,
    /// Left state [default: 1]
    #[arg(long, allow_hyphen_values = true)]
    pub nu_minus: Option<f64>,
    /// Right state [default: -1]
    #[arg(long, allow_hyphen_values = true)]
    pub nu_plus: Option<f64>,
    /// Width of the tanh initial data [default: 0.01]
    #[arg(long)]
    pub width: Option<f64>,
    /// [default: -3]
    #[arg(long, allow_hyphen_values = true)]
    pub x_min: Option<f64>,
    /// [default: 3]
    #[arg(long, allow_hyphen_values = true)]
    pub x_max: Option<f64>,
    /// [default: 601]
    #[arg(long)]
    pub nx: Option<usize>,
    /// [default: 0]
    #[arg(long, allow_hyphen_values = true)]
    pub t0: Option<f64>,
    /// [default: 1]
    #[arg(long)]
    pub t_end: Option<f64>,
    /// Stored time slices [default: 11]
    #[arg(long)]
    pub nt: Option<usize>,
    /// Time steps per stored slice [default: 10]
    #[arg(long)]
    pub substeps: Option<usize>,
    /// Smallest spacing of a mesh graded around x = 0 [default: uniform mesh]
    #[arg(long)]
    pub h_min: Option<f64>,
    /// Interface flux [default: central]
    #[arg(long, value_enum)]
    pub scheme: Option<SchemeChoice>,
    /// Output format [default: csv]
    #[arg(long, value_enum)]
    pub format: Option<FormatChoice>,
    /// Field path [default: stdout, csv only]
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl OracleArgs {
    pub fn merge(self, file: Self) -> Self {
        merge_fields!(self, file; flux, eps, initial, nu_minus, nu_plus, width, x_min, x_max, nx, t0, t_end, nt,
            substeps, h_min, scheme, format, out)
    }
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExponentArgs {
    /// Largest n in the table [default: 10]
    #[arg(long)]
    pub n_max: Option<u32>,
    /// CSV path [default: stdout]
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl ExponentArgs {
    pub fn merge(self, file: Self) -> Self {
        merge_fields!(self, file; n_max, out)
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigFile {
    pub residual_order: ResidualArgs,
    pub fold_profile: FoldArgs,
    pub initial_layer: LayerArgs,
    pub oracle_run: OracleArgs,
    pub exponents: ExponentArgs,
}

pub fn load(path: Option<&Path>) -> Result<ConfigFile, String> {
    let Some(path) = path else {
        return Ok(ConfigFile::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    toml::from_str(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))
}
