use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "siph",
    version,
    about = "Probe scaling-invariant and positively homogeneous functions",
    after_help = "Exit codes: 0 pass, 1 property violated or not established, 2 usage or configuration error.\n\
                  SIPH_SEED, when set, overrides --seed."
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    F32,
    F64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Global {
    /// Gallery entry (see `gallery list`)
    #[arg(long, global = true, conflicts_with = "expr")]
    pub gallery: Option<String>,

    /// Expression in x_1..x_n, e.g. "x_1^2 + 4*x_2^2"
    #[arg(long, global = true)]
    pub expr: Option<String>,

    /// Input dimension
    #[arg(long, global = true, default_value_t = 2)]
    pub n: usize,

    /// Gallery parameter `key=v1,v2,...` (repeatable)
    #[arg(long = "param", global = true, value_name = "K=V")]
    pub params: Vec<String>,

    /// Compose a monotone transform on top: identity, power:b, exp_neg,
    /// affine:a,b, tanh, table:t0,y0,t1,y1,...
    #[arg(long, global = true)]
    pub phi: Option<String>,

    /// Declare the PH degree of an expression (enables --phi and PH checks)
    #[arg(long, global = true)]
    pub ph_degree: Option<f64>,

    /// Reference point x★ (comma separated); defaults to the origin
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub center: Option<Vec<f64>>,

    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Number of samples
    #[arg(long = "N", global = true, default_value_t = 10_000)]
    pub samples: usize,

    /// Half-width R of the sampling box [-R, R]^n
    #[arg(long = "box", global = true, default_value_t = 2.0)]
    pub box_radius: f64,

    /// Scale range for rho (log-uniform)
    #[arg(long, global = true, default_value_t = 1e-2)]
    pub rho_min: f64,
    #[arg(long, global = true, default_value_t = 1e2)]
    pub rho_max: f64,

    /// Largest ray abscissa T and number of geometric grid points
    #[arg(long, global = true, default_value_t = 20.0)]
    pub grid_max: f64,
    #[arg(long, global = true, default_value_t = 64)]
    pub grid_points: usize,

    /// Number of random directions added to the ±axes
    #[arg(long, global = true, default_value_t = 32)]
    pub dirs: usize,

    /// Residual tolerance; each command has its own default
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    /// Finite-difference step
    #[arg(long, global = true, default_value_t = 1e-5)]
    pub h: f64,

    /// Ignore analytic gradients and always use central differences
    #[arg(long, global = true)]
    pub numeric_grad: bool,

    /// PH degree used for decompositions and Euler checks
    #[arg(long, global = true)]
    pub alpha: Option<f64>,

    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    #[arg(long, global = true, value_enum, default_value_t = Precision::F64)]
    pub precision: Precision,

    /// Worker threads (default: available cores)
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Witnesses kept in the report
    #[arg(long, global = true, default_value_t = 10)]
    pub max_witnesses: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Gallery of built-in functions
    #[command(subcommand)]
    Gallery(GalleryCmd),
    /// Property checks on the selected function
    #[command(subcommand)]
    Check(CheckCmd),
    /// Build f = φ∘p, verify it, optionally compare with a second reference
    Decompose(DecomposeArgs),
    /// Differential identities
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Level-set geometry
    #[command(subcommand)]
    Levelset(LevelsetCmd),
    /// Certificates
    #[command(subcommand)]
    Cert(CertCmd),
    /// Standalone solvers
    #[command(subcommand)]
    Solve(SolveCmd),
}

impl Command {
    pub fn name(&self) -> String {
        match self {
            Command::Gallery(GalleryCmd::List) => "gallery list".into(),
            Command::Check(CheckCmd::Si) => "check si".into(),
            Command::Check(CheckCmd::Decomposable) => "check decomposable".into(),
            Command::Decompose(_) => "decompose".into(),
            Command::Verify(v) => format!(
                "verify {}",
                match v {
                    VerifyCmd::Euler(_) => "euler",
                    VerifyCmd::GeneralEuler => "general-euler",
                    VerifyCmd::LevelsetGrad(_) => "levelset-grad",
                    VerifyCmd::Saddle(_) => "saddle",
                }
            ),
            Command::Levelset(l) => format!(
                "levelset {}",
                match l {
                    LevelsetCmd::Radii(_) => "radii",
                    LevelsetCmd::Bounds(_) => "bounds",
                    LevelsetCmd::Compact(_) => "compact",
                    LevelsetCmd::Negligible(_) => "negligible",
                }
            ),
            Command::Cert(CertCmd::PositiveRegion(_)) => "cert positive-region".into(),
            Command::Solve(SolveCmd::PairedLevel(_)) => "solve paired-level".into(),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum GalleryCmd {
    List,
}

#[derive(Debug, Subcommand)]
pub enum CheckCmd {
    /// Scaling invariance on seeded (x, y, rho) triples
    Si,
    /// Shared-image criterion along seeded rays
    Decomposable,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DecomposeArgs {
    /// Reference point (one-sided) or positive-side reference (two-sided)
    #[arg(long = "ref", value_delimiter = ',', allow_hyphen_values = true)]
    pub reference: Option<Vec<f64>>,
    /// Negative-side reference (two-sided case)
    #[arg(long = "ref-neg", value_delimiter = ',', allow_hyphen_values = true)]
    pub reference_neg: Option<Vec<f64>>,
    /// Second reference for the uniqueness check
    #[arg(long = "ref2", value_delimiter = ',', allow_hyphen_values = true)]
    pub reference2: Option<Vec<f64>>,
    #[arg(long = "ref2-neg", value_delimiter = ',', allow_hyphen_values = true)]
    pub reference2_neg: Option<Vec<f64>>,
}

#[derive(Debug, Subcommand)]
pub enum VerifyCmd {
    /// α p(x) = ∇p(x)·x for a PH function
    Euler(EulerArgs),
    /// ∇f(x)·x = α φ'(p(x)) p(x) via the decomposition
    GeneralEuler,
    /// Constancy of ∇f(z)·z on a level set
    LevelsetGrad(LevelArgs),
    /// Stationary shells of saddle_si
    Saddle(SaddleArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EulerArgs {
    /// Skip samples with a coordinate smaller than this in magnitude
    #[arg(long)]
    pub min_coord: Option<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct LevelArgs {
    /// Level value c (default: f(x★ + e₁))
    #[arg(long, allow_hyphen_values = true)]
    pub level: Option<f64>,
    /// Level-set points
    #[arg(long, default_value_t = 64)]
    pub points: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SaddleArgs {
    #[arg(long, default_value_t = 3)]
    pub k_max: usize,
    #[arg(long, default_value_t = 16)]
    pub points: usize,
}

#[derive(Debug, Subcommand)]
pub enum LevelsetCmd {
    /// Radius of the level set along each direction
    Radii(RadiiArgs),
    /// Ball sandwich bounds (PH form when the function carries a degree)
    Bounds(BoundsArgs),
    /// Bounded sublevel set probe
    Compact(RadiiArgs),
    /// Monte Carlo measure of thin shells around a level
    Negligible(NegligibleArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RadiiArgs {
    /// Level value c (default: f(x★ + e₁))
    #[arg(long, allow_hyphen_values = true)]
    pub level: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundsMode {
    Ph,
    Si,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BoundsArgs {
    /// Default: ph when a PH degree is known, si otherwise
    #[arg(long, value_enum)]
    pub mode: Option<BoundsMode>,
    /// Sphere samples for the extrema search
    #[arg(long, default_value_t = 4096)]
    pub extrema_samples: usize,
    #[arg(long, default_value_t = 8)]
    pub refine_steps: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct NegligibleArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub level: Option<f64>,
    /// Strictly decreasing shell half-widths
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.05")]
    pub eps: Vec<f64>,
}

#[derive(Debug, Subcommand)]
pub enum CertCmd {
    /// Neighborhood of a level set where ∇f(z)·z stays positive
    PositiveRegion(CertArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CertArgs {
    /// Level-set points
    #[arg(long, default_value_t = 64)]
    pub points: usize,
    /// Random offsets per level point at each δ
    #[arg(long, default_value_t = 8)]
    pub fatten: usize,
}

#[derive(Debug, Subcommand)]
pub enum SolveCmd {
    /// s > 1 with r²e^{−r²} = s²e^{−s²}
    PairedLevel(PairedArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PairedArgs {
    #[arg(long)]
    pub r: f64,
}
