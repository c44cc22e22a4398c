use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "subdiv", version, about = "Interpolatory subdivision of sampled data and planar polylines")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Refine a CSV of values (one column) or points (two columns).
    Refine(RefineArgs),
    /// Run one of the named experiments and append its record.
    Experiment(ExperimentArgs),
    /// Draw a CSV of points as a single SVG path.
    ExportSvg(ExportArgs),
    /// Estimate smoothness and ratio statistics of a CSV sequence.
    Analyze(AnalyzeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeName {
    SEps,
    TGamma,
    T11,
    T22,
    RRule,
    #[value(name = "2pt-gamma")]
    TwoPointGamma,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GammaKind {
    Zero,
    Hyper,
    Trig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TopologyArg {
    Open,
    Periodic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Svg,
    Jsonl,
}

#[derive(Debug, Clone, Args)]
pub struct SchemeArgs {
    #[arg(long, value_enum, default_value = "s-eps")]
    pub scheme: SchemeName,
    /// Cut-off parameter of s-eps, in [0, 2].
    #[arg(long, default_value_t = 1.0)]
    pub eps: f64,
    #[arg(long, value_enum, default_value = "zero")]
    pub gamma_kind: GammaKind,
    /// Frequency magnitude in abscissa units (trig needs magnitude * h < pi).
    #[arg(long)]
    pub gamma_mag: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct RefineArgs {
    pub input: PathBuf,
    #[command(flatten)]
    pub scheme: SchemeArgs,
    #[arg(long, default_value_t = 1)]
    pub levels: u32,
    #[arg(long, value_enum, default_value = "open")]
    pub topology: TopologyArg,
    /// Spacing of the input samples.
    #[arg(long, default_value_t = 1.0)]
    pub h: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write files here instead of printing CSV to stdout.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "csv")]
    pub format: Vec<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExperimentName {
    Circle,
    Conics,
    Monotone,
    ApproxTable,
    DeltaBar,
    GradientTables,
    Contraction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DataClassArg {
    General,
    Positive,
    NearConstant,
}

#[derive(Debug, Clone, Args)]
pub struct ExperimentArgs {
    #[arg(value_enum)]
    pub name: ExperimentName,
    #[arg(long, default_value_t = 1.0)]
    pub eps: f64,
    /// Refinement levels; each experiment has its own default.
    #[arg(long)]
    pub levels: Option<u32>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "jsonl,csv")]
    pub format: Vec<Format>,
    /// circle: number of samples.
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// circle: phase offset of the samples.
    #[arg(long, default_value_t = 1e-5)]
    pub u: f64,
    /// contraction: number of random inputs.
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, value_enum, default_value = "general")]
    pub class: DataClassArg,
    /// contraction near-constant: bound on rho of the inputs.
    #[arg(long, default_value_t = 0.05)]
    pub rho_bound: f64,
    /// delta-bar: boundary grid resolution.
    #[arg(long, default_value_t = 32)]
    pub resolution: usize,
    /// delta-bar: upper end of the bisection bracket.
    #[arg(long, default_value_t = 0.5)]
    pub delta_max: f64,
}

#[derive(Debug, Clone, Args)]
pub struct ExportArgs {
    pub input: PathBuf,
    /// Close the path back to the first point.
    #[arg(long, value_enum, default_value = "open")]
    pub topology: TopologyArg,
    /// Output file; stdout when absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value = "black")]
    pub stroke: String,
}

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    pub input: PathBuf,
    #[command(flatten)]
    pub scheme: SchemeArgs,
    /// Number of levels in the smoothness estimate.
    #[arg(long, default_value_t = 8)]
    pub levels: u32,
    /// Difference order of the smoothness estimate.
    #[arg(long, default_value_t = 3)]
    pub order: usize,
    #[arg(long, value_enum, default_value = "open")]
    pub topology: TopologyArg,
    #[arg(long, default_value_t = 1.0)]
    pub h: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Append the record to `records.jsonl` here as well as printing it.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}
