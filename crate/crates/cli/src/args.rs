use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "eods", version, about = "Extreme outcome-dependent sampling: analysis, planning, screening and simulation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate the forward effect of one biomarker from a study CSV
    Analyze(AnalyzeArgs),
    /// Power and sample-size planning
    Plan(PlanArgs),
    /// Rank many biomarkers with BH q-values
    Screen(ScreenArgs),
    /// Run a Monte Carlo grid from a config file
    Simulate(SimulateArgs),
    /// Write normal QQ series and shape summaries for the model assumptions
    Check(CheckArgs),
}

#[derive(Debug, Clone, Args)]
pub struct StudyArgs {
    /// Study CSV with a header row; empty or NA marks a missing value
    #[arg(long)]
    pub input: PathBuf,
    /// Response column (complete on every row)
    #[arg(long)]
    pub response: String,
    /// Subject id column, used when present
    #[arg(long, default_value = "id")]
    pub id_column: String,
}

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub study: StudyArgs,
    #[arg(long)]
    pub biomarker: String,
    #[arg(long, default_value_t = 0.95)]
    pub confidence: f64,
    /// log10-transform the biomarker before fitting
    #[arg(long)]
    pub log10: bool,
    /// JSON report path; QQ series are written next to it
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub study: StudyArgs,
    #[arg(long)]
    pub biomarker: String,
    #[arg(long)]
    pub log10: bool,
    /// Output directory for the QQ and shape files
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct ScreenArgs {
    #[command(flatten)]
    pub study: StudyArgs,
    /// Comma-separated biomarker columns; default is every other column
    #[arg(long, value_delimiter = ',')]
    pub biomarkers: Option<Vec<String>>,
    #[arg(long, default_value_t = 0.95)]
    pub confidence: f64,
    /// q-value threshold reported in the `q_below_level` column
    #[arg(long, default_value_t = 0.05)]
    pub bh_level: f64,
    #[arg(long)]
    pub log10: bool,
    #[arg(long)]
    pub workers: Option<usize>,
    /// Output CSV; standard output when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct PlanArgs {
    #[arg(long)]
    pub n_full: Option<u64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub target_power: Option<f64>,
    /// Cohen's f
    #[arg(long, conflicts_with = "rho")]
    pub effect_f: Option<f64>,
    /// Correlation, converted to f = sqrt(rho^2 / (1 - rho^2))
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// JSON report path
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    /// Grid config (`key = v1, v2` lines)
    #[arg(long)]
    pub config: PathBuf,
    /// Metrics CSV, one row per grid cell
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub workers: Option<usize>,
    /// Overrides the config seed
    #[arg(long)]
    pub seed: Option<u64>,
}
