mod commands;
mod output;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Lattice-polytope invariants, Plücker datasets and small ML experiments.
#[derive(Parser, Serialize, Debug)]
#[command(name = "latpoly", version)]
pub struct Cli {
    /// Worker threads for parallel labeling and forests.
    #[arg(long, global = true, env = "LATPOLY_THREADS")]
    pub threads: Option<usize>,
    /// Log more (repeatable).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Serialize, Debug)]
pub enum Command {
    /// Labels every polytope of a JSONL file and prints a table.
    Invariants(InvariantsArgs),
    /// Build, label, augment or encode datasets.
    #[command(subcommand)]
    Dataset(DatasetCommand),
    /// Train an MLP or random forest, optionally with cross-validation.
    Train(TrainArgs),
    /// Evaluate a saved model or a file of predictions.
    Eval(EvalArgs),
    /// Embed encoded polytopes in 1 or 2 dimensions by metric MDS.
    Mds(MdsArgs),
    /// List the reflexive polygons up to unimodular equivalence.
    #[command(name = "enumerate-reflexive-2d")]
    EnumerateReflexive2d(EnumerateArgs),
    /// Draw a histogram of a label or a scatter plot of CSV columns.
    Plot(PlotArgs),
}

#[derive(Args, Serialize, Debug)]
pub struct InvariantsArgs {
    pub input: PathBuf,
    /// Also write the labeled records here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Serialize, Debug)]
pub enum DatasetCommand {
    /// Generate random Fano polygons or canonical Fano 3-polytopes.
    Gen(GenArgs),
    /// Attach all labels to each record.
    Label(LabelArgs),
    /// Expand records into distinct Plücker variants.
    Augment(AugmentArgs),
    /// Write an encoded feature table.
    Features(FeaturesArgs),
}

#[derive(Args, Serialize, Debug)]
pub struct GenArgs {
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[arg(long, default_value_t = 5000)]
    pub count: usize,
    /// Coordinate bound; defaults to 5 in 2d and 3 in 3d.
    #[arg(long)]
    pub max_coord: Option<i64>,
    /// Gorenstein index bound (2d).
    #[arg(long, default_value_t = 30)]
    pub max_gorenstein: u64,
    /// Keep only these vertex counts, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub vertex_counts: Option<Vec<usize>>,
    /// Keep only reflexive (true) or non-reflexive (false) polytopes.
    #[arg(long)]
    pub reflexive: Option<bool>,
    #[arg(long, default_value_t = 200_000)]
    pub max_failed_attempts: usize,
    #[arg(long, env = "LATPOLY_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Serialize, Debug)]
pub struct LabelArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Skip the Hilbert basis (no codimension label).
    #[arg(long)]
    pub skip_codimension: bool,
}

#[derive(Args, Serialize, Debug)]
pub struct AugmentArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Variants per polytope; defaults to 3 in 2d and 10 in 3d.
    #[arg(long)]
    pub variants: Option<usize>,
    #[arg(long, env = "LATPOLY_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Serialize, Debug, Clone)]
pub struct EncodingArgs {
    /// plucker, vertices, plucker+gcd2, plucker+gcdl1, onehot[:W], inverse-problem
    #[arg(long, default_value = "plucker")]
    pub encoding: String,
    /// volume, dual_volume, gorenstein_index, codimension, reflexive
    #[arg(long, default_value = "volume")]
    pub label: String,
    /// Zero-pad feature rows to this length (default: longest row).
    #[arg(long)]
    pub pad_to: Option<usize>,
}

#[derive(Args, Serialize, Debug)]
pub struct FeaturesArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub encoding: EncodingArgs,
}

#[derive(ValueEnum, Serialize, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Mlp,
    Forest,
}

#[derive(ValueEnum, Serialize, Debug, Clone, Copy, PartialEq, Eq)]
pub enum TaskKind {
    Regression,
    Classification,
}

#[derive(Args, Serialize, Debug)]
pub struct TrainArgs {
    /// Labeled JSONL records or a feature CSV.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out_dir: PathBuf,
    #[command(flatten)]
    pub encoding: EncodingArgs,
    #[arg(long, value_enum, default_value_t = ModelKind::Mlp)]
    pub model: ModelKind,
    /// Defaults to classification for the reflexive label.
    #[arg(long, value_enum)]
    pub task: Option<TaskKind>,
    /// polygon, polytope or custom:W1,W2,...[@slope]
    #[arg(long, default_value = "polygon")]
    pub arch: String,
    /// logcosh, mse or crossentropy (default from the architecture and task).
    #[arg(long)]
    pub loss: Option<String>,
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long)]
    pub batch_size: Option<usize>,
    #[arg(long, default_value_t = 1e-3)]
    pub learning_rate: f64,
    /// Train on raw inputs and targets.
    #[arg(long)]
    pub no_standardize: bool,
    #[arg(long, default_value_t = 70)]
    pub trees: usize,
    /// k-fold cross-validation, grouping rows of the same polytope.
    #[arg(long)]
    pub folds: Option<usize>,
    /// Single train/test split with this training fraction.
    #[arg(long)]
    pub train_frac: Option<f64>,
    /// Fine-tune this saved MLP instead of starting from scratch.
    #[arg(long)]
    pub init_from: Option<PathBuf>,
    /// Accuracy bins: half-widths, `0.05range` for a fraction of the label range.
    #[arg(long, value_delimiter = ',', default_value = "0.5,0.025range,0.05range")]
    pub bins: Vec<String>,
    #[arg(long, env = "LATPOLY_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Serialize, Debug)]
pub struct EvalArgs {
    #[arg(long, required_unless_present = "predictions")]
    pub model: Option<PathBuf>,
    /// Data to evaluate the model on.
    #[arg(long, requires = "model")]
    pub input: Option<PathBuf>,
    /// CSV with columns `true,predicted` instead of a model.
    #[arg(long, conflicts_with_all = ["model", "input"])]
    pub predictions: Option<PathBuf>,
    #[arg(long)]
    pub out_dir: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "0.5,0.025range,0.05range")]
    pub bins: Vec<String>,
}

#[derive(Args, Serialize, Debug)]
pub struct MdsArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out_dir: PathBuf,
    #[command(flatten)]
    pub encoding: EncodingArgs,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub components: u8,
    #[arg(long, default_value_t = latpoly::mds::DEFAULT_MAX_ITER)]
    pub max_iter: usize,
    #[arg(long, default_value_t = latpoly::mds::DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, env = "LATPOLY_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Serialize, Debug)]
pub struct EnumerateArgs {
    #[arg(long, default_value_t = 3)]
    pub max_coord: i64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Serialize, Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    Histogram,
    Scatter,
}

#[derive(Args, Serialize, Debug)]
pub struct PlotArgs {
    #[arg(long, value_enum)]
    pub kind: PlotKind,
    /// Labeled JSONL (histogram) or CSV with a header (scatter).
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Label to histogram.
    #[arg(long, default_value = "volume")]
    pub label: String,
    #[arg(long)]
    pub x: Option<String>,
    #[arg(long)]
    pub y: Option<String>,
    #[arg(long)]
    pub color: Option<String>,
    /// Draw the diagonal `y = x`.
    #[arg(long)]
    pub diagonal: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
