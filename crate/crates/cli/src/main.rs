mod commands;
mod failure;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use shrubkit::covers::DEFAULT_CLASS_CAP;
use shrubkit::graph::DEFAULT_TREEDEPTH_CAP;
use shrubkit::wcol::DEFAULT_EXACT_WCOL_CAP;

use failure::Failure;

#[derive(Parser)]
#[command(
    name = "shrubkit",
    version,
    about = "Build and check sparse decompositions of first-order interpreted graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Weak coloring numbers of an order, with heuristic comparisons.
    Wcol(WcolArgs),
    /// Bushes for bounded-expansion inputs.
    #[command(subcommand)]
    Bush(BushCmd),
    /// Separator quasi-bushes for nowhere dense inputs.
    #[command(subcommand)]
    Qbush(QbushCmd),
    /// Type-representative kernel of a formula on a target set.
    Kernel(KernelArgs),
    /// Low-treedepth cover, or low-shrubdepth cover from a quasi-bush.
    Cover(CoverArgs),
    /// Graph utilities.
    #[command(subcommand)]
    Graph(GraphCmd),
}

#[derive(Args, Clone)]
struct GraphIn {
    /// Graph file.
    #[arg(short = 'g', long = "graph")]
    graph: PathBuf,
    /// Vertex order: an order file, a list such as `2,0,1`, or `strategy:<degeneracy|bfs|sorted-degree>`.
    #[arg(long, default_value = "strategy:degeneracy")]
    order: String,
}

#[derive(Args, Clone)]
struct FormulaIn {
    /// Formula text, e.g. `exists z. E(x,z) & E(z,y)`.
    #[arg(long, conflicts_with = "formula_file")]
    formula: Option<String>,
    /// File holding the formula text.
    #[arg(long)]
    formula_file: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Args, Clone)]
struct Out {
    /// Write the artifact here instead of stdout.
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct WcolArgs {
    #[command(flatten)]
    input: GraphIn,
    /// Radii, comma separated.
    #[arg(
        short = 'r',
        long = "radius",
        value_delimiter = ',',
        default_value = "1"
    )]
    radii: Vec<usize>,
    /// Also compute the exact weak coloring numbers (fails above the cap).
    #[arg(long)]
    exact: bool,
    /// Largest graph for exact weak coloring numbers.
    #[arg(long, default_value_t = DEFAULT_EXACT_WCOL_CAP)]
    cap_exact_wcol: usize,
    #[command(flatten)]
    out: Out,
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    input: GraphIn,
    /// Separation radius.
    #[arg(short = 'r', long = "radius")]
    r: usize,
    /// Quantifier rank of the types.
    #[arg(short = 'q', long = "rank")]
    q: usize,
    #[command(flatten)]
    formula: FormulaIn,
    #[command(flatten)]
    out: Out,
}

#[derive(Args)]
struct DecodeArgs {
    /// Bush or quasi-bush JSON file.
    artifact: PathBuf,
    #[command(flatten)]
    out: Out,
}

#[derive(Args)]
struct VerifyArgs {
    /// Bush or quasi-bush JSON file.
    artifact: PathBuf,
    /// Graph file.
    #[arg(short = 'g', long = "graph")]
    graph: PathBuf,
    #[command(flatten)]
    formula: FormulaIn,
}

#[derive(Args)]
struct StatsArgs {
    #[command(flatten)]
    input: GraphIn,
    /// Separation radius.
    #[arg(short = 'r', long = "radius")]
    r: usize,
    #[command(flatten)]
    out: Out,
}

#[derive(Subcommand)]
enum BushCmd {
    /// Build the bush of a formula and write it as JSON (or DOT).
    Build(BuildArgs),
    /// Decode a bush JSON file into the digraph it represents.
    Decode(DecodeArgs),
    /// Exit 0 iff the bush decodes to the interpretation of the formula.
    Verify(VerifyArgs),
    /// Sparsity checks of the bush of `E(x,y)`.
    Stats(StatsArgs),
    /// Rewrite a bush so that every leaf carries the same label.
    OneLabel(DecodeArgs),
}

#[derive(Subcommand)]
enum QbushCmd {
    /// Build the separator quasi-bush and label it for a formula.
    Build(BuildArgs),
    /// Write the unlabeled separator quasi-bush.
    Separator(StatsArgs),
    /// Decode a labeled quasi-bush JSON file.
    Decode(DecodeArgs),
    /// Exit 0 iff the quasi-bush decodes to the interpretation of the formula.
    Verify(VerifyArgs),
    /// Splitter and size inequalities of the separator quasi-bush.
    Stats(StatsArgs),
}

#[derive(Args)]
struct KernelArgs {
    /// Graph file.
    #[arg(short = 'g', long = "graph")]
    graph: PathBuf,
    /// Target vertices, comma separated.
    #[arg(short = 'A', long = "target", value_delimiter = ',', required = true)]
    target: Vec<usize>,
    #[command(flatten)]
    formula: FormulaIn,
    /// Directory for `kernel.graph`, `kernel.formula` and `ledger.json`.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct CoverArgs {
    #[command(flatten)]
    input: GraphIn,
    /// Every vertex set of this size lies in some class.
    #[arg(short = 'p')]
    p: usize,
    /// Labeled quasi-bush of the graph; selects the shrubdepth cover.
    #[arg(long)]
    qbush: Option<PathBuf>,
    /// Seed for sampled cover checks on large graphs.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest component solved exactly when certifying treedepth.
    #[arg(long, default_value_t = DEFAULT_TREEDEPTH_CAP)]
    cap_treedepth: usize,
    /// Largest number of classes enumerated before giving up.
    #[arg(long, default_value_t = DEFAULT_CLASS_CAP)]
    cap_classes: usize,
    #[command(flatten)]
    out: Out,
}

#[derive(Subcommand)]
enum GraphCmd {
    /// Graphviz rendering of a graph file.
    Dot {
        /// Graph file.
        #[arg(short = 'g', long = "graph")]
        graph: PathBuf,
    },
    /// Basic measurements of a graph file.
    Info {
        /// Graph file.
        #[arg(short = 'g', long = "graph")]
        graph: PathBuf,
        /// Largest component solved exactly when certifying treedepth.
        #[arg(long, default_value_t = DEFAULT_TREEDEPTH_CAP)]
        cap_treedepth: usize,
    },
    /// The digraph defined by a formula `phi(x,y)`.
    Interpret {
        /// Graph file.
        #[arg(short = 'g', long = "graph")]
        graph: PathBuf,
        #[command(flatten)]
        formula: FormulaIn,
    },
}

fn init_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("SHRUBKIT_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| Failure::usage(format!("SHRUBKIT_THREADS must be a number, found `{raw}`")))?;
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::usage(e.to_string()))?;
    #[cfg(not(feature = "parallel"))]
    let _ = n;
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    init_threads()?;
    match cli.command {
        Command::Wcol(a) => commands::wcol(&a),
        Command::Bush(BushCmd::Build(a)) => commands::bush_build(&a),
        Command::Bush(BushCmd::Decode(a)) => commands::bush_decode(&a),
        Command::Bush(BushCmd::Verify(a)) => commands::bush_verify(&a),
        Command::Bush(BushCmd::Stats(a)) => commands::bush_stats(&a),
        Command::Bush(BushCmd::OneLabel(a)) => commands::bush_one_label(&a),
        Command::Qbush(QbushCmd::Build(a)) => commands::qbush_build(&a),
        Command::Qbush(QbushCmd::Separator(a)) => commands::qbush_separator(&a),
        Command::Qbush(QbushCmd::Decode(a)) => commands::qbush_decode(&a),
        Command::Qbush(QbushCmd::Verify(a)) => commands::qbush_verify(&a),
        Command::Qbush(QbushCmd::Stats(a)) => commands::qbush_stats(&a),
        Command::Kernel(a) => commands::kernel(&a),
        Command::Cover(a) => commands::cover(&a),
        Command::Graph(GraphCmd::Dot { graph }) => commands::graph_dot(&graph),
        Command::Graph(GraphCmd::Info {
            graph,
            cap_treedepth,
        }) => commands::graph_info(&graph, cap_treedepth),
        Command::Graph(GraphCmd::Interpret { graph, formula }) => {
            commands::graph_interpret(&graph, &formula)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.report);
            ExitCode::from(f.code)
        }
    }
}
