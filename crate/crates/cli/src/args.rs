use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "grepo", version, about = "Drill git history into a property graph and query it")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Drill a repository into the graph store and print the drill report.
    Drill(DrillArgs),
    /// Run a query (q1..q5) or a primitive miner operation.
    Mine(MineArgs),
    /// Write the canonical JSON Lines dump of the store.
    Export(ExportArgs),
    /// Cold-drill a project and time Q1-Q5 on worst-case targets.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct DbArg {
    /// Graph store snapshot; overrides the config's db_path.
    #[arg(long, env = "GREPO_DB")]
    pub db: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DrillArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[command(flatten)]
    pub db: DbArg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Query {
    Q1,
    Q2,
    Q3,
    Q4,
    Q5,
    /// Commits with branches and parents, optionally on one branch.
    Commits,
    /// Branch names.
    Branches,
    /// Parent shas of one commit.
    Parents,
    /// Developers with commits in the project.
    Developers,
    /// Methods of one file.
    FileMethods,
    /// Complexity history of one method.
    MethodHistory,
    /// The worst-case target of one query.
    WorstCase,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Iterative,
    SinglePass,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Q1Table {
    #[default]
    Nodes,
    Edges,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TargetQuery {
    Q2,
    Q3,
    Q4,
    Q5,
}

#[derive(Debug, Args)]
pub struct MineArgs {
    pub query: Query,
    #[arg(long)]
    pub project: String,
    #[command(flatten)]
    pub db: DbArg,
    /// File path (any historical path) or File node id.
    #[arg(long)]
    pub file: Option<String>,
    /// Developer email or Developer node id.
    #[arg(long)]
    pub dev: Option<String>,
    /// Method node id.
    #[arg(long)]
    pub method: Option<String>,
    /// Commit sha.
    #[arg(long)]
    pub sha: Option<String>,
    #[arg(long)]
    pub branch: Option<String>,
    /// Which Q1 table to print.
    #[arg(long, value_enum, default_value_t)]
    pub table: Q1Table,
    /// Query whose worst-case target `worst-case` reports.
    #[arg(long = "for", value_enum)]
    pub target_query: Option<TargetQuery>,
    #[arg(long, value_enum, default_value = "iterative")]
    pub mode: Mode,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    /// JSON mapper pipeline applied to the result.
    #[arg(long)]
    pub pipeline: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    /// Restrict the dump to one project.
    #[arg(long)]
    pub project: Option<String>,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub db: DbArg,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Timed repetitions per query; the median is reported.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    pub repeats: u32,
}
