//! `lexiqx` batch driver.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lexiqx::expander::Relation;

#[derive(Debug, Parser)]
#[command(name = "lexiqx", version, about = "Role-aware query expansion and evaluation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
enum Command {
    /// Detect multiword phrases and acronyms in topic titles.
    Format,
    /// Assign role types from dependency parses.
    Segment,
    /// Pick a sense for every query term.
    Disambiguate,
    /// Build, rank and cut one expansion pool.
    Expand,
    /// Index a TREC-text corpus.
    Index,
    /// Score queries; unexpanded LM without --pool, weighted expansion with it.
    Search,
    /// Compute AP/MAP of a run, optionally with a paired t-test.
    Eval,
    /// Search role weights with the genetic algorithm.
    Optimize,
    /// Run every stage and write a report.
    Pipeline,
}

#[derive(Debug, Clone, Args)]
pub struct Opts {
    /// WordNet database directory, or a .jsonl graph.
    #[arg(long, global = true)]
    wordnet: Option<PathBuf>,
    /// Multiword phrase and acronym lexicon (.jsonl).
    #[arg(long, global = true)]
    ncp: Option<PathBuf>,
    /// Term frequency table (term<TAB>count).
    #[arg(long, global = true)]
    freq: Option<PathBuf>,
    /// Dependency parses (TSV).
    #[arg(long, global = true)]
    parses: Option<PathBuf>,
    /// TREC topics file.
    #[arg(long, global = true)]
    topics: Option<PathBuf>,
    /// Corpus file or directory of TREC-text documents.
    #[arg(long, global = true)]
    corpus: Option<PathBuf>,
    /// Relevance judgments (`qid 0 docid rel`).
    #[arg(long, global = true)]
    qrels: Option<PathBuf>,
    /// Expansion pool.
    #[arg(long, global = true, value_parser = parse_pool)]
    pool: Option<Relation>,
    /// Expansion terms kept per query.
    #[arg(long, global = true, default_value_t = lexiqx::expander::DEFAULT_TOP_K)]
    topk: usize,
    /// Dirichlet smoothing parameter.
    #[arg(long, global = true)]
    mu: Option<f64>,
    /// Documents retrieved per query.
    #[arg(long, global = true, default_value_t = lexiqx::retrieval::DEFAULT_TOP_N)]
    top_n: usize,
    /// Genetic search seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory; later stages read earlier artifacts from here.
    #[arg(long, global = true, default_value = "lexiqx-out")]
    out: PathBuf,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Default location of inputs not given by flag.
    #[arg(long, global = true, env = "LEXIQX_DATA")]
    data: Option<PathBuf>,
    /// Role mapping table overriding the built-in one.
    #[arg(long, global = true)]
    roles_table: Option<PathBuf>,
    /// Disambiguation window size (odd).
    #[arg(long, global = true, default_value_t = 3)]
    window: usize,
    /// Report unrelated terms as NR instead of assuming their first sense.
    #[arg(long, global = true)]
    no_fallback: bool,
    /// Depth cap for hypernym and hyponym pools.
    #[arg(long, global = true)]
    depth: Option<usize>,
    /// Index directory (defaults to <out>/index).
    #[arg(long, global = true)]
    index: Option<PathBuf>,
    /// Run file to evaluate.
    #[arg(long, global = true)]
    run: Option<PathBuf>,
    /// Baseline run for the paired t-test.
    #[arg(long, global = true)]
    baseline: Option<PathBuf>,
    /// Role weights file for weighted search.
    #[arg(long, global = true)]
    weights: Option<PathBuf>,
    /// Genetic search configuration (JSON or key=value).
    #[arg(long, global = true)]
    ga_config: Option<PathBuf>,
    /// Population size override.
    #[arg(long, global = true)]
    population: Option<usize>,
    /// Generation count override.
    #[arg(long, global = true)]
    iterations: Option<usize>,
}

fn parse_pool(s: &str) -> Result<Relation, String> {
    s.parse().map_err(|e: lexiqx::Error| e.to_string())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if let Some(n) = cli.opts.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot start {n} workers: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match cli.command {
        Command::Format => commands::format(&cli.opts),
        Command::Segment => commands::segment(&cli.opts),
        Command::Disambiguate => commands::disambiguate(&cli.opts),
        Command::Expand => commands::expand(&cli.opts),
        Command::Index => commands::index(&cli.opts),
        Command::Search => commands::search(&cli.opts),
        Command::Eval => commands::eval(&cli.opts),
        Command::Optimize => commands::optimize(&cli.opts),
        Command::Pipeline => commands::pipeline(&cli.opts),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
