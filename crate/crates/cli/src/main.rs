use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use kronpath::{
    build_index, grammar_to_rsm_with, load_graph_file, parse_grammar, parse_regex, templates, Budget,
    BuiltinGrammar, Grammar, KronIndex, LabeledGraph, PathExtractor, QueryTemplate, RsmOptions,
    SyntheticSpec,
};

mod error;

use error::CliError;

#[derive(Parser)]
#[command(name = "kronpath", version, about = "Regular and context-free path queries over labeled graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a query on a graph and write the index.
    Index(IndexArgs),
    /// List the vertex pairs derivable from a nonterminal.
    Reach {
        index: PathBuf,
        nonterminal: String,
    },
    /// List paths between two vertices, shortest word first.
    Paths(PathsArgs),
    /// Time index creation for instantiated regular query templates.
    BenchRpq(BenchArgs),
    /// Per-label edge counts of a graph.
    Stats {
        graph: PathBuf,
        #[arg(long)]
        add_inverse: bool,
    },
    /// Write a random graph in triple format.
    Generate(GenerateArgs),
}

#[derive(Args)]
struct IndexArgs {
    graph: PathBuf,
    /// Grammar file, or a regex file with --regex.
    #[arg(required_unless_present = "grammar")]
    query: Option<PathBuf>,
    /// Read the query file as a single regex.
    #[arg(long, requires = "query")]
    regex: bool,
    /// Built-in grammar instead of a query file.
    #[arg(long, conflicts_with_all = ["query", "regex"], value_parser = parse_builtin)]
    grammar: Option<BuiltinGrammar>,
    /// Start nonterminal; for regexes, the name of the single nonterminal.
    #[arg(long)]
    start: Option<String>,
    /// Add `label_r` inverse edges to the graph.
    #[arg(long)]
    add_inverse: bool,
    /// Determinize and minimize every box.
    #[arg(long)]
    determinize: bool,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct PathsArgs {
    index: PathBuf,
    from: String,
    to: String,
    nonterminal: String,
    #[arg(long, default_value_t = 8)]
    max_word_len: usize,
    #[arg(long, default_value_t = 100)]
    max_paths: usize,
    /// Longest product walk considered; defaults to a bound complete for --max-word-len.
    #[arg(long)]
    max_index_edges: Option<usize>,
}

#[derive(Args)]
struct BenchArgs {
    graph: PathBuf,
    /// Comma-separated template names; all templates if absent.
    #[arg(long, value_delimiter = ',')]
    templates: Vec<String>,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    per_template: u64,
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
    runs: u64,
    /// Worker threads; queries are independent.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: u64,
    #[arg(long)]
    add_inverse: bool,
    /// Write the CSV here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    edges: usize,
    /// Defaults to the edge count.
    #[arg(long)]
    vertices: Option<usize>,
    #[arg(long, default_value_t = 5)]
    labels: usize,
    /// Comma-separated label names, most frequent first; overrides --labels.
    #[arg(long, value_delimiter = ',')]
    label_names: Vec<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn parse_builtin(s: &str) -> Result<BuiltinGrammar, String> {
    s.parse()
        .map_err(|_| format!("expected one of g1, g2, geo, ma; found `{s}`"))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(out) => {
            let mut stdout = io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(3);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("kronpath: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(command: Command) -> Result<String, CliError> {
    match command {
        Command::Index(args) => cmd_index(args),
        Command::Reach { index, nonterminal } => cmd_reach(&index, &nonterminal),
        Command::Paths(args) => cmd_paths(args),
        Command::BenchRpq(args) => cmd_bench_rpq(args),
        Command::Stats { graph, add_inverse } => Ok(load_graph_file(graph, add_inverse)?.stats().to_string()),
        Command::Generate(args) => cmd_generate(args),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn load_query(args: &IndexArgs) -> Result<Grammar, CliError> {
    let grammar = match (&args.grammar, &args.query) {
        (Some(builtin), _) => builtin.grammar(),
        (None, Some(path)) if args.regex => {
            let regex = parse_regex(&read(path)?)?;
            return Ok(Grammar::from_regex(regex, args.start.as_deref().unwrap_or("S")));
        }
        (None, Some(path)) => parse_grammar(&read(path)?)?,
        (None, None) => return Err(CliError::Usage("a query file or --grammar is required".into())),
    };
    match &args.start {
        Some(start) => Ok(grammar.with_start(start)?),
        None => Ok(grammar),
    }
}

fn cmd_index(args: IndexArgs) -> Result<String, CliError> {
    let grammar = load_query(&args)?;
    let graph = load_graph_file(&args.graph, args.add_inverse)?;
    let rsm = grammar_to_rsm_with(
        &grammar,
        RsmOptions {
            determinize: args.determinize,
        },
    );
    let idx = build_index(&rsm, &graph)?;
    idx.save_index_file(&args.output)?;

    let mut out = String::new();
    let _ = writeln!(out, "vertices\t{}", idx.vertex_count());
    let _ = writeln!(out, "states\t{}", idx.state_count());
    let _ = writeln!(out, "iterations\t{}", idx.stats().iterations);
    for (nt, count) in idx.pair_counts() {
        let _ = writeln!(out, "{nt}\t{count}");
    }
    Ok(out)
}

fn cmd_reach(index: &Path, nonterminal: &str) -> Result<String, CliError> {
    let idx = KronIndex::load_index_file(index)?;
    let mut out = String::new();
    for (x, y) in idx.reachable_pairs(nonterminal)? {
        let _ = writeln!(out, "{x} {y}");
    }
    Ok(out)
}

fn cmd_paths(args: PathsArgs) -> Result<String, CliError> {
    let idx = KronIndex::load_index_file(&args.index)?;
    let from = idx.vertex_index(&args.from)?;
    let to = idx.vertex_index(&args.to)?;
    let mut budget = Budget::for_index(&idx, args.max_word_len, args.max_paths);
    if let Some(edges) = args.max_index_edges {
        budget.max_index_path_edges = edges;
    }
    let mut out = String::new();
    for path in PathExtractor::new(&idx, &budget).paths(from, to, &args.nonterminal)? {
        let _ = writeln!(out, "{}", path.display(idx.vertex_names()));
    }
    Ok(out)
}

struct BenchRow {
    query: String,
    mean_s: f64,
    pairs: usize,
}

fn bench_one(graph: &LabeledGraph, query: String, regex: kronpath::RegexAst, runs: u64) -> Result<BenchRow, CliError> {
    let rsm = grammar_to_rsm_with(&Grammar::from_regex(regex, "S"), RsmOptions::default());
    let start = rsm.start_nonterminal().to_owned();
    let mut total = 0.0;
    let mut pairs = 0;
    for _ in 0..runs {
        let t = Instant::now();
        let idx = build_index(&rsm, graph)?;
        total += t.elapsed().as_secs_f64();
        pairs = idx.nonterminal_matrix(&start)?.nnz();
    }
    Ok(BenchRow {
        query,
        mean_s: total / runs as f64,
        pairs,
    })
}

fn selected_templates(names: &[String]) -> Result<Vec<QueryTemplate>, CliError> {
    if names.is_empty() {
        return Ok(templates());
    }
    names
        .iter()
        .map(|n| kronpath::queries::template(n.trim()).ok_or_else(|| CliError::Usage(format!("unknown template `{n}`"))))
        .collect()
}

fn cmd_bench_rpq(args: BenchArgs) -> Result<String, CliError> {
    let selected = selected_templates(&args.templates)?;
    let graph = load_graph_file(&args.graph, args.add_inverse)?;
    let stats = graph.stats();
    let ranked = stats.top_labels(stats.per_label.len());

    let mut jobs = Vec::new();
    for t in &selected {
        if t.arity() > ranked.len() {
            eprintln!(
                "kronpath: skipping {}: needs {} labels, graph has {}",
                t.name,
                t.arity(),
                ranked.len()
            );
            continue;
        }
        for i in 0..args.per_template as usize {
            let regex = t.instance(&ranked, i).expect("arity checked");
            jobs.push((format!("{}#{i}", t.name), regex));
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs as usize)
        .build()
        .map_err(|e| CliError::Internal(e.to_string()))?;
    let rows: Vec<BenchRow> = pool.install(|| {
        use rayon::prelude::*;
        jobs.into_par_iter()
            .map(|(name, regex)| bench_one(&graph, name, regex, args.runs))
            .collect::<Result<_, _>>()
    })?;

    let graph_id = args
        .graph
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let mut out = String::from("graph,query,run_mean_s,pairs\n");
    for row in rows {
        let _ = writeln!(out, "{graph_id},{},{:.6},{}", row.query, row.mean_s, row.pairs);
    }
    match args.output {
        Some(path) => {
            fs::write(&path, out).map_err(|source| CliError::Io { path, source })?;
            Ok(String::new())
        }
        None => Ok(out),
    }
}

fn cmd_generate(args: GenerateArgs) -> Result<String, CliError> {
    let mut spec = SyntheticSpec::new(args.edges, args.labels, args.seed);
    if let Some(v) = args.vertices {
        spec.vertices = v;
    }
    if !args.label_names.is_empty() {
        spec = spec.with_labels(args.label_names);
    }
    let text = spec.to_text();
    match args.output {
        Some(path) => {
            fs::write(&path, text).map_err(|source| CliError::Io { path, source })?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}
