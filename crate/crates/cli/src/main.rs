//! `uh`: train, evaluate and export embeddings on pseudo-hyperboloids.
//!
//! Exit codes: 0 on success, 1 on usage or input errors, 2 when training
//! diverges.

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};
use ultrahyperbolic::io::{distance_matrix_csv, meta_path, read_embeddings, trace_to_csv, write_embeddings};
use ultrahyperbolic::metrics::{delta_scores, leader_ranks, recall_at_1, spearman_top_k};
use ultrahyperbolic::optim::OptimizerMode;
use ultrahyperbolic::{
    constraint_satisfaction, load_graph, train, Error, NegativeSampling, Signature, TrainingConfig, WeightedGraph,
};

#[derive(Parser)]
#[command(name = "uh", version, about = "Graph embeddings on pseudo-hyperboloids")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Learn node embeddings for a graph.
    Train(TrainArgs),
    /// Print a JSON report of hierarchy and neighbourhood metrics.
    Eval(EvalArgs),
    /// Write the full pairwise dissimilarity matrix as CSV.
    Distances(DistanceArgs),
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Mode {
    Pseudo,
    Phi,
}

#[derive(clap::Args)]
struct TrainArgs {
    /// Edge-list file (`i j capacity` per line).
    #[arg(long)]
    graph: PathBuf,
    /// Treat every edge as capacity 1.
    #[arg(long)]
    unweighted: bool,
    #[arg(long)]
    p: usize,
    #[arg(long)]
    q: usize,
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    beta: f64,
    #[arg(long, default_value_t = 1e-2)]
    tau: f64,
    #[arg(long, default_value_t = 1e-6)]
    eta: f64,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    #[arg(long, default_value_t = 10_000)]
    iters: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Mode::Pseudo)]
    mode: Mode,
    /// Non-edges sampled per iteration; exact weaker sets when omitted.
    #[arg(long)]
    negatives: Option<usize>,
    /// Keep iterating after every constraint holds.
    #[arg(long)]
    no_early_stop: bool,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(clap::Args)]
struct EvalArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    unweighted: bool,
    /// Embeddings CSV written by `train` (its `.meta.json` sidecar is read too).
    #[arg(long)]
    embeddings: PathBuf,
    /// Comma-separated 0-based leader nodes.
    #[arg(long, value_delimiter = ',')]
    leaders: Vec<usize>,
    /// Extra top-k Spearman correlation besides k = 5 and k = 10.
    #[arg(long)]
    top_k: Option<usize>,
}

#[derive(clap::Args)]
struct DistanceArgs {
    #[arg(long)]
    embeddings: PathBuf,
    /// Output CSV; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Diverged(String),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Diverged(m) => f.write_str(m),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Divergence { .. } => Failure::Diverged(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn usage(context: &str, e: impl fmt::Display) -> Failure {
    Failure::Usage(format!("{context}: {e}"))
}

#[derive(Serialize)]
struct InputDigest {
    path: PathBuf,
    sha256: String,
}

#[derive(Serialize)]
struct Outputs {
    embeddings: PathBuf,
    meta: PathBuf,
    trace: PathBuf,
    manifest: PathBuf,
}

#[derive(Serialize)]
struct Timings {
    load_ms: f64,
    train_ms: f64,
    write_ms: f64,
    total_ms: f64,
}

#[derive(Serialize)]
struct RunManifest {
    version: &'static str,
    config: TrainingConfig,
    unweighted: bool,
    inputs: Vec<InputDigest>,
    outputs: Outputs,
    timings: Timings,
    iterations: usize,
    final_loss: Option<f64>,
    converged: bool,
    renormalizations: usize,
    warnings: Vec<String>,
}

#[derive(Serialize)]
struct TopK {
    k: usize,
    rho: Option<f64>,
}

#[derive(Serialize)]
struct EvalReport {
    leader_ranks: Option<Vec<usize>>,
    spearman_top5: Option<f64>,
    spearman_top10: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    spearman_top_k: Option<TopK>,
    recall_at_1: f64,
    constraint_satisfaction: f64,
}

fn millis(since: Instant) -> f64 {
    since.elapsed().as_secs_f64() * 1e3
}

fn threads() -> Result<usize, Failure> {
    match std::env::var("UH_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(Failure::Usage(format!("UH_THREADS must be a positive integer, got {v:?}"))),
        },
        Err(_) => Ok(1),
    }
}

fn read_graph(path: &Path, unweighted: bool) -> Result<(WeightedGraph, Vec<u8>), Failure> {
    let bytes = std::fs::read(path).map_err(|e| usage(&path.display().to_string(), e))?;
    let text = std::str::from_utf8(&bytes).map_err(|e| usage(&path.display().to_string(), e))?;
    let graph = load_graph(text).map_err(|e| usage(&path.display().to_string(), e))?;
    let graph = if unweighted { graph.unweighted() } else { graph };
    Ok((graph, bytes))
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| usage(&path.display().to_string(), e))
}

fn cmd_train(args: TrainArgs) -> Result<(), Failure> {
    let started = Instant::now();
    let signature = Signature::new(args.p, args.q, args.beta)?;
    if args.q == 0 {
        eprintln!("warning: q = 0 is the hyperbolic special case, already covered by hyperbolic embedding methods");
    }
    let config = TrainingConfig {
        temperature: args.tau,
        epsilon: args.epsilon,
        step_size: args.eta,
        max_iterations: args.iters,
        seed: args.seed,
        negatives: args.negatives.map_or(NegativeSampling::All, NegativeSampling::Sampled),
        mode: match args.mode {
            Mode::Pseudo => OptimizerMode::PseudoRiemannian,
            Mode::Phi => OptimizerMode::EuclideanViaPhi,
        },
        stop_when_satisfied: !args.no_early_stop,
        threads: threads()?,
        ..TrainingConfig::new(signature)
    };
    let (graph, bytes) = read_graph(&args.graph, args.unweighted)?;
    let load_ms = millis(started);

    let training = Instant::now();
    let set = train(&graph, &config)?;
    let train_ms = millis(training);
    for w in &set.warnings {
        eprintln!("warning: {w}");
    }

    let writing = Instant::now();
    std::fs::create_dir_all(&args.out).map_err(|e| usage(&args.out.display().to_string(), e))?;
    let outputs = Outputs {
        embeddings: args.out.join("embeddings.csv"),
        meta: meta_path(&args.out.join("embeddings.csv")),
        trace: args.out.join("trace.csv"),
        manifest: args.out.join("manifest.json"),
    };
    write_embeddings(&outputs.embeddings, &set)?;
    write(&outputs.trace, &trace_to_csv(&set.trace))?;
    let write_ms = millis(writing);

    let manifest = RunManifest {
        version: env!("CARGO_PKG_VERSION"),
        config,
        unweighted: args.unweighted,
        inputs: vec![InputDigest {
            path: args.graph.clone(),
            sha256: hex::encode(Sha256::digest(&bytes)),
        }],
        timings: Timings {
            load_ms,
            train_ms,
            write_ms,
            total_ms: millis(started),
        },
        iterations: set.iterations,
        final_loss: set.final_loss.is_finite().then_some(set.final_loss),
        converged: set.converged,
        renormalizations: set.renormalizations,
        warnings: set.warnings.clone(),
        outputs,
    };
    let json = serde_json::to_string_pretty(&manifest).map_err(|e| usage("manifest", e))?;
    write(&manifest.outputs.manifest, &(json + "\n"))?;
    eprintln!(
        "trained {} nodes for {} iterations, final loss {:.6}, converged {}",
        graph.node_count(),
        set.iterations,
        set.final_loss,
        set.converged
    );
    Ok(())
}

fn cmd_eval(args: EvalArgs) -> Result<(), Failure> {
    let (graph, _) = read_graph(&args.graph, args.unweighted)?;
    let (meta, points) =
        read_embeddings(&args.embeddings).map_err(|e| usage(&args.embeddings.display().to_string(), e))?;
    if points.len() != graph.node_count() {
        return Err(Failure::Usage(format!(
            "embeddings have {} rows but the graph has {} nodes",
            points.len(),
            graph.node_count()
        )));
    }
    let sig = meta.signature()?;
    let delta = delta_scores(&sig, &points);
    let scores = graph.scores();
    let leader_ranks = if args.leaders.is_empty() {
        None
    } else {
        Some(leader_ranks(&delta, &args.leaders)?)
    };
    let report = EvalReport {
        leader_ranks,
        spearman_top5: spearman_top_k(&scores, &delta, 5).ok(),
        spearman_top10: spearman_top_k(&scores, &delta, 10).ok(),
        spearman_top_k: args.top_k.map(|k| TopK {
            k,
            rho: spearman_top_k(&scores, &delta, k).ok(),
        }),
        recall_at_1: recall_at_1(&sig, &points, &graph),
        constraint_satisfaction: constraint_satisfaction(&points, &graph),
    };
    let json = serde_json::to_string_pretty(&report).map_err(|e| usage("report", e))?;
    println!("{json}");
    Ok(())
}

fn cmd_distances(args: DistanceArgs) -> Result<(), Failure> {
    let (meta, points) =
        read_embeddings(&args.embeddings).map_err(|e| usage(&args.embeddings.display().to_string(), e))?;
    let csv = distance_matrix_csv(&meta.signature()?, &points);
    match args.out {
        Some(path) => write(&path, &csv),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Train(a) => cmd_train(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Distances(a) => cmd_distances(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Diverged(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
