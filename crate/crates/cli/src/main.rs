//! Command-line front end: simulate, estimate, enumerate, oracle, benchmark.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 on data or model errors.
//! `PLSEM_THREADS` caps the worker threads used by simulation and benchmark
//! runs (default: all cores).

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use plsem::{
    estimators, graph_text, model_file, sim, DataMatrix, EstimationConfig, Plsem, Verdict,
};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "plsem",
    about = "Distribution equivalence classes of partially linear additive SEMs with Gaussian noise",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random model and draw samples from it
    Simulate(SimulateArgs),
    /// Estimate the equivalence class (or its PDAG representative) from data
    Estimate(EstimateArgs),
    /// Shorthand for `estimate --mode enumerate`
    Enumerate(EnumerateArgs),
    /// Exact class computations from a known model file
    Oracle(OracleArgs),
    /// Median estimator runtimes over generated instances
    Benchmark(BenchmarkArgs),
}

fn parse_positive(s: &str) -> Result<usize, String> {
    let v: usize = s.parse().map_err(|_| format!("invalid count {s:?}"))?;
    if v >= 1 {
        Ok(v)
    } else {
        Err("must be at least 1".to_string())
    }
}

fn parse_probability(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("invalid number {s:?}"))?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("{v} is not in [0, 1]"))
    }
}

#[derive(Args)]
struct SimulateArgs {
    /// Number of variables
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    p: u32,
    /// Probability of connecting two nodes
    #[arg(long, value_parser = parse_probability)]
    pc: f64,
    /// Probability that an edge function is linear
    #[arg(long, value_parser = parse_probability)]
    plin: f64,
    /// Number of samples
    #[arg(long, value_parser = parse_positive)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Where to write the model (JSON)
    #[arg(long, value_name = "FILE")]
    out_model: PathBuf,
    /// Where to write the sampled data (CSV)
    #[arg(long, value_name = "FILE")]
    out_data: PathBuf,
    /// Optionally also write the true DAG (graph text)
    #[arg(long, value_name = "FILE")]
    out_dag: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Estimate the maximally oriented PDAG
    Gdpx,
    /// List all DAGs of the class
    Enumerate,
}

#[derive(Args)]
struct EstimateArgs {
    /// Data matrix (CSV with header X1..Xp)
    #[arg(long, value_name = "FILE")]
    data: PathBuf,
    /// Starting DAG (graph text)
    #[arg(long, value_name = "FILE")]
    dag: PathBuf,
    /// Score-gap threshold
    #[arg(long)]
    alpha: f64,
    #[arg(long, value_enum, default_value_t = Mode::Gdpx)]
    mode: Mode,
    /// Basis functions per smooth term
    #[arg(long, default_value_t = 6)]
    basis_dim: usize,
    /// Cap on enumerated DAGs
    #[arg(long, default_value_t = 10_000)]
    cap: usize,
    /// Output file (stdout when omitted)
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Decision log, one line per score test
    #[arg(long, value_name = "FILE")]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long, value_name = "FILE")]
    data: PathBuf,
    #[arg(long, value_name = "FILE")]
    dag: PathBuf,
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value_t = 6)]
    basis_dim: usize,
    #[arg(long, default_value_t = 10_000)]
    cap: usize,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    /// Model file (JSON)
    #[arg(long, value_name = "FILE")]
    model: PathBuf,
    #[arg(long, value_enum, default_value_t = Mode::Gdpx)]
    mode: Mode,
    #[arg(long, default_value_t = 10_000)]
    cap: usize,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchmarkArgs {
    /// Comma-separated node counts, e.g. 10,100,1000
    #[arg(long, value_name = "LIST")]
    p_list: String,
    #[arg(long, value_parser = parse_probability)]
    pc: f64,
    #[arg(long, value_parser = parse_probability)]
    plin: f64,
    #[arg(long, value_parser = parse_positive)]
    n: usize,
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Runs per node count (median is reported)
    #[arg(long, default_value_t = 5)]
    runs: usize,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    ExitCode::SUCCESS
                }
                _ => {
                    eprint!("{e}");
                    ExitCode::from(1)
                }
            };
        }
    };
    init_thread_pool();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}: {e}", e.name());
            ExitCode::from(2)
        }
    }
}

fn init_thread_pool() {
    if let Ok(v) = std::env::var("PLSEM_THREADS") {
        if let Ok(threads) = v.parse::<usize>() {
            if threads >= 1 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build_global();
            }
        }
    }
}

fn emit(out: &Option<PathBuf>, content: &str) -> plsem::Result<()> {
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn dag_list_text(dags: &[plsem::Dag]) -> String {
    let mut s = format!("# {} DAGs\n", dags.len());
    for (k, d) in dags.iter().enumerate() {
        let edges: Vec<String> = d
            .edges()
            .into_iter()
            .map(|(i, j)| format!("{i}->{j}"))
            .collect();
        s.push_str(&format!("dag {}: {}\n", k + 1, edges.join(" ")));
    }
    s
}

fn trace_text(trace: &[estimators::DecisionRecord]) -> String {
    let mut s = String::new();
    for r in trace {
        let verdict = match r.verdict {
            Verdict::Keep => "keep",
            Verdict::Undirect => "undirect",
        };
        s.push_str(&format!(
            "edge {}->{} delta={} verdict={}{}\n",
            r.from,
            r.to,
            r.delta,
            verdict,
            if r.budget_grew { " budget-grew" } else { "" }
        ));
    }
    s
}

fn load_model(path: &Path) -> plsem::Result<Plsem> {
    model_file::read(path)
}

fn run(cli: Cli) -> plsem::Result<()> {
    match cli.command {
        Command::Simulate(a) => {
            let dag = sim::random_dag(a.p, a.pc, plsem::rng::derive_seed(a.seed, 1));
            let model = sim::random_plsem(&dag, a.plin, plsem::rng::derive_seed(a.seed, 2));
            let data = model.sample(a.n, plsem::rng::derive_seed(a.seed, 3));
            model_file::write(&a.out_model, &model)?;
            std::fs::write(&a.out_data, data.to_csv())?;
            if let Some(dag_path) = &a.out_dag {
                std::fs::write(dag_path, graph_text::format_dag(&dag))?;
            }
            Ok(())
        }
        Command::Estimate(a) => estimate(a),
        Command::Enumerate(a) => estimate(EstimateArgs {
            data: a.data,
            dag: a.dag,
            alpha: a.alpha,
            mode: Mode::Enumerate,
            basis_dim: a.basis_dim,
            cap: a.cap,
            out: a.out,
            trace: a.trace,
        }),
        Command::Oracle(a) => {
            let model = load_model(&a.model)?;
            match a.mode {
                Mode::Gdpx => {
                    let g = plsem::oracle_gdpx(&model);
                    emit(&a.out, &graph_text::format_pdag(&g))
                }
                Mode::Enumerate => {
                    let dags = plsem::oracle_enumerate(&model, a.cap)?;
                    emit(&a.out, &dag_list_text(&dags))
                }
            }
        }
        Command::Benchmark(a) => {
            let p_list = a
                .p_list
                .split(',')
                .map(|tok| {
                    tok.trim()
                        .parse::<u32>()
                        .ok()
                        .filter(|&p| p >= 1)
                        .ok_or_else(|| plsem::Error::Parse(format!("invalid p value {tok:?}")))
                })
                .collect::<plsem::Result<Vec<u32>>>()?;
            let rows =
                sim::benchmark_timing(&p_list, |_| a.pc, a.plin, a.n, a.alpha, a.seed, a.runs)?;
            emit(&a.out, &sim::timing_csv(&rows))
        }
    }
}

fn estimate(a: EstimateArgs) -> plsem::Result<()> {
    let data = DataMatrix::from_csv(&std::fs::read_to_string(&a.data)?)?;
    let d0 = graph_text::parse_dag(&std::fs::read_to_string(&a.dag)?)?;
    let cfg = EstimationConfig {
        alpha: a.alpha,
        basis: plsem::BasisConfig::with_dim(a.basis_dim),
        cap: a.cap,
    };
    let result = match a.mode {
        Mode::Gdpx => estimators::compute_gdpx(&data, &d0, &cfg)?,
        Mode::Enumerate => estimators::list_all_dags_plsem(&data, &d0, &cfg)?,
    };
    if let Some(trace_path) = &a.trace {
        std::fs::write(trace_path, trace_text(&result.trace))?;
    }
    match (result.gdpx, result.dags) {
        (Some(g), _) => emit(&a.out, &graph_text::format_pdag(&g)),
        (None, Some(dags)) => emit(&a.out, &dag_list_text(&dags)),
        (None, None) => unreachable!("estimator returned no result"),
    }
}
