use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qpebble::analysis::{bound_report, check_impossibility, compare_single_vs_per_node_eps, DEFAULT_EPS};
use qpebble::encoding::EncodingScheme;
use qpebble::graph::serialize_graph;
use qpebble::harness::{
    load_graph, run_experiment, sweep, write_sweep_csv, ExperimentConfig, GeneratorSpec, GraphSource,
    HarnessError, StrategySpec, SweepAxis,
};

#[derive(Parser)]
#[command(name = "qpebble", version, about = "Quantum-pebble treasure hunt simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run seeded trials and report per-trial records plus a summary.
    Simulate(SimulateArgs),
    /// Repeat `simulate` over values of n, D or delta.
    Sweep(SweepArgs),
    /// Closed-form guarantee of the fixed-n protocol.
    Bound {
        #[arg(long = "D")]
        d: usize,
        #[arg(long)]
        delta: usize,
        #[arg(long, default_value_t = DEFAULT_EPS)]
        eps: f64,
        /// Samples per basis; defaults to the required n.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Per-node encoding against one qubit for the whole path.
    CompareFullpath {
        #[arg(long = "D")]
        d: usize,
        #[arg(long)]
        delta: usize,
        #[arg(long, default_value_t = DEFAULT_EPS)]
        eps: f64,
    },
    /// Exhaustive check that no classical oblivious table works.
    Impossible {
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Write a generated graph in the text format.
    GenGraph {
        /// `path:D=..,delta=..` or `gadget:INDEX`.
        #[arg(long = "gen")]
        generator: GeneratorSpec,
        #[arg(long, env = "QPEBBLE_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// JSON file with ExperimentConfig fields; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Graph generator, e.g. `path:D=10,delta=4`.
    #[arg(long = "gen", conflicts_with = "graph")]
    generator: Option<GeneratorSpec>,
    /// Graph file.
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long)]
    scheme: Option<EncodingScheme>,
    /// fixed:auto | fixed:N | adaptive:auto | adaptive:N | qudit | random-walk
    #[arg(long)]
    strategy: Option<StrategySpec>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, env = "QPEBBLE_SEED")]
    seed: Option<u64>,
    #[arg(long)]
    step_budget: Option<usize>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    run: RunArgs,
    #[arg(long)]
    axis: SweepAxis,
    /// Comma-separated values.
    #[arg(long, value_delimiter = ',')]
    values: Vec<usize>,
}

enum Failure {
    Assertion(String),
    Usage(String),
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn build_config(a: &RunArgs) -> Result<ExperimentConfig, Failure> {
    let base = match &a.config {
        Some(path) => Some(ExperimentConfig::from_json(&std::fs::read_to_string(path)?)?),
        None => None,
    };
    let graph_source = match (&a.generator, &a.graph, &base) {
        (Some(g), _, _) => GraphSource::Generator(*g),
        (None, Some(p), _) => GraphSource::File(p.clone()),
        (None, None, Some(b)) => b.graph_source.clone(),
        (None, None, None) => return Err(Failure::Usage("need --gen, --graph or --config".into())),
    };
    let mut cfg = ExperimentConfig::new(
        graph_source,
        a.scheme
            .or(base.as_ref().map(|b| b.scheme))
            .unwrap_or(EncodingScheme::General),
        a.strategy
            .or(base.as_ref().map(|b| b.strategy))
            .unwrap_or(StrategySpec::Fixed(None)),
        a.trials.or(base.as_ref().map(|b| b.trials)).unwrap_or(1000),
        a.seed.or(base.as_ref().map(|b| b.seed)).unwrap_or(0),
    );
    cfg.step_budget = a.step_budget.or(base.as_ref().and_then(|b| b.step_budget));
    cfg.eps = a.eps.or(base.as_ref().map(|b| b.eps)).unwrap_or(DEFAULT_EPS);
    cfg.threads = a.threads.or(base.as_ref().and_then(|b| b.threads));
    cfg.validate()?;
    Ok(cfg)
}

fn output(out: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn print_json<T: serde::Serialize>(v: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(v).map_err(|e| Failure::Usage(e.to_string()))?;
    println!("{text}");
    Ok(())
}

fn simulate(a: &SimulateArgs) -> Result<(), Failure> {
    let cfg = build_config(&a.run)?;
    let exp = run_experiment(&cfg)?;
    let mut w = output(&a.run.out)?;
    match a.run.format {
        Format::Csv => {
            exp.write_csv(&mut w)?;
            w.flush()?;
            drop(w);
            let summary = serde_json::to_string_pretty(&exp.summary).map_err(|e| Failure::Usage(e.to_string()))?;
            if a.run.out.is_some() {
                println!("{summary}");
            } else {
                eprintln!("{summary}");
            }
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, &exp).map_err(|e| Failure::Usage(e.to_string()))?;
            writeln!(w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn run_sweep(a: &SweepArgs) -> Result<(), Failure> {
    let cfg = build_config(&a.run)?;
    let rows = sweep(&cfg, a.axis, &a.values)?;
    let mut w = output(&a.run.out)?;
    match a.run.format {
        Format::Csv => write_sweep_csv(&rows, &mut w)?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, &rows).map_err(|e| Failure::Usage(e.to_string()))?;
            writeln!(w)?;
        }
    }
    w.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Simulate(a) => simulate(&a),
        Command::Sweep(a) => run_sweep(&a),
        Command::Bound { d, delta, eps, n } => {
            let r = bound_report(d, delta, n, eps).map_err(|e| Failure::Usage(e.to_string()))?;
            print_json(&r)
        }
        Command::CompareFullpath { d, delta, eps } => {
            let r = compare_single_vs_per_node_eps(d, delta, eps).map_err(|e| Failure::Usage(e.to_string()))?;
            print_json(&r)?;
            if r.full_path_not_better {
                Ok(())
            } else {
                Err(Failure::Assertion("full-path total below per-node total".into()))
            }
        }
        Command::Impossible { format } => {
            let r = check_impossibility();
            match format {
                Format::Json => print_json(&r)?,
                Format::Csv => {
                    println!("{}/{} decision tables defeated", r.defeated, r.tables);
                    match r.universal_witness {
                        Some(g) => println!("gadget {g} defeats every table"),
                        None => println!("no single gadget defeats every table"),
                    }
                    println!("longest walk prefix: {}", r.max_walk_len);
                }
            }
            if r.pass {
                Ok(())
            } else {
                Err(Failure::Assertion(format!(
                    "only {}/{} decision tables defeated",
                    r.defeated, r.tables
                )))
            }
        }
        Command::GenGraph { generator, seed, out } => {
            let g = load_graph(&GraphSource::Generator(generator), seed)?;
            let mut w = output(&out)?;
            w.write_all(serialize_graph(&g).as_bytes())?;
            w.flush()?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Assertion(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
