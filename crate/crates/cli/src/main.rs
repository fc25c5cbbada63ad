use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use balcut::cut_extract::{sparse_cut_or_certify, SparseCutConfig, DEFAULT_C_FACTOR};
use balcut::expander::{ExpanderMode, ExpanderSpec};
use balcut::gen;
use balcut::io::{read_dimacs, read_edge_list, write_edge_list};
use balcut::reductions::low_conductance_cut_or_certify;
use balcut::report::{verify_report, Report};
use balcut::{DijkstraFactory, Error, Graph, OracleFactory};

#[derive(Parser)]
#[command(name = "balcut", version, about = "Balanced sparse cuts or expansion certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated graph as an edge list.
    Gen {
        #[command(subcommand)]
        family: Family,
        #[arg(long, short, global = true)]
        out: Option<PathBuf>,
    },
    /// Find a balanced sparse cut or certify expansion.
    Cut(CutArgs),
    /// Re-check a result file against its graph.
    Verify { graph: PathBuf, result: PathBuf },
    /// Time `cut` on random 4-regular graphs of doubling size; CSV on stdout.
    Bench(BenchArgs),
}

#[derive(Subcommand)]
enum Family {
    /// Two K_k joined by one edge.
    Dumbbell {
        #[arg(long)]
        k: usize,
    },
    Hypercube {
        #[arg(long)]
        d: usize,
    },
    /// Embedding target expander.
    Expander {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value = "rand")]
        mode: ExpanderMode,
        /// Samples per vertex (randomized mode); default ⌈80 ln n⌉.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Two random 4-regular graphs on k vertices joined by `cross` edges.
    Planted {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        cross: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    Regular {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ObjectiveArg {
    Sparsity,
    Conductance,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OracleArg {
    Dijkstra,
}

#[derive(clap::Args)]
struct CutArgs {
    /// Edge list (`n m` header) or DIMACS file.
    graph: PathBuf,
    #[arg(long, value_enum, default_value = "sparsity")]
    objective: ObjectiveArg,
    #[arg(long)]
    psi: Option<f64>,
    #[arg(long)]
    phi: Option<f64>,
    #[arg(long)]
    balance: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value = "dijkstra")]
    oracle: OracleArg,
    #[arg(long, default_value = "rand")]
    expander: ExpanderMode,
    #[arg(long, default_value_t = DEFAULT_C_FACTOR)]
    c_factor: f64,
    /// Record wall-clock time in the report (otherwise 0, keeping output reproducible).
    #[arg(long)]
    timing: bool,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct BenchArgs {
    /// log₂ of the edge counts to run.
    #[arg(long, value_delimiter = ',', default_value = "8,9,10,11,12,13")]
    log_m: Vec<u32>,
    #[arg(long, default_value_t = 0.05)]
    psi: f64,
    #[arg(long, default_value_t = 0.125)]
    balance: f64,
    #[arg(long, default_value = "mgg")]
    expander: ExpanderMode,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_C_FACTOR)]
    c_factor: f64,
}

/// Exit codes: 0 success, 1 verification failed, 2 bad input, 3 invariant violation.
enum Failure {
    Input(String),
    Invariant(String),
    Verify,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Invariant(_) => Failure::Invariant(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn read_graph(path: &Path) -> Result<Graph, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let dimacs = text.lines().any(|l| l.trim_start().starts_with("p "));
    let g = if dimacs { read_dimacs(&text) } else { read_edge_list(&text) };
    g.map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn expander_spec(mode: ExpanderMode, n: usize, seed: u64) -> ExpanderSpec {
    match mode {
        ExpanderMode::Randomized => ExpanderSpec::randomized(n, seed),
        ExpanderMode::Mgg => ExpanderSpec::mgg(n),
    }
}

fn run_gen(family: &Family) -> Result<Graph, Failure> {
    Ok(match *family {
        Family::Dumbbell { k } => gen::gen_dumbbell(k)?,
        Family::Hypercube { d } => gen::gen_hypercube(d)?,
        Family::Expander { n, seed, mode, k } => {
            let mut spec = expander_spec(mode, n, seed);
            if let (ExpanderMode::Randomized, Some(k)) = (mode, k) {
                spec = ExpanderSpec::randomized_with_k(n, k, seed);
            }
            spec.build()?
        }
        Family::Planted { k, cross, seed } => gen::gen_planted(k, cross, seed)?,
        Family::Regular { n, d, seed } => gen::gen_random_regular(n, d, seed)?,
    })
}

fn run_cut(args: &CutArgs) -> Result<Report, Failure> {
    let g = read_graph(&args.graph)?;
    let factory: &dyn OracleFactory = match args.oracle {
        OracleArg::Dijkstra => &DijkstraFactory,
    };
    let start = Instant::now();
    let elapsed = |start: Instant| if args.timing { start.elapsed().as_millis() as u64 } else { 0 };
    match args.objective {
        ObjectiveArg::Sparsity => {
            let psi = args.psi.ok_or_else(|| Failure::Input("--psi is required for the sparsity objective".into()))?;
            if g.n() < 4 {
                return Err(Failure::Input(format!("need at least 4 vertices, got {}", g.n())));
            }
            let config = SparseCutConfig {
                psi,
                b: args.balance,
                c_factor: args.c_factor,
                expander: expander_spec(args.expander, g.n(), args.seed),
            };
            let run = sparse_cut_or_certify(&g, &config, factory)?;
            Ok(Report::from_sparsity_run(&g, &run, args.seed, elapsed(start))?)
        }
        ObjectiveArg::Conductance => {
            let phi = args.phi.ok_or_else(|| Failure::Input("--phi is required for the conductance objective".into()))?;
            if args.expander != ExpanderMode::Randomized {
                return Err(Failure::Input("the conductance objective uses the randomized expander".into()));
            }
            let run = low_conductance_cut_or_certify(&g, phi, args.balance, args.seed, args.c_factor, factory)?;
            Ok(Report::from_conductance_run(&g, &run, args.seed, elapsed(start))?)
        }
    }
}

fn run_verify(graph: &Path, result: &Path) -> Result<(), Failure> {
    let g = read_graph(graph)?;
    let text = fs::read_to_string(result).map_err(|e| Failure::Input(format!("{}: {e}", result.display())))?;
    let report: Report =
        serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", result.display())))?;
    let checks = verify_report(&g, &report)?;
    let mut ok = true;
    for c in &checks {
        println!("{} {}: {}", if c.pass { "ok  " } else { "FAIL" }, c.name, c.detail);
        ok &= c.pass;
    }
    println!("{}", if ok { "PASS" } else { "FAIL" });
    if ok {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}

fn run_bench(args: &BenchArgs) -> Result<(), Failure> {
    println!("n,m,psi,wall_ms,oracle_updates,oracle_queries,kind,c");
    for &lm in &args.log_m {
        let m = 1usize << lm;
        let n = m / 2;
        let g = gen::gen_random_regular(n, 4, args.seed)?;
        let config = SparseCutConfig {
            psi: args.psi,
            b: args.balance,
            c_factor: args.c_factor,
            expander: expander_spec(args.expander, n, args.seed),
        };
        let start = Instant::now();
        let run = sparse_cut_or_certify(&g, &config, &DijkstraFactory)?;
        let wall = start.elapsed().as_secs_f64() * 1e3;
        let report = Report::from_sparsity_run(&g, &run, args.seed, 0)?;
        let ln = (n as f64).ln();
        let c = run.stats.updates as f64 * args.psi / (m as f64 * ln.powi(3));
        println!(
            "{n},{m},{},{wall:.3},{},{},{},{c:.6}",
            args.psi,
            run.stats.updates,
            run.stats.distance_queries + run.stats.path_queries,
            serde_json::to_value(report.kind).expect("serializable").as_str().unwrap_or("?"),
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Gen { family, out } => run_gen(family).and_then(|g| emit(out.as_deref(), &write_edge_list(&g))),
        Command::Cut(args) => run_cut(args).and_then(|r| {
            let mut text = serde_json::to_string_pretty(&r).expect("report serializes");
            text.push('\n');
            emit(args.out.as_deref(), &text)
        }),
        Command::Verify { graph, result } => run_verify(graph, result),
        Command::Bench(args) => run_bench(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Invariant(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
