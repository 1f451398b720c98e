use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use nsd22::bench::{self, BenchSpec};
use nsd22::dcs::DcsOptions;
use nsd22::graph::{load_edge_list, Graph};
use nsd22::verify;
use nsd22::weighter::{self, Certificate, PipelineParams};
use nsd22::Rational;

#[derive(Parser)]
#[command(name = "nsd22", version, about = "Decompose graphs into two {1,2}-weight colourable subgraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a graph as an edge list.
    Gen {
        #[command(subcommand)]
        family: Family,
    },
    /// Decompose a graph and write a certificate.
    Decompose(DecomposeArgs),
    /// Re-check a weighting or a certificate.
    Verify {
        #[command(subcommand)]
        what: VerifyCmd,
    },
    /// Exhaustive search on small graphs.
    Brute {
        #[command(subcommand)]
        what: BruteCmd,
    },
    /// Run the pipeline over a grid of random regular graphs.
    Bench(BenchArgs),
}

#[derive(Subcommand)]
enum Family {
    Complete {
        #[arg(long)]
        k: usize,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    Gnp {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    Regular {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    Bipartite {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        /// Edge probability; 1 gives the complete bipartite graph.
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short)]
        o: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Pipeline,
    Knsq,
    Chromatic,
    Euler,
}

#[derive(Args)]
struct DcsFlags {
    /// Local-search moves per restart.
    #[arg(long, default_value_t = 1_000_000)]
    dcs_budget: u64,
    #[arg(long, default_value_t = 1)]
    dcs_restarts: usize,
    /// Edge count up to which the DCS is solved by complete search.
    #[arg(long, default_value_t = 30)]
    dcs_exact: usize,
}

impl DcsFlags {
    fn options(&self, seed: u64) -> DcsOptions {
        DcsOptions {
            exact_threshold: self.dcs_exact,
            budget: self.dcs_budget,
            restarts: self.dcs_restarts,
            seed,
            ..DcsOptions::default()
        }
    }
}

#[derive(Args)]
struct DecomposeArgs {
    #[arg(long, value_enum, default_value_t = Mode::Pipeline)]
    mode: Mode,
    /// Edge-list file.
    graph: PathBuf,
    /// Order for `knsq` mode; the graph must be the complete graph on n² vertices.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value = "9/20")]
    q: Rational,
    #[arg(long, default_value_t = 18)]
    t: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    max_rounds: Option<u64>,
    #[command(flatten)]
    dcs: DcsFlags,
    /// Write the sampled pair assignment here (pipeline mode).
    #[arg(long)]
    dump_assignment: Option<PathBuf>,
    #[arg(short)]
    o: Option<PathBuf>,
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Check a weighting file of `edge weight` lines.
    Nsd { graph: PathBuf, weights: PathBuf },
    /// Check a certificate.
    Cert { graph: PathBuf, cert: PathBuf },
}

#[derive(Subcommand)]
enum BruteCmd {
    /// First NSD weighting with weights 1..=k, or "none".
    Nsd {
        #[arg(long)]
        k: u64,
        graph: PathBuf,
        /// Largest k^m searched.
        #[arg(long, default_value_t = verify::DEFAULT_BRUTE_LIMIT)]
        brute_threshold: u64,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// First decomposition into two {1,2}-weight colourable subgraphs, or "none".
    Std22 {
        graph: PathBuf,
        #[arg(short)]
        o: Option<PathBuf>,
    },
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "200")]
    n: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "96")]
    d: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "9/20")]
    q: Vec<Rational>,
    #[arg(long, value_delimiter = ',', default_value = "2")]
    t: Vec<u64>,
    #[arg(long, default_value_t = 1)]
    replicates: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    max_rounds: Option<u64>,
    #[command(flatten)]
    dcs: DcsFlags,
    #[arg(short)]
    o: Option<PathBuf>,
}

/// A failure that is not a negative check result.
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

type Outcome = Result<bool, UsageError>;

fn read(path: &Path) -> Result<String, UsageError> {
    fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Result<Graph, UsageError> {
    load_edge_list(&read(path)?).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), UsageError> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| UsageError(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn gen(family: Family) -> Outcome {
    let (g, o) = match family {
        Family::Complete { k, o } => (Graph::complete(k), o),
        Family::Gnp { n, p, seed, o } => (Graph::gnp(n, p, seed), o),
        Family::Regular { n, d, seed, o } => (Graph::random_regular(n, d, seed)?, o),
        Family::Bipartite { a, b, p, seed, o } => {
            let g = if p >= 1.0 { Graph::complete_bipartite(a, b) } else { Graph::random_bipartite(a, b, p, seed) };
            (g, o)
        }
    };
    emit(o.as_deref(), &g.to_edge_list())?;
    Ok(true)
}

fn decompose(args: DecomposeArgs) -> Outcome {
    let g = read_graph(&args.graph)?;
    let opts = args.dcs.options(args.seed);
    let cert = match args.mode {
        Mode::Pipeline => {
            let params = PipelineParams {
                q: args.q,
                t: args.t,
                seed: args.seed,
                max_rounds: args.max_rounds,
                dcs: opts,
                record_log: false,
            };
            let run = weighter::full_pipeline(&g, &params);
            for w in &run.report.warnings {
                eprintln!("warning: {w}");
            }
            if let Some(r) = &run.report.lll {
                eprintln!(
                    "resample: {} rounds, {} A / {} B events violated",
                    r.iterations,
                    r.violated_a.len(),
                    r.violated_b.len()
                );
            }
            if let Some(b) = run.report.balance_held {
                eprintln!("balance d_Gi(v) >= q d(v): {}", if b { "held" } else { "violated" });
            }
            if let (Some(path), Some(pa)) = (&args.dump_assignment, &run.pairs) {
                fs::write(path, pa.to_text()).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
            }
            run.certificate
        }
        Mode::Knsq => {
            let n = args.n.ok_or_else(|| UsageError("--mode knsq needs --n".into()))?;
            if g != Graph::complete(n * n) {
                return Err(UsageError(format!("graph is not the complete graph on {} vertices", n * n)));
            }
            weighter::knsq_certificate(n, &opts)?.1
        }
        Mode::Chromatic => match weighter::chromatic_shortcut(&g, &opts) {
            Ok(w) => w.to_certificate(&g),
            Err(e) => Certificate::failed(&g, None, "chromatic", e.to_string()),
        },
        Mode::Euler => weighter::euler_certificate(&g, &opts),
    };
    emit(args.o.as_deref(), &cert.to_text())?;
    eprintln!("verdict: {}", cert.verdict);
    Ok(cert.verdict.is_valid())
}

fn verify_cmd(what: VerifyCmd) -> Outcome {
    match what {
        VerifyCmd::Nsd { graph, weights } => {
            let g = read_graph(&graph)?;
            let w = verify::parse_weights(&read(&weights)?, g.edge_count())?;
            let check = verify::verify_nsd(&g, &w)?;
            if check.ok {
                println!("ok");
            } else {
                for e in &check.conflicts {
                    let (u, v) = g.endpoints(*e);
                    println!("conflict edge {e} ({u}, {v}) sum {}", check.sums[u]);
                }
            }
            Ok(check.ok)
        }
        VerifyCmd::Cert { graph, cert } => {
            let g = read_graph(&graph)?;
            let cert = Certificate::parse(&read(&cert)?)?;
            let check = verify::verify_certificate(&g, &cert)?;
            match &check.failure {
                None => println!("ok"),
                Some(f) => println!("{f}"),
            }
            Ok(check.ok)
        }
    }
}

fn brute(what: BruteCmd) -> Outcome {
    match what {
        BruteCmd::Nsd { k, graph, brute_threshold, o } => {
            let g = read_graph(&graph)?;
            match verify::brute_force_nsd(&g, k, brute_threshold)? {
                Some(w) => {
                    emit(o.as_deref(), &verify::weights_to_text(&w))?;
                    Ok(true)
                }
                None => {
                    println!("none");
                    Ok(false)
                }
            }
        }
        BruteCmd::Std22 { graph, o } => {
            let g = read_graph(&graph)?;
            match verify::brute_force_22(&g)? {
                Some(cert) => {
                    emit(o.as_deref(), &cert.to_text())?;
                    Ok(true)
                }
                None => {
                    println!("none");
                    Ok(false)
                }
            }
        }
    }
}

fn bench_cmd(args: BenchArgs) -> Outcome {
    let spec = BenchSpec {
        ns: args.n,
        ds: args.d,
        qs: args.q,
        ts: args.t,
        replicates: args.replicates,
        seed: args.seed,
        max_rounds: args.max_rounds,
        dcs: args.dcs.options(0),
    };
    let rows = bench::run_bench(&spec);
    emit(args.o.as_deref(), &bench::format_table(&rows))?;
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Gen { family } => gen(family),
        Command::Decompose(args) => decompose(args),
        Command::Verify { what } => verify_cmd(what),
        Command::Brute { what } => brute(what),
        Command::Bench(args) => bench_cmd(args),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
