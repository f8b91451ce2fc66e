mod selftest;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use nzflow::certificate::{replay, Certificate};
use nzflow::oracle::{
    brute_flow_admissible, generate_3ec_signed, generate_cubic_3ec_signed, named_instance, nz_kflow_exists, OracleVerdict,
    SearchBudget,
};
use nzflow::pipeline::{synthesize, SynthesisOptions};
use nzflow::sigraph::format::{parse_flow, parse_sg, serialize_flow, serialize_sg};
use nzflow::sigraph::{
    edge_connectivity, is_balanced, is_flow_admissible, negativeness_at_most, verify_flow, Admissibility, FlowVerdict,
};
use nzflow::structure::{
    contains_unbalanced_theta, find_two_disjoint_negative_cycles, is_fragile, recognize_fish, DisjointPair,
    CYCLE_LIMIT,
};
use nzflow::{Error, Orientation, SignedGraph};

#[derive(Parser)]
#[command(name = "nzflow", version, about = "Nowhere-zero 8-flows on signed graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report balance, negativeness, connectivity and structure of a graph.
    Analyze { graph: PathBuf },
    /// Build a nowhere-zero 8-flow and its certificate.
    Synthesize {
        graph: PathBuf,
        /// Flow output; stdout when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        cert: Option<PathBuf>,
        /// Recorded in the trace; synthesis itself is deterministic.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Fail with exit code 3 instead of searching when the construction
        /// does not apply.
        #[arg(long)]
        no_fallback: bool,
        #[arg(long, default_value_t = 50_000_000)]
        budget: u64,
    },
    /// Check a flow file.
    Verify {
        graph: PathBuf,
        flow: PathBuf,
        #[arg(long)]
        k: i64,
    },
    /// Re-check a certificate against its input without searching.
    Replay { graph: PathBuf, cert: PathBuf },
    /// Exhaustive search for a nowhere-zero k-flow.
    Oracle {
        graph: PathBuf,
        #[arg(long)]
        k: i64,
        #[arg(long, default_value_t = 200_000_000)]
        budget: u64,
        /// Threads splitting the search at the root.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Random 3-edge-connected signed graph, or a named instance.
    Generate {
        #[arg(long, required_unless_present = "named")]
        n: Option<usize>,
        #[arg(long, required_unless_present = "named")]
        seed: Option<u64>,
        /// `prism-neg`, `k4`, `triple-edge`, `fish(M)` or `petersen(MASK)`.
        #[arg(long, conflicts_with_all = ["n", "seed", "require_two_negative", "max_degree"])]
        named: Option<String>,
        /// Keep only flow-admissible graphs with two disjoint negative cycles.
        #[arg(long = "require-2-neg")]
        require_two_negative: bool,
        /// Contract edges of the cubic graph up to this degree (implies
        /// --require-2-neg).
        #[arg(long)]
        max_degree: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Exhaustive and sampled checks on small graphs.
    Selftest {
        #[arg(long, default_value_t = 8)]
        max_n: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. }
            | Error::Consistency { .. }
            | Error::UnknownVertex(_)
            | Error::UnknownEdge(_)
            | Error::Argument(_)
            | Error::Io(_) => 2,
            Error::Unsupported(_) => 3,
            Error::Contract(_) | Error::Invariant(_) | Error::Budget(_) => 1,
        };
        Failure::new(code, e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure::new(1, format!("{}: {e}", path.display())))
}

fn emit(path: Option<&Path>, text: &str) -> Outcome {
    match path {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Graph plus its stored orientation, or the canonical one.
fn load_graph(path: &Path) -> Result<(SignedGraph, Orientation), Failure> {
    let (g, o) = parse_sg(&read(path)?).map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))?;
    let o = o.unwrap_or_else(|| Orientation::canonical(&g));
    o.check(&g)?;
    Ok((g, o))
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn analyze(path: &Path) -> Outcome {
    let (g, _) = load_graph(path)?;
    println!("vertices {}", g.vertex_count());
    println!("edges {}", g.edge_count());
    println!("balance {}", if is_balanced(&g) { "balanced" } else { "unbalanced" });
    let neg = (0..=1u8).find(|&k| negativeness_at_most(&g, k));
    println!("negativeness {}", neg.map_or("2+".to_string(), |k| k.to_string()));
    println!("edge-connectivity {}", edge_connectivity(&g));
    println!("max-degree {}", g.max_degree());
    if g.is_subcubic() {
        println!("unbalanced-theta {}", yes(contains_unbalanced_theta(&g)));
        println!("fragile {}", yes(is_fragile(&g)));
    } else {
        println!("unbalanced-theta n/a");
        println!("fragile n/a");
    }
    match recognize_fish(&g) {
        Some(f) => println!("fish recognized distinguished {}", f.distinguished),
        None => println!("fish no"),
    }
    let pair = match find_two_disjoint_negative_cycles(&g, true, CYCLE_LIMIT) {
        DisjointPair::Found(..) => "yes",
        DisjointPair::None => "no",
        DisjointPair::Unknown => "unknown",
    };
    println!("disjoint-negative-cycles {pair}");
    let adm = match is_flow_admissible(&g) {
        Admissibility::Admissible => "yes",
        Admissibility::NotAdmissible => "no",
        Admissibility::NeedsOracle => match brute_flow_admissible(&g, SearchBudget::nodes(20_000_000)) {
            Some(true) => "yes",
            Some(false) => "no",
            None => "unknown",
        },
    };
    println!("flow-admissible {adm}");
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn run_synthesize(
    path: &Path,
    output: Option<&Path>,
    trace: Option<&Path>,
    cert: Option<&Path>,
    seed: u64,
    no_fallback: bool,
    budget: u64,
) -> Outcome {
    let (g, o) = load_graph(path)?;
    let opts = SynthesisOptions { budget: SearchBudget::nodes(budget), oracle_fallback: !no_fallback };
    let s = synthesize(&g, &o, &opts)?;
    eprintln!("route {}", s.certificate.solution.routes().join(" "));
    if let Some(t) = trace {
        let mut lines = vec![format!("seed {seed}")];
        lines.extend(s.trace.iter().cloned());
        lines.push(String::new());
        write(t, &lines.join("\n"))?;
    }
    if let Some(c) = cert {
        write(c, &s.certificate.to_text())?;
    }
    emit(output, &serialize_flow(&s.flow))
}

fn run_verify(graph: &Path, flow: &Path, k: i64) -> Outcome {
    let (g, o) = load_graph(graph)?;
    let f = parse_flow(&read(flow)?).map_err(|e| Failure::new(2, format!("{}: {e}", flow.display())))?;
    match verify_flow(&g, &o, &f, k) {
        FlowVerdict::Accept => {
            println!("accept");
            Ok(())
        }
        FlowVerdict::Reject(v) => Err(Failure::new(1, format!("reject: {v}"))),
    }
}

fn run_replay(graph: &Path, cert: &Path) -> Outcome {
    let (g, o) = load_graph(graph)?;
    let c = Certificate::parse(&read(cert)?).map_err(|e| Failure::new(2, format!("{}: {e}", cert.display())))?;
    let report = replay(&g, &o, &c);
    for line in report.lines() {
        println!("{line}");
    }
    if report.passed() {
        println!("replay ok");
        Ok(())
    } else {
        Err(Failure::new(1, "replay failed"))
    }
}

fn run_oracle(graph: &Path, k: i64, budget: u64, jobs: usize) -> Outcome {
    let (g, o) = load_graph(graph)?;
    if k < 2 {
        return Err(Failure::new(2, "k must be at least 2"));
    }
    let budget = SearchBudget { nodes: budget, time: None, width: jobs.max(1) };
    match nz_kflow_exists(&g, &o, k, budget) {
        OracleVerdict::Yes(f) => {
            println!("yes");
            print!("{}", serialize_flow(&f));
            Ok(())
        }
        OracleVerdict::No => {
            println!("no");
            Err(Failure::new(1, format!("no nowhere-zero {k}-flow")))
        }
        OracleVerdict::Unknown => {
            println!("unknown");
            Err(Failure::new(1, "search budget exhausted"))
        }
    }
}

fn run_generate(
    n: Option<usize>,
    seed: Option<u64>,
    named: Option<&str>,
    require: bool,
    max_degree: Option<usize>,
    output: Option<&Path>,
) -> Outcome {
    let g = match (named, n, seed) {
        (Some(name), _, _) => named_instance(name)?,
        (None, Some(n), Some(seed)) => match max_degree {
            Some(d) => generate_3ec_signed(n, d, seed)?,
            None => generate_cubic_3ec_signed(n, seed, require)?,
        },
        _ => return Err(Failure::new(2, "generate needs --n and --seed, or --named")),
    };
    emit(output, &serialize_sg(&g, None))
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Analyze { graph } => analyze(&graph),
        Command::Synthesize { graph, output, trace, cert, seed, no_fallback, budget } => run_synthesize(
            &graph,
            output.as_deref(),
            trace.as_deref(),
            cert.as_deref(),
            seed,
            no_fallback,
            budget,
        ),
        Command::Verify { graph, flow, k } => run_verify(&graph, &flow, k),
        Command::Replay { graph, cert } => run_replay(&graph, &cert),
        Command::Oracle { graph, k, budget, jobs } => run_oracle(&graph, k, budget, jobs),
        Command::Generate { n, seed, named, require_two_negative, max_degree, output } => {
            run_generate(n, seed, named.as_deref(), require_two_negative, max_degree, output.as_deref())
        }
        Command::Selftest { max_n, samples, seed, jobs } => {
            if selftest::run(max_n, samples, seed, jobs) {
                Ok(())
            } else {
                Err(Failure::new(1, "selftest failed"))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("nzflow: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
