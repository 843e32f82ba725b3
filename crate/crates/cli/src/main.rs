//! Command-line front end.
//!
//! Every subcommand writes exactly one JSON document to stdout and is
//! deterministic given its full flag set; human-readable diagnostics go to
//! stderr. Failures print a machine-readable `{"error": ...}` document and
//! exit nonzero.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use netrel::estimator::{self, SweepConfig};
use netrel::graph::{self, Network};
use netrel::resources;

#[derive(Parser)]
#[command(
    name = "netrel",
    version,
    about = "Network reliability of probabilistic graphs: exact enumeration, \
             circuit simulation, sampling, and gate-count estimates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GraphArgs {
    /// Path to the graph JSON document.
    #[arg(long)]
    graph: PathBuf,
    /// Root node for the reachability condition.
    #[arg(long, default_value_t = 0)]
    root: usize,
    /// Nodes that must be reachable from the root; defaults to all of them.
    #[arg(long)]
    terminals: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Exact reliability by exhaustive configuration enumeration.
    Exact {
        #[command(flatten)]
        graph: GraphArgs,
    },
    /// Reliability read off the label-qubit marginal of one simulated run.
    Simulate {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Reliability estimated from repeated simulated shots.
    Sample {
        #[command(flatten)]
        graph: GraphArgs,
        /// Number of independent shots.
        #[arg(long)]
        shots: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Cross-validate the simulator against the enumeration oracle on
    /// random instances; exits nonzero when the sweep fails.
    Verify {
        #[arg(long, default_value_t = 5)]
        max_nodes: usize,
        #[arg(long, default_value_t = 7)]
        max_edges: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Closed-form CNOT/T gate counts and qubit budget.
    Resources {
        /// Number of edges.
        #[arg(long)]
        edges: u64,
        /// Number of nodes.
        #[arg(long)]
        nodes: u64,
        /// Terminal count of the reliability condition.
        #[arg(long)]
        terminals: u64,
        /// Target accuracy of the reliability estimate.
        #[arg(long)]
        epsilon: f64,
    },
}

#[derive(Serialize)]
struct ExactOutput {
    reliability: f64,
    method: &'static str,
    configs: u64,
}

#[derive(Serialize)]
struct ErrorBody {
    kind: String,
    message: String,
}

#[derive(Serialize)]
struct ErrorOutput {
    error: ErrorBody,
}

struct Failure {
    kind: String,
    message: String,
}

impl Failure {
    fn new(kind: &str, message: String) -> Self {
        Failure {
            kind: kind.to_string(),
            message,
        }
    }
}

impl From<graph::GraphError> for Failure {
    fn from(err: graph::GraphError) -> Self {
        Failure::new(err.kind(), err.to_string())
    }
}

impl From<estimator::EstimatorError> for Failure {
    fn from(err: estimator::EstimatorError) -> Self {
        Failure::new(err.kind(), err.to_string())
    }
}

impl From<resources::ResourceError> for Failure {
    fn from(err: resources::ResourceError) -> Self {
        Failure::new(err.kind(), err.to_string())
    }
}

fn load_graph(args: &GraphArgs) -> Result<(Network, usize, usize), Failure> {
    let text = fs::read_to_string(&args.graph).map_err(|err| {
        Failure::new(
            "io",
            format!("cannot read {}: {err}", args.graph.display()),
        )
    })?;
    let net = graph::parse_network(&text)?;
    let terminals = args.terminals.unwrap_or(net.num_nodes());
    Ok((net, args.root, terminals))
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("output types serialize infallibly")
}

/// Runs one subcommand; `Ok` carries the JSON document and the exit status.
fn run(command: Command) -> Result<(String, ExitCode), Failure> {
    match command {
        Command::Exact { graph: args } => {
            let (net, root, terminals) = load_graph(&args)?;
            let reliability = graph::exact_reliability(&net, root, terminals)?;
            let output = ExactOutput {
                reliability,
                method: "enumeration",
                configs: 1u64 << net.num_edges(),
            };
            Ok((to_json(&output), ExitCode::SUCCESS))
        }
        Command::Simulate { graph: args, seed } => {
            let (net, root, terminals) = load_graph(&args)?;
            let estimate =
                estimator::quantum_reliability_exact_readout(&net, root, terminals, seed)?;
            Ok((to_json(&estimate), ExitCode::SUCCESS))
        }
        Command::Sample {
            graph: args,
            shots,
            seed,
        } => {
            let (net, root, terminals) = load_graph(&args)?;
            let estimate =
                estimator::quantum_reliability_sampled(&net, root, terminals, shots, seed)?;
            Ok((to_json(&estimate), ExitCode::SUCCESS))
        }
        Command::Verify {
            max_nodes,
            max_edges,
            trials,
            tolerance,
            seed,
        } => {
            let config = SweepConfig {
                max_nodes,
                max_edges,
                trials,
                tolerance,
                seed,
                ..SweepConfig::default()
            };
            let report = estimator::verify_sweep(&config)?;
            let status = if report.summary.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            };
            if !report.summary.passed {
                eprintln!(
                    "verification failed: max deviation {} over tolerance {}, {} reachability mismatches",
                    report.summary.max_deviation,
                    report.summary.tolerance,
                    report.summary.reachability_failures,
                );
            }
            Ok((to_json(&report), status))
        }
        Command::Resources {
            edges,
            nodes,
            terminals,
            epsilon,
        } => {
            let estimate = resources::resource_estimate(edges, nodes, terminals, epsilon)?;
            Ok((to_json(&estimate), ExitCode::SUCCESS))
        }
    }
}

/// Writes the output document; a closed pipe downstream is not an error.
fn emit(document: &str) -> ExitCode {
    use std::io::{ErrorKind, Write};
    let stdout = std::io::stdout();
    let mut handle = stdout.lock();
    match writeln!(handle, "{document}").and_then(|()| handle.flush()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) if err.kind() == ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: cannot write output: {err}");
            ExitCode::FAILURE
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((document, status)) => {
            let emitted = emit(&document);
            if emitted == ExitCode::SUCCESS {
                status
            } else {
                emitted
            }
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            let output = ErrorOutput {
                error: ErrorBody {
                    kind: failure.kind,
                    message: failure.message,
                },
            };
            emit(&to_json(&output));
            ExitCode::FAILURE
        }
    }
}
