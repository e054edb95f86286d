use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use precondflow::driver::{solve_min_cost, PipelineConfig};
use precondflow::graph::dimacs::{read_instance, Instance};
use precondflow::oracle::exact_mcf;
use precondflow::{Error, Result};

/// Approximate undirected uncapacitated min-cost flow.
#[derive(Parser)]
#[command(name = "precondflow", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the preconditioned pipeline and print or write the JSON report.
    Solve(SolveArgs),
    /// Exact optimum by successive shortest paths.
    Oracle(InputArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Instance in the `p min` text format.
    #[arg(long)]
    graph: PathBuf,
    /// JSON object of 1-based vertex ids to demands; replaces node lines.
    #[arg(long)]
    demands: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    epsilon: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Lattice depth T.
    #[arg(long)]
    levels: Option<u32>,
    /// Projection dimension k.
    #[arg(long)]
    dim: Option<usize>,
    /// Assumed condition number of the preconditioned system.
    #[arg(long)]
    kappa: Option<f64>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    emit_json: Option<PathBuf>,
    /// Write the reduction chain summary of the snapped demand here.
    #[arg(long)]
    emit_chain: Option<PathBuf>,
    /// Also compute the exact optimum and record the ratio.
    #[arg(long)]
    oracle_check: bool,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| {
        Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
    })
}

fn write(path: &Path, value: &serde_json::Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| {
        Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
    })
}

fn load(args: &InputArgs) -> Result<Instance<f64>> {
    let text = read(&args.graph)?;
    let demands = args.demands.as_deref().map(read).transpose()?;
    read_instance(&text, demands.as_deref())
}

fn solve(args: &SolveArgs) -> Result<()> {
    let inst = load(&args.input)?;
    let cfg = PipelineConfig {
        epsilon: args.epsilon,
        seed: args.seed,
        levels: args.levels,
        dim: args.dim,
        kappa: args.kappa,
        ..PipelineConfig::default()
    };
    let mut report = solve_min_cost(&inst.graph, &inst.demand, &cfg)?;
    if args.oracle_check {
        let opt = exact_mcf(&inst.graph, &inst.demand)?.cost;
        report.attach_oracle(opt);
    }
    for (stage, secs) in &report.timings {
        eprintln!("{stage:>12} {secs:.3}s");
    }
    if let Some(path) = &args.emit_chain {
        let chain = report.chain.clone().unwrap_or(serde_json::Value::Null);
        write(path, &chain)?;
    }
    let json = report.to_json();
    match &args.emit_json {
        Some(path) => {
            write(path, &json)?;
            println!(
                "cost {} dual {} gap {}",
                json["cost"], json["dual_value"], json["gap_ratio"]
            );
        }
        None => println!("{}", serde_json::to_string_pretty(&json)?),
    }
    Ok(())
}

fn oracle(args: &InputArgs) -> Result<()> {
    let inst = load(args)?;
    let sol = exact_mcf(&inst.graph, &inst.demand)?;
    let out = serde_json::json!({ "opt": sol.cost, "method": "successive_shortest_paths" });
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Solve(args) => solve(args),
        Command::Oracle(args) => oracle(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            // input problems exit 2, everything else is a broken contract
            if e.is_input_error() {
                ExitCode::from(2)
            } else {
                ExitCode::from(3)
            }
        }
    }
}
