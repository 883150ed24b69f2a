//! Batch study runner over the placement library. Flags override the JSON
//! config document; with no arguments the bundled 20-node instance is solved
//! for every approach at 1, 10 and 25 Mbps.

use clap::Parser;
use cloudfog::report::{run, RunConfig, SolverChoice};
use cloudfog::scenario::Mode;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "cloudfog", version, about = "Energy-optimal VM placement studies")]
struct Args {
    /// JSON run configuration (flags below override its fields).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Topology document path (default: bundled 20-node instance).
    #[arg(long)]
    topology: Option<PathBuf>,
    /// Placement approach: sc, oc, ocf or all.
    #[arg(long)]
    mode: Option<String>,
    /// User data rate in Mbps: 1, 10, 25 or all.
    #[arg(long)]
    rate: Option<String>,
    /// Solver: bnb, greedy, export or brute.
    #[arg(long)]
    solver: Option<SolverArg>,
    /// Per-server power in Watts (catalog override).
    #[arg(long)]
    server_power: Option<f64>,
    /// Relative optimality gap at which branch-and-bound stops.
    #[arg(long)]
    gap: Option<f64>,
    /// Wall-clock limit per scenario in seconds (0 disables).
    #[arg(long)]
    time_limit: Option<f64>,
    /// Branch-and-bound node limit per scenario (0 disables).
    #[arg(long)]
    node_limit: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed echoed into outputs (used by test-instance generation).
    #[arg(long)]
    seed: Option<u64>,
    /// Keep the constant ONU floor inside savings comparisons.
    #[arg(long)]
    include_onu_in_savings: bool,
}

#[derive(Clone, Copy, Debug, clap::ValueEnum)]
enum SolverArg {
    Bnb,
    Greedy,
    Export,
    Brute,
}

fn parse_modes(text: &str) -> Result<Vec<Mode>, String> {
    if text.eq_ignore_ascii_case("all") {
        return Ok(vec![Mode::Sc, Mode::Oc, Mode::Ocf]);
    }
    text.split(',')
        .map(|part| part.trim().parse::<Mode>().map_err(|e| e.to_string()))
        .collect()
}

fn parse_rates(text: &str) -> Result<Vec<f64>, String> {
    if text.eq_ignore_ascii_case("all") {
        return Ok(vec![1.0, 10.0, 25.0]);
    }
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .map_err(|_| format!("invalid rate `{part}` (expected 1, 10, 25 or all)"))
        })
        .collect()
}

fn build_config(args: &Args) -> Result<RunConfig, String> {
    let mut config = match &args.config {
        None => RunConfig::default(),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
            RunConfig::from_json(&text).map_err(|e| e.to_string())?
        }
    };
    if let Some(topology) = &args.topology {
        config.topology = Some(topology.clone());
    }
    if let Some(mode) = &args.mode {
        config.modes = parse_modes(mode)?;
    }
    if let Some(rate) = &args.rate {
        config.rates_mbps = parse_rates(rate)?;
    }
    if let Some(solver) = args.solver {
        config.solver = match solver {
            SolverArg::Bnb => SolverChoice::Bnb,
            SolverArg::Greedy => SolverChoice::Greedy,
            SolverArg::Export => SolverChoice::Export,
            SolverArg::Brute => SolverChoice::Brute,
        };
    }
    if let Some(server_power) = args.server_power {
        if let Some(map) = config.catalog.as_object_mut() {
            map.insert("server_power_w".into(), serde_json::json!(server_power));
        }
    }
    if let Some(gap) = args.gap {
        config.gap_tolerance = gap;
    }
    if let Some(time_limit) = args.time_limit {
        config.time_limit_s = time_limit;
    }
    if let Some(node_limit) = args.node_limit {
        config.node_limit = node_limit;
    }
    if let Some(out) = &args.out {
        config.out_dir = out.clone();
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if args.include_onu_in_savings {
        config.include_onu_in_savings = true;
    }
    Ok(config)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let config = match build_config(&args) {
        Ok(config) => config,
        Err(message) => {
            eprintln!("error: {message}");
            return ExitCode::from(2);
        }
    };
    match run(&config) {
        Ok(report) => {
            for warning in &report.warnings {
                eprintln!("warning: {warning}");
            }
            for s in &report.scenarios {
                match (&s.objective_w, &s.savings_vs_sc) {
                    (Some(objective), Some(savings)) => println!(
                        "{:<8} {:>12.1} W  status {:<13} savings vs sc {:>6.1}%",
                        s.name,
                        objective,
                        s.status,
                        savings * 100.0
                    ),
                    (Some(objective), None) => println!(
                        "{:<8} {:>12.1} W  status {}",
                        s.name, objective, s.status
                    ),
                    (None, _) => println!("{:<8} status {}", s.name, s.status),
                }
            }
            println!("results written to {}", report.out_dir.display());
            if report.all_solved {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
