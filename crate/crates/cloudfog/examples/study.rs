//! Run the full batch study (sc / oc / ocf at 1, 10 and 25 Mbps) on the
//! bundled instance and print the comparison table. Equivalent to running
//! the `cloudfog` binary with no arguments.
//!
//! Usage: cargo run --release --example study [out_dir]

use cloudfog::report::{run, RunConfig};

fn main() {
    let mut config = RunConfig::default();
    if let Some(out) = std::env::args().nth(1) {
        config.out_dir = out.into();
    } else {
        config.out_dir = "study_out".into();
    }

    let report = run(&config).expect("study runs on the bundled instance");
    for warning in &report.warnings {
        eprintln!("warning: {warning}");
    }

    println!(
        "{:<8} {:>6} {:>14} {:>14} {:>8} {:>10}",
        "scenario", "rate", "total W", "bound W", "gap", "savings"
    );
    for s in &report.scenarios {
        println!(
            "{:<8} {:>6} {:>14.1} {:>14.1} {:>7.2}% {:>9}",
            s.name,
            s.rate_mbps,
            s.objective_w.unwrap_or(f64::NAN),
            s.best_bound_w.unwrap_or(f64::NAN),
            s.gap.unwrap_or(f64::NAN) * 100.0,
            s.savings_vs_sc
                .map(|v| format!("{:.1}%", v * 100.0))
                .unwrap_or_else(|| "-".into())
        );
    }
    println!("\nCSV and JSON written to {}", report.out_dir.display());
}
