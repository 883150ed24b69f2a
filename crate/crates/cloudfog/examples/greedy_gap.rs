//! Measure the greedy heuristic's optimality gap against brute force on a
//! stream of seeded random instances.
//!
//! Usage: cargo run --release --example greedy_gap [trials]

use cloudfog::instance::random_small;
use cloudfog::opt::{brute_force, greedy_place};
use cloudfog::power::Evaluator;
use cloudfog::scenario::SolverParams;

fn main() {
    let trials: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(100);
    let rates = [1.0, 10.0, 25.0];

    let mut checked = 0u64;
    let mut exact = 0u64;
    let mut worst: f64 = 0.0;
    let mut gap_sum = 0.0;
    let mut seed = 0u64;
    while checked < trials {
        let rate = rates[(seed % 3) as usize];
        let inst = random_small(seed, rate);
        seed += 1;
        let ev = Evaluator::new(&inst.topo, &inst.demand, &inst.catalog).unwrap();
        let scenario = inst.scenario(SolverParams::default());
        let Ok(brute) = brute_force(&scenario, &ev, 300_000) else {
            continue; // enumeration over budget or infeasible; next seed
        };
        let Ok(greedy) = greedy_place(&scenario, &ev) else {
            continue;
        };
        let gap = (greedy.breakdown.total_w - brute.objective) / brute.objective;
        assert!(gap >= -1e-12, "greedy cannot beat the oracle");
        if gap <= 1e-12 {
            exact += 1;
        }
        gap_sum += gap;
        worst = worst.max(gap);
        checked += 1;
    }

    println!("greedy vs exact on {checked} instances:");
    println!("  optimal on {exact} ({:.0}%)", 100.0 * exact as f64 / checked as f64);
    println!("  mean gap {:.3}%", 100.0 * gap_sum / checked as f64);
    println!("  worst gap {:.3}%", 100.0 * worst);
}
