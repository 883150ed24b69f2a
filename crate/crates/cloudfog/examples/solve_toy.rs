//! Solve a small random instance three ways: exact branch-and-bound,
//! exhaustive enumeration, and the greedy heuristic.
//!
//! Usage: cargo run --release --example solve_toy [seed]

use cloudfog::instance::random_small;
use cloudfog::opt::{brute_force, greedy_place, solve_branch_and_bound};
use cloudfog::power::Evaluator;
use cloudfog::scenario::SolverParams;

fn main() {
    let seed: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(42);
    let inst = random_small(seed, 10.0);
    let ev = Evaluator::new(&inst.topo, &inst.demand, &inst.catalog).unwrap();
    let scenario = inst.scenario(SolverParams::default());

    println!(
        "instance seed {seed}: {} nodes, {} PONs, {} groups, mode {:?}, server {} W",
        inst.topo.node_count(),
        inst.topo.pon_count(),
        inst.demand.group_count(),
        inst.mode,
        inst.catalog.server_power_w
    );

    let bnb = solve_branch_and_bound(&scenario, &ev).unwrap();
    println!(
        "branch-and-bound: {:>10.2} W  status {:?}, {} nodes explored",
        bnb.objective, bnb.status, bnb.explored_nodes
    );

    match brute_force(&scenario, &ev, 2_000_000) {
        Ok(brute) => {
            println!(
                "brute force:      {:>10.2} W  over {} evaluations",
                brute.objective, brute.evaluations
            );
            assert_eq!(
                bnb.objective, brute.objective,
                "exact solver must match the enumeration oracle"
            );
            println!("objectives match exactly");
        }
        Err(e) => println!("brute force skipped: {e}"),
    }

    let greedy = greedy_place(&scenario, &ev).unwrap();
    println!(
        "greedy heuristic: {:>10.2} W  after {} moves ({:+.2} W vs exact)",
        greedy.breakdown.total_w,
        greedy.moves_applied,
        greedy.breakdown.total_w - bnb.objective
    );

    if let Some(placement) = &bnb.placement {
        println!("\noptimal assignment:");
        for (g, row) in placement.assign.iter().enumerate() {
            for (p, loc) in row.iter().enumerate() {
                if let Some(loc) = loc {
                    println!(
                        "  group {} at PON {} -> {}",
                        inst.demand.groups[g].index,
                        inst.topo.pons()[p],
                        loc
                    );
                }
            }
        }
    }
}
