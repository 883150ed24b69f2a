//! Branch-and-bound vs the exhaustive oracle on small random instances.

use cloudfog::instance::random_small;
use cloudfog::opt::{brute_force, greedy_place, solve_branch_and_bound, SolveStatus};
use cloudfog::power::Evaluator;
use cloudfog::scenario::SolverParams;

#[test]
fn bnb_matches_brute_force_on_small_instances() {
    let rates = [1.0, 10.0, 25.0];
    for seed in 0..30u64 {
        let rate = rates[(seed % 3) as usize];
        let inst = random_small(seed, rate);
        let ev = Evaluator::new(&inst.topo, &inst.demand, &inst.catalog).unwrap();
        let scenario = inst.scenario(SolverParams::default());

        let brute = match brute_force(&scenario, &ev, 2_000_000) {
            Ok(b) => b,
            Err(cloudfog::Error::BudgetExceeded { .. }) => continue,
            Err(e) => panic!("seed {seed}: brute force failed: {e}"),
        };
        let bnb = solve_branch_and_bound(&scenario, &ev).unwrap();
        assert_eq!(bnb.status, SolveStatus::Optimal, "seed {seed}");
        assert_eq!(
            bnb.objective, brute.objective,
            "seed {seed} rate {rate}: bnb {} vs brute {}",
            bnb.objective, brute.objective
        );
        // The incumbent's reported objective is its exact evaluation.
        let placement = bnb.placement.as_ref().unwrap();
        let again = ev.eval(placement).unwrap();
        assert_eq!(again.total_w, bnb.objective, "seed {seed}");
        assert!(bnb.best_bound <= bnb.objective + 1e-9, "seed {seed}");

        // Greedy never beats the optimum.
        let greedy = greedy_place(&scenario, &ev).unwrap();
        assert!(
            greedy.breakdown.total_w >= bnb.objective - 1e-9,
            "seed {seed}: greedy {} < optimal {}",
            greedy.breakdown.total_w,
            bnb.objective
        );
    }
}

#[test]
fn solver_is_deterministic() {
    let inst = random_small(7, 10.0);
    let ev = Evaluator::new(&inst.topo, &inst.demand, &inst.catalog).unwrap();
    let scenario = inst.scenario(SolverParams::default());
    let a = solve_branch_and_bound(&scenario, &ev).unwrap();
    let b = solve_branch_and_bound(&scenario, &ev).unwrap();
    assert_eq!(a.objective, b.objective);
    assert_eq!(a.explored_nodes, b.explored_nodes);
    assert_eq!(a.best_bound, b.best_bound);
    assert_eq!(a.placement, b.placement);
}
