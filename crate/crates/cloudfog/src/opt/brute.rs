//! Exhaustive verification oracle: enumerate every assignment combination,
//! evaluate each with the exact power evaluator, return the minimum. Ties are
//! broken like branch-and-bound: the lexicographically smallest assignment
//! vector (candidates enumerated in location-ordinal order) wins.

use crate::error::{Error, Result};
use crate::power::{Evaluator, Location, Placement, PowerBreakdown};
use crate::scenario::Scenario;

#[derive(Debug, Clone)]
pub struct BruteForceResult {
    pub placement: Placement,
    pub breakdown: PowerBreakdown,
    pub objective: f64,
    pub evaluations: u64,
}

pub const DEFAULT_BRUTE_BUDGET: u128 = 2_000_000;

pub fn brute_force(
    scenario: &Scenario,
    ev: &Evaluator<'_>,
    budget: u128,
) -> Result<BruteForceResult> {
    let demand = ev.demand;
    let groups = demand.group_count();
    let pons = demand.pon_count();
    let pon_ids = ev.topo.pons();

    let mut decisions: Vec<(usize, usize, Vec<Location>)> = Vec::new();
    for g in 0..groups {
        for p in 0..pons {
            if demand.users[g][p] > 0 {
                decisions.push((g, p, scenario.candidate_locations(pon_ids[p])));
            }
        }
    }

    let mut combinations: u128 = 1;
    for (_, _, cands) in &decisions {
        combinations = combinations.saturating_mul(cands.len() as u128);
    }
    if combinations > budget {
        return Err(Error::BudgetExceeded { combinations, budget });
    }

    let mut indices = vec![0usize; decisions.len()];
    let mut placement = Placement::unassigned(groups, pons);
    let mut evaluations = 0u64;
    let mut best: Option<(f64, Placement, PowerBreakdown)> = None;

    loop {
        for (slot, &(g, p, ref cands)) in decisions.iter().enumerate() {
            placement.assign[g][p] = Some(cands[indices[slot]]);
        }
        evaluations += 1;
        if let Ok(b) = ev.eval(&placement) {
            // Strict improvement keeps the first (lex-smallest) optimum:
            // the odometer enumerates assignment vectors in lexicographic
            // order of location ordinals.
            if best.as_ref().map_or(true, |(obj, _, _)| b.total_w < *obj) {
                best = Some((b.total_w, placement.clone(), b));
            }
        }

        // Advance the odometer, last decision fastest.
        let mut slot = decisions.len();
        loop {
            if slot == 0 {
                break;
            }
            slot -= 1;
            indices[slot] += 1;
            if indices[slot] < decisions[slot].2.len() {
                break;
            }
            indices[slot] = 0;
            if slot == 0 {
                slot = usize::MAX; // full wrap: enumeration finished
                break;
            }
        }
        if slot == usize::MAX || decisions.is_empty() {
            break;
        }
    }

    match best {
        Some((objective, placement, breakdown)) => {
            Ok(BruteForceResult { placement, breakdown, objective, evaluations })
        }
        None => Err(Error::Infeasible("no feasible placement in enumeration".into())),
    }
}
