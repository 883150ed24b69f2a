//! Greedy baseline: start from the cheapest single-cloud placement, then
//! repeatedly apply the single (group, node-or-PON, location) reassignment
//! with the largest evaluated power reduction until no move improves.
//! Deterministic: moves are scanned in (group, node, PON, location-ordinal)
//! order and ties keep the first-scanned move.

use crate::error::{Error, Result};
use crate::power::{Evaluator, Location, Placement, PowerBreakdown};
use crate::scenario::Scenario;

#[derive(Debug, Clone)]
pub struct GreedyResult {
    pub placement: Placement,
    pub breakdown: PowerBreakdown,
    pub moves_applied: u64,
}

const IMPROVE_EPS: f64 = 1e-9;

pub fn greedy_place(scenario: &Scenario, ev: &Evaluator<'_>) -> Result<GreedyResult> {
    let demand = ev.demand;
    let groups = demand.group_count();
    let pons = demand.pon_count();
    let pon_ids = ev.topo.pons();

    // Starting point: every demand at the single cloud that evaluates best.
    let mut start: Option<(Placement, PowerBreakdown)> = None;
    for &cloud in &scenario.cloud_candidates {
        let mut placement = Placement::unassigned(groups, pons);
        for g in 0..groups {
            for p in 0..pons {
                if demand.users[g][p] > 0 {
                    placement.assign[g][p] = Some(Location::Cloud(cloud));
                }
            }
        }
        if let Ok(b) = ev.eval(&placement) {
            if start.as_ref().map_or(true, |(_, cur)| b.total_w < cur.total_w) {
                start = Some((placement, b));
            }
        }
    }
    let (mut placement, mut breakdown) =
        start.ok_or_else(|| Error::Infeasible("no feasible single-cloud start".into()))?;

    let node_count = ev.topo.node_count();
    let mut moves_applied = 0u64;
    loop {
        let mut best: Option<(f64, Placement, PowerBreakdown)> = None;
        let consider = |trial: &Placement, best: &mut Option<(f64, Placement, PowerBreakdown)>| {
            if trial == &placement {
                return;
            }
            if let Ok(b) = ev.eval(trial) {
                let delta = breakdown.total_w - b.total_w;
                if delta > IMPROVE_EPS && best.as_ref().map_or(true, |(d, _, _)| delta > *d) {
                    *best = Some((delta, trial.clone(), b));
                }
            }
        };

        for g in 0..groups {
            // Whole-node reassignments: both PONs of the node move together;
            // the access-fog target sends each PON to its own fog.
            for node in 0..node_count {
                let node_pons: Vec<usize> = (0..pons)
                    .filter(|&p| ev.node_of_pon(p) == node && demand.users[g][p] > 0)
                    .collect();
                if node_pons.is_empty() {
                    continue;
                }
                let mut targets: Vec<Vec<Location>> = Vec::new();
                let sample_candidates = scenario.candidate_locations(pon_ids[node_pons[0]]);
                for loc in sample_candidates {
                    match loc {
                        Location::AccessFog(_) => targets.push(
                            node_pons.iter().map(|&p| Location::AccessFog(pon_ids[p])).collect(),
                        ),
                        other => targets.push(vec![other; node_pons.len()]),
                    }
                }
                for target in targets {
                    let mut trial = placement.clone();
                    for (&p, &loc) in node_pons.iter().zip(&target) {
                        trial.assign[g][p] = Some(loc);
                    }
                    consider(&trial, &mut best);
                }
            }
            // Single-PON reassignments.
            for p in 0..pons {
                if demand.users[g][p] == 0 {
                    continue;
                }
                for loc in scenario.candidate_locations(pon_ids[p]) {
                    let mut trial = placement.clone();
                    trial.assign[g][p] = Some(loc);
                    consider(&trial, &mut best);
                }
            }
        }

        match best {
            Some((_, trial, b)) => {
                placement = trial;
                breakdown = b;
                moves_applied += 1;
            }
            None => break,
        }
    }

    Ok(GreedyResult { placement, breakdown, moves_applied })
}
