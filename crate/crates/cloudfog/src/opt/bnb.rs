//! Exact branch-and-bound over the placement MILP.
//!
//! Bounds come from the LP relaxation; incumbents come from evaluating
//! rounded assignment vectors with the exact power evaluator, so a reported
//! objective is always `power::evaluate` of the reported placement. Search
//! order is deterministic: most-fractional assignment branching first, then
//! fractional device counts, best-bound node selection with node-id tie
//! breaks, and exact objective ties broken by the lexicographically smallest
//! assignment vector.

use super::greedy::greedy_place;
use super::model::{build_model, CmpOp, MilpModel, Site};
use super::relax::{solve_relaxation, ExtraRow, RelaxOutcome};
use crate::error::Result;
use crate::power::{Evaluator, Location, Placement, PowerBreakdown};
use crate::scenario::{Mode, Scenario};
use std::collections::BinaryHeap;
use std::rc::Rc;
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Optimal,
    GapReached,
    LimitReached,
    Infeasible,
}

/// Outcome of a solve: incumbent placement, its exact power, the proven
/// bound, and search statistics.
#[derive(Debug, Clone)]
pub struct SolveResult {
    pub placement: Option<Placement>,
    pub breakdown: Option<PowerBreakdown>,
    pub objective: f64,
    pub best_bound: f64,
    pub gap: f64,
    pub explored_nodes: u64,
    pub status: SolveStatus,
}

impl SolveResult {
    fn infeasible() -> Self {
        SolveResult {
            placement: None,
            breakdown: None,
            objective: f64::INFINITY,
            best_bound: f64::INFINITY,
            gap: 0.0,
            explored_nodes: 0,
            status: SolveStatus::Infeasible,
        }
    }
}

fn relative_gap(objective: f64, bound: f64) -> f64 {
    if !objective.is_finite() {
        return f64::INFINITY;
    }
    if objective <= 0.0 {
        return 0.0;
    }
    ((objective - bound) / objective).max(0.0)
}

struct Node {
    id: u64,
    bound: f64,
    overrides: Vec<(usize, f64, f64)>,
    extra_rows: Vec<ExtraRow>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.bound == other.bound && self.id == other.id
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Node {
    // BinaryHeap is a max-heap; invert so the smallest (bound, id) pops first.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        other
            .bound
            .partial_cmp(&self.bound)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(other.id.cmp(&self.id))
    }
}

struct Incumbent {
    placement: Placement,
    breakdown: PowerBreakdown,
    objective: f64,
}

struct Search<'a> {
    ev: &'a Evaluator<'a>,
    incumbent: Option<Incumbent>,
    explored: u64,
}

impl Search<'_> {
    /// Offer a placement as incumbent; exact ties go to the lexicographically
    /// smaller assignment vector.
    fn offer(&mut self, placement: Placement) {
        let Ok(breakdown) = self.ev.eval(&placement) else {
            return; // capacity-infeasible or inconsistent candidate
        };
        let objective = breakdown.total_w;
        let better = match &self.incumbent {
            None => true,
            Some(cur) => {
                objective < cur.objective
                    || (objective == cur.objective
                        && placement.lex_key() < cur.placement.lex_key())
            }
        };
        if better {
            self.incumbent = Some(Incumbent { placement, breakdown, objective });
        }
    }

    fn incumbent_objective(&self) -> f64 {
        self.incumbent.as_ref().map_or(f64::INFINITY, |i| i.objective)
    }
}

/// Fractional distance from the nearest integer.
fn fractionality(v: f64) -> f64 {
    (v - v.round()).abs()
}

const INT_TOL: f64 = 1e-6;

/// Uniform per-group tier choices used by the pattern-descent seeding.
#[derive(Clone, Copy, PartialEq)]
enum Tier {
    Access,
    Metro,
    CloudAt(u32),
    CloudLocal,
}

/// Coordinate descent over uniform per-group tier patterns. Cheap, exact in
/// its restricted space, and deterministic; it reliably reaches the strong
/// symmetric placements that single-demand moves cannot.
fn pattern_descent(scenario: &Scenario, ev: &Evaluator<'_>, search: &mut Search<'_>) {
    let demand = ev.demand;
    let groups = demand.group_count();
    let pons = demand.pon_count();
    let pon_ids = ev.topo.pons();

    let mut tiers: Vec<Tier> = vec![Tier::CloudAt(scenario.cloud_candidates[0].0)];
    if scenario.cloud_candidates.len() > 1 {
        tiers.extend(scenario.cloud_candidates.iter().skip(1).map(|c| Tier::CloudAt(c.0)));
        tiers.push(Tier::CloudLocal);
    }
    if scenario.mode == Mode::Ocf {
        tiers.push(Tier::Access);
        tiers.push(Tier::Metro);
    }

    let build = |choice: &[Tier]| -> Placement {
        let mut placement = Placement::unassigned(groups, pons);
        for g in 0..groups {
            for p in 0..pons {
                if demand.users[g][p] == 0 {
                    continue;
                }
                placement.assign[g][p] = Some(match choice[g] {
                    Tier::Access => Location::AccessFog(pon_ids[p]),
                    Tier::Metro => Location::MetroFog(pon_ids[p].node),
                    Tier::CloudAt(c) => Location::Cloud(crate::topology::NodeId(c)),
                    Tier::CloudLocal => Location::Cloud(pon_ids[p].node),
                });
            }
        }
        placement
    };

    let mut starts: Vec<Tier> = vec![tiers[0]];
    if scenario.mode == Mode::Ocf {
        starts.push(Tier::Metro);
        starts.push(Tier::Access);
    }
    for start in starts {
        let mut current = vec![start; groups];
        let mut current_cost = match search.ev.eval(&build(&current)) {
            Ok(b) => b.total_w,
            Err(_) => f64::INFINITY,
        };
        loop {
            let mut improved = false;
            for g in 0..groups {
                for &t in &tiers {
                    if t == current[g] {
                        continue;
                    }
                    let mut trial = current.clone();
                    trial[g] = t;
                    if let Ok(b) = search.ev.eval(&build(&trial)) {
                        if b.total_w < current_cost - 1e-9 {
                            current = trial;
                            current_cost = b.total_w;
                            improved = true;
                        }
                    }
                }
            }
            if !improved {
                break;
            }
        }
        search.offer(build(&current));
    }
}

/// Integer-valued assignment sums per (group, tier or cloud node), in a
/// deterministic order. Only sums with at least two members are kept.
fn build_aggregates(model: &MilpModel, ev: &Evaluator<'_>) -> Vec<Rc<Vec<(usize, f64)>>> {
    use std::collections::BTreeMap;
    let mut by_key: BTreeMap<(usize, Site), Vec<(usize, f64)>> = BTreeMap::new();
    for av in &model.assign_vars {
        let key = match av.location {
            // All access fogs of a group pool into one aggregate.
            Location::AccessFog(_) => (av.g, Site::Acc(0)),
            Location::MetroFog(_) => (av.g, Site::Met(0)),
            Location::Cloud(c) => (av.g, Site::Cld(c.0 as usize - 1)),
        };
        by_key.entry(key).or_default().push((av.var, 1.0));
    }
    let _ = ev;
    by_key
        .into_values()
        .filter(|terms| terms.len() >= 2)
        .map(Rc::new)
        .collect()
}

enum Decision {
    Single(Placement),
    Empty,
    Open,
}

/// Inspect the override bounds: if every demand has exactly one remaining
/// candidate, the subtree collapses to that placement.
fn decided_placement(
    model: &MilpModel,
    overrides: &[(usize, f64, f64)],
    groups: usize,
    pons: usize,
) -> Decision {
    use std::collections::HashMap;
    let mut eff: HashMap<usize, (f64, f64)> = HashMap::with_capacity(overrides.len());
    for &(var, lo, hi) in overrides {
        let e = eff.entry(var).or_insert((f64::NEG_INFINITY, f64::INFINITY));
        e.0 = e.0.max(lo);
        e.1 = e.1.min(hi);
    }
    let mut placement = Placement::unassigned(groups, pons);
    for ((g, p), choices) in &model.demand_choices {
        let mut available = None;
        let mut count = 0;
        for &ai in choices {
            let av = &model.assign_vars[ai];
            let hi = eff.get(&av.var).map_or(1.0, |&(_, hi)| hi.min(1.0));
            if hi > 0.5 {
                count += 1;
                if count > 1 {
                    return Decision::Open;
                }
                available = Some(av.location);
            }
        }
        match available {
            None => return Decision::Empty,
            Some(loc) => placement.assign[*g][*p] = Some(loc),
        }
    }
    Decision::Single(placement)
}

/// Solve `scenario` exactly (subject to the configured gap/node/time limits).
pub fn solve_branch_and_bound(scenario: &Scenario, ev: &Evaluator<'_>) -> Result<SolveResult> {
    let model = build_model(scenario, ev)?;
    solve_model(scenario, ev, &model)
}

pub(crate) fn solve_model(
    scenario: &Scenario,
    ev: &Evaluator<'_>,
    model: &MilpModel,
) -> Result<SolveResult> {
    let params = scenario.params;
    let started = Instant::now();
    let groups = ev.demand.group_count();
    let pons = ev.demand.pon_count();

    let mut search = Search { ev, incumbent: None, explored: 0 };

    // Seed the incumbent: uniform-pattern descent first, then the greedy
    // heuristic; branch-and-bound can only improve on them.
    pattern_descent(scenario, ev, &mut search);
    if let Ok(seed) = greedy_place(scenario, ev) {
        search.offer(seed.placement);
    }

    // Assignment aggregates per (group, tier/cloud): integer-valued sums the
    // search can branch on. On symmetric instances these disjunctions split
    // the space far faster than single-variable branching.
    let aggregates = build_aggregates(model, ev);

    let mut open: BinaryHeap<Node> = BinaryHeap::new();
    let mut next_id: u64 = 0;

    match solve_relaxation(model, &[], &[]) {
        RelaxOutcome::Infeasible => {
            return Ok(SolveResult::infeasible());
        }
        RelaxOutcome::Optimal { objective, .. } => {
            open.push(Node {
                id: next_id,
                bound: objective,
                overrides: Vec::new(),
                extra_rows: Vec::new(),
            });
            next_id += 1;
        }
    }

    let mut status = SolveStatus::Optimal;
    let mut best_bound = f64::NEG_INFINITY;

    while let Some(node) = open.pop() {
        best_bound = node.bound;

        // If the overrides leave exactly one candidate per demand, the
        // subtree is a single placement: evaluate it exactly and close.
        match decided_placement(model, &node.overrides, groups, pons) {
            Decision::Single(placement) => {
                search.explored += 1;
                search.offer(placement);
                continue;
            }
            Decision::Empty => continue,
            Decision::Open => {}
        }

        let inc_obj = search.incumbent_objective();
        let prune_eps = 1e-9 * inc_obj.abs().max(1.0);

        if node.bound >= inc_obj - prune_eps {
            // Best-bound order: everything left is at least as bad.
            best_bound = inc_obj.min(node.bound.max(best_bound));
            break;
        }
        if params.gap_tolerance > 0.0
            && relative_gap(inc_obj, node.bound) <= params.gap_tolerance
        {
            status = SolveStatus::GapReached;
            break;
        }
        if params.node_limit > 0 && search.explored >= params.node_limit {
            status = SolveStatus::LimitReached;
            break;
        }
        if params.time_limit_s > 0.0 && started.elapsed().as_secs_f64() >= params.time_limit_s {
            status = SolveStatus::LimitReached;
            break;
        }

        search.explored += 1;

        let (objective, values) = match solve_relaxation(model, &node.overrides, &node.extra_rows)
        {
            RelaxOutcome::Infeasible => continue,
            RelaxOutcome::Optimal { objective, values } => (objective, values),
        };
        if values.is_empty() {
            continue; // solver hiccup: no usable bound, drop the node
        }
        if objective >= search.incumbent_objective() - prune_eps {
            continue;
        }

        // Candidate incumbent from rounding the (possibly fractional)
        // assignment; evaluation gives its exact ceiling-based power.
        let rounded = model.placement_from(&values, groups, pons);
        search.offer(rounded);

        // Branching order: most fractional assignment aggregate, then most
        // fractional single assignment, then the device count with the
        // largest objective-weighted rounding waste.
        enum Branch {
            Aggregate(usize, f64),
            Variable(usize, f64),
        }
        let branch = {
            let mut best: Option<(f64, Branch)> = None;
            for (i, agg) in aggregates.iter().enumerate() {
                let v: f64 = agg.iter().map(|&(var, coef)| coef * values[var]).sum();
                let f = fractionality(v);
                if f > INT_TOL && best.as_ref().map_or(true, |(bf, _)| f > bf + 1e-12) {
                    best = Some((f, Branch::Aggregate(i, v)));
                }
            }
            if best.is_none() {
                for &v in &model.replica_vars {
                    let f = fractionality(values[v]);
                    if f > INT_TOL && best.as_ref().map_or(true, |(bf, _)| f > bf + 1e-12) {
                        best = Some((f, Branch::Variable(v, values[v])));
                    }
                }
            }
            if best.is_none() {
                for av in &model.assign_vars {
                    let f = fractionality(values[av.var]);
                    if f > INT_TOL && best.as_ref().map_or(true, |(bf, _)| f > bf + 1e-12) {
                        best = Some((f, Branch::Variable(av.var, values[av.var])));
                    }
                }
            }
            if best.is_none() {
                for &v in &model.integer_vars {
                    let f = fractionality(values[v]);
                    if f <= INT_TOL {
                        continue;
                    }
                    let weight = f * model.variables[v].objective;
                    if best.as_ref().map_or(true, |(bw, _)| weight > bw + 1e-12) {
                        best = Some((weight, Branch::Variable(v, values[v])));
                    }
                }
            }
            best.map(|(_, b)| b)
        };

        match branch {
            None => {
                // Fully integral: the rounded placement above is this node's
                // exact optimum; nothing further to explore below it.
                continue;
            }
            Some(Branch::Variable(var, value)) => {
                let (floor, ceil) = (value.floor(), value.ceil());
                // Down child then up child; ids keep exploration deterministic.
                for (lo, hi) in [
                    (model.variables[var].lower, floor),
                    (ceil, model.variables[var].upper),
                ] {
                    let mut overrides = node.overrides.clone();
                    overrides.push((var, lo, hi));
                    open.push(Node {
                        id: next_id,
                        bound: objective,
                        overrides,
                        extra_rows: node.extra_rows.clone(),
                    });
                    next_id += 1;
                }
            }
            Some(Branch::Aggregate(i, value)) => {
                let terms = Rc::clone(&aggregates[i]);
                for (op, rhs) in
                    [(CmpOp::Le, value.floor()), (CmpOp::Ge, value.ceil())]
                {
                    let mut extra_rows = node.extra_rows.clone();
                    extra_rows.push(ExtraRow { terms: Rc::clone(&terms), op, rhs });
                    open.push(Node {
                        id: next_id,
                        bound: objective,
                        overrides: node.overrides.clone(),
                        extra_rows,
                    });
                    next_id += 1;
                }
            }
        }
    }

    if open.is_empty() && status == SolveStatus::Optimal {
        // Exhausted: the incumbent is proven optimal.
        best_bound = search.incumbent_objective();
    }

    match search.incumbent {
        None => Ok(SolveResult::infeasible()),
        Some(inc) => {
            let bound = best_bound.min(inc.objective);
            let gap = relative_gap(inc.objective, bound);
            if status == SolveStatus::Optimal && gap > 1e-9 {
                // Ran off the end of the loop via a limit break without open
                // nodes; keep the honest status.
                status = if params.gap_tolerance > 0.0 && gap <= params.gap_tolerance {
                    SolveStatus::GapReached
                } else {
                    SolveStatus::Optimal
                };
            }
            Ok(SolveResult {
                placement: Some(inc.placement),
                breakdown: Some(inc.breakdown),
                objective: inc.objective,
                best_bound: bound,
                gap,
                explored_nodes: search.explored,
                status,
            })
        }
    }
}
