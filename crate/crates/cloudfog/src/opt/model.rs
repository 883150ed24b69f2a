//! Explicit MILP formulation of the placement problem.
//!
//! Binary assignment variables pick one serving location per (group, PON)
//! demand; binary replica indicators drive the per-replica minimum workload;
//! integer device-count variables (servers, switch units, router ports,
//! wavelengths, fibers, optical switches) carry the ceiling-based device
//! model of [`crate::power`]. The objective is the same PUE-weighted power
//! expression the evaluator computes, so an integral solution's minimal
//! completion costs exactly `power::evaluate` of its placement.
//!
//! Formulation notes:
//! * Access-fog replica indicators coincide with their single assignment
//!   variable, so no separate `y` is created for them.
//! * Metro-fog linking is disaggregated (`x <= y`); cloud linking is
//!   aggregated per (group, cloud), which keeps the row count proportional
//!   to the candidate count.
//! * "First unit on" cuts are added where a device unit is expensive
//!   (switches, servers); wavelength cuts are added only in the low-traffic
//!   regime where the traffic row itself is weak.

use crate::demand::{replica_workload, servers_required, CEIL_EPS};
use crate::error::{Error, Result};
use crate::power::{units, Evaluator, Location, Placement};
use crate::scenario::{Mode, Scenario};
use crate::topology::NodeId;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Binary,
    Integer,
    Continuous,
}

#[derive(Debug, Clone)]
pub struct Variable {
    pub name: String,
    pub objective: f64,
    pub lower: f64,
    pub upper: f64,
    pub kind: VarKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub name: String,
    pub terms: Vec<(usize, f64)>,
    pub op: CmpOp,
    pub rhs: f64,
}

/// A serving site (replica host): access fog per PON, metro fog or cloud per
/// node. Ordered by tier then position, matching the location ordinal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Site {
    Acc(usize),
    Met(usize),
    Cld(usize),
}

#[derive(Debug, Clone)]
pub struct AssignVar {
    pub g: usize,
    pub p: usize,
    pub location: Location,
    pub var: usize,
}

/// The built integer program plus the metadata needed to map solutions back
/// to placements.
pub struct MilpModel {
    pub variables: Vec<Variable>,
    pub constraints: Vec<Constraint>,
    /// Placement-independent power (OLT and ONU of every active PON).
    pub objective_constant: f64,
    pub assign_vars: Vec<AssignVar>,
    /// For each demand (g, p): indices into `assign_vars`.
    pub demand_choices: Vec<((usize, usize), Vec<usize>)>,
    /// Replica indicator variables (metro fog and cloud sites).
    pub replica_vars: Vec<usize>,
    /// Variable indices that are integer or binary.
    pub integer_vars: Vec<usize>,
}

impl MilpModel {
    /// Reconstruct the placement encoded by an assignment vector. For each
    /// demand the candidate with the largest value is taken, ties to the
    /// lowest location ordinal (candidates are stored in ordinal order).
    pub fn placement_from(&self, values: &[f64], groups: usize, pons: usize) -> Placement {
        let mut placement = Placement::unassigned(groups, pons);
        for ((g, p), choices) in &self.demand_choices {
            let mut best = f64::NEG_INFINITY;
            let mut pick = None;
            for &ai in choices {
                let av = &self.assign_vars[ai];
                let v = values[av.var];
                if v > best + 1e-9 {
                    best = v;
                    pick = Some(av.location);
                }
            }
            placement.assign[*g][*p] = pick;
        }
        placement
    }

    pub fn var_count(&self) -> usize {
        self.variables.len()
    }

    pub fn constraint_count(&self) -> usize {
        self.constraints.len()
    }
}

struct Builder {
    variables: Vec<Variable>,
    constraints: Vec<Constraint>,
}

impl Builder {
    fn var(&mut self, name: String, objective: f64, lower: f64, upper: f64, kind: VarKind) -> usize {
        self.variables.push(Variable { name, objective, lower, upper, kind });
        self.variables.len() - 1
    }

    fn row(&mut self, name: String, terms: Vec<(usize, f64)>, op: CmpOp, rhs: f64) {
        self.constraints.push(Constraint { name, terms, op, rhs });
    }
}

fn site_name(site: Site, ev: &Evaluator<'_>) -> String {
    match site {
        Site::Acc(p) => {
            let pon = ev.topo.pons()[p];
            format!("af_{}_{}", pon.node.0, pon.index)
        }
        Site::Met(n) => format!("mf_{}", n + 1),
        Site::Cld(c) => format!("cl_{}", c + 1),
    }
}

fn site_of(location: Location, ev: &Evaluator<'_>) -> Site {
    match location {
        Location::AccessFog(pon) => Site::Acc(ev.topo.pon_index(pon)),
        Location::MetroFog(node) => Site::Met(node.0 as usize - 1),
        Location::Cloud(node) => Site::Cld(node.0 as usize - 1),
    }
}

/// Build the MILP for `scenario`. Demands with zero users are left out; no
/// solver assigns them.
pub fn build_model(scenario: &Scenario, ev: &Evaluator<'_>) -> Result<MilpModel> {
    let cat = ev.catalog;
    let demand = ev.demand;
    let topo = ev.topo;
    let groups = demand.group_count();
    let pon_count = demand.pon_count();
    let n = topo.node_count();
    let pons = topo.pons();

    if scenario.mode == Mode::Sc && scenario.cloud_candidates.len() != 1 {
        return Err(Error::ConfigField {
            field: "cloud_candidates".into(),
            reason: "sc mode requires exactly one cloud node".into(),
        });
    }

    let mut b = Builder { variables: Vec::new(), constraints: Vec::new() };

    // Assignment variables in (group, PON, ordinal) order.
    let mut assign_vars: Vec<AssignVar> = Vec::new();
    let mut demand_choices: Vec<((usize, usize), Vec<usize>)> = Vec::new();
    for g in 0..groups {
        for p in 0..pon_count {
            if demand.users[g][p] == 0 {
                continue;
            }
            let mut choices = Vec::new();
            for location in scenario.candidate_locations(pons[p]) {
                let name = format!(
                    "x_g{}_p{}_{}_{}",
                    demand.groups[g].index,
                    pons[p].node.0,
                    pons[p].index,
                    site_name(site_of(location, ev), ev)
                );
                let var = b.var(name, 0.0, 0.0, 1.0, VarKind::Binary);
                assign_vars.push(AssignVar { g, p, location, var });
                choices.push(assign_vars.len() - 1);
            }
            demand_choices.push(((g, p), choices));
        }
    }

    // Sites that can host a replica of each group.
    let mut group_sites: Vec<BTreeMap<Site, Vec<usize>>> = vec![BTreeMap::new(); groups];
    for (ai, av) in assign_vars.iter().enumerate() {
        group_sites[av.g].entry(site_of(av.location, ev)).or_default().push(ai);
    }
    let mut sites: Vec<Site> = group_sites
        .iter()
        .flat_map(|m| m.keys().copied())
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    sites.sort();

    // Replica indicators for metro fogs and clouds. An access-fog replica is
    // equivalent to its single assignment variable.
    let mut y_var: BTreeMap<(usize, Site), usize> = BTreeMap::new();
    for g in 0..groups {
        for (&site, _) in &group_sites[g] {
            if matches!(site, Site::Acc(_)) {
                continue;
            }
            let name = format!("y_g{}_{}", demand.groups[g].index, site_name(site, ev));
            let var = b.var(name, 0.0, 0.0, 1.0, VarKind::Binary);
            y_var.insert((g, site), var);
        }
    }
    // Replica "presence weight" of group g at a site: either the y variable
    // or, for access sites, the lone assignment variable.
    let presence = |g: usize,
                    site: Site,
                    group_sites: &Vec<BTreeMap<Site, Vec<usize>>>,
                    assign_vars: &[AssignVar]|
     -> usize {
        match site {
            Site::Acc(_) => {
                let ais = &group_sites[g][&site];
                debug_assert_eq!(ais.len(), 1);
                assign_vars[ais[0]].var
            }
            _ => y_var[&(g, site)],
        }
    };

    let profile = &demand.profile;
    let slope = profile.slope_pct_per_user();
    let min_util = profile.min_util_pct;
    let server_capacity = cat.server_cpu_capacity_pct;

    let tier_pue = |site: Site| match site {
        Site::Acc(_) => cat.pue_access_fog,
        Site::Met(_) => cat.pue_metro_fog,
        Site::Cld(_) => cat.pue_cloud,
    };

    // Server pools per site. Upper bound: every reachable demand served there.
    let mut srv_var: BTreeMap<Site, usize> = BTreeMap::new();
    for &site in &sites {
        let mut max_workload = 0.0;
        for g in 0..groups {
            if let Some(ais) = group_sites[g].get(&site) {
                let users: u64 =
                    ais.iter().map(|&ai| demand.users[g][assign_vars[ai].p] as u64).sum();
                max_workload +=
                    demand.groups[g].vm_count as f64 * replica_workload(users, profile);
            }
        }
        let ub = servers_required(max_workload)? as f64;
        let name = format!("srv_{}", site_name(site, ev));
        let var = b.var(name, tier_pue(site) * cat.server_power_w, 0.0, ub, VarKind::Integer);
        srv_var.insert(site, var);
    }

    // Aggregated traffic bound per site.
    let mut site_traffic_ub: BTreeMap<Site, f64> = BTreeMap::new();
    for &site in &sites {
        let mut total = 0.0;
        for g in 0..groups {
            if let Some(ais) = group_sites[g].get(&site) {
                total += ais
                    .iter()
                    .map(|&ai| ev.group_traffic(g, assign_vars[ai].p))
                    .sum::<f64>();
            }
        }
        site_traffic_ub.insert(site, total);
    }

    struct DeviceVars {
        ports: usize,
        switches: usize,
    }
    let mut site_devices: BTreeMap<Site, DeviceVars> = BTreeMap::new();
    for &site in &sites {
        let ub_t = site_traffic_ub[&site];
        let (port_w, sw_cap, sw_unit_w, prefix) = match site {
            Site::Acc(_) => (
                cat.fog_router_port_w,
                cat.access_fog_switch_capacity_gbps,
                cat.access_fog_switch_w,
                ("ap", "asw"),
            ),
            Site::Met(_) => (
                cat.fog_router_port_w,
                cat.cloud_metro_fog_switch_capacity_gbps,
                cat.cloud_metro_fog_switch_w,
                ("mp", "msw"),
            ),
            Site::Cld(_) => (
                cat.cloud_router_port_w,
                cat.cloud_metro_fog_switch_capacity_gbps,
                cat.cloud_metro_fog_switch_w,
                ("cp", "csw"),
            ),
        };
        let pue = tier_pue(site);
        let red = cat.cloud_fog_switch_redundancy as f64;
        let tail = site_name(site, ev);
        let tail = tail.split_once('_').map(|(_, rest)| rest.to_string()).unwrap_or(tail);
        let ports = b.var(
            format!("{}_{}", prefix.0, tail),
            pue * port_w,
            0.0,
            units(ub_t, cat.router_port_capacity_gbps) as f64,
            VarKind::Integer,
        );
        let switches = b.var(
            format!("{}_{}", prefix.1, tail),
            pue * red * sw_unit_w,
            0.0,
            units(ub_t, sw_cap) as f64,
            VarKind::Integer,
        );
        site_devices.insert(site, DeviceVars { ports, switches });
    }

    // Metro transport per node: carries everything leaving the PON upward.
    let mut upward_ub = vec![0.0f64; n];
    for ((g, p), _) in &demand_choices {
        upward_ub[ev.node_of_pon(*p)] += ev.group_traffic(*g, *p);
    }
    let mut transport_vars: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    let has_upward_candidates = assign_vars
        .iter()
        .any(|av| !matches!(av.location, Location::AccessFog(_)));
    for node in 0..n {
        if upward_ub[node] <= 0.0 || !has_upward_candidates {
            continue;
        }
        let tp = b.var(
            format!("tp_{}", node + 1),
            cat.network_pue * cat.agg_router_redundancy as f64 * cat.agg_router_port_w,
            0.0,
            units(upward_ub[node], cat.agg_router_port_capacity_gbps) as f64,
            VarKind::Integer,
        );
        let tsw = b.var(
            format!("tsw_{}", node + 1),
            cat.network_pue * cat.metro_switch_w,
            0.0,
            units(upward_ub[node], cat.metro_switch_capacity_gbps) as f64,
            VarKind::Integer,
        );
        transport_vars.insert(node, (tp, tsw));
    }

    // Lightpaths per (source node, cloud node) pair, plus the local core
    // ingress port count at each cloud's own node.
    let cloud_sites: Vec<usize> = sites
        .iter()
        .filter_map(|s| if let Site::Cld(c) = s { Some(*c) } else { None })
        .collect();
    let mut lambda_var: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut local_ingress_var: BTreeMap<usize, usize> = BTreeMap::new();
    for src in 0..n {
        for &c in &cloud_sites {
            if upward_ub[src] <= 0.0 {
                continue;
            }
            let ub = units(upward_ub[src], cat.wavelength_rate_gbps) as f64;
            if src == c {
                let var = b.var(
                    format!("lloc_{}", c + 1),
                    cat.network_pue * cat.core_router_port_w,
                    0.0,
                    ub,
                    VarKind::Integer,
                );
                local_ingress_var.insert(c, var);
                continue;
            }
            let path = topo.shortest_path(NodeId(src as u32 + 1), NodeId(c as u32 + 1))?;
            let mut regens: u32 = 0;
            for l in topo.path_links(&path) {
                regens += crate::topology::regenerator_count(
                    topo.link_distance(l),
                    cat.regenerator_reach_km,
                )?;
            }
            let per_lambda = cat.network_pue
                * (2.0 * cat.core_router_port_w
                    + 2.0 * cat.transponder_w
                    + regens as f64 * cat.regenerator_w);
            let var = b.var(
                format!("lam_{}_{}", src + 1, c + 1),
                per_lambda,
                0.0,
                ub,
                VarKind::Integer,
            );
            lambda_var.insert((src, c), var);
        }
    }

    // Fibers per link (EDFA cost; the fiber_count upper bound enforces the
    // wavelength capacity) and optical switches per touched node.
    let mut link_pairs: Vec<Vec<(usize, usize)>> = vec![Vec::new(); topo.links.len()];
    let mut node_pairs: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (&(src, c), _) in &lambda_var {
        let path = topo.shortest_path(NodeId(src as u32 + 1), NodeId(c as u32 + 1))?;
        for l in topo.path_links(&path) {
            link_pairs[l].push((src, c));
        }
        for node in &path.nodes {
            node_pairs[node.0 as usize - 1].push((src, c));
        }
    }
    let mut fiber_var: BTreeMap<usize, usize> = BTreeMap::new();
    for (l, pairs) in link_pairs.iter().enumerate() {
        if pairs.is_empty() {
            continue;
        }
        let link = &topo.links[l];
        let edfas = crate::topology::edfa_count(link.distance_km, cat.edfa_span_km)?;
        let var = b.var(
            format!("fib_{}_{}", link.a, link.b),
            cat.network_pue * edfas as f64 * cat.edfa_w,
            0.0,
            link.fiber_count as f64,
            VarKind::Integer,
        );
        fiber_var.insert(l, var);
    }
    let mut z_var: BTreeMap<usize, usize> = BTreeMap::new();
    for (node, pairs) in node_pairs.iter().enumerate() {
        if pairs.is_empty() {
            continue;
        }
        let var = b.var(
            format!("z_{}", node + 1),
            cat.network_pue * cat.optical_switch_w,
            0.0,
            1.0,
            VarKind::Binary,
        );
        z_var.insert(node, var);
    }

    // ---- Constraints ----

    // C1: each demand served exactly once.
    for ((g, p), choices) in &demand_choices {
        let pon = pons[*p];
        b.row(
            format!("assign_g{}_p{}_{}", demand.groups[*g].index, pon.node.0, pon.index),
            choices.iter().map(|&ai| (assign_vars[ai].var, 1.0)).collect(),
            CmpOp::Eq,
            1.0,
        );
    }

    // C2: assignment implies replica. Disaggregated for metro fogs,
    // aggregated per (group, cloud).
    for av in &assign_vars {
        let site = site_of(av.location, ev);
        if let Site::Met(_) = site {
            let y = y_var[&(av.g, site)];
            b.row(
                format!("link_{}", b.variables[av.var].name),
                vec![(av.var, 1.0), (y, -1.0)],
                CmpOp::Le,
                0.0,
            );
        }
    }
    for g in 0..groups {
        for (&site, ais) in &group_sites[g] {
            if let Site::Cld(c) = site {
                let y = y_var[&(g, site)];
                let mut terms: Vec<(usize, f64)> =
                    ais.iter().map(|&ai| (assign_vars[ai].var, 1.0)).collect();
                terms.push((y, -(ais.len() as f64)));
                b.row(
                    format!("link_g{}_cl_{}", demand.groups[g].index, c + 1),
                    terms,
                    CmpOp::Le,
                    0.0,
                );
            }
        }
    }

    // C3 + C4: pooled site workload defines the integer server count, and a
    // present replica forces its minimum-utilization floor.
    for &site in &sites {
        let srv = srv_var[&site];
        let mut terms = vec![(srv, server_capacity)];
        for g in 0..groups {
            if let Some(ais) = group_sites[g].get(&site) {
                let m = demand.groups[g].vm_count as f64;
                let pres = presence(g, site, &group_sites, &assign_vars);
                match site {
                    Site::Acc(_) => {
                        // presence == the single x: fold min into its term
                        let users = demand.users[g][assign_vars[ais[0]].p] as f64;
                        terms.push((pres, -m * (min_util + slope * users)));
                    }
                    _ => {
                        terms.push((pres, -m * min_util));
                        for &ai in ais {
                            let users = demand.users[g][assign_vars[ai].p] as f64;
                            terms.push((assign_vars[ai].var, -m * slope * users));
                        }
                    }
                }
            }
        }
        b.row(
            format!("servers_{}", site_name(site, ev)),
            terms,
            CmpOp::Ge,
            -server_capacity * CEIL_EPS,
        );
        for g in 0..groups {
            if group_sites[g].contains_key(&site) {
                let floor =
                    servers_required(demand.groups[g].vm_count as f64 * min_util)? as f64;
                let pres = presence(g, site, &group_sites, &assign_vars);
                b.row(
                    format!("srvmin_g{}_{}", demand.groups[g].index, site_name(site, ev)),
                    vec![(srv, 1.0), (pres, -floor)],
                    CmpOp::Ge,
                    0.0,
                );
            }
        }
    }

    // C5: site network devices cover the aggregated traffic; switch units
    // also satisfy "first unit on" presence cuts.
    for &site in &sites {
        let devices = &site_devices[&site];
        let sw_cap = match site {
            Site::Acc(_) => cat.access_fog_switch_capacity_gbps,
            Site::Met(_) | Site::Cld(_) => cat.cloud_metro_fog_switch_capacity_gbps,
        };
        for (var, cap, tag) in [
            (devices.ports, cat.router_port_capacity_gbps, "ports"),
            (devices.switches, sw_cap, "switch"),
        ] {
            let mut terms = vec![(var, cap)];
            for g in 0..groups {
                if let Some(ais) = group_sites[g].get(&site) {
                    for &ai in ais {
                        let t = ev.group_traffic(g, assign_vars[ai].p);
                        terms.push((assign_vars[ai].var, -t));
                    }
                }
            }
            b.row(
                format!("{}_{}", tag, site_name(site, ev)),
                terms,
                CmpOp::Ge,
                -cap * CEIL_EPS,
            );
        }
        match site {
            Site::Acc(_) => {
                for g in 0..groups {
                    if let Some(ais) = group_sites[g].get(&site) {
                        for &ai in ais {
                            b.row(
                                format!(
                                    "swmin_{}",
                                    b.variables[assign_vars[ai].var].name
                                ),
                                vec![(devices.switches, 1.0), (assign_vars[ai].var, -1.0)],
                                CmpOp::Ge,
                                0.0,
                            );
                        }
                    }
                }
            }
            Site::Met(_) | Site::Cld(_) => {
                for g in 0..groups {
                    if group_sites[g].contains_key(&site) {
                        let y = y_var[&(g, site)];
                        b.row(
                            format!("swmin_g{}_{}", demand.groups[g].index, site_name(site, ev)),
                            vec![(devices.switches, 1.0), (y, -1.0)],
                            CmpOp::Ge,
                            0.0,
                        );
                    }
                }
                // Per-assignment form as well: a lone assignment must light
                // the switch even when its y is fractionally small.
                if matches!(site, Site::Met(_)) {
                    for g in 0..groups {
                        if let Some(ais) = group_sites[g].get(&site) {
                            for &ai in ais {
                                b.row(
                                    format!(
                                        "swminx_{}",
                                        b.variables[assign_vars[ai].var].name
                                    ),
                                    vec![
                                        (devices.switches, 1.0),
                                        (assign_vars[ai].var, -1.0),
                                    ],
                                    CmpOp::Ge,
                                    0.0,
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    // Metro transport covers metro-fog- and cloud-bound traffic per node.
    for (node, &(tp, tsw)) in &transport_vars {
        let mut upward: Vec<(usize, f64)> = Vec::new();
        for av in &assign_vars {
            if ev.node_of_pon(av.p) == *node && !matches!(av.location, Location::AccessFog(_)) {
                upward.push((av.var, ev.group_traffic(av.g, av.p)));
            }
        }
        if upward.is_empty() {
            continue;
        }
        for (var, cap, tag) in [
            (tp, cat.agg_router_port_capacity_gbps, "tports"),
            (tsw, cat.metro_switch_capacity_gbps, "tswitch"),
        ] {
            let mut terms = vec![(var, cap)];
            terms.extend(upward.iter().map(|&(v, t)| (v, -t)));
            b.row(format!("{}_{}", tag, node + 1), terms, CmpOp::Ge, -cap * CEIL_EPS);
        }
        // Presence cut on the expensive switch unit: any demand of the node
        // that is assigned upward turns it on.
        for ((g, p), choices) in &demand_choices {
            if ev.node_of_pon(*p) != *node {
                continue;
            }
            let ups: Vec<usize> = choices
                .iter()
                .filter(|&&ai| !matches!(assign_vars[ai].location, Location::AccessFog(_)))
                .map(|&ai| assign_vars[ai].var)
                .collect();
            if ups.is_empty() {
                continue;
            }
            let mut terms = vec![(tsw, 1.0)];
            terms.extend(ups.iter().map(|&v| (v, -1.0)));
            b.row(
                format!("tswmin_{}_g{}_p{}", node + 1, demand.groups[*g].index, p),
                terms,
                CmpOp::Ge,
                0.0,
            );
        }
    }

    // Wavelengths per (source node, cloud) pair and local ingress ports.
    // Low-traffic regime: add "first wavelength on" cuts, which carry the
    // bound when the traffic row is far below one wavelength.
    let max_units = upward_ub
        .iter()
        .map(|&t| units(t, cat.wavelength_rate_gbps))
        .max()
        .unwrap_or(0);
    let low_rate = max_units <= 2;
    let mut lambda_rows: Vec<(usize, usize, usize)> = Vec::new(); // (src, c, var)
    for (&(src, c), &lam) in &lambda_var {
        lambda_rows.push((src, c, lam));
    }
    for &(src, c, lam) in &lambda_rows {
        let mut terms = vec![(lam, cat.wavelength_rate_gbps)];
        let mut any = false;
        for av in &assign_vars {
            if av.location == Location::Cloud(NodeId(c as u32 + 1)) && ev.node_of_pon(av.p) == src
            {
                terms.push((av.var, -ev.group_traffic(av.g, av.p)));
                any = true;
            }
        }
        if !any {
            continue;
        }
        b.row(
            format!("wl_{}_{}", src + 1, c + 1),
            terms,
            CmpOp::Ge,
            -cat.wavelength_rate_gbps * CEIL_EPS,
        );
        if low_rate {
            for av in &assign_vars {
                if av.location == Location::Cloud(NodeId(c as u32 + 1))
                    && ev.node_of_pon(av.p) == src
                {
                    b.row(
                        format!("wlmin_{}", b.variables[av.var].name),
                        vec![(lam, 1.0), (av.var, -1.0)],
                        CmpOp::Ge,
                        0.0,
                    );
                }
            }
        }
    }
    for (&c, &lloc) in &local_ingress_var {
        let mut terms = vec![(lloc, cat.wavelength_rate_gbps)];
        let mut any = false;
        for av in &assign_vars {
            if av.location == Location::Cloud(NodeId(c as u32 + 1)) && ev.node_of_pon(av.p) == c {
                terms.push((av.var, -ev.group_traffic(av.g, av.p)));
                any = true;
            }
        }
        if !any {
            continue;
        }
        b.row(
            format!("wlloc_{}", c + 1),
            terms,
            CmpOp::Ge,
            -cat.wavelength_rate_gbps * CEIL_EPS,
        );
        if low_rate {
            for av in &assign_vars {
                if av.location == Location::Cloud(NodeId(c as u32 + 1))
                    && ev.node_of_pon(av.p) == c
                {
                    b.row(
                        format!("wllocmin_{}", b.variables[av.var].name),
                        vec![(lloc, 1.0), (av.var, -1.0)],
                        CmpOp::Ge,
                        0.0,
                    );
                }
            }
        }
    }

    // C6: fibers per link carry up to `wavelengths_per_fiber` each; the
    // installed fiber_count bound enforces link capacity.
    for (&l, &fib) in &fiber_var {
        let mut terms = vec![(fib, cat.wavelengths_per_fiber as f64)];
        for &(src, c) in &link_pairs[l] {
            terms.push((lambda_var[&(src, c)], -1.0));
        }
        let link = &topo.links[l];
        b.row(format!("fiber_{}_{}", link.a, link.b), terms, CmpOp::Ge, 0.0);
    }

    // Optical switch on at every node touched by any lit path.
    for (&node, &z) in &z_var {
        let pairs = &node_pairs[node];
        let big_m: f64 = pairs
            .iter()
            .map(|&(src, _)| units(upward_ub[src], cat.wavelength_rate_gbps) as f64)
            .sum();
        let mut terms = vec![(z, big_m)];
        for &(src, c) in pairs {
            terms.push((lambda_var[&(src, c)], -1.0));
        }
        b.row(format!("osw_{}", node + 1), terms, CmpOp::Ge, 0.0);
    }

    // Constant access leg: OLT + ONUs of every PON with demand.
    let mut constant = 0.0;
    for p in 0..pon_count {
        if (0..groups).any(|g| demand.users[g][p] > 0) {
            constant += cat.olt_w + topo.onus_per_pon as f64 * cat.onu_w;
        }
    }

    let integer_vars = b
        .variables
        .iter()
        .enumerate()
        .filter(|(_, v)| v.kind != VarKind::Continuous)
        .map(|(i, _)| i)
        .collect();
    let replica_vars = y_var.values().copied().collect();

    Ok(MilpModel {
        variables: b.variables,
        constraints: b.constraints,
        objective_constant: constant,
        assign_vars,
        demand_choices,
        replica_vars,
        integer_vars,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::demand::{DemandMatrix, VmGroup, WorkloadProfile};
    use crate::power::PowerCatalog;
    use crate::scenario::SolverParams;
    use crate::topology::load_topology;

    fn toy() -> (crate::topology::CoreTopology, DemandMatrix, PowerCatalog) {
        let json = serde_json::json!({
            "schema_version": 1,
            "name": "toy",
            "nodes": [{"id": 1, "name": "a"}],
            "links": [],
            "pons_per_node": 1,
            "onus_per_pon": 4
        })
        .to_string();
        let topo = load_topology(&json).unwrap();
        let demand = DemandMatrix {
            groups: vec![VmGroup { index: 1, popularity: 1.0, vm_count: 1 }],
            users: vec![vec![500]],
            profile: WorkloadProfile::default(),
            rate_mbps: 10.0,
        };
        (topo, demand, PowerCatalog::default())
    }

    #[test]
    fn toy_sc_model_has_single_assignment_variable() {
        let (topo, demand, catalog) = toy();
        let ev = Evaluator::new(&topo, &demand, &catalog).unwrap();
        let scenario =
            Scenario::new(Mode::Sc, &topo, NodeId(1), 10.0, SolverParams::default()).unwrap();
        let model = build_model(&scenario, &ev).unwrap();
        assert_eq!(model.assign_vars.len(), 1);
        assert_eq!(model.demand_choices.len(), 1);
        // Objective coefficients are all non-negative.
        assert!(model.variables.iter().all(|v| v.objective >= 0.0));
        // Every variable appears in at least one constraint or the objective.
        let mut used = vec![false; model.variables.len()];
        for c in &model.constraints {
            for &(v, _) in &c.terms {
                used[v] = true;
            }
        }
        for (i, v) in model.variables.iter().enumerate() {
            assert!(used[i] || v.objective > 0.0, "unused variable {}", v.name);
        }
    }

    #[test]
    fn bundled_instance_ocf_model_has_expected_assignment_count() {
        let topo = crate::topology::bundled_bt20();
        let demand = DemandMatrix::uniform(
            crate::demand::standard_groups(),
            &crate::demand::UserPopulation::default(),
            1280.0,
            topo.pon_count(),
        )
        .unwrap();
        let catalog = PowerCatalog::default();
        let ev = Evaluator::new(&topo, &demand, &catalog).unwrap();
        let scenario =
            Scenario::new(Mode::Ocf, &topo, NodeId(6), 25.0, SolverParams::default()).unwrap();
        let model = build_model(&scenario, &ev).unwrap();
        // 6 groups x 40 PONs x (1 access + 1 metro + 20 clouds) candidates.
        assert_eq!(model.assign_vars.len(), 6 * 40 * 22);
    }
}
