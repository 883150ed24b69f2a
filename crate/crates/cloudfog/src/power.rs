//! Device power catalog and the placement power evaluator.
//!
//! [`evaluate`] is the single objective function shared by the MILP solver,
//! the greedy heuristic, and the brute-force oracle: all three optimize and
//! compare exactly this quantity, so cross-checks between them are exact, not
//! approximate.
//!
//! Device model (on-off power profile throughout):
//!
//! * Every device count is a ceiling of the aggregate traffic it carries.
//!   Traffic aggregates across popularity groups at each device: per serving
//!   site for switches, router ports and servers, per (source node, cloud)
//!   pair for core wavelengths, and per source node for the metro transport
//!   leg. Server pools aggregate the workloads of all replicas at a site and
//!   round up to whole machines once.
//! * Access leg (always incurred per PON with demand): the OLT plus the PON's
//!   ONU population. The ONU subtotal is constant across placements and is
//!   reported separately so savings comparisons can exclude it.
//! * Access-fog serving keeps traffic inside the PON: fog router ports and
//!   redundant fog switches plus servers, all under the access-fog PUE.
//! * Metro-fog and cloud serving haul traffic through the metro: Ethernet
//!   switch units and redundant aggregation router ports under the network
//!   PUE, then site-side ports/switches/servers under the tier PUE.
//! * Cloud serving from a remote node adds a core lightpath along the fixed
//!   shortest path: per wavelength two router ports (the cloud-side port is
//!   the lightpath's terminating port), two transponders and any
//!   regenerators; per active fiber the span EDFAs; one optical switch per
//!   node touched by any lightpath. All under the network PUE. Clouds hang
//!   off the core IP router, so demand originating at the cloud's own node
//!   skips the WDM line system (transponders, amplifiers, optical switch)
//!   but still crosses one core router port per 40 Gbps. The cloud-side
//!   aggregation network is accounted in `core_w`.

use crate::demand::{replica_workload, servers_required, DemandMatrix, CEIL_EPS};
use crate::error::{Error, Result};
use crate::topology::{edfa_count, regenerator_count, CoreTopology, NodeId, PonId};
use serde::{Deserialize, Serialize};

/// Every device power, capacity, redundancy factor and PUE of the model.
/// `server_power_w` is deployment-specific (not a catalogued device) and is
/// meant to be overridden from the scenario configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct PowerCatalog {
    pub core_router_port_w: f64,
    pub transponder_w: f64,
    pub regenerator_w: f64,
    pub regenerator_reach_km: f64,
    pub edfa_w: f64,
    pub edfa_span_km: f64,
    pub optical_switch_w: f64,
    pub wavelengths_per_fiber: u64,
    pub wavelength_rate_gbps: f64,
    pub network_pue: f64,
    pub agg_router_redundancy: u32,
    pub agg_router_port_w: f64,
    pub agg_router_port_capacity_gbps: f64,
    pub metro_switch_w: f64,
    pub metro_switch_capacity_gbps: f64,
    pub onu_w: f64,
    pub olt_w: f64,
    pub cloud_metro_fog_switch_w: f64,
    pub cloud_metro_fog_switch_capacity_gbps: f64,
    pub access_fog_switch_w: f64,
    pub access_fog_switch_capacity_gbps: f64,
    pub cloud_fog_switch_redundancy: u32,
    pub cloud_router_port_w: f64,
    pub fog_router_port_w: f64,
    pub router_port_capacity_gbps: f64,
    pub pue_cloud: f64,
    pub pue_metro_fog: f64,
    pub pue_access_fog: f64,
    pub server_power_w: f64,
    pub server_cpu_capacity_pct: f64,
}

impl Default for PowerCatalog {
    fn default() -> Self {
        PowerCatalog {
            core_router_port_w: 638.0,
            transponder_w: 129.0,
            regenerator_w: 114.0,
            regenerator_reach_km: 2000.0,
            edfa_w: 11.0,
            edfa_span_km: 80.0,
            optical_switch_w: 85.0,
            wavelengths_per_fiber: 32,
            wavelength_rate_gbps: 40.0,
            network_pue: 1.5,
            agg_router_redundancy: 2,
            agg_router_port_w: 30.0,
            agg_router_port_capacity_gbps: 40.0,
            metro_switch_w: 470.0,
            metro_switch_capacity_gbps: 600.0,
            onu_w: 5.0,
            olt_w: 1842.0,
            cloud_metro_fog_switch_w: 470.0,
            cloud_metro_fog_switch_capacity_gbps: 600.0,
            access_fog_switch_w: 210.0,
            access_fog_switch_capacity_gbps: 240.0,
            cloud_fog_switch_redundancy: 2,
            cloud_router_port_w: 30.0,
            fog_router_port_w: 13.0,
            router_port_capacity_gbps: 40.0,
            pue_cloud: 1.3,
            pue_metro_fog: 1.4,
            pue_access_fog: 1.5,
            server_power_w: 300.0,
            server_cpu_capacity_pct: 100.0,
        }
    }
}

impl PowerCatalog {
    pub fn validate(&self) -> Result<()> {
        let powers = [
            self.core_router_port_w,
            self.transponder_w,
            self.regenerator_w,
            self.edfa_w,
            self.optical_switch_w,
            self.agg_router_port_w,
            self.metro_switch_w,
            self.onu_w,
            self.olt_w,
            self.cloud_metro_fog_switch_w,
            self.access_fog_switch_w,
            self.cloud_router_port_w,
            self.fog_router_port_w,
            self.server_power_w,
        ];
        if powers.iter().any(|&p| p < 0.0) {
            return Err(Error::NegativeInput("device power"));
        }
        let capacities = [
            self.regenerator_reach_km,
            self.edfa_span_km,
            self.wavelength_rate_gbps,
            self.agg_router_port_capacity_gbps,
            self.metro_switch_capacity_gbps,
            self.cloud_metro_fog_switch_capacity_gbps,
            self.access_fog_switch_capacity_gbps,
            self.router_port_capacity_gbps,
            self.server_cpu_capacity_pct,
        ];
        if capacities.iter().any(|&c| !(c > 0.0)) || self.wavelengths_per_fiber == 0 {
            return Err(Error::NonpositiveInput("device capacity"));
        }
        if [self.network_pue, self.pue_cloud, self.pue_metro_fog, self.pue_access_fog]
            .iter()
            .any(|&p| p < 1.0)
        {
            return Err(Error::NonpositiveInput("PUE (must be >= 1)"));
        }
        Ok(())
    }
}

/// Whole devices of capacity `cap` needed to carry `traffic` (0 for none).
pub(crate) fn units(traffic: f64, cap: f64) -> u64 {
    if traffic <= 0.0 {
        0
    } else {
        (traffic / cap - CEIL_EPS).ceil().max(0.0) as u64
    }
}

/// A serving location for one (group, PON) demand.
///
/// The derived `Ord` is the deterministic location ordinal used for all tie
/// breaking: access fogs (by PON) before metro fogs (by node) before clouds
/// (by node).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Location {
    AccessFog(PonId),
    MetroFog(NodeId),
    Cloud(NodeId),
}

impl Location {
    pub fn tier_name(&self) -> &'static str {
        match self {
            Location::AccessFog(_) => "access_fog",
            Location::MetroFog(_) => "metro_fog",
            Location::Cloud(_) => "cloud",
        }
    }
}

impl std::fmt::Display for Location {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Location::AccessFog(p) => write!(f, "access_fog({p})"),
            Location::MetroFog(n) => write!(f, "metro_fog({n})"),
            Location::Cloud(n) => write!(f, "cloud({n})"),
        }
    }
}

/// A complete assignment of (group, PON) demands to serving locations.
/// `assign[g][p]` may be `None` only where the demand is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Placement {
    pub assign: Vec<Vec<Option<Location>>>,
}

impl Placement {
    pub fn unassigned(groups: usize, pons: usize) -> Self {
        Placement { assign: vec![vec![None; pons]; groups] }
    }

    /// Place every demand of every group at one location.
    pub fn all_at(groups: usize, pons: usize, location: Location) -> Self {
        Placement { assign: vec![vec![Some(location); pons]; groups] }
    }

    /// Lexicographic comparison by (group, PON) of location ordinals; used to
    /// break exact objective ties deterministically.
    pub fn lex_key(&self) -> Vec<Option<Location>> {
        self.assign.iter().flatten().copied().collect()
    }
}

/// Tier-by-tier power of an evaluated placement, in Watts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerBreakdown {
    /// Core lightpaths, EDFAs, optical switches, and cloud-site network.
    pub core_w: f64,
    /// Metro transport plus metro-fog network devices.
    pub metro_w: f64,
    /// OLTs, ONUs, and access-fog network devices.
    pub access_w: f64,
    pub processing_cloud_w: f64,
    pub processing_metro_fog_w: f64,
    pub processing_access_fog_w: f64,
    pub total_w: f64,
    /// ONU subtotal (contained in `access_w`); constant across placements.
    pub onu_w: f64,
}

impl PowerBreakdown {
    /// Total used for savings comparisons: the constant ONU floor is excluded
    /// unless `include_onu` is set.
    pub fn comparable_total(&self, include_onu: bool) -> f64 {
        if include_onu {
            self.total_w
        } else {
            self.total_w - self.onu_w
        }
    }
}

/// Fractional power saving of `b` relative to baseline `a`.
pub fn power_savings(a: &PowerBreakdown, b: &PowerBreakdown) -> Result<f64> {
    if !(a.total_w > 0.0) {
        return Err(Error::ZeroBaseline);
    }
    Ok((a.total_w - b.total_w) / a.total_w)
}

struct PairInfo {
    links: Vec<usize>,
    path_nodes: Vec<usize>,
    regens_per_lambda: u32,
}

/// Precomputed evaluation context: paths, per-link EDFA counts, per-(group,
/// PON) traffic. Pure and reentrant; safe to share across threads.
pub struct Evaluator<'a> {
    pub topo: &'a CoreTopology,
    pub demand: &'a DemandMatrix,
    pub catalog: &'a PowerCatalog,
    node_of_pon: Vec<usize>,
    pons: Vec<PonId>,
    /// Group traffic (all VMs of the group) per (g, p), Gbps.
    traffic: Vec<Vec<f64>>,
    /// pair_info[n][c] for n != c.
    pair_info: Vec<Vec<Option<PairInfo>>>,
    link_edfas: Vec<u32>,
    link_wl_capacity: Vec<u64>,
}

impl<'a> Evaluator<'a> {
    pub fn new(
        topo: &'a CoreTopology,
        demand: &'a DemandMatrix,
        catalog: &'a PowerCatalog,
    ) -> Result<Self> {
        catalog.validate()?;
        demand.profile.validate()?;
        if demand.pon_count() != topo.pon_count() {
            return Err(Error::InconsistentPlacement(format!(
                "demand covers {} PONs but topology has {}",
                demand.pon_count(),
                topo.pon_count()
            )));
        }
        let pons = topo.pons();
        let node_of_pon = pons.iter().map(|p| p.node.0 as usize - 1).collect();
        let traffic = (0..demand.group_count())
            .map(|g| (0..demand.pon_count()).map(|p| demand.group_traffic_gbps(g, p)).collect())
            .collect();

        let n = topo.node_count();
        let mut pair_info: Vec<Vec<Option<PairInfo>>> = Vec::with_capacity(n);
        for src in 0..n {
            let mut row = Vec::with_capacity(n);
            for dst in 0..n {
                if src == dst {
                    row.push(None);
                    continue;
                }
                let path = topo
                    .shortest_path(NodeId(src as u32 + 1), NodeId(dst as u32 + 1))?;
                let links = topo.path_links(&path);
                let regens_per_lambda = links
                    .iter()
                    .map(|&l| {
                        regenerator_count(topo.link_distance(l), catalog.regenerator_reach_km)
                    })
                    .sum::<Result<u32>>()?;
                let path_nodes = path.nodes.iter().map(|id| id.0 as usize - 1).collect();
                row.push(Some(PairInfo { links, path_nodes, regens_per_lambda }));
            }
            pair_info.push(row);
        }
        let link_edfas = topo
            .links
            .iter()
            .map(|l| edfa_count(l.distance_km, catalog.edfa_span_km))
            .collect::<Result<Vec<_>>>()?;
        let link_wl_capacity = topo
            .links
            .iter()
            .map(|l| catalog.wavelengths_per_fiber * l.fiber_count as u64)
            .collect();

        Ok(Evaluator {
            topo,
            demand,
            catalog,
            node_of_pon,
            pons,
            traffic,
            pair_info,
            link_edfas,
            link_wl_capacity,
        })
    }

    pub fn node_of_pon(&self, p: usize) -> usize {
        self.node_of_pon[p]
    }

    pub fn group_traffic(&self, g: usize, p: usize) -> f64 {
        self.traffic[g][p]
    }

    /// Exact total power of `placement` under the device model.
    pub fn eval(&self, placement: &Placement) -> Result<PowerBreakdown> {
        let cat = self.catalog;
        let groups = self.demand.group_count();
        let pon_count = self.demand.pon_count();
        let n = self.topo.node_count();
        if placement.assign.len() != groups
            || placement.assign.iter().any(|row| row.len() != pon_count)
        {
            return Err(Error::InconsistentPlacement(format!(
                "placement shape {}x{} does not match demand {}x{}",
                placement.assign.len(),
                placement.assign.first().map_or(0, |r| r.len()),
                groups,
                pon_count
            )));
        }

        // Aggregates. Access sites are per PON; metro fog, cloud and
        // transport are per node; lightpaths per (source node, cloud node).
        let mut acc_traffic = vec![0.0f64; pon_count];
        let mut acc_users: Vec<Vec<u64>> = vec![vec![0; pon_count]; groups];
        let mut acc_present = vec![vec![false; pon_count]; groups];
        let mut met_traffic = vec![0.0f64; n];
        let mut met_users: Vec<Vec<u64>> = vec![vec![0; n]; groups];
        let mut met_present = vec![vec![false; n]; groups];
        let mut cld_traffic = vec![0.0f64; n];
        let mut cld_users: Vec<Vec<u64>> = vec![vec![0; n]; groups];
        let mut cld_present = vec![vec![false; n]; groups];
        let mut transport_traffic = vec![0.0f64; n];
        let mut pair_traffic = vec![vec![0.0f64; n]; n];
        let mut local_cloud_traffic = vec![0.0f64; n];
        let mut served: Vec<u64> = vec![0; groups];

        for g in 0..groups {
            for p in 0..pon_count {
                let users = self.demand.users[g][p] as u64;
                let traffic = self.traffic[g][p];
                let src = self.node_of_pon[p];
                match placement.assign[g][p] {
                    None => {
                        if users > 0 {
                            return Err(Error::InconsistentPlacement(format!(
                                "demand of group {} at PON {} is unassigned",
                                self.demand.groups[g].index, self.pons[p]
                            )));
                        }
                    }
                    Some(Location::AccessFog(q)) => {
                        if q != self.pons[p] {
                            return Err(Error::InconsistentPlacement(format!(
                                "access fog {} cannot serve PON {}",
                                q, self.pons[p]
                            )));
                        }
                        acc_traffic[p] += traffic;
                        acc_users[g][p] += users;
                        acc_present[g][p] = true;
                        served[g] += users;
                    }
                    Some(Location::MetroFog(m)) => {
                        if !self.topo.contains(m) {
                            return Err(Error::InconsistentPlacement(format!(
                                "unknown metro fog node {m}"
                            )));
                        }
                        let mi = m.0 as usize - 1;
                        if mi != src {
                            return Err(Error::InconsistentPlacement(format!(
                                "metro fog {} cannot serve PON {} of node {}",
                                m,
                                self.pons[p],
                                src + 1
                            )));
                        }
                        met_traffic[mi] += traffic;
                        met_users[g][mi] += users;
                        met_present[g][mi] = true;
                        transport_traffic[src] += traffic;
                        served[g] += users;
                    }
                    Some(Location::Cloud(c)) => {
                        if !self.topo.contains(c) {
                            return Err(Error::InconsistentPlacement(format!(
                                "unknown cloud node {c}"
                            )));
                        }
                        let ci = c.0 as usize - 1;
                        cld_traffic[ci] += traffic;
                        cld_users[g][ci] += users;
                        cld_present[g][ci] = true;
                        transport_traffic[src] += traffic;
                        if ci != src {
                            pair_traffic[src][ci] += traffic;
                        } else {
                            local_cloud_traffic[ci] += traffic;
                        }
                        served[g] += users;
                    }
                }
            }
        }

        // Conservation audit (structural, but asserted for every evaluation).
        for g in 0..groups {
            let demanded: u64 = self.demand.users[g].iter().map(|&u| u as u64).sum();
            let unserved: u64 = (0..pon_count)
                .filter(|&p| placement.assign[g][p].is_none())
                .map(|p| self.demand.users[g][p] as u64)
                .sum();
            if served[g] + unserved != demanded {
                return Err(Error::InconsistentPlacement(format!(
                    "group {} serves {} of {} demanded users",
                    self.demand.groups[g].index, served[g], demanded
                )));
            }
        }

        let mut breakdown = PowerBreakdown {
            core_w: 0.0,
            metro_w: 0.0,
            access_w: 0.0,
            processing_cloud_w: 0.0,
            processing_metro_fog_w: 0.0,
            processing_access_fog_w: 0.0,
            total_w: 0.0,
            onu_w: 0.0,
        };

        // Access leg: OLT and ONUs per PON with any demand, placement
        // independent (on-off: idle PONs contribute nothing).
        for p in 0..pon_count {
            let has_demand = (0..groups).any(|g| self.demand.users[g][p] > 0);
            if has_demand {
                let onu = self.topo.onus_per_pon as f64 * cat.onu_w;
                breakdown.onu_w += onu;
                breakdown.access_w += onu + cat.olt_w;
            }
        }

        // Access fog sites.
        for p in 0..pon_count {
            let t = acc_traffic[p];
            let mut workload = 0.0;
            for g in 0..groups {
                if acc_present[g][p] {
                    workload += self.demand.groups[g].vm_count as f64
                        * replica_workload(acc_users[g][p], &self.demand.profile);
                }
            }
            if t > 0.0 || workload > 0.0 {
                let ports = units(t, cat.router_port_capacity_gbps) as f64 * cat.fog_router_port_w;
                let switches = cat.cloud_fog_switch_redundancy as f64
                    * units(t, cat.access_fog_switch_capacity_gbps) as f64
                    * cat.access_fog_switch_w;
                breakdown.access_w += cat.pue_access_fog * (ports + switches);
                let servers = servers_required(workload)? as f64;
                breakdown.processing_access_fog_w +=
                    cat.pue_access_fog * servers * cat.server_power_w;
            }
        }

        // Metro fog sites and the shared metro transport leg.
        for node in 0..n {
            let t = met_traffic[node];
            let mut workload = 0.0;
            for g in 0..groups {
                if met_present[g][node] {
                    workload += self.demand.groups[g].vm_count as f64
                        * replica_workload(met_users[g][node], &self.demand.profile);
                }
            }
            if t > 0.0 || workload > 0.0 {
                let ports = units(t, cat.router_port_capacity_gbps) as f64 * cat.fog_router_port_w;
                let switches = cat.cloud_fog_switch_redundancy as f64
                    * units(t, cat.cloud_metro_fog_switch_capacity_gbps) as f64
                    * cat.cloud_metro_fog_switch_w;
                breakdown.metro_w += cat.pue_metro_fog * (ports + switches);
                let servers = servers_required(workload)? as f64;
                breakdown.processing_metro_fog_w +=
                    cat.pue_metro_fog * servers * cat.server_power_w;
            }

            let tt = transport_traffic[node];
            if tt > 0.0 {
                let switches =
                    units(tt, cat.metro_switch_capacity_gbps) as f64 * cat.metro_switch_w;
                let ports = cat.agg_router_redundancy as f64
                    * units(tt, cat.agg_router_port_capacity_gbps) as f64
                    * cat.agg_router_port_w;
                breakdown.metro_w += cat.network_pue * (switches + ports);
            }
        }

        // Cloud sites.
        for node in 0..n {
            let t = cld_traffic[node];
            let mut workload = 0.0;
            for g in 0..groups {
                if cld_present[g][node] {
                    workload += self.demand.groups[g].vm_count as f64
                        * replica_workload(cld_users[g][node], &self.demand.profile);
                }
            }
            if t > 0.0 || workload > 0.0 {
                let ports =
                    units(t, cat.router_port_capacity_gbps) as f64 * cat.cloud_router_port_w;
                let switches = cat.cloud_fog_switch_redundancy as f64
                    * units(t, cat.cloud_metro_fog_switch_capacity_gbps) as f64
                    * cat.cloud_metro_fog_switch_w;
                breakdown.core_w += cat.pue_cloud * (ports + switches);
                let servers = servers_required(workload)? as f64;
                breakdown.processing_cloud_w += cat.pue_cloud * servers * cat.server_power_w;
            }
        }

        // Cloud ingress at the cloud's own node: local demand reaches the
        // data center through the node's core router (no WDM line system).
        for node in 0..n {
            let t = local_cloud_traffic[node];
            if t > 0.0 {
                breakdown.core_w += cat.network_pue
                    * units(t, cat.wavelength_rate_gbps) as f64
                    * cat.core_router_port_w;
            }
        }

        // Core lightpaths, fiber EDFAs and optical switches.
        let mut used_wl = vec![0u64; self.topo.links.len()];
        let mut optical_node = vec![false; n];
        for src in 0..n {
            for dst in 0..n {
                let t = pair_traffic[src][dst];
                if t <= 0.0 {
                    continue;
                }
                let info = self.pair_info[src][dst]
                    .as_ref()
                    .expect("distinct nodes have a path");
                let lambda = units(t, cat.wavelength_rate_gbps);
                let per_lambda = 2.0 * cat.core_router_port_w
                    + 2.0 * cat.transponder_w
                    + info.regens_per_lambda as f64 * cat.regenerator_w;
                breakdown.core_w += cat.network_pue * lambda as f64 * per_lambda;
                for &l in &info.links {
                    used_wl[l] += lambda;
                }
                for &u in &info.path_nodes {
                    optical_node[u] = true;
                }
            }
        }
        for (l, &wl) in used_wl.iter().enumerate() {
            if wl == 0 {
                continue;
            }
            if wl > self.link_wl_capacity[l] {
                let link = &self.topo.links[l];
                return Err(Error::CapacityExceeded {
                    a: link.a,
                    b: link.b,
                    used: wl,
                    capacity: self.link_wl_capacity[l],
                });
            }
            let fibers = wl.div_ceil(self.catalog.wavelengths_per_fiber);
            breakdown.core_w +=
                cat.network_pue * fibers as f64 * self.link_edfas[l] as f64 * cat.edfa_w;
        }
        let switch_count = optical_node.iter().filter(|&&b| b).count();
        breakdown.core_w += cat.network_pue * switch_count as f64 * cat.optical_switch_w;

        breakdown.total_w = breakdown.core_w
            + breakdown.metro_w
            + breakdown.access_w
            + breakdown.processing_cloud_w
            + breakdown.processing_metro_fog_w
            + breakdown.processing_access_fog_w;
        Ok(breakdown)
    }
}

/// Convenience wrapper: build an [`Evaluator`] and evaluate one placement.
pub fn evaluate(
    placement: &Placement,
    topo: &CoreTopology,
    demand: &DemandMatrix,
    catalog: &PowerCatalog,
) -> Result<PowerBreakdown> {
    Evaluator::new(topo, demand, catalog)?.eval(placement)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::demand::{VmGroup, WorkloadProfile};
    use crate::topology::load_topology;
    use approx::assert_abs_diff_eq;

    fn two_node_topo() -> CoreTopology {
        let json = serde_json::json!({
            "schema_version": 1,
            "name": "pair",
            "nodes": [{"id": 1, "name": "a"}, {"id": 2, "name": "b"}],
            "links": [{"a": 1, "b": 2, "distance_km": 100.0}],
            "pons_per_node": 1,
            "onus_per_pon": 4
        })
        .to_string();
        load_topology(&json).unwrap()
    }

    fn single_replica_demand(users: u32, rate_mbps: f64) -> DemandMatrix {
        DemandMatrix {
            groups: vec![VmGroup { index: 1, popularity: 1.0, vm_count: 1 }],
            users: vec![vec![users, 0]],
            profile: WorkloadProfile::default(),
            rate_mbps,
        }
    }

    #[test]
    fn idle_pon_contributes_nothing() {
        let topo = two_node_topo();
        let demand = DemandMatrix {
            groups: vec![VmGroup { index: 1, popularity: 1.0, vm_count: 1 }],
            users: vec![vec![0, 0]],
            profile: WorkloadProfile::default(),
            rate_mbps: 25.0,
        };
        let catalog = PowerCatalog::default();
        let placement = Placement::unassigned(1, 2);
        let b = evaluate(&placement, &topo, &demand, &catalog).unwrap();
        assert_eq!(b.total_w, 0.0);
    }

    #[test]
    fn access_fog_replica_matches_hand_evaluation() {
        let topo = two_node_topo();
        let demand = single_replica_demand(800, 25.0);
        let catalog = PowerCatalog::default();
        let pon = topo.pons()[0];
        let mut placement = Placement::unassigned(1, 2);
        placement.assign[0][0] = Some(Location::AccessFog(pon));
        let b = evaluate(&placement, &topo, &demand, &catalog).unwrap();

        // traffic = 20 Gbps: 1 port (13 W), 2 switches (420 W), 1 server.
        let serving = 1.5 * (13.0 + 420.0 + catalog.server_power_w);
        let access_leg = 4.0 * 5.0 + 1842.0;
        assert_abs_diff_eq!(
            b.processing_access_fog_w + (b.access_w - access_leg),
            serving,
            epsilon = 1e-9
        );
        assert_eq!(b.core_w, 0.0);
        assert_eq!(b.metro_w, 0.0);
        assert_abs_diff_eq!(b.total_w, serving + access_leg, epsilon = 1e-9);
    }

    #[test]
    fn remote_cloud_replica_matches_hand_evaluation() {
        let topo = two_node_topo();
        let demand = single_replica_demand(800, 25.0);
        let catalog = PowerCatalog::default();
        let mut placement = Placement::unassigned(1, 2);
        placement.assign[0][0] = Some(Location::Cloud(NodeId(2)));
        let b = evaluate(&placement, &topo, &demand, &catalog).unwrap();

        // 20 Gbps from node 1 to a cloud at node 2, one 100 km hop.
        let metro = 1.5 * (470.0 + 2.0 * 30.0);
        let lambda = 1.0;
        let core_lightpath = 1.5 * lambda * (2.0 * 638.0 + 2.0 * 129.0); // no regens at 100 km
        let edfa = 1.5 * 1.0 * 3.0 * 11.0; // ceil(100/80 - 1) + 2 = 3 EDFAs on one fiber
        let optical = 1.5 * 2.0 * 85.0; // both endpoints touched
        let cloud_net = 1.3 * (1.0 * 30.0 + 2.0 * 470.0);
        let servers = 1.3 * 1.0 * catalog.server_power_w;
        let access_leg = 4.0 * 5.0 + 1842.0;
        assert_abs_diff_eq!(b.metro_w, metro, epsilon = 1e-9);
        assert_abs_diff_eq!(b.core_w, core_lightpath + edfa + optical + cloud_net, epsilon = 1e-9);
        assert_abs_diff_eq!(b.processing_cloud_w, servers, epsilon = 1e-9);
        assert_abs_diff_eq!(
            b.total_w,
            metro + core_lightpath + edfa + optical + cloud_net + servers + access_leg,
            epsilon = 1e-9
        );
    }

    #[test]
    fn local_cloud_skips_wdm_but_pays_core_ingress() {
        let topo = two_node_topo();
        let demand = single_replica_demand(800, 25.0);
        let catalog = PowerCatalog::default();
        let mut placement = Placement::unassigned(1, 2);
        placement.assign[0][0] = Some(Location::Cloud(NodeId(1)));
        let b = evaluate(&placement, &topo, &demand, &catalog).unwrap();
        // 20 Gbps local: one core router port, no transponders/EDFAs/optical
        // switches, plus the cloud-side network.
        let ingress = 1.5 * 1.0 * 638.0;
        let cloud_net = 1.3 * (30.0 + 2.0 * 470.0);
        assert_abs_diff_eq!(b.core_w, ingress + cloud_net, epsilon = 1e-9);
        assert_abs_diff_eq!(b.metro_w, 1.5 * (470.0 + 60.0), epsilon = 1e-9);
    }

    #[test]
    fn wrong_access_fog_is_rejected() {
        let topo = two_node_topo();
        let demand = single_replica_demand(800, 25.0);
        let catalog = PowerCatalog::default();
        let other_pon = topo.pons()[1];
        let mut placement = Placement::unassigned(1, 2);
        placement.assign[0][0] = Some(Location::AccessFog(other_pon));
        assert!(matches!(
            evaluate(&placement, &topo, &demand, &catalog),
            Err(Error::InconsistentPlacement(_))
        ));
    }

    #[test]
    fn remote_metro_fog_is_rejected() {
        let topo = two_node_topo();
        let demand = single_replica_demand(800, 25.0);
        let catalog = PowerCatalog::default();
        let mut placement = Placement::unassigned(1, 2);
        placement.assign[0][0] = Some(Location::MetroFog(NodeId(2)));
        assert!(matches!(
            evaluate(&placement, &topo, &demand, &catalog),
            Err(Error::InconsistentPlacement(_))
        ));
    }

    #[test]
    fn unassigned_demand_is_rejected() {
        let topo = two_node_topo();
        let demand = single_replica_demand(800, 25.0);
        let catalog = PowerCatalog::default();
        let placement = Placement::unassigned(1, 2);
        assert!(matches!(
            evaluate(&placement, &topo, &demand, &catalog),
            Err(Error::InconsistentPlacement(_))
        ));
    }

    #[test]
    fn wavelength_capacity_overflow_is_detected() {
        let topo = two_node_topo();
        // 64,000 users at 25 Mbps = 1600 Gbps = 40 wavelengths > 32 per fiber.
        let demand = single_replica_demand(64_000, 25.0);
        let catalog = PowerCatalog::default();
        let mut placement = Placement::unassigned(1, 2);
        placement.assign[0][0] = Some(Location::Cloud(NodeId(2)));
        assert!(matches!(
            evaluate(&placement, &topo, &demand, &catalog),
            Err(Error::CapacityExceeded { .. })
        ));
    }

    #[test]
    fn rate_increase_never_reduces_power() {
        let topo = two_node_topo();
        let catalog = PowerCatalog::default();
        let pon = topo.pons()[0];
        for loc in [
            Location::AccessFog(pon),
            Location::MetroFog(NodeId(1)),
            Location::Cloud(NodeId(2)),
        ] {
            let mut prev = 0.0;
            for rate in [1.0, 10.0, 25.0] {
                let demand = single_replica_demand(900, rate);
                let mut placement = Placement::unassigned(1, 2);
                placement.assign[0][0] = Some(loc);
                let b = evaluate(&placement, &topo, &demand, &catalog).unwrap();
                assert!(b.total_w >= prev, "{loc} at {rate} Mbps");
                prev = b.total_w;
            }
        }
    }

    #[test]
    fn evaluation_is_bit_identical_across_calls() {
        let topo = two_node_topo();
        let demand = single_replica_demand(900, 10.0);
        let catalog = PowerCatalog::default();
        let mut placement = Placement::unassigned(1, 2);
        placement.assign[0][0] = Some(Location::Cloud(NodeId(2)));
        let ev = Evaluator::new(&topo, &demand, &catalog).unwrap();
        let a = ev.eval(&placement).unwrap();
        let b = ev.eval(&placement).unwrap();
        assert_eq!(a.total_w.to_bits(), b.total_w.to_bits());
        assert_eq!(a.core_w.to_bits(), b.core_w.to_bits());
    }

    #[test]
    fn breakdown_parts_sum_to_total() {
        let topo = two_node_topo();
        let demand = DemandMatrix {
            groups: vec![
                VmGroup { index: 1, popularity: 0.5, vm_count: 2 },
                VmGroup { index: 2, popularity: 0.1, vm_count: 3 },
            ],
            users: vec![vec![900, 400], vec![120, 80]],
            profile: WorkloadProfile::default(),
            rate_mbps: 10.0,
        };
        let catalog = PowerCatalog::default();
        let pons = topo.pons();
        let mut placement = Placement::unassigned(2, 2);
        placement.assign[0][0] = Some(Location::AccessFog(pons[0]));
        placement.assign[0][1] = Some(Location::Cloud(NodeId(1)));
        placement.assign[1][0] = Some(Location::MetroFog(NodeId(1)));
        placement.assign[1][1] = Some(Location::Cloud(NodeId(1)));
        let b = evaluate(&placement, &topo, &demand, &catalog).unwrap();
        let sum = b.core_w
            + b.metro_w
            + b.access_w
            + b.processing_cloud_w
            + b.processing_metro_fog_w
            + b.processing_access_fog_w;
        assert_abs_diff_eq!(b.total_w, sum, epsilon = 1e-9);
        assert!(b.onu_w <= b.access_w);
    }

    #[test]
    fn consolidation_saves_exactly_min_util_threshold() {
        // One VM, two PONs on different nodes, all users at one cloud vs
        // split across two clouds: processing differs by the extra replica's
        // minimum utilization rounded through whole servers.
        let topo = two_node_topo();
        let demand = DemandMatrix {
            groups: vec![VmGroup { index: 1, popularity: 1.0, vm_count: 1 }],
            users: vec![vec![792, 792]], // 792 users -> 49.51%, two of them -> 99.02% (1 server)
            profile: WorkloadProfile::default(),
            rate_mbps: 1.0,
        };
        let catalog = PowerCatalog::default();
        let mut merged = Placement::unassigned(1, 2);
        merged.assign[0][0] = Some(Location::Cloud(NodeId(1)));
        merged.assign[0][1] = Some(Location::Cloud(NodeId(1)));
        let mut split = Placement::unassigned(1, 2);
        split.assign[0][0] = Some(Location::Cloud(NodeId(1)));
        split.assign[0][1] = Some(Location::Cloud(NodeId(2)));
        let bm = evaluate(&merged, &topo, &demand, &catalog).unwrap();
        let bs = evaluate(&split, &topo, &demand, &catalog).unwrap();

        let profile = WorkloadProfile::default();
        let merged_servers = servers_required(replica_workload(1584, &profile)).unwrap();
        let split_servers = 2 * servers_required(replica_workload(792, &profile)).unwrap();
        let expected = catalog.pue_cloud
            * catalog.server_power_w
            * (split_servers - merged_servers) as f64;
        assert_abs_diff_eq!(
            bs.processing_cloud_w - bm.processing_cloud_w,
            expected,
            epsilon = 1e-9
        );
        assert_eq!(merged_servers, 1);
        assert_eq!(split_servers, 2);
    }

    #[test]
    fn savings_fraction_is_relative_to_baseline() {
        let a = PowerBreakdown {
            core_w: 0.0,
            metro_w: 0.0,
            access_w: 100.0,
            processing_cloud_w: 0.0,
            processing_metro_fog_w: 0.0,
            processing_access_fog_w: 0.0,
            total_w: 100.0,
            onu_w: 0.0,
        };
        let mut b = a;
        b.total_w = 25.0;
        assert_abs_diff_eq!(power_savings(&a, &b).unwrap(), 0.75);
        assert_abs_diff_eq!(power_savings(&a, &a).unwrap(), 0.0);
        let zero = PowerBreakdown { total_w: 0.0, ..a };
        assert!(matches!(power_savings(&zero, &b), Err(Error::ZeroBaseline)));
    }
}
