//! Placement scenarios: which serving locations each approach may use.

use crate::error::{Error, Result};
use crate::power::Location;
use crate::topology::{CoreTopology, NodeId, PonId};
use serde::{Deserialize, Serialize};

/// Placement approach under comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Single cloud at one fixed node.
    Sc,
    /// Clouds optimally placed across all core nodes.
    Oc,
    /// Clouds plus metro and access fogs, jointly optimized.
    Ocf,
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Sc => "sc",
            Mode::Oc => "oc",
            Mode::Ocf => "ocf",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sc" => Ok(Mode::Sc),
            "oc" => Ok(Mode::Oc),
            "ocf" => Ok(Mode::Ocf),
            other => Err(Error::ConfigField {
                field: "mode".into(),
                reason: format!("unknown mode `{other}` (expected sc, oc or ocf)"),
            }),
        }
    }
}

/// Solver limits and tolerances.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverParams {
    /// Relative optimality gap at which the search stops.
    pub gap_tolerance: f64,
    /// Maximum branch-and-bound nodes to explore (0 = unlimited).
    pub node_limit: u64,
    /// Wall-clock limit in seconds (0 = unlimited).
    pub time_limit_s: f64,
}

impl Default for SolverParams {
    fn default() -> Self {
        SolverParams { gap_tolerance: 0.0, node_limit: 0, time_limit_s: 0.0 }
    }
}

/// One optimization scenario: approach, cloud candidates and data rate.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub mode: Mode,
    pub cloud_candidates: Vec<NodeId>,
    pub user_data_rate_mbps: f64,
    pub params: SolverParams,
}

impl Scenario {
    /// Standard scenario over `topo`: SC pins the cloud to `sc_node`, OC and
    /// OC&F may use every core node.
    pub fn new(
        mode: Mode,
        topo: &CoreTopology,
        sc_node: NodeId,
        rate_mbps: f64,
        params: SolverParams,
    ) -> Result<Self> {
        if !topo.contains(sc_node) {
            return Err(Error::ConfigField {
                field: "sc_node".into(),
                reason: format!("node {sc_node} is not in the topology"),
            });
        }
        let cloud_candidates = match mode {
            Mode::Sc => vec![sc_node],
            Mode::Oc | Mode::Ocf => topo.node_ids().collect(),
        };
        Ok(Scenario { mode, cloud_candidates, user_data_rate_mbps: rate_mbps, params })
    }

    /// Serving locations allowed for a demand at `pon`, in ordinal order.
    pub fn candidate_locations(&self, pon: PonId) -> Vec<Location> {
        let mut candidates = Vec::new();
        if self.mode == Mode::Ocf {
            candidates.push(Location::AccessFog(pon));
            candidates.push(Location::MetroFog(pon.node));
        }
        candidates.extend(self.cloud_candidates.iter().map(|&c| Location::Cloud(c)));
        candidates
    }
}
