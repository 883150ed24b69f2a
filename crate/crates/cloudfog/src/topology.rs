//! Core network graph, metro/access segments, and optical line dimensioning.
//!
//! The core graph is loaded from a JSON document (see [`load_topology`]) and
//! validated: contiguous node ids starting at 1, no self-loops, positive
//! distances, connectivity. Routing is deterministic minimum-hop shortest
//! paths with ties broken by the lexicographically smallest node sequence, so
//! every consumer (power evaluator, optimizer, brute force) sees the same
//! paths.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

pub const TOPOLOGY_SCHEMA_VERSION: u32 = 1;

/// Identifier of a core node (1-based, contiguous).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeId(pub u32);

impl std::fmt::Display for NodeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Identifier of a PON access segment: (core node, local index).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PonId {
    pub node: NodeId,
    pub index: u8,
}

impl std::fmt::Display for PonId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}.{}", self.node, self.index)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NodeInfo {
    pub id: u32,
    pub name: String,
}

fn default_fiber_count() -> u32 {
    1
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Link {
    pub a: u32,
    pub b: u32,
    pub distance_km: f64,
    #[serde(default = "default_fiber_count")]
    pub fiber_count: u32,
}

/// On-disk topology document. `schema_version` is checked on load.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TopologyDoc {
    pub schema_version: u32,
    #[serde(default)]
    pub name: String,
    pub nodes: Vec<NodeInfo>,
    pub links: Vec<Link>,
    pub pons_per_node: u8,
    pub onus_per_pon: u16,
}

/// Metro segment attached to one core node: a single Ethernet switch plus
/// redundant edge routers.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetroSegment {
    pub node: NodeId,
    pub switch_capacity_gbps: f64,
    pub edge_router_port_capacity_gbps: f64,
    pub edge_router_redundancy: u32,
}

/// PON access segment: one OLT at the telecom office, `onu_count` ONUs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AccessSegment {
    pub id: PonId,
    pub olt_capacity_gbps: f64,
    pub onu_count: u16,
}

/// A minimum-hop route through the core graph.
#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    pub nodes: Vec<NodeId>,
    pub hop_count: usize,
    pub total_distance_km: f64,
}

/// Validated core graph plus its per-node metro and per-PON access segments.
#[derive(Debug, Clone)]
pub struct CoreTopology {
    pub name: String,
    pub nodes: Vec<NodeInfo>,
    pub links: Vec<Link>,
    pub pons_per_node: u8,
    pub onus_per_pon: u16,
    pub metro_segments: Vec<MetroSegment>,
    pub access_segments: Vec<AccessSegment>,
    /// adjacency[node_idx] = sorted (neighbor_idx, link_idx)
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl CoreTopology {
    /// Build and validate a topology from a parsed document.
    pub fn from_doc(doc: TopologyDoc) -> Result<Self> {
        if doc.schema_version != TOPOLOGY_SCHEMA_VERSION {
            return Err(Error::SchemaVersion {
                found: doc.schema_version,
                expected: TOPOLOGY_SCHEMA_VERSION,
            });
        }
        if doc.nodes.is_empty() {
            return Err(Error::EmptyTopology);
        }
        let n = doc.nodes.len();
        let mut seen = vec![false; n + 1];
        for node in &doc.nodes {
            if node.id == 0 || node.id as usize > n {
                return Err(Error::NonContiguousIds(node.id));
            }
            if seen[node.id as usize] {
                return Err(Error::DuplicateNodeId(node.id));
            }
            seen[node.id as usize] = true;
        }
        if let Some(missing) = (1..=n).find(|&i| !seen[i]) {
            return Err(Error::NonContiguousIds(missing as u32));
        }

        let mut nodes = doc.nodes.clone();
        nodes.sort_by_key(|x| x.id);

        let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for (index, link) in doc.links.iter().enumerate() {
            for id in [link.a, link.b] {
                if id == 0 || id as usize > n {
                    return Err(Error::UnknownEndpoint { index, id });
                }
            }
            if link.a == link.b {
                return Err(Error::SelfLoop { index, id: link.a });
            }
            if !(link.distance_km > 0.0) {
                return Err(Error::NonpositiveDistance {
                    index,
                    a: link.a,
                    b: link.b,
                    distance: link.distance_km,
                });
            }
            if link.fiber_count == 0 {
                return Err(Error::ZeroFiberCount { index, a: link.a, b: link.b });
            }
            adjacency[link.a as usize - 1].push((link.b as usize - 1, index));
            adjacency[link.b as usize - 1].push((link.a as usize - 1, index));
        }
        for adj in &mut adjacency {
            adj.sort();
        }

        // Connectivity from node 1 (single component required).
        if n > 1 {
            let mut visited = vec![false; n];
            let mut stack = vec![0usize];
            visited[0] = true;
            while let Some(u) = stack.pop() {
                for &(v, _) in &adjacency[u] {
                    if !visited[v] {
                        visited[v] = true;
                        stack.push(v);
                    }
                }
            }
            if let Some(i) = visited.iter().position(|v| !v) {
                return Err(Error::Disconnected(i as u32 + 1));
            }
        }

        let metro_segments = nodes
            .iter()
            .map(|node| MetroSegment {
                node: NodeId(node.id),
                switch_capacity_gbps: 600.0,
                edge_router_port_capacity_gbps: 40.0,
                edge_router_redundancy: 2,
            })
            .collect();
        let access_segments = nodes
            .iter()
            .flat_map(|node| {
                (0..doc.pons_per_node).map(move |index| AccessSegment {
                    id: PonId { node: NodeId(node.id), index },
                    olt_capacity_gbps: 1280.0,
                    onu_count: doc.onus_per_pon,
                })
            })
            .collect();

        Ok(CoreTopology {
            name: doc.name,
            nodes,
            links: doc.links,
            pons_per_node: doc.pons_per_node,
            onus_per_pon: doc.onus_per_pon,
            metro_segments,
            access_segments,
            adjacency,
        })
    }

    /// Re-serialize to the document form (round-trip stable).
    pub fn to_doc(&self) -> TopologyDoc {
        TopologyDoc {
            schema_version: TOPOLOGY_SCHEMA_VERSION,
            name: self.name.clone(),
            nodes: self.nodes.clone(),
            links: self.links.clone(),
            pons_per_node: self.pons_per_node,
            onus_per_pon: self.onus_per_pon,
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes.iter().map(|n| NodeId(n.id))
    }

    pub fn contains(&self, node: NodeId) -> bool {
        node.0 >= 1 && node.0 as usize <= self.nodes.len()
    }

    pub fn node_name(&self, node: NodeId) -> &str {
        &self.nodes[node.0 as usize - 1].name
    }

    /// All PONs in deterministic (node, index) order.
    pub fn pons(&self) -> Vec<PonId> {
        self.access_segments.iter().map(|s| s.id).collect()
    }

    pub fn pon_count(&self) -> usize {
        self.access_segments.len()
    }

    /// Dense index of a PON in `pons()` order.
    pub fn pon_index(&self, pon: PonId) -> usize {
        (pon.node.0 as usize - 1) * self.pons_per_node as usize + pon.index as usize
    }

    pub fn link_distance(&self, link_idx: usize) -> f64 {
        self.links[link_idx].distance_km
    }

    /// Minimum-hop path from `a` to `b`; ties broken by the lexicographically
    /// smallest node-id sequence.
    pub fn shortest_path(&self, a: NodeId, b: NodeId) -> Result<Path> {
        if !self.contains(a) || !self.contains(b) {
            return Err(Error::Unreachable { a: a.0, b: b.0 });
        }
        let n = self.node_count();
        let src = a.0 as usize - 1;
        let dst = b.0 as usize - 1;

        // BFS distances towards dst, then walk greedily from src picking the
        // smallest-id neighbor that stays on a shortest path. Greedy choice of
        // the smallest next node yields the lexicographically smallest
        // sequence because all completions have equal length.
        let mut dist = vec![usize::MAX; n];
        dist[dst] = 0;
        let mut queue = std::collections::VecDeque::from([dst]);
        while let Some(u) = queue.pop_front() {
            for &(v, _) in &self.adjacency[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        if dist[src] == usize::MAX {
            return Err(Error::Unreachable { a: a.0, b: b.0 });
        }

        let mut nodes = vec![a];
        let mut total = 0.0;
        let mut cur = src;
        while cur != dst {
            let mut next: Option<(usize, usize)> = None;
            for &(v, link_idx) in &self.adjacency[cur] {
                if dist[v] + 1 == dist[cur] {
                    next = Some((v, link_idx));
                    break; // adjacency sorted by neighbor index
                }
            }
            let (v, link_idx) = next.expect("BFS distance admits a successor");
            total += self.links[link_idx].distance_km;
            nodes.push(NodeId(v as u32 + 1));
            cur = v;
        }
        let hop_count = nodes.len() - 1;
        Ok(Path { nodes, hop_count, total_distance_km: total })
    }

    /// Link indices traversed by `path`, in order.
    pub fn path_links(&self, path: &Path) -> Vec<usize> {
        path.nodes
            .windows(2)
            .map(|w| {
                let u = w[0].0 as usize - 1;
                let v = w[1].0 as usize - 1;
                self.adjacency[u]
                    .iter()
                    .find(|&&(nb, _)| nb == v)
                    .map(|&(_, l)| l)
                    .expect("consecutive path nodes are adjacent")
            })
            .collect()
    }
}

/// Parse, validate and attach segments from a JSON topology document.
pub fn load_topology(json: &str) -> Result<CoreTopology> {
    let doc: TopologyDoc = serde_json::from_str(json).map_err(Error::TopologyParse)?;
    CoreTopology::from_doc(doc)
}

/// The bundled 20-node, 68-link British core instance with approximate
/// city-to-city distances. Link lengths are editable estimates; the shipped
/// file `data/bt20.json` is the single source of truth for this instance.
pub fn bundled_bt20() -> CoreTopology {
    load_topology(include_str!("../data/bt20.json")).expect("bundled topology is valid")
}

/// In-line EDFA count for one fiber of length `distance_km` with amplifier
/// spacing `span_km`, plus pre- and post-amplifier.
pub fn edfa_count(distance_km: f64, span_km: f64) -> Result<u32> {
    if !(distance_km > 0.0) {
        return Err(Error::NonpositiveInput("distance_km"));
    }
    if !(span_km > 0.0) {
        return Err(Error::NonpositiveInput("span_km"));
    }
    let inline = (distance_km / span_km - 1.0).ceil().max(0.0) as u32;
    Ok(inline + 2)
}

/// Regenerators needed per wavelength on a link of length `distance_km`
/// given optical `reach_km`.
pub fn regenerator_count(distance_km: f64, reach_km: f64) -> Result<u32> {
    if !(distance_km > 0.0) {
        return Err(Error::NonpositiveInput("distance_km"));
    }
    if !(reach_km > 0.0) {
        return Err(Error::NonpositiveInput("reach_km"));
    }
    let segments = (distance_km / reach_km).ceil() as i64;
    Ok((segments - 1).max(0) as u32)
}
