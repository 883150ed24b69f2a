//! Seeded random small instances for solver cross-checks.
//!
//! Instances stay within brute-force reach: at most 3 core nodes, 2 PONs per
//! node, 2 groups with a single VM each. The generator is deterministic in
//! its seed.

use crate::demand::{DemandMatrix, VmGroup, WorkloadProfile};
use crate::power::PowerCatalog;
use crate::scenario::{Mode, Scenario, SolverParams};
use crate::topology::{load_topology, CoreTopology, NodeId};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub struct SmallInstance {
    pub topo: CoreTopology,
    pub demand: DemandMatrix,
    pub catalog: PowerCatalog,
    pub mode: Mode,
    pub sc_node: NodeId,
}

impl SmallInstance {
    pub fn scenario(&self, params: SolverParams) -> Scenario {
        Scenario::new(self.mode, &self.topo, self.sc_node, self.demand.rate_mbps, params)
            .expect("generated scenario is valid")
    }
}

/// Generate a random small instance. `rate_mbps` is usually one of 1/10/25.
pub fn random_small(seed: u64, rate_mbps: f64) -> SmallInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let nodes = rng.gen_range(2..=3usize);
    let pons_per_node = rng.gen_range(1..=2u8);
    let groups = rng.gen_range(1..=2usize);

    // Random connected graph: a path plus optional extra edges.
    let mut links = Vec::new();
    for i in 1..nodes {
        links.push(serde_json::json!({
            "a": i,
            "b": i + 1,
            "distance_km": rng.gen_range(40.0..2500.0f64).round(),
        }));
    }
    if nodes == 3 && rng.gen_bool(0.6) {
        links.push(serde_json::json!({
            "a": 1,
            "b": 3,
            "distance_km": rng.gen_range(40.0..2500.0f64).round(),
        }));
    }
    let doc = serde_json::json!({
        "schema_version": 1,
        "name": format!("rand_{seed}"),
        "nodes": (1..=nodes).map(|i| serde_json::json!({"id": i, "name": format!("n{i}")}))
            .collect::<Vec<_>>(),
        "links": links,
        "pons_per_node": pons_per_node,
        "onus_per_pon": 16,
    })
    .to_string();
    let topo = load_topology(&doc).expect("generated topology is valid");

    let pon_count = topo.pon_count();
    let group_list: Vec<VmGroup> = (0..groups)
        .map(|i| VmGroup {
            index: i as u8 + 1,
            popularity: rng.gen_range(0.01..0.5),
            vm_count: 1,
        })
        .collect();
    let users: Vec<Vec<u32>> = (0..groups)
        .map(|_| {
            (0..pon_count)
                .map(|_| if rng.gen_bool(0.9) { rng.gen_range(1..4000u32) } else { 0 })
                .collect()
        })
        .collect();

    let mut catalog = PowerCatalog::default();
    catalog.server_power_w = rng.gen_range(100.0..1200.0f64).round();

    let mode = match rng.gen_range(0..3) {
        0 => Mode::Sc,
        1 => Mode::Oc,
        _ => Mode::Ocf,
    };
    let sc_node = NodeId(rng.gen_range(1..=nodes as u32));

    SmallInstance {
        topo,
        demand: DemandMatrix {
            groups: group_list,
            users,
            profile: WorkloadProfile::default(),
            rate_mbps,
        },
        catalog,
        mode,
        sc_node,
    }
}
