//! Load and validate a topology document, then inspect routing and optical
//! line dimensioning: shortest paths, per-link EDFA counts, regenerator
//! needs.
//!
//! Usage: cargo run --release --example topology [path/to/topology.json]

use cloudfog::power::PowerCatalog;
use cloudfog::topology::{bundled_bt20, edfa_count, load_topology, regenerator_count, NodeId};

fn main() {
    let topo = match std::env::args().nth(1) {
        Some(path) => {
            let text = std::fs::read_to_string(&path).expect("readable topology file");
            match load_topology(&text) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("invalid topology: {e}");
                    std::process::exit(1);
                }
            }
        }
        None => bundled_bt20(),
    };
    let catalog = PowerCatalog::default();

    println!(
        "{}: {} nodes, {} links, {} PONs ({} per node, {} ONUs each)",
        topo.name,
        topo.node_count(),
        topo.links.len(),
        topo.pon_count(),
        topo.pons_per_node,
        topo.onus_per_pon
    );

    let mut total_edfas = 0u32;
    for link in &topo.links {
        total_edfas += link.fiber_count
            * edfa_count(link.distance_km, catalog.edfa_span_km).unwrap();
    }
    println!(
        "installed fiber plant: {total_edfas} EDFA slots across all fibers (span {} km)",
        catalog.edfa_span_km
    );

    // Hop/distance table from node 1, plus regenerator needs per path.
    let origin = NodeId(1);
    println!("\nshortest paths from node 1 ({}):", topo.node_name(origin));
    for node in topo.node_ids() {
        let path = topo.shortest_path(origin, node).unwrap();
        let regens: u32 = topo
            .path_links(&path)
            .iter()
            .map(|&l| {
                regenerator_count(topo.link_distance(l), catalog.regenerator_reach_km).unwrap()
            })
            .sum();
        println!(
            "  -> {:>2} {:<12} {} hops, {:>6.0} km, {} regenerators/wavelength, via {:?}",
            node,
            topo.node_name(node),
            path.hop_count,
            path.total_distance_km,
            regens,
            path.nodes.iter().map(|n| n.0).collect::<Vec<_>>()
        );
    }
}
