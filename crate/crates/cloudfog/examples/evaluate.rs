//! Build a placement by hand and evaluate its exact power: the 16% group in
//! every access fog, mid groups at metro fogs, the long tail at one cloud.
//!
//! Usage: cargo run --release --example evaluate

use cloudfog::demand::{standard_groups, DemandMatrix, UserPopulation};
use cloudfog::power::{evaluate, Location, Placement, PowerCatalog};
use cloudfog::topology::{bundled_bt20, NodeId};

fn main() {
    let topo = bundled_bt20();
    let catalog = PowerCatalog::default();
    let mut population = UserPopulation::default();
    population.user_data_rate_mbps = 10.0;
    let demand =
        DemandMatrix::uniform(standard_groups(), &population, 1280.0, topo.pon_count()).unwrap();

    let pons = topo.pons();
    let mut placement = Placement::unassigned(demand.group_count(), pons.len());
    for (p, pon) in pons.iter().enumerate() {
        placement.assign[0][p] = Some(Location::AccessFog(*pon)); // 16%
        for g in 1..5 {
            placement.assign[g][p] = Some(Location::MetroFog(pon.node)); // 5% .. 0.5%
        }
        placement.assign[5][p] = Some(Location::Cloud(NodeId(6))); // 0.05% tail
    }

    let b = evaluate(&placement, &topo, &demand, &catalog).unwrap();
    println!("hand-built placement at {} Mbps:", demand.rate_mbps);
    println!("  core            {:>12.1} W", b.core_w);
    println!("  metro           {:>12.1} W", b.metro_w);
    println!("  access          {:>12.1} W   (ONUs {:.1} W)", b.access_w, b.onu_w);
    println!("  cloud servers   {:>12.1} W", b.processing_cloud_w);
    println!("  metro-fog srv   {:>12.1} W", b.processing_metro_fog_w);
    println!("  access-fog srv  {:>12.1} W", b.processing_access_fog_w);
    println!("  total           {:>12.1} W", b.total_w);

    // Moving the tail from the cloud into every metro fog: the replica
    // minimum utilization multiplies across sites.
    for p in 0..pons.len() {
        placement.assign[5][p] = Some(Location::MetroFog(pons[p].node));
    }
    let b2 = evaluate(&placement, &topo, &demand, &catalog).unwrap();
    println!("\nafter moving the 0.05% group from cloud 6 into all metro fogs:");
    println!("  total           {:>12.1} W  ({:+.1} W)", b2.total_w, b2.total_w - b.total_w);
}
