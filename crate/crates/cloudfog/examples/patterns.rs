//! Exhaustively price the uniform per-group tier patterns on the bundled
//! instance: every group placed wholesale at one tier (access fogs, metro
//! fogs, a cloud at every node, or one shared cloud). The cheapest pattern
//! is a strong reference point for the optimizers.
//!
//! Usage: cargo run --release --example patterns [server_power_w]

use cloudfog::demand::{standard_groups, DemandMatrix, UserPopulation};
use cloudfog::power::{Evaluator, Location, Placement, PowerCatalog};
use cloudfog::topology::{bundled_bt20, NodeId, PonId};

#[derive(Clone, Copy, PartialEq, Debug)]
enum Tier {
    Access,
    Metro,
    CloudAt(u32),
    CloudLocal,
}

fn apply(placement: &mut Placement, g: usize, tier: Tier, users: &[u32], pons: &[PonId]) {
    for (p, pon) in pons.iter().enumerate() {
        if users[p] == 0 {
            continue;
        }
        placement.assign[g][p] = Some(match tier {
            Tier::Access => Location::AccessFog(*pon),
            Tier::Metro => Location::MetroFog(pon.node),
            Tier::CloudAt(c) => Location::Cloud(NodeId(c)),
            Tier::CloudLocal => Location::Cloud(pon.node),
        });
    }
}

fn main() {
    let server_power: f64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or_else(|| PowerCatalog::default().server_power_w);

    let topo = bundled_bt20();
    let mut catalog = PowerCatalog::default();
    catalog.server_power_w = server_power;
    let pons = topo.pons();

    for rate in [1.0, 10.0, 25.0] {
        let mut population = UserPopulation::default();
        population.user_data_rate_mbps = rate;
        let demand =
            DemandMatrix::uniform(standard_groups(), &population, 1280.0, topo.pon_count())
                .unwrap();
        let ev = Evaluator::new(&topo, &demand, &catalog).unwrap();
        let groups = demand.group_count();

        let cost = |choice: &[Tier]| -> Option<f64> {
            let mut placement = Placement::unassigned(groups, pons.len());
            for (g, &t) in choice.iter().enumerate() {
                apply(&mut placement, g, t, &demand.users[g], &pons);
            }
            ev.eval(&placement).ok().map(|b| b.total_w)
        };

        // Pick the best single shared cloud first, then enumerate the full
        // pattern family over {access, metro, local clouds, best cloud,
        // cloud 6}: 5^groups placements.
        let best_cloud = topo
            .node_ids()
            .min_by(|&a, &b| {
                let ca = cost(&vec![Tier::CloudAt(a.0); groups]).unwrap_or(f64::INFINITY);
                let cb = cost(&vec![Tier::CloudAt(b.0); groups]).unwrap_or(f64::INFINITY);
                ca.partial_cmp(&cb).unwrap()
            })
            .unwrap();
        let mut tiers =
            vec![Tier::Access, Tier::Metro, Tier::CloudLocal, Tier::CloudAt(best_cloud.0)];
        if best_cloud.0 != 6 {
            tiers.push(Tier::CloudAt(6));
        }

        let mut best: Option<(f64, Vec<Tier>)> = None;
        let mut odometer = vec![0usize; groups];
        loop {
            let choice: Vec<Tier> = odometer.iter().map(|&i| tiers[i]).collect();
            if let Some(c) = cost(&choice) {
                if best.as_ref().map_or(true, |(b, _)| c < *b) {
                    best = Some((c, choice));
                }
            }
            let mut slot = groups;
            loop {
                if slot == 0 {
                    slot = usize::MAX;
                    break;
                }
                slot -= 1;
                odometer[slot] += 1;
                if odometer[slot] < tiers.len() {
                    break;
                }
                odometer[slot] = 0;
                if slot == 0 {
                    slot = usize::MAX;
                    break;
                }
            }
            if slot == usize::MAX {
                break;
            }
        }

        let (best_cost, best_choice) = best.expect("some pattern is feasible");
        let sc_cost = cost(&vec![Tier::CloudAt(6); groups]).unwrap();
        println!(
            "== rate {rate} Mbps, server {server_power} W ({} patterns priced) ==",
            tiers.len().pow(groups as u32)
        );
        println!("  single cloud @6:     {sc_cost:>12.1} W");
        println!("  best uniform pattern {best_cost:>12.1} W");
        for (g, t) in best_choice.iter().enumerate() {
            println!(
                "    group {} (pop {:>6.2}%, {:>3} VMs): {:?}",
                demand.groups[g].index,
                demand.groups[g].popularity * 100.0,
                demand.groups[g].vm_count,
                t
            );
        }
        println!(
            "  savings vs single cloud: {:.1}%",
            100.0 * (sc_cost - best_cost) / sc_cost
        );
    }
}
