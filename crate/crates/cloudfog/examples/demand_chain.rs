//! Walk the demand derivation chain: OLT capacity to users, users to
//! VM-bound users, popularity split, workload law and server needs.
//!
//! Usage: cargo run --release --example demand_chain

use cloudfog::demand::{
    group_demand, replica_traffic, replica_workload, servers_required, standard_groups,
    users_per_olt, vm_users_per_pon, UserPopulation, WorkloadProfile,
};

fn main() {
    let population = UserPopulation::default();
    let olt_capacity_gbps = 1280.0;

    let olt_users = users_per_olt(olt_capacity_gbps, population.avg_broadband_speed_mbps).unwrap();
    let cloud_users = vm_users_per_pon(olt_users, population.cloud_traffic_fraction, 1.0).unwrap();
    let vm_users = vm_users_per_pon(
        olt_users,
        population.cloud_traffic_fraction,
        population.top_apps_fraction,
    )
    .unwrap();

    println!("OLT capacity {olt_capacity_gbps} Gbps / {} Mbps avg speed", 33.7);
    println!("  users per OLT:            {olt_users}");
    println!("  cloud-bound users:        {cloud_users}");
    println!("  users of top services:    {vm_users}");

    let profile = WorkloadProfile::default();
    println!("\nworkload law: {}% minimum, {}% at {} users", 1.0, 50.0, 800);
    println!("groups (per PON, per-VM users and servers at 25 Mbps):");
    for group in standard_groups() {
        let users = group_demand(&group, vm_users);
        let workload = replica_workload(users as u64, &profile);
        let servers = servers_required(workload).unwrap();
        let traffic = replica_traffic(users as u64, 25.0).unwrap();
        println!(
            "  group {} pop {:>6.2}% x{:>3} VMs: {:>5} users/VM, {:>7.2}% CPU, {} server(s), {:>6.2} Gbps/VM",
            group.index,
            group.popularity * 100.0,
            group.vm_count,
            users,
            workload,
            servers,
            traffic
        );
    }
}
