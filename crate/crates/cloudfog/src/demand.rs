//! User populations, VM popularity groups, the linear workload law, and the
//! per-PON demand matrix.
//!
//! The derivation chain is: OLT capacity / average broadband speed gives the
//! users behind one OLT; the cloud-traffic and top-applications fractions cut
//! that down to the VM-bound users per PON; group popularity then splits those
//! users across the service groups. User counts round to the nearest integer
//! at each step so every displayed quantity stays integral and reproducible.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// National access-side averages used to derive per-PON populations.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UserPopulation {
    pub avg_broadband_speed_mbps: f64,
    pub cloud_traffic_fraction: f64,
    pub top_apps_fraction: f64,
    pub user_data_rate_mbps: f64,
}

impl Default for UserPopulation {
    fn default() -> Self {
        UserPopulation {
            avg_broadband_speed_mbps: 33.7,
            cloud_traffic_fraction: 0.75,
            top_apps_fraction: 0.66,
            user_data_rate_mbps: 25.0,
        }
    }
}

impl UserPopulation {
    pub fn validate(&self) -> Result<()> {
        for (value, name) in [
            (self.cloud_traffic_fraction, "cloud_traffic_fraction"),
            (self.top_apps_fraction, "top_apps_fraction"),
        ] {
            if !(value > 0.0 && value <= 1.0) {
                return Err(Error::FractionOutOfRange(name));
            }
        }
        if !(self.avg_broadband_speed_mbps > 0.0) {
            return Err(Error::NonpositiveInput("avg_broadband_speed_mbps"));
        }
        if !(self.user_data_rate_mbps > 0.0) {
            return Err(Error::NonpositiveInput("user_data_rate_mbps"));
        }
        Ok(())
    }
}

/// One popularity group of identical VM services.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VmGroup {
    pub index: u8,
    /// Fraction of VM-bound users demanding one VM of this group.
    pub popularity: f64,
    pub vm_count: u32,
}

/// The six-group split used by the bundled study: popularity and VM counts.
/// Popularities sum to 88.4%; the residual traffic is out of scope and no
/// renormalization is applied.
pub fn standard_groups() -> Vec<VmGroup> {
    let spec = [
        (1u8, 0.16, 1u32),
        (2, 0.05, 4),
        (3, 0.02, 5),
        (4, 0.01, 9),
        (5, 0.005, 43),
        (6, 0.0005, 238),
    ];
    spec.iter()
        .map(|&(index, popularity, vm_count)| VmGroup { index, popularity, vm_count })
        .collect()
}

/// Affine map from users served by one replica to CPU utilization (percent of
/// one server). Extrapolates linearly past `ref_users` and past 100%.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WorkloadProfile {
    pub min_util_pct: f64,
    pub ref_util_pct: f64,
    pub ref_users: u32,
}

impl Default for WorkloadProfile {
    fn default() -> Self {
        WorkloadProfile { min_util_pct: 1.0, ref_util_pct: 50.0, ref_users: 800 }
    }
}

impl WorkloadProfile {
    pub fn validate(&self) -> Result<()> {
        if !(self.min_util_pct > 0.0 && self.min_util_pct < self.ref_util_pct) {
            return Err(Error::NonpositiveInput("workload profile utilization range"));
        }
        if self.ref_users == 0 {
            return Err(Error::NonpositiveInput("ref_users"));
        }
        Ok(())
    }

    /// Utilization percent added per served user.
    pub fn slope_pct_per_user(&self) -> f64 {
        (self.ref_util_pct - self.min_util_pct) / self.ref_users as f64
    }
}

/// Users that one OLT can serve at the average broadband speed.
pub fn users_per_olt(olt_capacity_gbps: f64, avg_speed_mbps: f64) -> Result<u64> {
    if !(olt_capacity_gbps > 0.0) {
        return Err(Error::NonpositiveInput("olt_capacity_gbps"));
    }
    if !(avg_speed_mbps > 0.0) {
        return Err(Error::NonpositiveInput("avg_speed_mbps"));
    }
    Ok((olt_capacity_gbps * 1000.0 / avg_speed_mbps).floor() as u64)
}

/// Users per PON that access VM-hosted services.
pub fn vm_users_per_pon(users: u64, cloud_fraction: f64, top_apps_fraction: f64) -> Result<u64> {
    for (value, name) in
        [(cloud_fraction, "cloud_fraction"), (top_apps_fraction, "top_apps_fraction")]
    {
        if !(value > 0.0 && value <= 1.0) {
            return Err(Error::FractionOutOfRange(name));
        }
    }
    Ok((users as f64 * cloud_fraction * top_apps_fraction).round() as u64)
}

/// Users demanded from one VM of `group` in one PON (uniform across PONs).
pub fn group_demand(group: &VmGroup, vm_users: u64) -> u32 {
    (group.popularity * vm_users as f64).round() as u32
}

/// CPU utilization (%) of a replica serving `n` users. The multiply comes
/// before the divide so the reference point (`ref_users` -> `ref_util_pct`)
/// evaluates exactly in f64.
pub fn replica_workload(n: u64, profile: &WorkloadProfile) -> f64 {
    profile.min_util_pct
        + (profile.ref_util_pct - profile.min_util_pct) * n as f64 / profile.ref_users as f64
}

/// Float-dust guard for ceilings whose argument is an accumulated sum. The
/// smallest genuine fractional excess in this model is ~1e-6 of a unit,
/// orders of magnitude above the guard.
pub(crate) const CEIL_EPS: f64 = 1e-9;

/// Whole servers needed for `workload_pct` of CPU under the on-off profile.
/// Zero only for a zero workload (no replica).
pub fn servers_required(workload_pct: f64) -> Result<u32> {
    if workload_pct < 0.0 {
        return Err(Error::NegativeInput("workload_pct"));
    }
    Ok((workload_pct / 100.0 - CEIL_EPS).ceil().max(0.0) as u32)
}

/// Downstream traffic of a replica serving `n` users at `rate_mbps`, in Gbps.
pub fn replica_traffic(n: u64, rate_mbps: f64) -> Result<f64> {
    if !(rate_mbps > 0.0) {
        return Err(Error::NonpositiveInput("rate_mbps"));
    }
    Ok(n as f64 * rate_mbps / 1000.0)
}

/// Per-(group, PON) demand: `users[g][p]` is the user count demanded from one
/// group-`g` VM at PON `p`. `rate_mbps` is the per-user downstream rate that
/// converts users to traffic.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DemandMatrix {
    pub groups: Vec<VmGroup>,
    pub users: Vec<Vec<u32>>,
    pub profile: WorkloadProfile,
    pub rate_mbps: f64,
}

impl DemandMatrix {
    /// Uniform demand: the same per-VM user count in every PON, derived from
    /// the population chain.
    pub fn uniform(
        groups: Vec<VmGroup>,
        population: &UserPopulation,
        olt_capacity_gbps: f64,
        pon_count: usize,
    ) -> Result<DemandMatrix> {
        population.validate()?;
        let olt_users = users_per_olt(olt_capacity_gbps, population.avg_broadband_speed_mbps)?;
        let vm_users = vm_users_per_pon(
            olt_users,
            population.cloud_traffic_fraction,
            population.top_apps_fraction,
        )?;
        let users = groups
            .iter()
            .map(|g| vec![group_demand(g, vm_users); pon_count])
            .collect();
        Ok(DemandMatrix {
            groups,
            users,
            profile: WorkloadProfile::default(),
            rate_mbps: population.user_data_rate_mbps,
        })
    }

    pub fn group_count(&self) -> usize {
        self.groups.len()
    }

    pub fn pon_count(&self) -> usize {
        self.users.first().map_or(0, |row| row.len())
    }

    /// Group traffic (all `vm_count` VMs) at one PON, in Gbps.
    pub fn group_traffic_gbps(&self, g: usize, p: usize) -> f64 {
        self.groups[g].vm_count as f64 * self.users[g][p] as f64 * self.rate_mbps / 1000.0
    }

    /// Total users demanded from group `g` across all PONs (per VM).
    pub fn group_total_users(&self, g: usize) -> u64 {
        self.users[g].iter().map(|&u| u as u64).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn olt_user_chain_matches_expected_counts() {
        assert_eq!(users_per_olt(1280.0, 33.7).unwrap(), 37_982);
        assert_eq!(users_per_olt(1280.0, 1_280_000.0).unwrap(), 1);
        assert_eq!(users_per_olt(640.0, 33.7).unwrap(), 18_991);
        assert!(users_per_olt(0.0, 33.7).is_err());
    }

    #[test]
    fn vm_user_chain_matches_expected_counts() {
        assert_eq!(vm_users_per_pon(37_982, 0.75, 0.66).unwrap(), 18_801);
        assert_eq!(vm_users_per_pon(37_982, 0.75, 1.0).unwrap(), 28_487);
        assert_eq!(vm_users_per_pon(0, 0.75, 0.66).unwrap(), 0);
        assert!(vm_users_per_pon(10, 0.0, 0.5).is_err());
    }

    #[test]
    fn group_demands_round_to_nearest() {
        let groups = standard_groups();
        assert_eq!(group_demand(&groups[0], 18_801), 3_008); // 16%
        assert_eq!(group_demand(&groups[5], 18_801), 9); // 0.05%
        assert_eq!(group_demand(&groups[2], 0), 0);
    }

    #[test]
    fn standard_groups_total_300_vms() {
        let total: u32 = standard_groups().iter().map(|g| g.vm_count).sum();
        assert_eq!(total, 300);
    }

    #[test]
    fn workload_law_is_exact_at_reference_points() {
        let profile = WorkloadProfile::default();
        assert_eq!(replica_workload(800, &profile), 50.0);
        assert_eq!(replica_workload(0, &profile), 1.0);
        assert_abs_diff_eq!(replica_workload(3_008, &profile), 185.24, epsilon = 1e-9);
    }

    #[test]
    fn servers_round_up_whole_machines() {
        assert_eq!(servers_required(50.0).unwrap(), 1);
        assert_eq!(servers_required(185.24).unwrap(), 2);
        assert_eq!(servers_required(0.0).unwrap(), 0);
        assert_eq!(servers_required(100.0).unwrap(), 1);
        assert_eq!(servers_required(100.1).unwrap(), 2);
        assert!(servers_required(-1.0).is_err());
    }

    #[test]
    fn replica_traffic_is_linear_in_users() {
        assert_eq!(replica_traffic(800, 25.0).unwrap(), 20.0);
        assert_eq!(replica_traffic(0, 10.0).unwrap(), 0.0);
        assert_abs_diff_eq!(replica_traffic(18_801, 1.0).unwrap(), 18.801, epsilon = 1e-12);
    }

    #[test]
    fn uniform_demand_totals_conserve_popularity() {
        let demand = DemandMatrix::uniform(
            standard_groups(),
            &UserPopulation::default(),
            1280.0,
            40,
        )
        .unwrap();
        assert_eq!(demand.pon_count(), 40);
        for (g, group) in demand.groups.iter().enumerate() {
            let expected = group_demand(group, 18_801) as u64 * 40;
            assert_eq!(demand.group_total_users(g), expected);
        }
    }

    proptest! {
        /// Consolidating two replicas saves exactly one minimum-utilization
        /// increment: w(a) + w(b) - min = w(a + b).
        #[test]
        fn workload_is_affine(a in 0u64..2_000_000, b in 0u64..2_000_000) {
            let profile = WorkloadProfile::default();
            let lhs = replica_workload(a, &profile) + replica_workload(b, &profile)
                - profile.min_util_pct;
            let rhs = replica_workload(a + b, &profile);
            prop_assert!((lhs - rhs).abs() < 1e-9 * rhs.max(1.0));
        }

        #[test]
        fn group_demand_is_monotone_in_popularity(
            pop_lo in 0.0001f64..0.5, delta in 0.0001f64..0.5, users in 0u64..100_000
        ) {
            let lo = VmGroup { index: 1, popularity: pop_lo, vm_count: 1 };
            let hi = VmGroup { index: 2, popularity: pop_lo + delta, vm_count: 1 };
            prop_assert!(group_demand(&lo, users) <= group_demand(&hi, users));
        }

        #[test]
        fn servers_nondecreasing_in_users(n in 0u64..1_000_000, extra in 0u64..1_000_000) {
            let profile = WorkloadProfile::default();
            let a = servers_required(replica_workload(n, &profile)).unwrap();
            let b = servers_required(replica_workload(n + extra, &profile)).unwrap();
            prop_assert!(a <= b);
        }
    }
}
