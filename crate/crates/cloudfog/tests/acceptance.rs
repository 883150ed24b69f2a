//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (run with `--nocapture` to see them). Criteria 2-4 share one batch study
//! of the bundled 20-node instance.

use cloudfog::demand::{
    replica_workload, servers_required, standard_groups, users_per_olt, vm_users_per_pon,
    WorkloadProfile,
};
use cloudfog::instance::random_small;
use cloudfog::opt::{brute_force, build_model, export_lp, solve_branch_and_bound, SolveStatus};
use cloudfog::power::Evaluator;
use cloudfog::report::{run, RunConfig, ScenarioReport};
use cloudfog::scenario::SolverParams;
use once_cell::sync::Lazy;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

const NODE_LIMIT: u64 = 60;
const GAP_TOL: f64 = 0.01;
/// Savings targets for ocf vs sc at 1 / 10 / 25 Mbps and the allowed band.
const SAVINGS_TARGETS: [(f64, f64); 3] = [(1.0, 0.05), (10.0, 0.48), (25.0, 0.75)];
const SAVINGS_BAND: f64 = 0.15;

struct Study {
    scenarios: Vec<ScenarioReport>,
    seconds_per_scenario: f64,
}

static STUDY: Lazy<Study> = Lazy::new(|| {
    let mut config = RunConfig::default();
    config.out_dir = std::env::temp_dir().join("cloudfog_acceptance_study");
    config.node_limit = NODE_LIMIT;
    config.gap_tolerance = GAP_TOL;
    let started = Instant::now();
    let report = run(&config).expect("bundled study must run");
    let seconds_per_scenario = started.elapsed().as_secs_f64() / report.scenarios.len() as f64;
    Study { scenarios: report.scenarios, seconds_per_scenario }
});

fn scenario<'a>(study: &'a Study, name: &str) -> &'a ScenarioReport {
    study
        .scenarios
        .iter()
        .find(|s| s.name == name)
        .unwrap_or_else(|| panic!("scenario {name} missing from study"))
}

fn verdict(criterion: &str, pass: bool, detail: &str) {
    println!("ACCEPTANCE {criterion}: {} ({detail})", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {criterion} failed: {detail}");
}

#[test]
fn criterion_1_oracle_equivalence() {
    let started = Instant::now();
    let rates = [1.0, 10.0, 25.0];
    let mut checked = 0u32;
    let mut seed = 0u64;
    while checked < 100 {
        let rate = rates[(seed % 3) as usize];
        let inst = random_small(seed, rate);
        seed += 1;
        let ev = Evaluator::new(&inst.topo, &inst.demand, &inst.catalog).unwrap();
        let scenario = inst.scenario(SolverParams::default());
        let brute = match brute_force(&scenario, &ev, 300_000) {
            Ok(b) => b,
            Err(cloudfog::Error::BudgetExceeded { .. }) => continue,
            Err(cloudfog::Error::Infeasible(_)) => continue,
            Err(e) => panic!("seed {seed}: {e}"),
        };
        let bnb = solve_branch_and_bound(&scenario, &ev).unwrap();
        assert_eq!(bnb.status, SolveStatus::Optimal, "seed {}", seed - 1);
        assert_eq!(
            bnb.objective,
            brute.objective,
            "seed {}: branch-and-bound {} != brute force {}",
            seed - 1,
            bnb.objective,
            brute.objective
        );
        checked += 1;
    }
    let elapsed = started.elapsed().as_secs_f64();
    verdict(
        "1 oracle-equivalence",
        checked >= 100 && elapsed < 120.0,
        &format!("{checked} instances exact in {elapsed:.1} s (< 120 s)"),
    );
}

#[test]
fn criterion_2_candidate_set_dominance() {
    let study = &STUDY;
    let mut worst = String::new();
    let mut pass = true;
    for rate in ["1", "10", "25"] {
        let sc = scenario(study, &format!("sc_{rate}"));
        let oc = scenario(study, &format!("oc_{rate}"));
        let ocf = scenario(study, &format!("ocf_{rate}"));
        for s in [sc, oc, ocf] {
            let (Some(obj), Some(bound)) = (s.objective_w, s.best_bound_w) else {
                pass = false;
                worst = format!("{} unsolved", s.name);
                continue;
            };
            // Reported incumbents respect the nested candidate sets exactly,
            // and each scenario's proven bound stays below its incumbent.
            if bound > obj + 1e-6 {
                pass = false;
                worst = format!("{}: bound {bound} above incumbent {obj}", s.name);
            }
        }
        let (sc_w, oc_w, ocf_w) = (
            sc.objective_w.unwrap_or(f64::INFINITY),
            oc.objective_w.unwrap_or(f64::INFINITY),
            ocf.objective_w.unwrap_or(f64::INFINITY),
        );
        if !(ocf_w <= oc_w * (1.0 + GAP_TOL) && oc_w <= sc_w * (1.0 + GAP_TOL)) {
            pass = false;
            worst = format!("rate {rate}: {ocf_w} / {oc_w} / {sc_w} not ordered");
        }
        // The true optima are provably ordered when each bound sits below
        // the next incumbent.
        if !(ocf.best_bound_w.unwrap_or(f64::NEG_INFINITY) <= oc_w + 1e-6
            && oc.best_bound_w.unwrap_or(f64::NEG_INFINITY) <= sc_w + 1e-6)
        {
            pass = false;
            worst = format!("rate {rate}: bounds exceed next incumbent");
        }
    }
    let budget_ok = study.seconds_per_scenario < 600.0;
    verdict(
        "2 candidate-set-dominance",
        pass && budget_ok,
        &format!(
            "ocf <= oc <= sc at all rates; {:.0} s/scenario (< 600 s){}",
            study.seconds_per_scenario,
            if worst.is_empty() { "" } else { &worst }
        ),
    );
}

#[test]
fn criterion_3_savings_trend() {
    let study = &STUDY;
    let mut savings = Vec::new();
    for (rate, _) in SAVINGS_TARGETS {
        let name = format!("ocf_{}", rate as u64);
        let s = scenario(study, &name);
        savings.push(s.savings_vs_sc.unwrap_or(f64::NAN));
    }
    let increasing = savings[0] < savings[1] && savings[1] < savings[2];
    let mut in_band = true;
    for (i, (_, target)) in SAVINGS_TARGETS.iter().enumerate() {
        if (savings[i] - target).abs() > SAVINGS_BAND {
            in_band = false;
        }
    }
    verdict(
        "3 savings-trend",
        increasing && in_band,
        &format!(
            "ocf vs sc savings {:.1}% / {:.1}% / {:.1}% (targets 5/48/75 +-15pp, strictly increasing)",
            savings[0] * 100.0,
            savings[1] * 100.0,
            savings[2] * 100.0
        ),
    );
}

#[test]
fn criterion_4_placement_patterns() {
    let study = &STUDY;

    // (a) 1 Mbps: the 0.05% group consolidates at exactly one cloud node.
    let ocf1 = scenario(study, "ocf_1");
    let g6_rows: Vec<_> =
        ocf1.placement_rows.iter().filter(|r| r.group == 6).collect();
    let a_pass = g6_rows.len() == 1 && g6_rows[0].tier == "cloud";

    // (b) 10 Mbps: no group is served from any cloud.
    let ocf10 = scenario(study, "ocf_10");
    let b_pass = !ocf10.placement_rows.iter().any(|r| r.tier == "cloud")
        && !ocf10.placement_rows.is_empty();

    // (c) 25 Mbps: popularity >= 2% at the access-fog tier in every PON;
    // 1% and below at the metro-fog tier.
    let ocf25 = scenario(study, "ocf_25");
    let mut c_pass = !ocf25.placement_rows.is_empty();
    for row in &ocf25.placement_rows {
        let expected = if row.popularity >= 0.02 { "access_fog" } else { "metro_fog" };
        if row.tier != expected {
            c_pass = false;
        }
    }
    for group in [1u8, 2, 3] {
        let count = ocf25
            .placement_rows
            .iter()
            .filter(|r| r.group == group && r.tier == "access_fog")
            .count();
        if count != 40 {
            c_pass = false; // one access fog per PON
        }
    }

    verdict(
        "4 placement-patterns",
        a_pass && b_pass && c_pass,
        &format!(
            "1 Mbps tail at one cloud: {a_pass}; 10 Mbps cloud-free: {b_pass}; 25 Mbps acc/metro split: {c_pass}"
        ),
    );
}

#[test]
fn criterion_5_workload_law() {
    let profile = WorkloadProfile::default();
    let exact = replica_workload(800, &profile) == 50.0 && replica_workload(0, &profile) == 1.0;

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut affine_ok = true;
    for _ in 0..1000 {
        let a = rng.gen_range(0u64..2_000_000);
        let b = rng.gen_range(0u64..2_000_000);
        let lhs =
            replica_workload(a, &profile) + replica_workload(b, &profile) - profile.min_util_pct;
        let rhs = replica_workload(a + b, &profile);
        if (lhs - rhs).abs() > 1e-9 * rhs.max(1.0) {
            affine_ok = false;
        }
    }
    verdict(
        "5 workload-law",
        exact && affine_ok,
        "w(800) = 50.0, w(0) = 1.0 exact; affine consolidation within 1e-9 on 1000 pairs",
    );
}

#[test]
fn criterion_6_demand_chain() {
    let olt_users = users_per_olt(1280.0, 33.7).unwrap();
    let vm_users = vm_users_per_pon(olt_users, 0.75, 0.66).unwrap();
    verdict(
        "6 demand-chain",
        olt_users == 37_982 && vm_users == 18_801,
        &format!("users/OLT {olt_users} (= 37982), VM users/PON {vm_users} (= 18801)"),
    );
}

#[test]
fn criterion_7_conservation_and_determinism() {
    // Conservation on every solved scenario of the shared study.
    let study = &STUDY;
    let groups = standard_groups();
    let vm_users = vm_users_per_pon(users_per_olt(1280.0, 33.7).unwrap(), 0.75, 0.66).unwrap();
    let mut conservation = true;
    for s in &study.scenarios {
        if s.placement_rows.is_empty() {
            continue;
        }
        for group in &groups {
            let demanded = cloudfog::demand::group_demand(group, vm_users) as u64
                * 40
                * group.vm_count as u64;
            let served: u64 = s
                .placement_rows
                .iter()
                .filter(|r| r.group == group.index)
                .map(|r| r.users)
                .sum();
            if served != demanded {
                conservation = false;
                println!(
                    "  conservation breach: {} group {} served {served} of {demanded}",
                    s.name, group.index
                );
            }
        }
    }

    // Determinism: identical config twice, byte-identical outputs.
    let base = std::env::temp_dir().join("cloudfog_acceptance_det");
    let mut config = RunConfig::default();
    config.modes = vec![cloudfog::scenario::Mode::Sc, cloudfog::scenario::Mode::Ocf];
    config.rates_mbps = vec![10.0];
    config.node_limit = 15;
    config.gap_tolerance = GAP_TOL;
    let mut bytes = Vec::new();
    for pass in 0..2 {
        config.out_dir = base.join(format!("pass{pass}"));
        run(&config).unwrap();
        let mut all = Vec::new();
        for file in ["power_breakdown.csv", "placement.csv", "summary.json"] {
            all.push(std::fs::read(config.out_dir.join(file)).unwrap());
        }
        bytes.push(all);
    }
    // The summaries embed the differing out_dir; compare after normalizing it.
    let normalize = |buf: &[u8], pass: usize| {
        String::from_utf8_lossy(buf).replace(&format!("pass{pass}"), "passN")
    };
    let determinism = bytes[0][0] == bytes[1][0]
        && bytes[0][1] == bytes[1][1]
        && normalize(&bytes[0][2], 0) == normalize(&bytes[1][2], 1);

    verdict(
        "7 conservation-and-determinism",
        conservation && determinism,
        &format!("served == demanded on all scenarios: {conservation}; reruns byte-identical: {determinism}"),
    );
}

#[test]
fn criterion_8_external_solver_cross_check() {
    // Skippable: requires python3 with scipy (HiGHS).
    let tool = concat!(env!("CARGO_MANIFEST_DIR"), "/tools/lp_check.py");
    let probe = std::process::Command::new("python3")
        .args(["-c", "import scipy.optimize, scipy.sparse, numpy"])
        .output();
    if !probe.map(|o| o.status.success()).unwrap_or(false) {
        println!("ACCEPTANCE 8 external-cross-check: SKIP (no python3 + scipy available)");
        return;
    }

    let solve_external = |lp_path: &std::path::Path, limit: f64| -> Option<(String, f64)> {
        let out = std::process::Command::new("python3")
            .arg(tool)
            .arg(lp_path)
            .arg(limit.to_string())
            .output()
            .ok()?;
        if !out.status.success() {
            return None;
        }
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).ok()?;
        Some((
            v["status"].as_str()?.to_string(),
            v["objective"].as_f64().unwrap_or(f64::NAN),
        ))
    };
    let dir = std::env::temp_dir().join("cloudfog_acceptance_lp");
    std::fs::create_dir_all(&dir).unwrap();

    // Small random instance solved to proven optimality by both sides.
    let inst = random_small(11, 10.0);
    let ev = Evaluator::new(&inst.topo, &inst.demand, &inst.catalog).unwrap();
    let scn = inst.scenario(SolverParams::default());
    let model = build_model(&scn, &ev).unwrap();
    let ours = solve_branch_and_bound(&scn, &ev).unwrap();
    assert_eq!(ours.status, SolveStatus::Optimal);
    let lp_path = dir.join("small.lp");
    std::fs::write(&lp_path, export_lp(&model)).unwrap();
    let Some((status, objective)) = solve_external(&lp_path, 60.0) else {
        println!("ACCEPTANCE 8 external-cross-check: SKIP (reference solver run failed)");
        return;
    };
    let small_ok = status == "optimal"
        && (objective - ours.objective).abs() <= 1e-6 * ours.objective.abs().max(1.0);

    // Bundled instance, sc at 10 Mbps: proven optimal internally.
    let topo = cloudfog::topology::bundled_bt20();
    let catalog = cloudfog::power::PowerCatalog::default();
    let mut population = cloudfog::demand::UserPopulation::default();
    population.user_data_rate_mbps = 10.0;
    let demand = cloudfog::demand::DemandMatrix::uniform(
        standard_groups(),
        &population,
        1280.0,
        topo.pon_count(),
    )
    .unwrap();
    let ev = Evaluator::new(&topo, &demand, &catalog).unwrap();
    let scn = cloudfog::scenario::Scenario::new(
        cloudfog::scenario::Mode::Sc,
        &topo,
        cloudfog::topology::NodeId(6),
        10.0,
        SolverParams::default(),
    )
    .unwrap();
    let model = build_model(&scn, &ev).unwrap();
    let ours_sc = solve_branch_and_bound(&scn, &ev).unwrap();
    assert_eq!(ours_sc.status, SolveStatus::Optimal);
    let lp_path = dir.join("bundled_sc_10.lp");
    std::fs::write(&lp_path, export_lp(&model)).unwrap();
    let Some((status_sc, objective_sc)) = solve_external(&lp_path, 120.0) else {
        println!("ACCEPTANCE 8 external-cross-check: SKIP (reference solver run failed)");
        return;
    };
    let sc_ok = status_sc == "optimal"
        && (objective_sc - ours_sc.objective).abs() <= 1e-6 * ours_sc.objective.abs().max(1.0);

    verdict(
        "8 external-cross-check",
        small_ok && sc_ok,
        &format!(
            "small instance: ours {:.2} vs HiGHS {objective:.2}; bundled sc@10: ours {:.2} vs HiGHS {objective_sc:.2} (1e-6 relative)",
            ours.objective, ours_sc.objective
        ),
    );
}
