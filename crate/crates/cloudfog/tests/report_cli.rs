//! Report emission and CLI behavior.

use cloudfog::demand::{DemandMatrix, VmGroup, WorkloadProfile};
use cloudfog::power::{Evaluator, PowerCatalog};
use cloudfog::report::{emit_placement_map, run, RunConfig, SolverChoice};
use cloudfog::scenario::Mode;
use std::process::Command;

fn small_config(out: &std::path::Path) -> (RunConfig, tempfile::NamedTempFile) {
    // A 3-node topology keeps solves instant while exercising every tier.
    let topo_json = serde_json::json!({
        "schema_version": 1,
        "name": "mini",
        "nodes": [
            {"id": 1, "name": "a"}, {"id": 2, "name": "b"}, {"id": 3, "name": "c"}
        ],
        "links": [
            {"a": 1, "b": 2, "distance_km": 120.0, "fiber_count": 4},
            {"a": 2, "b": 3, "distance_km": 150.0, "fiber_count": 4},
            {"a": 1, "b": 3, "distance_km": 200.0, "fiber_count": 4}
        ],
        "pons_per_node": 1,
        "onus_per_pon": 32
    });
    let file = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(file.path(), topo_json.to_string()).unwrap();

    let mut config = RunConfig::default();
    config.topology = Some(file.path().to_path_buf());
    config.modes = vec![Mode::Sc, Mode::Ocf];
    config.rates_mbps = vec![10.0];
    config.sc_node = 2;
    config.node_limit = 500;
    config.gap_tolerance = 0.0;
    config.out_dir = out.to_path_buf();
    (config, file)
}

#[test]
fn breakdown_csv_cells_equal_evaluator_fields() {
    let dir = tempfile::tempdir().unwrap();
    let (config, _topo) = small_config(dir.path());
    let report = run(&config).unwrap();
    assert!(report.all_solved);

    let csv = std::fs::read_to_string(dir.path().join("power_breakdown.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "scenario,rate_mbps,core_w,metro_w,access_w,proc_cloud_w,proc_mfog_w,proc_afog_w,total_w,savings_vs_sc"
    );
    for (line, s) in lines.zip(&report.scenarios) {
        let cells: Vec<&str> = line.split(',').collect();
        let b = s.breakdown.as_ref().unwrap();
        assert_eq!(cells[0], s.name);
        // Every numeric cell round-trips to exactly the evaluator's field.
        assert_eq!(cells[2].parse::<f64>().unwrap(), b.core_w);
        assert_eq!(cells[3].parse::<f64>().unwrap(), b.metro_w);
        assert_eq!(cells[4].parse::<f64>().unwrap(), b.access_w);
        assert_eq!(cells[5].parse::<f64>().unwrap(), b.processing_cloud_w);
        assert_eq!(cells[6].parse::<f64>().unwrap(), b.processing_metro_fog_w);
        assert_eq!(cells[7].parse::<f64>().unwrap(), b.processing_access_fog_w);
        assert_eq!(cells[8].parse::<f64>().unwrap(), b.total_w);
    }
}

#[test]
fn placement_rows_are_stably_ordered() {
    let dir = tempfile::tempdir().unwrap();
    let (config, _topo) = small_config(dir.path());
    let report = run(&config).unwrap();
    for s in &report.scenarios {
        let keys: Vec<(u8, &str, &str)> = s
            .placement_rows
            .iter()
            .map(|r| (r.group, r.tier, r.location.as_str()))
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted, "rows of {} not in stable order", s.name);
    }
}

#[test]
fn empty_demand_emits_empty_placement_map() {
    let json = serde_json::json!({
        "schema_version": 1,
        "name": "idle",
        "nodes": [{"id": 1, "name": "a"}],
        "links": [],
        "pons_per_node": 1,
        "onus_per_pon": 4
    })
    .to_string();
    let topo = cloudfog::topology::load_topology(&json).unwrap();
    let demand = DemandMatrix {
        groups: vec![VmGroup { index: 1, popularity: 0.1, vm_count: 1 }],
        users: vec![vec![0]],
        profile: WorkloadProfile::default(),
        rate_mbps: 10.0,
    };
    let catalog = PowerCatalog::default();
    let ev = Evaluator::new(&topo, &demand, &catalog).unwrap();
    let placement = cloudfog::power::Placement::unassigned(1, 1);
    assert!(emit_placement_map(&placement, &ev).is_empty());
}

#[test]
fn missing_sc_baseline_omits_savings_with_warning() {
    let dir = tempfile::tempdir().unwrap();
    let (mut config, _topo) = small_config(dir.path());
    config.modes = vec![Mode::Ocf];
    let report = run(&config).unwrap();
    assert!(report.scenarios[0].savings_vs_sc.is_none());
    assert!(report.warnings.iter().any(|w| w.contains("no sc baseline")));
}

#[test]
fn export_mode_writes_lp_files() {
    let dir = tempfile::tempdir().unwrap();
    let (mut config, _topo) = small_config(dir.path());
    config.solver = SolverChoice::Export;
    let report = run(&config).unwrap();
    assert!(report.all_solved);
    assert!(dir.path().join("sc_10.lp").exists());
    assert!(dir.path().join("ocf_10.lp").exists());
    let text = std::fs::read_to_string(dir.path().join("ocf_10.lp")).unwrap();
    let back = cloudfog::opt::import_lp(&text).unwrap();
    assert!(back.constraints.len() > 0);
}

#[test]
fn greedy_solver_choice_reports_heuristic_rows() {
    let dir = tempfile::tempdir().unwrap();
    let (mut config, _topo) = small_config(dir.path());
    config.solver = SolverChoice::Greedy;
    let report = run(&config).unwrap();
    assert!(report.scenarios.iter().all(|s| s.status == "heuristic"));
    // Savings still computed against the greedy sc baseline.
    assert!(report.scenarios[1].savings_vs_sc.is_some());
}

#[test]
fn cli_runs_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_cloudfog"))
        .args([
            "--mode",
            "sc",
            "--rate",
            "10",
            "--node-limit",
            "5",
            "--out",
            dir.path().to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("summary.json").exists());
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("summary.json")).unwrap())
            .unwrap();
    assert_eq!(summary["schema_version"], 1);
    assert_eq!(summary["scenarios"][0]["status"], "optimal");
    // Full parameter echo present.
    assert!(summary["catalog"]["server_power_w"].is_number());
    assert_eq!(summary["topology"]["nodes"], 20);
}

#[test]
fn cli_rejects_bad_flags_and_configs() {
    let out = Command::new(env!("CARGO_BIN_EXE_cloudfog"))
        .args(["--mode", "warp"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("mode"), "diagnostic names the field: {stderr}");

    let config = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(config.path(), r#"{"rates_mbps": []}"#).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_cloudfog"))
        .args(["--config", config.path().to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("rates_mbps"));
}

#[test]
fn cli_server_power_flag_overrides_catalog() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_cloudfog"))
        .args([
            "--mode",
            "sc",
            "--rate",
            "1",
            "--node-limit",
            "5",
            "--server-power",
            "555",
            "--out",
            dir.path().to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("summary.json")).unwrap())
            .unwrap();
    assert_eq!(summary["catalog"]["server_power_w"], 555.0);
}
