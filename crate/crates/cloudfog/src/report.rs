//! Scenario batch runner: configuration ingestion, solve orchestration, and
//! CSV/JSON result emission.
//!
//! Outputs per run directory:
//! * `power_breakdown.csv` — one row per solved scenario with the tier power
//!   split and the savings against the same-rate `sc` baseline.
//! * `placement.csv` — the placement map: one row per (group, serving
//!   location), stable (group, location-ordinal) order.
//! * `summary.json` — full parameter echo plus per-scenario solve summaries,
//!   so any figure is reproducible from its own output file.
//!
//! Every numeric cell is taken verbatim from the evaluator/solver result (no
//! re-computation here), files are written atomically, and reruns with the
//! same configuration produce byte-identical bytes.

use crate::demand::{standard_groups, DemandMatrix, UserPopulation};
use crate::error::{Error, Result};
use crate::opt::{brute_force, build_model, export_lp, greedy_place, solve_branch_and_bound};
use crate::opt::{SolveResult, SolveStatus};
use crate::power::{Evaluator, Location, Placement, PowerBreakdown, PowerCatalog};
use crate::scenario::{Mode, Scenario, SolverParams};
use crate::topology::{bundled_bt20, load_topology, CoreTopology, NodeId};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

pub const SUMMARY_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverChoice {
    /// Exact branch-and-bound.
    Bnb,
    /// Greedy heuristic only.
    Greedy,
    /// Write the LP-format model per scenario instead of solving.
    Export,
    /// Exhaustive enumeration (small instances only).
    Brute,
}

impl std::str::FromStr for SolverChoice {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bnb" => Ok(SolverChoice::Bnb),
            "greedy" => Ok(SolverChoice::Greedy),
            "export" => Ok(SolverChoice::Export),
            "brute" => Ok(SolverChoice::Brute),
            other => Err(Error::ConfigField {
                field: "solver".into(),
                reason: format!("unknown solver `{other}` (expected bnb, greedy, export or brute)"),
            }),
        }
    }
}

/// Batch run configuration. The JSON config document mirrors this struct;
/// all fields are optional there and default as below.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    /// Topology document path; `None` uses the bundled 20-node instance.
    pub topology: Option<PathBuf>,
    pub modes: Vec<Mode>,
    pub rates_mbps: Vec<f64>,
    /// Core node hosting the single cloud in `sc` mode.
    pub sc_node: u32,
    /// Partial overrides merged over the default power catalog.
    pub catalog: serde_json::Value,
    /// Overrides for the demand population model.
    pub population: UserPopulation,
    pub solver: SolverChoice,
    pub gap_tolerance: f64,
    pub node_limit: u64,
    pub time_limit_s: f64,
    pub brute_force_budget: u128,
    pub out_dir: PathBuf,
    pub seed: u64,
    pub include_onu_in_savings: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            topology: None,
            modes: vec![Mode::Sc, Mode::Oc, Mode::Ocf],
            rates_mbps: vec![1.0, 10.0, 25.0],
            sc_node: 6,
            catalog: serde_json::Value::Object(Default::default()),
            population: UserPopulation::default(),
            solver: SolverChoice::Bnb,
            gap_tolerance: 0.01,
            node_limit: 120,
            time_limit_s: 0.0,
            brute_force_budget: crate::opt::DEFAULT_BRUTE_BUDGET,
            out_dir: PathBuf::from("out"),
            seed: 0,
            include_onu_in_savings: false,
        }
    }
}

impl RunConfig {
    pub fn from_json(json: &str) -> Result<Self> {
        let config: RunConfig = serde_json::from_str(json).map_err(|e| Error::ConfigField {
            field: "config".into(),
            reason: e.to_string(),
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.modes.is_empty() {
            return Err(Error::ConfigField {
                field: "modes".into(),
                reason: "at least one scenario mode is required".into(),
            });
        }
        if self.rates_mbps.is_empty() {
            return Err(Error::ConfigField {
                field: "rates_mbps".into(),
                reason: "at least one data rate is required".into(),
            });
        }
        if self.rates_mbps.iter().any(|&r| !(r > 0.0)) {
            return Err(Error::ConfigField {
                field: "rates_mbps".into(),
                reason: "rates must be positive".into(),
            });
        }
        if !(self.gap_tolerance >= 0.0) {
            return Err(Error::ConfigField {
                field: "gap_tolerance".into(),
                reason: "gap tolerance must be non-negative".into(),
            });
        }
        Ok(())
    }

    /// The effective catalog: defaults overlaid with the config's overrides.
    pub fn resolved_catalog(&self) -> Result<PowerCatalog> {
        let mut base = serde_json::to_value(PowerCatalog::default()).map_err(Error::Serialize)?;
        if let (Some(base_map), Some(over)) = (base.as_object_mut(), self.catalog.as_object()) {
            for (k, v) in over {
                if !base_map.contains_key(k) {
                    return Err(Error::ConfigField {
                        field: format!("catalog.{k}"),
                        reason: "unknown catalog field".into(),
                    });
                }
                base_map.insert(k.clone(), v.clone());
            }
        } else if !self.catalog.is_null() && !self.catalog.is_object() {
            return Err(Error::ConfigField {
                field: "catalog".into(),
                reason: "catalog overrides must be a JSON object".into(),
            });
        }
        let catalog: PowerCatalog =
            serde_json::from_value(base).map_err(|e| Error::ConfigField {
                field: "catalog".into(),
                reason: e.to_string(),
            })?;
        catalog.validate()?;
        Ok(catalog)
    }

    pub fn load_topology(&self) -> Result<CoreTopology> {
        match &self.topology {
            None => Ok(bundled_bt20()),
            Some(path) => {
                let text = std::fs::read_to_string(path)?;
                load_topology(&text)
            }
        }
    }

    fn solver_params(&self) -> SolverParams {
        SolverParams {
            gap_tolerance: self.gap_tolerance,
            node_limit: self.node_limit,
            time_limit_s: self.time_limit_s,
        }
    }
}

/// One row of the placement map: a (group, serving location) pair.
#[derive(Debug, Clone, Serialize)]
pub struct PlacementRow {
    pub group: u8,
    pub popularity: f64,
    pub tier: &'static str,
    pub location: String,
    /// Users served at this location by the group (all its VMs).
    pub users: u64,
    /// Whole servers the group's replicas need here before cross-group
    /// pooling.
    pub servers: u32,
}

/// Solve summary of one scenario.
#[derive(Debug, Clone, Serialize)]
pub struct ScenarioReport {
    pub name: String,
    pub mode: Mode,
    pub rate_mbps: f64,
    pub status: String,
    pub objective_w: Option<f64>,
    pub best_bound_w: Option<f64>,
    pub gap: Option<f64>,
    pub explored_nodes: Option<u64>,
    pub breakdown: Option<PowerBreakdown>,
    pub savings_vs_sc: Option<f64>,
    #[serde(skip)]
    pub placement: Option<Placement>,
    #[serde(skip)]
    pub placement_rows: Vec<PlacementRow>,
}

/// Full batch outcome plus the emitted file bytes.
#[derive(Debug)]
pub struct RunReport {
    pub scenarios: Vec<ScenarioReport>,
    pub all_solved: bool,
    pub warnings: Vec<String>,
    pub out_dir: PathBuf,
}

/// Placement map rows for a solved scenario, in stable (group,
/// location-ordinal) order.
pub fn emit_placement_map(
    placement: &Placement,
    ev: &Evaluator<'_>,
) -> Vec<PlacementRow> {
    use std::collections::BTreeMap;
    let demand = ev.demand;
    let mut rows: BTreeMap<(usize, Location), (u64, u64)> = BTreeMap::new();
    for g in 0..demand.group_count() {
        for p in 0..demand.pon_count() {
            if let Some(loc) = placement.assign[g][p] {
                let entry = rows.entry((g, loc)).or_insert((0, 0));
                entry.0 += demand.users[g][p] as u64 * demand.groups[g].vm_count as u64;
                entry.1 += demand.users[g][p] as u64;
            }
        }
    }
    rows.into_iter()
        .map(|((g, loc), (users, per_vm_users))| {
            let group = &demand.groups[g];
            let workload = group.vm_count as f64
                * crate::demand::replica_workload(per_vm_users, &demand.profile);
            PlacementRow {
                group: group.index,
                popularity: group.popularity,
                tier: loc.tier_name(),
                location: loc.to_string(),
                users,
                servers: crate::demand::servers_required(workload).unwrap_or(0),
            }
        })
        .collect()
}

fn scenario_status(result: &SolveResult) -> &'static str {
    match result.status {
        SolveStatus::Optimal => "optimal",
        SolveStatus::GapReached => "gap_reached",
        SolveStatus::LimitReached => "limit_reached",
        SolveStatus::Infeasible => "infeasible",
    }
}

/// Execute every (mode, rate) scenario of `config` and write the result
/// files. Fails early on configuration errors; solver failures are reported
/// per scenario.
pub fn run(config: &RunConfig) -> Result<RunReport> {
    config.validate()?;
    let catalog = config.resolved_catalog()?;
    let topo = config.load_topology()?;
    if !topo.contains(NodeId(config.sc_node)) {
        return Err(Error::ConfigField {
            field: "sc_node".into(),
            reason: format!("node {} is not in the topology", config.sc_node),
        });
    }
    std::fs::create_dir_all(&config.out_dir)?;

    let mut scenarios = Vec::new();
    let mut warnings = Vec::new();
    let mut all_solved = true;

    for &rate in &config.rates_mbps {
        let mut population = config.population.clone();
        population.user_data_rate_mbps = rate;
        let demand = DemandMatrix::uniform(
            standard_groups(),
            &population,
            1280.0,
            topo.pon_count(),
        )?;
        let ev = Evaluator::new(&topo, &demand, &catalog)?;

        let mut sc_breakdown: Option<PowerBreakdown> = None;
        for &mode in &config.modes {
            let name = format!("{}_{}", mode.name(), trim_rate(rate));
            let scenario =
                Scenario::new(mode, &topo, NodeId(config.sc_node), rate, config.solver_params())?;

            if config.solver == SolverChoice::Export {
                let model = build_model(&scenario, &ev)?;
                let text = export_lp(&model);
                write_atomic(&config.out_dir.join(format!("{name}.lp")), text.as_bytes())?;
                scenarios.push(ScenarioReport {
                    name,
                    mode,
                    rate_mbps: rate,
                    status: "exported".into(),
                    objective_w: None,
                    best_bound_w: None,
                    gap: None,
                    explored_nodes: None,
                    breakdown: None,
                    savings_vs_sc: None,
                    placement: None,
                    placement_rows: Vec::new(),
                });
                continue;
            }

            let result: SolveResult = match config.solver {
                SolverChoice::Bnb => solve_branch_and_bound(&scenario, &ev)?,
                SolverChoice::Greedy => match greedy_place(&scenario, &ev) {
                    Ok(g) => SolveResult {
                        objective: g.breakdown.total_w,
                        best_bound: f64::NEG_INFINITY,
                        gap: f64::INFINITY,
                        explored_nodes: g.moves_applied,
                        status: SolveStatus::LimitReached,
                        placement: Some(g.placement),
                        breakdown: Some(g.breakdown),
                    },
                    Err(_) => SolveResult {
                        objective: f64::INFINITY,
                        best_bound: f64::INFINITY,
                        gap: 0.0,
                        explored_nodes: 0,
                        status: SolveStatus::Infeasible,
                        placement: None,
                        breakdown: None,
                    },
                },
                SolverChoice::Brute => {
                    match brute_force(&scenario, &ev, config.brute_force_budget) {
                        Ok(b) => SolveResult {
                            objective: b.objective,
                            best_bound: b.objective,
                            gap: 0.0,
                            explored_nodes: b.evaluations,
                            status: SolveStatus::Optimal,
                            placement: Some(b.placement),
                            breakdown: Some(b.breakdown),
                        },
                        Err(Error::Infeasible(_)) => SolveResult {
                            objective: f64::INFINITY,
                            best_bound: f64::INFINITY,
                            gap: 0.0,
                            explored_nodes: 0,
                            status: SolveStatus::Infeasible,
                            placement: None,
                            breakdown: None,
                        },
                        Err(e) => return Err(e),
                    }
                }
                SolverChoice::Export => unreachable!(),
            };

            let solved = result.placement.is_some();
            if !solved {
                all_solved = false;
                warnings.push(format!("scenario {name}: no feasible placement"));
            }

            let status = match config.solver {
                SolverChoice::Greedy if solved => "heuristic".to_string(),
                _ => scenario_status(&result).to_string(),
            };

            if mode == Mode::Sc && sc_breakdown.is_none() {
                sc_breakdown = result.breakdown;
            }
            let savings = match (&sc_breakdown, &result.breakdown) {
                (Some(sc), Some(b)) => {
                    let base = sc.comparable_total(config.include_onu_in_savings);
                    if base > 0.0 {
                        Some((base - b.comparable_total(config.include_onu_in_savings)) / base)
                    } else {
                        None
                    }
                }
                _ => None,
            };
            if mode != Mode::Sc && sc_breakdown.is_none() && solved {
                warnings.push(format!(
                    "scenario {name}: no sc baseline at {rate} Mbps in this run; savings omitted"
                ));
            }

            let placement_rows = result
                .placement
                .as_ref()
                .map(|p| emit_placement_map(p, &ev))
                .unwrap_or_default();

            scenarios.push(ScenarioReport {
                name,
                mode,
                rate_mbps: rate,
                status,
                objective_w: solved.then_some(result.objective),
                best_bound_w: result.best_bound.is_finite().then_some(result.best_bound),
                gap: result.gap.is_finite().then_some(result.gap),
                explored_nodes: Some(result.explored_nodes),
                breakdown: result.breakdown,
                savings_vs_sc: savings,
                placement: result.placement,
                placement_rows,
            });
        }
    }

    if config.solver != SolverChoice::Export {
        write_atomic(
            &config.out_dir.join("power_breakdown.csv"),
            breakdown_csv(&scenarios).as_bytes(),
        )?;
        write_atomic(
            &config.out_dir.join("placement.csv"),
            placement_csv(&scenarios).as_bytes(),
        )?;
    }
    let summary = summary_json(config, &catalog, &topo, &scenarios)?;
    write_atomic(&config.out_dir.join("summary.json"), summary.as_bytes())?;

    Ok(RunReport { scenarios, all_solved, warnings, out_dir: config.out_dir.clone() })
}

fn trim_rate(rate: f64) -> String {
    if rate.fract() == 0.0 {
        format!("{}", rate as u64)
    } else {
        format!("{rate}")
    }
}

fn breakdown_csv(scenarios: &[ScenarioReport]) -> String {
    let mut out = String::from(
        "scenario,rate_mbps,core_w,metro_w,access_w,proc_cloud_w,proc_mfog_w,proc_afog_w,total_w,savings_vs_sc\n",
    );
    for s in scenarios {
        let Some(b) = &s.breakdown else { continue };
        let savings = s.savings_vs_sc.map(|v| v.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            s.name,
            trim_rate(s.rate_mbps),
            b.core_w,
            b.metro_w,
            b.access_w,
            b.processing_cloud_w,
            b.processing_metro_fog_w,
            b.processing_access_fog_w,
            b.total_w,
            savings
        );
    }
    out
}

fn placement_csv(scenarios: &[ScenarioReport]) -> String {
    let mut out =
        String::from("scenario,rate_mbps,group,popularity,tier,location,users,servers\n");
    for s in scenarios {
        for row in &s.placement_rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                s.name,
                trim_rate(s.rate_mbps),
                row.group,
                row.popularity,
                row.tier,
                row.location,
                row.users,
                row.servers
            );
        }
    }
    out
}

fn summary_json(
    config: &RunConfig,
    catalog: &PowerCatalog,
    topo: &CoreTopology,
    scenarios: &[ScenarioReport],
) -> Result<String> {
    #[derive(Serialize)]
    struct TopoEcho<'a> {
        name: &'a str,
        nodes: usize,
        links: usize,
        pons: usize,
    }
    #[derive(Serialize)]
    struct Summary<'a> {
        schema_version: u32,
        config: &'a RunConfig,
        catalog: &'a PowerCatalog,
        topology: TopoEcho<'a>,
        scenarios: &'a [ScenarioReport],
    }
    let summary = Summary {
        schema_version: SUMMARY_SCHEMA_VERSION,
        config,
        catalog,
        topology: TopoEcho {
            name: &topo.name,
            nodes: topo.node_count(),
            links: topo.links.len(),
            pons: topo.pon_count(),
        },
        scenarios,
    };
    let mut text = serde_json::to_string_pretty(&summary).map_err(Error::Serialize)?;
    text.push('\n');
    Ok(text)
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}
