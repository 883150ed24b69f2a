//! Export the optimization model in LP file format and re-import it.
//!
//! Usage: cargo run --release --example export_lp [out.lp]
//!
//! Without an argument a small instance is exported to stdout; with a path
//! the bundled 20-node instance (ocf at 25 Mbps) is written to the file.

use cloudfog::demand::{standard_groups, DemandMatrix, UserPopulation};
use cloudfog::instance::random_small;
use cloudfog::opt::{build_model, export_lp, import_lp};
use cloudfog::power::{Evaluator, PowerCatalog};
use cloudfog::scenario::{Mode, Scenario, SolverParams};
use cloudfog::topology::{bundled_bt20, NodeId};

fn main() {
    match std::env::args().nth(1) {
        None => {
            let inst = random_small(3, 10.0);
            let ev = Evaluator::new(&inst.topo, &inst.demand, &inst.catalog).unwrap();
            let scenario = inst.scenario(SolverParams::default());
            let model = build_model(&scenario, &ev).unwrap();
            let text = export_lp(&model);
            print!("{text}");
            let back = import_lp(&text).unwrap();
            eprintln!(
                "\\ re-import check: {} variables, {} constraints (matches: {})",
                back.variables.len(),
                back.constraints.len(),
                back.variables.len() == model.var_count()
                    && back.constraints.len() == model.constraint_count()
            );
        }
        Some(path) => {
            let topo = bundled_bt20();
            let catalog = PowerCatalog::default();
            let mut population = UserPopulation::default();
            population.user_data_rate_mbps = 25.0;
            let demand =
                DemandMatrix::uniform(standard_groups(), &population, 1280.0, topo.pon_count())
                    .unwrap();
            let ev = Evaluator::new(&topo, &demand, &catalog).unwrap();
            let scenario =
                Scenario::new(Mode::Ocf, &topo, NodeId(6), 25.0, SolverParams::default())
                    .unwrap();
            let model = build_model(&scenario, &ev).unwrap();
            std::fs::write(&path, export_lp(&model)).expect("writable output path");
            println!(
                "wrote {} ({} variables, {} constraints)",
                path,
                model.var_count(),
                model.constraint_count()
            );
        }
    }
}
