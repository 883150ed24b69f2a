//! Energy-optimal placement of VM services across a three-tier cloud /
//! metro-fog / access-fog telecom architecture.
//!
//! The library models a core network (IP over WDM), per-node metro segments
//! and per-node PON access segments, derives per-PON user demand for a set of
//! VM popularity groups, and finds the placement of group replicas (access
//! fog, metro fog, or cloud) that minimizes total power. Three approaches are
//! compared: a single cloud (`sc`), optimized clouds (`oc`), and optimized
//! clouds plus fogs (`ocf`).
//!
//! Start with the runnable examples:
//!
//! ```text
//! cargo run --release --example topology     # load + validate + route
//! cargo run --release --example demand_chain # population-to-demand numbers
//! cargo run --release --example evaluate     # power of a hand-built placement
//! cargo run --release --example solve_toy    # exact solve vs brute force
//! cargo run --release --example export_lp    # LP-format model export
//! cargo run --release --example greedy_gap   # heuristic vs exact on random instances
//! cargo run --release --example patterns     # per-group tier pattern costs
//! cargo run --release --example study        # full sc/oc/ocf x rate batch -> CSV
//! ```
//!
//! The `cloudfog` binary wraps [`report::run`] for batch studies; see the
//! README for flags.

pub mod demand;
pub mod error;
pub mod instance;
pub mod opt;
pub mod power;
pub mod report;
pub mod scenario;
pub mod topology;

pub use error::{Error, Result};
