//! Linear relaxation of a [`MilpModel`], solved with the in-process `minilp`
//! simplex. Integrality is dropped; branch-and-bound re-imposes it through
//! per-variable bound overrides.

use super::model::{CmpOp, MilpModel};
use minilp::{ComparisonOp, OptimizationDirection, Problem};

#[derive(Debug, Clone, PartialEq)]
pub enum RelaxOutcome {
    /// Objective value (including the model constant) and variable values.
    Optimal { objective: f64, values: Vec<f64> },
    Infeasible,
}

/// An extra linear row imposed at a search node (e.g. an aggregate branching
/// disjunction): sum of `terms` compared against `rhs`.
#[derive(Debug, Clone)]
pub struct ExtraRow {
    pub terms: std::rc::Rc<Vec<(usize, f64)>>,
    pub op: CmpOp,
    pub rhs: f64,
}

/// Solve the LP relaxation under `overrides` (variable index -> tightened
/// bounds) plus `extra` rows. Returns a valid lower bound for every integer
/// completion within those restrictions.
pub fn solve_relaxation(
    model: &MilpModel,
    overrides: &[(usize, f64, f64)],
    extra: &[ExtraRow],
) -> RelaxOutcome {
    let mut bounds: Vec<(f64, f64)> =
        model.variables.iter().map(|v| (v.lower, v.upper)).collect();
    for &(var, lo, hi) in overrides {
        let (cur_lo, cur_hi) = bounds[var];
        bounds[var] = (cur_lo.max(lo), cur_hi.min(hi));
    }
    if bounds.iter().any(|&(lo, hi)| lo > hi) {
        return RelaxOutcome::Infeasible;
    }

    let mut problem = Problem::new(OptimizationDirection::Minimize);
    let vars: Vec<minilp::Variable> = model
        .variables
        .iter()
        .zip(&bounds)
        .map(|(v, &(lo, hi))| problem.add_var(v.objective, (lo, hi)))
        .collect();
    for c in &model.constraints {
        let terms: Vec<(minilp::Variable, f64)> =
            c.terms.iter().map(|&(v, coef)| (vars[v], coef)).collect();
        let op = match c.op {
            CmpOp::Le => ComparisonOp::Le,
            CmpOp::Ge => ComparisonOp::Ge,
            CmpOp::Eq => ComparisonOp::Eq,
        };
        problem.add_constraint(&terms, op, c.rhs);
    }
    for row in extra {
        let terms: Vec<(minilp::Variable, f64)> =
            row.terms.iter().map(|&(v, coef)| (vars[v], coef)).collect();
        let op = match row.op {
            CmpOp::Le => ComparisonOp::Le,
            CmpOp::Ge => ComparisonOp::Ge,
            CmpOp::Eq => ComparisonOp::Eq,
        };
        problem.add_constraint(&terms, op, row.rhs);
    }
    match problem.solve() {
        Ok(solution) => {
            let values = vars.iter().map(|&v| solution[v]).collect();
            RelaxOutcome::Optimal {
                objective: solution.objective() + model.objective_constant,
                values,
            }
        }
        Err(minilp::Error::Infeasible) => RelaxOutcome::Infeasible,
        // All variables are bounded, so the LP cannot be unbounded; treat a
        // solver hiccup as "no usable bound" by returning -inf.
        Err(_) => RelaxOutcome::Optimal { objective: f64::NEG_INFINITY, values: Vec::new() },
    }
}
