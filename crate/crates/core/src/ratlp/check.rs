//! Re-evaluates a claimed optimum against the problem, independent of the solver.

use alloc::format;
use alloc::string::String;

use num_traits::{One, Zero};

use super::problem::LpProblem;
use super::{LpSolution, Status};

/// Checks bounds, integrality, every constraint, and the reported objective value.
pub fn check_solution(prob: &LpProblem, sol: &LpSolution) -> Result<(), String> {
    if sol.status != Status::Optimal {
        return Ok(());
    }
    if sol.values.len() != prob.vars.len() {
        return Err(format!("{} values for {} variables", sol.values.len(), prob.vars.len()));
    }
    for (def, x) in prob.vars.iter().zip(&sol.values) {
        if def.lower.as_ref().is_some_and(|l| x < l) || def.upper.as_ref().is_some_and(|u| x > u) {
            return Err(format!("{} = {} is out of bounds", def.name, x));
        }
    }
    for b in &prob.binaries {
        let x = &sol.values[b.0];
        if !x.is_zero() && !x.is_one() {
            return Err(format!("binary {} = {}", prob.vars[b.0].name, x));
        }
    }
    for c in &prob.constraints {
        let lhs = c.expr.eval(&sol.values);
        if !c.rel.holds(&lhs, &c.rhs) {
            return Err(format!("{}: {} vs {}", c.name, lhs, c.rhs));
        }
    }
    let obj = prob.objective.eval(&sol.values);
    if sol.objective.as_ref() != Some(&obj) {
        return Err(format!("objective reported {:?}, evaluates to {}", sol.objective, obj));
    }
    Ok(())
}
