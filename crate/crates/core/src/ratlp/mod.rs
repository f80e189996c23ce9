//! Exact rational LP and mixed 0-1 solver.

mod check;
mod mip;
mod problem;
mod simplex;

use alloc::vec::Vec;

pub use check::check_solution;
pub use mip::solve_mip;
pub use problem::{Constraint, LinExpr, LpError, LpProblem, Relation, Sense, Var, VarDef};
pub use simplex::solve_lp;

use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub status: Status,
    /// Indexed by [`Var`]; empty unless optimal.
    pub values: Vec<Rational>,
    pub objective: Option<Rational>,
}

impl LpSolution {
    pub fn value(&self, v: Var) -> &Rational {
        &self.values[v.0]
    }
}

#[cfg(test)]
mod tests;
