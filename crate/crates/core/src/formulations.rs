//! The four assignment programs over `x_ij` (fraction of job `j` on machine `i`).
//!
//! * `Lp1`: each job fully assigned, machine loads ≤ `C_max`.
//! * `Lp2`: `Lp1` plus job lengths `Σ_i x_ij p_ij ≤ C_max`.
//! * `Lp3`: `Lp1` plus `r_j + Σ_i x_ij p_ij ≤ C_max`.
//! * `Milp`: binaries `z_ij ≥ x_ij`, release-aware load rows
//!   `z_ij r_j + Σ_{l: r_l ≥ r_j} x_il p_il ≤ C_max` for every `(i, j)` in place
//!   of the plain load rows, plus the `Lp3` job rows.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::model::{Distribution, Instance, ModelError, Ptime};
use crate::ratlp::{self, LinExpr, LpError, LpProblem, LpSolution, Relation, Status, Var};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormulationKind {
    Lp1,
    Lp2,
    Lp3,
    Milp,
}

impl FormulationKind {
    pub const ALL: [FormulationKind; 4] =
        [FormulationKind::Lp1, FormulationKind::Lp2, FormulationKind::Lp3, FormulationKind::Milp];

    pub fn name(self) -> &'static str {
        match self {
            FormulationKind::Lp1 => "lp1",
            FormulationKind::Lp2 => "lp2",
            FormulationKind::Lp3 => "lp3",
            FormulationKind::Milp => "milp",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormulationError {
    Model(ModelError),
    Solver(LpError),
    NotOptimal(Status),
}

impl fmt::Display for FormulationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormulationError::Model(e) => write!(f, "{e}"),
            FormulationError::Solver(e) => write!(f, "{e}"),
            FormulationError::NotOptimal(s) => write!(f, "program is {s:?}"),
        }
    }
}

impl core::error::Error for FormulationError {}

impl From<LpError> for FormulationError {
    fn from(e: LpError) -> Self {
        FormulationError::Solver(e)
    }
}

/// A built program together with the variable handles needed to read it back.
#[derive(Debug, Clone)]
pub struct Formulation {
    pub kind: FormulationKind,
    pub problem: LpProblem,
    /// `x[i][j]`, absent for forbidden pairs.
    pub x: Vec<Vec<Option<Var>>>,
    /// `z[i][j]` (MILP only), absent for forbidden pairs.
    pub z: Vec<Vec<Option<Var>>>,
    pub cmax: Var,
}

pub fn build(inst: &Instance, kind: FormulationKind) -> Result<Formulation, FormulationError> {
    let (m, n) = (inst.machines(), inst.jobs());
    for j in 0..n {
        if (0..m).all(|i| inst.p(i, j) == &Ptime::Forbidden) {
            return Err(FormulationError::Model(ModelError::NoMachine { job: j }));
        }
    }
    let zero = || Some(Rational::zero());
    let mut prob = LpProblem::new();
    let mut x = vec![vec![None; n]; m];
    for (i, row) in x.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            if inst.p(i, j).finite().is_some() {
                *cell = Some(prob.add_var(format!("x_{}_{}", i + 1, j + 1), zero(), Some(Rational::one())));
            }
        }
    }
    let mut z = vec![vec![None; n]; m];
    if kind == FormulationKind::Milp {
        for (i, row) in z.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                if inst.p(i, j).finite().is_some() {
                    *cell = Some(prob.add_binary(format!("z_{}_{}", i + 1, j + 1)));
                }
            }
        }
    }
    let cmax = prob.add_var("cmax", zero(), None);
    let minus_one = -Rational::one();
    let work = |i: usize, j: usize| -> Option<(Var, Rational)> {
        Some((x[i][j]?, inst.p(i, j).finite()?.clone()))
    };

    for j in 0..n {
        let expr = LinExpr { terms: (0..m).filter_map(|i| x[i][j]).map(|v| (v, Rational::one())).collect() };
        prob.constrain(format!("assign_{}", j + 1), expr, Relation::Eq, Rational::one());
    }
    if kind != FormulationKind::Milp {
        for i in 0..m {
            let mut expr = LinExpr { terms: (0..n).filter_map(|j| work(i, j)).collect() };
            expr.add(cmax, minus_one.clone());
            prob.constrain(format!("machine_{}", i + 1), expr, Relation::Le, Rational::zero());
        }
    }
    if kind != FormulationKind::Lp1 {
        for j in 0..n {
            let mut expr = LinExpr { terms: (0..m).filter_map(|i| work(i, j)).collect() };
            expr.add(cmax, minus_one.clone());
            if kind == FormulationKind::Lp2 {
                prob.constrain(format!("job_{}", j + 1), expr, Relation::Le, Rational::zero());
            } else {
                prob.constrain(format!("release_{}", j + 1), expr, Relation::Le, -inst.release(j).clone());
            }
        }
    }
    if kind == FormulationKind::Milp {
        for i in 0..m {
            for j in 0..n {
                let rj = inst.release(j);
                let mut expr = LinExpr {
                    terms: (0..n).filter(|&l| inst.release(l) >= rj).filter_map(|l| work(i, l)).collect(),
                };
                if let Some(zv) = z[i][j] {
                    expr.add(zv, rj.clone());
                }
                expr.add(cmax, minus_one.clone());
                prob.constrain(format!("stair_{}_{}", i + 1, j + 1), expr, Relation::Le, Rational::zero());
            }
        }
        for i in 0..m {
            for j in 0..n {
                if let (Some(xv), Some(zv)) = (x[i][j], z[i][j]) {
                    let expr = LinExpr::var(xv).with(zv, minus_one.clone());
                    prob.constrain(format!("link_{}_{}", i + 1, j + 1), expr, Relation::Le, Rational::zero());
                }
            }
        }
    }
    prob.minimize(LinExpr::var(cmax));
    Ok(Formulation { kind, problem: prob, x, z, cmax })
}

/// `t_ij = x_ij p_ij`, `cmax` = objective value.
pub fn extract_distribution(
    inst: &Instance,
    form: &Formulation,
    sol: &LpSolution,
) -> Result<Distribution, FormulationError> {
    if sol.status != Status::Optimal {
        return Err(FormulationError::NotOptimal(sol.status));
    }
    let (m, n) = (inst.machines(), inst.jobs());
    let mut d = Distribution::zeros(m, n);
    for i in 0..m {
        for j in 0..n {
            if let (Some(v), Some(p)) = (form.x[i][j], inst.p(i, j).finite()) {
                d.t[i][j] = sol.value(v) * p;
            }
        }
    }
    d.cmax = sol.value(form.cmax).clone();
    d.check(inst).map_err(FormulationError::Model)?;
    Ok(d)
}

/// Builds, solves (branch-and-bound for `Milp`) and extracts.
pub fn solve(inst: &Instance, kind: FormulationKind) -> Result<Distribution, FormulationError> {
    let form = build(inst, kind)?;
    let sol = if kind == FormulationKind::Milp {
        ratlp::solve_mip(&form.problem)?
    } else {
        ratlp::solve_lp(&form.problem)?
    };
    extract_distribution(inst, &form, &sol)
}

/// Variable values that make `(dist, cmax)` a point of the program, with
/// `z_ij = 1` iff `t_ij > 0`.
pub fn point_of(inst: &Instance, form: &Formulation, dist: &Distribution, cmax: &Rational) -> Vec<Rational> {
    let mut vals = vec![Rational::zero(); form.problem.vars.len()];
    for i in 0..inst.machines() {
        for j in 0..inst.jobs() {
            if let (Some(v), Some(p)) = (form.x[i][j], inst.p(i, j).finite()) {
                vals[v.0] = &dist.t[i][j] / p;
            }
            if let Some(v) = form.z[i][j] {
                if !dist.t[i][j].is_zero() {
                    vals[v.0] = Rational::one();
                }
            }
        }
    }
    vals[form.cmax.0] = cmax.clone();
    vals
}
