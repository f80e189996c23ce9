//! Depth-first branch-and-bound over 0-1 variables.

use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::problem::{LpError, LpProblem, Sense, Var};
use super::simplex::solve_checked;
use super::{LpSolution, Status};
use crate::rational::Rational;

/// Incumbent heuristic: fix every binary to the ceiling of its relaxed value and
/// re-solve over the continuous variables.
fn round_up(node: &LpProblem, binaries: &[Var], relaxed: &LpSolution) -> Option<LpSolution> {
    let mut fixed = node.clone();
    for b in binaries {
        let val = if relaxed.values[b.0].is_zero() { Rational::zero() } else { Rational::one() };
        fixed.vars[b.0].lower = Some(val.clone());
        fixed.vars[b.0].upper = Some(val);
    }
    let sol = solve_checked(&fixed);
    (sol.status == Status::Optimal).then_some(sol)
}

/// Exact optimum of a mixed 0-1 program. Branches on the lowest-index fractional
/// binary, 0-branch first; prunes nodes whose relaxation is no better than the incumbent.
pub fn solve_mip(prob: &LpProblem) -> Result<LpSolution, LpError> {
    prob.check_structure()?;
    let binaries: Vec<Var> = prob.binaries.iter().copied().collect();
    // Minimization key: larger is worse.
    let key = |v: &Rational| if prob.sense == Sense::Maximize { -v.clone() } else { v.clone() };

    let mut best: Option<LpSolution> = None;
    let mut stack: Vec<Vec<(Var, bool)>> = alloc::vec![Vec::new()];
    while let Some(fixes) = stack.pop() {
        let mut node = prob.clone();
        for (v, one) in &fixes {
            let val = if *one { Rational::one() } else { Rational::zero() };
            node.vars[v.0].lower = Some(val.clone());
            node.vars[v.0].upper = Some(val);
        }
        let sol = solve_checked(&node);
        match sol.status {
            Status::Infeasible => continue,
            Status::Unbounded => return Ok(sol),
            Status::Optimal => {}
        }
        let obj = key(sol.objective.as_ref().expect("optimal has objective"));
        if let Some(inc) = &best {
            if obj >= key(inc.objective.as_ref().expect("incumbent has objective")) {
                continue;
            }
        }
        let frac = binaries.iter().find(|b| {
            let x = &sol.values[b.0];
            !x.is_zero() && !x.is_one()
        });
        match frac {
            None => best = Some(sol),
            Some(&b) => {
                if let Some(h) = round_up(&node, &binaries, &sol) {
                    let hk = key(h.objective.as_ref().expect("optimal has objective"));
                    if best.as_ref().is_none_or(|inc| hk < key(inc.objective.as_ref().expect("incumbent"))) {
                        best = Some(h);
                    }
                }
                let mut one = fixes.clone();
                one.push((b, true));
                let mut zero = fixes;
                zero.push((b, false));
                stack.push(one);
                stack.push(zero);
            }
        }
    }
    Ok(best.unwrap_or(LpSolution { status: Status::Infeasible, values: Vec::new(), objective: None }))
}
