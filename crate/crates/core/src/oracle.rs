//! Exact optimum of the preemptive problem through a window-indexed LP.
//!
//! Distinct release times `b_0 < … < b_{q-1}` cut time into fixed windows
//! `[b_k, b_{k+1})` and a last window `[b_{q-1}, b_{q-1} + L)`. Variable `t_ijk` is
//! the time machine `i` spends on job `j` inside window `k` (only if `r_j ≤ b_k`).
//! Per window, every machine and every job fits in the window length, so the
//! window's sub-matrix is scheduled inside it by the simultaneous-release
//! construction. Minimizing `L` gives the optimum `b_{q-1} + L`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::ll::{self, IterationTrace};
use crate::model::{Distribution, Instance, ModelError, Schedule};
use crate::ratlp::{self, LinExpr, LpProblem, Relation, Status, Var};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    Model(ModelError),
    Infeasible,
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::Model(e) => write!(f, "{e}"),
            OracleError::Infeasible => write!(f, "no schedule respects the distribution"),
        }
    }
}

impl core::error::Error for OracleError {}

/// The window LP and its variable handles.
#[derive(Debug, Clone)]
pub struct WindowModel {
    pub boundaries: Vec<Rational>,
    pub problem: LpProblem,
    /// `t[i][j][k]`, absent when forbidden or unreleased.
    pub t: Vec<Vec<Vec<Option<Var>>>>,
    pub last_len: Var,
}

impl WindowModel {
    pub fn new(inst: &Instance) -> Self {
        let (m, n) = (inst.machines(), inst.jobs());
        let mut boundaries: Vec<Rational> = inst.releases().to_vec();
        boundaries.sort();
        boundaries.dedup();
        let q = boundaries.len();
        let mut prob = LpProblem::new();
        let zero = || Some(Rational::zero());
        let mut t = vec![vec![vec![None; q]; n]; m];
        for (i, ti) in t.iter_mut().enumerate() {
            for (j, tij) in ti.iter_mut().enumerate() {
                if inst.p(i, j).finite().is_none() {
                    continue;
                }
                for (k, cell) in tij.iter_mut().enumerate() {
                    if inst.release(j) <= &boundaries[k] {
                        *cell = Some(prob.add_var(format!("t_{}_{}_{}", i + 1, j + 1, k + 1), zero(), None));
                    }
                }
            }
        }
        let last_len = prob.add_var("L", zero(), None);
        let minus_one = -Rational::one();

        for j in 0..n {
            let mut e = LinExpr::new();
            for i in 0..m {
                if let Some(p) = inst.p(i, j).finite() {
                    for v in t[i][j].iter().flatten() {
                        e.add(*v, p.recip());
                    }
                }
            }
            prob.constrain(format!("done_{}", j + 1), e, Relation::Eq, Rational::one());
        }
        for k in 0..q {
            let fixed = (k + 1 < q).then(|| &boundaries[k + 1] - &boundaries[k]);
            let mut limit = |name: alloc::string::String, mut e: LinExpr| match &fixed {
                Some(len) => prob.constrain(name, e, Relation::Le, len.clone()),
                None => {
                    e.add(last_len, minus_one.clone());
                    prob.constrain(name, e, Relation::Le, Rational::zero())
                }
            };
            for j in 0..n {
                let e = LinExpr { terms: (0..m).filter_map(|i| t[i][j][k]).map(|v| (v, Rational::one())).collect() };
                limit(format!("job_{}_{}", j + 1, k + 1), e);
            }
            for (i, ti) in t.iter().enumerate() {
                let e = LinExpr { terms: ti.iter().filter_map(|tj| tj[k]).map(|v| (v, Rational::one())).collect() };
                limit(format!("machine_{}_{}", i + 1, k + 1), e);
            }
        }
        prob.minimize(LinExpr::var(last_len));
        WindowModel { boundaries, problem: prob, t, last_len }
    }

    /// Adds `Σ_k t_ijk = dist.t_ij` for every pair.
    pub fn fix_distribution(&mut self, dist: &Distribution) {
        for (i, ti) in self.t.iter().enumerate() {
            for (j, tij) in ti.iter().enumerate() {
                let e = LinExpr { terms: tij.iter().flatten().map(|&v| (v, Rational::one())).collect() };
                self.problem.constrain(
                    format!("respect_{}_{}", i + 1, j + 1),
                    e,
                    Relation::Eq,
                    dist.t[i][j].clone(),
                );
            }
        }
    }

    /// Solves, and assembles a schedule window by window.
    fn solve(&self) -> Result<(Rational, Schedule), OracleError> {
        let Some(last) = self.boundaries.last() else {
            return Ok((Rational::zero(), Schedule::default()));
        };
        let sol = ratlp::solve_lp(&self.problem).expect("window model is well formed");
        if sol.status != Status::Optimal {
            return Err(OracleError::Infeasible);
        }
        let cmax = last + sol.value(self.last_len);
        let (m, n) = (self.t.len(), self.t.first().map_or(0, Vec::len));
        let mut segs = Vec::new();
        let mut trace = IterationTrace::default();
        for (k, start) in self.boundaries.iter().enumerate() {
            let mut w = vec![vec![Rational::zero(); n]; m];
            for (i, wi) in w.iter_mut().enumerate() {
                for (j, cell) in wi.iter_mut().enumerate() {
                    if let Some(v) = self.t[i][j][k] {
                        *cell = sol.value(v).clone();
                    }
                }
            }
            ll::run(w, start.clone(), &mut segs, &mut trace, false);
        }
        Ok((cmax, Schedule::new(segs).normalized()))
    }
}

/// Optimal makespan and a schedule attaining it.
pub fn optimal_makespan(inst: &Instance) -> (Rational, Schedule) {
    WindowModel::new(inst).solve().expect("an instance always has a schedule")
}

/// Smallest makespan among schedules whose per-(machine, job) totals equal `dist.t`.
pub fn min_makespan_respecting(inst: &Instance, dist: &Distribution) -> Result<Rational, OracleError> {
    respecting_optimum(inst, dist).map(|(c, _)| c)
}

/// As [`min_makespan_respecting`], with a schedule attaining it.
pub fn respecting_optimum(inst: &Instance, dist: &Distribution) -> Result<(Rational, Schedule), OracleError> {
    dist.check(inst).map_err(OracleError::Model)?;
    let mut model = WindowModel::new(inst);
    model.fix_distribution(dist);
    model.solve()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::{makespan, respects, validate_schedule, Ptime};
    use crate::ext::construct_ext;
    use crate::formulations::{self, FormulationKind};
    use crate::model::distribution_of;
    use crate::rational::int;
    use proptest::prelude::*;

    #[test]
    fn single_job_after_release() {
        let inst = Instance::new(vec![vec![Ptime::Finite(int(5))]], vec![int(2)]).unwrap();
        let (c, s) = optimal_makespan(&inst);
        assert_eq!(c, int(7));
        assert_eq!(makespan(&s), int(7));
    }

    #[test]
    fn empty_instance() {
        let inst = Instance::new(vec![vec![]], vec![]).unwrap();
        assert_eq!(optimal_makespan(&inst).0, int(0));
    }

    #[test]
    fn duplicate_releases_share_a_window() {
        let m = WindowModel::new(&fixtures::example2());
        assert_eq!(m.boundaries, vec![int(1), int(3), int(5)]);
    }

    #[test]
    fn example2_optimum_is_14() {
        let inst = fixtures::example2();
        let (c, s) = optimal_makespan(&inst);
        assert_eq!(c, int(14));
        assert!(validate_schedule(&inst, &s, false).unwrap().ok);
        assert_eq!(makespan(&s), c);
    }

    #[test]
    fn example2_distribution_respecting_minimum() {
        let inst = fixtures::example2();
        let dist = fixtures::example2_distribution();
        let (c, s) = respecting_optimum(&inst, &dist).unwrap();
        assert_eq!(c, int(15));
        assert!(respects(&s, &dist));
        assert!(validate_schedule(&inst, &s, false).unwrap().ok);
    }

    #[test]
    fn invalid_distribution_rejected() {
        let inst = fixtures::example2();
        let mut dist = fixtures::example2_distribution();
        dist.t[0][0] = int(1);
        assert!(matches!(min_makespan_respecting(&inst, &dist), Err(OracleError::Model(_))));
    }

    #[test]
    fn example1_optimum_is_21() {
        let inst = fixtures::example1();
        let (c, s) = optimal_makespan(&inst);
        assert_eq!(c, int(21));
        assert!(validate_schedule(&inst, &s, false).unwrap().ok);
        assert_eq!(makespan(&s), c);
    }

    fn small_instance() -> impl Strategy<Value = Instance> {
        (1usize..=3, 1usize..=4).prop_flat_map(|(m, n)| {
            (
                prop::collection::vec(prop::collection::vec(prop::option::weighted(0.85, 1i64..=8), n), m),
                prop::collection::vec(0i64..=6, n),
            )
                .prop_filter_map("every job needs a machine", move |(p, r)| {
                    let p: Vec<Vec<Ptime>> = p
                        .into_iter()
                        .map(|row| row.into_iter().map(|x| x.map_or(Ptime::Forbidden, |v| Ptime::Finite(int(v)))).collect())
                        .collect();
                    Instance::new(p, r.into_iter().map(int).collect()).ok()
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn relaxations_bound_the_optimum(inst in small_instance()) {
            let (c, s) = optimal_makespan(&inst);
            prop_assert!(validate_schedule(&inst, &s, false).unwrap().ok);
            prop_assert_eq!(makespan(&s), c.clone());
            let v = |k| formulations::solve(&inst, k).unwrap().cmax;
            let (lp2, lp3, milp) = (v(FormulationKind::Lp2), v(FormulationKind::Lp3), v(FormulationKind::Milp));
            prop_assert!(lp2 <= lp3 && lp3 <= milp && milp <= c, "{} {} {} {}", lp2, lp3, milp, c);
        }

        #[test]
        fn schedule_totals_are_points_of_every_program(inst in small_instance()) {
            let (c, s) = optimal_makespan(&inst);
            let dist = distribution_of(&inst, &s).unwrap();
            for k in FormulationKind::ALL {
                let f = formulations::build(&inst, k).unwrap();
                let vals = formulations::point_of(&inst, &f, &dist, &c);
                let sol = ratlp::LpSolution { status: Status::Optimal, objective: Some(c.clone()), values: vals };
                prop_assert!(ratlp::check_solution(&f.problem, &sol).is_ok(), "{}", k.name());
            }
        }

        #[test]
        fn ext_never_beats_the_respecting_minimum(inst in small_instance()) {
            let dist = formulations::solve(&inst, FormulationKind::Lp3).unwrap();
            let (c, s) = respecting_optimum(&inst, &dist).unwrap();
            prop_assert!(respects(&s, &dist));
            prop_assert_eq!(makespan(&s), c.clone());
            let (e, _) = construct_ext(&inst, &dist).unwrap();
            prop_assert!(c <= makespan(&e));
            prop_assert!(optimal_makespan(&inst).0 <= c);
        }
    }
}
