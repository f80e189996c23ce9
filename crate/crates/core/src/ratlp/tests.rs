use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;
use proptest::prelude::*;

use super::*;
use crate::rational::{frac, int, Rational};

fn x_ge_3() -> (LpProblem, Var) {
    let mut p = LpProblem::new();
    let x = p.add_var("x", None, None);
    p.constrain("c", LinExpr::var(x), Relation::Ge, int(3));
    p.minimize(LinExpr::var(x));
    (p, x)
}

#[test]
fn minimize_x_subject_to_x_ge_3() {
    let (p, x) = x_ge_3();
    let s = solve_lp(&p).unwrap();
    assert_eq!(s.status, Status::Optimal);
    assert_eq!(s.value(x), &int(3));
    check_solution(&p, &s).unwrap();
}

#[test]
fn contradictory_bounds_infeasible() {
    let mut p = LpProblem::new();
    let x = p.add_var("x", Some(int(0)), None);
    p.constrain("c", LinExpr::var(x), Relation::Le, int(-1));
    p.minimize(LinExpr::var(x));
    assert_eq!(solve_lp(&p).unwrap().status, Status::Infeasible);
}

#[test]
fn unbounded_detected() {
    let mut p = LpProblem::new();
    let x = p.add_var("x", Some(int(0)), None);
    p.maximize(LinExpr::var(x));
    assert_eq!(solve_lp(&p).unwrap().status, Status::Unbounded);
}

#[test]
fn unknown_variable_is_structural() {
    let (mut p, _) = x_ge_3();
    p.constrain("bad", LinExpr::var(Var(7)), Relation::Le, int(1));
    assert!(matches!(solve_lp(&p), Err(LpError::UnknownVariable { .. })));
}

#[test]
fn empty_constraints_are_dropped_or_fatal() {
    let (mut p, _) = x_ge_3();
    p.constrain("empty_ok", LinExpr::new(), Relation::Le, int(1));
    assert_eq!(solve_lp(&p).unwrap().objective, Some(int(3)));
    p.constrain("empty_bad", LinExpr::new(), Relation::Ge, int(1));
    assert_eq!(solve_lp(&p).unwrap().status, Status::Infeasible);
}

#[test]
fn equality_and_fractional_optimum() {
    // max x + y, 2x + y <= 4, x + 3y <= 6, x - y = 0  ->  x = y = 4/3
    let mut p = LpProblem::new();
    let x = p.add_var("x", Some(int(0)), None);
    let y = p.add_var("y", Some(int(0)), None);
    p.constrain("a", LinExpr::var(x).with(y, int(1)).with(x, int(1)), Relation::Le, int(4));
    p.constrain("b", LinExpr::var(x).with(y, int(3)), Relation::Le, int(6));
    p.constrain("e", LinExpr::var(x).with(y, int(-1)), Relation::Eq, int(0));
    p.maximize(LinExpr::var(x).with(y, int(1)));
    let s = solve_lp(&p).unwrap();
    assert_eq!(s.objective, Some(frac(8, 3)));
    check_solution(&p, &s).unwrap();
}

#[test]
fn degenerate_problem_terminates() {
    // Klee-Minty-like degenerate corner with many redundant rows through the origin.
    let mut p = LpProblem::new();
    let v: Vec<Var> = (0..4).map(|k| p.add_var(alloc::format!("v{k}"), Some(int(0)), None)).collect();
    for a in 0..4 {
        for b in 0..4 {
            if a != b {
                p.constrain("d", LinExpr::var(v[a]).with(v[b], int(-1)), Relation::Le, int(0));
            }
        }
    }
    p.constrain("cap", LinExpr { terms: v.iter().map(|&x| (x, int(1))).collect() }, Relation::Le, int(4));
    p.maximize(LinExpr { terms: v.iter().map(|&x| (x, int(1))).collect() });
    let s = solve_lp(&p).unwrap();
    assert_eq!(s.objective, Some(int(4)));
    check_solution(&p, &s).unwrap();
}

#[test]
fn mip_without_binaries_matches_lp() {
    let (p, _) = x_ge_3();
    assert_eq!(solve_mip(&p).unwrap(), solve_lp(&p).unwrap());
}

#[test]
fn mip_knapsack() {
    // max 5a + 4b + 3c, 2a + 3b + c <= 3 (binaries) -> a = c = 1, value 8
    let mut p = LpProblem::new();
    let a = p.add_binary("a");
    let b = p.add_binary("b");
    let c = p.add_binary("c");
    p.constrain("w", LinExpr::var(a).with(a, int(1)).with(b, int(3)).with(c, int(1)), Relation::Le, int(3));
    p.maximize(LinExpr::new().with(a, int(5)).with(b, int(4)).with(c, int(3)));
    let s = solve_mip(&p).unwrap();
    assert_eq!(s.objective, Some(int(8)));
    check_solution(&p, &s).unwrap();
    let relax = solve_lp(&p).unwrap();
    assert!(relax.objective.unwrap() >= int(8));
}

#[test]
fn binary_bounds_enforced() {
    let mut p = LpProblem::new();
    let z = p.add_var("z", Some(int(0)), Some(int(2)));
    p.binaries.insert(z);
    assert!(matches!(solve_mip(&p), Err(LpError::BinaryBounds(_))));
}

#[test]
fn dump_lists_sections() {
    let mut p = LpProblem::new();
    let z = p.add_binary("z");
    let x = p.add_var("x", Some(int(0)), None);
    p.constrain("c1", LinExpr::var(x).with(z, frac(-1, 2)), Relation::Le, int(1));
    p.minimize(LinExpr::var(x));
    let text = alloc::format!("{p}");
    assert_eq!(
        text,
        "Minimize\n obj: + 1 x\nSubject To\n c1: + 1 x - 1/2 z <= 1\nBounds\n 0 <= z <= 1\n 0 <= x <= +inf\nBinaries\n z\nEnd\n"
    );
}

// Vertex enumeration for 2-variable LPs with box bounds: the optimum of a bounded
// feasible LP is attained at an intersection of two tight lines.
fn brute_force_2d(rows: &[(i64, i64, i64)], cost: (i64, i64), hi: i64) -> Option<Rational> {
    let mut lines: Vec<(Rational, Rational, Rational)> =
        rows.iter().map(|&(a, b, c)| (int(a), int(b), int(c))).collect();
    lines.push((int(1), int(0), int(0)));
    lines.push((int(0), int(1), int(0)));
    lines.push((int(1), int(0), int(hi)));
    lines.push((int(0), int(1), int(hi)));
    let feasible = |x: &Rational, y: &Rational| {
        x >= &int(0)
            && y >= &int(0)
            && x <= &int(hi)
            && y <= &int(hi)
            && rows.iter().all(|&(a, b, c)| int(a) * x + int(b) * y <= int(c))
    };
    let mut best: Option<Rational> = None;
    for p in 0..lines.len() {
        for q in p + 1..lines.len() {
            let (a1, b1, c1) = &lines[p];
            let (a2, b2, c2) = &lines[q];
            let det = a1 * b2 - a2 * b1;
            if det.is_zero() {
                continue;
            }
            let x = (c1 * b2 - c2 * b1) / &det;
            let y = (a1 * c2 - a2 * c1) / &det;
            if feasible(&x, &y) {
                let v = int(cost.0) * &x + int(cost.1) * &y;
                if best.as_ref().is_none_or(|b| &v < b) {
                    best = Some(v);
                }
            }
        }
    }
    best
}

fn build_2d(rows: &[(i64, i64, i64)], cost: (i64, i64), hi: i64) -> LpProblem {
    let mut p = LpProblem::new();
    let x = p.add_var("x", Some(int(0)), Some(int(hi)));
    let y = p.add_var("y", Some(int(0)), Some(int(hi)));
    for &(a, b, c) in rows {
        p.constrain("r", LinExpr::new().with(x, int(a)).with(y, int(b)), Relation::Le, int(c));
    }
    p.minimize(LinExpr::new().with(x, int(cost.0)).with(y, int(cost.1)));
    p
}

fn row() -> impl Strategy<Value = (i64, i64, i64)> {
    (-5i64..=5, -5i64..=5, -8i64..=20)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn lp_matches_vertex_enumeration(rows in prop::collection::vec(row(), 0..6), cost in (-5i64..=5, -5i64..=5)) {
        let p = build_2d(&rows, cost, 10);
        let s = solve_lp(&p).unwrap();
        check_solution(&p, &s).unwrap();
        match brute_force_2d(&rows, cost, 10) {
            None => prop_assert_eq!(s.status, Status::Infeasible),
            Some(v) => prop_assert_eq!(s.objective, Some(v)),
        }
    }

    #[test]
    fn dropping_a_constraint_never_raises_minimum(rows in prop::collection::vec(row(), 1..6), cost in (-5i64..=5, -5i64..=5), k in 0usize..6) {
        let full = solve_lp(&build_2d(&rows, cost, 10)).unwrap();
        let mut fewer = rows.clone();
        fewer.remove(k % rows.len());
        let relaxed = solve_lp(&build_2d(&fewer, cost, 10)).unwrap();
        if let (Some(a), Some(b)) = (full.objective, relaxed.objective) {
            prop_assert!(b <= a);
        }
        if relaxed.status == Status::Infeasible {
            prop_assert_eq!(full.status, Status::Infeasible);
        }
    }

    #[test]
    fn mip_matches_enumeration(
        w in prop::collection::vec((1i64..=6, -4i64..=6, 0i64..=4), 1..5),
        cap in 1i64..=12,
    ) {
        // min Σ c_k z_k + y  s.t.  Σ w_k z_k + y >= cap, y <= 3 z_0 + 1, y >= 0
        let build = |fix: Option<&[bool]>| {
            let mut p = LpProblem::new();
            let zs: Vec<Var> = (0..w.len()).map(|k| p.add_binary(alloc::format!("z{k}"))).collect();
            let y = p.add_var("y", Some(int(0)), None);
            if let Some(f) = fix {
                for (k, &b) in f.iter().enumerate() {
                    let v = if b { int(1) } else { int(0) };
                    p.vars[zs[k].0].lower = Some(v.clone());
                    p.vars[zs[k].0].upper = Some(v);
                }
                p.binaries.clear();
            }
            let mut cover = LinExpr::var(y);
            let mut obj = LinExpr::var(y).with(y, int(w[0].2));
            for (k, &(wk, ck, _)) in w.iter().enumerate() {
                cover.add(zs[k], int(wk));
                obj.add(zs[k], int(ck));
            }
            p.constrain("cover", cover, Relation::Ge, int(cap));
            p.constrain("link", LinExpr::var(y).with(zs[0], int(-3)), Relation::Le, int(1));
            p.minimize(obj);
            p
        };
        let p = build(None);
        let s = solve_mip(&p).unwrap();
        check_solution(&p, &s).unwrap();
        let mut best: Option<Rational> = None;
        for mask in 0u32..(1 << w.len()) {
            let f: Vec<bool> = (0..w.len()).map(|k| mask >> k & 1 == 1).collect();
            if let Some(v) = solve_lp(&build(Some(&f))).unwrap().objective {
                if best.as_ref().is_none_or(|b| &v < b) {
                    best = Some(v);
                }
            }
        }
        prop_assert_eq!(s.objective.clone(), best);
        if let (Some(m), Some(r)) = (s.objective, solve_lp(&p).unwrap().objective) {
            prop_assert!(m >= r);
        }
        prop_assert_eq!(solve_mip(&p).unwrap(), solve_mip(&p).unwrap());
    }
}

#[test]
fn zero_vector_helper() {
    let v = vec![Rational::zero(); 2];
    assert_eq!(LinExpr::new().eval(&v), int(0));
}
