//! Dense two-phase tableau simplex over exact rationals, Bland's rule.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use super::problem::{LpError, LpProblem, Relation, Sense};
use super::{LpSolution, Status};
use crate::rational::Rational;

/// How an original variable is expressed in nonnegative columns:
/// `x = offset + Σ coef · y[col]`.
struct VarMap {
    offset: Rational,
    cols: Vec<(usize, Rational)>,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    obj: Vec<Rational>,
    ncols: usize,
}

impl Tableau {
    fn rhs(&self, r: usize) -> &Rational {
        &self.rows[r][self.ncols]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        let nz: Vec<usize> = (0..=self.ncols).filter(|&k| !self.rows[r][k].is_zero()).collect();
        for &k in &nz {
            self.rows[r][k] *= &inv;
        }
        let prow = core::mem::take(&mut self.rows[r]);
        for (rr, row) in self.rows.iter_mut().enumerate() {
            if rr == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for &k in &nz {
                row[k] -= &f * &prow[k];
            }
        }
        if !self.obj[c].is_zero() {
            let f = self.obj[c].clone();
            for &k in &nz {
                self.obj[k] -= &f * &prow[k];
            }
        }
        self.rows[r] = prow;
        self.basis[r] = c;
    }

    /// Loads cost vector `c` (length `ncols`) as reduced costs for the current basis.
    fn set_costs(&mut self, c: &[Rational]) {
        let mut obj: Vec<Rational> = c.to_vec();
        obj.push(Rational::zero());
        for (r, &b) in self.basis.iter().enumerate() {
            if c[b].is_zero() {
                continue;
            }
            for k in 0..=self.ncols {
                if !self.rows[r][k].is_zero() {
                    obj[k] -= &c[b] * &self.rows[r][k];
                }
            }
        }
        self.obj = obj;
    }

    /// Minimizes the loaded costs. Returns false when unbounded.
    fn optimize(&mut self, allowed: usize) -> bool {
        loop {
            let Some(c) = (0..allowed).find(|&k| self.obj[k].is_negative()) else {
                return true;
            };
            let mut best: Option<(Rational, usize, usize)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(r) / a;
                let better = match &best {
                    None => true,
                    Some((q, _, b)) => ratio < *q || (ratio == *q && self.basis[r] < *b),
                };
                if better {
                    best = Some((ratio, r, self.basis[r]));
                }
            }
            match best {
                None => return false,
                Some((_, r, _)) => self.pivot(r, c),
            }
        }
    }
}

pub fn solve_lp(prob: &LpProblem) -> Result<LpSolution, LpError> {
    prob.check_structure()?;
    Ok(solve_checked(prob))
}

pub(crate) fn solve_checked(prob: &LpProblem) -> LpSolution {
    let infeasible = LpSolution { status: Status::Infeasible, values: Vec::new(), objective: None };
    if prob.violated_empty_constraint() {
        return infeasible;
    }

    // Column layout for the original variables.
    let mut maps = Vec::with_capacity(prob.vars.len());
    let mut ny = 0usize;
    let mut upper_rows: Vec<(usize, Rational)> = Vec::new();
    for v in &prob.vars {
        match (&v.lower, &v.upper) {
            (Some(l), u) => {
                if let Some(u) = u {
                    if u < l {
                        return infeasible;
                    }
                    upper_rows.push((ny, u - l));
                }
                maps.push(VarMap { offset: l.clone(), cols: vec![(ny, Rational::from_integer(1.into()))] });
                ny += 1;
            }
            (None, Some(u)) => {
                maps.push(VarMap { offset: u.clone(), cols: vec![(ny, Rational::from_integer((-1).into()))] });
                ny += 1;
            }
            (None, None) => {
                maps.push(VarMap {
                    offset: Rational::zero(),
                    cols: vec![
                        (ny, Rational::from_integer(1.into())),
                        (ny + 1, Rational::from_integer((-1).into())),
                    ],
                });
                ny += 2;
            }
        }
    }

    // Rows over y: (coefficients, relation, rhs).
    let mut rows: Vec<(Vec<Rational>, Relation, Rational)> = Vec::new();
    for c in prob.nonempty_constraints() {
        let mut a = vec![Rational::zero(); ny];
        let mut rhs = c.rhs.clone();
        for (v, coef) in &c.expr.terms {
            let map = &maps[v.0];
            rhs -= coef * &map.offset;
            for (col, s) in &map.cols {
                a[*col] += coef * s;
            }
        }
        rows.push((a, c.rel, rhs));
    }
    for (col, bound) in upper_rows {
        let mut a = vec![Rational::zero(); ny];
        a[col] = Rational::from_integer(1.into());
        rows.push((a, Relation::Le, bound));
    }

    let m = rows.len();
    let ns = rows.iter().filter(|(_, rel, _)| *rel != Relation::Eq).count();
    // Rows that start with their own slack in the basis need no artificial.
    let needs_art: Vec<bool> = rows
        .iter()
        .map(|(_, rel, rhs)| !(*rel == Relation::Le && !rhs.is_negative()))
        .collect();
    let na = needs_art.iter().filter(|&&b| b).count();
    let ncols = ny + ns + na;

    let mut t = Tableau { rows: Vec::with_capacity(m), basis: Vec::with_capacity(m), obj: Vec::new(), ncols };
    let (mut s_at, mut a_at) = (ny, ny + ns);
    for (r, (a, rel, rhs)) in rows.into_iter().enumerate() {
        let mut row = a;
        row.resize(ncols + 1, Rational::zero());
        row[ncols] = rhs;
        let slack_col = if rel == Relation::Eq {
            None
        } else {
            let s = s_at;
            s_at += 1;
            row[s] = Rational::from_integer(if rel == Relation::Le { 1 } else { -1 }.into());
            Some(s)
        };
        if row[ncols].is_negative() {
            for x in row.iter_mut() {
                *x = -x.clone();
            }
        }
        if needs_art[r] {
            row[a_at] = Rational::from_integer(1.into());
            t.basis.push(a_at);
            a_at += 1;
        } else {
            t.basis.push(slack_col.expect("slack for <= row"));
        }
        t.rows.push(row);
    }

    // Phase 1.
    if na > 0 {
        let mut c = vec![Rational::zero(); ncols];
        for x in c.iter_mut().skip(ny + ns) {
            *x = Rational::from_integer(1.into());
        }
        t.set_costs(&c);
        t.optimize(ncols);
        if !t.obj[ncols].is_zero() {
            return infeasible;
        }
        // Drive remaining (zero-valued) artificials out of the basis.
        let mut r = 0;
        while r < t.rows.len() {
            if t.basis[r] >= ny + ns {
                match (0..ny + ns).find(|&k| !t.rows[r][k].is_zero()) {
                    Some(k) => t.pivot(r, k),
                    None => {
                        t.rows.remove(r);
                        t.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
        let keep = ny + ns;
        for row in t.rows.iter_mut() {
            let rhs = row[ncols].clone();
            row.truncate(keep);
            row.push(rhs);
        }
        t.ncols = keep;
    }

    // Phase 2.
    let mut c = vec![Rational::zero(); t.ncols];
    for (v, coef) in &prob.objective.terms {
        for (col, s) in &maps[v.0].cols {
            let x = coef * s;
            c[*col] += if prob.sense == Sense::Maximize { -x } else { x };
        }
    }
    t.set_costs(&c);
    if !t.optimize(t.ncols) {
        return LpSolution { status: Status::Unbounded, values: Vec::new(), objective: None };
    }

    let mut y = vec![Rational::zero(); t.ncols];
    for (r, &b) in t.basis.iter().enumerate() {
        y[b] = t.rhs(r).clone();
    }
    let values: Vec<Rational> = maps
        .iter()
        .map(|map| map.cols.iter().fold(map.offset.clone(), |acc, (col, s)| acc + s * &y[*col]))
        .collect();
    let objective = prob.objective.eval(&values);
    LpSolution { status: Status::Optimal, values, objective: Some(objective) }
}
