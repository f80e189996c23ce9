//! Decrementing-set construction for simultaneously released jobs.
//!
//! The time matrix `T` (machines × jobs) is completed to an `(m+n) × (m+n)` matrix
//! whose lines all sum to the capacity: machine rows get a slack column each, job
//! columns a slack row each, and the lower-right block is `Tᵀ`. A perfect matching
//! on its positive entries, restricted to real cells, covers every tight line.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use crate::model::{Distribution, Instance, ModelError, Schedule, Segment};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimeMatrix {
    pub t: Vec<Vec<Rational>>,
    /// Remaining bound: every row and column sum stays ≤ this.
    pub capacity: Rational,
}

impl TimeMatrix {
    /// Capacity = largest row or column sum.
    pub fn new(t: Vec<Vec<Rational>>) -> Self {
        let d = Distribution { t, cmax: Rational::zero() };
        let capacity = d.line_bound();
        TimeMatrix { t: d.t, capacity }
    }

    pub fn machines(&self) -> usize {
        self.t.len()
    }

    pub fn jobs(&self) -> usize {
        self.t.first().map_or(0, Vec::len)
    }

    pub fn row_sum(&self, i: usize) -> Rational {
        rational::sum(&self.t[i])
    }

    pub fn col_sum(&self, j: usize) -> Rational {
        rational::sum(self.t.iter().map(|row| &row[j]))
    }

    pub fn is_zero(&self) -> bool {
        self.t.iter().flatten().all(Zero::is_zero)
    }

    /// Every line sum ≤ capacity and every entry ≥ 0.
    pub fn within_capacity(&self) -> bool {
        self.t.iter().flatten().all(|x| !x.is_negative())
            && (0..self.machines()).all(|i| self.row_sum(i) <= self.capacity)
            && (0..self.jobs()).all(|j| self.col_sum(j) <= self.capacity)
    }

    pub fn tight_rows(&self) -> Vec<usize> {
        (0..self.machines()).filter(|&i| self.row_sum(i) == self.capacity).collect()
    }

    pub fn tight_cols(&self) -> Vec<usize> {
        (0..self.jobs()).filter(|&j| self.col_sum(j) == self.capacity).collect()
    }
}

/// `(machine, job)` cells, sorted by machine.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct DecrementingSet {
    pub cells: Vec<(usize, usize)>,
}

impl DecrementingSet {
    pub fn job_on(&self, machine: usize) -> Option<usize> {
        self.cells.iter().find(|c| c.0 == machine).map(|c| c.1)
    }

    pub fn covers_row(&self, i: usize) -> bool {
        self.cells.iter().any(|c| c.0 == i)
    }

    pub fn covers_col(&self, j: usize) -> bool {
        self.cells.iter().any(|c| c.1 == j)
    }

    /// Disjoint lines, positive cells, all tight lines covered.
    pub fn is_valid_for(&self, tm: &TimeMatrix) -> bool {
        let mut rows = vec![false; tm.machines()];
        let mut cols = vec![false; tm.jobs()];
        for &(i, j) in &self.cells {
            if i >= rows.len() || j >= cols.len() || rows[i] || cols[j] || !tm.t[i][j].is_positive() {
                return false;
            }
            rows[i] = true;
            cols[j] = true;
        }
        tm.tight_rows().into_iter().all(|i| rows[i]) && tm.tight_cols().into_iter().all(|j| cols[j])
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub set: DecrementingSet,
    pub delta: Rational,
    pub tau_after: Rational,
    /// Matrix before the step.
    pub matrix: Vec<Vec<Rational>>,
    /// Residual release offsets before the step (release-aware construction only).
    pub row0: Option<Vec<Rational>>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IterationTrace {
    /// Consecutive steps with the same set are merged.
    pub steps: Vec<TraceStep>,
    /// Number of unmerged iterations.
    pub elementary: usize,
}

impl IterationTrace {
    pub fn deltas(&self) -> Vec<Rational> {
        self.steps.iter().map(|s| s.delta.clone()).collect()
    }

    pub(crate) fn push(&mut self, step: TraceStep) {
        self.elementary += 1;
        if let Some(last) = self.steps.last_mut() {
            if last.set == step.set && last.row0.is_some() == step.row0.is_some() {
                last.delta += step.delta;
                last.tau_after = step.tau_after;
                return;
            }
        }
        self.steps.push(step);
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LlError {
    AllZero,
    NonzeroRelease { job: usize },
    Model(ModelError),
}

impl fmt::Display for LlError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LlError::AllZero => write!(f, "matrix is already zero"),
            LlError::NonzeroRelease { job } => {
                write!(f, "job {} has a nonzero release time; use the release-aware construction", job + 1)
            }
            LlError::Model(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for LlError {}

struct Completion {
    adj: Vec<Vec<usize>>,
    m: usize,
    n: usize,
}

impl Completion {
    // Rows: machines 0..m, then job-slack rows. Columns: jobs 0..n, then machine-slack.
    fn new(tm: &TimeMatrix) -> Self {
        let (m, n) = (tm.machines(), tm.jobs());
        let mut adj = Vec::with_capacity(m + n);
        for i in 0..m {
            let mut a: Vec<usize> = (0..n).filter(|&j| tm.t[i][j].is_positive()).collect();
            if tm.row_sum(i) < tm.capacity {
                a.push(n + i);
            }
            adj.push(a);
        }
        for j in 0..n {
            let mut a = Vec::new();
            if tm.col_sum(j) < tm.capacity {
                a.push(j);
            }
            a.extend((0..m).filter(|&i| tm.t[i][j].is_positive()).map(|i| n + i));
            adj.push(a);
        }
        Completion { adj, m, n }
    }

    /// Whether the partial row→column assignment extends to a perfect matching.
    fn extends(&self, fixed: &[(usize, usize)]) -> bool {
        let size = self.m + self.n;
        let mut fixed_row = vec![None; size];
        let mut taken = vec![false; size];
        for &(r, c) in fixed {
            fixed_row[r] = Some(c);
            taken[c] = true;
        }
        let adj: Vec<Vec<usize>> = (0..size)
            .map(|r| match fixed_row[r] {
                Some(c) => vec![c],
                None => self.adj[r].iter().copied().filter(|&c| !taken[c]).collect(),
            })
            .collect();
        let mut owner: Vec<Option<usize>> = vec![None; size];
        (0..size).all(|r| {
            let mut seen = vec![false; size];
            augment(&adj, r, &mut seen, &mut owner)
        })
    }
}

fn augment(adj: &[Vec<usize>], r: usize, seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
    for &c in &adj[r] {
        if seen[c] {
            continue;
        }
        seen[c] = true;
        if owner[c].is_none_or(|o| augment(adj, o, seen, owner)) {
            owner[c] = Some(r);
            return true;
        }
    }
    false
}

pub fn find_decrementing_set(tm: &TimeMatrix) -> Result<DecrementingSet, LlError> {
    find_decrementing_set_after(tm, None)
}

/// Machines in index order pick the first column that keeps a perfect matching
/// possible: the previous set's column if still positive, then positive job
/// columns by index, then the machine's slack column.
pub fn find_decrementing_set_after(
    tm: &TimeMatrix,
    prev: Option<&DecrementingSet>,
) -> Result<DecrementingSet, LlError> {
    if tm.is_zero() {
        return Err(LlError::AllZero);
    }
    let comp = Completion::new(tm);
    let n = comp.n;
    let mut fixed: Vec<(usize, usize)> = Vec::with_capacity(comp.m);
    for i in 0..comp.m {
        let kept = prev.and_then(|d| d.job_on(i)).filter(|&j| tm.t[i][j].is_positive());
        let mut prefs: Vec<usize> = kept.into_iter().collect();
        prefs.extend((0..n).filter(|&j| tm.t[i][j].is_positive() && kept != Some(j)));
        prefs.push(n + i);
        let choice = prefs.into_iter().find(|&c| {
            if !comp.adj[i].contains(&c) || fixed.iter().any(|f| f.1 == c) {
                return false;
            }
            fixed.push((i, c));
            let ok = comp.extends(&fixed);
            fixed.pop();
            ok
        });
        // The completed matrix has equal line sums, so a perfect matching exists.
        fixed.push((i, choice.expect("completion admits a perfect matching")));
    }
    Ok(DecrementingSet { cells: fixed.into_iter().filter(|&(_, c)| c < n).collect() })
}

/// Smallest selected cell, or smallest slack of a line the set leaves uncovered.
pub fn choose_delta(tm: &TimeMatrix, d: &DecrementingSet) -> Rational {
    let cells = d.cells.iter().map(|&(i, j)| tm.t[i][j].clone());
    let rows = (0..tm.machines()).filter(|&i| !d.covers_row(i)).map(|i| &tm.capacity - tm.row_sum(i));
    let cols = (0..tm.jobs()).filter(|&j| !d.covers_col(j)).map(|j| &tm.capacity - tm.col_sum(j));
    cells.chain(rows).chain(cols).min().expect("set or slack is nonempty")
}

/// Runs the construction on `t` starting at time `start`; appends to `segs`/`trace`.
pub(crate) fn run(
    t: Vec<Vec<Rational>>,
    start: Rational,
    segs: &mut Vec<Segment>,
    trace: &mut IterationTrace,
    row0: bool,
) {
    let mut tm = TimeMatrix::new(t);
    let mut tau = start;
    let mut prev: Option<DecrementingSet> = None;
    while !tm.is_zero() {
        let d = find_decrementing_set_after(&tm, prev.as_ref()).expect("matrix is nonzero");
        let delta = choose_delta(&tm, &d);
        debug_assert!(delta.is_positive());
        let before = tm.t.clone();
        let end = &tau + &delta;
        for &(i, j) in &d.cells {
            tm.t[i][j] -= &delta;
            segs.push(Segment { machine: i, job: j, start: tau.clone(), end: end.clone() });
        }
        tm.capacity -= &delta;
        debug_assert!(tm.within_capacity());
        trace.push(TraceStep {
            set: d.clone(),
            delta,
            tau_after: end.clone(),
            matrix: before,
            row0: row0.then(|| vec![Rational::zero(); tm.jobs()]),
        });
        tau = end;
        prev = Some(d);
    }
}

/// Schedule of makespan `max(row sums, column sums)` respecting `dist`.
pub fn construct_ll(inst: &Instance, dist: &Distribution) -> Result<(Schedule, IterationTrace), LlError> {
    if let Some(j) = (0..inst.jobs()).find(|&j| !inst.release(j).is_zero()) {
        return Err(LlError::NonzeroRelease { job: j });
    }
    dist.check(inst).map_err(LlError::Model)?;
    let mut segs = Vec::new();
    let mut trace = IterationTrace::default();
    run(dist.t.clone(), Rational::zero(), &mut segs, &mut trace, false);
    Ok((Schedule::new(segs).normalized(), trace))
}
