//! Decrementing-set construction with release times.
//!
//! An extra row 0 holds `max(0, r_j − τ)`; a cell `(i, j)` may be selected only
//! when that entry is 0. Once every job with work left is released the residual
//! matrix is finished by the simultaneous-release construction.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use crate::ll::{self, DecrementingSet, IterationTrace, TraceStep};
use crate::model::{Distribution, Instance, ModelError, Schedule, Segment};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtTimeMatrix {
    pub t: Vec<Vec<Rational>>,
    /// `max(0, r_j − τ)`.
    pub row0: Vec<Rational>,
    pub tau: Rational,
    /// Initial bound `max(row sums, max_j r_j + column sum)` minus `τ`.
    pub capacity: Rational,
    releases: Vec<Rational>,
}

impl ExtTimeMatrix {
    pub fn new(inst: &Instance, dist: &Distribution) -> Self {
        ExtTimeMatrix {
            t: dist.t.clone(),
            row0: inst.releases().to_vec(),
            tau: Rational::zero(),
            capacity: dist.release_bound(inst),
            releases: inst.releases().to_vec(),
        }
    }

    pub fn machines(&self) -> usize {
        self.t.len()
    }

    pub fn jobs(&self) -> usize {
        self.releases.len()
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

    pub fn is_valid(&self, i: usize, j: usize) -> bool {
        self.t[i][j].is_positive() && self.row0[j].is_zero()
    }

    /// Smallest positive row-0 entry among jobs with work left.
    pub fn next_release_gap(&self) -> Option<Rational> {
        (0..self.jobs())
            .filter(|&j| self.row0[j].is_positive() && self.col_sum(j).is_positive())
            .map(|j| self.row0[j].clone())
            .min()
    }

    fn all_released(&self) -> bool {
        self.next_release_gap().is_none()
    }

    /// Moves time forward by `delta`, subtracting it from the cells of `d`.
    pub fn advance(&mut self, d: &DecrementingSet, delta: &Rational) {
        for &(i, j) in &d.cells {
            self.t[i][j] -= delta;
        }
        self.tau += delta;
        self.capacity -= delta;
        for (r0, r) in self.row0.iter_mut().zip(&self.releases) {
            let left = r - &self.tau;
            *r0 = if left.is_positive() { left } else { Rational::zero() };
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReadyRow {
    pub machine: usize,
    pub valid: Vec<usize>,
}

/// Rows holding at least one valid cell, with those cells.
pub fn ready_rows(etm: &ExtTimeMatrix) -> Vec<ReadyRow> {
    (0..etm.machines())
        .map(|i| ReadyRow { machine: i, valid: (0..etm.jobs()).filter(|&j| etm.is_valid(i, j)).collect() })
        .filter(|r| !r.valid.is_empty())
        .collect()
}

/// Released jobs valid in two or more ready rows, with those rows.
pub fn conflicts(etm: &ExtTimeMatrix) -> Vec<(usize, Vec<usize>)> {
    (0..etm.jobs())
        .map(|j| (j, (0..etm.machines()).filter(|&i| etm.is_valid(i, j)).collect::<Vec<_>>()))
        .filter(|(_, rows)| rows.len() >= 2)
        .collect()
}

/// One valid cell per ready row where columns allow, `None` when no row is ready.
///
/// Ready rows are visited by non-increasing load (index on ties) in three passes:
/// rows with a valid cell in a tight column take one (preferring the previous
/// column, then the longest remaining job); rows whose previous column is still
/// valid and free keep it; the rest take the free valid column of the longest
/// remaining job.
pub fn select_decrementing_set_ext(
    etm: &ExtTimeMatrix,
    prev: Option<&DecrementingSet>,
) -> Option<DecrementingSet> {
    let ready = ready_rows(etm);
    if ready.is_empty() {
        return None;
    }
    let loads: Vec<Rational> = (0..etm.machines()).map(|i| etm.row_sum(i)).collect();
    let cols: Vec<Rational> = (0..etm.jobs()).map(|j| etm.col_sum(j)).collect();
    let mut order: Vec<&ReadyRow> = ready.iter().collect();
    order.sort_by(|a, b| loads[b.machine].cmp(&loads[a.machine]).then(a.machine.cmp(&b.machine)));

    let previous = |i: usize| prev.and_then(|d| d.job_on(i));
    let mut pick: Vec<Option<usize>> = vec![None; etm.machines()];
    let mut used = vec![false; etm.jobs()];
    let longest = |cands: &mut dyn Iterator<Item = usize>, i: usize| {
        cands.min_by(|&a, &b| {
            let pa = previous(i) != Some(a);
            let pb = previous(i) != Some(b);
            pa.cmp(&pb).then(cols[b].cmp(&cols[a])).then(a.cmp(&b))
        })
    };

    for row in &order {
        let i = row.machine;
        let mut tight = row.valid.iter().copied().filter(|&j| !used[j] && cols[j] >= etm.capacity);
        if let Some(j) = longest(&mut tight, i) {
            pick[i] = Some(j);
            used[j] = true;
        }
    }
    for row in &order {
        let i = row.machine;
        if pick[i].is_some() {
            continue;
        }
        if let Some(j) = previous(i).filter(|&j| etm.is_valid(i, j) && !used[j]) {
            pick[i] = Some(j);
            used[j] = true;
        }
    }
    for row in &order {
        let i = row.machine;
        if pick[i].is_some() {
            continue;
        }
        let best = row
            .valid
            .iter()
            .copied()
            .filter(|&j| !used[j])
            .min_by(|&a, &b| cols[b].cmp(&cols[a]).then(a.cmp(&b)));
        if let Some(j) = best {
            pick[i] = Some(j);
            used[j] = true;
        }
    }
    let cells = pick.into_iter().enumerate().filter_map(|(i, j)| Some((i, j?))).collect();
    Some(DecrementingSet { cells })
}

/// Smallest selected cell or positive row-0 entry.
pub fn choose_delta_ext(etm: &ExtTimeMatrix, d: &DecrementingSet) -> Rational {
    d.cells
        .iter()
        .map(|&(i, j)| etm.t[i][j].clone())
        .chain(etm.next_release_gap())
        .min()
        .expect("selection is nonempty")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtError {
    Model(ModelError),
}

impl fmt::Display for ExtError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtError::Model(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for ExtError {}

/// A release-respecting schedule that respects `dist`.
pub fn construct_ext(inst: &Instance, dist: &Distribution) -> Result<(Schedule, IterationTrace), ExtError> {
    dist.check(inst).map_err(ExtError::Model)?;
    let mut etm = ExtTimeMatrix::new(inst, dist);
    let mut segs: Vec<Segment> = Vec::new();
    let mut trace = IterationTrace::default();
    let mut prev: Option<DecrementingSet> = None;
    while !etm.is_zero() {
        if etm.all_released() {
            ll::run(etm.t.clone(), etm.tau.clone(), &mut segs, &mut trace, true);
            break;
        }
        let before = (etm.t.clone(), etm.row0.clone());
        let (d, delta) = match select_decrementing_set_ext(&etm, prev.as_ref()) {
            Some(d) => {
                let delta = choose_delta_ext(&etm, &d);
                (d, delta)
            }
            None => (DecrementingSet::default(), etm.next_release_gap().expect("work is unreleased")),
        };
        let end = &etm.tau + &delta;
        for &(i, j) in &d.cells {
            segs.push(Segment { machine: i, job: j, start: etm.tau.clone(), end: end.clone() });
        }
        etm.advance(&d, &delta);
        trace.push(TraceStep { set: d.clone(), delta, tau_after: end, matrix: before.0, row0: Some(before.1) });
        prev = if d.cells.is_empty() { None } else { Some(d) };
    }
    Ok((Schedule::new(segs).normalized(), trace))
}
