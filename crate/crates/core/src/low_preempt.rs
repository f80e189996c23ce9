//! Schedules for distributions with at most one split-job part per machine.
//!
//! A split job's parts are chained in machine order so they never overlap in time;
//! whole jobs fill each machine around the single fixed part it may carry, being
//! interrupted at the part's start and resumed at its end.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use crate::model::{preemptions, Distribution, Instance, ModelError, Schedule, Segment};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EligibilityReport {
    pub eligible: bool,
    /// Jobs with positive time on two or more machines, with those machines.
    pub preempted_jobs: Vec<(usize, Vec<usize>)>,
    pub reason: Option<String>,
}

pub fn check_eligibility(dist: &Distribution) -> EligibilityReport {
    let preempted_jobs: Vec<(usize, Vec<usize>)> = (0..dist.jobs())
        .map(|j| (j, dist.machines_of(j)))
        .filter(|(_, ms)| ms.len() >= 2)
        .collect();
    let mut holders: Vec<Vec<usize>> = vec![Vec::new(); dist.machines()];
    for (j, ms) in &preempted_jobs {
        for &i in ms {
            holders[i].push(*j);
        }
    }
    let reason = holders.iter().enumerate().find(|(_, js)| js.len() >= 2).map(|(i, js)| {
        let names: Vec<String> = js.iter().map(|j| format!("{}", j + 1)).collect();
        format!("machine {} holds parts of jobs {}", i + 1, names.join(", "))
    });
    EligibilityReport { eligible: reason.is_none(), preempted_jobs, reason }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LowPreemptError {
    Ineligible(EligibilityReport),
    NonzeroRelease { job: usize },
    /// Some machine or job needs more than `dist.cmax`.
    BelowLineBound { line_bound: Rational, cmax: Rational },
    Model(ModelError),
}

impl fmt::Display for LowPreemptError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LowPreemptError::Ineligible(r) => {
                write!(f, "distribution is not eligible: {}", r.reason.as_deref().unwrap_or("unknown"))
            }
            LowPreemptError::NonzeroRelease { job } => write!(f, "job {} is not released at 0", job + 1),
            LowPreemptError::BelowLineBound { line_bound, cmax } => {
                write!(f, "cmax {cmax} is below the largest row or column sum {line_bound}")
            }
            LowPreemptError::Model(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for LowPreemptError {}

/// `max(0, 2m - 4)`.
pub fn preemption_budget(machines: usize) -> usize {
    (2 * machines).saturating_sub(4)
}

/// Preemptions of `sched` beyond the `parts - 1` machine changes each split job of
/// `dist` needs anyway.
pub fn extra_preemptions(sched: &Schedule, dist: &Distribution) -> usize {
    let chains: usize = (0..dist.jobs()).map(|j| dist.machines_of(j).len().saturating_sub(1)).sum();
    preemptions(sched).saturating_sub(chains)
}

fn prepare(inst: &Instance, dist: &Distribution) -> Result<EligibilityReport, LowPreemptError> {
    dist.check(inst).map_err(LowPreemptError::Model)?;
    let report = check_eligibility(dist);
    if !report.eligible {
        return Err(LowPreemptError::Ineligible(report));
    }
    Ok(report)
}

/// Places `work` units of `job` on `machine` from `from` on, skipping `busy`
/// (sorted, disjoint). Returns the completion time.
fn fill(
    segs: &mut Vec<Segment>,
    busy: &[(Rational, Rational)],
    machine: usize,
    job: usize,
    mut work: Rational,
    from: Rational,
) -> Rational {
    let mut at = from;
    while work.is_positive() {
        for (a, b) in busy {
            if a <= &at && &at < b {
                at = b.clone();
            }
        }
        let room = busy.iter().filter(|(a, _)| a > &at).map(|(a, _)| a - &at).min();
        let run = match room {
            Some(r) if r < work => r,
            _ => work.clone(),
        };
        let end = &at + &run;
        segs.push(Segment { machine, job, start: at, end: end.clone() });
        work -= run;
        at = end;
    }
    at
}

/// Puts every whole job on its machine, in `order`, around the fixed parts.
fn place_whole_jobs(
    segs: &mut Vec<Segment>,
    busy: &[Vec<(Rational, Rational)>],
    dist: &Distribution,
    inst: &Instance,
    order: &[usize],
) {
    for (i, bi) in busy.iter().enumerate() {
        let mut cursor = Rational::zero();
        for &j in order {
            let t = &dist.t[i][j];
            if t.is_zero() || dist.machines_of(j).len() >= 2 {
                continue;
            }
            let from = core::cmp::max(cursor.clone(), inst.release(j).clone());
            cursor = fill(segs, bi, i, j, t.clone(), from);
        }
    }
}

fn preempted_by_total(dist: &Distribution, report: &EligibilityReport) -> Vec<(usize, Vec<usize>)> {
    let mut jobs = report.preempted_jobs.clone();
    jobs.sort_by(|(a, _), (b, _)| dist.col_sum(*b).cmp(&dist.col_sum(*a)).then(a.cmp(b)));
    jobs
}

/// All jobs released at 0. Split parts run back-to-back from 0 in machine order,
/// except the last part, which ends exactly at `dist.cmax`.
pub fn schedule_simultaneous(inst: &Instance, dist: &Distribution) -> Result<Schedule, LowPreemptError> {
    if let Some(job) = (0..inst.jobs()).find(|&j| !inst.release(j).is_zero()) {
        return Err(LowPreemptError::NonzeroRelease { job });
    }
    let report = prepare(inst, dist)?;
    let line_bound = dist.line_bound();
    if line_bound > dist.cmax {
        return Err(LowPreemptError::BelowLineBound { line_bound, cmax: dist.cmax.clone() });
    }
    let m = dist.machines();
    let mut segs = Vec::new();
    let mut busy = vec![Vec::new(); m];
    for (j, ms) in preempted_by_total(dist, &report) {
        let mut at = Rational::zero();
        for (k, &i) in ms.iter().enumerate() {
            let len = dist.t[i][j].clone();
            let start = if k + 1 == ms.len() { &dist.cmax - &len } else { at.clone() };
            let end = &start + &len;
            busy[i].push((start.clone(), end.clone()));
            segs.push(Segment { machine: i, job: j, start, end: end.clone() });
            at = end;
        }
    }
    let order: Vec<usize> = (0..dist.jobs()).collect();
    place_whole_jobs(&mut segs, &busy, dist, inst, &order);
    let sched = Schedule::new(segs).normalized();
    debug_assert!(crate::model::makespan(&sched) <= dist.cmax);
    Ok(sched)
}

/// Split parts run back-to-back in machine order from the job's release; whole
/// jobs run per machine in order of release, never before it.
pub fn schedule_with_releases(inst: &Instance, dist: &Distribution) -> Result<Schedule, LowPreemptError> {
    let report = prepare(inst, dist)?;
    let m = dist.machines();
    let mut segs = Vec::new();
    let mut busy = vec![Vec::new(); m];
    for (j, ms) in preempted_by_total(dist, &report) {
        let mut at = inst.release(j).clone();
        for &i in &ms {
            let end = &at + &dist.t[i][j];
            busy[i].push((at.clone(), end.clone()));
            segs.push(Segment { machine: i, job: j, start: at, end: end.clone() });
            at = end;
        }
    }
    let mut order: Vec<usize> = (0..dist.jobs()).collect();
    order.sort_by(|&a, &b| inst.release(a).cmp(inst.release(b)).then(a.cmp(&b)));
    place_whole_jobs(&mut segs, &busy, dist, inst, &order);
    Ok(Schedule::new(segs).normalized())
}
