//! Instances, distributions, schedules, and feasibility checking.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::rational::{self, Rational};

/// Processing time of one job on one machine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ptime {
    Finite(Rational),
    Forbidden,
}

impl Ptime {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Ptime::Finite(p) => Some(p),
            Ptime::Forbidden => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelError {
    Shape(String),
    NonPositiveTime { machine: usize, job: usize },
    NegativeRelease { job: usize },
    NoMachine { job: usize },
    NegativeAmount { machine: usize, job: usize },
    AmountOnForbidden { machine: usize, job: usize },
    IncompleteJob { job: usize, fraction: Rational },
    EmptySegment { machine: usize, job: usize },
    IndexOutOfRange { segment: usize, machine: usize, job: usize },
    InvalidSchedule(usize),
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ModelError::*;
        match self {
            Shape(s) => write!(f, "shape mismatch: {s}"),
            NonPositiveTime { machine, job } => {
                write!(f, "processing time of job {} on machine {} is not positive", job + 1, machine + 1)
            }
            NegativeRelease { job } => write!(f, "release time of job {} is negative", job + 1),
            NoMachine { job } => write!(f, "job {} has no admissible machine", job + 1),
            NegativeAmount { machine, job } => {
                write!(f, "negative amount for job {} on machine {}", job + 1, machine + 1)
            }
            AmountOnForbidden { machine, job } => {
                write!(f, "job {} assigned to forbidden machine {}", job + 1, machine + 1)
            }
            IncompleteJob { job, fraction } => {
                write!(f, "job {} is covered to fraction {}, not 1", job + 1, fraction)
            }
            EmptySegment { machine, job } => {
                write!(f, "empty segment for job {} on machine {}", job + 1, machine + 1)
            }
            IndexOutOfRange { segment, machine, job } => write!(
                f,
                "segment {segment} refers to machine {} / job {} outside the instance",
                machine + 1,
                job + 1
            ),
            InvalidSchedule(k) => write!(f, "schedule has {k} feasibility violation(s)"),
        }
    }
}

impl core::error::Error for ModelError {}

/// `m` machines, `n` jobs, processing times `p[i][j]`, releases `r[j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    m: usize,
    n: usize,
    p: Vec<Vec<Ptime>>,
    r: Vec<Rational>,
}

impl Instance {
    pub fn new(p: Vec<Vec<Ptime>>, r: Vec<Rational>) -> Result<Self, ModelError> {
        let m = p.len();
        let n = r.len();
        for (i, row) in p.iter().enumerate() {
            if row.len() != n {
                return Err(ModelError::Shape(format!(
                    "machine {} has {} entries, expected {n}",
                    i + 1,
                    row.len()
                )));
            }
            for (j, pt) in row.iter().enumerate() {
                if let Ptime::Finite(v) = pt {
                    if !rational::is_pos(v) {
                        return Err(ModelError::NonPositiveTime { machine: i, job: j });
                    }
                }
            }
        }
        for (j, rj) in r.iter().enumerate() {
            if rj < &Rational::zero() {
                return Err(ModelError::NegativeRelease { job: j });
            }
            if !p.iter().any(|row| row[j].finite().is_some()) {
                return Err(ModelError::NoMachine { job: j });
            }
        }
        Ok(Instance { m, n, p, r })
    }

    pub fn machines(&self) -> usize {
        self.m
    }

    pub fn jobs(&self) -> usize {
        self.n
    }

    pub fn p(&self, i: usize, j: usize) -> &Ptime {
        &self.p[i][j]
    }

    pub fn ptimes(&self) -> &[Vec<Ptime>] {
        &self.p
    }

    pub fn release(&self, j: usize) -> &Rational {
        &self.r[j]
    }

    pub fn releases(&self) -> &[Rational] {
        &self.r
    }

    pub fn all_released_at_zero(&self) -> bool {
        self.r.iter().all(Zero::is_zero)
    }

    /// Lower bound `max_j (r_j + min_i p_ij)` on any feasible makespan.
    pub fn trivial_lower_bound(&self) -> Rational {
        (0..self.n)
            .map(|j| {
                let fastest = (0..self.m)
                    .filter_map(|i| self.p[i][j].finite())
                    .min()
                    .cloned()
                    .unwrap_or_else(Rational::zero);
                &self.r[j] + fastest
            })
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

/// Time `t[i][j]` machine `i` spends on job `j`, plus the program's `C_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distribution {
    pub t: Vec<Vec<Rational>>,
    pub cmax: Rational,
}

impl Distribution {
    pub fn zeros(m: usize, n: usize) -> Self {
        Distribution { t: vec![vec![Rational::zero(); n]; m], cmax: Rational::zero() }
    }

    /// Checks shape, sign, forbidden pairs and `Σ_i t_ij / p_ij = 1`.
    pub fn check(&self, inst: &Instance) -> Result<(), ModelError> {
        if self.t.len() != inst.m || self.t.iter().any(|row| row.len() != inst.n) {
            return Err(ModelError::Shape(format!(
                "distribution is not {}x{}",
                inst.m, inst.n
            )));
        }
        for j in 0..inst.n {
            let mut frac = Rational::zero();
            for i in 0..inst.m {
                let t = &self.t[i][j];
                if t < &Rational::zero() {
                    return Err(ModelError::NegativeAmount { machine: i, job: j });
                }
                if t.is_zero() {
                    continue;
                }
                match inst.p(i, j) {
                    Ptime::Forbidden => {
                        return Err(ModelError::AmountOnForbidden { machine: i, job: j })
                    }
                    Ptime::Finite(p) => frac += t / p,
                }
            }
            if !frac.is_one() {
                return Err(ModelError::IncompleteJob { job: j, fraction: frac });
            }
        }
        Ok(())
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

    /// `max(max row sum, max column sum)`: the makespan bound for simultaneous releases.
    pub fn line_bound(&self) -> Rational {
        let rows = (0..self.machines()).map(|i| self.row_sum(i));
        let cols = (0..self.jobs()).map(|j| self.col_sum(j));
        rows.chain(cols).max().unwrap_or_else(Rational::zero)
    }

    /// `max(max row sum, max_j (r_j + column sum))` over jobs with work.
    pub fn release_bound(&self, inst: &Instance) -> Rational {
        let rows = (0..self.machines()).map(|i| self.row_sum(i));
        let cols = (0..self.jobs())
            .map(|j| (j, self.col_sum(j)))
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| inst.release(j) + c);
        rows.chain(cols).max().unwrap_or_else(Rational::zero)
    }

    /// Machines holding a positive part of job `j`.
    pub fn machines_of(&self, j: usize) -> Vec<usize> {
        (0..self.machines()).filter(|&i| rational::is_pos(&self.t[i][j])).collect()
    }
}

/// Job `job` runs on `machine` during `[start, end)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Segment {
    pub machine: usize,
    pub job: usize,
    pub start: Rational,
    pub end: Rational,
}

impl Segment {
    pub fn new(machine: usize, job: usize, start: Rational, end: Rational) -> Result<Self, ModelError> {
        if end <= start {
            return Err(ModelError::EmptySegment { machine, job });
        }
        Ok(Segment { machine, job, start, end })
    }

    pub fn len(&self) -> Rational {
        &self.end - &self.start
    }

    fn overlaps(&self, other: &Segment) -> bool {
        self.start < other.end && other.start < self.end
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Schedule {
    pub segments: Vec<Segment>,
}

impl Schedule {
    pub fn new(segments: Vec<Segment>) -> Self {
        Schedule { segments }
    }

    /// Sorts by (machine, start) and joins touching segments of the same job.
    pub fn normalized(&self) -> Schedule {
        let mut segs = self.segments.clone();
        segs.sort_by(|a, b| (a.machine, &a.start, a.job).cmp(&(b.machine, &b.start, b.job)));
        let mut out: Vec<Segment> = Vec::with_capacity(segs.len());
        for s in segs {
            if let Some(last) = out.last_mut() {
                if last.machine == s.machine && last.job == s.job && last.end == s.start {
                    last.end = s.end;
                    continue;
                }
            }
            out.push(s);
        }
        Schedule { segments: out }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Rule {
    MachineOverlap,
    JobOverlap,
    BeforeRelease,
    ForbiddenPair,
    WorkMismatch,
    Split,
}

impl Rule {
    pub fn id(self) -> &'static str {
        match self {
            Rule::MachineOverlap => "machine-overlap",
            Rule::JobOverlap => "job-overlap",
            Rule::BeforeRelease => "before-release",
            Rule::ForbiddenPair => "forbidden-pair",
            Rule::WorkMismatch => "work-mismatch",
            Rule::Split => "split",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub rule: Rule,
    pub machine: Option<usize>,
    pub job: Option<usize>,
    pub segments: Vec<usize>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    fn from(violations: Vec<Violation>) -> Self {
        ValidationReport { ok: violations.is_empty(), violations }
    }
}

fn check_indices(inst: &Instance, sched: &Schedule) -> Result<(), ModelError> {
    for (k, s) in sched.segments.iter().enumerate() {
        if s.machine >= inst.m || s.job >= inst.n {
            return Err(ModelError::IndexOutOfRange { segment: k, machine: s.machine, job: s.job });
        }
        if s.end <= s.start {
            return Err(ModelError::EmptySegment { machine: s.machine, job: s.job });
        }
    }
    Ok(())
}

/// Checks every feasibility rule of a complete schedule.
pub fn validate_schedule(
    inst: &Instance,
    sched: &Schedule,
    no_split: bool,
) -> Result<ValidationReport, ModelError> {
    validate(inst, sched, no_split, false)
}

/// As [`validate_schedule`], but jobs may be only partly processed (fraction ≤ 1).
pub fn validate_partial(inst: &Instance, sched: &Schedule) -> Result<ValidationReport, ModelError> {
    validate(inst, sched, false, true)
}

fn validate(
    inst: &Instance,
    sched: &Schedule,
    no_split: bool,
    partial: bool,
) -> Result<ValidationReport, ModelError> {
    check_indices(inst, sched)?;
    let segs = &sched.segments;
    let mut out = Vec::new();
    for a in 0..segs.len() {
        for b in a + 1..segs.len() {
            let (x, y) = (&segs[a], &segs[b]);
            if !x.overlaps(y) {
                continue;
            }
            if x.machine == y.machine {
                out.push(Violation {
                    rule: Rule::MachineOverlap,
                    machine: Some(x.machine),
                    job: None,
                    segments: vec![a, b],
                    detail: format!(
                        "machine {} runs jobs {} and {} at once",
                        x.machine + 1,
                        x.job + 1,
                        y.job + 1
                    ),
                });
            }
            if x.job == y.job && x.machine != y.machine {
                out.push(Violation {
                    rule: Rule::JobOverlap,
                    machine: None,
                    job: Some(x.job),
                    segments: vec![a, b],
                    detail: format!(
                        "job {} runs on machines {} and {} at once",
                        x.job + 1,
                        x.machine + 1,
                        y.machine + 1
                    ),
                });
            }
        }
    }
    let mut done = vec![Rational::zero(); inst.n];
    for (k, s) in segs.iter().enumerate() {
        if s.start < inst.r[s.job] {
            out.push(Violation {
                rule: Rule::BeforeRelease,
                machine: Some(s.machine),
                job: Some(s.job),
                segments: vec![k],
                detail: format!(
                    "job {} starts at {} before its release {}",
                    s.job + 1,
                    s.start,
                    inst.r[s.job]
                ),
            });
        }
        match inst.p(s.machine, s.job) {
            Ptime::Forbidden => out.push(Violation {
                rule: Rule::ForbiddenPair,
                machine: Some(s.machine),
                job: Some(s.job),
                segments: vec![k],
                detail: format!("job {} cannot run on machine {}", s.job + 1, s.machine + 1),
            }),
            Ptime::Finite(p) => done[s.job] += s.len() / p,
        }
    }
    for (j, f) in done.iter().enumerate() {
        let bad = if partial { f > &Rational::one() } else { !f.is_one() };
        if bad {
            out.push(Violation {
                rule: Rule::WorkMismatch,
                machine: None,
                job: Some(j),
                segments: Vec::new(),
                detail: format!("job {} is processed to fraction {}", j + 1, f),
            });
        }
    }
    if no_split {
        for ((i, j), runs) in runs_per_pair(segs) {
            if runs > 1 {
                out.push(Violation {
                    rule: Rule::Split,
                    machine: Some(i),
                    job: Some(j),
                    segments: Vec::new(),
                    detail: format!(
                        "job {} is interrupted {} time(s) on machine {}",
                        j + 1,
                        runs - 1,
                        i + 1
                    ),
                });
            }
        }
    }
    Ok(ValidationReport::from(out))
}

/// Number of maximal contiguous runs of each (machine, job) pair.
fn runs_per_pair(segs: &[Segment]) -> BTreeMap<(usize, usize), usize> {
    let norm = Schedule::new(segs.to_vec()).normalized();
    let mut runs = BTreeMap::new();
    for s in &norm.segments {
        *runs.entry((s.machine, s.job)).or_insert(0) += 1;
    }
    runs
}

pub fn makespan(sched: &Schedule) -> Rational {
    sched.segments.iter().map(|s| s.end.clone()).max().unwrap_or_else(Rational::zero)
}

/// Per-(machine, job) totals of a schedule, with its makespan as `cmax`.
pub fn distribution_of(inst: &Instance, sched: &Schedule) -> Result<Distribution, ModelError> {
    let report = validate_schedule(inst, sched, false)?;
    if !report.ok {
        return Err(ModelError::InvalidSchedule(report.violations.len()));
    }
    let mut d = totals(inst.m, inst.n, sched);
    d.cmax = makespan(sched);
    Ok(d)
}

fn totals(m: usize, n: usize, sched: &Schedule) -> Distribution {
    let mut d = Distribution::zeros(m, n);
    for s in &sched.segments {
        d.t[s.machine][s.job] += s.len();
    }
    d
}

/// True iff the schedule's per-(machine, job) totals equal `dist.t` entrywise.
pub fn respects(sched: &Schedule, dist: &Distribution) -> bool {
    let (m, n) = (dist.machines(), dist.jobs());
    if sched.segments.iter().any(|s| s.machine >= m || s.job >= n) {
        return false;
    }
    totals(m, n, sched).t == dist.t
}

/// `(parts, per_machine_max)` over jobs with positive time on two or more machines.
pub fn count_preempted_parts(dist: &Distribution) -> (usize, usize) {
    let mut per_machine = vec![0usize; dist.machines()];
    let mut parts = 0;
    for j in 0..dist.jobs() {
        let ms = dist.machines_of(j);
        if ms.len() >= 2 {
            parts += ms.len();
            for i in ms {
                per_machine[i] += 1;
            }
        }
    }
    (parts, per_machine.into_iter().max().unwrap_or(0))
}

/// Schedule-level preemptions: per job, maximal runs minus one. A run ends when the
/// job stops or changes machine.
pub fn preemptions(sched: &Schedule) -> usize {
    let mut by_job: BTreeMap<usize, Vec<&Segment>> = BTreeMap::new();
    for s in &sched.segments {
        by_job.entry(s.job).or_default().push(s);
    }
    by_job
        .values_mut()
        .map(|segs| {
            segs.sort_by(|a, b| a.start.cmp(&b.start));
            let mut runs = 1;
            for w in segs.windows(2) {
                if w[0].machine != w[1].machine || w[0].end != w[1].start {
                    runs += 1;
                }
            }
            runs - 1
        })
        .sum()
}

/// Within-machine interruptions: per (machine, job), maximal runs minus one.
pub fn splits(sched: &Schedule) -> usize {
    runs_per_pair(&sched.segments).values().map(|r| r - 1).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn seg(i: usize, j: usize, a: i64, b: i64) -> Segment {
        Segment::new(i, j, int(a), int(b)).unwrap()
    }

    fn one_job(r: i64, p: i64) -> Instance {
        Instance::new(vec![vec![Ptime::Finite(int(p))]], vec![int(r)]).unwrap()
    }

    #[test]
    fn rejects_bad_instances() {
        assert!(matches!(
            Instance::new(vec![vec![Ptime::Forbidden]], vec![int(0)]),
            Err(ModelError::NoMachine { job: 0 })
        ));
        assert!(Instance::new(vec![vec![Ptime::Finite(int(0))]], vec![int(0)]).is_err());
        assert!(Instance::new(vec![vec![Ptime::Finite(int(1))]], vec![int(-1)]).is_err());
        assert!(Instance::new(vec![vec![]], vec![int(0)]).is_err());
    }

    #[test]
    fn empty_segment_rejected() {
        assert!(Segment::new(0, 0, int(2), int(2)).is_err());
    }

    #[test]
    fn empty_instance_empty_schedule_ok() {
        let inst = Instance::new(vec![vec![], vec![]], vec![]).unwrap();
        let rep = validate_schedule(&inst, &Schedule::default(), true).unwrap();
        assert!(rep.ok);
        assert_eq!(makespan(&Schedule::default()), int(0));
    }

    #[test]
    fn release_violation_reported() {
        let inst = one_job(5, 5);
        let rep = validate_schedule(&inst, &Schedule::new(vec![seg(0, 0, 0, 5)]), false).unwrap();
        assert!(!rep.ok);
        assert!(rep.violations.iter().any(|v| v.rule == Rule::BeforeRelease));
    }

    #[test]
    fn out_of_range_is_structural() {
        let inst = one_job(0, 5);
        let err = validate_schedule(&inst, &Schedule::new(vec![seg(1, 0, 0, 5)]), false);
        assert!(matches!(err, Err(ModelError::IndexOutOfRange { .. })));
    }

    #[test]
    fn split_detected_only_when_asked() {
        let inst = one_job(0, 4);
        let s = Schedule::new(vec![seg(0, 0, 0, 2), seg(0, 0, 3, 5)]);
        assert!(validate_schedule(&inst, &s, false).unwrap().ok);
        let rep = validate_schedule(&inst, &s, true).unwrap();
        assert_eq!(rep.violations.len(), 1);
        assert_eq!(rep.violations[0].rule, Rule::Split);
        // touching pieces are one run
        let t = Schedule::new(vec![seg(0, 0, 0, 2), seg(0, 0, 2, 4)]);
        assert!(validate_schedule(&inst, &t, true).unwrap().ok);
    }

    #[test]
    fn overlaps_detected() {
        let inst = Instance::new(
            vec![vec![Ptime::Finite(int(2)); 2], vec![Ptime::Finite(int(2)); 2]],
            vec![int(0), int(0)],
        )
        .unwrap();
        let s = Schedule::new(vec![seg(0, 0, 0, 2), seg(0, 1, 1, 3)]);
        let rep = validate_schedule(&inst, &s, false).unwrap();
        assert!(rep.violations.iter().any(|v| v.rule == Rule::MachineOverlap));
        let s = Schedule::new(vec![seg(0, 0, 0, 1), seg(1, 0, 0, 1), seg(1, 1, 1, 3)]);
        let rep = validate_schedule(&inst, &s, false).unwrap();
        assert!(rep.violations.iter().any(|v| v.rule == Rule::JobOverlap));
    }

    #[test]
    fn single_job_distribution() {
        let inst = one_job(0, 7);
        let d = distribution_of(&inst, &Schedule::new(vec![seg(0, 0, 0, 7)])).unwrap();
        assert_eq!(d.t, vec![vec![int(7)]]);
        assert_eq!(d.cmax, int(7));
    }

    #[test]
    fn empty_respects_zero() {
        assert!(respects(&Schedule::default(), &Distribution::zeros(2, 3)));
    }

    #[test]
    fn preempted_parts_trivial_cases() {
        let mut d = Distribution::zeros(3, 3);
        for k in 0..3 {
            d.t[k][k] = int(2);
        }
        assert_eq!(count_preempted_parts(&d), (0, 0));
        let mut d = Distribution::zeros(4, 1);
        for i in 0..4 {
            d.t[i][0] = int(1);
        }
        assert_eq!(count_preempted_parts(&d), (4, 1));
    }

    #[test]
    fn preemption_counts() {
        let s = Schedule::new(vec![seg(0, 0, 0, 1), seg(1, 0, 1, 2), seg(1, 0, 3, 4), seg(0, 1, 1, 3)]);
        assert_eq!(preemptions(&s), 2);
        assert_eq!(splits(&s), 1);
    }
}
