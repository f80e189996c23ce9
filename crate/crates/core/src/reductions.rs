//! Partition → three-machine scheduling reduction.
//!
//! Jobs 1-4 are indices 0-3; item `l` becomes job index `4 + l`, which only fits
//! machine 2 with length `2 z_l / M`. A no-split schedule of length 6 exists iff
//! the items split into two halves of equal sum.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::model::{Distribution, Instance, Ptime, Schedule, Segment};
use crate::rational::{int, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReductionError {
    NoItems,
    ZeroItem(usize),
    BadSplit,
}

impl fmt::Display for ReductionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReductionError::NoItems => write!(f, "at least one item is required"),
            ReductionError::ZeroItem(l) => write!(f, "item {} is zero", l + 1),
            ReductionError::BadSplit => write!(f, "split is not a partition into two halves of equal sum"),
        }
    }
}

impl core::error::Error for ReductionError {}

fn check_items(items: &[u64]) -> Result<u64, ReductionError> {
    if items.is_empty() {
        return Err(ReductionError::NoItems);
    }
    if let Some(l) = items.iter().position(|&z| z == 0) {
        return Err(ReductionError::ZeroItem(l));
    }
    Ok(items.iter().sum())
}

fn item_length(z: u64, total: u64) -> Rational {
    Rational::new((2 * z).into(), total.into())
}

/// Three machines, `4 + k` jobs.
pub fn partition_to_instance(items: &[u64]) -> Result<Instance, ReductionError> {
    let total = check_items(items)?;
    let n = 4 + items.len();
    let mut p = vec![vec![Ptime::Forbidden; n]; 3];
    for row in p.iter_mut() {
        row[0] = Ptime::Finite(int(6));
    }
    p[0][2] = Ptime::Finite(int(2));
    p[1][3] = Ptime::Finite(int(3));
    p[2][1] = Ptime::Finite(int(5));
    for (l, &z) in items.iter().enumerate() {
        p[1][4 + l] = Ptime::Finite(item_length(z, total));
    }
    let mut r = vec![int(0), int(0), int(4), int(0)];
    r.extend(items.iter().map(|_| int(3)));
    Ok(Instance::new(p, r).expect("reduction instance is valid"))
}

/// Subset-sum table over `M / 2`; returns index sets `(P1, P2)` with equal sums.
pub fn solve_partition(items: &[u64]) -> Option<(Vec<usize>, Vec<usize>)> {
    let total: u64 = items.iter().sum();
    if total % 2 == 1 || items.is_empty() {
        return None;
    }
    let half = (total / 2) as usize;
    // via[s] = item that first reached sum s
    let mut via: Vec<Option<usize>> = vec![None; half + 1];
    let mut reach = vec![false; half + 1];
    reach[0] = true;
    for (l, &z) in items.iter().enumerate() {
        let z = z as usize;
        for s in (z..=half).rev() {
            if !reach[s] && reach[s - z] {
                reach[s] = true;
                via[s] = Some(l);
            }
        }
    }
    if !reach[half] {
        return None;
    }
    let mut p1 = Vec::new();
    let mut s = half;
    while s > 0 {
        let l = via[s].expect("reachable sum has a last item");
        p1.push(l);
        s -= items[l] as usize;
    }
    p1.sort_unstable();
    let p2 = (0..items.len()).filter(|l| !p1.contains(l)).collect();
    Some((p1, p2))
}

pub fn theorem1_exists_6(items: &[u64]) -> bool {
    solve_partition(items).is_some()
}

/// Job 1 gets 4 units on machine 1 and 1 unit on each of machines 2, 3; every
/// other job sits whole on its only machine.
pub fn fig1_distribution(items: &[u64]) -> Result<Distribution, ReductionError> {
    let total = check_items(items)?;
    let n = 4 + items.len();
    let mut t = vec![vec![Rational::zero(); n]; 3];
    t[0][0] = int(4);
    t[1][0] = int(1);
    t[2][0] = int(1);
    t[0][2] = int(2);
    t[1][3] = int(3);
    t[2][1] = int(5);
    for (l, &z) in items.iter().enumerate() {
        t[1][4 + l] = item_length(z, total);
    }
    Ok(Distribution { t, cmax: int(6) })
}

/// Makespan-6 no-split schedule: machine 1 runs J1 [0,4) and J3 [4,6); machine 2
/// runs J4 [0,3), the `P1` items in [3,4), J1 [4,5), the `P2` items in [5,6);
/// machine 3 runs J2 [0,5) and J1 [5,6).
pub fn build_theorem1_schedule(items: &[u64], split: &(Vec<usize>, Vec<usize>)) -> Result<Schedule, ReductionError> {
    let total = check_items(items)?;
    let (p1, p2) = split;
    let mut all: Vec<usize> = p1.iter().chain(p2).copied().collect();
    all.sort_unstable();
    if all != (0..items.len()).collect::<Vec<_>>() {
        return Err(ReductionError::BadSplit);
    }
    let sum = |s: &[usize]| s.iter().map(|&l| items[l]).sum::<u64>();
    if 2 * sum(p1) != total || 2 * sum(p2) != total {
        return Err(ReductionError::BadSplit);
    }
    let seg = |i, j, a: Rational, b: Rational| Segment { machine: i, job: j, start: a, end: b };
    let mut segs = vec![
        seg(0, 0, int(0), int(4)),
        seg(0, 2, int(4), int(6)),
        seg(1, 3, int(0), int(3)),
        seg(1, 0, int(4), int(5)),
        seg(2, 1, int(0), int(5)),
        seg(2, 0, int(5), int(6)),
    ];
    for (part, from) in [(p1, int(3)), (p2, int(5))] {
        let mut at = from;
        for &l in part.iter() {
            let end = &at + item_length(items[l], total);
            segs.push(seg(1, 4 + l, at, end.clone()));
            at = end;
        }
    }
    Ok(Schedule::new(segs).normalized())
}
