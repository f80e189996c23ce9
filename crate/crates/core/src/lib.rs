//! Exact preemptive scheduling of jobs with release times on unrelated parallel
//! machines: linear and mixed 0-1 formulations, decrementing-set schedule
//! construction, an interval-indexed optimum, and the partition reduction.
//!
//! Builds without `std` (needs `alloc`).

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod fixtures;
pub mod ext;
pub mod formulations;
pub mod ll;
pub mod low_preempt;
pub mod model;
pub mod oracle;
pub mod ratlp;
pub mod rational;
pub mod reductions;

pub use model::{
    count_preempted_parts, distribution_of, makespan, preemptions, respects, splits,
    validate_partial, validate_schedule, Distribution, Instance, ModelError, Ptime, Rule, Schedule,
    Segment, ValidationReport, Violation,
};
pub use rational::Rational;
