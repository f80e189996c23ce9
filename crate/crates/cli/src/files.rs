//! JSON documents for instances, distributions and schedules.
//!
//! Machines and jobs are numbered from 1 in files. Times are JSON integers or
//! `"a/b"` strings; forbidden pairs are absent from a job's `p` map.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use num_traits::ToPrimitive;
use pmtn_core::rational::{self, Rational};
use pmtn_core::{Distribution, Instance, Ptime, Schedule, Segment};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub const VERSION: u32 = 1;

#[derive(Debug)]
pub enum FileError {
    Io(String, std::io::Error),
    Json(String, serde_json::Error),
    Invalid(String),
}

impl fmt::Display for FileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FileError::Io(p, e) => write!(f, "{p}: {e}"),
            FileError::Json(p, e) => write!(f, "{p}: {e}"),
            FileError::Invalid(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for FileError {}

/// A rational that reads from an integer or a string and writes integers as integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Num(pub Rational);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.is_integer().then(|| self.0.numer().to_i64()).flatten() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&rational::format(&self.0)),
        }
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(Num(rational::int(v))),
            Raw::Text(s) => rational::parse(&s).map(Num).map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobEntry {
    pub name: String,
    pub release: Num,
    /// Machine number → processing time.
    pub p: BTreeMap<usize, Num>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub version: u32,
    pub machines: usize,
    pub jobs: Vec<JobEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistributionFile {
    pub version: u32,
    pub cmax: Num,
    /// One row per machine, one entry per job.
    pub t: Vec<Vec<Num>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentEntry {
    pub machine: usize,
    pub job: usize,
    pub start: Num,
    pub end: Num,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleFile {
    pub version: u32,
    pub segments: Vec<SegmentEntry>,
}

fn check_version(v: u32) -> Result<(), FileError> {
    if v != VERSION {
        return Err(FileError::Invalid(format!("unsupported version {v}, expected {VERSION}")));
    }
    Ok(())
}

/// Instance plus job names.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedInstance {
    pub inst: Instance,
    pub names: Vec<String>,
}

impl NamedInstance {
    /// Jobs named `1..=n`.
    pub fn numbered(inst: Instance) -> Self {
        let names = (1..=inst.jobs()).map(|j| j.to_string()).collect();
        NamedInstance { inst, names }
    }
}

impl InstanceFile {
    pub fn from_instance(named: &NamedInstance) -> Self {
        let inst = &named.inst;
        let jobs = (0..inst.jobs())
            .map(|j| JobEntry {
                name: named.names[j].clone(),
                release: Num(inst.release(j).clone()),
                p: (0..inst.machines())
                    .filter_map(|i| inst.p(i, j).finite().map(|v| (i + 1, Num(v.clone()))))
                    .collect(),
            })
            .collect();
        InstanceFile { version: VERSION, machines: inst.machines(), jobs }
    }

    pub fn to_instance(&self) -> Result<NamedInstance, FileError> {
        check_version(self.version)?;
        let (m, n) = (self.machines, self.jobs.len());
        let mut p = vec![vec![Ptime::Forbidden; n]; m];
        for (j, job) in self.jobs.iter().enumerate() {
            for (&i, v) in &job.p {
                if i == 0 || i > m {
                    return Err(FileError::Invalid(format!("job {}: machine {i} out of range 1..={m}", job.name)));
                }
                p[i - 1][j] = Ptime::Finite(v.0.clone());
            }
        }
        let r = self.jobs.iter().map(|j| j.release.0.clone()).collect();
        let inst = Instance::new(p, r).map_err(|e| FileError::Invalid(e.to_string()))?;
        Ok(NamedInstance { inst, names: self.jobs.iter().map(|j| j.name.clone()).collect() })
    }
}

impl DistributionFile {
    pub fn from_distribution(d: &Distribution) -> Self {
        let t = d.t.iter().map(|row| row.iter().map(|v| Num(v.clone())).collect()).collect();
        DistributionFile { version: VERSION, cmax: Num(d.cmax.clone()), t }
    }

    /// Also checks the distribution against `inst`.
    pub fn to_distribution(&self, inst: &Instance) -> Result<Distribution, FileError> {
        check_version(self.version)?;
        let t = self.t.iter().map(|row| row.iter().map(|v| v.0.clone()).collect()).collect();
        let d = Distribution { t, cmax: self.cmax.0.clone() };
        d.check(inst).map_err(|e| FileError::Invalid(e.to_string()))?;
        Ok(d)
    }
}

impl ScheduleFile {
    pub fn from_schedule(s: &Schedule) -> Self {
        let segments = s
            .segments
            .iter()
            .map(|g| SegmentEntry {
                machine: g.machine + 1,
                job: g.job + 1,
                start: Num(g.start.clone()),
                end: Num(g.end.clone()),
            })
            .collect();
        ScheduleFile { version: VERSION, segments }
    }

    /// Index and shape checks against `inst`; overlaps etc. are left to validation.
    pub fn to_schedule(&self, inst: &Instance) -> Result<Schedule, FileError> {
        check_version(self.version)?;
        let mut segs = Vec::new();
        for (k, e) in self.segments.iter().enumerate() {
            if e.machine == 0 || e.machine > inst.machines() || e.job == 0 || e.job > inst.jobs() {
                return Err(FileError::Invalid(format!(
                    "segment {}: machine {} / job {} out of range",
                    k + 1,
                    e.machine,
                    e.job
                )));
            }
            let s = Segment::new(e.machine - 1, e.job - 1, e.start.0.clone(), e.end.0.clone())
                .map_err(|err| FileError::Invalid(format!("segment {}: {err}", k + 1)))?;
            segs.push(s);
        }
        Ok(Schedule::new(segs))
    }
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents always serialize");
    s.push('\n');
    s
}

pub fn read<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, FileError> {
    let name = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| FileError::Io(name.clone(), e))?;
    serde_json::from_str(&text).map_err(|e| FileError::Json(name, e))
}

pub fn write<T: Serialize>(path: &Path, doc: &T) -> Result<(), FileError> {
    std::fs::write(path, to_json(doc)).map_err(|e| FileError::Io(path.display().to_string(), e))
}

pub fn read_instance(path: &Path) -> Result<NamedInstance, FileError> {
    read::<InstanceFile>(path)?.to_instance()
}

pub fn read_distribution(path: &Path, inst: &Instance) -> Result<Distribution, FileError> {
    read::<DistributionFile>(path)?.to_distribution(inst)
}

pub fn read_schedule(path: &Path, inst: &Instance) -> Result<Schedule, FileError> {
    read::<ScheduleFile>(path)?.to_schedule(inst)
}
