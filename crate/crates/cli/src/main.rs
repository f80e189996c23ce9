use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use pmtn::files::{self, DistributionFile, FileError, InstanceFile, NamedInstance, ScheduleFile};
use pmtn::render;
use pmtn_core::ext::{construct_ext, ExtError};
use pmtn_core::formulations::{self, FormulationError, FormulationKind};
use pmtn_core::ll::{construct_ll, IterationTrace, LlError};
use pmtn_core::low_preempt::{self, LowPreemptError};
use pmtn_core::oracle::{self, OracleError};
use pmtn_core::rational::format as q;
use pmtn_core::{makespan, reductions, validate_schedule, Schedule};

/// Exact preemptive scheduling on unrelated machines with release times.
///
/// Exit codes: 0 success, 1 validation failure, 2 input error, 3 infeasible,
/// 4 method precondition not met.
#[derive(Parser)]
#[command(name = "pmtn", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Lp1,
    Lp2,
    Lp3,
    Milp,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Ll,
    Ext,
    Lowpreempt,
}

#[derive(Clone, Copy, ValueEnum)]
enum GanttFormat {
    Text,
    Svg,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve an assignment program; print its optimum.
    Lp {
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "lp2")]
        kind: Kind,
        /// Write the optimal distribution here.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Turn a distribution into a schedule; print its makespan.
    Schedule {
        instance: PathBuf,
        distribution: PathBuf,
        #[arg(long, value_enum)]
        method: Method,
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Print the iteration matrices (ll, ext).
        #[arg(long)]
        trace: bool,
    },
    /// Print the optimal makespan, or with a distribution the smallest makespan
    /// of a schedule respecting it.
    Oracle {
        instance: PathBuf,
        #[arg(long)]
        dist: Option<PathBuf>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Check a schedule against an instance.
    Validate {
        instance: PathBuf,
        schedule: PathBuf,
        /// Also forbid running a job on one machine in several pieces.
        #[arg(long)]
        no_split: bool,
    },
    /// Build the three-machine instance for a PARTITION item list.
    Reduce {
        #[arg(required = true)]
        items: Vec<u64>,
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Decide the partition and build the makespan-6 schedule.
        #[arg(long)]
        solve: bool,
        #[arg(long)]
        schedule_out: Option<PathBuf>,
    },
    /// Render a schedule.
    Gantt {
        instance: PathBuf,
        schedule: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: GanttFormat,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

struct Fail {
    code: u8,
    msg: String,
}

impl Fail {
    fn new(code: u8, msg: impl ToString) -> Self {
        Fail { code, msg: msg.to_string() }
    }
}

impl From<FileError> for Fail {
    fn from(e: FileError) -> Self {
        Fail::new(2, e)
    }
}

fn write_doc<T: serde::Serialize>(path: &Option<PathBuf>, doc: &T) -> Result<(), Fail> {
    if let Some(p) = path {
        files::write(p, doc)?;
    }
    Ok(())
}

fn write_schedule(path: &Option<PathBuf>, s: &Schedule) -> Result<(), Fail> {
    write_doc(path, &ScheduleFile::from_schedule(s))
}

fn load_instance(p: &Path) -> Result<NamedInstance, Fail> {
    Ok(files::read_instance(p)?)
}

fn lp(instance: &Path, kind: Kind, out: &Option<PathBuf>) -> Result<(), Fail> {
    let named = load_instance(instance)?;
    let kind = match kind {
        Kind::Lp1 => FormulationKind::Lp1,
        Kind::Lp2 => FormulationKind::Lp2,
        Kind::Lp3 => FormulationKind::Lp3,
        Kind::Milp => FormulationKind::Milp,
    };
    let d = formulations::solve(&named.inst, kind).map_err(|e| match e {
        FormulationError::NotOptimal(_) => Fail::new(3, format!("{}: {e}", kind.name())),
        other => Fail::new(2, other),
    })?;
    println!("{}", q(&d.cmax));
    write_doc(out, &DistributionFile::from_distribution(&d))
}

fn schedule(
    instance: &Path,
    distribution: &Path,
    method: Method,
    out: &Option<PathBuf>,
    trace: bool,
) -> Result<(), Fail> {
    let named = load_instance(instance)?;
    let inst = &named.inst;
    let dist = files::read_distribution(distribution, inst)?;
    let (s, tr): (Schedule, Option<IterationTrace>) = match method {
        Method::Ll => {
            let (s, t) = construct_ll(inst, &dist).map_err(|e| match e {
                LlError::Model(m) => Fail::new(2, m),
                other => Fail::new(4, other),
            })?;
            (s, Some(t))
        }
        Method::Ext => {
            let (s, t) = construct_ext(inst, &dist).map_err(|ExtError::Model(m)| Fail::new(2, m))?;
            (s, Some(t))
        }
        Method::Lowpreempt => {
            let s = if inst.all_released_at_zero() {
                low_preempt::schedule_simultaneous(inst, &dist)
            } else {
                low_preempt::schedule_with_releases(inst, &dist)
            }
            .map_err(|e| match e {
                LowPreemptError::Model(m) => Fail::new(2, m),
                other => Fail::new(4, other),
            })?;
            (s, None)
        }
    };
    println!("{}", q(&makespan(&s)));
    if trace {
        if let Some(t) = tr {
            print!("\n{}", render::trace_text(&t, &named.names));
        }
    }
    write_schedule(out, &s)
}

fn run_oracle(instance: &Path, dist: &Option<PathBuf>, out: &Option<PathBuf>) -> Result<(), Fail> {
    let named = load_instance(instance)?;
    let (c, s) = match dist {
        None => oracle::optimal_makespan(&named.inst),
        Some(p) => {
            let d = files::read_distribution(p, &named.inst)?;
            oracle::respecting_optimum(&named.inst, &d).map_err(|e| match e {
                OracleError::Infeasible => Fail::new(3, e),
                OracleError::Model(m) => Fail::new(2, m),
            })?
        }
    };
    println!("{}", q(&c));
    write_schedule(out, &s)
}

fn validate(instance: &Path, schedule: &Path, no_split: bool) -> Result<(), Fail> {
    let named = load_instance(instance)?;
    let s = files::read_schedule(schedule, &named.inst)?;
    let report = validate_schedule(&named.inst, &s, no_split).map_err(|e| Fail::new(2, e))?;
    if report.ok {
        println!("ok");
        println!("makespan {}", q(&makespan(&s)));
        return Ok(());
    }
    println!("invalid");
    for v in &report.violations {
        let segs: Vec<String> = v.segments.iter().map(|k| (k + 1).to_string()).collect();
        println!("{}: {} (segments {})", v.rule.id(), v.detail, segs.join(", "));
    }
    Err(Fail::new(1, format!("{} violation(s)", report.violations.len())))
}

fn reduce(items: &[u64], out: &Option<PathBuf>, solve: bool, schedule_out: &Option<PathBuf>) -> Result<(), Fail> {
    let inst = reductions::partition_to_instance(items).map_err(|e| Fail::new(2, e))?;
    println!("instance: {} machines, {} jobs", inst.machines(), inst.jobs());
    write_doc(out, &InstanceFile::from_instance(&NamedInstance::numbered(inst)))?;
    if !solve {
        return Ok(());
    }
    match reductions::solve_partition(items) {
        Some(split) => {
            let s = reductions::build_theorem1_schedule(items, &split).map_err(|e| Fail::new(2, e))?;
            let show = |v: &[usize]| v.iter().map(|l| items[*l].to_string()).collect::<Vec<_>>().join(" ");
            println!("partition found: {{{}}} {{{}}}", show(&split.0), show(&split.1));
            println!("makespan {} schedule written", q(&makespan(&s)));
            write_schedule(schedule_out, &s)
        }
        None => {
            println!("no partition; no makespan-6 no-split schedule exists");
            Ok(())
        }
    }
}

fn gantt(instance: &Path, schedule: &Path, format: GanttFormat, out: &Option<PathBuf>) -> Result<(), Fail> {
    let named = load_instance(instance)?;
    let s = files::read_schedule(schedule, &named.inst)?;
    let text = match format {
        GanttFormat::Text => render::gantt_text(&named.inst, &named.names, &s),
        GanttFormat::Svg => render::gantt_svg(&named.inst, &named.names, &s),
    };
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Fail::new(2, format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.cmd {
        Cmd::Lp { instance, kind, out } => lp(instance, *kind, out),
        Cmd::Schedule { instance, distribution, method, out, trace } => {
            schedule(instance, distribution, *method, out, *trace)
        }
        Cmd::Oracle { instance, dist, out } => run_oracle(instance, dist, out),
        Cmd::Validate { instance, schedule, no_split } => validate(instance, schedule, *no_split),
        Cmd::Reduce { items, out, solve, schedule_out } => reduce(items, out, *solve, schedule_out),
        Cmd::Gantt { instance, schedule, format, out } => gantt(instance, schedule, *format, out),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
