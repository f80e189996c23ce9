use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use pmtn::files::{self, ScheduleFile};
use pmtn_core::{distribution_of, makespan, respects, validate_schedule};
use serde::Deserialize;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn pmtn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pmtn")).args(args).current_dir(fixtures()).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[derive(Deserialize)]
struct Expect {
    args: Vec<String>,
    exit: i32,
    stdout: String,
    #[allow(dead_code)]
    note: Option<String>,
}

#[test]
fn manifest_commands_reproduce_their_numbers() {
    let text = std::fs::read_to_string(fixtures().join("expected.json")).unwrap();
    let cases: Vec<Expect> = serde_json::from_str(&text).unwrap();
    for c in cases {
        let args: Vec<&str> = c.args.iter().map(String::as_str).collect();
        let o = pmtn(&args);
        let out = stdout(&o);
        assert_eq!(code(&o), c.exit, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(out.lines().next().unwrap_or(""), c.stdout, "{args:?}");
    }
}

#[test]
fn every_fixture_parses_and_validates() {
    let dir = fixtures();
    let inst_of = |name: &str| {
        let inst = match name {
            "fig1.sched" => "theorem1_1_1.inst",
            n if n.starts_with("example1_") || n.starts_with("fig2") => "example1.inst",
            n => &format!("{}.inst", n.rsplit_once('.').unwrap().0),
        };
        files::read_instance(&dir.join(inst)).unwrap()
    };
    for entry in std::fs::read_dir(&dir).unwrap() {
        let name = entry.unwrap().file_name().into_string().unwrap();
        let path = dir.join(&name);
        if name.ends_with(".inst") {
            files::read_instance(&path).unwrap();
        } else if name.ends_with(".dist") {
            let named = inst_of(&name);
            files::read_distribution(&path, &named.inst).unwrap();
        } else if name.ends_with(".sched") {
            let named = inst_of(&name);
            let s = files::read_schedule(&path, &named.inst).unwrap();
            assert!(validate_schedule(&named.inst, &s, name == "fig1.sched").unwrap().ok, "{name}");
        }
    }
}

#[test]
fn documented_schedule_makespans() {
    let dir = fixtures();
    let e1 = files::read_instance(&dir.join("example1.inst")).unwrap().inst;
    let d = files::read_schedule(&dir.join("fig2d.sched"), &e1).unwrap();
    assert_eq!(makespan(&d), pmtn_core::rational::int(23));
    let e = files::read_schedule(&dir.join("fig2e.sched"), &e1).unwrap();
    assert_eq!(makespan(&e), pmtn_core::rational::int(21));
    let d3 = files::read_distribution(&dir.join("example1_dist3.dist"), &e1).unwrap();
    assert!(respects(&e, &d3));
}

#[test]
fn lp_output_feeds_the_schedulers() {
    let tmp = tempfile::tempdir().unwrap();
    let dist = tmp.path().join("d.dist");
    let sched = tmp.path().join("s.sched");
    let o = pmtn(&["lp", "example4.inst", "--kind", "lp2", "-o", dist.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let o = pmtn(&["schedule", "example4.inst", dist.to_str().unwrap(), "--method", "ext", "-o", sched.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let o = pmtn(&["validate", "example4.inst", sched.to_str().unwrap()]);
    assert_eq!(stdout(&o), "ok\nmakespan 18\n");
}

#[test]
fn oracle_schedules_are_valid_and_respecting() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("o.sched");
    let dir = fixtures();
    let named = files::read_instance(&dir.join("example1.inst")).unwrap();
    let dist = files::read_distribution(&dir.join("example1_dist1.dist"), &named.inst).unwrap();
    let o = pmtn(&["oracle", "example1.inst", "--dist", "example1_dist1.dist", "-o", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let s = files::read_schedule(&out, &named.inst).unwrap();
    assert!(validate_schedule(&named.inst, &s, false).unwrap().ok);
    assert!(respects(&s, &dist));
    assert_eq!(pmtn_core::rational::format(&makespan(&s)), stdout(&o).trim());

    let o = pmtn(&["oracle", "example2.inst", "-o", out.to_str().unwrap()]);
    let named = files::read_instance(&dir.join("example2.inst")).unwrap();
    let s = files::read_schedule(&out, &named.inst).unwrap();
    assert_eq!(pmtn_core::rational::format(&makespan(&s)), stdout(&o).trim());
    assert_eq!(distribution_of(&named.inst, &s).unwrap().t.len(), 2);
}

#[test]
fn tampered_schedule_reports_overlap() {
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("bad.sched");
    let mut doc: ScheduleFile = files::read(&fixtures().join("fig1.sched")).unwrap();
    doc.segments[1].start = doc.segments[0].start.clone();
    files::write(&path, &doc).unwrap();
    let o = pmtn(&["validate", "theorem1_1_1.inst", path.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    assert!(out.starts_with("invalid\n"));
    assert!(out.contains("machine-overlap"), "{out}");
}

#[test]
fn input_errors_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = tmp.path().join("bad.inst");
    std::fs::write(&bad, r#"{"version":1,"machines":1,"jobs":[],"colour":"red"}"#).unwrap();
    assert_eq!(code(&pmtn(&["lp", bad.to_str().unwrap()])), 2);
    std::fs::write(&bad, "not json").unwrap();
    assert_eq!(code(&pmtn(&["oracle", bad.to_str().unwrap()])), 2);
    assert_eq!(code(&pmtn(&["lp", "missing.inst"])), 2);
    assert_eq!(code(&pmtn(&["lp", "example1.inst", "--kind", "lp9"])), 2);
    assert_eq!(code(&pmtn(&["reduce", "2", "0"])), 2);
    // a schedule naming a machine the instance lacks
    assert_eq!(code(&pmtn(&["gantt", "single_job.inst", "fig1.sched"])), 2);
    // a distribution of the wrong shape
    assert_eq!(code(&pmtn(&["schedule", "example2.inst", "example4.dist", "--method", "ext"])), 2);
}

#[test]
fn reduce_writes_instance_and_schedule() {
    let tmp = tempfile::tempdir().unwrap();
    let inst = tmp.path().join("r.inst");
    let sched = tmp.path().join("r.sched");
    let o = pmtn(&["reduce", "3", "1", "2", "--solve", "-o", inst.to_str().unwrap(), "--schedule-out", sched.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "instance: 3 machines, 7 jobs\npartition found: {3} {1 2}\nmakespan 6 schedule written\n");
    let o = pmtn(&["validate", inst.to_str().unwrap(), sched.to_str().unwrap(), "--no-split"]);
    assert_eq!(stdout(&o), "ok\nmakespan 6\n");
    assert_eq!(files::read_instance(&inst).unwrap().inst, pmtn_core::reductions::partition_to_instance(&[3, 1, 2]).unwrap());

    let o = pmtn(&["reduce", "1", "1", "1", "--solve"]);
    assert!(stdout(&o).ends_with("no partition; no makespan-6 no-split schedule exists\n"));
}

#[test]
fn gantt_text_matches_golden() {
    let o = pmtn(&["gantt", "theorem1_1_1.inst", "fig1.sched"]);
    assert_eq!(code(&o), 0);
    let golden = std::fs::read(fixtures().join("fig1.gantt.txt")).unwrap();
    assert_eq!(o.stdout, golden);
}

#[test]
fn gantt_svg_marks_makespan() {
    let o = pmtn(&["gantt", "example1.inst", "fig2e.sched", "--format", "svg"]);
    assert_eq!(code(&o), 0);
    let svg = stdout(&o);
    assert!(svg.starts_with("<svg xmlns=\"http://www.w3.org/2000/svg\"") && svg.ends_with("</svg>\n"));
    assert!(svg.contains(">C_max = 21</text>"));
    assert_eq!(svg.matches("<rect").count(), 4 + svg.matches("</rect>").count());
    assert_eq!(pmtn(&["gantt", "example1.inst", "fig2e.sched", "--format", "svg"]).stdout, o.stdout);
}

#[test]
fn gantt_of_empty_schedule() {
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("empty.sched");
    std::fs::write(&path, r#"{"version":1,"segments":[]}"#).unwrap();
    let o = pmtn(&["gantt", "example2.inst", path.to_str().unwrap()]);
    let out = stdout(&o);
    assert!(out.contains("M1 ||\nM2 ||\n"), "{out}");
}

#[test]
fn ext_trace_shows_release_row() {
    let o = pmtn(&["schedule", "example1.inst", "example1_dist3.dist", "--method", "ext", "--trace"]);
    let out = stdout(&o);
    assert!(out.starts_with("21\n\nstep 1: delta 2 -> tau 2\n"), "{out}");
    let deltas: Vec<&str> =
        out.lines().filter_map(|l| l.strip_prefix("step ")).map(|l| l.split(' ').nth(2).unwrap()).collect();
    assert_eq!(deltas, ["2", "1", "4", "1", "3", "2", "7", "1"]);
    assert!(out.lines().any(|l| l.starts_with("r ")));
}

#[test]
fn ll_rejects_releases() {
    let o = pmtn(&["schedule", "example2.inst", "example2.dist", "--method", "ll"]);
    assert_eq!(code(&o), 4);
    assert!(String::from_utf8_lossy(&o.stderr).contains("nonzero release time"));
}
