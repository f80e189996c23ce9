//! Text and SVG output: iteration traces and Gantt charts.

use std::fmt::Write;

use num_traits::{ToPrimitive, Zero};
use pmtn_core::ll::IterationTrace;
use pmtn_core::rational::{self, Rational};
use pmtn_core::{makespan, Instance, Schedule};

fn q(v: &Rational) -> String {
    rational::format(v)
}

/// Each step as a matrix (machine rows, job columns), selected cells in brackets.
/// The release row `r` is shown when the trace carries one.
pub fn trace_text(trace: &IterationTrace, names: &[String]) -> String {
    let mut out = String::new();
    for (k, step) in trace.steps.iter().enumerate() {
        let _ = writeln!(out, "step {}: delta {} -> tau {}", k + 1, q(&step.delta), q(&step.tau_after));
        let mut rows: Vec<(String, Vec<String>)> = Vec::new();
        if let Some(r0) = &step.row0 {
            rows.push(("r".into(), r0.iter().map(q).collect()));
        }
        for (i, row) in step.matrix.iter().enumerate() {
            let cells = row
                .iter()
                .enumerate()
                .map(|(j, v)| if step.set.cells.contains(&(i, j)) { format!("[{}]", q(v)) } else { q(v) })
                .collect();
            rows.push((format!("M{}", i + 1), cells));
        }
        let n = names.len();
        let width: Vec<usize> = (0..n)
            .map(|j| rows.iter().map(|(_, c)| c[j].len()).chain([names[j].len()]).max().unwrap_or(1))
            .collect();
        let label = rows.iter().map(|(l, _)| l.len()).max().unwrap_or(1);
        let mut line = format!("{:label$}", "");
        for j in 0..n {
            let _ = write!(line, "  {:>w$}", names[j], w = width[j]);
        }
        out.push_str(line.trim_end());
        out.push('\n');
        for (l, cells) in &rows {
            let mut line = format!("{l:label$}");
            for j in 0..n {
                let _ = write!(line, "  {:>w$}", cells[j], w = width[j]);
            }
            out.push_str(&line);
            out.push('\n');
        }
        out.push('\n');
    }
    out
}

const SYMBOLS: &[u8] = b"123456789ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz";
const BAR: usize = 60;

fn symbol(j: usize) -> char {
    SYMBOLS.get(j).map_or('#', |&b| b as char)
}

fn position(t: &Rational, cmax: &Rational, width: usize) -> usize {
    if cmax.is_zero() {
        return 0;
    }
    (t * Rational::from_integer(width.into()) / cmax).floor().to_integer().to_usize().unwrap_or(0).min(width)
}

/// Fixed-width bars (one character per `cmax / 60`) followed by the exact segment
/// list per machine, a release marker row and the makespan.
pub fn gantt_text(inst: &Instance, names: &[String], sched: &Schedule) -> String {
    let sched = sched.normalized();
    let cmax = makespan(&sched);
    let m = inst.machines();
    let width = if cmax.is_zero() { 0 } else { BAR };
    let label = format!("M{m}").len();
    let mut out = String::new();
    let _ = writeln!(out, "makespan {}", q(&cmax));
    let legend: Vec<String> = names.iter().enumerate().map(|(j, n)| format!("{}={}", symbol(j), n)).collect();
    let _ = writeln!(out, "jobs {}", legend.join(" "));
    for i in 0..m {
        let mut bar = vec!['.'; width];
        for s in sched.segments.iter().filter(|s| s.machine == i) {
            let (a, b) = (position(&s.start, &cmax, width), position(&s.end, &cmax, width));
            for c in bar.iter_mut().take(b).skip(a) {
                *c = symbol(s.job);
            }
        }
        let _ = writeln!(out, "{:label$} |{}|", format!("M{}", i + 1), bar.iter().collect::<String>());
    }
    let mut marks = vec![' '; width + 1];
    for j in 0..inst.jobs() {
        marks[position(inst.release(j), &cmax, width)] = '^';
    }
    let _ = writeln!(out, "{:label$}  {}", "r", marks.iter().collect::<String>().trim_end());
    for i in 0..m {
        let segs: Vec<String> = sched
            .segments
            .iter()
            .filter(|s| s.machine == i)
            .map(|s| format!("{}[{},{})", names[s.job], q(&s.start), q(&s.end)))
            .collect();
        let _ = writeln!(out, "{:label$}: {}", format!("M{}", i + 1), segs.join(" "));
    }
    let rel: Vec<String> = (0..inst.jobs()).map(|j| format!("{}@{}", names[j], q(inst.release(j)))).collect();
    let _ = writeln!(out, "releases {}", rel.join(" "));
    out.lines().map(|l| l.trim_end().to_string() + "\n").collect()
}

const PALETTE: [&str; 8] = ["#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2", "#edc948", "#b07aa1", "#9c755f"];

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// One lane per machine; exact times are kept in each rectangle's `<title>`.
pub fn gantt_svg(inst: &Instance, names: &[String], sched: &Schedule) -> String {
    const LEFT: f64 = 50.0;
    const SPAN: f64 = 720.0;
    const LANE: f64 = 30.0;
    const TOP: f64 = 30.0;
    let sched = sched.normalized();
    let cmax = makespan(&sched);
    let m = inst.machines();
    let x = |t: &Rational| -> f64 {
        if cmax.is_zero() {
            LEFT
        } else {
            LEFT + SPAN * (t / &cmax).to_f64().unwrap_or(0.0)
        }
    };
    let height = TOP + LANE * m as f64 + 40.0;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{height:.0}" font-family="monospace" font-size="12">"#,
        LEFT + SPAN + 80.0
    );
    for i in 0..m {
        let y = TOP + LANE * i as f64;
        let _ = writeln!(out, r#"<text x="5" y="{:.2}">M{}</text>"#, y + LANE / 2.0 + 4.0, i + 1);
        let _ = writeln!(
            out,
            r##"<rect x="{LEFT:.2}" y="{y:.2}" width="{SPAN:.2}" height="{:.2}" fill="none" stroke="#ccc"/>"##,
            LANE - 4.0
        );
        for s in sched.segments.iter().filter(|s| s.machine == i) {
            let (a, b) = (x(&s.start), x(&s.end));
            let name = esc(&names[s.job]);
            let _ = writeln!(
                out,
                r##"<rect x="{a:.2}" y="{y:.2}" width="{:.2}" height="{:.2}" fill="{}" stroke="#333"><title>job {name} on M{} [{}, {})</title></rect>"##,
                b - a,
                LANE - 4.0,
                PALETTE[s.job % PALETTE.len()],
                i + 1,
                q(&s.start),
                q(&s.end)
            );
            let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{name}</text>"#, (a + b) / 2.0, y + LANE / 2.0 + 2.0);
        }
    }
    let base = TOP + LANE * m as f64;
    for j in 0..inst.jobs() {
        let rx = x(inst.release(j));
        let _ = writeln!(
            out,
            r#"<path d="M {rx:.2} {base:.2} l -4 8 l 8 0 z" fill="black"><title>job {} released at {}</title></path>"#,
            esc(&names[j]),
            q(inst.release(j))
        );
    }
    let cx = x(&cmax);
    let _ = writeln!(
        out,
        r#"<line x1="{cx:.2}" y1="{:.2}" x2="{cx:.2}" y2="{:.2}" stroke="red" stroke-width="2"/>"#,
        TOP - 10.0,
        base + 4.0
    );
    let _ = writeln!(out, r#"<text id="makespan" x="{cx:.2}" y="{:.2}" fill="red">C_max = {}</text>"#, TOP - 14.0, q(&cmax));
    out.push_str("</svg>\n");
    out
}
