//! Line-based text formats for instances and schedules.
//!
//! ```text
//! latework v1            leveling v1
//! m=2 N=3 d=5            machines=4 C=3 L=5
//! p 3 4 6                a 2 2
//! ```
//!
//! Lines whose first non-blank character is `#` are comments. A late-work
//! schedule has one line per machine with space-separated job ids (an empty
//! line is an idle machine); a leveling schedule has one `<job> <machine>
//! <slot>` line per job. All indices are 0-based.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::leveling::{LevelingInstance, LevelingSchedule, Placement};
use crate::model::{Instance, ModelError, Schedule};

pub const LATEWORK_HEADER: &str = "latework v1";
pub const LEVELING_HEADER: &str = "leveling v1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing {0}")]
    Missing(&'static str),
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        msg: msg.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyInstance {
    LateWork(Instance),
    Leveling(LevelingInstance),
}

/// Non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.starts_with('#'))
}

fn parse_num<T: std::str::FromStr>(line: usize, tok: &str) -> Result<T, FormatError> {
    tok.parse()
        .map_err(|_| syntax(line, format!("expected a nonnegative integer, found `{tok}`")))
}

fn parse_params(line: usize, text: &str, keys: &[&'static str]) -> Result<Vec<u64>, FormatError> {
    let mut found: HashMap<&str, u64> = HashMap::new();
    for tok in text.split_whitespace() {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| syntax(line, format!("expected key=value, found `{tok}`")))?;
        let key = keys
            .iter()
            .find(|&&key| key == k)
            .ok_or_else(|| syntax(line, format!("unknown key `{k}`")))?;
        if found.insert(key, parse_num(line, v)?).is_some() {
            return Err(syntax(line, format!("duplicate key `{k}`")));
        }
    }
    keys.iter()
        .map(|k| found.get(k).copied().ok_or(FormatError::Missing(k)))
        .collect()
}

fn parse_values(line: usize, text: &str, tag: &str) -> Result<Vec<u64>, FormatError> {
    let mut toks = text.split_whitespace();
    if toks.next() != Some(tag) {
        return Err(syntax(line, format!("expected a `{tag}` line")));
    }
    toks.map(|t| parse_num(line, t)).collect()
}

fn to_usize(v: u64) -> usize {
    usize::try_from(v).unwrap_or(usize::MAX)
}

pub fn parse_instance(text: &str) -> Result<AnyInstance, FormatError> {
    let mut lines = content_lines(text).filter(|(_, l)| !l.is_empty());
    let (hl, header) = lines.next().ok_or(FormatError::Missing("header"))?;
    let (pl, params) = lines.next().ok_or(FormatError::Missing("parameter line"))?;
    let (vl, values) = lines.next().ok_or(FormatError::Missing("job line"))?;
    if let Some((l, _)) = lines.next() {
        return Err(syntax(l, "unexpected trailing content"));
    }
    match header {
        LATEWORK_HEADER => {
            let v = parse_params(pl, params, &["m", "N", "d"])?;
            let p = parse_values(vl, values, "p")?;
            Ok(AnyInstance::LateWork(Instance::new(to_usize(v[0]), to_usize(v[1]), v[2], p)?))
        }
        LEVELING_HEADER => {
            let v = parse_params(pl, params, &["machines", "C", "L"])?;
            let a = parse_values(vl, values, "a")?;
            Ok(AnyInstance::Leveling(LevelingInstance::new(
                to_usize(v[0]),
                to_usize(v[1]),
                v[2],
                a,
            )?))
        }
        other => Err(syntax(hl, format!("unknown header `{other}`"))),
    }
}

fn join(values: impl Iterator<Item = String>) -> String {
    values.collect::<Vec<_>>().join(" ")
}

pub fn write_instance(inst: &Instance) -> String {
    let mut out = format!(
        "{LATEWORK_HEADER}\nm={} N={} d={}\np",
        inst.machines(),
        inst.capacity(),
        inst.due()
    );
    for p in inst.processing_times() {
        let _ = write!(out, " {p}");
    }
    out.push('\n');
    out
}

pub fn write_leveling_instance(inst: &LevelingInstance) -> String {
    let mut out = format!(
        "{LEVELING_HEADER}\nmachines={} C={} L={}\na",
        inst.machines(),
        inst.slots(),
        inst.limit()
    );
    for a in inst.demands() {
        let _ = write!(out, " {a}");
    }
    out.push('\n');
    out
}

pub fn write_any_instance(inst: &AnyInstance) -> String {
    match inst {
        AnyInstance::LateWork(i) => write_instance(i),
        AnyInstance::Leveling(l) => write_leveling_instance(l),
    }
}

/// One line per machine; feasibility is checked separately.
pub fn parse_schedule(text: &str) -> Result<Schedule, FormatError> {
    content_lines(text)
        .map(|(line, l)| l.split_whitespace().map(|t| parse_num(line, t)).collect())
        .collect::<Result<_, _>>()
        .map(Schedule::new)
}

pub fn write_schedule(s: &Schedule) -> String {
    s.machines()
        .iter()
        .map(|seq| join(seq.iter().map(ToString::to_string)) + "\n")
        .collect()
}

pub fn parse_leveling_schedule(text: &str) -> Result<LevelingSchedule, FormatError> {
    let mut placed: Vec<Option<Placement>> = Vec::new();
    for (line, l) in content_lines(text).filter(|(_, l)| !l.is_empty()) {
        let nums: Vec<usize> = l
            .split_whitespace()
            .map(|t| parse_num(line, t))
            .collect::<Result<_, _>>()?;
        let [job, machine, slot] = nums[..] else {
            return Err(syntax(line, "expected `<job> <machine> <slot>`"));
        };
        if placed.len() <= job {
            placed.resize(job + 1, None);
        }
        if placed[job].replace(Placement { machine, slot }).is_some() {
            return Err(syntax(line, format!("job {job} placed twice")));
        }
    }
    placed
        .into_iter()
        .enumerate()
        .map(|(j, p)| p.ok_or_else(|| syntax(0, format!("job {j} has no placement"))))
        .collect::<Result<_, _>>()
        .map(LevelingSchedule::new)
}

pub fn write_leveling_schedule(s: &LevelingSchedule) -> String {
    s.placements()
        .iter()
        .enumerate()
        .map(|(j, p)| format!("{j} {} {}\n", p.machine, p.slot))
        .collect()
}
