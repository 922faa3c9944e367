//! Huge / big / small job classification, the geometric rounding grids, and
//! enumeration of big-job assignments and layouts.

use std::env;

use num_traits::{One, Signed};
use thiserror::Error;

use crate::model::Instance;
use crate::rational::{ceil_u64, floor_u64, int, ratio, Q};

pub const DEFAULT_MAX_ASSIGNMENTS: usize = 1_000_000;
pub const DEFAULT_MAX_LAYOUTS: usize = 10_000_000;
pub const GUARD_ENV: &str = "LATEWORK_GUARD";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("eps must lie in (0, 1/3], got {0}")]
    EpsOutOfRange(Q),
    #[error("processing time {p} has no {mode:?} grid value")]
    OffGrid { p: u64, mode: RoundMode },
    #[error("instance too rich for this eps: more than {limit} {what}")]
    GuardExceeded { what: &'static str, limit: usize },
}

/// Hard caps on enumeration sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_assignments: usize,
    pub max_layouts: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_assignments: DEFAULT_MAX_ASSIGNMENTS,
            max_layouts: DEFAULT_MAX_LAYOUTS,
        }
    }
}

impl Limits {
    /// Defaults, overridden by `LATEWORK_GUARD=<n>` (both caps) or
    /// `LATEWORK_GUARD=<assignments>,<layouts>`.
    pub fn from_env() -> Self {
        env::var(GUARD_ENV)
            .ok()
            .and_then(|v| Self::parse(&v))
            .unwrap_or_default()
    }

    pub fn parse(text: &str) -> Option<Self> {
        let mut parts = text.split(',').map(|t| t.trim().parse::<usize>());
        let first = parts.next()?.ok()?;
        let second = match parts.next() {
            Some(v) => v.ok()?,
            None => first,
        };
        if parts.next().is_some() {
            return None;
        }
        Some(Limits {
            max_assignments: first,
            max_layouts: second,
        })
    }
}

pub fn check_eps(eps: &Q) -> Result<(), ClassifyError> {
    if !eps.is_positive() || *eps > ratio(1, 3) {
        return Err(ClassifyError::EpsOutOfRange(eps.clone()));
    }
    Ok(())
}

/// `⌊log_{1+ε}(1/ε²)⌋ + 1`, computed exactly.
pub fn k1(eps: &Q) -> usize {
    let target = (eps * eps).recip();
    let base = Q::one() + eps;
    let mut power = Q::one();
    let mut k = 0;
    // largest k with (1+ε)^k ≤ 1/ε²
    while &power * &base <= target {
        power *= &base;
        k += 1;
    }
    k + 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RoundMode {
    /// Greatest `⌈ε²d(1+ε)^k⌉ ≤ p`, used for early work.
    Down,
    /// Smallest `⌊ε²d(1+ε)^k⌋ ≥ p`, used for shifted late work.
    Up,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundingGrid {
    mode: RoundMode,
    values: Vec<u64>,
}

impl RoundingGrid {
    pub fn mode(&self) -> RoundMode {
        self.mode
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }
}

pub fn build_grid(due: u64, eps: &Q, mode: RoundMode) -> RoundingGrid {
    let base = Q::one() + eps;
    let mut point = eps * eps * int(due);
    let mut values: Vec<u64> = Vec::new();
    loop {
        let v = match mode {
            RoundMode::Down => ceil_u64(&point),
            RoundMode::Up => floor_u64(&point),
        };
        if mode == RoundMode::Down && v >= due {
            break;
        }
        if v > 0 && values.last() != Some(&v) {
            values.push(v);
        }
        if mode == RoundMode::Up && v >= due {
            break;
        }
        point *= &base;
    }
    RoundingGrid { mode, values }
}

pub fn round_job(p: u64, grid: &RoundingGrid) -> Result<u64, ClassifyError> {
    let found = match grid.mode {
        RoundMode::Down => grid.values.iter().rev().find(|&&v| v <= p),
        RoundMode::Up => grid.values.iter().find(|&&v| v >= p),
    };
    found.copied().ok_or(ClassifyError::OffGrid { p, mode: grid.mode })
}

/// Big jobs sharing one rounded processing time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigClass {
    pub rounded: u64,
    pub jobs: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JobClasses {
    pub eps: Q,
    pub grid: RoundingGrid,
    pub huge: Vec<usize>,
    pub big: Vec<usize>,
    pub small: Vec<usize>,
    /// One class per grid value, in increasing rounded order; may be empty.
    pub classes: Vec<BigClass>,
}

impl JobClasses {
    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.jobs.len()).collect()
    }

    pub fn rounded_values(&self) -> Vec<u64> {
        self.classes.iter().map(|c| c.rounded).collect()
    }
}

/// `huge = {p ≥ d}`, `big = {ε²d ≤ p < d}`, the rest small. Big jobs are
/// bucketed by their rounded value on the grid of `mode`.
pub fn classify_jobs(inst: &Instance, eps: &Q, mode: RoundMode) -> Result<JobClasses, ClassifyError> {
    check_eps(eps)?;
    classify_unchecked(inst, eps, mode)
}

/// Classification for any `0 < eps < 1`; the grids stay well defined there.
pub(crate) fn classify_unchecked(
    inst: &Instance,
    eps: &Q,
    mode: RoundMode,
) -> Result<JobClasses, ClassifyError> {
    let d = inst.due();
    let threshold = eps * eps * int(d);
    let grid = build_grid(d, eps, mode);
    let mut classes: Vec<BigClass> = grid
        .values
        .iter()
        .map(|&v| BigClass {
            rounded: v,
            jobs: Vec::new(),
        })
        .collect();
    let (mut huge, mut big, mut small) = (Vec::new(), Vec::new(), Vec::new());
    for job in inst.jobs() {
        if job.p >= d {
            huge.push(job.id);
        } else if int(job.p) >= threshold {
            let rounded = round_job(job.p, &grid)?;
            let h = classes
                .iter()
                .position(|c| c.rounded == rounded)
                .expect("rounded value is a grid value");
            classes[h].jobs.push(job.id);
            big.push(job.id);
        } else {
            small.push(job.id);
        }
    }
    Ok(JobClasses {
        eps: eps.clone(),
        grid,
        huge,
        big,
        small,
        classes,
    })
}

/// How many big jobs of each class start before `d` on one machine.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment {
    pub gamma: Vec<usize>,
}

impl Assignment {
    pub fn job_count(&self) -> usize {
        self.gamma.iter().sum()
    }

    /// Capacity, class-size and start-before-`d` conditions, all with
    /// rounded processing times.
    pub fn is_feasible(&self, rounded: &[u64], class_sizes: &[usize], capacity: usize, due: u64) -> bool {
        if self.gamma.len() != rounded.len() || self.job_count() > capacity {
            return false;
        }
        let mut t = 0u64;
        for (h, &g) in self.gamma.iter().enumerate() {
            if g > class_sizes[h] {
                return false;
            }
            for _ in 0..g {
                if t >= due {
                    return false;
                }
                t += rounded[h];
            }
        }
        true
    }
}

/// All feasible assignments in lexicographic order of `gamma`.
pub fn enumerate_assignments(
    classes: &JobClasses,
    inst: &Instance,
    limits: &Limits,
) -> Result<Vec<Assignment>, ClassifyError> {
    let rounded = classes.rounded_values();
    let sizes = classes.class_sizes();
    let mut out = Vec::new();
    let mut gamma = vec![0usize; rounded.len()];
    extend_assignments(
        0,
        0,
        0,
        &rounded,
        &sizes,
        inst.capacity(),
        inst.due(),
        &mut gamma,
        &mut out,
        limits.max_assignments,
    )?;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn extend_assignments(
    h: usize,
    count: usize,
    load: u64,
    rounded: &[u64],
    sizes: &[usize],
    capacity: usize,
    due: u64,
    gamma: &mut Vec<usize>,
    out: &mut Vec<Assignment>,
    limit: usize,
) -> Result<(), ClassifyError> {
    if h == rounded.len() {
        if out.len() == limit {
            return Err(ClassifyError::GuardExceeded {
                what: "assignments",
                limit,
            });
        }
        out.push(Assignment { gamma: gamma.clone() });
        return Ok(());
    }
    let (mut g, mut count, mut load) = (0, count, load);
    loop {
        gamma[h] = g;
        extend_assignments(h + 1, count, load, rounded, sizes, capacity, due, gamma, out, limit)?;
        // one more job of class h must start before d
        if g == sizes[h] || count == capacity || load >= due {
            break;
        }
        g += 1;
        count += 1;
        load += rounded[h];
    }
    gamma[h] = 0;
    Ok(())
}

/// `t[i]` machines use assignment `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Layout {
    pub t: Vec<usize>,
}

impl Layout {
    pub fn is_feasible(&self, assignments: &[Assignment], class_sizes: &[usize], free_machines: usize) -> bool {
        if self.t.len() != assignments.len() || self.t.iter().sum::<usize>() > free_machines {
            return false;
        }
        class_sizes.iter().enumerate().all(|(h, &size)| {
            self.t
                .iter()
                .zip(assignments)
                .map(|(&t, a)| t * a.gamma[h])
                .sum::<usize>()
                <= size
        })
    }
}

/// Lazily yields every feasible layout in lexicographic order.
///
/// Feasibility is closed under lowering entries, so the successor of a layout
/// is found by bumping the last entry that can still grow and zeroing the
/// entries after it.
#[derive(Debug, Clone)]
pub struct LayoutIter<'a> {
    assignments: &'a [Assignment],
    remaining: Vec<usize>,
    free: usize,
    t: Vec<usize>,
    started: bool,
    done: bool,
    produced: usize,
    limit: usize,
}

impl<'a> LayoutIter<'a> {
    fn fits(&self, i: usize) -> bool {
        self.free > 0
            && self.assignments[i]
                .gamma
                .iter()
                .zip(&self.remaining)
                .all(|(&g, &r)| g <= r)
    }

    fn bump(&mut self, i: usize) {
        self.t[i] += 1;
        self.free -= 1;
        for (r, &g) in self.remaining.iter_mut().zip(&self.assignments[i].gamma) {
            *r -= g;
        }
    }

    fn clear(&mut self, i: usize) {
        let t = std::mem::take(&mut self.t[i]);
        self.free += t;
        for (r, &g) in self.remaining.iter_mut().zip(&self.assignments[i].gamma) {
            *r += t * g;
        }
    }

    fn advance(&mut self) -> bool {
        for i in (0..self.t.len()).rev() {
            if self.fits(i) {
                self.bump(i);
                return true;
            }
            self.clear(i);
        }
        false
    }
}

impl Iterator for LayoutIter<'_> {
    type Item = Result<Layout, ClassifyError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        if self.started && !self.advance() {
            self.done = true;
            return None;
        }
        self.started = true;
        if self.produced == self.limit {
            self.done = true;
            return Some(Err(ClassifyError::GuardExceeded {
                what: "layouts",
                limit: self.limit,
            }));
        }
        self.produced += 1;
        Some(Ok(Layout { t: self.t.clone() }))
    }
}

pub fn enumerate_layouts<'a>(
    assignments: &'a [Assignment],
    classes: &JobClasses,
    inst: &Instance,
    limits: &Limits,
) -> LayoutIter<'a> {
    LayoutIter {
        assignments,
        remaining: classes.class_sizes(),
        free: inst.machines().saturating_sub(classes.huge.len()),
        t: vec![0; assignments.len()],
        started: false,
        done: false,
        produced: 0,
        limit: limits.max_layouts,
    }
}
