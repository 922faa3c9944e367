//! Capacitated parallel-machine instances with a common due date, schedules,
//! and the early-work / late-work objectives.
//!
//! A schedule only stores the job sequence of every machine. Jobs run back to
//! back from time zero, so start times are always derived from the sequence
//! and never stored.

use std::collections::HashSet;
use std::fmt;

use num_traits::Signed;
use thiserror::Error;

use crate::rational::{int, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("machine count must be positive")]
    NoMachines,
    #[error("machine capacity must be positive")]
    ZeroCapacity,
    #[error("due date must be positive")]
    ZeroDueDate,
    #[error("job {0} has zero processing time")]
    ZeroProcessingTime(usize),
    #[error("{machines} machines with capacity {capacity} cannot hold {jobs} jobs")]
    InsufficientCapacity {
        machines: usize,
        capacity: usize,
        jobs: usize,
    },
    #[error("leveling instance needs at least one machine and one time slot")]
    EmptyLevelingGrid,
    #[error("{machines} machines over {slots} slots cannot hold {jobs} unit jobs")]
    InsufficientSlots {
        machines: usize,
        slots: usize,
        jobs: usize,
    },
    #[error("invalid schedule: {}", join_violations(.0))]
    InvalidSchedule(Vec<Violation>),
    #[error("shift constant must be positive, got {0}")]
    NonPositiveShift(Q),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

/// A single reason a schedule (or leveling placement) is infeasible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    MachineCount { expected: usize, found: usize },
    UnknownJob { job: usize },
    DuplicateJob { job: usize },
    MissingJob { job: usize },
    CapacityExceeded { machine: usize, jobs: usize, capacity: usize },
    /// Leveling only: placement refers to a machine outside `0..machines`.
    MachineOutOfRange { job: usize, machine: usize },
    /// Leveling only: start slot outside `0..C`.
    SlotOutOfRange { job: usize, slot: usize },
    /// Leveling only: two jobs on the same machine in the same slot.
    Collision { machine: usize, slot: usize },
    /// Leveling only: the jobs of a slot do not occupy a machine prefix.
    PackingGap { slot: usize, machine: usize },
    PlacementCount { expected: usize, found: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MachineCount { expected, found } => {
                write!(f, "expected {expected} machines, found {found}")
            }
            Violation::UnknownJob { job } => write!(f, "unknown job {job}"),
            Violation::DuplicateJob { job } => write!(f, "job {job} scheduled more than once"),
            Violation::MissingJob { job } => write!(f, "job {job} not scheduled"),
            Violation::CapacityExceeded {
                machine,
                jobs,
                capacity,
            } => write!(f, "machine {machine} holds {jobs} jobs, capacity is {capacity}"),
            Violation::MachineOutOfRange { job, machine } => {
                write!(f, "job {job} placed on nonexistent machine {machine}")
            }
            Violation::SlotOutOfRange { job, slot } => {
                write!(f, "job {job} starts in nonexistent slot {slot}")
            }
            Violation::Collision { machine, slot } => {
                write!(f, "two jobs on machine {machine} in slot {slot}")
            }
            Violation::PackingGap { slot, machine } => {
                write!(f, "slot {slot} uses machine {machine} while a lower machine is idle")
            }
            Violation::PlacementCount { expected, found } => {
                write!(f, "expected {expected} placements, found {found}")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Job {
    pub id: usize,
    pub p: u64,
}

/// `m` identical machines, at most `capacity` jobs per machine, common due
/// date `due`. Job ids are positions in `processing_times`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Instance {
    machines: usize,
    capacity: usize,
    due: u64,
    processing_times: Vec<u64>,
}

impl Instance {
    pub fn new(
        machines: usize,
        capacity: usize,
        due: u64,
        processing_times: Vec<u64>,
    ) -> Result<Self, ModelError> {
        if machines == 0 {
            return Err(ModelError::NoMachines);
        }
        if capacity == 0 {
            return Err(ModelError::ZeroCapacity);
        }
        if due == 0 {
            return Err(ModelError::ZeroDueDate);
        }
        if let Some(j) = processing_times.iter().position(|&p| p == 0) {
            return Err(ModelError::ZeroProcessingTime(j));
        }
        let jobs = processing_times.len();
        if machines.saturating_mul(capacity) < jobs {
            return Err(ModelError::InsufficientCapacity {
                machines,
                capacity,
                jobs,
            });
        }
        Ok(Instance {
            machines,
            capacity,
            due,
            processing_times,
        })
    }

    pub fn machines(&self) -> usize {
        self.machines
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn due(&self) -> u64 {
        self.due
    }

    pub fn job_count(&self) -> usize {
        self.processing_times.len()
    }

    pub fn processing_times(&self) -> &[u64] {
        &self.processing_times
    }

    pub fn p(&self, job: usize) -> u64 {
        self.processing_times[job]
    }

    pub fn jobs(&self) -> impl Iterator<Item = Job> + '_ {
        self.processing_times
            .iter()
            .enumerate()
            .map(|(id, &p)| Job { id, p })
    }

    pub fn p_sum(&self) -> u64 {
        self.processing_times.iter().sum()
    }

    /// Job ids in non-increasing processing time order, ties by id.
    pub fn lpt_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.job_count()).collect();
        order.sort_by(|&a, &b| self.p(b).cmp(&self.p(a)).then(a.cmp(&b)));
        order
    }
}

/// Job sequences, one per machine.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Schedule {
    machines: Vec<Vec<usize>>,
}

impl Schedule {
    pub fn new(machines: Vec<Vec<usize>>) -> Self {
        Schedule { machines }
    }

    pub fn empty(machine_count: usize) -> Self {
        Schedule {
            machines: vec![Vec::new(); machine_count],
        }
    }

    pub fn machines(&self) -> &[Vec<usize>] {
        &self.machines
    }

    pub fn machine(&self, i: usize) -> &[usize] {
        &self.machines[i]
    }

    pub fn into_machines(self) -> Vec<Vec<usize>> {
        self.machines
    }

    pub fn machine_count(&self) -> usize {
        self.machines.len()
    }

    pub fn job_count(&self) -> usize {
        self.machines.iter().map(Vec::len).sum()
    }

    /// Every feasibility violation against `inst`; empty means feasible.
    pub fn violations(&self, inst: &Instance) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.machines.len() != inst.machines() {
            out.push(Violation::MachineCount {
                expected: inst.machines(),
                found: self.machines.len(),
            });
        }
        let mut seen = vec![false; inst.job_count()];
        let mut reported = HashSet::new();
        for (i, seq) in self.machines.iter().enumerate() {
            if seq.len() > inst.capacity() {
                out.push(Violation::CapacityExceeded {
                    machine: i,
                    jobs: seq.len(),
                    capacity: inst.capacity(),
                });
            }
            for &j in seq {
                match seen.get_mut(j) {
                    None => out.push(Violation::UnknownJob { job: j }),
                    Some(s) if *s => {
                        if reported.insert(j) {
                            out.push(Violation::DuplicateJob { job: j });
                        }
                    }
                    Some(s) => *s = true,
                }
            }
        }
        out.extend(
            seen.iter()
                .enumerate()
                .filter(|(_, &s)| !s)
                .map(|(job, _)| Violation::MissingJob { job }),
        );
        out
    }

    pub fn is_valid(&self, inst: &Instance) -> bool {
        self.violations(inst).is_empty()
    }

    fn checked(&self, inst: &Instance) -> Result<(), ModelError> {
        let v = self.violations(inst);
        if v.is_empty() {
            Ok(())
        } else {
            Err(ModelError::InvalidSchedule(v))
        }
    }

    /// Start time of every job, indexed by job id.
    pub fn start_times(&self, inst: &Instance) -> Result<Vec<u64>, ModelError> {
        self.checked(inst)?;
        let mut starts = vec![0; inst.job_count()];
        for seq in &self.machines {
            let mut t = 0;
            for &j in seq {
                starts[j] = t;
                t += inst.p(j);
            }
        }
        Ok(starts)
    }
}

/// Feasibility check returning all violations instead of failing on the first.
pub fn validate_schedule(inst: &Instance, s: &Schedule) -> (bool, Vec<Violation>) {
    let v = s.violations(inst);
    (v.is_empty(), v)
}

pub fn machine_loads(inst: &Instance, s: &Schedule) -> Result<Vec<u64>, ModelError> {
    s.checked(inst)?;
    Ok(loads_unchecked(inst, s))
}

pub(crate) fn loads_unchecked(inst: &Instance, s: &Schedule) -> Vec<u64> {
    s.machines
        .iter()
        .map(|seq| seq.iter().map(|&j| inst.p(j)).sum())
        .collect()
}

pub fn late_work(inst: &Instance, s: &Schedule) -> Result<u64, ModelError> {
    let d = inst.due();
    Ok(machine_loads(inst, s)?
        .into_iter()
        .map(|l| l.saturating_sub(d))
        .sum())
}

pub fn early_work(inst: &Instance, s: &Schedule) -> Result<u64, ModelError> {
    let loads = machine_loads(inst, s)?;
    let x = early_from_loads(&loads, inst.due());
    let y: u64 = loads.iter().map(|l| l.saturating_sub(inst.due())).sum();
    assert_eq!(x + y, inst.p_sum(), "early + late work must equal p_sum");
    Ok(x)
}

pub(crate) fn early_from_loads(loads: &[u64], due: u64) -> u64 {
    loads.iter().map(|&l| l.min(due)).sum()
}

/// `c·p_sum + Y`.
pub fn shifted_late_work(inst: &Instance, s: &Schedule, c: &Q) -> Result<Q, ModelError> {
    if !c.is_positive() {
        return Err(ModelError::NonPositiveShift(c.clone()));
    }
    let y = late_work(inst, s)?;
    Ok(c * int(inst.p_sum()) + int(y))
}

/// Early work, late work and shifted late work of a feasible schedule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Objectives {
    pub early: u64,
    pub late: u64,
    pub shifted: Q,
}

pub fn objectives(inst: &Instance, s: &Schedule, c: &Q) -> Result<Objectives, ModelError> {
    Ok(Objectives {
        early: early_work(inst, s)?,
        late: late_work(inst, s)?,
        shifted: shifted_late_work(inst, s, c)?,
    })
}
