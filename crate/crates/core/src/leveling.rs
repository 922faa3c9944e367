//! Unit-job resource leveling: jobs with resource demands placed into time
//! slots `0..C` on identical machines, with usage above (or below) a limit
//! `L` as the objective.

use std::collections::HashMap;

use crate::model::{ModelError, Violation};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LevelingInstance {
    machines: usize,
    slots: usize,
    limit: u64,
    demands: Vec<u64>,
}

impl LevelingInstance {
    pub fn new(
        machines: usize,
        slots: usize,
        limit: u64,
        demands: Vec<u64>,
    ) -> Result<Self, ModelError> {
        if machines == 0 || slots == 0 {
            return Err(ModelError::EmptyLevelingGrid);
        }
        if machines.saturating_mul(slots) < demands.len() {
            return Err(ModelError::InsufficientSlots {
                machines,
                slots,
                jobs: demands.len(),
            });
        }
        Ok(LevelingInstance {
            machines,
            slots,
            limit,
            demands,
        })
    }

    pub fn machines(&self) -> usize {
        self.machines
    }

    /// The common deadline `C`.
    pub fn slots(&self) -> usize {
        self.slots
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn demands(&self) -> &[u64] {
        &self.demands
    }

    pub fn job_count(&self) -> usize {
        self.demands.len()
    }

    pub fn a_sum(&self) -> u64 {
        self.demands.iter().sum()
    }
}

/// `(machine, slot)` of every job, indexed by job id. Both are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Placement {
    pub machine: usize,
    pub slot: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LevelingSchedule {
    placements: Vec<Placement>,
}

impl LevelingSchedule {
    pub fn new(placements: Vec<Placement>) -> Self {
        LevelingSchedule { placements }
    }

    pub fn placements(&self) -> &[Placement] {
        &self.placements
    }

    /// Violations against `inst`, including the rule that the `k` jobs of a
    /// slot sit on machines `0..k`.
    pub fn violations(&self, inst: &LevelingInstance) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.placements.len() != inst.job_count() {
            out.push(Violation::PlacementCount {
                expected: inst.job_count(),
                found: self.placements.len(),
            });
        }
        let mut occupied: HashMap<(usize, usize), usize> = HashMap::new();
        let mut per_slot: Vec<Vec<usize>> = vec![Vec::new(); inst.slots()];
        for (job, pl) in self.placements.iter().enumerate() {
            let mut ok = true;
            if pl.machine >= inst.machines() {
                out.push(Violation::MachineOutOfRange {
                    job,
                    machine: pl.machine,
                });
                ok = false;
            }
            if pl.slot >= inst.slots() {
                out.push(Violation::SlotOutOfRange { job, slot: pl.slot });
                ok = false;
            }
            if !ok {
                continue;
            }
            let count = occupied.entry((pl.machine, pl.slot)).or_insert(0);
            *count += 1;
            if *count == 2 {
                out.push(Violation::Collision {
                    machine: pl.machine,
                    slot: pl.slot,
                });
            }
            per_slot[pl.slot].push(pl.machine);
        }
        for (slot, used) in per_slot.iter_mut().enumerate() {
            used.sort_unstable();
            used.dedup();
            if let Some((_, &machine)) = used.iter().enumerate().find(|&(k, &mch)| k != mch) {
                out.push(Violation::PackingGap { slot, machine });
            }
        }
        out
    }

    pub fn is_valid(&self, inst: &LevelingInstance) -> bool {
        self.violations(inst).is_empty()
    }

    fn checked(&self, inst: &LevelingInstance) -> Result<(), ModelError> {
        let v = self.violations(inst);
        if v.is_empty() {
            Ok(())
        } else {
            Err(ModelError::InvalidSchedule(v))
        }
    }
}

/// Total demand started in each slot.
pub fn slot_demands(inst: &LevelingInstance, s: &LevelingSchedule) -> Result<Vec<u64>, ModelError> {
    s.checked(inst)?;
    let mut usage = vec![0; inst.slots()];
    for (job, pl) in s.placements().iter().enumerate() {
        usage[pl.slot] += inst.demands()[job];
    }
    Ok(usage)
}

/// Resource usage above the limit, summed over slots.
pub fn leveling_above(inst: &LevelingInstance, s: &LevelingSchedule) -> Result<u64, ModelError> {
    let l = inst.limit();
    Ok(slot_demands(inst, s)?
        .into_iter()
        .map(|u| u.saturating_sub(l))
        .sum())
}

/// Resource usage below the limit, summed over slots.
pub fn leveling_below(inst: &LevelingInstance, s: &LevelingSchedule) -> Result<u64, ModelError> {
    let usage = slot_demands(inst, s)?;
    let l = inst.limit();
    let below: u64 = usage.iter().map(|&u| u.min(l)).sum();
    let above: u64 = usage.iter().map(|&u| u.saturating_sub(l)).sum();
    assert_eq!(below + above, inst.a_sum(), "below + above must equal a_sum");
    Ok(below)
}
