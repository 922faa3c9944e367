//! Exact equivalence between capacitated late-work scheduling and unit-job
//! resource leveling.
//!
//! Instances map as `machines := N`, `C := m`, `L := d`, `a_j := p_j`. A job
//! that is the `ℓ`-th on machine `i` becomes the job on leveling machine `ℓ`
//! in slot `i`. Both maps are bijections and preserve late work exactly.

use thiserror::Error;

use crate::leveling::{LevelingInstance, LevelingSchedule, Placement};
use crate::model::{Instance, ModelError, Schedule};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("job {0} has zero demand and no late-work preimage")]
    ZeroDemand(usize),
    #[error("item sizes sum to {0}, which is odd")]
    OddTotal(u64),
    #[error("item sizes must be positive")]
    ZeroSize,
    #[error(transparent)]
    Model(#[from] ModelError),
}

pub fn instance_to_leveling(inst: &Instance) -> LevelingInstance {
    LevelingInstance::new(
        inst.capacity(),
        inst.machines(),
        inst.due(),
        inst.processing_times().to_vec(),
    )
    .expect("m·N ≥ n carries over as machines·C ≥ n")
}

pub fn instance_from_leveling(linst: &LevelingInstance) -> Result<Instance, ReductionError> {
    if let Some(j) = linst.demands().iter().position(|&a| a == 0) {
        return Err(ReductionError::ZeroDemand(j));
    }
    Ok(Instance::new(
        linst.slots(),
        linst.machines(),
        linst.limit(),
        linst.demands().to_vec(),
    )?)
}

pub fn schedule_to_leveling(inst: &Instance, s: &Schedule) -> Result<LevelingSchedule, ModelError> {
    let v = s.violations(inst);
    if !v.is_empty() {
        return Err(ModelError::InvalidSchedule(v));
    }
    let mut placements = vec![Placement { machine: 0, slot: 0 }; inst.job_count()];
    for (i, seq) in s.machines().iter().enumerate() {
        for (pos, &j) in seq.iter().enumerate() {
            placements[j] = Placement {
                machine: pos,
                slot: i,
            };
        }
    }
    Ok(LevelingSchedule::new(placements))
}

/// Inverse of [`schedule_to_leveling`]. Placements that leave a lower machine
/// idle in some slot are rejected rather than repacked.
pub fn schedule_from_leveling(
    linst: &LevelingInstance,
    ls: &LevelingSchedule,
) -> Result<Schedule, ModelError> {
    let v = ls.violations(linst);
    if !v.is_empty() {
        return Err(ModelError::InvalidSchedule(v));
    }
    let mut machines: Vec<Vec<Option<usize>>> = vec![Vec::new(); linst.slots()];
    for (j, pl) in ls.placements().iter().enumerate() {
        let seq = &mut machines[pl.slot];
        if seq.len() <= pl.machine {
            seq.resize(pl.machine + 1, None);
        }
        seq[pl.machine] = Some(j);
    }
    Ok(Schedule::new(
        machines
            .into_iter()
            .map(|seq| {
                seq.into_iter()
                    .map(|j| j.expect("packing rule leaves no holes"))
                    .collect()
            })
            .collect(),
    ))
}

/// Two-machine instance with `d = Σ sizes / 2` and `N = n`: its optimal late
/// work is zero exactly when the sizes split into two equal halves.
pub fn partition_hard_instance(sizes: &[u64]) -> Result<Instance, ReductionError> {
    if sizes.contains(&0) {
        return Err(ReductionError::ZeroSize);
    }
    let total: u64 = sizes.iter().sum();
    if total % 2 == 1 {
        return Err(ReductionError::OddTotal(total));
    }
    // An empty item list has no positive due date; keep N ≥ 1 and d ≥ 1.
    Ok(Instance::new(
        2,
        sizes.len().max(1),
        (total / 2).max(1),
        sizes.to_vec(),
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::leveling::leveling_above;
    use crate::model::late_work;

    /// Eleven jobs on three machines with N = 4, d = 5.
    fn eleven_jobs() -> (Instance, Schedule) {
        let inst = Instance::new(3, 4, 5, vec![2, 1, 3, 1, 2, 4, 2, 1, 3, 2, 1]).unwrap();
        let s = Schedule::new(vec![vec![0, 1, 2, 3], vec![4, 5, 6], vec![7, 8, 9, 10]]);
        (inst, s)
    }

    #[test]
    fn instance_maps_both_ways() {
        let (inst, _) = eleven_jobs();
        let l = instance_to_leveling(&inst);
        assert_eq!(l.machines(), 4);
        assert_eq!(l.slots(), 3);
        assert_eq!(l.limit(), 5);
        assert_eq!(l.demands(), inst.processing_times());
        assert_eq!(instance_from_leveling(&l).unwrap(), inst);

        let unit = Instance::new(1, 1, 1, vec![1]).unwrap();
        let l = instance_to_leveling(&unit);
        assert_eq!((l.machines(), l.slots(), l.limit()), (1, 1, 1));
        assert_eq!(l.demands(), &[1]);
    }

    #[test]
    fn leveling_preimage() {
        let l = LevelingInstance::new(2, 3, 4, vec![2, 2]).unwrap();
        let i = instance_from_leveling(&l).unwrap();
        assert_eq!(i, Instance::new(3, 2, 4, vec![2, 2]).unwrap());
        let z = LevelingInstance::new(2, 3, 4, vec![0, 2]).unwrap();
        assert_eq!(instance_from_leveling(&z), Err(ReductionError::ZeroDemand(0)));
    }

    #[test]
    fn schedule_mapping_follows_position_and_machine() {
        let (inst, s) = eleven_jobs();
        let ls = schedule_to_leveling(&inst, &s).unwrap();
        // first job of the second machine -> leveling machine 0, slot 1
        assert_eq!(ls.placements()[4], Placement { machine: 0, slot: 1 });
        // fourth job of the first machine -> leveling machine 3, slot 0
        assert_eq!(ls.placements()[3], Placement { machine: 3, slot: 0 });
        let l = instance_to_leveling(&inst);
        assert!(ls.is_valid(&l));
        assert_eq!(schedule_from_leveling(&l, &ls).unwrap(), s);
        assert_eq!(
            late_work(&inst, &s).unwrap(),
            leveling_above(&l, &ls).unwrap()
        );
    }

    #[test]
    fn empty_and_single_placements() {
        let inst = Instance::new(2, 1, 3, vec![]).unwrap();
        let ls = schedule_to_leveling(&inst, &Schedule::empty(2)).unwrap();
        assert!(ls.placements().is_empty());

        let l = LevelingInstance::new(2, 2, 3, vec![1]).unwrap();
        let one = LevelingSchedule::new(vec![Placement { machine: 0, slot: 0 }]);
        assert_eq!(
            schedule_from_leveling(&l, &one).unwrap(),
            Schedule::new(vec![vec![0], vec![]])
        );
        let gap = LevelingSchedule::new(vec![Placement { machine: 1, slot: 0 }]);
        assert!(matches!(
            schedule_from_leveling(&l, &gap),
            Err(ModelError::InvalidSchedule(_))
        ));
    }

    #[test]
    fn partition_instances() {
        let i = partition_hard_instance(&[3, 1, 2, 2]).unwrap();
        assert_eq!(i, Instance::new(2, 4, 4, vec![3, 1, 2, 2]).unwrap());
        let i = partition_hard_instance(&[1, 1]).unwrap();
        assert_eq!(i, Instance::new(2, 2, 1, vec![1, 1]).unwrap());
        assert_eq!(
            partition_hard_instance(&[1, 1, 1]),
            Err(ReductionError::OddTotal(3))
        );
        assert_eq!(partition_hard_instance(&[2, 0]), Err(ReductionError::ZeroSize));
    }
}
