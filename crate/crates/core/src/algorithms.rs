//! Layout-enumeration algorithm (A) with its two small-job subroutines (B and
//! C), capacitated list scheduling, the huge-job shortcut and the combined
//! approximation schemes.

use num_traits::Signed;
use rayon::prelude::*;
use thiserror::Error;

use crate::classify::{
    check_eps, classify_jobs, enumerate_assignments, enumerate_layouts, Assignment, ClassifyError,
    JobClasses, Layout, Limits, RoundMode,
};
use crate::leveling::{LevelingInstance, LevelingSchedule};
use crate::lp::{solve_small_lp, BasicLpSolution, SmallLp};
use crate::model::{early_from_loads, loads_unchecked, Instance, ModelError, Schedule};
use crate::rational::{int, Q};
use crate::reduction::{instance_from_leveling, schedule_to_leveling, ReductionError};

/// Layouts evaluated per parallel batch.
const LAYOUT_BATCH: usize = 2048;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgoError {
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
}

impl AlgoError {
    pub fn is_guard(&self) -> bool {
        matches!(self, AlgoError::Classify(ClassifyError::GuardExceeded { .. }))
    }
}

/// Machines filled with huge and big jobs so far.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialSchedule {
    machines: Vec<Vec<usize>>,
    loads: Vec<u64>,
    due: u64,
    capacity: usize,
}

impl PartialSchedule {
    pub fn new(inst: &Instance) -> Self {
        PartialSchedule {
            machines: vec![Vec::new(); inst.machines()],
            loads: vec![0; inst.machines()],
            due: inst.due(),
            capacity: inst.capacity(),
        }
    }

    pub fn push(&mut self, inst: &Instance, machine: usize, job: usize) {
        debug_assert!(self.machines[machine].len() < self.capacity);
        self.machines[machine].push(job);
        self.loads[machine] += inst.p(job);
    }

    pub fn machines(&self) -> &[Vec<usize>] {
        &self.machines
    }

    pub fn load(&self, i: usize) -> u64 {
        self.loads[i]
    }

    /// `P_small_i`: idle time before `d`, from actual processing times.
    pub fn idle_before_due(&self, i: usize) -> u64 {
        self.due.saturating_sub(self.loads[i])
    }

    /// `n_small_i`: job slots still free.
    pub fn free_slots(&self, i: usize) -> usize {
        self.capacity - self.machines[i].len()
    }

    pub fn into_schedule(self) -> Schedule {
        Schedule::new(self.machines)
    }
}

/// With at least `m` huge jobs, one huge job first on every machine is
/// optimal for both objectives (`X = m·d`). The remaining jobs go to the
/// machine with the most free slots, lowest index first.
pub fn huge_shortcut(inst: &Instance, classes: &JobClasses) -> Option<Schedule> {
    let m = inst.machines();
    if classes.huge.len() < m {
        return None;
    }
    let mut partial = PartialSchedule::new(inst);
    for (i, &j) in classes.huge.iter().take(m).enumerate() {
        partial.push(inst, i, j);
    }
    let first: Vec<usize> = classes.huge.iter().take(m).copied().collect();
    for j in (0..inst.job_count()).filter(|j| !first.contains(j)) {
        let i = (0..m)
            .max_by(|&a, &b| partial.free_slots(a).cmp(&partial.free_slots(b)).then(b.cmp(&a)))
            .expect("m ≥ 1");
        partial.push(inst, i, j);
    }
    Some(partial.into_schedule())
}

/// Greedy small-job filling for the uncapacitated case: machine by machine,
/// append every pending job that still completes by `d`. Returns the jobs
/// left over.
pub fn algorithm_b(inst: &Instance, partial: &mut PartialSchedule, small: &[usize]) -> Vec<usize> {
    let mut pending = small.to_vec();
    for i in 0..inst.machines() {
        pending.retain(|&j| {
            if partial.load(i) + inst.p(j) <= inst.due() {
                partial.push(inst, i, j);
                false
            } else {
                true
            }
        });
    }
    pending
}

/// Small-job placement through a basic optimal LP solution.
#[derive(Debug, Clone)]
pub struct LpPlacement {
    pub lp: SmallLp,
    pub solution: BasicLpSolution,
    /// Jobs with no integral machine, left for the final fill.
    pub pending: Vec<usize>,
}

pub fn small_lp(inst: &Instance, partial: &PartialSchedule, small: &[usize]) -> SmallLp {
    let m = inst.machines();
    SmallLp {
        p: small.iter().map(|&j| inst.p(j)).collect(),
        time_caps: (0..m).map(|i| partial.idle_before_due(i)).collect(),
        count_caps: (0..m).map(|i| partial.free_slots(i)).collect(),
    }
}

/// Assigns exactly the small jobs whose LP value on some machine is one.
pub fn algorithm_c(inst: &Instance, partial: &mut PartialSchedule, small: &[usize]) -> LpPlacement {
    let lp = small_lp(inst, partial, small);
    let solution = solve_small_lp(&lp);
    let mut pending = Vec::new();
    for (k, &j) in small.iter().enumerate() {
        match solution.integral_machine(k) {
            Some(i) => partial.push(inst, i - 1, j),
            None => pending.push(j),
        }
    }
    LpPlacement {
        lp,
        solution,
        pending,
    }
}

/// List scheduling with capacities: each job goes to the least loaded
/// machine that still has a free slot, lowest index on ties.
pub fn algorithm_ls(inst: &Instance, order: &[usize]) -> Schedule {
    let mut partial = PartialSchedule::new(inst);
    for &j in order {
        let i = (0..inst.machines())
            .filter(|&i| partial.free_slots(i) > 0)
            .min_by_key(|&i| (partial.load(i), i))
            .expect("m·N ≥ n leaves a free slot");
        partial.push(inst, i, j);
    }
    partial.into_schedule()
}

pub fn lpt_schedule(inst: &Instance) -> Schedule {
    algorithm_ls(inst, &inst.lpt_order())
}

fn by_p_desc(inst: &Instance, jobs: &mut [usize]) {
    jobs.sort_by(|&a, &b| inst.p(b).cmp(&inst.p(a)).then(a.cmp(&b)));
}

/// Complete schedule for one layout: huge jobs on the first machines, big
/// jobs per the layout (longest of each class first), small jobs via B or C,
/// then every leftover job round-robin over machines ordered by (free slots
/// desc, load asc, index).
pub fn schedule_for_layout(
    inst: &Instance,
    classes: &JobClasses,
    assignments: &[Assignment],
    layout: &Layout,
) -> Schedule {
    let mut partial = PartialSchedule::new(inst);
    for (i, &j) in classes.huge.iter().enumerate() {
        partial.push(inst, i, j);
    }
    let mut pools: Vec<Vec<usize>> = classes
        .classes
        .iter()
        .map(|c| {
            let mut jobs = c.jobs.clone();
            by_p_desc(inst, &mut jobs);
            jobs
        })
        .collect();
    let mut taken = vec![0; pools.len()];
    let mut machine = classes.huge.len();
    for (a, &count) in assignments.iter().zip(&layout.t) {
        for _ in 0..count {
            for (h, &g) in a.gamma.iter().enumerate() {
                for &j in &pools[h][taken[h]..taken[h] + g] {
                    partial.push(inst, machine, j);
                }
                taken[h] += g;
            }
            machine += 1;
        }
    }
    let mut leftover: Vec<usize> = pools
        .iter_mut()
        .zip(&taken)
        .flat_map(|(pool, &t)| pool.drain(t..))
        .collect();

    let mut small = classes.small.clone();
    by_p_desc(inst, &mut small);
    let pending = if inst.capacity() >= inst.job_count() {
        algorithm_b(inst, &mut partial, &small)
    } else {
        algorithm_c(inst, &mut partial, &small).pending
    };
    leftover.extend(pending);
    by_p_desc(inst, &mut leftover);
    fill_round_robin(inst, &mut partial, &leftover);
    partial.into_schedule()
}

fn fill_round_robin(inst: &Instance, partial: &mut PartialSchedule, jobs: &[usize]) {
    if jobs.is_empty() {
        return;
    }
    let mut order: Vec<usize> = (0..inst.machines()).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(partial.free_slots(i)), partial.load(i), i));
    let mut cursor = 0;
    for &j in jobs {
        while partial.free_slots(order[cursor % order.len()]) == 0 {
            cursor += 1;
        }
        partial.push(inst, order[cursor % order.len()], j);
        cursor += 1;
    }
}

/// Runs the layout algorithm over every feasible layout and keeps the best
/// schedule: most early work for [`RoundMode::Down`], least late work for
/// [`RoundMode::Up`], earliest layout on ties. With `|H| ≥ m` the huge-job
/// shortcut is returned instead.
pub fn algorithm_a(inst: &Instance, eps: &Q, mode: RoundMode, limits: &Limits) -> Result<Schedule, AlgoError> {
    let classes = classify_jobs(inst, eps, mode)?;
    if let Some(s) = huge_shortcut(inst, &classes) {
        return Ok(s);
    }
    let assignments = enumerate_assignments(&classes, inst, limits)?;
    let score = |s: &Schedule| -> i128 {
        let loads = loads_unchecked(inst, s);
        match mode {
            RoundMode::Down => early_from_loads(&loads, inst.due()) as i128,
            RoundMode::Up => -(loads.iter().map(|l| l.saturating_sub(inst.due())).sum::<u64>() as i128),
        }
    };
    let pick = |a: (i128, usize, Schedule), b: (i128, usize, Schedule)| {
        if (b.0, std::cmp::Reverse(b.1)) > (a.0, std::cmp::Reverse(a.1)) {
            b
        } else {
            a
        }
    };

    let mut best: Option<(i128, usize, Schedule)> = None;
    let mut layouts = enumerate_layouts(&assignments, &classes, inst, limits);
    let mut offset = 0;
    loop {
        let batch: Vec<Layout> = layouts
            .by_ref()
            .take(LAYOUT_BATCH)
            .collect::<Result<_, _>>()?;
        if batch.is_empty() {
            break;
        }
        let local = batch
            .par_iter()
            .enumerate()
            .map(|(k, layout)| {
                let s = schedule_for_layout(inst, &classes, &assignments, layout);
                (score(&s), offset + k, s)
            })
            .reduce_with(pick);
        best = match (best, local) {
            (Some(a), Some(b)) => Some(pick(a, b)),
            (a, b) => a.or(b),
        };
        offset += batch.len();
    }
    Ok(best.expect("the all-zero layout is always feasible").2)
}

/// Which branch produced a combined result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    HugeShortcut,
    Layout,
    ListScheduling,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub schedule: Schedule,
    pub branch: Branch,
}

/// Best of the layout algorithm (rounded down) and LPT list scheduling by
/// early work; the layout schedule wins ties.
pub fn ptas_early(inst: &Instance, eps: &Q, limits: &Limits) -> Result<Solution, AlgoError> {
    combined(inst, eps, RoundMode::Down, limits)
}

/// Best of the layout algorithm (rounded up) and LPT list scheduling by
/// late work, hence by `c·p_sum + Y`; the layout schedule wins ties.
pub fn ptas_shifted_late(inst: &Instance, eps: &Q, c: &Q, limits: &Limits) -> Result<Solution, AlgoError> {
    if !c.is_positive() {
        return Err(ModelError::NonPositiveShift(c.clone()).into());
    }
    combined(inst, eps, RoundMode::Up, limits)
}

fn combined(inst: &Instance, eps: &Q, mode: RoundMode, limits: &Limits) -> Result<Solution, AlgoError> {
    check_eps(eps)?;
    let classes = classify_jobs(inst, eps, mode)?;
    if let Some(schedule) = huge_shortcut(inst, &classes) {
        return Ok(Solution {
            schedule,
            branch: Branch::HugeShortcut,
        });
    }
    let a = algorithm_a(inst, eps, mode, limits)?;
    let lpt = lpt_schedule(inst);
    let early = |s: &Schedule| early_from_loads(&loads_unchecked(inst, s), inst.due());
    // equal p_sum: maximizing X and minimizing Y coincide
    if early(&a) >= early(&lpt) {
        Ok(Solution {
            schedule: a,
            branch: Branch::Layout,
        })
    } else {
        Ok(Solution {
            schedule: lpt,
            branch: Branch::ListScheduling,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LevelingGoal {
    /// Maximize usage below the limit.
    BelowMax,
    /// Minimize `c·a_sum + usage above the limit`.
    ShiftedAbove,
}

/// Solves a leveling instance through its late-work preimage.
pub fn solve_leveling(
    linst: &LevelingInstance,
    eps: &Q,
    goal: LevelingGoal,
    c: &Q,
    limits: &Limits,
) -> Result<LevelingSchedule, AlgoError> {
    let inst = instance_from_leveling(linst)?;
    let sol = match goal {
        LevelingGoal::BelowMax => ptas_early(&inst, eps, limits)?,
        LevelingGoal::ShiftedAbove => ptas_shifted_late(&inst, eps, c, limits)?,
    };
    Ok(schedule_to_leveling(&inst, &sol.schedule)?)
}

/// `c·p_sum + Y` from early work, without revalidating the schedule.
pub fn shifted_from_early(inst: &Instance, early: u64, c: &Q) -> Q {
    c * int(inst.p_sum()) + int(inst.p_sum() - early)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::leveling::leveling_above;
    use crate::model::{early_work, late_work, machine_loads};
    use crate::rational::ratio;
    use crate::reduction::instance_to_leveling;

    fn third() -> Q {
        ratio(1, 3)
    }

    #[test]
    fn huge_shortcut_cases() {
        let inst = Instance::new(2, 2, 3, vec![3, 5, 1]).unwrap();
        let c = classify_jobs(&inst, &third(), RoundMode::Down).unwrap();
        let s = huge_shortcut(&inst, &c).unwrap();
        assert!(s.is_valid(&inst));
        assert_eq!(early_work(&inst, &s).unwrap(), 6);

        let inst = Instance::new(3, 2, 3, vec![3, 5, 1]).unwrap();
        let c = classify_jobs(&inst, &third(), RoundMode::Down).unwrap();
        assert!(huge_shortcut(&inst, &c).is_none());

        let inst = Instance::new(2, 1, 3, vec![4, 7]).unwrap();
        let c = classify_jobs(&inst, &third(), RoundMode::Down).unwrap();
        let s = huge_shortcut(&inst, &c).unwrap();
        assert_eq!(late_work(&inst, &s).unwrap(), 11 - 6);
    }

    #[test]
    fn algorithm_b_trace() {
        let inst = Instance::new(2, 10, 5, vec![3, 2, 2]).unwrap();
        let mut partial = PartialSchedule::new(&inst);
        partial.push(&inst, 0, 0);
        let pending = algorithm_b(&inst, &mut partial, &[1, 2]);
        assert_eq!(partial.machines()[0], vec![0, 1]);
        assert_eq!(partial.machines()[1], vec![2]);
        assert!(pending.is_empty());

        let inst = Instance::new(1, 10, 5, vec![5, 1]).unwrap();
        let mut partial = PartialSchedule::new(&inst);
        partial.push(&inst, 0, 0);
        assert_eq!(algorithm_b(&inst, &mut partial, &[1]), vec![1]);
    }

    #[test]
    fn algorithm_c_leaves_fractional_job() {
        let inst = Instance::new(1, 2, 3, vec![2, 2]).unwrap();
        let mut partial = PartialSchedule::new(&inst);
        let out = algorithm_c(&inst, &mut partial, &[0, 1]);
        assert_eq!(partial.machines()[0], vec![0]);
        assert_eq!(out.pending, vec![1]);
        assert_eq!(out.solution.objective, int(3));

        let inst = Instance::new(2, 2, 3, vec![5, 6, 1, 1]).unwrap();
        let mut partial = PartialSchedule::new(&inst);
        partial.push(&inst, 0, 0);
        partial.push(&inst, 1, 1);
        let out = algorithm_c(&inst, &mut partial, &[2, 3]);
        assert_eq!(out.pending, vec![2, 3]);
    }

    #[test]
    fn list_scheduling_trace() {
        let inst = Instance::new(2, 3, 10, vec![5, 4, 3, 3, 2]).unwrap();
        let s = algorithm_ls(&inst, &[0, 1, 2, 3, 4]);
        assert_eq!(s.machines(), &[vec![0, 3], vec![1, 2, 4]]);
        assert_eq!(machine_loads(&inst, &s).unwrap(), vec![8, 9]);

        let one = Instance::new(1, 5, 10, vec![5, 4, 3]).unwrap();
        assert_eq!(algorithm_ls(&one, &[2, 0, 1]).machines(), &[vec![2, 0, 1]]);

        let unit = Instance::new(3, 1, 10, vec![1, 9, 4]).unwrap();
        assert_eq!(algorithm_ls(&unit, &[0, 1, 2]).machines(), &[vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn algorithm_a_examples() {
        let inst = Instance::new(2, 4, 4, vec![3, 3, 3]).unwrap();
        let s = algorithm_a(&inst, &third(), RoundMode::Down, &Limits::default()).unwrap();
        assert!(s.is_valid(&inst));
        assert_eq!(early_work(&inst, &s).unwrap(), 7);

        let inst = Instance::new(1, 2, 2, vec![1, 1]).unwrap();
        let s = algorithm_a(&inst, &third(), RoundMode::Down, &Limits::default()).unwrap();
        assert_eq!(early_work(&inst, &s).unwrap(), 2);
        assert_eq!(late_work(&inst, &s).unwrap(), 0);

        let inst = Instance::new(3, 2, 4, vec![9, 6]).unwrap();
        let s = algorithm_a(&inst, &third(), RoundMode::Down, &Limits::default()).unwrap();
        let homes: Vec<usize> = (0..2)
            .map(|j| s.machines().iter().position(|m| m.contains(&j)).unwrap())
            .collect();
        assert_ne!(homes[0], homes[1]);
    }

    #[test]
    fn ptas_examples() {
        let limits = Limits::default();
        let inst = Instance::new(2, 2, 4, vec![4, 4, 4]).unwrap();
        let sol = ptas_early(&inst, &third(), &limits).unwrap();
        assert_eq!(early_work(&inst, &sol.schedule).unwrap(), 8);
        assert_eq!(sol.branch, Branch::HugeShortcut);

        let inst = Instance::new(2, 4, 4, vec![3, 1, 2, 2]).unwrap();
        let sol = ptas_shifted_late(&inst, &ratio(1, 4), &int(1), &limits).unwrap();
        assert!(late_work(&inst, &sol.schedule).unwrap() <= 8);

        let inst = Instance::new(1, 3, 10, vec![3, 4, 2]).unwrap();
        let sol = ptas_shifted_late(&inst, &third(), &int(2), &limits).unwrap();
        assert_eq!(late_work(&inst, &sol.schedule).unwrap(), 0);

        let inst = Instance::new(2, 3, 3, vec![3, 5, 1, 4]).unwrap();
        let sol = ptas_shifted_late(&inst, &third(), &int(1), &limits).unwrap();
        assert_eq!(late_work(&inst, &sol.schedule).unwrap(), 13 - 6);

        assert!(ptas_shifted_late(&inst, &third(), &int(0), &limits).is_err());
        assert!(ptas_early(&inst, &ratio(1, 2), &limits).is_err());
    }

    #[test]
    fn leveling_through_preimage() {
        let limits = Limits::default();
        let inst = Instance::new(3, 4, 5, vec![2, 1, 3, 1, 2, 4, 2, 1, 3, 2, 1]).unwrap();
        let l = instance_to_leveling(&inst);
        let ls = solve_leveling(&l, &third(), LevelingGoal::ShiftedAbove, &int(1), &limits).unwrap();
        let preimage = ptas_shifted_late(&inst, &third(), &int(1), &limits).unwrap();
        assert_eq!(
            leveling_above(&l, &ls).unwrap(),
            late_work(&inst, &preimage.schedule).unwrap()
        );

        let roomy = LevelingInstance::new(3, 2, 10, vec![3, 4, 2]).unwrap();
        let ls = solve_leveling(&roomy, &third(), LevelingGoal::BelowMax, &int(1), &limits).unwrap();
        assert_eq!(leveling_above(&roomy, &ls).unwrap(), 0);

        let single = LevelingInstance::new(4, 1, 5, vec![3, 4, 2]).unwrap();
        let ls = solve_leveling(&single, &third(), LevelingGoal::ShiftedAbove, &int(1), &limits).unwrap();
        assert_eq!(leveling_above(&single, &ls).unwrap(), 4);

        let zero = LevelingInstance::new(4, 1, 5, vec![0, 4]).unwrap();
        assert!(matches!(
            solve_leveling(&zero, &third(), LevelingGoal::BelowMax, &int(1), &limits),
            Err(AlgoError::Reduction(ReductionError::ZeroDemand(0)))
        ));
    }

    #[test]
    fn guard_trips_are_reported() {
        let inst = Instance::new(3, 4, 40, vec![5, 7, 9, 11, 13, 15, 17, 19]).unwrap();
        let tiny = Limits {
            max_assignments: 3,
            max_layouts: 3,
        };
        let err = ptas_early(&inst, &ratio(1, 4), &tiny).unwrap_err();
        assert!(err.is_guard());
    }
}
