//! Early-work maximization and shifted late-work minimization on identical
//! parallel machines with a common due date and per-machine job capacities.
//!
//! The crate provides
//! - the instance and schedule model with all four objectives ([`model`],
//!   [`leveling`]),
//! - the exact equivalence with unit-job resource leveling ([`reduction`]),
//! - job classification, rounding grids and layout enumeration
//!   ([`classify`]), the small-job LP ([`lp`]) and the approximation
//!   algorithms built on them ([`algorithms`]),
//! - an exhaustive oracle ([`oracle`]), instance generators ([`generate`])
//!   and the ratio experiment runner ([`experiment`]).
//!
//! ```
//! use latework::rational::ratio;
//! use latework::{early_work, ptas_early, Instance, Limits};
//!
//! let inst = Instance::new(2, 4, 4, vec![3, 3, 3]).unwrap();
//! let sol = ptas_early(&inst, &ratio(1, 3), &Limits::default()).unwrap();
//! assert_eq!(early_work(&inst, &sol.schedule).unwrap(), 7);
//! ```

pub mod algorithms;
pub mod classify;
pub mod experiment;
pub mod format;
pub mod generate;
pub mod leveling;
pub mod lp;
pub mod model;
pub mod oracle;
pub mod rational;
pub mod reduction;

pub use algorithms::{
    algorithm_a, algorithm_b, algorithm_c, algorithm_ls, huge_shortcut, lpt_schedule, ptas_early,
    ptas_shifted_late, solve_leveling, AlgoError, Branch, LevelingGoal, PartialSchedule, Solution,
};
pub use classify::{classify_jobs, JobClasses, Limits, RoundMode};
pub use leveling::{leveling_above, leveling_below, LevelingInstance, LevelingSchedule, Placement};
pub use model::{
    early_work, late_work, machine_loads, shifted_late_work, validate_schedule, Instance, Job,
    ModelError, Schedule, Violation,
};
pub use oracle::{exact_best_early, exact_condition_branch, OracleResult, Regime};
pub use rational::Q;
