//! Seeded instance generators.
//!
//! Every generator draws from a ChaCha8 stream seeded with a `u64`, so the
//! same seed gives the same instance on every platform.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::leveling::{LevelingInstance, LevelingSchedule, Placement};
use crate::model::{Instance, Schedule};
use crate::rational::{ceil_u64, int, parse_rational, Q};
use crate::reduction::partition_hard_instance;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("inconsistent range for {0}")]
    Range(&'static str),
    #[error("mixture eps `{0}` is not a rational in (0, 1)")]
    Eps(String),
    #[error("a yes-instance of PARTITION needs at least two items")]
    TooFewItems,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum GenKind {
    #[default]
    Random,
    Partition,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum PartitionAnswer {
    /// Sizes that split into two equal halves.
    #[default]
    Yes,
    /// One item larger than all others combined.
    No,
}

/// Parameters of a generated instance family. Ranges are inclusive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GenSpec {
    pub kind: GenKind,
    pub seed: u64,
    pub jobs: [usize; 2],
    pub machines: [usize; 2],
    /// Machine capacity range, raised to `⌈n/m⌉` when needed. Absent means
    /// uncapacitated (`N = n`).
    pub capacity: Option<[usize; 2]>,
    pub due: [u64; 2],
    /// When set, sizes come from a mixture of small `[1, ε²d)`, big
    /// `[ε²d, d)` and huge `[d, 2d]` ranges, weighted by `weights`.
    pub mixture_eps: Option<String>,
    pub weights: [u32; 3],
    /// Size range without a mixture, and item sizes for partition instances.
    pub sizes: [u64; 2],
    /// Draw big sizes from a palette of this many values.
    pub distinct_big: Option<usize>,
    pub partition: PartitionAnswer,
}

impl Default for GenSpec {
    fn default() -> Self {
        GenSpec {
            kind: GenKind::Random,
            seed: 0,
            jobs: [4, 10],
            machines: [2, 3],
            capacity: Some([1, 6]),
            due: [10, 40],
            mixture_eps: Some("1/4".into()),
            weights: [1, 1, 1],
            sizes: [1, 20],
            distinct_big: None,
            partition: PartitionAnswer::Yes,
        }
    }
}

impl GenSpec {
    pub fn from_toml(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        GenSpec {
            seed,
            ..self.clone()
        }
    }

    fn check(&self) -> Result<(), GenError> {
        let ok = |r: [u64; 2]| r[0] <= r[1];
        let oku = |r: [usize; 2]| r[0] <= r[1];
        if !oku(self.jobs) {
            return Err(GenError::Range("jobs"));
        }
        if !oku(self.machines) || self.machines[0] == 0 {
            return Err(GenError::Range("machines"));
        }
        if let Some(c) = self.capacity {
            if !oku(c) || c[0] == 0 {
                return Err(GenError::Range("capacity"));
            }
        }
        if !ok(self.due) || self.due[0] == 0 {
            return Err(GenError::Range("due"));
        }
        if !ok(self.sizes) || self.sizes[0] == 0 {
            return Err(GenError::Range("sizes"));
        }
        if self.weights.iter().all(|&w| w == 0) {
            return Err(GenError::Range("weights"));
        }
        if self.distinct_big == Some(0) {
            return Err(GenError::Range("distinct_big"));
        }
        Ok(())
    }

    fn eps(&self) -> Result<Option<Q>, GenError> {
        match &self.mixture_eps {
            None => Ok(None),
            Some(text) => match parse_rational(text) {
                Some(q) if q > int(0) && q < int(1) => Ok(Some(q)),
                _ => Err(GenError::Eps(text.clone())),
            },
        }
    }
}

/// Seed for trial `t` of a run seeded with `seed` (splitmix64 finalizer).
pub fn trial_seed(seed: u64, t: u64) -> u64 {
    let mut z = seed.wrapping_add(t.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generates the instance described by `spec` (either kind).
pub fn generate(spec: &GenSpec) -> Result<Instance, GenError> {
    match spec.kind {
        GenKind::Random => gen_random(spec),
        GenKind::Partition => gen_partition(spec),
    }
}

pub fn gen_random(spec: &GenSpec) -> Result<Instance, GenError> {
    spec.check()?;
    let eps = spec.eps()?;
    let mut r = rng(spec.seed);
    let n = r.random_range(spec.jobs[0]..=spec.jobs[1]);
    let m = r.random_range(spec.machines[0]..=spec.machines[1]);
    let capacity = match spec.capacity {
        None => n.max(1),
        Some([lo, hi]) => {
            let need = n.div_ceil(m).max(1);
            r.random_range(lo.max(need)..=hi.max(need))
        }
    };
    let d = r.random_range(spec.due[0]..=spec.due[1]);
    let p = match eps {
        Some(eps) => mixture_sizes(&mut r, spec, &eps, n, d),
        None => {
            let palette: Option<Vec<u64>> = spec
                .distinct_big
                .map(|k| (0..k).map(|_| r.random_range(spec.sizes[0]..=spec.sizes[1])).collect());
            (0..n)
                .map(|_| match &palette {
                    Some(values) => *pick(&mut r, values),
                    None => r.random_range(spec.sizes[0]..=spec.sizes[1]),
                })
                .collect()
        }
    };
    Ok(Instance::new(m, capacity, d, p).expect("generated data satisfies the invariants"))
}

fn pick<'a, T>(r: &mut ChaCha8Rng, values: &'a [T]) -> &'a T {
    &values[r.random_range(0..values.len())]
}

fn mixture_sizes(r: &mut ChaCha8Rng, spec: &GenSpec, eps: &Q, n: usize, d: u64) -> Vec<u64> {
    // smallest big size; small jobs exist only when this exceeds 1
    let big_lo = ceil_u64(&(eps * eps * int(d))).max(1);
    let small = (big_lo > 1).then_some((1, big_lo - 1));
    let big = (big_lo < d).then_some((big_lo, d - 1));
    let huge = Some((d, 2 * d));
    let ranges = [small, big, huge];
    let palette: Option<Vec<u64>> = match (spec.distinct_big, big) {
        (Some(k), Some((lo, hi))) => Some((0..k).map(|_| r.random_range(lo..=hi)).collect()),
        _ => None,
    };
    let total: u32 = ranges
        .iter()
        .zip(spec.weights)
        .filter(|(range, _)| range.is_some())
        .map(|(_, w)| w)
        .sum();
    (0..n)
        .map(|_| {
            let mut ticket = r.random_range(0..total.max(1));
            let class = ranges
                .iter()
                .zip(spec.weights)
                .enumerate()
                .filter(|(_, (range, _))| range.is_some())
                .find(|(_, (_, w))| {
                    if ticket < *w {
                        true
                    } else {
                        ticket -= w;
                        false
                    }
                })
                .map(|(k, _)| k)
                .unwrap_or(2);
            match (class, &palette) {
                (1, Some(values)) => *pick(r, values),
                _ => {
                    let (lo, hi) = ranges[class].expect("only nonempty ranges are drawn");
                    r.random_range(lo..=hi)
                }
            }
        })
        .collect()
}

/// Item sizes whose PARTITION answer is known by construction.
pub fn partition_sizes(r: &mut ChaCha8Rng, n: usize, sizes: [u64; 2], answer: PartitionAnswer) -> Result<Vec<u64>, GenError> {
    let mut items = match answer {
        PartitionAnswer::Yes => {
            if n < 2 {
                return Err(GenError::TooFewItems);
            }
            loop {
                let split = r.random_range(1..n);
                let left: Vec<u64> = (0..split).map(|_| r.random_range(sizes[0]..=sizes[1])).collect();
                let right: Vec<u64> = (split..n - 1).map(|_| r.random_range(sizes[0]..=sizes[1])).collect();
                let (a, b): (u64, u64) = (left.iter().sum(), right.iter().sum());
                if a != b {
                    let mut items = left;
                    items.extend(right);
                    items.push(a.abs_diff(b));
                    break items;
                }
            }
        }
        PartitionAnswer::No => {
            let mut items: Vec<u64> = (1..n.max(1)).map(|_| r.random_range(sizes[0]..=sizes[1])).collect();
            let rest: u64 = items.iter().sum();
            items.push(rest + 2 + 2 * r.random_range(0..=sizes[1]));
            items
        }
    };
    items.shuffle(r);
    Ok(items)
}

pub fn gen_partition(spec: &GenSpec) -> Result<Instance, GenError> {
    spec.check()?;
    let mut r = rng(spec.seed);
    let n = r.random_range(spec.jobs[0]..=spec.jobs[1]);
    let items = partition_sizes(&mut r, n, spec.sizes, spec.partition)?;
    Ok(partition_hard_instance(&items).expect("constructed sizes have an even total"))
}

/// Uniformly random feasible schedule: jobs in random order, each to a random
/// machine with a free slot.
pub fn random_schedule(inst: &Instance, r: &mut impl Rng) -> Schedule {
    let mut machines: Vec<Vec<usize>> = vec![Vec::new(); inst.machines()];
    let mut order: Vec<usize> = (0..inst.job_count()).collect();
    order.shuffle(r);
    for j in order {
        let open: Vec<usize> = (0..inst.machines())
            .filter(|&i| machines[i].len() < inst.capacity())
            .collect();
        machines[open[r.random_range(0..open.len())]].push(j);
    }
    Schedule::new(machines)
}

/// Random leveling instance (zero demands allowed) with a feasible packed
/// placement.
pub fn random_leveling_pair(r: &mut impl Rng) -> (LevelingInstance, LevelingSchedule) {
    let machines = r.random_range(1..=4);
    let slots = r.random_range(1..=5);
    let n = r.random_range(0..=machines * slots);
    let limit = r.random_range(0..=12);
    let demands: Vec<u64> = (0..n).map(|_| r.random_range(0..=8)).collect();
    let inst = LevelingInstance::new(machines, slots, limit, demands).expect("n ≤ machines·C");
    let mut used = vec![0usize; slots];
    let mut placements = Vec::with_capacity(n);
    for _ in 0..n {
        let open: Vec<usize> = (0..slots).filter(|&t| used[t] < machines).collect();
        let slot = open[r.random_range(0..open.len())];
        placements.push(Placement {
            machine: used[slot],
            slot,
        });
        used[slot] += 1;
    }
    (inst, LevelingSchedule::new(placements))
}
