//! Exhaustive optimum for small instances, used as ground truth.
//!
//! Early work only depends on the multiset of `(min(load, d), job count)`
//! pairs, so the search memoizes on the sorted vector of those pairs and
//! never distinguishes symmetric machines.

use std::collections::HashMap;

use thiserror::Error;

use crate::model::{Instance, Schedule};
use crate::rational::{int, Q};

pub const DEFAULT_BUDGET: u64 = 20_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("search budget of {0} states exceeded")]
    BudgetExceeded(u64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub best_x: u64,
    pub best_y: u64,
    pub witness: Schedule,
}

type Signature = Vec<(u64, usize)>;

struct Search<'a> {
    inst: &'a Instance,
    order: Vec<usize>,
    memo: HashMap<(usize, Signature), u64>,
    budget: u64,
}

impl Search<'_> {
    fn gain(&self, load: u64, job: usize) -> u64 {
        (load + self.inst.p(job)).min(self.inst.due()) - load
    }

    fn place(&self, state: &[(u64, usize)], i: usize, job: usize) -> Signature {
        let mut next = state.to_vec();
        next[i].0 = (next[i].0 + self.inst.p(job)).min(self.inst.due());
        next[i].1 += 1;
        next.sort_unstable();
        next
    }

    /// Best additional early work from job `k` on, starting in `state`.
    fn best(&mut self, k: usize, state: Signature) -> Result<u64, OracleError> {
        if k == self.order.len() {
            return Ok(0);
        }
        let key = (k, state);
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        if self.memo.len() as u64 >= self.budget {
            return Err(OracleError::BudgetExceeded(self.budget));
        }
        let state = key.1.clone();
        let job = self.order[k];
        let mut best = None;
        for i in 0..state.len() {
            if state[i].1 == self.inst.capacity() || (i > 0 && state[i] == state[i - 1]) {
                continue;
            }
            let value = self.gain(state[i].0, job) + self.best(k + 1, self.place(&state, i, job))?;
            best = Some(best.map_or(value, |b: u64| b.max(value)));
        }
        let best = best.expect("m·N ≥ n leaves a free slot");
        self.memo.insert(key, best);
        Ok(best)
    }
}

/// Maximum early work (hence minimum late work) with a witness schedule.
/// `budget` bounds the number of memoized states.
pub fn exact_best_early(inst: &Instance, budget: u64) -> Result<OracleResult, OracleError> {
    let m = inst.machines();
    let mut search = Search {
        inst,
        order: inst.lpt_order(),
        memo: HashMap::new(),
        budget,
    };
    let start: Signature = vec![(0, 0); m];
    let best_x = search.best(0, start)?;

    // Walk the memo forward on real machine indices to rebuild a witness.
    let mut machines: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut state: Vec<(u64, usize)> = vec![(0, 0); m];
    let mut remaining = best_x;
    for k in 0..search.order.len() {
        let job = search.order[k];
        let chosen = (0..m)
            .filter(|&i| state[i].1 < inst.capacity())
            .find(|&i| {
                let gain = search.gain(state[i].0, job);
                gain <= remaining && {
                    let mut next = state.clone();
                    next[i].0 = (next[i].0 + inst.p(job)).min(inst.due());
                    next[i].1 += 1;
                    next.sort_unstable();
                    search.best(k + 1, next).ok() == Some(remaining - gain)
                }
            })
            .expect("memo contains an optimal continuation");
        remaining -= search.gain(state[chosen].0, job);
        state[chosen].0 = (state[chosen].0 + inst.p(job)).min(inst.due());
        state[chosen].1 += 1;
        machines[chosen].push(job);
    }
    Ok(OracleResult {
        best_x,
        best_y: inst.p_sum() - best_x,
        witness: Schedule::new(machines),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `X* ≥ ε·m·d`: the layout algorithm's guarantee applies.
    Big,
    /// `X* < ε·m·d`: the list-scheduling guarantee applies.
    Small,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Big => "big",
            Regime::Small => "small",
        }
    }
}

pub fn exact_condition_branch(inst: &Instance, eps: &Q, result: &OracleResult) -> Regime {
    let bound = eps * int(inst.machines() as u64) * int(inst.due());
    if int(result.best_x) >= bound {
        Regime::Big
    } else {
        Regime::Small
    }
}
