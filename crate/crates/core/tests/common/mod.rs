//! Reference implementations shared by the integration tests. Nothing here
//! calls into the library's solvers, so they serve as independent oracles.

#![allow(dead_code)]

use latework::lp::SmallLp;
use latework::{Instance, Schedule, Q};
use num_traits::{One, Signed, Zero};

/// Loads recomputed from scratch; `None` when `s` is not a valid schedule.
pub fn loads(inst: &Instance, s: &Schedule) -> Option<Vec<u64>> {
    if s.machine_count() != inst.machines() {
        return None;
    }
    let mut seen = vec![false; inst.job_count()];
    let mut out = Vec::with_capacity(inst.machines());
    for seq in s.machines() {
        if seq.len() > inst.capacity() {
            return None;
        }
        let mut load = 0;
        for &j in seq {
            if j >= seen.len() || std::mem::replace(&mut seen[j], true) {
                return None;
            }
            load += inst.processing_times()[j];
        }
        out.push(load);
    }
    seen.iter().all(|&b| b).then_some(out)
}

pub fn early(inst: &Instance, s: &Schedule) -> u64 {
    loads(inst, s)
        .expect("valid schedule")
        .iter()
        .map(|&l| l.min(inst.due()))
        .sum()
}

pub fn late(inst: &Instance, s: &Schedule) -> u64 {
    loads(inst, s)
        .expect("valid schedule")
        .iter()
        .map(|&l| l.saturating_sub(inst.due()))
        .sum()
}

/// Best early work by trying every job-to-machine map (`m^n` of them).
pub fn brute_force_best_early(inst: &Instance) -> u64 {
    fn go(inst: &Instance, j: usize, loads: &mut [u64], counts: &mut [usize]) -> u64 {
        if j == inst.job_count() {
            return loads.iter().map(|&l| l.min(inst.due())).sum();
        }
        let mut best = 0;
        for i in 0..loads.len() {
            if counts[i] == inst.capacity() {
                continue;
            }
            loads[i] += inst.processing_times()[j];
            counts[i] += 1;
            best = best.max(go(inst, j + 1, loads, counts));
            loads[i] -= inst.processing_times()[j];
            counts[i] -= 1;
        }
        best
    }
    let m = inst.machines();
    go(inst, 0, &mut vec![0; m], &mut vec![0; m])
}

fn q(v: u64) -> Q {
    Q::from_integer(v.into())
}

/// Solves `a·y = b` by Gauss-Jordan elimination; `None` when singular.
fn solve_square(mut a: Vec<Vec<Q>>, mut b: Vec<Q>) -> Option<Vec<Q>> {
    let k = b.len();
    for col in 0..k {
        let piv = (col..k).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].recip();
        for v in &mut a[col][col..] {
            *v *= &inv;
        }
        b[col] = &b[col] * &inv;
        let pivot_row = a[col].clone();
        for r in 0..k {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for (v, p) in a[r][col..].iter_mut().zip(&pivot_row[col..]) {
                    *v -= &f * p;
                }
                let d = &f * &b[col];
                b[r] -= d;
            }
        }
    }
    Some(b)
}

fn subsets(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut dyn FnMut(&[usize])) {
    if cur.len() == k {
        out(cur);
        return;
    }
    for i in start..n {
        if n - i < k - cur.len() {
            break;
        }
        cur.push(i);
        subsets(n, k, i + 1, cur, out);
        cur.pop();
    }
}

/// LP optimum by vertex enumeration over the variables `y_ij = x_ij`
/// (`i ≥ 1`), with `x_0j` eliminated as a slack of `Σ_i y_ij ≤ 1`.
/// Every vertex is the unique solution of some set of `m·s` tight
/// inequalities; the optimum is attained at one of them.
pub fn lp_optimum_by_vertices(lp: &SmallLp) -> Q {
    let (m, s) = (lp.machines(), lp.jobs());
    let k = m * s;
    if k == 0 {
        return Q::zero();
    }
    let var = |i: usize, j: usize| i * s + j;
    // rows as (coefficients, rhs) of `row·y ≤ rhs`
    let mut rows: Vec<(Vec<Q>, Q)> = Vec::new();
    for j in 0..s {
        let mut r = vec![Q::zero(); k];
        for i in 0..m {
            r[var(i, j)] = Q::one();
        }
        rows.push((r, Q::one()));
    }
    for i in 0..m {
        let mut time = vec![Q::zero(); k];
        let mut count = vec![Q::zero(); k];
        for j in 0..s {
            time[var(i, j)] = q(lp.p[j]);
            count[var(i, j)] = Q::one();
        }
        rows.push((time, q(lp.time_caps[i])));
        rows.push((count, q(lp.count_caps[i] as u64)));
    }
    for v in 0..k {
        let mut r = vec![Q::zero(); k];
        r[v] = -Q::one();
        rows.push((r, Q::zero()));
    }
    let objective: Vec<Q> = (0..k).map(|v| q(lp.p[v % s])).collect();
    let mut best: Option<Q> = None;
    subsets(rows.len(), k, 0, &mut Vec::new(), &mut |pick| {
        let a = pick.iter().map(|&r| rows[r].0.clone()).collect();
        let b = pick.iter().map(|&r| rows[r].1.clone()).collect();
        let Some(y) = solve_square(a, b) else { return };
        let feasible = rows.iter().all(|(r, rhs)| {
            let lhs: Q = r.iter().zip(&y).map(|(c, v)| c * v).sum();
            lhs <= *rhs
        });
        if feasible {
            let value: Q = objective.iter().zip(&y).map(|(c, v)| c * v).sum();
            if best.as_ref().is_none_or(|b| value > *b) {
                best = Some(value);
            }
        }
    });
    // y = 0 is feasible, so some vertex exists
    best.expect("bounded nonempty polytope has a vertex")
}

/// True when `v` lies in `[0, 1]`.
pub fn unit(v: &Q) -> bool {
    !v.is_negative() && *v <= Q::one()
}
