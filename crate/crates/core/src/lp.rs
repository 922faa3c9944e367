//! The small-job LP relaxation and an exact rational simplex that returns a
//! basic optimal solution.
//!
//! ```text
//! max  Σ_{i≥1} Σ_j p_j x_ij
//!      Σ_j p_j x_ij ≤ P_i        (i = 1..m)
//!      Σ_j x_ij     ≤ n_i        (i = 1..m)
//!      Σ_{i≥0} x_ij = 1          (each small job j)
//!      x ≥ 0
//! ```
//!
//! Row `0` of `x` is "not completed before d". The slack columns and the
//! `x_0j` columns form an identity, so the simplex starts from a basic
//! feasible point without a phase one. Bland's rule keeps it finite under
//! the heavy degeneracy these LPs have.

use num_traits::{One, Signed, Zero};

use crate::rational::{int, Q};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmallLp {
    /// Processing time of each small job, in column order.
    pub p: Vec<u64>,
    /// Idle time before `d` on each machine.
    pub time_caps: Vec<u64>,
    /// Remaining job slots on each machine.
    pub count_caps: Vec<usize>,
}

impl SmallLp {
    pub fn machines(&self) -> usize {
        self.time_caps.len()
    }

    pub fn jobs(&self) -> usize {
        self.p.len()
    }

    /// Constraint rows: `n_small + 2m`.
    pub fn row_count(&self) -> usize {
        self.jobs() + 2 * self.machines()
    }
}

/// `x[i][j]` for `i in 0..=m`; `x[0][j]` is the unscheduled share of job `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasicLpSolution {
    pub x: Vec<Vec<Q>>,
    pub objective: Q,
}

impl BasicLpSolution {
    /// Machine (1-based, as in `x`) that job `j` is fully assigned to, if any.
    pub fn integral_machine(&self, j: usize) -> Option<usize> {
        (1..self.x.len()).find(|&i| self.x[i][j].is_one())
    }

    /// Jobs with no entry equal to one.
    pub fn fractional_jobs(&self) -> Vec<usize> {
        let n = self.x.first().map_or(0, Vec::len);
        (0..n)
            .filter(|&j| !self.x.iter().any(|row| row[j].is_one()))
            .collect()
    }

    pub fn support_size(&self) -> usize {
        self.x.iter().flatten().filter(|v| !v.is_zero()).count()
    }

    /// Objective value of the jobs assigned integrally to a real machine.
    pub fn integral_value(&self, lp: &SmallLp) -> u64 {
        (0..lp.jobs())
            .filter(|&j| self.integral_machine(j).is_some())
            .map(|j| lp.p[j])
            .sum()
    }

    /// Exact check of every row of the LP.
    pub fn is_feasible(&self, lp: &SmallLp) -> bool {
        let m = lp.machines();
        if self.x.len() != m + 1 || self.x.iter().any(|r| r.len() != lp.jobs()) {
            return false;
        }
        if self.x.iter().flatten().any(Signed::is_negative) {
            return false;
        }
        for i in 1..=m {
            let time: Q = (0..lp.jobs()).map(|j| &self.x[i][j] * int(lp.p[j])).sum();
            let count: Q = self.x[i].iter().sum();
            if time > int(lp.time_caps[i - 1]) || count > int(lp.count_caps[i - 1] as u64) {
                return false;
            }
        }
        (0..lp.jobs()).all(|j| self.x.iter().map(|r| &r[j]).sum::<Q>().is_one())
    }

    pub fn objective_of(&self, lp: &SmallLp) -> Q {
        (1..self.x.len())
            .flat_map(|i| (0..lp.jobs()).map(move |j| (i, j)))
            .map(|(i, j)| &self.x[i][j] * int(lp.p[j]))
            .sum()
    }
}

struct Tableau {
    rows: Vec<Vec<Q>>,
    rhs: Vec<Q>,
    /// Reduced costs `c_j - c_B B⁻¹ A_j`.
    reduced: Vec<Q>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.rows[row][col].recip();
        let nonzero: Vec<usize> = (0..self.rows[row].len())
            .filter(|&k| !self.rows[row][k].is_zero())
            .collect();
        for &k in &nonzero {
            self.rows[row][k] *= &inv;
        }
        self.rhs[row] *= &inv;
        let pivot_row = self.rows[row].clone();
        let pivot_rhs = self.rhs[row].clone();
        for r in 0..self.rows.len() {
            if r == row || self.rows[r][col].is_zero() {
                continue;
            }
            let factor = self.rows[r][col].clone();
            for &k in &nonzero {
                let delta = &factor * &pivot_row[k];
                self.rows[r][k] -= delta;
            }
            self.rhs[r] -= &factor * &pivot_rhs;
        }
        if !self.reduced[col].is_zero() {
            let factor = self.reduced[col].clone();
            for &k in &nonzero {
                let delta = &factor * &pivot_row[k];
                self.reduced[k] -= delta;
            }
        }
        self.basis[row] = col;
    }
}

/// Exact primal simplex with Bland's rule; the result is a vertex of the
/// feasible region and optimal.
pub fn solve_small_lp(lp: &SmallLp) -> BasicLpSolution {
    let m = lp.machines();
    let s = lp.jobs();
    let x_cols = (m + 1) * s;
    let cols = x_cols + 2 * m;
    let col = |i: usize, j: usize| i * s + j;
    let rows_n = lp.row_count();

    let mut rows = vec![vec![Q::zero(); cols]; rows_n];
    let mut rhs = vec![Q::zero(); rows_n];
    let mut basis = vec![0; rows_n];
    for i in 0..m {
        for j in 0..s {
            rows[i][col(i + 1, j)] = int(lp.p[j]);
            rows[m + i][col(i + 1, j)] = Q::one();
        }
        rows[i][x_cols + i] = Q::one();
        rhs[i] = int(lp.time_caps[i]);
        basis[i] = x_cols + i;
        rows[m + i][x_cols + m + i] = Q::one();
        rhs[m + i] = int(lp.count_caps[i] as u64);
        basis[m + i] = x_cols + m + i;
    }
    for j in 0..s {
        let r = 2 * m + j;
        for i in 0..=m {
            rows[r][col(i, j)] = Q::one();
        }
        rhs[r] = Q::one();
        basis[r] = col(0, j);
    }
    let mut reduced = vec![Q::zero(); cols];
    for i in 1..=m {
        for j in 0..s {
            reduced[col(i, j)] = int(lp.p[j]);
        }
    }
    let mut t = Tableau {
        rows,
        rhs,
        reduced,
        basis,
    };

    // Bland: lowest-index improving column, lowest-index leaving variable
    // among ratio-test ties.
    while let Some(enter) = (0..cols).find(|&k| t.reduced[k].is_positive()) {
        let mut leave: Option<(usize, Q)> = None;
        for r in 0..rows_n {
            let a = &t.rows[r][enter];
            if !a.is_positive() {
                continue;
            }
            let ratio = &t.rhs[r] / a;
            let better = match &leave {
                None => true,
                Some((best_r, best)) => ratio < *best || (ratio == *best && t.basis[r] < t.basis[*best_r]),
            };
            if better {
                leave = Some((r, ratio));
            }
        }
        let (row, _) = leave.expect("LP is bounded: objective never exceeds Σ p_j");
        t.pivot(row, enter);
    }

    let mut x = vec![vec![Q::zero(); s]; m + 1];
    for (r, &b) in t.basis.iter().enumerate() {
        if b < x_cols {
            x[b / s.max(1)][b % s.max(1)] = t.rhs[r].clone();
        }
    }
    let sol = BasicLpSolution { x, objective: Q::zero() };
    let objective = sol.objective_of(lp);
    BasicLpSolution { objective, ..sol }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn no_small_jobs() {
        let lp = SmallLp {
            p: vec![],
            time_caps: vec![3, 4],
            count_caps: vec![1, 1],
        };
        let sol = solve_small_lp(&lp);
        assert_eq!(sol.objective, Q::zero());
        assert!(sol.fractional_jobs().is_empty());
    }

    #[test]
    fn single_obvious_optimum() {
        let lp = SmallLp {
            p: vec![2],
            time_caps: vec![2],
            count_caps: vec![1],
        };
        let sol = solve_small_lp(&lp);
        assert_eq!(sol.objective, int(2));
        assert_eq!(sol.integral_machine(0), Some(1));
    }

    #[test]
    fn one_machine_half_job() {
        let lp = SmallLp {
            p: vec![2, 2],
            time_caps: vec![3],
            count_caps: vec![2],
        };
        let sol = solve_small_lp(&lp);
        assert!(sol.is_feasible(&lp));
        assert_eq!(sol.objective, int(3));
        assert_eq!(sol.integral_machine(0), Some(1));
        assert_eq!(sol.x[1][1], ratio(1, 2));
        assert_eq!(sol.fractional_jobs(), vec![1]);
        assert_eq!(sol.integral_value(&lp), 2);
        assert!(sol.support_size() <= lp.row_count());
    }

    #[test]
    fn zero_idle_time_keeps_everything_unscheduled() {
        let lp = SmallLp {
            p: vec![1, 2, 3],
            time_caps: vec![0, 0],
            count_caps: vec![3, 3],
        };
        let sol = solve_small_lp(&lp);
        assert_eq!(sol.objective, Q::zero());
        assert!((0..3).all(|j| sol.x[0][j].is_one()));
    }

    #[test]
    fn count_caps_bind() {
        // two machines, one slot each, jobs 5,4,3 and plenty of time
        let lp = SmallLp {
            p: vec![5, 4, 3],
            time_caps: vec![10, 10],
            count_caps: vec![1, 1],
        };
        let sol = solve_small_lp(&lp);
        assert_eq!(sol.objective, int(9));
        assert!(sol.is_feasible(&lp));
    }
}
