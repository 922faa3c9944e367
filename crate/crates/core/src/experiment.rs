//! Oracle-versus-algorithm ratio experiments with CSV output.

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::algorithms::{ptas_early, ptas_shifted_late, shifted_from_early};
use crate::classify::Limits;
use crate::generate::{generate, trial_seed, GenError, GenSpec};
use crate::model::{early_from_loads, loads_unchecked, Instance};
use crate::oracle::{exact_best_early, exact_condition_branch, OracleResult};
use crate::rational::{format_fraction, format_rational, int, to_f64, Q};

/// One row per (trial, eps).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioRow {
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    #[serde(rename = "N")]
    pub capacity: usize,
    pub d: u64,
    pub eps: String,
    pub c: String,
    /// `big` / `small` regime, or `guard` / `oracle-budget` when skipped.
    pub branch: String,
    #[serde(rename = "oracle_X")]
    pub oracle_x: Option<u64>,
    #[serde(rename = "algo_X")]
    pub algo_x: Option<u64>,
    #[serde(rename = "ratio_X")]
    pub ratio_x: Option<String>,
    #[serde(rename = "ratio_X_float")]
    pub ratio_x_float: Option<String>,
    pub oracle_shifted: Option<String>,
    pub algo_shifted: Option<String>,
    pub ratio_shifted: Option<String>,
    pub ratio_shifted_float: Option<String>,
    pub guarantee_ok: bool,
}

impl RatioRow {
    /// Rows excluded from the verdict.
    pub fn skipped(&self) -> bool {
        self.branch == "guard" || self.branch == "oracle-budget"
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RatioReport {
    pub rows: Vec<RatioRow>,
}

impl RatioReport {
    /// No evaluated row violates its guarantee.
    pub fn verdict(&self) -> bool {
        self.rows.iter().filter(|r| !r.skipped()).all(|r| r.guarantee_ok)
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
        w.write_record(HEADER).expect("in-memory write");
        for row in &self.rows {
            w.serialize(row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ASCII output")
    }
}

pub const HEADER: [&str; 17] = [
    "seed",
    "n",
    "m",
    "N",
    "d",
    "eps",
    "c",
    "branch",
    "oracle_X",
    "algo_X",
    "ratio_X",
    "ratio_X_float",
    "oracle_shifted",
    "algo_shifted",
    "ratio_shifted",
    "ratio_shifted_float",
    "guarantee_ok",
];

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub eps: Vec<Q>,
    pub c: Q,
    pub trials: usize,
    pub oracle_budget: u64,
    pub limits: Limits,
}

fn ratio_of(num: &Q, den: &Q) -> Q {
    if den.is_zero() {
        Q::one()
    } else {
        num / den
    }
}

fn float(q: &Q) -> String {
    format!("{:.6}", to_f64(q))
}

fn row(inst: &Instance, seed: u64, eps: &Q, c: &Q, oracle: Option<&OracleResult>, limits: &Limits) -> RatioRow {
    let mut out = RatioRow {
        seed,
        n: inst.job_count(),
        m: inst.machines(),
        capacity: inst.capacity(),
        d: inst.due(),
        eps: format_rational(eps),
        c: format_rational(c),
        branch: "oracle-budget".into(),
        oracle_x: None,
        algo_x: None,
        ratio_x: None,
        ratio_x_float: None,
        oracle_shifted: None,
        algo_shifted: None,
        ratio_shifted: None,
        ratio_shifted_float: None,
        guarantee_ok: false,
    };
    let Some(oracle) = oracle else {
        return out;
    };
    let early = ptas_early(inst, eps, limits);
    let late = ptas_shifted_late(inst, eps, c, limits);
    let (early, late) = match (early, late) {
        (Ok(e), Ok(l)) => (e, l),
        _ => {
            out.branch = "guard".into();
            return out;
        }
    };
    let x = early_from_loads(&loads_unchecked(inst, &early.schedule), inst.due());
    let late_x = early_from_loads(&loads_unchecked(inst, &late.schedule), inst.due());
    let shifted = shifted_from_early(inst, late_x, c);
    let oracle_shifted = shifted_from_early(inst, oracle.best_x, c);
    let rx = ratio_of(&int(x), &int(oracle.best_x));
    let rs = ratio_of(&shifted, &oracle_shifted);

    let four_eps = int(4) * eps;
    let early_ok = int(x) >= (Q::one() - &four_eps) * int(oracle.best_x);
    let late_ok = shifted <= (Q::one() + &four_eps / c) * &oracle_shifted;

    out.branch = exact_condition_branch(inst, eps, oracle).as_str().into();
    out.oracle_x = Some(oracle.best_x);
    out.algo_x = Some(x);
    out.ratio_x_float = Some(float(&rx));
    out.ratio_x = Some(format_fraction(&rx));
    out.oracle_shifted = Some(format_rational(&oracle_shifted));
    out.algo_shifted = Some(format_rational(&shifted));
    out.ratio_shifted_float = Some(float(&rs));
    out.ratio_shifted = Some(format_fraction(&rs));
    out.guarantee_ok = early_ok && late_ok;
    out
}

/// Runs `trials` generated instances through the oracle and both combined
/// schemes for every eps. Trials run in parallel; rows come out in trial
/// order, then eps order.
pub fn run_experiment(spec: &GenSpec, config: &ExperimentConfig) -> Result<RatioReport, GenError> {
    let per_trial: Vec<Vec<RatioRow>> = (0..config.trials as u64)
        .into_par_iter()
        .map(|t| {
            let seed = trial_seed(spec.seed, t);
            let inst = generate(&spec.with_seed(seed))?;
            let oracle = exact_best_early(&inst, config.oracle_budget).ok();
            Ok(config
                .eps
                .iter()
                .map(|eps| row(&inst, seed, eps, &config.c, oracle.as_ref(), &config.limits))
                .collect())
        })
        .collect::<Result<_, GenError>>()?;
    Ok(RatioReport {
        rows: per_trial.into_iter().flatten().collect(),
    })
}
