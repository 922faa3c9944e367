use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use latework::algorithms::{lpt_schedule, ptas_early, ptas_shifted_late, AlgoError};
use latework::classify::Limits;
use latework::experiment::{run_experiment, ExperimentConfig};
use latework::format::{
    parse_instance, parse_leveling_schedule, parse_schedule, write_instance, write_leveling_instance,
    write_leveling_schedule, write_schedule, AnyInstance,
};
use latework::generate::{generate, GenKind, GenSpec};
use latework::leveling::{leveling_above, leveling_below};
use latework::model::{objectives, Instance, Schedule};
use latework::oracle::{exact_best_early, DEFAULT_BUDGET};
use latework::rational::{format_rational, int, parse_rational, Q};
use latework::reduction::{
    instance_from_leveling, instance_to_leveling, schedule_from_leveling, schedule_to_leveling,
};

/// Exit code for an enumeration-guard trip.
const GUARD_EXIT: u8 = 2;

#[derive(Parser)]
#[command(name = "latework", version, about = "Early/late work scheduling with machine capacities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    PtasEarly,
    PtasLate,
    Ls,
    Exact,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Leveling,
    Latework,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Random,
    Partition,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance and write the schedule.
    Solve {
        #[arg(long, value_enum)]
        algo: Algo,
        #[arg(long, default_value = "1/4", value_parser = rational)]
        eps: Q,
        #[arg(long, default_value = "1", value_parser = rational)]
        c: Q,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// State budget of the exact search.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Map an instance (and optionally a schedule) to the other problem.
    Transform {
        #[arg(long, value_enum)]
        to: Target,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Schedule for the input instance to map along.
        #[arg(long)]
        schedule: Option<PathBuf>,
        /// Where to write the mapped schedule (stdout when absent).
        #[arg(long)]
        schedule_out: Option<PathBuf>,
    },
    /// Generate an instance.
    Gen {
        #[arg(long, value_enum, default_value = "random")]
        kind: Kind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// TOML generator spec; `--kind` and `--seed` override its fields.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare the approximation schemes against the exact optimum.
    Bench {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value = "1/4", value_delimiter = ',', value_parser = rational)]
        eps: Vec<Q>,
        #[arg(long, default_value = "1", value_parser = rational)]
        c: Q,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        csv: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
}

fn rational(text: &str) -> Result<Q, String> {
    parse_rational(text).ok_or_else(|| format!("`{text}` is not a rational number"))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn heuristic(inst: &Instance, algo: Algo, eps: &Q, c: &Q, limits: &Limits) -> Result<Schedule, AlgoError> {
    Ok(match algo {
        Algo::PtasEarly => ptas_early(inst, eps, limits)?.schedule,
        Algo::PtasLate => ptas_shifted_late(inst, eps, c, limits)?.schedule,
        Algo::Ls | Algo::Exact => lpt_schedule(inst),
    })
}

fn cmd_solve(algo: Algo, eps: Q, c: Q, input: &Path, out: &Path, budget: u64) -> Result<ExitCode> {
    let limits = Limits::from_env();
    let parsed = parse_instance(&read(input)?)?;
    let (inst, leveling) = match &parsed {
        AnyInstance::LateWork(i) => (i.clone(), None),
        AnyInstance::Leveling(l) => (instance_from_leveling(l)?, Some(l)),
    };
    if matches!(algo, Algo::Exact) {
        let r = exact_best_early(&inst, budget).map_err(|e| anyhow!(e))?;
        return finish(&inst, leveling, &r.witness, &c, out);
    }
    match heuristic(&inst, algo, &eps, &c, &limits) {
        Ok(s) => finish(&inst, leveling, &s, &c, out),
        Err(e) if e.is_guard() => {
            eprintln!("error: {e}");
            Ok(ExitCode::from(GUARD_EXIT))
        }
        Err(e) => Err(e.into()),
    }
}

fn finish(
    inst: &Instance,
    leveling: Option<&latework::LevelingInstance>,
    s: &Schedule,
    c: &Q,
    out: &Path,
) -> Result<ExitCode> {
    let obj = objectives(inst, s, c)?;
    match leveling {
        None => write(out, &write_schedule(s))?,
        Some(l) => {
            let ls = schedule_to_leveling(inst, s)?;
            debug_assert_eq!(leveling_above(l, &ls)?, obj.late);
            write(out, &write_leveling_schedule(&ls))?;
        }
    }
    println!("X={} Y={} shifted={}", obj.early, obj.late, format_rational(&obj.shifted));
    Ok(ExitCode::SUCCESS)
}

fn cmd_transform(
    to: Target,
    input: &Path,
    out: &Path,
    schedule: Option<&Path>,
    schedule_out: Option<&Path>,
) -> Result<ExitCode> {
    let parsed = parse_instance(&read(input)?)?;
    let mapped_schedule = match (to, &parsed) {
        (Target::Leveling, AnyInstance::LateWork(inst)) => {
            let l = instance_to_leveling(inst);
            write(out, &write_leveling_instance(&l))?;
            match schedule {
                Some(p) => {
                    let s = parse_schedule(&read(p)?)?;
                    let ls = schedule_to_leveling(inst, &s)?;
                    eprintln!("late work {} = usage above limit {}", latework::late_work(inst, &s)?, leveling_above(&l, &ls)?);
                    Some(write_leveling_schedule(&ls))
                }
                None => None,
            }
        }
        (Target::Latework, AnyInstance::Leveling(l)) => {
            let inst = instance_from_leveling(l)?;
            write(out, &write_instance(&inst))?;
            match schedule {
                Some(p) => {
                    let ls = parse_leveling_schedule(&read(p)?)?;
                    let s = schedule_from_leveling(l, &ls)?;
                    eprintln!("usage below limit {} = early work {}", leveling_below(l, &ls)?, latework::early_work(&inst, &s)?);
                    Some(write_schedule(&s))
                }
                None => None,
            }
        }
        (Target::Leveling, AnyInstance::Leveling(_)) => bail!("input is already a leveling instance"),
        (Target::Latework, AnyInstance::LateWork(_)) => bail!("input is already a late-work instance"),
    };
    if let Some(text) = mapped_schedule {
        match schedule_out {
            Some(p) => write(p, &text)?,
            None => print!("{text}"),
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_gen(kind: Kind, seed: u64, spec: Option<&Path>, out: &Path) -> Result<ExitCode> {
    let base = match spec {
        Some(p) => GenSpec::from_toml(&read(p)?)?,
        None => GenSpec::default(),
    };
    let spec = GenSpec {
        kind: match kind {
            Kind::Random => GenKind::Random,
            Kind::Partition => GenKind::Partition,
        },
        seed,
        ..base
    };
    write(out, &write_instance(&generate(&spec)?))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_bench(spec: &Path, eps: Vec<Q>, c: Q, trials: usize, csv: &Path, budget: u64) -> Result<ExitCode> {
    if c <= int(0) {
        bail!("c must be positive");
    }
    let spec = GenSpec::from_toml(&read(spec)?)?;
    let config = ExperimentConfig {
        eps,
        c,
        trials,
        oracle_budget: budget,
        limits: Limits::from_env(),
    };
    let report = run_experiment(&spec, &config)?;
    write(csv, &report.to_csv())?;
    let evaluated = report.rows.iter().filter(|r| !r.skipped()).count();
    let failed = report.rows.iter().filter(|r| !r.skipped() && !r.guarantee_ok).count();
    println!(
        "rows={} evaluated={} skipped={} violations={}",
        report.rows.len(),
        evaluated,
        report.rows.len() - evaluated,
        failed
    );
    Ok(if report.verdict() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve {
            algo,
            eps,
            c,
            input,
            out,
            budget,
        } => cmd_solve(algo, eps, c, &input, &out, budget),
        Command::Transform {
            to,
            input,
            out,
            schedule,
            schedule_out,
        } => cmd_transform(to, &input, &out, schedule.as_deref(), schedule_out.as_deref()),
        Command::Gen { kind, seed, spec, out } => cmd_gen(kind, seed, spec.as_deref(), &out),
        Command::Bench {
            spec,
            eps,
            c,
            trials,
            csv,
            budget,
        } => cmd_bench(&spec, eps, c, trials, &csv, budget),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
