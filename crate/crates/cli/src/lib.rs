//! Command-line front end for `ffdecomp-core`: named set families, single
//! experiments, seeded sweeps and JSONL/CSV output.

pub mod cli;
pub mod error;
pub mod family;
pub mod record;
pub mod sweep;
pub mod task;

use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use ffdecomp_core::charsum::Poly;
use ffdecomp_core::decomp::SearchMode;
use ffdecomp_core::PrimeField;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use cli::{Cli, Command};
pub use error::CliError;
pub use record::{Format, Outcome, Payload, RunRecord, Summary, SCHEMA_VERSION};

use crate::family::SetSpec;
use crate::task::{execute_all, Fields, Task};

/// Run a parsed invocation and return the process exit code.
pub fn run(cli: Cli) -> i32 {
    match execute(cli) {
        Ok(summary) => summary.exit_code(),
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn check_prime(p: u64) -> Result<u32, CliError> {
    PrimeField::check_modulus(p).map_err(|e| CliError::usage(format!("--prime {p}: {e}")))?;
    Ok(p as u32)
}

fn elements(flag: &str, spec: &SetSpec, field: &PrimeField) -> Result<Vec<u32>, CliError> {
    spec.build(field)
        .map(|s| s.to_vec())
        .map_err(|e| CliError::usage(format!("{flag}: {e}")))
}

fn default_cache_dir() -> Option<PathBuf> {
    let base = std::env::var_os("XDG_CACHE_HOME")
        .map(PathBuf::from)
        .or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache")))?;
    Some(base.join("ffdecomp"))
}

fn build_tasks(command: &Command, seed: u64) -> Result<Vec<Task>, CliError> {
    let task = match command {
        Command::Search {
            prime,
            set,
            d,
            mode,
            min_size,
            budget,
        } => Task::Search {
            p: check_prime(*prime)?,
            set: set.clone().with_index(*d)?,
            mode: SearchMode::from(*mode),
            min_size: *min_size,
            limits: budget.limits(),
        },
        Command::Packing {
            prime,
            d,
            set,
            budget,
        } => {
            let p = check_prime(*prime)?;
            match (d, set) {
                (Some(d), None) => Task::Packing {
                    p,
                    d: *d,
                    limits: budget.limits(),
                },
                (None, Some(set)) => Task::Search {
                    p,
                    set: set.clone().with_index(None)?,
                    mode: SearchMode::Packing,
                    min_size: None,
                    limits: budget.limits(),
                },
                _ => return Err(CliError::usage("packing needs exactly one of --d or --set")),
            }
        }
        Command::Weil {
            prime,
            d,
            chi,
            poly,
        } => {
            let p = check_prime(*prime)?;
            let poly = Poly::parse(p, poly).map_err(|e| CliError::usage(format!("--poly: {e}")))?;
            Task::Weil {
                p,
                d: *d,
                j: *chi,
                poly: poly.coeffs().to_vec(),
            }
        }
        Command::Vinogradov {
            prime,
            d,
            chi,
            a_set,
            b_set,
        } => {
            let p = check_prime(*prime)?;
            let field = PrimeField::new(p as u64)?;
            Task::Vinogradov {
                p,
                d: *d,
                j: *chi,
                a: elements("--a-set", a_set, &field)?,
                b: elements("--b-set", b_set, &field)?,
            }
        }
        Command::Karatsuba {
            prime,
            d,
            chi,
            nu,
            a_set,
            b_set,
        } => {
            let p = check_prime(*prime)?;
            let field = PrimeField::new(p as u64)?;
            Task::Karatsuba {
                p,
                d: *d,
                j: *chi,
                nu: *nu,
                a: elements("--a-set", a_set, &field)?,
                b: elements("--b-set", b_set, &field)?,
            }
        }
        Command::Wsum { prime, d, shifts } => Task::Wsum {
            p: check_prime(*prime)?,
            d: *d,
            b: shifts.0.clone(),
        },
        Command::Nsum { prime, d, shifts } => Task::Nsum {
            p: check_prime(*prime)?,
            d: *d,
            b: shifts.0.clone(),
        },
        Command::Shkvyu {
            prime,
            d,
            m,
            shifts,
        } => {
            let p = check_prime(*prime)?;
            let shifts = match (shifts, m) {
                (Some(s), Some(m)) if s.0.len() != *m => {
                    return Err(CliError::usage(format!(
                        "--m {m} does not match the {} values given to --shifts",
                        s.0.len()
                    )))
                }
                (Some(s), _) => s.0.clone(),
                (None, Some(m)) => {
                    if *m == 0 || *m > p as usize - 1 {
                        return Err(CliError::usage(format!("--m must lie in 1..={}", p - 1)));
                    }
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    let mut s: Vec<u32> = sample(&mut rng, p as usize - 1, *m)
                        .into_iter()
                        .map(|i| i as u32 + 1)
                        .collect();
                    s.sort_unstable();
                    s
                }
                (None, None) => return Err(CliError::usage("shkvyu needs --shifts or --m")),
            };
            Task::Shkvyu { p, d: *d, shifts }
        }
        Command::Growth { prime, d, epsilon } => Task::Growth {
            p: check_prime(*prime)?,
            d: *d,
            epsilon: *epsilon,
        },
        Command::Interval {
            prime,
            m,
            n,
            a_set,
            b_set,
        } => {
            let p = check_prime(*prime)?;
            let field = PrimeField::new(p as u64)?;
            Task::Interval {
                p,
                m: *m,
                n: *n,
                a: elements("--a-set", a_set, &field)?,
                b: elements("--b-set", b_set, &field)?,
            }
        }
        Command::Bourgain {
            prime,
            a_set,
            b_set,
        } => {
            let p = check_prime(*prime)?;
            let field = PrimeField::new(p as u64)?;
            Task::Bourgain {
                p,
                a: elements("--a-set", a_set, &field)?,
                b: elements("--b-set", b_set, &field)?,
            }
        }
        Command::Sweep { .. } => unreachable!("sweeps are planned from their config"),
    };
    Ok(vec![task])
}

fn execute(cli: Cli) -> Result<Summary, CliError> {
    let common = &cli.common;
    if common.workers == 0 {
        return Err(CliError::usage("--workers must be at least 1"));
    }
    let (tasks, seed) = match &cli.command {
        Command::Sweep { config } => {
            let parsed = sweep::SweepConfig::from_path(config)?;
            let seed = common.seed.unwrap_or(parsed.seed);
            (sweep::plan(&parsed, seed, config)?, seed)
        }
        other => {
            let seed = common.seed.unwrap_or(0);
            (build_tasks(other, seed)?, seed)
        }
    };

    let cache_dir = if common.no_cache {
        None
    } else {
        common.cache_dir.clone().or_else(default_cache_dir)
    };
    let fields = Fields::load(tasks.iter().map(Task::prime), cache_dir.as_ref())?;
    let payloads = match tasks.as_slice() {
        [single] => vec![single.execute(fields.get(single.prime()), common.workers)?],
        many => execute_all(many, &fields, common.workers)?,
    };

    let timestamp = if common.reproducible {
        0
    } else {
        SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_secs())
    };
    let mut sink = record::RecordSink::open(common.out.as_deref(), common.format)?;
    let mut summary = Summary::default();
    let command = cli.command.name();
    for mut payload in payloads {
        if common.reproducible {
            payload.strip_timing();
        }
        summary.add(payload.outcome());
        sink.write(&RunRecord {
            schema_version: SCHEMA_VERSION,
            command: command.to_owned(),
            timestamp,
            seed,
            payload,
        })?;
    }
    sink.finish()?;
    eprintln!(
        "{command}: {} records, {} passed, {} failed, {} budget exceeded",
        summary.records, summary.passed, summary.failed, summary.budget_exceeded
    );
    Ok(summary)
}
