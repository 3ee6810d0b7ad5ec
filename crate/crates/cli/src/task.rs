//! A fully specified unit of work and its evaluation.

use std::collections::BTreeMap;
use std::path::PathBuf;

use ffdecomp_core::charsum::{karatsuba_ratio, vinogradov_check, weil_report, Character, Poly};
use ffdecomp_core::decomp::{self, DecompQuery, SearchLimits, SearchMode};
use ffdecomp_core::experiments;
use ffdecomp_core::fpcore::FieldCache;
use ffdecomp_core::{FpSet, PrimeField};
use rayon::prelude::*;

use crate::error::CliError;
use crate::family::SetSpec;
use crate::record::Payload;

#[derive(Debug, Clone)]
pub enum Task {
    Search {
        p: u32,
        set: SetSpec,
        mode: SearchMode,
        min_size: Option<usize>,
        limits: SearchLimits,
    },
    Packing {
        p: u32,
        d: u32,
        limits: SearchLimits,
    },
    Weil {
        p: u32,
        d: u32,
        j: u32,
        poly: Vec<u32>,
    },
    Vinogradov {
        p: u32,
        d: u32,
        j: u32,
        a: Vec<u32>,
        b: Vec<u32>,
    },
    Karatsuba {
        p: u32,
        d: u32,
        j: u32,
        nu: u32,
        a: Vec<u32>,
        b: Vec<u32>,
    },
    Wsum {
        p: u32,
        d: u32,
        b: Vec<u32>,
    },
    Nsum {
        p: u32,
        d: u32,
        b: Vec<u32>,
    },
    Shkvyu {
        p: u32,
        d: u32,
        shifts: Vec<u32>,
    },
    Growth {
        p: u32,
        d: u32,
        epsilon: f64,
    },
    Interval {
        p: u32,
        m: u64,
        n: u64,
        a: Vec<u32>,
        b: Vec<u32>,
    },
    Bourgain {
        p: u32,
        a: Vec<u32>,
        b: Vec<u32>,
    },
}

impl Task {
    pub fn prime(&self) -> u32 {
        match self {
            Task::Search { p, .. }
            | Task::Packing { p, .. }
            | Task::Weil { p, .. }
            | Task::Vinogradov { p, .. }
            | Task::Karatsuba { p, .. }
            | Task::Wsum { p, .. }
            | Task::Nsum { p, .. }
            | Task::Shkvyu { p, .. }
            | Task::Growth { p, .. }
            | Task::Interval { p, .. }
            | Task::Bourgain { p, .. } => *p,
        }
    }

    /// `inner_workers` is the search fan-out used by a single task.
    pub fn execute(&self, field: &PrimeField, inner_workers: usize) -> Result<Payload, CliError> {
        let p = field.p();
        let set = |e: &[u32]| -> Result<FpSet, CliError> {
            if let Some(&bad) = e.iter().find(|&&x| x >= p) {
                return Err(CliError::usage(format!(
                    "element {bad} is not reduced modulo {p}"
                )));
            }
            Ok(FpSet::from_elements(p, e.iter().copied()))
        };
        let bound = |r: ffdecomp_core::Result<_>| Ok(Payload::BoundReport(r?));
        match self {
            Task::Search {
                set: spec,
                mode,
                min_size,
                limits,
                ..
            } => {
                let target = spec.build(field)?;
                let mut q = match mode {
                    SearchMode::Decomposition => DecompQuery::decomposition(target),
                    SearchMode::SelfDecomposition => DecompQuery::self_decomposition(target),
                    SearchMode::Packing => DecompQuery::packing(target),
                };
                if let Some(k) = min_size {
                    q = q.min_size(*k);
                }
                let q = q.limits(limits.clone()).workers(inner_workers);
                Ok(Payload::DecompReport(decomp::run(&q)?))
            }
            Task::Packing { d, limits, .. } => bound(experiments::packing_bound_harness(
                field,
                *d,
                limits.clone(),
                inner_workers,
            )),
            Task::Weil { d, j, poly, .. } => {
                let chi = Character::new(field, *d, *j)?;
                bound(weil_report(&chi, &Poly::new(p, poly.clone())))
            }
            Task::Vinogradov { d, j, a, b, .. } => {
                let chi = Character::new(field, *d, *j)?;
                bound(vinogradov_check(&chi, &set(a)?, &set(b)?))
            }
            Task::Karatsuba { d, j, nu, a, b, .. } => {
                let chi = Character::new(field, *d, *j)?;
                bound(karatsuba_ratio(&chi, &set(a)?, &set(b)?, *nu))
            }
            Task::Wsum { d, b, .. } => bound(experiments::w_identity_report(field, *d, &set(b)?)),
            Task::Nsum { d, b, .. } => bound(experiments::n_count_report(field, *d, &set(b)?)),
            Task::Shkvyu { d, shifts, .. } => bound(experiments::shkvyu_report(field, *d, shifts)),
            Task::Growth { d, epsilon, .. } => {
                bound(experiments::growth_exponent_report(field, *d, *epsilon))
            }
            Task::Interval { m, n, a, b, .. } => bound(experiments::interval_mult_report(
                p,
                *m,
                *n,
                &set(a)?,
                &set(b)?,
            )),
            Task::Bourgain { a, b, .. } => {
                bound(experiments::bourgain_report(p, &set(a)?, &set(b)?))
            }
        }
    }
}

/// Prime fields for a batch of tasks, loaded through the on-disk cache when
/// one is configured.
pub struct Fields {
    fields: BTreeMap<u32, PrimeField>,
}

impl Fields {
    pub fn load(
        primes: impl IntoIterator<Item = u32>,
        cache_dir: Option<&PathBuf>,
    ) -> Result<Self, CliError> {
        let cache = cache_dir.map(FieldCache::new);
        let mut fields = BTreeMap::new();
        for p in primes {
            if fields.contains_key(&p) {
                continue;
            }
            let field = match &cache {
                Some(c) => c.load_or_build(p as u64)?,
                None => PrimeField::new(p as u64)?,
            };
            fields.insert(p, field);
        }
        Ok(Fields { fields })
    }

    pub fn get(&self, p: u32) -> &PrimeField {
        &self.fields[&p]
    }
}

/// Evaluate `tasks` on `workers` threads; results keep task order.
pub fn execute_all(
    tasks: &[Task],
    fields: &Fields,
    workers: usize,
) -> Result<Vec<Payload>, CliError> {
    let run = || {
        tasks
            .par_iter()
            .map(|t| t.execute(fields.get(t.prime()), 1))
            .collect::<Result<Vec<_>, _>>()
    };
    if workers <= 1 {
        return tasks
            .iter()
            .map(|t| t.execute(fields.get(t.prime()), 1))
            .collect();
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::usage(format!("--workers: {e}")))?
        .install(run)
}
