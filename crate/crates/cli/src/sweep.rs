//! Seeded experiment grids.
//!
//! Instances are generated sequentially from a ChaCha8 stream seeded with
//! the 64-bit sweep seed, so a `(config, seed)` pair always yields the same
//! task list in the same order regardless of worker count.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use ffdecomp_core::charsum::Poly;
use ffdecomp_core::decomp::{SearchLimits, SearchMode};
use ffdecomp_core::experiments::DEFAULT_EPSILON;
use ffdecomp_core::fpcore::arith::{divisors, gcd, primes_in};
use ffdecomp_core::fpcore::MAX_MODULUS;
use rand::seq::index::sample;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::error::CliError;
use crate::family::SetSpec;
use crate::task::Task;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    Search,
    Packing,
    Weil,
    Vinogradov,
    Karatsuba,
    Wsum,
    Nsum,
    Shkvyu,
    Growth,
    Interval,
    Bourgain,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub experiment: Experiment,
    /// Inclusive prime range.
    pub p_range: [u64; 2],
    #[serde(default)]
    pub d_filter: DFilter,
    /// Random instances in total; for `shkvyu`, shift tuples per `(p, d, m)`.
    #[serde(default = "one")]
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
    /// Target family for `search`; bare `subgroup` iterates over `d`.
    #[serde(default)]
    pub set: Option<SetSpec>,
    #[serde(default)]
    pub mode: Option<SearchMode>,
    #[serde(default)]
    pub min_size: Option<usize>,
    #[serde(default)]
    pub node_budget: Option<u64>,
    #[serde(default)]
    pub time_budget: Option<f64>,
    #[serde(default)]
    pub max_b_size: Option<usize>,
    #[serde(default)]
    pub nu: Option<u32>,
    #[serde(default)]
    pub m: Option<Vec<usize>>,
    #[serde(default)]
    pub max_degree: Option<usize>,
    /// Largest random set size (`A`, `B`, or shift set).
    #[serde(default)]
    pub max_set: Option<usize>,
    #[serde(default)]
    pub epsilon: Option<f64>,
}

fn one() -> usize {
    1
}

impl SweepConfig {
    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        let config_err = |message: String| CliError::Config {
            path: path.to_path_buf(),
            message,
        };
        let text = fs::read_to_string(path).map_err(|e| config_err(e.to_string()))?;
        serde_json::from_str(&text).map_err(|e| config_err(e.to_string()))
    }

    fn limits(&self) -> SearchLimits {
        let mut limits = SearchLimits::default();
        if self.node_budget.is_some() {
            limits.node_budget = self.node_budget;
        }
        if self.time_budget.is_some() {
            limits.time_budget = self.time_budget;
        }
        limits.max_b_size = self.max_b_size;
        limits
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Cmp {
    Ge,
    Le,
    Eq,
}

impl Cmp {
    fn holds(self, x: u64, k: u64) -> bool {
        match self {
            Cmp::Ge => x >= k,
            Cmp::Le => x <= k,
            Cmp::Eq => x == k,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Clause {
    /// `2 ≤ d < p − 1`
    Nontrivial,
    Index(Cmp, u64),
    /// on `#G_d = (p − 1)/d`
    Order(Cmp, u64),
}

/// Conjunction of clauses on the subgroup index `d`, e.g.
/// `"nontrivial"`, `"d>=2"`, `"d=3"`, `"order<=30"` or `"d>=2,order>=4"`.
/// Empty or `"all"` accepts every divisor of `p − 1`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(try_from = "String")]
pub struct DFilter {
    clauses: Vec<Clause>,
}

impl DFilter {
    pub fn accepts(&self, p: u64, d: u64) -> bool {
        let order = (p - 1) / d;
        self.clauses.iter().all(|c| match *c {
            Clause::Nontrivial => d >= 2 && d < p - 1,
            Clause::Index(cmp, k) => cmp.holds(d, k),
            Clause::Order(cmp, k) => cmp.holds(order, k),
        })
    }
}

impl FromStr for DFilter {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let mut clauses = Vec::new();
        for raw in s.split(',').map(str::trim).filter(|c| !c.is_empty()) {
            if raw == "all" {
                continue;
            }
            if raw == "nontrivial" {
                clauses.push(Clause::Nontrivial);
                continue;
            }
            let (lhs, cmp, rhs) = [(">=", Cmp::Ge), ("<=", Cmp::Le), ("=", Cmp::Eq)]
                .iter()
                .find_map(|(op, cmp)| raw.split_once(op).map(|(l, r)| (l.trim(), *cmp, r.trim())))
                .ok_or_else(|| format!("d_filter: cannot parse clause `{raw}`"))?;
            let k: u64 = rhs
                .parse()
                .map_err(|_| format!("d_filter: bad number in `{raw}`"))?;
            clauses.push(match lhs {
                "d" => Clause::Index(cmp, k),
                "order" => Clause::Order(cmp, k),
                _ => return Err(format!("d_filter: unknown quantity `{lhs}` in `{raw}`")),
            });
        }
        Ok(DFilter { clauses })
    }
}

impl TryFrom<String> for DFilter {
    type Error = String;

    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

fn random_subset(rng: &mut ChaCha8Rng, lo: u32, hi: u32, size: usize) -> Vec<u32> {
    let mut v: Vec<u32> = sample(rng, (hi - lo) as usize, size)
        .into_iter()
        .map(|i| lo + i as u32)
        .collect();
    v.sort_unstable();
    v
}

fn random_size(rng: &mut ChaCha8Rng, max: usize, available: usize) -> usize {
    rng.gen_range(1..=max.min(available).max(1))
}

/// Build the ordered task list for `config`.
pub fn plan(config: &SweepConfig, seed: u64, path: &Path) -> Result<Vec<Task>, CliError> {
    let config_err = |message: String| CliError::Config {
        path: path.to_path_buf(),
        message,
    };
    let [lo, hi] = config.p_range;
    if lo > hi {
        return Err(config_err(format!("p_range: empty range [{lo}, {hi}]")));
    }
    if hi >= MAX_MODULUS {
        return Err(config_err(format!(
            "p_range: upper end must be below {MAX_MODULUS}"
        )));
    }
    let primes: Vec<u32> = primes_in(lo.max(3), hi)
        .into_iter()
        .map(|p| p as u32)
        .collect();
    if primes.is_empty() {
        return Err(config_err(format!(
            "p_range: no primes >= 3 in [{lo}, {hi}]"
        )));
    }
    let exp = config.experiment;
    let min_index = match exp {
        Experiment::Packing
        | Experiment::Weil
        | Experiment::Vinogradov
        | Experiment::Karatsuba
        | Experiment::Wsum
        | Experiment::Nsum => 2,
        _ => 1,
    };
    let min_order = if exp == Experiment::Growth { 2 } else { 1 };
    let grid: Vec<(u32, u32)> = primes
        .iter()
        .flat_map(|&p| {
            divisors(p as u64 - 1)
                .into_iter()
                .filter(move |&d| {
                    d >= min_index
                        && (p as u64 - 1) / d >= min_order
                        && config.d_filter.accepts(p as u64, d)
                })
                .map(move |d| (p, d as u32))
        })
        .collect();
    let needs_grid = !matches!(
        exp,
        Experiment::Interval | Experiment::Bourgain | Experiment::Search
    );
    if needs_grid && grid.is_empty() {
        return Err(config_err(
            "d_filter: no admissible (p, d) pairs in range".into(),
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tasks = Vec::new();
    let limits = config.limits();
    match exp {
        Experiment::Search => {
            let set = config
                .set
                .clone()
                .ok_or_else(|| config_err("set: required for the search experiment".into()))?;
            let mode = config.mode.unwrap_or(SearchMode::Decomposition);
            let search = |p, set| Task::Search {
                p,
                set,
                mode,
                min_size: config.min_size,
                limits: limits.clone(),
            };
            if set == SetSpec::Subgroup(None) {
                if grid.is_empty() {
                    return Err(config_err(
                        "d_filter: no admissible (p, d) pairs in range".into(),
                    ));
                }
                tasks.extend(
                    grid.iter()
                        .map(|&(p, d)| search(p, SetSpec::Subgroup(Some(d)))),
                );
            } else {
                tasks.extend(primes.iter().map(|&p| search(p, set.clone())));
            }
        }
        Experiment::Packing => {
            tasks.extend(grid.iter().map(|&(p, d)| Task::Packing {
                p,
                d,
                limits: limits.clone(),
            }));
        }
        Experiment::Growth => {
            let epsilon = config.epsilon.unwrap_or(DEFAULT_EPSILON);
            tasks.extend(grid.iter().map(|&(p, d)| Task::Growth { p, d, epsilon }));
        }
        Experiment::Shkvyu => {
            let ms = config.m.clone().unwrap_or_else(|| vec![2, 3]);
            if ms.iter().any(|&m| m < 2) {
                return Err(config_err("m: every entry must be >= 2".into()));
            }
            for &(p, d) in &grid {
                for &m in &ms {
                    if m > p as usize - 1 {
                        continue;
                    }
                    for _ in 0..config.samples {
                        let shifts = random_subset(&mut rng, 1, p, m);
                        tasks.push(Task::Shkvyu { p, d, shifts });
                    }
                }
            }
        }
        Experiment::Weil
        | Experiment::Vinogradov
        | Experiment::Karatsuba
        | Experiment::Wsum
        | Experiment::Nsum => {
            for i in 0..config.samples {
                let (p, d) = grid[rng.gen_range(0..grid.len())];
                let j = rng.gen_range(1..d);
                tasks.push(match exp {
                    Experiment::Weil => {
                        let max_degree = config.max_degree.unwrap_or(6).min(p as usize - 1).max(1);
                        let order = d / gcd(j as u64, d as u64) as u32;
                        let poly = random_admissible_poly(&mut rng, p, max_degree, order);
                        Task::Weil { p, d, j, poly }
                    }
                    Experiment::Vinogradov | Experiment::Karatsuba => {
                        let max = config.max_set.unwrap_or(16);
                        let sa = random_size(&mut rng, max, p as usize);
                        let a = random_subset(&mut rng, 0, p, sa);
                        let sb = random_size(&mut rng, max, p as usize);
                        let b = random_subset(&mut rng, 0, p, sb);
                        if exp == Experiment::Vinogradov {
                            Task::Vinogradov { p, d, j, a, b }
                        } else {
                            let nu = config.nu.unwrap_or(1 + (i % 3) as u32);
                            Task::Karatsuba { p, d, j, nu, a, b }
                        }
                    }
                    _ => {
                        let size = random_size(&mut rng, config.max_set.unwrap_or(6), p as usize);
                        let b = random_subset(&mut rng, 0, p, size);
                        if exp == Experiment::Wsum {
                            Task::Wsum { p, d, b }
                        } else {
                            Task::Nsum { p, d, b }
                        }
                    }
                });
            }
        }
        Experiment::Interval => {
            for _ in 0..config.samples {
                let p = primes[rng.gen_range(0..primes.len())];
                let max = config.max_set.unwrap_or(6);
                let m = rng.gen_range(0..p as u64);
                let n = rng.gen_range(1..=p as u64);
                let sa = random_size(&mut rng, max, p as usize - 1);
                let a = random_subset(&mut rng, 1, p, sa);
                let sb = random_size(&mut rng, max, p as usize - 1);
                let b = random_subset(&mut rng, 1, p, sb);
                tasks.push(Task::Interval { p, m, n, a, b });
            }
        }
        Experiment::Bourgain => {
            for _ in 0..config.samples {
                let p = primes[rng.gen_range(0..primes.len())];
                let max = config.max_set.unwrap_or(6);
                let draw = move |rng: &mut ChaCha8Rng| loop {
                    let size = random_size(rng, max, p as usize);
                    let s = random_subset(rng, 0, p, size);
                    if s != [0] {
                        return s;
                    }
                };
                let a = draw(&mut rng);
                let b = draw(&mut rng);
                tasks.push(Task::Bourgain { p, a, b });
            }
        }
    }
    Ok(tasks)
}

/// A random polynomial of degree `1..=max_degree` that is not a constant
/// times an `order`-th power, after at most 64 draws.
fn random_admissible_poly(rng: &mut ChaCha8Rng, p: u32, max_degree: usize, order: u32) -> Vec<u32> {
    let mut coeffs = Vec::new();
    for _ in 0..64 {
        let degree = rng.gen_range(1..=max_degree);
        coeffs = (0..degree).map(|_| rng.gen_range(0..p)).collect();
        coeffs.push(rng.gen_range(1..p));
        let poly = Poly::new(p, coeffs.clone());
        if matches!(poly.perfect_power_root(order), Ok(None)) {
            break;
        }
    }
    coeffs
}
