use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::setalg::FpSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    /// `S = A + B` with `min{#A, #B} ≥ min_size`.
    Decomposition,
    /// `S = A + A`.
    SelfDecomposition,
    /// maximize `#A·#B` subject to `A + B ⊆ S`.
    Packing,
}

impl SearchMode {
    pub fn name(self) -> &'static str {
        match self {
            SearchMode::Decomposition => "decomposition",
            SearchMode::SelfDecomposition => "self_decomposition",
            SearchMode::Packing => "packing",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    Found,
    ExhaustedNone,
    BudgetExceeded,
}

impl SearchStatus {
    pub fn name(self) -> &'static str {
        match self {
            SearchStatus::Found => "found",
            SearchStatus::ExhaustedNone => "exhausted_none",
            SearchStatus::BudgetExceeded => "budget_exceeded",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchLimits {
    /// Total node budget across all workers; `None` is unlimited.
    pub node_budget: Option<u64>,
    /// Wall-clock budget in seconds; `None` is unlimited.
    pub time_budget: Option<f64>,
    /// Cap on `#B` (on `#A` in self-decomposition mode).
    pub max_b_size: Option<usize>,
    /// Witnesses to collect per search partition before it stops early.
    pub max_witnesses: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            node_budget: Some(100_000_000),
            time_budget: Some(300.0),
            max_b_size: None,
            max_witnesses: 1,
        }
    }
}

impl SearchLimits {
    pub fn unbounded() -> Self {
        SearchLimits {
            node_budget: None,
            time_budget: None,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone)]
pub struct DecompQuery {
    pub target: FpSet,
    pub mode: SearchMode,
    /// Lower bound on `min{#A, #B}`; 2 makes a decomposition nontrivial.
    pub min_size: usize,
    pub limits: SearchLimits,
    /// Worker threads; partitions are merged in a fixed order regardless.
    pub workers: usize,
}

impl DecompQuery {
    fn with_mode(target: FpSet, mode: SearchMode, min_size: usize) -> Self {
        DecompQuery {
            target,
            mode,
            min_size,
            limits: SearchLimits::default(),
            workers: 1,
        }
    }

    pub fn decomposition(target: FpSet) -> Self {
        Self::with_mode(target, SearchMode::Decomposition, 2)
    }

    /// `A + A = S` has no triviality notion, so any nonempty `A` counts.
    pub fn self_decomposition(target: FpSet) -> Self {
        Self::with_mode(target, SearchMode::SelfDecomposition, 1)
    }

    pub fn packing(target: FpSet) -> Self {
        Self::with_mode(target, SearchMode::Packing, 1)
    }

    pub fn min_size(mut self, min_size: usize) -> Self {
        self.min_size = min_size;
        self
    }

    pub fn limits(mut self, limits: SearchLimits) -> Self {
        self.limits = limits;
        self
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidArgument(m.to_owned()));
        if self.target.is_empty() {
            return bad("target set must be nonempty");
        }
        if self.min_size == 0 {
            return bad("min_size must be >= 1");
        }
        if self.workers == 0 {
            return bad("workers must be >= 1");
        }
        if self.limits.node_budget == Some(0) {
            return bad("node budget must be positive");
        }
        if let Some(t) = self.limits.time_budget {
            if !(t > 0.0) {
                return bad("time budget must be positive");
            }
        }
        if self.limits.max_witnesses == 0 {
            return bad("max_witnesses must be >= 1");
        }
        Ok(())
    }
}

/// `(A, B)` with both sets sorted ascending. In self-decomposition mode
/// `a == b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub a: Vec<u32>,
    pub b: Vec<u32>,
}

impl Witness {
    pub fn product(&self) -> u64 {
        self.a.len() as u64 * self.b.len() as u64
    }

    pub(crate) fn sort_key(&self) -> (Option<u32>, usize, &[u32], &[u32]) {
        (self.a.first().copied(), self.a.len(), &self.a, &self.b)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompReport {
    pub mode: SearchMode,
    pub modulus: u32,
    pub target_size: usize,
    pub min_size: usize,
    pub status: SearchStatus,
    pub witnesses: Vec<Witness>,
    /// Packing mode: the largest `#A·#B` found.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub best_product: Option<u64>,
    pub nodes_explored: u64,
    pub elapsed: f64,
}
