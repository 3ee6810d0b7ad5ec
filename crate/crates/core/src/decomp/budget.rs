use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use super::SearchLimits;

const FLUSH_EVERY: u64 = 256;

/// Node and wall-clock budget shared by all workers of one search.
pub(crate) struct Budget {
    nodes: AtomicU64,
    limit: Option<u64>,
    deadline: Option<Instant>,
    exceeded: AtomicBool,
}

impl Budget {
    pub fn new(limits: &SearchLimits, start: Instant) -> Self {
        Budget {
            nodes: AtomicU64::new(0),
            limit: limits.node_budget,
            deadline: limits
                .time_budget
                .map(|t| start + Duration::from_secs_f64(t)),
            exceeded: AtomicBool::new(false),
        }
    }

    pub fn exceeded(&self) -> bool {
        self.exceeded.load(Ordering::Relaxed)
    }

    pub fn total(&self) -> u64 {
        self.nodes.load(Ordering::Relaxed)
    }

    fn flush(&self, n: u64) {
        let total = self.nodes.fetch_add(n, Ordering::Relaxed) + n;
        if self.limit.is_some_and(|l| total > l)
            || self.deadline.is_some_and(|d| Instant::now() >= d)
        {
            self.exceeded.store(true, Ordering::Relaxed);
        }
    }
}

/// Per-worker counter that batches updates into the shared [`Budget`].
pub(crate) struct NodeCounter<'b> {
    budget: &'b Budget,
    pending: u64,
}

impl<'b> NodeCounter<'b> {
    pub fn new(budget: &'b Budget) -> Self {
        NodeCounter { budget, pending: 0 }
    }

    /// Count one node; `false` once the budget is exhausted.
    #[inline]
    pub fn tick(&mut self) -> bool {
        self.pending += 1;
        if self.pending >= FLUSH_EVERY {
            self.budget.flush(self.pending);
            self.pending = 0;
        }
        !self.budget.exceeded()
    }
}

impl Drop for NodeCounter<'_> {
    fn drop(&mut self) {
        if self.pending > 0 {
            self.budget.flush(self.pending);
        }
    }
}
