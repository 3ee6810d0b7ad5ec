use std::borrow::Cow;
use std::time::Instant;

use rayon::prelude::*;

use super::budget::{Budget, NodeCounter};
use super::{DecompQuery, DecompReport, SearchMode, SearchStatus, Witness};
use crate::error::{Error, Result};
use crate::setalg::FpSet;

/// Above this modulus the translates `S − c` are computed on demand instead
/// of tabulated (`p²` bits).
const SHIFT_TABLE_MAX_MODULUS: u32 = 8192;

/// `A_max(B) = ⋂_{b∈B} (S − b)`, the largest `A` with `A + B ⊆ S`.
pub fn max_companion(target: &FpSet, b: &FpSet) -> Result<FpSet> {
    if b.is_empty() {
        return Err(Error::EmptyB);
    }
    if b.modulus() != target.modulus() {
        return Err(Error::MixedModulus {
            left: target.modulus(),
            right: b.modulus(),
        });
    }
    let mut out = FpSet::full(target.modulus());
    for x in b.iter() {
        out.intersect_with(&target.translate(-(x as i64)));
    }
    Ok(out)
}

/// Dispatch on `query.mode`.
pub fn run(query: &DecompQuery) -> Result<DecompReport> {
    match query.mode {
        SearchMode::Decomposition | SearchMode::Packing => pair_search(query),
        SearchMode::SelfDecomposition => self_search(query),
    }
}

pub fn find_additive_decompositions(query: &DecompQuery) -> Result<DecompReport> {
    expect_mode(query, SearchMode::Decomposition)?;
    pair_search(query)
}

pub fn find_self_decomposition(query: &DecompQuery) -> Result<DecompReport> {
    expect_mode(query, SearchMode::SelfDecomposition)?;
    self_search(query)
}

pub fn max_packing(query: &DecompQuery) -> Result<DecompReport> {
    expect_mode(query, SearchMode::Packing)?;
    pair_search(query)
}

fn expect_mode(query: &DecompQuery, mode: SearchMode) -> Result<()> {
    if query.mode == mode {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "query mode is {}, expected {}",
            query.mode.name(),
            mode.name()
        )))
    }
}

fn in_pool<T: Send>(workers: usize, job: impl FnOnce() -> T + Send) -> Result<T> {
    if workers == 1 {
        return Ok(job());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    Ok(pool.install(job))
}

/// The translates `S − c`, tabulated for small moduli.
struct Translates<'a> {
    target: &'a FpSet,
    table: Option<Vec<FpSet>>,
}

impl<'a> Translates<'a> {
    fn new(target: &'a FpSet) -> Self {
        let p = target.modulus();
        let table = (p <= SHIFT_TABLE_MAX_MODULUS)
            .then(|| (0..p).map(|c| target.translate(-(c as i64))).collect());
        Translates { target, table }
    }

    fn down(&self, c: u32) -> Cow<'_, FpSet> {
        match &self.table {
            Some(t) => Cow::Borrowed(&t[c as usize]),
            None => Cow::Owned(self.target.translate(-(c as i64))),
        }
    }
}

#[derive(Default)]
struct PartitionOutcome {
    witnesses: Vec<Witness>,
    /// Packing: best product and its first witness in DFS order.
    best: Option<(u64, Witness)>,
    aborted: bool,
}

enum Flow {
    Continue,
    /// Enough witnesses collected in this partition.
    Stop,
    /// Budget exhausted.
    Abort,
}

struct PairSearch<'a> {
    target: &'a FpSet,
    translates: Translates<'a>,
    mode: SearchMode,
    min_size: usize,
    max_b: usize,
    max_witnesses: usize,
}

impl PairSearch<'_> {
    fn evaluate(&self, b: &[u32], a: &FpSet, out: &mut PartitionOutcome) -> Flow {
        let k = b.len();
        if k < self.min_size || a.len() < self.min_size.max(k) {
            return Flow::Continue;
        }
        match self.mode {
            SearchMode::Decomposition => {
                let bset = FpSet::from_elements(self.target.modulus(), b.iter().copied());
                if a.sumset(&bset).expect("same modulus") == *self.target {
                    out.witnesses.push(Witness {
                        a: a.to_vec(),
                        b: b.to_vec(),
                    });
                    if out.witnesses.len() >= self.max_witnesses {
                        return Flow::Stop;
                    }
                }
            }
            SearchMode::Packing => {
                let product = (a.len() * k) as u64;
                if out.best.as_ref().is_none_or(|(best, _)| product > *best) {
                    out.best = Some((
                        product,
                        Witness {
                            a: a.to_vec(),
                            b: b.to_vec(),
                        },
                    ));
                }
            }
            SearchMode::SelfDecomposition => unreachable!("handled by self_search"),
        }
        Flow::Continue
    }

    /// Candidates `c` (from `cands`) whose child companion is still large
    /// enough, with their companions, or `None` when the subtree below this
    /// node cannot contain a solution.
    fn children(
        &self,
        b: &[u32],
        a: &FpSet,
        cands: &[u32],
        out: &PartitionOutcome,
    ) -> Option<Vec<(u32, FpSet)>> {
        let k = b.len();
        if k >= self.max_b {
            return None;
        }
        let need = self.min_size.max(k + 1);
        if a.len() < need {
            return None;
        }
        let kids: Vec<(u32, FpSet)> = cands
            .iter()
            .filter_map(|&c| {
                let down = self.translates.down(c);
                if a.intersection_len(&down) < need {
                    return None;
                }
                let mut child = a.clone();
                child.intersect_with(&down);
                Some((c, child))
            })
            .collect();
        if kids.is_empty() {
            return None;
        }
        // A final B = B ∪ {c₁..c_j} has a companion of size at most the j-th
        // largest child companion size, and at least k + j elements.
        let mut sizes: Vec<usize> = kids.iter().map(|(_, s)| s.len()).collect();
        sizes.sort_unstable_by(|x, y| y.cmp(x));
        let max_j = (self.max_b - k).min(sizes.len());
        let best_reachable = (1..=max_j)
            .filter(|&j| k + j <= sizes[j - 1])
            .map(|j| ((k + j) * sizes[j - 1]) as u64)
            .max()?;
        match self.mode {
            SearchMode::Decomposition => {
                if best_reachable < self.target.len() as u64 {
                    return None;
                }
                // every s ∈ S must stay reachable as a + b
                let p = self.target.modulus();
                let reach_b =
                    FpSet::from_elements(p, b.iter().chain(kids.iter().map(|(c, _)| c)).copied());
                if !self
                    .target
                    .is_subset(&a.sumset(&reach_b).expect("same modulus"))
                {
                    return None;
                }
            }
            SearchMode::Packing => {
                if out
                    .best
                    .as_ref()
                    .is_some_and(|(best, _)| best_reachable <= *best)
                {
                    return None;
                }
            }
            SearchMode::SelfDecomposition => unreachable!(),
        }
        Some(kids)
    }

    fn dfs(
        &self,
        b: &mut Vec<u32>,
        a: &FpSet,
        cands: &[u32],
        counter: &mut NodeCounter<'_>,
        out: &mut PartitionOutcome,
    ) -> Flow {
        if !counter.tick() {
            return Flow::Abort;
        }
        if let Flow::Stop = self.evaluate(b, a, out) {
            return Flow::Stop;
        }
        let Some(kids) = self.children(b, a, cands, out) else {
            return Flow::Continue;
        };
        let order: Vec<u32> = kids.iter().map(|(c, _)| *c).collect();
        for (i, (c, child)) in kids.iter().enumerate() {
            b.push(*c);
            let flow = self.dfs(b, child, &order[i + 1..], counter, out);
            b.pop();
            if !matches!(flow, Flow::Continue) {
                return flow;
            }
        }
        Flow::Continue
    }
}

fn pair_search(query: &DecompQuery) -> Result<DecompReport> {
    query.validate()?;
    let start = Instant::now();
    let target = &query.target;
    let p = target.modulus();
    let budget = Budget::new(&query.limits, start);
    let search = PairSearch {
        target,
        translates: Translates::new(target),
        mode: query.mode,
        min_size: query.min_size,
        max_b: query.limits.max_b_size.unwrap_or(usize::MAX).max(1),
        max_witnesses: query.limits.max_witnesses,
    };

    // Root: B = {0}, companion S. Its children define the partitions.
    let mut root = PartitionOutcome::default();
    let root_b = vec![0u32];
    let all: Vec<u32> = (1..p).collect();
    let kids = {
        let mut counter = NodeCounter::new(&budget);
        counter.tick();
        let stopped = matches!(search.evaluate(&root_b, target, &mut root), Flow::Stop);
        if stopped {
            None
        } else {
            search.children(&root_b, target, &all, &root)
        }
    }
    .unwrap_or_default();
    let order: Vec<u32> = kids.iter().map(|(c, _)| *c).collect();
    let root_best = root.best.as_ref().map(|(v, _)| *v);

    let partitions: Vec<PartitionOutcome> = in_pool(query.workers, || {
        kids.par_iter()
            .enumerate()
            .map(|(i, (c, child))| {
                let mut out = PartitionOutcome::default();
                if let Some(best) = root_best {
                    // seed with the root's value so pruning starts tight;
                    // a strictly better witness replaces the placeholder
                    out.best = Some((
                        best,
                        Witness {
                            a: vec![],
                            b: vec![],
                        },
                    ));
                }
                let mut counter = NodeCounter::new(&budget);
                let mut b = vec![0, *c];
                if let Flow::Abort =
                    search.dfs(&mut b, child, &order[i + 1..], &mut counter, &mut out)
                {
                    out.aborted = true;
                }
                out
            })
            .collect()
    })?;

    let aborted = partitions.iter().any(|o| o.aborted);
    let elapsed = start.elapsed().as_secs_f64();
    let nodes = budget.total();
    let base = DecompReport {
        mode: query.mode,
        modulus: p,
        target_size: target.len(),
        min_size: query.min_size,
        status: SearchStatus::ExhaustedNone,
        witnesses: Vec::new(),
        best_product: None,
        nodes_explored: nodes,
        elapsed,
    };

    match query.mode {
        SearchMode::Decomposition => {
            let mut witnesses: Vec<Witness> = root
                .witnesses
                .into_iter()
                .chain(partitions.into_iter().flat_map(|o| o.witnesses))
                .collect();
            canonicalize(&mut witnesses);
            witnesses.truncate(query.limits.max_witnesses);
            for w in &witnesses {
                verify_witness(target, w, true)?;
            }
            let status = if !witnesses.is_empty() {
                SearchStatus::Found
            } else if aborted {
                SearchStatus::BudgetExceeded
            } else {
                SearchStatus::ExhaustedNone
            };
            Ok(DecompReport {
                status,
                witnesses,
                ..base
            })
        }
        SearchMode::Packing => {
            let mut best = root.best;
            for (value, w) in partitions.into_iter().filter_map(|o| o.best) {
                if w.a.is_empty() {
                    continue; // seeded placeholder, never improved
                }
                if best.as_ref().is_none_or(|(v, _)| value > *v) {
                    best = Some((value, w));
                }
            }
            let (status, witnesses, best_product) = match best {
                Some((value, w)) => {
                    verify_witness(target, &w, false)?;
                    let status = if aborted {
                        SearchStatus::BudgetExceeded
                    } else {
                        SearchStatus::Found
                    };
                    (status, vec![w], Some(value))
                }
                None if aborted => (SearchStatus::BudgetExceeded, vec![], None),
                None => (SearchStatus::ExhaustedNone, vec![], None),
            };
            Ok(DecompReport {
                status,
                witnesses,
                best_product,
                ..base
            })
        }
        SearchMode::SelfDecomposition => unreachable!(),
    }
}

fn self_search(query: &DecompQuery) -> Result<DecompReport> {
    query.validate()?;
    let start = Instant::now();
    let target = &query.target;
    let p = target.modulus();
    let budget = Budget::new(&query.limits, start);
    let search = SelfSearch {
        target,
        min_size: query.min_size,
        max_size: query.limits.max_b_size.unwrap_or(usize::MAX).max(1),
        max_witnesses: query.limits.max_witnesses,
    };

    // every a ∈ A needs 2a ∈ S
    let cands: Vec<u32> = (0..p)
        .filter(|&a| target.contains(((2 * a as u64) % p as u64) as u32))
        .collect();
    let mut counter = NodeCounter::new(&budget);
    counter.tick();
    let root_viable = search.viable(&FpSet::empty(p), &cands);
    drop(counter);

    let partitions: Vec<PartitionOutcome> = if root_viable {
        in_pool(query.workers, || {
            cands
                .par_iter()
                .enumerate()
                .map(|(i, &c)| {
                    let mut out = PartitionOutcome::default();
                    let mut counter = NodeCounter::new(&budget);
                    let a = FpSet::from_elements(p, [c]);
                    let sums = FpSet::from_elements(p, [(2 * c as u64 % p as u64) as u32]);
                    let next: Vec<u32> = cands[i + 1..]
                        .iter()
                        .copied()
                        .filter(|&x| target.contains(((c as u64 + x as u64) % p as u64) as u32))
                        .collect();
                    let mut elems = vec![c];
                    if let Flow::Abort =
                        search.dfs(&mut elems, &a, &sums, &next, &mut counter, &mut out)
                    {
                        out.aborted = true;
                    }
                    out
                })
                .collect()
        })?
    } else {
        Vec::new()
    };

    let aborted = partitions.iter().any(|o| o.aborted);
    let mut witnesses: Vec<Witness> = partitions.into_iter().flat_map(|o| o.witnesses).collect();
    canonicalize(&mut witnesses);
    witnesses.truncate(query.limits.max_witnesses);
    for w in &witnesses {
        verify_witness(target, w, true)?;
    }
    let status = if !witnesses.is_empty() {
        SearchStatus::Found
    } else if aborted {
        SearchStatus::BudgetExceeded
    } else {
        SearchStatus::ExhaustedNone
    };
    Ok(DecompReport {
        mode: query.mode,
        modulus: p,
        target_size: target.len(),
        min_size: query.min_size,
        status,
        witnesses,
        best_product: None,
        nodes_explored: budget.total(),
        elapsed: start.elapsed().as_secs_f64(),
    })
}

struct SelfSearch<'a> {
    target: &'a FpSet,
    min_size: usize,
    max_size: usize,
    max_witnesses: usize,
}

impl SelfSearch<'_> {
    /// Can `A ∪ C'` for some `C' ⊆ cands` still produce all of `S`?
    fn viable(&self, a: &FpSet, cands: &[u32]) -> bool {
        let k = (a.len() + cands.len()).min(self.max_size);
        if k * (k + 1) / 2 < self.target.len() {
            return false;
        }
        let mut pool = a.clone();
        for &c in cands {
            pool.insert(c);
        }
        self.target
            .is_subset(&pool.sumset(&pool).expect("same modulus"))
    }

    fn dfs(
        &self,
        elems: &mut Vec<u32>,
        a: &FpSet,
        sums: &FpSet,
        cands: &[u32],
        counter: &mut NodeCounter<'_>,
        out: &mut PartitionOutcome,
    ) -> Flow {
        if !counter.tick() {
            return Flow::Abort;
        }
        if elems.len() >= self.min_size && sums == self.target {
            out.witnesses.push(Witness {
                a: elems.clone(),
                b: elems.clone(),
            });
            if out.witnesses.len() >= self.max_witnesses {
                return Flow::Stop;
            }
        }
        if elems.len() >= self.max_size || cands.is_empty() || !self.viable(a, cands) {
            return Flow::Continue;
        }
        let p = self.target.modulus() as u64;
        for (i, &c) in cands.iter().enumerate() {
            let mut child = a.clone();
            child.insert(c);
            // (A ∪ {c}) + (A ∪ {c}) = (A + A) ∪ (A + c) ∪ {2c}
            let mut child_sums = sums.clone();
            child_sums.union_with(&a.translate(c as i64));
            child_sums.insert((2 * c as u64 % p) as u32);
            let next: Vec<u32> = cands[i + 1..]
                .iter()
                .copied()
                .filter(|&x| self.target.contains(((c as u64 + x as u64) % p) as u32))
                .collect();
            elems.push(c);
            let flow = self.dfs(elems, &child, &child_sums, &next, counter, out);
            elems.pop();
            if !matches!(flow, Flow::Continue) {
                return flow;
            }
        }
        Flow::Continue
    }
}

fn canonicalize(witnesses: &mut Vec<Witness>) {
    witnesses.sort_by(|x, y| x.sort_key().cmp(&y.sort_key()));
    witnesses.dedup();
}

/// Element-by-element check, independent of the bitset kernels.
/// `exact` demands `A + B = S`; otherwise `A + B ⊆ S`.
fn verify_witness(target: &FpSet, w: &Witness, exact: bool) -> Result<()> {
    let p = target.modulus() as usize;
    let mut hit = vec![false; p];
    for &x in &w.a {
        for &y in &w.b {
            let s = (x as usize + y as usize) % p;
            if !target.contains(s as u32) {
                return Err(Error::CorruptWitness(format!(
                    "{x} + {y} = {s} lies outside the target"
                )));
            }
            hit[s] = true;
        }
    }
    if exact {
        if let Some(s) = target.iter().find(|&s| !hit[s as usize]) {
            return Err(Error::CorruptWitness(format!(
                "{s} is not covered by A + B"
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::SearchLimits;

    fn set(p: u32, e: &[u32]) -> FpSet {
        FpSet::from_elements(p, e.iter().copied())
    }

    #[test]
    fn max_companion_examples() {
        let s = set(7, &[1, 2, 4]);
        assert_eq!(max_companion(&s, &set(7, &[0, 3])).unwrap().to_vec(), [1]);
        assert_eq!(max_companion(&s, &set(7, &[0])).unwrap(), s);
        assert_eq!(
            max_companion(&s, &set(7, &[0, 1, 3])).unwrap().to_vec(),
            [1]
        );
        assert!(matches!(
            max_companion(&s, &set(7, &[])),
            Err(Error::EmptyB)
        ));
    }

    #[test]
    fn decomposition_examples() {
        let r =
            find_additive_decompositions(&DecompQuery::decomposition(set(7, &[1, 2, 4]))).unwrap();
        assert_eq!(r.status, SearchStatus::ExhaustedNone);
        assert!(r.witnesses.is_empty());

        let r = find_additive_decompositions(&DecompQuery::decomposition(set(7, &[1, 2, 4, 5])))
            .unwrap();
        assert_eq!(r.status, SearchStatus::Found);
        assert_eq!(
            r.witnesses[0],
            Witness {
                a: vec![1, 4],
                b: vec![0, 1]
            }
        );

        let r = find_additive_decompositions(&DecompQuery::decomposition(set(11, &[3]))).unwrap();
        assert_eq!(r.status, SearchStatus::ExhaustedNone);
    }

    #[test]
    fn self_decomposition_examples() {
        let q = |e: &[u32]| DecompQuery::self_decomposition(set(7, e));
        assert_eq!(
            find_self_decomposition(&q(&[1, 2, 4])).unwrap().status,
            SearchStatus::ExhaustedNone
        );
        let r = find_self_decomposition(&q(&[0, 1, 2])).unwrap();
        assert_eq!(r.status, SearchStatus::Found);
        assert_eq!(r.witnesses[0].a, [0, 1]);
        let r = find_self_decomposition(&q(&[1])).unwrap();
        assert_eq!(r.witnesses[0].a, [4]);
    }

    #[test]
    fn packing_examples() {
        let r = max_packing(&DecompQuery::packing(set(7, &[1, 2, 4]))).unwrap();
        assert_eq!(r.status, SearchStatus::Found);
        assert_eq!(r.best_product, Some(3));
        let r = max_packing(&DecompQuery::packing(set(7, &[1, 2, 3, 4, 5, 6]))).unwrap();
        assert_eq!(r.best_product, Some(12));
        let r = max_packing(&DecompQuery::packing(set(7, &[1]))).unwrap();
        assert_eq!(r.best_product, Some(1));
        assert_eq!(
            r.witnesses[0],
            Witness {
                a: vec![1],
                b: vec![0]
            }
        );
    }

    #[test]
    fn wrong_mode_and_bad_queries() {
        let q = DecompQuery::packing(set(7, &[1]));
        assert!(find_additive_decompositions(&q).is_err());
        assert!(run(&DecompQuery::decomposition(set(7, &[]))).is_err());
        assert!(run(&DecompQuery::decomposition(set(7, &[1])).min_size(0)).is_err());
    }

    #[test]
    fn node_budget_is_reported() {
        let q =
            DecompQuery::decomposition(FpSet::from_elements(61, (1..61).filter(|x| x % 3 != 0)))
                .limits(SearchLimits {
                    node_budget: Some(10),
                    ..SearchLimits::default()
                });
        let r = run(&q).unwrap();
        assert_ne!(r.status, SearchStatus::ExhaustedNone);
    }

    #[test]
    fn corrupt_witness_is_caught() {
        let s = set(7, &[1, 2, 4]);
        let bad = Witness {
            a: vec![1, 2],
            b: vec![0, 1],
        };
        assert!(matches!(
            verify_witness(&s, &bad, false),
            Err(Error::CorruptWitness(_))
        ));
        let partial = Witness {
            a: vec![1],
            b: vec![0, 1],
        };
        assert!(verify_witness(&s, &partial, false).is_ok());
        assert!(verify_witness(&s, &partial, true).is_err());
    }
}
