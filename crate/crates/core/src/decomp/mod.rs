//! Exhaustive search for additive decompositions `S = A + B`,
//! self-decompositions `S = A + A`, and maximal packings `A + B ⊆ S`.
//!
//! All three share one normalization: a pair `(A, B)` may be translated to
//! `(A + b₀, B − b₀)` and swapped, so the search fixes `0 ∈ B` and
//! `#B ≤ #A`. With `0 ∈ B`, the best partner for a given `B` is the
//! maximal companion `⋂_{b∈B}(S − b)`, so only `B` is enumerated.

mod budget;
mod query;
mod search;

pub use query::{DecompQuery, DecompReport, SearchLimits, SearchMode, SearchStatus, Witness};
pub use search::{
    find_additive_decompositions, find_self_decomposition, max_companion, max_packing, run,
};
