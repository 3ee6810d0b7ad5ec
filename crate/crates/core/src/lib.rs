//! Additive decompositions of multiplicative subgroups of prime fields.
//!
//! The crate is organised bottom-up:
//!
//! - [`fpcore`]: prime fields with a primitive root and a full discrete-log
//!   table, multiplicative subgroups `G_d`, and a small on-disk field cache.
//! - [`setalg`]: dense bitset subsets of `Z_n` with word-parallel sumsets,
//!   product sets, dilations and shifted intersections.
//! - [`charsum`]: multiplicative characters, exact root-of-unity tallies,
//!   polynomials over `F_p` and the character-sum bound verifiers.
//! - [`decomp`]: the pruned exhaustive search for decompositions `S = A + B`,
//!   self-decompositions `S = A + A` and maximal packings `A + B ⊆ S`.
//! - [`experiments`]: one report per bound or identity, built on the modules above.

pub mod charsum;
pub mod decomp;
pub mod error;
pub mod experiments;
pub mod fpcore;
pub mod report;
pub mod setalg;

pub use error::{Error, Result};
pub use fpcore::{PrimeField, Subgroup};
pub use report::BoundReport;
pub use setalg::FpSet;
