//! Prime fields, discrete logarithms and the subgroups `G_d` of `d`-th powers.

pub mod arith;
mod cache;
mod field;
mod subgroup;

pub use cache::{FieldCache, CACHE_VERSION};
pub use field::{PrimeField, MAX_MODULUS};
pub use subgroup::{primitive_roots, Subgroup};
