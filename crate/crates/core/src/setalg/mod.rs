//! Dense bitset subsets of `Z_p` and the set algebra built on them.

mod bits;
mod fpset;
mod ops;

pub use fpset::{FpSet, Iter};
pub use ops::{growth_product, growth_product_by_conjugation, productset_in};
