//! Multiplicative characters of `F_p^*`, exact character-sum tallies and the
//! bound verifiers built on them.

mod bounds;
mod character;
mod cyclotomic;
mod poly;
mod tally;

pub use bounds::{
    interval_exp_sum, karatsuba_envelope, karatsuba_ratio, vinogradov_check, weil_report,
    LINEAR_SUM_TOLERANCE, WEIL_TOLERANCE,
};
pub use character::{double_char_sum, indicator_tally, poly_char_sum, Character};
pub use cyclotomic::CyclotomicReducer;
pub use poly::Poly;
pub use tally::RootOfUnityTally;
