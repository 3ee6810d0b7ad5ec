use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::CyclotomicReducer;

/// Exact accumulator for sums of `d`-th roots of unity.
///
/// `counts[r]` is the number of summands equal to `ζ_d^r`; `zeros` counts
/// summands whose argument was zero. Floating point enters only when the
/// complex value is extracted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootOfUnityTally {
    d: u32,
    counts: Vec<u64>,
    zeros: u64,
}

impl RootOfUnityTally {
    pub fn new(d: u32) -> Self {
        assert!(d > 0, "root-of-unity order must be positive");
        RootOfUnityTally {
            d,
            counts: vec![0; d as usize],
            zeros: 0,
        }
    }

    #[inline]
    pub fn add(&mut self, value: Option<u32>) {
        match value {
            Some(r) => self.counts[(r % self.d) as usize] += 1,
            None => self.zeros += 1,
        }
    }

    pub fn merge(&mut self, other: &RootOfUnityTally) {
        assert_eq!(self.d, other.d, "tallies over different root orders");
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.zeros += other.zeros;
    }

    pub fn order(&self) -> u32 {
        self.d
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn zeros(&self) -> u64 {
        self.zeros
    }

    /// Number of summands, zero arguments included.
    pub fn total(&self) -> u64 {
        self.counts.iter().sum::<u64>() + self.zeros
    }

    pub fn value(&self) -> Complex64 {
        let step = std::f64::consts::TAU / self.d as f64;
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(r, &c)| Complex64::from_polar(c as f64, step * r as f64))
            .sum()
    }

    pub fn magnitude(&self) -> f64 {
        self.value().norm()
    }

    /// The value as an integer when `d ≤ 2`, where every root is ±1.
    pub fn real_integer(&self) -> Option<i64> {
        match self.d {
            1 => Some(self.counts[0] as i64),
            2 => Some(self.counts[0] as i64 - self.counts[1] as i64),
            _ => None,
        }
    }

    /// Exact value when it is a rational integer, via reduction modulo the
    /// `d`-th cyclotomic polynomial; `None` when the value is not in `Z`.
    pub fn exact_integer(&self, reducer: &mut CyclotomicReducer) -> Option<i64> {
        let reduced = reducer.reduce(self.d, &self.counts);
        if reduced.iter().skip(1).all(|&c| c == 0) {
            Some(reduced.first().copied().unwrap_or(0))
        } else {
            None
        }
    }
}
