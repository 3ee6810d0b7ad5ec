use std::fmt;

use super::arith::{factorize, is_prime, pow_mod};
use crate::error::{Error, Result};

/// Exclusive upper bound on the modulus; keeps the dlog table under ~8 MB.
pub const MAX_MODULUS: u64 = 1 << 20;

/// A prime field `F_p` together with its smallest primitive root `g` and the
/// full tables `x ↦ log_g x` and `k ↦ g^k`.
///
/// Immutable once built.
#[derive(Clone)]
pub struct PrimeField {
    p: u32,
    g: u32,
    /// `dlog[x]` for `x ∈ 1..p`; slot 0 is unused.
    dlog: Vec<u32>,
    /// `exp[k] = g^k` for `k ∈ 0..p-1`.
    exp: Vec<u32>,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        Self::check_modulus(p)?;
        let g = smallest_primitive_root(p);
        let (dlog, exp) = build_tables(p as u32, g as u32);
        Ok(PrimeField {
            p: p as u32,
            g: g as u32,
            dlog,
            exp,
        })
    }

    /// Accepts primes `3 ≤ p < 2^20`.
    pub fn check_modulus(p: u64) -> Result<()> {
        if p >= MAX_MODULUS {
            return Err(Error::ModulusTooLarge(p));
        }
        if p < 3 || !is_prime(p) {
            return Err(Error::CompositeModulus(p));
        }
        Ok(())
    }

    /// Rebuild from a stored dlog table, validating every invariant.
    pub(crate) fn from_dlog_table(p: u32, g: u32, dlog: Vec<u32>) -> Option<Self> {
        if Self::check_modulus(p as u64).is_err() || dlog.len() != p as usize || g == 0 || g >= p {
            return None;
        }
        let n = (p - 1) as usize;
        let mut exp = vec![u32::MAX; n];
        for x in 1..p {
            let k = dlog[x as usize] as usize;
            if k >= n || exp[k] != u32::MAX {
                return None;
            }
            exp[k] = x;
        }
        if exp[0] != 1 {
            return None;
        }
        for k in 0..n {
            let next = exp[(k + 1) % n];
            if (exp[k] as u64 * g as u64 % p as u64) as u32 != next {
                return None;
            }
        }
        Some(PrimeField { p, g, dlog, exp })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    /// The smallest primitive root modulo `p`.
    #[inline]
    pub fn generator(&self) -> u32 {
        self.g
    }

    /// Order of the multiplicative group, `p − 1`.
    #[inline]
    pub fn group_order(&self) -> u32 {
        self.p - 1
    }

    pub fn dlog(&self, x: u32) -> Result<u32> {
        let x = x % self.p;
        if x == 0 {
            Err(Error::ZeroHasNoLog)
        } else {
            Ok(self.dlog[x as usize])
        }
    }

    /// Table lookup without the zero check; `x` must lie in `1..p`.
    #[inline]
    pub(crate) fn dlog_unchecked(&self, x: u32) -> u32 {
        debug_assert!(x != 0 && x < self.p);
        self.dlog[x as usize]
    }

    /// `g^k`, with `k` taken modulo `p − 1`.
    #[inline]
    pub fn exp(&self, k: u64) -> u32 {
        self.exp[(k % (self.p as u64 - 1)) as usize]
    }

    pub(crate) fn dlog_table(&self) -> &[u32] {
        &self.dlog
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.p as u64 - (b % self.p) as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.sub(0, a)
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        (a as u64 * b as u64 % self.p as u64) as u32
    }

    pub fn pow(&self, x: u32, e: u64) -> u32 {
        pow_mod(x as u64, e, self.p as u64) as u32
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, x: u32) -> Option<u32> {
        let x = x % self.p;
        if x == 0 {
            return None;
        }
        let k = self.dlog[x as usize] as u64;
        Some(self.exp((self.p as u64 - 1 - k) % (self.p as u64 - 1)))
    }

    /// Reduce an arbitrary signed integer into `0..p`.
    #[inline]
    pub fn reduce(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }
}

impl fmt::Debug for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PrimeField")
            .field("p", &self.p)
            .field("g", &self.g)
            .finish_non_exhaustive()
    }
}

impl PartialEq for PrimeField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.g == other.g
    }
}

impl Eq for PrimeField {}

/// Ascending scan; `g` is primitive iff `g^((p−1)/q) ≠ 1` for each prime `q | p−1`.
fn smallest_primitive_root(p: u64) -> u64 {
    let primes: Vec<u64> = factorize(p - 1).into_iter().map(|(q, _)| q).collect();
    (2..p)
        .find(|&g| primes.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1))
        // p = 3 hits g = 2; every prime has a primitive root.
        .expect("prime modulus has a primitive root")
}

fn build_tables(p: u32, g: u32) -> (Vec<u32>, Vec<u32>) {
    let n = (p - 1) as usize;
    let mut dlog = vec![0u32; p as usize];
    let mut exp = vec![0u32; n];
    let mut x = 1u64;
    for (k, slot) in exp.iter_mut().enumerate() {
        *slot = x as u32;
        dlog[x as usize] = k as u32;
        x = x * g as u64 % p as u64;
    }
    (dlog, exp)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Oracle: order of `g` by repeated multiplication.
    fn order(g: u64, p: u64) -> u64 {
        let mut x = g % p;
        let mut k = 1;
        while x != 1 {
            x = x * g % p;
            k += 1;
        }
        k
    }

    fn brute_smallest_root(p: u64) -> u64 {
        (2..p).find(|&g| order(g, p) == p - 1).unwrap()
    }

    #[test]
    fn smallest_primitive_roots() {
        assert_eq!(PrimeField::new(7).unwrap().generator(), 3);
        assert_eq!(PrimeField::new(13).unwrap().generator(), 2);
        assert_eq!(PrimeField::new(3).unwrap().generator(), 2);
        for p in [5u64, 11, 23, 31, 41, 191, 409, 499, 997] {
            assert_eq!(
                PrimeField::new(p).unwrap().generator() as u64,
                brute_smallest_root(p),
                "p = {p}"
            );
        }
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            PrimeField::new(9),
            Err(Error::CompositeModulus(9))
        ));
        assert!(matches!(
            PrimeField::new(1),
            Err(Error::CompositeModulus(1))
        ));
        assert!(matches!(
            PrimeField::new(2),
            Err(Error::CompositeModulus(2))
        ));
        assert!(matches!(
            PrimeField::new(1_048_583),
            Err(Error::ModulusTooLarge(_))
        ));
    }

    #[test]
    fn dlog_examples() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.dlog(6).unwrap(), 3);
        assert_eq!(f.dlog(1).unwrap(), 0);
        assert!(matches!(f.dlog(0), Err(Error::ZeroHasNoLog)));
    }

    #[test]
    fn dlog_round_trip_all_small_primes() {
        for p in super::super::arith::primes_in(3, 499) {
            let f = PrimeField::new(p).unwrap();
            let mut seen = vec![false; p as usize - 1];
            for x in 1..p as u32 {
                let k = f.dlog(x).unwrap();
                assert!(!seen[k as usize]);
                seen[k as usize] = true;
                assert_eq!(f.pow(f.generator(), k as u64), x);
            }
        }
    }

    #[test]
    fn inverses() {
        let f = PrimeField::new(101).unwrap();
        assert_eq!(f.inv(0), None);
        for x in 1..101 {
            assert_eq!(f.mul(x, f.inv(x).unwrap()), 1);
        }
    }

    #[test]
    fn table_rebuild_rejects_tampering() {
        let f = PrimeField::new(13).unwrap();
        let dlog = f.dlog_table().to_vec();
        assert_eq!(PrimeField::from_dlog_table(13, 2, dlog.clone()).unwrap(), f);
        let mut bad = dlog.clone();
        bad.swap(3, 4);
        assert!(PrimeField::from_dlog_table(13, 2, bad).is_none());
        assert!(PrimeField::from_dlog_table(13, 6, dlog).is_none());
    }
}
