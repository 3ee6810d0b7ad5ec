use std::fmt;
use std::str::FromStr;

use super::bits::{mask_tail, rotate_or_into, words_for, WORD};
use crate::error::{Error, Result};

/// A subset of `Z_n` stored as a dense bit-vector of length `n`.
///
/// For field work `n` is the prime `p`; the product-set kernel also uses
/// sets over `Z_{p−1}` (discrete-log space). Bits at positions `>= n` are
/// always clear, so derived equality is set equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpSet {
    modulus: u32,
    words: Vec<u64>,
}

impl FpSet {
    pub fn empty(modulus: u32) -> Self {
        assert!(modulus > 0, "modulus must be positive");
        FpSet {
            modulus,
            words: vec![0; words_for(modulus as usize)],
        }
    }

    /// All of `Z_n`.
    pub fn full(modulus: u32) -> Self {
        let mut s = Self::empty(modulus);
        s.words.fill(!0);
        mask_tail(&mut s.words, modulus as usize);
        s
    }

    /// Elements are reduced modulo `modulus`.
    pub fn from_elements(modulus: u32, elems: impl IntoIterator<Item = u32>) -> Self {
        let mut s = Self::empty(modulus);
        for e in elems {
            s.insert(e % modulus);
        }
        s
    }

    /// `{m, m+1, …, m+n−1}` reduced modulo `modulus`.
    pub fn interval(modulus: u32, start: u64, len: u64) -> Self {
        let m = modulus as u64;
        Self::from_elements(modulus, (0..len.min(m)).map(|i| ((start + i) % m) as u32))
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    #[inline]
    pub fn contains(&self, x: u32) -> bool {
        x < self.modulus && self.words[x as usize / WORD] >> (x as usize % WORD) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, x: u32) {
        assert!(
            x < self.modulus,
            "{x} out of range for modulus {}",
            self.modulus
        );
        self.words[x as usize / WORD] |= 1 << (x as usize % WORD);
    }

    #[inline]
    pub fn remove(&mut self, x: u32) {
        if x < self.modulus {
            self.words[x as usize / WORD] &= !(1 << (x as usize % WORD));
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.modulus as usize
    }

    /// Elements in ascending order.
    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            idx: 0,
            cur: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.iter().collect()
    }

    pub fn min(&self) -> Option<u32> {
        self.iter().next()
    }

    pub fn is_subset(&self, other: &FpSet) -> bool {
        self.modulus == other.modulus
            && self
                .words
                .iter()
                .zip(&other.words)
                .all(|(a, b)| a & !b == 0)
    }

    fn check_same(&self, other: &FpSet) -> Result<()> {
        if self.modulus == other.modulus {
            Ok(())
        } else {
            Err(Error::MixedModulus {
                left: self.modulus,
                right: other.modulus,
            })
        }
    }

    /// In-place intersection. Panics on mixed moduli.
    pub fn intersect_with(&mut self, other: &FpSet) {
        assert_eq!(self.modulus, other.modulus, "mixed moduli");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    /// In-place union. Panics on mixed moduli.
    pub fn union_with(&mut self, other: &FpSet) {
        assert_eq!(self.modulus, other.modulus, "mixed moduli");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersection(&self, other: &FpSet) -> Result<FpSet> {
        self.check_same(other)?;
        let mut out = self.clone();
        out.intersect_with(other);
        Ok(out)
    }

    pub fn union(&self, other: &FpSet) -> Result<FpSet> {
        self.check_same(other)?;
        let mut out = self.clone();
        out.union_with(other);
        Ok(out)
    }

    /// Size of the intersection without materializing it.
    #[inline]
    pub fn intersection_len(&self, other: &FpSet) -> usize {
        debug_assert_eq!(self.modulus, other.modulus);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// `S + t`.
    pub fn translate(&self, t: i64) -> FpSet {
        let t = t.rem_euclid(self.modulus as i64) as usize;
        let mut out = FpSet::empty(self.modulus);
        rotate_or_into(&mut out.words, &self.words, t, self.modulus as usize);
        out
    }

    /// `−S`.
    pub fn negate(&self) -> FpSet {
        let n = self.modulus;
        FpSet::from_elements(n, self.iter().map(|x| (n - x) % n))
    }

    /// `λ·S + μ = {λs + μ}`; `λ = 0` collapses a nonempty set to `{μ}`.
    pub fn affine(&self, lambda: u32, mu: u32) -> FpSet {
        let n = self.modulus as u64;
        let (l, m) = (lambda as u64 % n, mu as u64 % n);
        FpSet::from_elements(
            self.modulus,
            self.iter().map(|s| ((l * s as u64 + m) % n) as u32),
        )
    }

    /// `A + B = {a + b}`: the OR of the rotations of the larger operand by
    /// every element of the smaller.
    pub fn sumset(&self, other: &FpSet) -> Result<FpSet> {
        self.check_same(other)?;
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = FpSet::empty(self.modulus);
        let n = self.modulus as usize;
        for b in small.iter() {
            rotate_or_into(&mut out.words, &large.words, b as usize, n);
        }
        Ok(out)
    }

    /// Difference set `A − B = {a − b}`.
    pub fn difference_set(&self, other: &FpSet) -> Result<FpSet> {
        self.sumset(&other.negate())
    }

    /// `{ab mod n}` by direct multiplication over the smaller operand.
    pub fn productset(&self, other: &FpSet) -> Result<FpSet> {
        self.check_same(other)?;
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        let n = self.modulus as u64;
        let mut out = FpSet::empty(self.modulus);
        for a in small.iter() {
            for b in large.iter() {
                out.insert((a as u64 * b as u64 % n) as u32);
            }
        }
        Ok(out)
    }

    /// `kA = A + … + A` (`k` copies), by binary doubling.
    pub fn iterated_sumset(&self, k: u32) -> Result<FpSet> {
        if k == 0 {
            return Err(Error::InvalidArgument(
                "iterated sumset needs k >= 1".into(),
            ));
        }
        let mut acc: Option<FpSet> = None;
        let mut power = self.clone();
        let mut k = k;
        loop {
            if k & 1 == 1 {
                acc = Some(match acc {
                    None => power.clone(),
                    Some(a) => a.sumset(&power)?,
                });
            }
            k >>= 1;
            if k == 0 {
                break;
            }
            power = power.sumset(&power)?;
        }
        Ok(acc.expect("k >= 1"))
    }

    /// `⋂_i (S + b_i)`; shifts must be pairwise distinct.
    pub fn intersect_shifts(&self, shifts: &[u32]) -> Result<FpSet> {
        if shifts.is_empty() {
            return Err(Error::BadShifts("at least one shift is required".into()));
        }
        let mut seen = FpSet::empty(self.modulus);
        for &b in shifts {
            let b = b % self.modulus;
            if seen.contains(b) {
                return Err(Error::DuplicateShift(b));
            }
            seen.insert(b);
        }
        let mut out = FpSet::full(self.modulus);
        for &b in shifts {
            out.intersect_with(&self.translate(b as i64));
        }
        Ok(out)
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl Iterator for Iter<'_> {
    type Item = u32;

    #[inline]
    fn next(&mut self) -> Option<u32> {
        while self.cur == 0 {
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
        let bit = self.cur.trailing_zeros();
        self.cur &= self.cur - 1;
        Some((self.idx * WORD) as u32 + bit)
    }
}

impl<'a> IntoIterator for &'a FpSet {
    type Item = u32;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

/// `p:{e1,e2,...}`
impl fmt::Display for FpSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{{", self.modulus)?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for FpSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for FpSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::Parse(format!("set literal `{s}`: {why}"));
        let (modulus, body) = s
            .trim()
            .split_once(':')
            .ok_or_else(|| bad("expected `p:{...}`"))?;
        let modulus: u32 = modulus
            .trim()
            .parse()
            .map_err(|_| bad("modulus is not an integer"))?;
        if modulus == 0 {
            return Err(bad("modulus must be positive"));
        }
        let body = body
            .trim()
            .strip_prefix('{')
            .and_then(|b| b.strip_suffix('}'))
            .ok_or_else(|| bad("elements must be wrapped in braces"))?;
        let mut set = FpSet::empty(modulus);
        for tok in body.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let x: u32 = tok.parse().map_err(|_| bad("element is not an integer"))?;
            if x >= modulus {
                return Err(bad("element out of range"));
            }
            set.insert(x);
        }
        Ok(set)
    }
}
