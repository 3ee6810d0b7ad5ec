//! Exact arithmetic in `Z[ζ_d]` through reduction modulo `Φ_d`.

use std::collections::HashMap;

/// Caches `Φ_d` and the reductions `x^r mod Φ_d` for `0 ≤ r < d`.
#[derive(Debug, Default)]
pub struct CyclotomicReducer {
    phis: HashMap<u32, Vec<i64>>,
    power_tables: HashMap<u32, Vec<Vec<i64>>>,
}

impl CyclotomicReducer {
    pub fn new() -> Self {
        Self::default()
    }

    /// Coefficients of `Φ_d`, low to high.
    pub fn phi(&mut self, d: u32) -> &[i64] {
        if !self.phis.contains_key(&d) {
            // x^d − 1 = ∏_{e | d} Φ_e
            let mut num = vec![0i64; d as usize + 1];
            num[0] = -1;
            num[d as usize] = 1;
            for e in (1..d).filter(|e| d % e == 0) {
                let divisor = self.phi(e).to_vec();
                num = exact_div(&num, &divisor);
            }
            self.phis.insert(d, num);
        }
        &self.phis[&d]
    }

    /// Reduce `Σ_r counts[r] x^r` modulo `Φ_d`; the result has length `φ(d)`.
    pub fn reduce(&mut self, d: u32, counts: &[u64]) -> Vec<i64> {
        if !self.power_tables.contains_key(&d) {
            let table = self.build_table(d);
            self.power_tables.insert(d, table);
        }
        let table = &self.power_tables[&d];
        let mut out = vec![0i64; table[0].len()];
        for (r, &c) in counts.iter().enumerate().filter(|(_, &c)| c != 0) {
            for (o, &t) in out.iter_mut().zip(&table[r % d as usize]) {
                *o += c as i64 * t;
            }
        }
        out
    }

    fn build_table(&mut self, d: u32) -> Vec<Vec<i64>> {
        let phi = self.phi(d).to_vec();
        let deg = phi.len() - 1;
        let mut table = Vec::with_capacity(d as usize);
        let mut cur = vec![0i64; deg];
        cur[0] = 1;
        for _ in 0..d {
            table.push(cur.clone());
            // multiply by x, then fold the x^deg term back using monic Φ_d
            let top = cur[deg - 1];
            for i in (1..deg).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for i in 0..deg {
                    cur[i] -= top * phi[i];
                }
            }
        }
        table
    }
}

/// Exact quotient of integer polynomials; `den` must be monic and divide `num`.
fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    debug_assert_eq!(den[dn], 1);
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut q = vec![0i64; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dn];
        q[i] = c;
        if c != 0 {
            for (k, &dk) in den.iter().enumerate() {
                rem[i + k] -= c * dk;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0), "inexact cyclotomic division");
    q
}
