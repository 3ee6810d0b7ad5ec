use std::fmt;

use crate::error::{Error, Result};
use crate::fpcore::arith::pow_mod;

/// A polynomial over `F_p`, coefficients stored low to high with no
/// trailing zeros (the zero polynomial has no coefficients).
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    p: u32,
    coeffs: Vec<u32>,
}

impl Poly {
    pub fn new(p: u32, coeffs: Vec<u32>) -> Self {
        let mut poly = Poly {
            p,
            coeffs: coeffs.into_iter().map(|c| c % p).collect(),
        };
        poly.trim();
        poly
    }

    pub fn zero(p: u32) -> Self {
        Poly { p, coeffs: vec![] }
    }

    pub fn constant(p: u32, c: u32) -> Self {
        Self::new(p, vec![c])
    }

    /// Parse a low-to-high coefficient list such as `0,1,1` (= x + x²).
    /// Negative coefficients are reduced modulo `p`.
    pub fn parse(p: u32, s: &str) -> Result<Self> {
        let coeffs = s
            .split(',')
            .map(str::trim)
            .map(|t| {
                t.parse::<i64>()
                    .map(|c| c.rem_euclid(p as i64) as u32)
                    .map_err(|_| Error::Parse(format!("bad coefficient `{t}` in `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(p, coeffs))
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    #[inline]
    fn mulm(&self, a: u32, b: u32) -> u32 {
        (a as u64 * b as u64 % self.p as u64) as u32
    }

    fn inv(&self, a: u32) -> u32 {
        debug_assert!(a != 0);
        pow_mod(a as u64, self.p as u64 - 2, self.p as u64) as u32
    }

    /// Horner evaluation at `x`.
    pub fn eval(&self, x: u32) -> u32 {
        let p = self.p as u64;
        let x = x as u64 % p;
        self.coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| (acc * x + c as u64) % p) as u32
    }

    pub fn derivative(&self) -> Poly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| self.mulm(c, (i as u64 % self.p as u64) as u32))
            .collect();
        Poly::new(self.p, coeffs)
    }

    pub fn scale(&self, k: u32) -> Poly {
        Poly::new(
            self.p,
            self.coeffs.iter().map(|&c| self.mulm(c, k)).collect(),
        )
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.inv(self.lead()))
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let p = self.p;
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                (a + p - b) % p
            })
            .collect();
        Poly::new(p, coeffs)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.p);
        }
        let p = self.p as u64;
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + a as u64 * b as u64) % p;
            }
        }
        Poly::new(self.p, out.into_iter().map(|c| c as u32).collect())
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut acc = Poly::constant(self.p, 1);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn divrem(&self, divisor: &Poly) -> (Poly, Poly) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let p = self.p;
        let dd = divisor.coeffs.len() - 1;
        let inv_lead = self.inv(divisor.lead());
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(p), self.clone());
        }
        let mut q = vec![0u32; rem.len() - dd];
        for i in (0..q.len()).rev() {
            let c = self.mulm(rem[i + dd], inv_lead);
            q[i] = c;
            if c != 0 {
                for (k, &dk) in divisor.coeffs.iter().enumerate() {
                    let t = self.mulm(c, dk);
                    rem[i + k] = (rem[i + k] + p - t) % p;
                }
            }
        }
        (Poly::new(p, q), Poly::new(p, rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    fn check_separable(&self) -> Result<()> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let degree = self.degree().unwrap_or(0);
        if degree >= self.p as usize {
            return Err(Error::DegreeTooLarge { degree, p: self.p });
        }
        Ok(())
    }

    /// Yun's squarefree decomposition: monic, pairwise coprime, squarefree
    /// `a_1, a_2, …` with `self = lead · ∏ a_i^i`. Needs `p > deg`.
    pub fn squarefree_decomposition(&self) -> Result<Vec<Poly>> {
        self.check_separable()?;
        let f = self.monic();
        let mut factors = Vec::new();
        if f.degree() == Some(0) {
            return Ok(factors);
        }
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.divrem(&a0).0;
        let mut c = df.divrem(&a0).0;
        let mut d = c.sub(&b.derivative());
        loop {
            let a = b.gcd(&d);
            b = b.divrem(&a).0;
            c = d.divrem(&a).0;
            factors.push(a);
            if b.degree() == Some(0) {
                break;
            }
            d = c.sub(&b.derivative());
        }
        Ok(factors)
    }

    /// Number of distinct roots over the algebraic closure,
    /// `deg(F / gcd(F, F'))`. Needs `p > deg`.
    pub fn distinct_roots(&self) -> Result<usize> {
        self.check_separable()?;
        let g = self.gcd(&self.derivative());
        Ok(self.divrem(&g).0.degree().unwrap_or(0))
    }

    /// `Some(H)` with `H` monic and `self = lead · H^e`, or `None`.
    /// Needs `p > deg` and `e ≥ 1`.
    pub fn perfect_power_root(&self, e: u32) -> Result<Option<Poly>> {
        if e == 0 {
            return Err(Error::InvalidArgument("root order must be positive".into()));
        }
        let factors = self.squarefree_decomposition()?;
        let mut root = Poly::constant(self.p, 1);
        for (i, a) in factors.iter().enumerate() {
            let mult = i as u32 + 1;
            if a.is_one() {
                continue;
            }
            if mult % e != 0 {
                return Ok(None);
            }
            root = root.mul(&a.pow(mult / e));
        }
        // confirm by expansion
        if root.pow(e).scale(self.lead()) == *self {
            Ok(Some(root))
        } else {
            Err(Error::InvalidArgument(format!(
                "perfect-power extraction failed to verify for {self}"
            )))
        }
    }
}

/// Low-to-high coefficient list, the same format [`Poly::parse`] accepts.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(u32::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[p={}]({self})", self.p)
    }
}
