use super::{Poly, RootOfUnityTally};
use crate::error::{Error, Result};
use crate::fpcore::{arith::gcd, PrimeField};
use crate::setalg::FpSet;

/// The character `χ_j` of `F_p^*` with `χ_j(g^k) = ζ_d^{jk}`, where `g` is the
/// field's primitive root and `d | p − 1`.
///
/// Values are represented by the exponent `r` of `ζ_d^r`; `χ(0)` is `None`
/// (contributes zero) for every character, the principal one included.
#[derive(Debug, Clone, Copy)]
pub struct Character<'f> {
    field: &'f PrimeField,
    d: u32,
    j: u32,
}

impl<'f> Character<'f> {
    pub fn new(field: &'f PrimeField, d: u32, j: u32) -> Result<Self> {
        if d == 0 || field.group_order() % d != 0 {
            return Err(Error::BadIndex {
                p: field.p(),
                d,
                reason: "character order context must divide p - 1",
            });
        }
        if j >= d {
            return Err(Error::BadCharacter { d, j });
        }
        Ok(Character { field, d, j })
    }

    /// The quadratic character (Legendre symbol).
    pub fn legendre(field: &'f PrimeField) -> Self {
        Character { field, d: 2, j: 1 }
    }

    /// All of `X_d = {χ : χ^d = χ_0}`, principal character first.
    pub fn family(field: &'f PrimeField, d: u32) -> Result<Vec<Self>> {
        (0..d.max(1)).map(|j| Self::new(field, d, j)).collect()
    }

    pub fn field(&self) -> &'f PrimeField {
        self.field
    }

    /// Size of the root-of-unity context, `d`.
    pub fn modulus(&self) -> u32 {
        self.d
    }

    pub fn index(&self) -> u32 {
        self.j
    }

    /// Multiplicative order `d / gcd(j, d)`.
    pub fn order(&self) -> u32 {
        self.d / gcd(self.j as u64, self.d as u64) as u32
    }

    pub fn is_principal(&self) -> bool {
        self.j == 0
    }

    /// `Some(r)` meaning `ζ_d^r`, or `None` at zero.
    #[inline]
    pub fn eval(&self, x: u32) -> Option<u32> {
        let x = x % self.field.p();
        if x == 0 {
            return None;
        }
        let k = self.field.dlog_unchecked(x) as u64;
        Some((self.j as u64 * k % self.d as u64) as u32)
    }

    pub fn tally(&self) -> RootOfUnityTally {
        RootOfUnityTally::new(self.d)
    }
}

/// `Σ_{x ∈ F_p} χ(F(x))`.
pub fn poly_char_sum(chi: &Character<'_>, f: &Poly) -> Result<RootOfUnityTally> {
    if f.modulus() != chi.field.p() {
        return Err(Error::MixedModulus {
            left: f.modulus(),
            right: chi.field.p(),
        });
    }
    let mut tally = chi.tally();
    for x in 0..chi.field.p() {
        tally.add(chi.eval(f.eval(x)));
    }
    Ok(tally)
}

/// `Σ_{a ∈ A} Σ_{b ∈ B} χ(a + b)`.
pub fn double_char_sum(chi: &Character<'_>, a: &FpSet, b: &FpSet) -> Result<RootOfUnityTally> {
    let p = chi.field.p();
    for s in [a, b] {
        if s.modulus() != p {
            return Err(Error::MixedModulus {
                left: s.modulus(),
                right: p,
            });
        }
    }
    let mut tally = chi.tally();
    let bs = b.to_vec();
    for x in a.iter() {
        for &y in &bs {
            tally.add(chi.eval(chi.field.add(x, y)));
        }
    }
    Ok(tally)
}

/// `Σ_{χ ∈ X_d} χ(v)` as a tally over `ζ_d`.
pub fn indicator_tally(field: &PrimeField, d: u32, v: u32) -> Result<RootOfUnityTally> {
    let mut tally = RootOfUnityTally::new(d);
    for chi in Character::family(field, d)? {
        tally.add(chi.eval(v));
    }
    Ok(tally)
}
