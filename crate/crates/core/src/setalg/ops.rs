//! Set operations that need the multiplicative structure of a prime field.

use super::FpSet;
use crate::error::{Error, Result};
use crate::fpcore::PrimeField;

/// `AB` computed in discrete-log space: multiplication by `a ≠ 0` is a
/// rotation by `log a` in `Z_{p−1}`, so `A*B*` is a cyclic sumset there.
/// Zero is handled separately.
pub fn productset_in(field: &PrimeField, a: &FpSet, b: &FpSet) -> Result<FpSet> {
    let p = field.p();
    for s in [a, b] {
        if s.modulus() != p {
            return Err(Error::MixedModulus {
                left: s.modulus(),
                right: p,
            });
        }
    }
    let n = field.group_order();
    let to_logs = |s: &FpSet| {
        FpSet::from_elements(
            n,
            s.iter()
                .filter(|&x| x != 0)
                .map(|x| field.dlog_unchecked(x)),
        )
    };
    let logs = to_logs(a).sumset(&to_logs(b))?;
    let mut out = FpSet::from_elements(p, logs.iter().map(|k| field.exp(k as u64)));
    if (a.contains(0) && !b.is_empty()) || (b.contains(0) && !a.is_empty()) {
        out.insert(0);
    }
    Ok(out)
}

/// `A(A+b) = {a₁(a₂ + b) : a₁, a₂ ∈ A}`.
///
/// For `b ≠ 0` the result is cross-checked against the conjugated form
/// `b²·(b⁻¹A)(b⁻¹A + 1)`; a mismatch is reported as an error.
pub fn growth_product(field: &PrimeField, a: &FpSet, b: u32) -> Result<FpSet> {
    let b = b % field.p();
    let direct = productset_in(field, a, &a.translate(b as i64))?;
    if b != 0 {
        let conj = growth_product_by_conjugation(field, a, b)?;
        if conj != direct {
            return Err(Error::CorruptWitness(format!(
                "A(A+b) conjugation mismatch for A = {a}, b = {b}"
            )));
        }
    }
    Ok(direct)
}

/// `b²·(b⁻¹A)(b⁻¹A + 1)`, requires `b ≠ 0`.
pub fn growth_product_by_conjugation(field: &PrimeField, a: &FpSet, b: u32) -> Result<FpSet> {
    let b_inv = field
        .inv(b)
        .ok_or_else(|| Error::InvalidArgument("conjugation needs b != 0".into()))?;
    let scaled = a.affine(b_inv, 0);
    let inner = scaled.productset(&scaled.translate(1))?;
    Ok(inner.affine(field.mul(b, b), 0))
}
