//! Constant-free character-sum bounds (Weil, Vinogradov), the Karatsuba
//! envelope reporter, and the geometric sum over an interval.

use std::f64::consts::PI;

use serde_json::json;

use super::{double_char_sum, poly_char_sum, Character, Poly};
use crate::error::{Error, Result};
use crate::report::BoundReport;
use crate::setalg::FpSet;

/// Absolute slack for the Weil and Vinogradov comparisons.
pub const WEIL_TOLERANCE: f64 = 1e-6;

/// Slack for `|Σ_{u∈I} e_p(λu)| ≤ p/|λ|`.
pub const LINEAR_SUM_TOLERANCE: f64 = 1e-9;

fn character_instance(report: BoundReport, chi: &Character<'_>) -> BoundReport {
    report
        .with_instance("p", chi.field().p())
        .with_instance("d", chi.modulus())
        .with_instance("j", chi.index())
}

/// `|Σ_x χ(F(x))| ≤ (D − 1)√p` for `χ` of order `e ≥ 2` and `F` not of the
/// form `c·H^e`. Hypothesis failures are reported, never raised.
pub fn weil_report(chi: &Character<'_>, f: &Poly) -> Result<BoundReport> {
    let p = chi.field().p();
    if f.modulus() != p {
        return Err(Error::MixedModulus {
            left: f.modulus(),
            right: p,
        });
    }
    let order = chi.order();
    let roots = f.distinct_roots()?;
    let root = f.perfect_power_root(order)?;
    let tally = poly_char_sum(chi, f)?;
    let value = tally.value();

    let mut r =
        character_instance(BoundReport::new("weil"), chi).with_instance("poly", f.to_string());
    r.lhs = value.norm();
    r.rhs = roots.saturating_sub(1) as f64 * (p as f64).sqrt();
    r.hypothesis_ok = !chi.is_principal() && root.is_none();
    r.tolerance = Some(WEIL_TOLERANCE);
    if r.hypothesis_ok {
        r.ok = Some(r.lhs <= r.rhs + WEIL_TOLERANCE);
    }
    r.set_extra("order", order);
    r.set_extra("distinct_roots", roots as u64);
    r.set_extra("perfect_power", root.is_some());
    r.set_extra("value", json!([value.re, value.im]));
    if chi.is_principal() {
        r.note("principal character: bound not applicable");
    }
    Ok(r)
}

fn require_nonprincipal(chi: &Character<'_>) -> Result<()> {
    if chi.is_principal() {
        Err(Error::InvalidArgument(
            "a non-principal character is required".into(),
        ))
    } else {
        Ok(())
    }
}

/// `|Σ_{a∈A} Σ_{b∈B} χ(a+b)| ≤ √(p·#A·#B)` with constant exactly 1.
pub fn vinogradov_check(chi: &Character<'_>, a: &FpSet, b: &FpSet) -> Result<BoundReport> {
    require_nonprincipal(chi)?;
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidArgument("A and B must be nonempty".into()));
    }
    let tally = double_char_sum(chi, a, b)?;
    let p = chi.field().p() as f64;
    let mut r = character_instance(BoundReport::new("vinogradov"), chi)
        .with_instance("A", a.to_vec())
        .with_instance("B", b.to_vec());
    r.lhs = tally.magnitude();
    r.rhs = (p * a.len() as f64 * b.len() as f64).sqrt();
    r.tolerance = Some(WEIL_TOLERANCE);
    r.ok = Some(r.lhs <= r.rhs + WEIL_TOLERANCE);
    Ok(r)
}

/// `(#A)^{(2ν−1)/2ν} ((#B)^{1/2} p^{1/2ν} + #B p^{1/4ν})`, implied constant 1.
pub fn karatsuba_envelope(p: u32, a_len: usize, b_len: usize, nu: u32) -> f64 {
    let (p, a, b, nu) = (p as f64, a_len as f64, b_len as f64, nu as f64);
    a.powf((2.0 * nu - 1.0) / (2.0 * nu))
        * (b.sqrt() * p.powf(1.0 / (2.0 * nu)) + b * p.powf(1.0 / (4.0 * nu)))
}

/// Report-only: the ratio of the double character sum to the Karatsuba
/// envelope. The implied constant of the envelope is unknown.
pub fn karatsuba_ratio(chi: &Character<'_>, a: &FpSet, b: &FpSet, nu: u32) -> Result<BoundReport> {
    require_nonprincipal(chi)?;
    if nu == 0 {
        return Err(Error::InvalidArgument("nu must be >= 1".into()));
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidArgument("A and B must be nonempty".into()));
    }
    let tally = double_char_sum(chi, a, b)?;
    let p = chi.field().p();
    let mut r = character_instance(BoundReport::new("karatsuba"), chi)
        .with_instance("nu", nu)
        .with_instance("A", a.to_vec())
        .with_instance("B", b.to_vec());
    r.lhs = tally.magnitude();
    r.rhs = karatsuba_envelope(p, a.len(), b.len(), nu);
    r.set_extra("ratio", r.lhs / r.rhs);
    r.set_extra(
        "vinogradov_rhs",
        (p as f64 * a.len() as f64 * b.len() as f64).sqrt(),
    );
    r.note("implied constant set to 1; ratio is report-only");
    Ok(r)
}

/// `|Σ_{u=m+1}^{m+n} e_p(λu)|` by the closed geometric form. The magnitude
/// does not depend on the start `m`.
///
/// Panics if the provable bound `p/|λ|` fails for `1 ≤ |λ| ≤ (p−1)/2`.
pub fn interval_exp_sum(p: u32, _start: i64, n: u64, lambda: i64) -> Result<f64> {
    if n == 0 || n > p as u64 {
        return Err(Error::InvalidArgument(format!(
            "interval length must lie in 1..=p, got {n}"
        )));
    }
    let half = p as f64 / 2.0;
    if !((lambda as f64) > -half && (lambda as f64) <= half) {
        return Err(Error::InvalidArgument(format!(
            "frequency {lambda} outside (-p/2, p/2]"
        )));
    }
    if lambda == 0 {
        return Ok(n as f64);
    }
    let x = PI * lambda as f64 / p as f64;
    let mag = ((x * n as f64).sin() / x.sin()).abs();
    if lambda.unsigned_abs() <= (p as u64 - 1) / 2 {
        let bound = p as f64 / lambda.unsigned_abs() as f64;
        assert!(
            mag <= bound + LINEAR_SUM_TOLERANCE,
            "linear sum bound violated: p={p} n={n} λ={lambda}: {mag} > {bound}"
        );
    }
    Ok(mag)
}
