//! Closed-form size bounds, evaluated with natural logarithms and with
//! every `o(1)` term dropped.

use crate::error::{Error, Result};
use crate::fpcore::arith::{euler_phi, tau};
use crate::report::BoundReport;

/// `⌈log(√p / d) / log d⌉` for `d ≥ 3`. May be zero or negative for small
/// `p`, in which case it has no combinatorial meaning.
pub fn lstar(p: u32, d: u32) -> Result<i64> {
    if d < 3 {
        return Err(Error::BadIndex {
            p,
            d,
            reason: "L* needs d >= 3",
        });
    }
    let d = d as f64;
    let x = ((p as f64).sqrt() / d).ln() / d.ln();
    Ok(x.ceil() as i64)
}

/// `2 √p log d / (d² log p)`.
pub fn gd_low_value(p: u32, d: u32) -> f64 {
    let (p, d) = (p as f64, d as f64);
    2.0 * p.sqrt() * d.ln() / (d * d * p.ln())
}

/// `d √p log p / (2 log d)`.
pub fn up_g_prelim(p: u32, d: u32) -> f64 {
    let (p, d) = (p as f64, d as f64);
    d * p.sqrt() * p.ln() / (2.0 * d.ln())
}

/// Size ranges for parts of a nontrivial decomposition of the quadratic
/// residues and of the primitive roots modulo `p`. Report-only.
pub fn classical_bounds(p: u32) -> BoundReport {
    let pf = p as f64;
    let (sqrt, log) = (pf.sqrt(), pf.ln());
    let phi = euler_phi(p as u64 - 1) as f64;
    let tau = tau(p as u64 - 1) as f64;
    let mut r = BoundReport::new("classical_bounds").with_instance("p", p);
    r.lhs = sqrt / (3.0 * log);
    r.rhs = sqrt * log;
    r.set_extra("low_q", sqrt / (3.0 * log));
    r.set_extra("up_q", sqrt * log);
    r.set_extra("low_r", phi / (tau * sqrt * log));
    r.set_extra("up_r", tau * sqrt * log);
    r.note("o(1) terms dropped; constants as printed");
    r
}
