use crate::charsum::{double_char_sum, karatsuba_ratio, Character};
use crate::decomp::{self, DecompQuery, SearchLimits, SearchStatus};
use crate::error::{Error, Result};
use crate::fpcore::{PrimeField, Subgroup};
use crate::report::BoundReport;
use crate::setalg::{growth_product, FpSet};

/// Default `ε` in the size condition `#G ≤ p^{1−ε}`.
pub const DEFAULT_EPSILON: f64 = 0.05;

/// Exponent in the known lower bound for `#(A(A + 1))`.
pub const REFERENCE_GROWTH_EXPONENT: f64 = 57.0 / 56.0;

/// `p ≥ 4(m − 1) #G ((#G)^{1/(2m−1)} + 1)`.
pub fn shkvyu_hypothesis(p: u32, group_size: usize, m: usize) -> bool {
    let g = group_size as f64;
    let root = g.powf(1.0 / (2 * m - 1) as f64);
    p as f64 >= 4.0 * (m - 1) as f64 * g * (root + 1.0)
}

/// `4m ((#G)^{1/(2m−1)} + 1)^m`.
pub fn shkvyu_bound(group_size: usize, m: usize) -> f64 {
    let root = (group_size as f64).powf(1.0 / (2 * m - 1) as f64);
    4.0 * m as f64 * (root + 1.0).powi(m as i32)
}

/// Size of `⋂_i (G_d + b_i)` for `m ≥ 2` pairwise distinct nonzero shifts,
/// asserted against [`shkvyu_bound`] when [`shkvyu_hypothesis`] holds.
pub fn shkvyu_report(field: &PrimeField, d: u32, shifts: &[u32]) -> Result<BoundReport> {
    let p = field.p();
    let m = shifts.len();
    if m < 2 {
        return Err(Error::InvalidArgument(format!(
            "at least two shifts are required, got {m}"
        )));
    }
    let shifts: Vec<u32> = shifts.iter().map(|&s| s % p).collect();
    if shifts.contains(&0) {
        return Err(Error::InvalidArgument("shifts must be nonzero".into()));
    }
    let group = Subgroup::new(field, d)?;
    let common = group.elements().intersect_shifts(&shifts)?;
    let size = group.order();

    let mut r = BoundReport::new("shkvyu")
        .with_instance("p", p)
        .with_instance("d", d)
        .with_instance("m", m as u64)
        .with_instance("shifts", shifts);
    r.lhs = common.len() as f64;
    r.rhs = shkvyu_bound(size, m);
    r.hypothesis_ok = shkvyu_hypothesis(p, size, m);
    if r.hypothesis_ok {
        r.ok = Some(r.lhs <= r.rhs);
    }
    r.set_extra("group_size", size as u64);
    Ok(r)
}

/// `e = log #(G(G + 1)) / log #G` for `G = G_d`. Report-only; `ok` records
/// the trivial `e ≥ 1`, except when `−1 ∈ G` puts `0` into `G + 1`.
pub fn growth_exponent_report(field: &PrimeField, d: u32, epsilon: f64) -> Result<BoundReport> {
    let p = field.p();
    let group = Subgroup::new(field, d)?;
    let size = group.order();
    if size < 2 {
        return Err(Error::BadIndex {
            p,
            d,
            reason: "growth exponent needs #G >= 2",
        });
    }
    let product = growth_product(field, group.elements(), 1)?;
    let e = (product.len() as f64).ln() / (size as f64).ln();
    let zero_in_shift = group.contains(p - 1);

    let mut r = BoundReport::new("growth")
        .with_instance("p", p)
        .with_instance("d", d);
    r.lhs = e;
    r.rhs = REFERENCE_GROWTH_EXPONENT;
    if zero_in_shift {
        r.note("0 lies in G + 1; e >= 1 not asserted");
    } else {
        r.ok = Some(e >= 1.0);
    }
    r.set_extra("e", e);
    r.set_extra("group_size", size as u64);
    r.set_extra("product_size", product.len() as u64);
    r.set_extra("reference_exponent", REFERENCE_GROWTH_EXPONENT);
    r.set_extra(
        "size_condition_ok",
        (size as f64) <= (p as f64).powf(1.0 - epsilon),
    );
    r.set_extra("epsilon", epsilon);
    r.set_extra("zero_in_shift", zero_in_shift);
    r.note("o(1) dropped from the reference exponent");
    Ok(r)
}

/// Runs the maximal packing search `A + B ⊆ G_d` and asserts
/// `#A · #B ≤ p` on the maximizer.
///
/// Each nonprincipal `χ ∈ X_d` is trivial on `G_d`, so its double sum over
/// the maximizer is exactly `#A #B`; that is verified too. Karatsuba ratios
/// for `ν = 1, 2, 3` are attached report-only.
pub fn packing_bound_harness(
    field: &PrimeField,
    d: u32,
    limits: SearchLimits,
    workers: usize,
) -> Result<BoundReport> {
    let p = field.p();
    if d < 2 {
        return Err(Error::BadIndex {
            p,
            d,
            reason: "packing bound needs d >= 2",
        });
    }
    let group = Subgroup::new(field, d)?;
    let query = DecompQuery::packing(group.elements().clone())
        .limits(limits)
        .workers(workers);
    let report = decomp::run(&query)?;

    let mut r = BoundReport::new("packing")
        .with_instance("p", p)
        .with_instance("d", d);
    r.rhs = p as f64;
    r.set_extra("status", report.status.name());
    r.set_extra("nodes_explored", report.nodes_explored);
    let Some(w) = report.witnesses.first() else {
        r.note("no maximizer found");
        return Ok(r);
    };
    let a = FpSet::from_elements(p, w.a.iter().copied());
    let b = FpSet::from_elements(p, w.b.iter().copied());
    let product = (a.len() * b.len()) as u64;
    r.lhs = product as f64;
    r.instance.insert("A".into(), w.a.clone().into());
    r.instance.insert("B".into(), w.b.clone().into());

    let family = Character::family(field, d)?;
    let mut sums_exact = true;
    for chi in &family[1..] {
        let tally = double_char_sum(chi, &a, &b)?;
        sums_exact &= tally.zeros() == 0 && tally.counts()[0] == product;
    }
    r.set_extra("double_sums_exact", sums_exact);
    let chi = family[1];
    let ratios: Vec<f64> = (1..=3)
        .map(|nu| {
            Ok(karatsuba_ratio(&chi, &a, &b, nu)?.extras["ratio"]
                .as_f64()
                .unwrap_or(f64::NAN))
        })
        .collect::<Result<_>>()?;
    r.set_extra("karatsuba_ratios", ratios);

    if report.status == SearchStatus::BudgetExceeded {
        r.note("search budget exceeded; maximizer may not be global");
    }
    r.ok = Some(product <= p as u64 && sums_exact);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shkvyu_examples() {
        let f61 = PrimeField::new(61).unwrap();
        let r = shkvyu_report(&f61, 15, &[1, 2]).unwrap();
        let root = 4f64.powf(1.0 / 3.0);
        assert!((r.rhs - 8.0 * (root + 1.0).powi(2)).abs() < 1e-9);
        assert!(r.hypothesis_ok);
        assert!(r.lhs <= 4.0);
        assert_eq!(r.ok, Some(true));

        let f13 = PrimeField::new(13).unwrap();
        let r = shkvyu_report(&f13, 3, &[1, 2]).unwrap();
        assert!(!r.hypothesis_ok);
        assert_eq!(r.ok, None);

        assert!(matches!(
            shkvyu_report(&f13, 3, &[1, 1]),
            Err(Error::DuplicateShift(1))
        ));
        assert!(shkvyu_report(&f13, 3, &[0, 1]).is_err());
        assert!(shkvyu_report(&f13, 3, &[1]).is_err());
    }

    #[test]
    fn shkvyu_hypothesis_threshold() {
        let t = 16.0 * (4f64.powf(1.0 / 3.0) + 1.0);
        assert!(shkvyu_hypothesis(t.ceil() as u32, 4, 2));
        assert!(!shkvyu_hypothesis(t.floor() as u32, 4, 2));
    }

    #[test]
    fn growth_examples() {
        let f13 = PrimeField::new(13).unwrap();
        let r = growth_exponent_report(&f13, 3, DEFAULT_EPSILON).unwrap();
        assert_eq!(r.extras["group_size"], 4);
        assert_eq!(r.extras["product_size"], 9);
        assert!((r.lhs - 9f64.ln() / 4f64.ln()).abs() < 1e-12);
        // −1 ∈ G_3 mod 13
        assert_eq!(r.extras["zero_in_shift"], true);
        assert_eq!(r.ok, None);

        let f7 = PrimeField::new(7).unwrap();
        let r = growth_exponent_report(&f7, 3, DEFAULT_EPSILON).unwrap();
        assert_eq!(r.extras["product_size"], 3);
        assert!((r.lhs - 3f64.ln() / 2f64.ln()).abs() < 1e-12);

        let r = growth_exponent_report(&f7, 2, DEFAULT_EPSILON).unwrap();
        assert_eq!(r.extras["zero_in_shift"], false);
        assert_eq!(r.ok, Some(true));

        assert!(growth_exponent_report(&f7, 6, DEFAULT_EPSILON).is_err());
    }

    #[test]
    fn packing_examples() {
        let f7 = PrimeField::new(7).unwrap();
        let r = packing_bound_harness(&f7, 2, SearchLimits::default(), 1).unwrap();
        assert_eq!(r.lhs, 3.0);
        assert_eq!(r.ok, Some(true));
        assert_eq!(r.extras["double_sums_exact"], true);
        assert_eq!(r.extras["karatsuba_ratios"].as_array().unwrap().len(), 3);
        assert!(r.is_finite());

        let f13 = PrimeField::new(13).unwrap();
        let r = packing_bound_harness(&f13, 2, SearchLimits::default(), 1).unwrap();
        assert!(r.lhs <= 13.0);
        assert_eq!(r.lhs, 6.0);
        assert_eq!(r.ok, Some(true));

        assert!(matches!(
            packing_bound_harness(&f7, 1, SearchLimits::default(), 1),
            Err(Error::BadIndex { .. })
        ));
    }
}
