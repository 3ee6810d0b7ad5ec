use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::report::BoundReport;
use crate::setalg::FpSet;

fn same_modulus(p: u32, s: &FpSet) -> Result<()> {
    if s.modulus() == p {
        Ok(())
    } else {
        Err(Error::MixedModulus {
            left: p,
            right: s.modulus(),
        })
    }
}

fn e_p(p: u32, z: u64) -> Complex64 {
    Complex64::from_polar(1.0, TAU * (z % p as u64) as f64 / p as f64)
}

/// `J = #{(u, a, b) : u ∈ I, a ∈ A, b ∈ B, u ≡ ab}` for the interval
/// `I = {m+1, …, m+n}`, counted directly and through the complete expansion
/// in additive characters `e_p(λ·)`, `λ ∈ (−p/2, p/2]`.
///
/// Asserts that both counts agree to `1e-6 · p²` and that
/// `|J − #A#B#I/p| ≤ Σ_{λ≠0} (p/|λ|) √(p#A#B) / p`.
pub fn interval_mult_report(p: u32, m: u64, n: u64, a: &FpSet, b: &FpSet) -> Result<BoundReport> {
    same_modulus(p, a)?;
    same_modulus(p, b)?;
    if a.contains(0) || b.contains(0) {
        return Err(Error::InvalidArgument("A and B must avoid 0".into()));
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidArgument("A and B must be nonempty".into()));
    }
    if n == 0 || n > p as u64 {
        return Err(Error::InvalidArgument(format!(
            "interval length must lie in 1..=p, got {n}"
        )));
    }
    let interval = FpSet::interval(p, m + 1, n);
    let pu = p as u64;

    let mut products = vec![0u64; p as usize];
    for x in a.iter() {
        for y in b.iter() {
            products[(x as u64 * y as u64 % pu) as usize] += 1;
        }
    }
    let j_direct: u64 = interval.iter().map(|u| products[u as usize]).sum();

    let half = p as i64 / 2;
    let lambdas = (-(p as i64 - 1) / 2)..=half;
    let mut j_fourier = Complex64::new(0.0, 0.0);
    for lambda in lambdas {
        let l = lambda.rem_euclid(p as i64) as u64;
        let t: Complex64 = products
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(w, &c)| c as f64 * e_p(p, l * w as u64))
            .sum();
        let s: Complex64 = interval.iter().map(|u| e_p(p, l * u as u64)).sum();
        j_fourier += t * s.conj();
    }
    let j_fourier = j_fourier.re / p as f64;

    let (na, nb) = (a.len() as f64, b.len() as f64);
    let main_term = na * nb * n as f64 / p as f64;
    let bilinear = (p as f64 * na * nb).sqrt();
    let error_bound: f64 = (1..=half)
        .map(|l| {
            let weight = p as f64 / l as f64 * bilinear / p as f64;
            // ±l, except +p/2 has no negative partner (p odd never hits it)
            if 2 * l == p as i64 {
                weight
            } else {
                2.0 * weight
            }
        })
        .sum();
    let tol = 1e-6 * (p as f64).powi(2);
    let agree = (j_direct as f64 - j_fourier).abs() <= tol;
    let deviation = (j_direct as f64 - main_term).abs();

    let mut r = BoundReport::new("interval")
        .with_instance("p", p)
        .with_instance("m", m)
        .with_instance("n", n)
        .with_instance("A", a.to_vec())
        .with_instance("B", b.to_vec());
    r.lhs = deviation;
    r.rhs = error_bound;
    r.tolerance = Some(tol);
    r.ok = Some(agree && deviation <= error_bound);
    r.set_extra("J", j_direct);
    r.set_extra("J_fourier", j_fourier);
    r.set_extra("main_term", main_term);
    r.set_extra("error_bound", error_bound);
    r.set_extra("is_decomposition", a.productset(b)? == interval);
    Ok(r)
}

/// `#(8AB − 8AB) > min{#A #B, p − 1} / 2`.
pub fn bourgain_report(p: u32, a: &FpSet, b: &FpSet) -> Result<BoundReport> {
    same_modulus(p, a)?;
    same_modulus(p, b)?;
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidArgument("A and B must be nonempty".into()));
    }
    let zero = FpSet::from_elements(p, [0]);
    if *a == zero || *b == zero {
        return Err(Error::ZeroSetOnly);
    }
    let ab = a.productset(b)?;
    let eight = ab.iterated_sumset(8)?;
    let diff = eight.difference_set(&eight)?;

    let mut r = BoundReport::new("bourgain")
        .with_instance("p", p)
        .with_instance("A", a.to_vec())
        .with_instance("B", b.to_vec());
    r.lhs = diff.len() as f64;
    r.rhs = ((a.len() * b.len()).min(p as usize - 1)) as f64 / 2.0;
    r.ok = Some(r.lhs > r.rhs);
    r.set_extra("product_set_size", ab.len() as u64);
    r.set_extra("eight_fold_size", eight.len() as u64);
    Ok(r)
}
