use super::PrimeField;
use crate::error::{Error, Result};
use crate::setalg::FpSet;

/// The subgroup `G_d = { x^d : x ∈ F_p^* }` of `d`-th powers, `d | p − 1`.
#[derive(Debug, Clone)]
pub struct Subgroup<'f> {
    field: &'f PrimeField,
    d: u32,
    elements: FpSet,
}

impl<'f> Subgroup<'f> {
    pub fn new(field: &'f PrimeField, d: u32) -> Result<Self> {
        let n = field.group_order();
        if d == 0 || n % d != 0 {
            return Err(Error::BadIndex {
                p: field.p(),
                d,
                reason: "d must divide p - 1",
            });
        }
        // G_d is generated by g^d.
        let elements = FpSet::from_elements(
            field.p(),
            (0..n / d).map(|k| field.exp(k as u64 * d as u64)),
        );
        Ok(Subgroup { field, d, elements })
    }

    pub fn field(&self) -> &'f PrimeField {
        self.field
    }

    /// The index `d`.
    pub fn index(&self) -> u32 {
        self.d
    }

    pub fn order(&self) -> usize {
        (self.field.group_order() / self.d) as usize
    }

    pub fn elements(&self) -> &FpSet {
        &self.elements
    }

    pub fn into_elements(self) -> FpSet {
        self.elements
    }

    /// `x ∈ G_d` iff `x ≠ 0` and `d | log_g x`.
    pub fn contains(&self, x: u32) -> bool {
        let x = x % self.field.p();
        x != 0 && self.field.dlog_unchecked(x) % self.d == 0
    }
}

/// Primitive roots modulo `p`: elements whose discrete log is coprime to `p − 1`.
pub fn primitive_roots(field: &PrimeField) -> FpSet {
    let n = field.group_order() as u64;
    FpSet::from_elements(
        field.p(),
        (0..n)
            .filter(|&k| super::arith::gcd(k, n) == 1)
            .map(|k| field.exp(k)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpcore::arith::{divisors, primes_in};

    fn powers(p: u32, d: u32) -> Vec<u32> {
        let mut v: Vec<u32> = (1..p)
            .map(|x| crate::fpcore::arith::pow_mod(x as u64, d as u64, p as u64) as u32)
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    #[test]
    fn examples() {
        let f7 = PrimeField::new(7).unwrap();
        let f13 = PrimeField::new(13).unwrap();
        assert_eq!(
            Subgroup::new(&f7, 2).unwrap().elements().to_vec(),
            [1, 2, 4]
        );
        assert_eq!(
            Subgroup::new(&f13, 3).unwrap().elements().to_vec(),
            [1, 5, 8, 12]
        );
        assert_eq!(
            Subgroup::new(&f7, 1).unwrap().elements().to_vec(),
            [1, 2, 3, 4, 5, 6]
        );
        assert!(matches!(
            Subgroup::new(&f7, 4),
            Err(Error::BadIndex { d: 4, .. })
        ));
    }

    #[test]
    fn all_subgroups_up_to_499() {
        for p in primes_in(3, 499) {
            let f = PrimeField::new(p).unwrap();
            for d in divisors(p - 1) {
                let g = Subgroup::new(&f, d as u32).unwrap();
                let elems = g.elements().to_vec();
                assert_eq!(elems, powers(p as u32, d as u32));
                assert_eq!(elems.len(), ((p - 1) / d) as usize);
                assert!(g.contains(1));
                for x in 0..p as u32 {
                    let by_log = x != 0 && f.dlog(x).unwrap() % d as u32 == 0;
                    assert_eq!(g.contains(x), by_log);
                    assert_eq!(g.elements().contains(x), by_log);
                }
                // closure under multiplication, spot-checked on a stride
                for &a in elems.iter().step_by(7) {
                    for &b in &elems {
                        assert!(g.contains(f.mul(a, b)));
                    }
                }
            }
        }
    }

    #[test]
    fn primitive_root_family() {
        let f = PrimeField::new(13).unwrap();
        assert_eq!(primitive_roots(&f).to_vec(), [2, 6, 7, 11]);
    }
}
