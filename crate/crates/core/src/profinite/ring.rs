use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::TruncatedProfiniteInt;
use crate::error::{Error, Result};
use crate::exact::{hermite_rows, IntMatrix, LaurentPoly};

/// `(ℤ/l)[t]/(t^d − 1)`, elements as coefficient vectors of length `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupRingQuotient {
    l: BigInt,
    d: usize,
}

impl GroupRingQuotient {
    pub fn new(l: impl Into<BigInt>, d: usize) -> Result<Self> {
        let l = l.into();
        if !l.is_positive() || d == 0 {
            return Err(Error::Invalid("R_{l,d} needs l ≥ 1 and d ≥ 1".into()));
        }
        Ok(GroupRingQuotient { l, d })
    }

    pub fn l(&self) -> &BigInt {
        &self.l
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Image of a Laurent polynomial, exponents reduced mod `d`.
    pub fn reduce(&self, p: &LaurentPoly) -> Vec<BigInt> {
        self.reduce_twisted(p, 1)
    }

    /// Image of `p(t^μ)`.
    pub fn reduce_twisted(&self, p: &LaurentPoly, mu: i64) -> Vec<BigInt> {
        let d = self.d as i64;
        let mut out = vec![BigInt::zero(); self.d];
        for (e, c) in p.terms() {
            let k = (e as i128 * mu as i128).rem_euclid(d as i128) as usize;
            out[k] += c;
        }
        out.into_iter().map(|x| x.mod_floor(&self.l)).collect()
    }

    /// Cyclic convolution modulo `l`.
    pub fn mul(&self, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.d];
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                out[(i + j) % self.d] += a * b;
            }
        }
        out.into_iter().map(|v| v.mod_floor(&self.l)).collect()
    }

    /// Hermite basis of the preimage in `ℤ^d` of the principal ideal `(x)`.
    pub fn ideal_lattice(&self, x: &[BigInt]) -> IntMatrix {
        let d = self.d;
        let mut rows = Vec::with_capacity(2 * d);
        for i in 0..d {
            rows.push((0..d).map(|k| x[(k + d - i) % d].clone()).collect::<Vec<_>>());
        }
        for i in 0..d {
            rows.push((0..d).map(|k| if k == i { self.l.clone() } else { BigInt::zero() }).collect());
        }
        hermite_rows(&IntMatrix::from_rows(rows, d).expect("uniform rows"))
    }

    pub fn contains(&self, ideal_of: &[BigInt], y: &[BigInt]) -> bool {
        let h = self.ideal_lattice(ideal_of);
        let with = h.vstack(&IntMatrix::from_rows(vec![y.to_vec()], self.d).unwrap()).unwrap();
        hermite_rows(&with) == h
    }
}

/// Whether `(a(t^μ)) = (b(t))` as principal ideals of `R_{l,d}`.
///
/// `μ` must be a unit and `d` must divide its modulus, so that `t ↦ t^μ`
/// is a well-defined automorphism of `R_{l,d}`.
pub fn ideal_equal(a: &LaurentPoly, b: &LaurentPoly, mu: &TruncatedProfiniteInt, l: u64, d: u64) -> Result<bool> {
    if !mu.is_unit() {
        return Err(Error::NotAUnit(format!("{mu} is not a unit")));
    }
    let dd = BigInt::from(d);
    let mu_d = mu.reduce(&dd)?;
    let ring = GroupRingQuotient::new(l, d as usize)?;
    let e = mu_d.residue().to_i64().expect("exponent below d");
    let x = ring.reduce_twisted(a, e);
    let y = ring.reduce(b);
    Ok(ring.ideal_lattice(&x) == ring.ideal_lattice(&y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    fn one(n: i64) -> TruncatedProfiniteInt {
        TruncatedProfiniteInt::new(1, n).unwrap()
    }

    #[test]
    fn spec_examples() {
        for (l, d) in [(2, 1), (3, 2), (5, 4), (7, 3)] {
            assert!(ideal_equal(&p("1-t"), &p("1-t"), &one(12 * 5 * 7), l, d).unwrap());
        }
        assert!(ideal_equal(&p("1-t"), &p("1-t^3"), &one(2), 2, 2).unwrap());
        assert!(ideal_equal(&p("t^2-3t+1"), &p("t^2-t+1"), &one(1), 5, 1).unwrap());
        assert!(ideal_equal(&p("t^2-3t+1"), &p("t^2-t+1"), &one(1), 3, 1).unwrap());
        // At d = 2 the values at t = -1 (5 and 3) separate the ideals mod 5.
        assert!(!ideal_equal(&p("t^2-3t+1"), &p("t^2-t+1"), &one(2), 5, 2).unwrap());
        let non_unit = TruncatedProfiniteInt::new(2, 4).unwrap();
        assert!(matches!(ideal_equal(&p("1"), &p("1"), &non_unit, 2, 2), Err(Error::NotAUnit(_))));
        assert!(ideal_equal(&p("1"), &p("1"), &one(4), 2, 3).is_err());
    }

    #[test]
    fn convolution() {
        let r = GroupRingQuotient::new(5, 3).unwrap();
        let x = r.reduce(&p("1+t^2"));
        let y = r.reduce(&p("t"));
        assert_eq!(r.mul(&x, &y), r.reduce(&p("t+1")));
        assert!(r.contains(&x, &r.mul(&x, &y)));
    }

    /// Ideal generated by `x` as a set, by brute force over all multiples.
    fn ideal_set(ring: &GroupRingQuotient, x: &[BigInt], l: u64) -> std::collections::BTreeSet<Vec<BigInt>> {
        let d = ring.d();
        let total = (l as usize).pow(d as u32);
        (0..total)
            .map(|mut k| {
                let y: Vec<BigInt> = (0..d)
                    .map(|_| {
                        let c = k % l as usize;
                        k /= l as usize;
                        BigInt::from(c)
                    })
                    .collect();
                ring.mul(x, &y)
            })
            .collect()
    }

    fn poly() -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec(-3i64..4, 1..5).prop_map(|c| LaurentPoly::from_coeffs(0, c.into_iter().map(BigInt::from)))
    }

    proptest! {
        #[test]
        fn lattice_matches_brute_force(a in poly(), b in poly(), l in 2u64..5, d in 1u64..4) {
            let ring = GroupRingQuotient::new(l, d as usize).unwrap();
            let x = ring.reduce(&a);
            let y = ring.reduce(&b);
            let brute = ideal_set(&ring, &x, l) == ideal_set(&ring, &y, l);
            prop_assert_eq!(brute, ideal_equal(&a, &b, &one(d as i64), l, d).unwrap());
        }

        #[test]
        fn twist_symmetry(a in poly(), b in poly(), mu in prop::sample::select(vec![1i64, 5, 7, 11]), l in 2u64..6) {
            let d = 12u64;
            let m = TruncatedProfiniteInt::new(mu, 12).unwrap();
            let inv = m.inverse().unwrap();
            let forward = ideal_equal(&a, &b, &m, l, d).unwrap();
            let backward = ideal_equal(&b, &a, &inv, l, d).unwrap();
            prop_assert_eq!(forward, backward);
        }
    }
}
