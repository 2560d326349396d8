use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{hermite_rows, right_kernel, smith_form, to_integer_rows, IntMatrix, RatMatrix};

/// Saturated sublattice of `ℤ^n`, stored as Hermite-reduced basis rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeKernel {
    ambient: usize,
    basis: IntMatrix,
}

impl LatticeKernel {
    pub fn ambient_rank(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn corank(&self) -> usize {
        self.ambient - self.rank()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<BigInt>> {
        self.basis.to_rows()
    }

    /// `ℤ^n / K` is torsion free.
    pub fn is_saturated(&self) -> bool {
        smith_form(&self.basis).invariant_factors.iter().all(One::is_one)
    }

    pub fn contains(&self, u: &[BigInt]) -> bool {
        if u.len() != self.ambient {
            return false;
        }
        let q: Vec<BigRational> = u.iter().map(|x| BigRational::from_integer(x.clone())).collect();
        if self.rank() == 0 {
            return u.iter().all(Zero::is_zero);
        }
        // Saturation makes rational membership equivalent to integral membership.
        crate::exact::solve_left_q(&self.basis.to_rational(), &q).is_some()
    }
}

/// `{u ∈ ℤ^n : φ(u) = 0 for all φ ∈ V}` for `V` spanned by the given covectors.
pub fn lattice_kernel(n: usize, span: &[Vec<BigRational>]) -> Result<LatticeKernel> {
    if let Some(v) = span.iter().find(|v| v.len() != n) {
        return Err(Error::Dimension(format!("covector of length {} in rank {n}", v.len())));
    }
    let nonzero: Vec<Vec<BigRational>> = span.iter().filter(|v| v.iter().any(|x| !x.is_zero())).cloned().collect();
    let basis = if nonzero.is_empty() {
        IntMatrix::identity(n)
    } else {
        let v = to_integer_rows(&RatMatrix::from_rows(nonzero, n)?);
        let k = right_kernel(&v);
        if k.rows() == 0 {
            IntMatrix::zeros(0, n)
        } else {
            hermite_rows(&k)
        }
    };
    Ok(LatticeKernel { ambient: n, basis })
}

pub fn lattice_kernel_int(n: usize, span: &[Vec<BigInt>]) -> Result<LatticeKernel> {
    let q: Vec<Vec<BigRational>> =
        span.iter().map(|v| v.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
    lattice_kernel(n, &q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use proptest::prelude::*;

    fn v(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn examples() {
        let k = lattice_kernel_int(2, &[v(&[1, 0])]).unwrap();
        assert_eq!(k.basis_vectors(), vec![v(&[0, 1])]);
        let k = lattice_kernel(3, &[]).unwrap();
        assert_eq!(k.basis(), &IntMatrix::identity(3));
        let k = lattice_kernel_int(2, &[v(&[2, 4])]).unwrap();
        assert_eq!(k.basis_vectors(), vec![v(&[2, -1])]);
        assert!(k.is_saturated());
        let k = lattice_kernel(2, &[vec![rat(1, 3), rat(2, 3)]]).unwrap();
        assert_eq!(k.basis_vectors(), vec![v(&[2, -1])]);
        let k = lattice_kernel_int(2, &[v(&[1, 0]), v(&[0, 1])]).unwrap();
        assert_eq!(k.rank(), 0);
        assert!(k.contains(&v(&[0, 0])));
        assert!(!k.contains(&v(&[1, 0])));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn saturated_kernel(rows in prop::collection::vec(prop::collection::vec(-6i64..7, 4), 0..4)) {
            let span: Vec<Vec<BigInt>> = rows.iter().map(|r| v(r)).collect();
            let k = lattice_kernel_int(4, &span).unwrap();
            prop_assert!(k.is_saturated());
            let dim_v = if span.is_empty() { 0 } else { IntMatrix::from_rows(span.clone(), 4).unwrap().rank() };
            prop_assert_eq!(k.corank(), dim_v);
            for b in k.basis_vectors() {
                for phi in &span {
                    prop_assert!(crate::cones::cone::dot(phi, &b).is_zero());
                }
            }
        }
    }
}
