//! Exact integer and rational algebra: the kernel every other module builds on.

mod laurent;
mod lattice;
mod matrix;
mod order;
mod ratfunc;
mod resultant;
mod smith;

pub use laurent::{laurent_doteq, Coeff, LaurentPoly, QLaurent, UnitGroup};
pub use lattice::{
    hermite_rows, integer_inverse, left_kernel, primitive_integer_vector, rank_q, rational_row_basis,
    right_kernel, solve_left_q, to_integer_rows,
};
pub use matrix::{Domain, IntMatrix, LaurentMatrix, Matrix, RatMatrix};
pub use order::{annihilator_witness, module_order, AnnihilatorWitness};
pub use ratfunc::RationalFunction;
pub use resultant::{cyclic_resultant, cyclotomic, is_reciprocal, resultant, sylvester_matrix};
pub use smith::{smith_form, SmithDecomposition};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Nonnegative gcd of a slice of integers; zero for an empty or all-zero slice.
pub fn gcd_all<'a>(values: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    let mut g = BigInt::zero();
    for v in values {
        g = g.gcd(v);
    }
    g.abs()
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn int(n: i64) -> BigInt {
    BigInt::from(n)
}
