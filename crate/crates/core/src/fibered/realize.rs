use std::collections::{HashSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exact::{hermite_rows, IntMatrix, RatMatrix};
use crate::group::DEFAULT_ORDER_BOUND;

/// `σ(g) = P⁻¹·ρ(g)·P` with integer entries.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralRealization {
    /// Columns form a basis of the invariant lattice `∩_g ρ(g)ℤ^k`.
    pub conjugator: RatMatrix,
    pub matrices: Vec<IntMatrix>,
    pub group_order: usize,
}

fn closure(gens: &[RatMatrix], k: usize) -> Result<Vec<RatMatrix>> {
    let id = RatMatrix::identity(k);
    let mut seen: HashSet<RatMatrix> = HashSet::from([id.clone()]);
    let mut elements = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for s in gens {
            let h = g.dot(s);
            if seen.insert(h.clone()) {
                if elements.len() >= DEFAULT_ORDER_BOUND {
                    return Err(Error::Invalid(format!("generated group exceeds {DEFAULT_ORDER_BOUND} elements")));
                }
                elements.push(h.clone());
                queue.push_back(h);
            }
        }
    }
    Ok(elements)
}

/// Conjugate a finite rational matrix group into `GL(k, ℤ)` through the
/// intersection of its translates of the standard lattice.
pub fn realize_over_z(gens: &[RatMatrix]) -> Result<IntegralRealization> {
    let Some(first) = gens.first() else {
        return Err(Error::Invalid("no generators".into()));
    };
    let k = first.rows();
    for g in gens {
        if g.shape() != (k, k) {
            return Err(Error::Dimension("generators must be square of equal size".into()));
        }
        g.inverse()?;
    }
    let elements = closure(gens, k)?;
    // The dual of ∩ ρ(g)ℤ^k is spanned by the rows of all ρ(g)⁻¹, i.e. of all ρ(g).
    let den = elements.iter().flat_map(|g| g.iter()).fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scale = BigRational::from_integer(den);
    let mut rows = Vec::with_capacity(elements.len() * k);
    for g in &elements {
        for i in 0..k {
            rows.push(g.row(i).iter().map(|x| (x * &scale).to_integer()).collect::<Vec<_>>());
        }
    }
    let r = hermite_rows(&IntMatrix::from_rows(rows, k)?);
    let r = r.to_rational();
    let r_inv = r.inverse()?;
    let conjugator = r_inv.scale(&scale);
    let matrices = gens
        .iter()
        .map(|g| {
            r.dot(g).dot(&r_inv).to_integer().ok_or_else(|| Error::Invalid("conjugate is not integral".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IntegralRealization { conjugator, matrices, group_order: elements.len() })
}
