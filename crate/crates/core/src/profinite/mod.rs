//! Finite-precision profinite integers and the comparisons built on them.

mod conjugacy;
mod fried;
mod mc;
mod ring;

pub use conjugacy::{mu_conjugacy_check, mu_conjugacy_search, ConjugacyVerdict, SEARCH_BOUND};
pub use fried::{fried_compare, FriedVerdict};
pub use mc::{
    dual_specialize, mc_module, rank_one_factor, specialize, MCModule, ProfiniteTerm, RankOneFactor,
    SymbolicProfiniteMap,
};
pub use ring::{ideal_equal, GroupRingQuotient};

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::group::FiniteGroup;

/// An element of `ℤ̂` known modulo `N`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncatedProfiniteInt {
    residue: BigInt,
    modulus: BigInt,
}

impl TruncatedProfiniteInt {
    pub fn new(residue: impl Into<BigInt>, modulus: impl Into<BigInt>) -> Result<Self> {
        let modulus = modulus.into();
        if !modulus.is_positive() {
            return Err(Error::Invalid(format!("modulus {modulus} must be positive")));
        }
        let residue = residue.into().mod_floor(&modulus);
        Ok(TruncatedProfiniteInt { residue, modulus })
    }

    pub fn one(modulus: impl Into<BigInt>) -> Result<Self> {
        Self::new(1, modulus)
    }

    pub fn residue(&self) -> &BigInt {
        &self.residue
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    pub fn is_unit(&self) -> bool {
        self.residue.gcd(&self.modulus).is_one()
    }

    /// Image modulo a divisor `m` of the working modulus.
    pub fn reduce(&self, m: &BigInt) -> Result<Self> {
        if !m.is_positive() || !self.modulus.is_multiple_of(m) {
            return Err(Error::InsufficientPrecision(format!(
                "{m} does not divide the working modulus {}",
                self.modulus
            )));
        }
        Self::new(self.residue.clone(), m.clone())
    }

    fn common(&self, other: &Self) -> BigInt {
        self.modulus.gcd(&other.modulus)
    }

    pub fn add(&self, other: &Self) -> Self {
        let m = self.common(other);
        Self::new(&self.residue + &other.residue, m).expect("positive modulus")
    }

    pub fn mul(&self, other: &Self) -> Self {
        let m = self.common(other);
        Self::new(&self.residue * &other.residue, m).expect("positive modulus")
    }

    pub fn neg(&self) -> Self {
        Self::new(-&self.residue, self.modulus.clone()).expect("positive modulus")
    }

    pub fn inverse(&self) -> Result<Self> {
        let e = self.residue.extended_gcd(&self.modulus);
        if !e.gcd.is_one() {
            return Err(Error::NotAUnit(format!("{self} is not a unit")));
        }
        Self::new(e.x, self.modulus.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.residue.is_zero()
    }
}

impl fmt::Display for TruncatedProfiniteInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.residue, self.modulus)
    }
}

impl fmt::Debug for TruncatedProfiniteInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `g^ν`: the power `g^n` with `n ≡ ν` modulo the group order.
pub fn nu_power(group: &FiniteGroup, g: usize, nu: &TruncatedProfiniteInt) -> Result<usize> {
    let order = BigInt::from(group.order());
    if !nu.modulus().is_multiple_of(&order) {
        return Err(Error::InsufficientPrecision(format!(
            "group order {order} does not divide the modulus {}",
            nu.modulus()
        )));
    }
    Ok(group.pow(g, &nu.residue().mod_floor(&order)))
}
