use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::laurent::{LaurentPoly, UnitGroup};
use crate::error::{Error, Result};

/// Reduced quotient of integer Laurent polynomials.
///
/// The denominator has lowest exponent 0 and a positive lowest coefficient,
/// and shares no nonunit factor with the numerator.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalFunction {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RationalFunction {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = num.gcd(&den);
        let mut num = num.div_exact(&g).expect("gcd divides numerator");
        let mut den = den.div_exact(&g).expect("gcd divides denominator");
        let shift = den.low_exp().unwrap();
        num = num.shift(-shift);
        den = den.shift(-shift);
        if den.lowest_coeff().unwrap().is_negative() {
            num = -num;
            den = -den;
        }
        Ok(RationalFunction { num, den })
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        Self::new(p, LaurentPoly::one()).expect("denominator one")
    }

    pub fn zero() -> Self {
        RationalFunction { num: LaurentPoly::zero(), den: LaurentPoly::one() }
    }

    pub fn one() -> Self {
        Self::from_poly(LaurentPoly::one())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(&self.num * &other.num, &self.den * &other.den).expect("nonzero denominators")
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Self::new(&self.num * &other.den, &self.den * &other.num)
    }

    /// Representative up to `±t^k` (or `ℚ^× t^k`).
    pub fn doteq_canonical(&self, units: UnitGroup) -> (LaurentPoly, LaurentPoly) {
        match units {
            UnitGroup::PlusMinusOne => (self.num.canonical(), self.den.canonical()),
            UnitGroup::Rationals => (self.num.primitive_canonical(), self.den.primitive_canonical()),
        }
    }

    pub fn doteq(&self, other: &Self, units: UnitGroup) -> bool {
        self.doteq_canonical(units) == other.doteq_canonical(units)
    }

    /// Power series coefficients `c_0..c_{depth}` when the function is a
    /// power series (numerator without negative powers, denominator with
    /// nonzero constant term).
    pub fn expand(&self, depth: usize) -> Option<Vec<BigRational>> {
        if self.num.low_exp().is_some_and(|e| e < 0) {
            return None;
        }
        let d0 = self.den.coeff(0);
        if d0.is_zero() {
            return None;
        }
        let d0 = BigRational::from_integer(d0);
        let mut out: Vec<BigRational> = Vec::with_capacity(depth + 1);
        for n in 0..=depth {
            let mut acc = BigRational::from_integer(self.num.coeff(n as i64));
            for k in 1..=n {
                let dk = self.den.coeff(k as i64);
                if !dk.is_zero() {
                    acc -= BigRational::from_integer(dk) * &out[n - k];
                }
            }
            out.push(acc / &d0);
        }
        Some(out)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({self})")
    }
}
