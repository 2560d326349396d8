use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Coefficient ring of a Laurent polynomial. Blanket-implemented for
/// `BigInt` and `BigRational`.
pub trait Coeff:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
}

impl<T> Coeff for T where
    T: Clone
        + PartialEq
        + fmt::Debug
        + Zero
        + One
        + Neg<Output = T>
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
{
}

/// A Laurent polynomial `Σ c_e t^e` stored sparsely. No stored coefficient is
/// zero, so the zero polynomial is the empty map.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly<C = BigInt> {
    terms: BTreeMap<i64, C>,
}

pub type QLaurent = LaurentPoly<BigRational>;

impl<C: Coeff> Default for LaurentPoly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coeff> LaurentPoly<C> {
    pub fn zero() -> Self {
        LaurentPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: C, exp: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentPoly { terms }
    }

    /// The variable `t`.
    pub fn t() -> Self {
        Self::monomial(C::one(), 1)
    }

    /// Dense constructor: `coeffs[i]` is the coefficient of `t^(low + i)`.
    pub fn from_coeffs(low: i64, coeffs: impl IntoIterator<Item = C>) -> Self {
        let mut terms = BTreeMap::new();
        for (i, c) in coeffs.into_iter().enumerate() {
            if !c.is_zero() {
                terms.insert(low + i as i64, c);
            }
        }
        LaurentPoly { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, C)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, exp: i64, c: C) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&exp) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(exp, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    /// True if the polynomial is `c·t^k` for a single term.
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn low_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn high_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// `high − low`; zero for monomials, `None` for the zero polynomial.
    pub fn width(&self) -> Option<i64> {
        Some(self.high_exp()? - self.low_exp()?)
    }

    pub fn coeff(&self, exp: i64) -> C {
        self.terms.get(&exp).cloned().unwrap_or_else(C::zero)
    }

    pub fn lowest_coeff(&self) -> Option<&C> {
        self.terms.values().next()
    }

    pub fn leading_coeff(&self) -> Option<&C> {
        self.terms.values().next_back()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &C)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Dense coefficients from the lowest exponent to the highest.
    pub fn dense(&self) -> (i64, Vec<C>) {
        match (self.low_exp(), self.high_exp()) {
            (Some(lo), Some(hi)) => (lo, (lo..=hi).map(|e| self.coeff(e)).collect()),
            _ => (0, Vec::new()),
        }
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    /// Shift so that the lowest exponent is zero.
    pub fn normalize_low(&self) -> Self {
        match self.low_exp() {
            Some(lo) => self.shift(-lo),
            None => Self::zero(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly { terms: self.terms.iter().map(|(e, x)| (*e, x.clone() * c.clone())).collect() }
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> LaurentPoly<D> {
        LaurentPoly::from_terms(self.terms.iter().map(|(e, c)| (*e, f(c))))
    }

    /// Substitute `t ↦ t^k`. `k = −1` gives the bar involution `p(t⁻¹)`.
    pub fn substitute_power(&self, k: i64) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, c)| (e * k, c.clone())))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Evaluate at a value; negative exponents need an inverse, so this is
    /// only offered for polynomials with nonnegative exponents.
    pub fn eval_poly(&self, x: &C) -> Option<C> {
        if self.low_exp().is_some_and(|lo| lo < 0) {
            return None;
        }
        let mut acc = C::zero();
        let Some(hi) = self.high_exp() else {
            return Some(acc);
        };
        for e in (0..=hi).rev() {
            acc = acc * x.clone() + self.coeff(e);
        }
        Some(acc)
    }

    /// Truncate to exponents `<= max_exp`.
    pub fn truncate(&self, max_exp: i64) -> Self {
        LaurentPoly { terms: self.terms.range(..=max_exp).map(|(e, c)| (*e, c.clone())).collect() }
    }
}

impl<C: Coeff> Add for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn add(self, rhs: Self) -> LaurentPoly<C> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl<C: Coeff> Sub for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn sub(self, rhs: Self) -> LaurentPoly<C> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl<C: Coeff> Mul for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn mul(self, rhs: Self) -> LaurentPoly<C> {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<C: Coeff> Neg for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn neg(self) -> LaurentPoly<C> {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<C: Coeff> $tr for LaurentPoly<C> {
            type Output = LaurentPoly<C>;
            fn $m(self, rhs: Self) -> LaurentPoly<C> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<C: Coeff> Neg for LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn neg(self) -> LaurentPoly<C> {
        -&self
    }
}

impl<C: Coeff> Zero for LaurentPoly<C> {
    fn zero() -> Self {
        LaurentPoly::zero()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<C: Coeff> One for LaurentPoly<C> {
    fn one() -> Self {
        LaurentPoly::one()
    }
}

/// Which units are allowed in a dotted equality `p ≐ q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitGroup {
    /// `q = ±t^k p`.
    PlusMinusOne,
    /// `q = c·t^k p` for any nonzero rational `c`.
    Rationals,
}

/// `q = c·t^k·p` for a monomial shift `k` and a unit `c` of the chosen group.
pub fn laurent_doteq(p: &LaurentPoly, q: &LaurentPoly, units: UnitGroup) -> bool {
    match units {
        UnitGroup::PlusMinusOne => p.canonical() == q.canonical(),
        UnitGroup::Rationals => p.primitive_canonical() == q.primitive_canonical(),
    }
}

impl LaurentPoly<BigInt> {
    /// Nonnegative gcd of the coefficients.
    pub fn content(&self) -> BigInt {
        super::gcd_all(self.terms.values())
    }

    /// Representative of the `±t^k` class: lowest exponent 0, lowest
    /// coefficient positive.
    pub fn canonical(&self) -> Self {
        let p = self.normalize_low();
        match p.lowest_coeff() {
            Some(c) if c.is_negative() => -&p,
            _ => p,
        }
    }

    /// Representative of the `ℚ^× t^k` class restricted to integer
    /// polynomials: canonical and content one.
    pub fn primitive_canonical(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let g = self.content();
        self.map_coeffs(|c| c / &g).canonical()
    }

    pub fn to_rational(&self) -> QLaurent {
        self.map_coeffs(|c| BigRational::from_integer(c.clone()))
    }

    /// Reduce coefficients mod `q` into `[0, q)`.
    pub fn reduce_mod(&self, q: &BigInt) -> Self {
        self.map_coeffs(|c| c.mod_floor(q))
    }

    /// Exact division in `ℤ[t^{±1}]`; `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (num_low, mut rem) = self.dense();
        let (den_low, den) = d.dense();
        // Work with ordinary polynomials; coefficient lists from low to high.
        let dl = den.len();
        if rem.len() < dl {
            return None;
        }
        let lead = den[dl - 1].clone();
        let mut quot = vec![BigInt::zero(); rem.len() - dl + 1];
        for i in (0..quot.len()).rev() {
            let top = rem[i + dl - 1].clone();
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(&lead);
            if !r.is_zero() {
                return None;
            }
            for (j, dc) in den.iter().enumerate() {
                rem[i + j] -= &q * dc;
            }
            quot[i] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::from_coeffs(num_low - den_low, quot))
    }

    /// Greatest common divisor in `ℤ[t^{±1}]`, returned in canonical form.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.canonical();
        }
        if other.is_zero() {
            return self.canonical();
        }
        let content = self.content().gcd(&other.content());
        let mut a = self.primitive_canonical();
        let mut b = other.primitive_canonical();
        if a.high_exp() < b.high_exp() {
            std::mem::swap(&mut a, &mut b);
        }
        // Primitive pseudo-remainder sequence.
        while !b.is_zero() {
            let r = pseudo_rem(&a, &b);
            a = b;
            b = if r.is_zero() { r } else { r.primitive_canonical() };
        }
        a.primitive_canonical().scale(&content)
    }
}

/// Pseudo-remainder of polynomials with lowest exponent 0.
fn pseudo_rem(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    let (_, mut r) = a.dense();
    let (_, d) = b.dense();
    let dl = d.len();
    if r.len() < dl {
        return a.clone();
    }
    let lead = d[dl - 1].clone();
    let mut top = r.len();
    while top >= dl {
        let c = r[top - 1].clone();
        if !c.is_zero() {
            for x in r.iter_mut() {
                *x *= &lead;
            }
            let off = top - dl;
            for (j, dc) in d.iter().enumerate() {
                r[off + j] -= &c * dc;
            }
        }
        top -= 1;
    }
    r.truncate(dl - 1);
    LaurentPoly::from_coeffs(0, r)
}

impl QLaurent {
    /// Representative of the `ℚ^× t^k` class: lowest exponent 0, lowest
    /// coefficient 1.
    pub fn canonical(&self) -> Self {
        let p = self.normalize_low();
        match p.lowest_coeff().cloned() {
            Some(c) => p.scale(&c.recip()),
            None => p,
        }
    }

    /// Scale to an integer polynomial with content one (sign of the lowest
    /// coefficient positive) and shift to lowest exponent 0.
    pub fn to_primitive_integer(&self) -> LaurentPoly<BigInt> {
        if self.is_zero() {
            return LaurentPoly::zero();
        }
        let den = self.terms().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let p: LaurentPoly<BigInt> = self.map_coeffs(|c| (c * BigRational::from_integer(den.clone())).to_integer());
        p.primitive_canonical()
    }

    /// Division with remainder by a nonzero polynomial, treating both as
    /// ordinary polynomials after shifting to lowest exponent 0.
    pub fn div_rem_poly(&self, d: &Self) -> (Self, Self) {
        let a = self.normalize_low();
        let d = d.normalize_low();
        let (_, mut r) = a.dense();
        let (_, dd) = d.dense();
        let dl = dd.len();
        if r.len() < dl {
            return (Self::zero(), a);
        }
        let lead_inv = dd[dl - 1].recip();
        let mut quot = vec![BigRational::zero(); r.len() - dl + 1];
        for i in (0..quot.len()).rev() {
            let q = &r[i + dl - 1] * &lead_inv;
            if q.is_zero() {
                continue;
            }
            for (j, dc) in dd.iter().enumerate() {
                r[i + j] -= &q * dc;
            }
            quot[i] = q;
        }
        r.truncate(dl - 1);
        (Self::from_coeffs(0, quot), Self::from_coeffs(0, r))
    }

    /// Exact division in `ℚ[t^{±1}]`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let shift = self.low_exp().unwrap() - d.low_exp().unwrap();
        let (q, r) = self.div_rem_poly(d);
        r.is_zero().then(|| q.shift(shift))
    }

    /// Canonical gcd over `ℚ[t^{±1}]`.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.normalize_low();
        let mut b = other.normalize_low();
        while !b.is_zero() {
            let (_, r) = a.div_rem_poly(&b);
            a = b;
            b = r.normalize_low();
        }
        a.canonical()
    }
}

impl<C: Coeff + fmt::Display + Signed> fmt::Display for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let unit = abs.is_one();
            match *e {
                0 => write!(f, "{abs}")?,
                _ => {
                    if !unit {
                        let s = abs.to_string();
                        if s.contains('/') {
                            write!(f, "({s})")?;
                        } else {
                            write!(f, "{s}")?;
                        }
                    }
                    if *e == 1 {
                        write!(f, "t")?;
                    } else {
                        write!(f, "t^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Debug for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

/// Parses sums of integer monomials such as `t^2-3t+1`, `-2*t^-1 + 5`,
/// `t^(-3)`. Whitespace is ignored; `x` is accepted as the variable too.
impl FromStr for LaurentPoly<BigInt> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let chars: Vec<(usize, char)> = s.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
        let err = |pos: usize, msg: &str| Error::Parse { pos, msg: msg.to_string() };
        if chars.is_empty() {
            return Err(err(0, "empty polynomial"));
        }
        let mut i = 0;
        let mut out = LaurentPoly::zero();
        let peek = |i: usize| chars.get(i).map(|&(_, c)| c);
        let pos_of = |i: usize| chars.get(i).map(|&(p, _)| p).unwrap_or(s.len());
        let read_int = |i: &mut usize| -> Option<BigInt> {
            let start = *i;
            while peek(*i).is_some_and(|c| c.is_ascii_digit()) {
                *i += 1;
            }
            if *i == start {
                return None;
            }
            let digits: String = chars[start..*i].iter().map(|&(_, c)| c).collect();
            digits.parse().ok()
        };
        while i < chars.len() {
            let mut sign = BigInt::one();
            match peek(i) {
                Some('+') => i += 1,
                Some('-') => {
                    sign = -sign;
                    i += 1;
                }
                _ if i > 0 => return Err(err(pos_of(i), "expected '+' or '-'")),
                _ => {}
            }
            let coeff = read_int(&mut i);
            if coeff.is_some() && peek(i) == Some('*') {
                i += 1;
            }
            let mut exp = 0i64;
            if matches!(peek(i), Some('t') | Some('x')) {
                i += 1;
                exp = 1;
                if peek(i) == Some('^') {
                    i += 1;
                    let paren = peek(i) == Some('(');
                    if paren {
                        i += 1;
                    }
                    let neg = peek(i) == Some('-');
                    if neg {
                        i += 1;
                    }
                    let v = read_int(&mut i).ok_or_else(|| err(pos_of(i), "expected exponent"))?;
                    exp = i64::try_from(&v).map_err(|_| err(pos_of(i), "exponent out of range"))?;
                    if neg {
                        exp = -exp;
                    }
                    if paren {
                        if peek(i) != Some(')') {
                            return Err(err(pos_of(i), "expected ')'"));
                        }
                        i += 1;
                    }
                }
            } else if coeff.is_none() {
                return Err(err(pos_of(i), "expected a coefficient or 't'"));
            }
            let c = coeff.unwrap_or_else(BigInt::one) * sign;
            out = &out + &LaurentPoly::monomial(c, exp);
        }
        Ok(out)
    }
}
