use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::laurent::LaurentPoly;
use super::matrix::{Domain, IntMatrix};
use crate::error::{Error, Result};

/// Coefficients low to high of an ordinary polynomial; trailing zeros trimmed.
type Dense = Vec<BigInt>;

fn dense_of(f: &LaurentPoly) -> Result<Dense> {
    match f.low_exp() {
        None => Ok(Vec::new()),
        Some(low) if low < 0 => Err(Error::Invalid("negative exponent in an ordinary polynomial".into())),
        Some(low) => {
            let (_, c) = f.dense();
            let mut out = vec![BigInt::zero(); low as usize];
            out.extend(c);
            Ok(out)
        }
    }
}

fn deg(p: &Dense) -> usize {
    p.len() - 1
}

fn trim(p: &mut Dense) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn content(p: &Dense) -> BigInt {
    super::gcd_all(p)
}

fn prem(a: &Dense, b: &Dense) -> Dense {
    let mut r = a.clone();
    let db = deg(b);
    let lead = b[db].clone();
    let mut e = deg(a) as i64 - db as i64 + 1;
    while !r.is_empty() && r.len() > db {
        let top = r.len() - 1;
        let c = r[top].clone();
        let off = top - db;
        for x in r.iter_mut() {
            *x *= &lead;
        }
        for (j, bc) in b.iter().enumerate() {
            r[off + j] -= &c * bc;
        }
        trim(&mut r);
        e -= 1;
    }
    if e > 0 {
        let f = num_traits::pow(lead, e as usize);
        for x in r.iter_mut() {
            *x *= &f;
        }
    }
    r
}

/// Resultant of two ordinary polynomials by the subresultant pseudo-remainder
/// sequence. Inputs must not have negative exponents.
pub fn resultant(f: &LaurentPoly, g: &LaurentPoly) -> Result<BigInt> {
    let mut a = dense_of(f)?;
    let mut b = dense_of(g)?;
    if a.is_empty() || b.is_empty() {
        return Ok(BigInt::zero());
    }
    let mut s = BigInt::one();
    if deg(&a) < deg(&b) {
        if deg(&a) % 2 == 1 && deg(&b) % 2 == 1 {
            s = -s;
        }
        std::mem::swap(&mut a, &mut b);
    }
    if deg(&b) == 0 {
        return Ok(s * num_traits::pow(b[0].clone(), deg(&a)));
    }
    let ca = content(&a);
    let cb = content(&b);
    let t = num_traits::pow(ca.clone(), deg(&b)) * num_traits::pow(cb.clone(), deg(&a));
    for x in a.iter_mut() {
        *x = x.exact_div(&ca);
    }
    for x in b.iter_mut() {
        *x = x.exact_div(&cb);
    }
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let delta = deg(&a) - deg(&b);
        if deg(&a) % 2 == 1 && deg(&b) % 2 == 1 {
            s = -s;
        }
        let r = prem(&a, &b);
        a = b;
        let div = &g * num_traits::pow(h.clone(), delta);
        b = r.into_iter().map(|x| x.exact_div(&div)).collect();
        g = a[deg(&a)].clone();
        h = if delta == 0 {
            h
        } else {
            num_traits::pow(g.clone(), delta).exact_div(&num_traits::pow(h.clone(), delta - 1))
        };
        if b.is_empty() {
            return Ok(BigInt::zero());
        }
        if deg(&b) == 0 {
            let da = deg(&a);
            let h_final = if da == 0 {
                h
            } else {
                num_traits::pow(b[0].clone(), da).exact_div(&num_traits::pow(h, da - 1))
            };
            return Ok(s * t * h_final);
        }
    }
}

/// Sylvester matrix of two ordinary polynomials.
pub fn sylvester_matrix(f: &LaurentPoly, g: &LaurentPoly) -> Result<IntMatrix> {
    let a = dense_of(f)?;
    let b = dense_of(g)?;
    if a.is_empty() || b.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    let (m, n) = (deg(&a), deg(&b));
    let size = m + n;
    Ok(IntMatrix::from_fn(size, size, |i, j| {
        if i < n {
            // Row i holds coefficients of t^{n-1-i}·f, highest first.
            let k = j as i64 - i as i64;
            if (0..=m as i64).contains(&k) {
                a[m - k as usize].clone()
            } else {
                BigInt::zero()
            }
        } else {
            let k = j as i64 - (i - n) as i64;
            if (0..=n as i64).contains(&k) {
                b[n - k as usize].clone()
            } else {
                BigInt::zero()
            }
        }
    }))
}

/// `Res(t^m − 1, f)`, the product of `f` over the m-th roots of unity.
pub fn cyclic_resultant(f: &LaurentPoly, m: u32) -> Result<BigInt> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if m == 0 {
        return Err(Error::Invalid("cyclic resultant needs m ≥ 1".into()));
    }
    let k = f.low_exp().unwrap();
    let g = f.normalize_low();
    let tm1 = LaurentPoly::from_terms([(m as i64, BigInt::one()), (0, -BigInt::one())]);
    let r = resultant(&tm1, &g)?;
    // The product of all m-th roots of unity is (−1)^{m+1}.
    let flip = m.is_multiple_of(2) && k.is_odd();
    Ok(if flip { -r } else { r })
}

/// Palindromic coefficient sequence after shifting the lowest exponent to 0.
pub fn is_reciprocal(f: &LaurentPoly) -> bool {
    let (_, c) = f.dense();
    c.iter().eq(c.iter().rev())
}

/// The n-th cyclotomic polynomial.
pub fn cyclotomic(n: u32) -> LaurentPoly {
    assert!(n >= 1, "cyclotomic index must be positive");
    let mut p = LaurentPoly::from_terms([(n as i64, BigInt::one()), (0, -BigInt::one())]);
    for d in 1..n {
        if n.is_multiple_of(d) {
            p = p.div_exact(&cyclotomic(d)).expect("cyclotomic factor divides t^n - 1");
        }
    }
    p
}
