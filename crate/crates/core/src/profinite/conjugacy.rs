use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::TruncatedProfiniteInt;
use crate::error::{Error, Result};
use crate::exact::{smith_form, IntMatrix, LaurentPoly};

/// Exhaustive search is used when the solution space of `X·A ≡ C·X` has
/// at most this many elements.
pub const SEARCH_BOUND: u64 = 10_000_000;

/// Random samples drawn when the solution space is too large to enumerate.
const RANDOM_TRIALS: usize = 200_000;

#[derive(Debug, Clone, PartialEq)]
pub enum ConjugacyVerdict {
    /// `X·A ≡ B^μ·X (mod N)` with `X` invertible mod `N`.
    Conjugate { conjugator: IntMatrix },
    NotConjugate { reason: String },
    /// Necessary conditions hold but no conjugator was found.
    Unresolved,
}

impl ConjugacyVerdict {
    /// `Some(answer)` when decided.
    pub fn decided(&self) -> Option<bool> {
        match self {
            ConjugacyVerdict::Conjugate { .. } => Some(true),
            ConjugacyVerdict::NotConjugate { .. } => Some(false),
            ConjugacyVerdict::Unresolved => None,
        }
    }
}

fn mat_mul_mod(a: &IntMatrix, b: &IntMatrix, n: &BigInt) -> IntMatrix {
    a.dot(b).reduce_mod(n)
}

fn order_mod(b: &IntMatrix, n: &BigInt, cap: u64) -> Result<u64> {
    let id = IntMatrix::identity(b.rows()).reduce_mod(n);
    let base = b.reduce_mod(n);
    let mut cur = base.clone();
    let mut k = 1u64;
    while cur != id {
        if k >= cap {
            return Err(Error::Unsupported(format!("order of the matrix mod {n} exceeds {cap}")));
        }
        cur = mat_mul_mod(&cur, &base, n);
        k += 1;
    }
    Ok(k)
}

fn pow_mod(b: &IntMatrix, mut e: u64, n: &BigInt) -> IntMatrix {
    let mut result = IntMatrix::identity(b.rows()).reduce_mod(n);
    let mut base = b.reduce_mod(n);
    while e > 0 {
        if e & 1 == 1 {
            result = mat_mul_mod(&result, &base, n);
        }
        base = mat_mul_mod(&base, &base, n);
        e >>= 1;
    }
    result
}

fn is_unit_mod(x: &BigInt, n: &BigInt) -> bool {
    x.gcd(n).is_one()
}

/// Whether `A` is conjugate to `B^μ` in `GL(r, ℤ/N)`, with a fixed seed for
/// the randomized fallback.
pub fn mu_conjugacy_check(
    a: &IntMatrix,
    b: &IntMatrix,
    mu: &TruncatedProfiniteInt,
    n: u64,
) -> Result<ConjugacyVerdict> {
    mu_conjugacy_search(a, b, mu, n, 0)
}

pub fn mu_conjugacy_search(
    a: &IntMatrix,
    b: &IntMatrix,
    mu: &TruncatedProfiniteInt,
    n: u64,
    seed: u64,
) -> Result<ConjugacyVerdict> {
    let r = a.rows();
    if !a.is_square() || b.shape() != a.shape() {
        return Err(Error::Dimension("conjugacy needs square matrices of equal size".into()));
    }
    if n < 2 {
        return Ok(ConjugacyVerdict::Conjugate { conjugator: IntMatrix::identity(r) });
    }
    let nb = BigInt::from(n);
    for (name, m) in [("A", a), ("B", b)] {
        if !is_unit_mod(&m.det()?, &nb) {
            return Err(Error::Singular(format!("{name} is not invertible mod {n}")));
        }
    }
    let ord = order_mod(b, &nb, SEARCH_BOUND)?;
    let ordb = BigInt::from(ord);
    if !mu.modulus().is_multiple_of(&ordb) {
        return Err(Error::InsufficientPrecision(format!(
            "order {ord} of B mod {n} does not divide the modulus {}",
            mu.modulus()
        )));
    }
    let e = mu.residue().mod_floor(&ordb).to_u64().expect("exponent below order");
    let c = pow_mod(b, e, &nb);

    // X·A − C·X ≡ 0 is linear in the r² entries of X (row-major).
    let size = r * r;
    let lin = IntMatrix::from_fn(size, size, |row, col| {
        let (i, j) = (row / r, row % r);
        let (p, q) = (col / r, col % r);
        let mut v = BigInt::zero();
        if p == i {
            v += &a[(q, j)];
        }
        if q == j {
            v -= &c[(i, p)];
        }
        v
    });
    let s = smith_form(&lin);
    // Solutions: x = V·y with d_k·y_k ≡ 0 (mod N), i.e. y_k a multiple of N/g_k.
    let steps: Vec<u64> = (0..size)
        .map(|k| {
            let d = s.invariant_factors.get(k).cloned().unwrap_or_default();
            let g = d.gcd(&nb);
            (n / g.to_u64().unwrap()) % n
        })
        .collect();
    let counts: Vec<u64> = steps.iter().map(|&st| if st == 0 { 1 } else { n / st }).collect();
    let total = counts.iter().try_fold(1u64, |acc, &c| acc.checked_mul(c));
    let v: Vec<Vec<u64>> = (0..size)
        .map(|i| (0..size).map(|j| s.v[(i, j)].mod_floor(&nb).to_u64().unwrap()).collect())
        .collect();

    let build = |y: &[u64]| -> Vec<u64> {
        (0..size)
            .map(|i| {
                let mut acc: u128 = 0;
                for j in 0..size {
                    acc = (acc + v[i][j] as u128 * y[j] as u128) % n as u128;
                }
                acc as u64
            })
            .collect()
    };
    let invertible = |x: &[u64]| -> Option<IntMatrix> {
        let m = IntMatrix::from_fn(r, r, |i, j| BigInt::from(x[i * r + j]));
        is_unit_mod(&m.det().ok()?, &nb).then_some(m)
    };

    if let Some(total) = total.filter(|&t| t <= SEARCH_BOUND) {
        let mut digits = vec![0u64; size];
        for _ in 0..total {
            let y: Vec<u64> = digits.iter().zip(&steps).map(|(&d, &st)| d * st % n).collect();
            if let Some(x) = invertible(&build(&y)) {
                return Ok(ConjugacyVerdict::Conjugate { conjugator: x });
            }
            for k in 0..size {
                digits[k] += 1;
                if digits[k] < counts[k] {
                    break;
                }
                digits[k] = 0;
            }
        }
        return Ok(ConjugacyVerdict::NotConjugate { reason: format!("exhaustive search over {total} solutions") });
    }

    if !char_polys_agree(a, &c, &nb)? {
        return Ok(ConjugacyVerdict::NotConjugate { reason: format!("det(1 - tA) and det(1 - tB^μ) differ mod {n}") });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_TRIALS {
        let y: Vec<u64> = steps
            .iter()
            .zip(&counts)
            .map(|(&st, &ct)| if st == 0 { 0 } else { rng.gen_range(0..ct) * st % n })
            .collect();
        if let Some(x) = invertible(&build(&y)) {
            return Ok(ConjugacyVerdict::Conjugate { conjugator: x });
        }
    }
    Ok(ConjugacyVerdict::Unresolved)
}

/// Characteristic-type polynomials reduced mod `n`; a necessary condition.
pub(crate) fn char_polys_agree(a: &IntMatrix, c: &IntMatrix, n: &BigInt) -> Result<bool> {
    let pa: LaurentPoly = a.det_one_minus_t()?.reduce_mod(n);
    Ok(pa == c.det_one_minus_t()?.reduce_mod(n))
}
