//! Integer lattices and rational row spaces.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::matrix::{IntMatrix, RatMatrix};
use super::smith::smith_form;
use crate::error::{Error, Result};

/// Row-style Hermite normal form of the row lattice of `m`: nonzero rows
/// only, echelon, positive pivots, entries above each pivot in `[0, pivot)`.
pub fn hermite_rows(m: &IntMatrix) -> IntMatrix {
    let mut a = m.to_rows();
    let cols = m.cols();
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..cols {
        if r == a.len() {
            break;
        }
        // Euclid on column c among rows r..
        loop {
            let mut best: Option<usize> = None;
            for i in r..a.len() {
                if !a[i][c].is_zero() && best.is_none_or(|b| a[i][c].abs() < a[b][c].abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            a.swap(r, b);
            let mut done = true;
            for i in r + 1..a.len() {
                if a[i][c].is_zero() {
                    continue;
                }
                let q = a[i][c].div_floor(&a[r][c]);
                for j in c..cols {
                    let v = &a[r][j] * &q;
                    a[i][j] -= v;
                }
                done &= a[i][c].is_zero();
            }
            if done {
                break;
            }
        }
        if r < a.len() && !a[r][c].is_zero() {
            if a[r][c].is_negative() {
                for x in a[r].iter_mut() {
                    *x = -x.clone();
                }
            }
            pivots.push(c);
            r += 1;
        }
    }
    a.truncate(r);
    for (k, &c) in pivots.iter().enumerate() {
        let p = a[k][c].clone();
        for i in 0..k {
            let q = a[i][c].div_floor(&p);
            if !q.is_zero() {
                for j in c..cols {
                    let v = &a[k][j] * &q;
                    a[i][j] -= v;
                }
            }
        }
    }
    IntMatrix::from_rows(a, cols).expect("rows share a length")
}

/// Inverse of a unimodular integer matrix.
pub fn integer_inverse(m: &IntMatrix) -> Result<IntMatrix> {
    let d = m.det()?;
    if d.is_one() {
        m.adjugate()
    } else if (-&d).is_one() {
        Ok(m.adjugate()?.neg())
    } else {
        Err(Error::NotAUnit(format!("determinant {d} is not ±1")))
    }
}

/// Saturated integer basis (as rows) of `{x : x·M = 0}`.
pub fn left_kernel(m: &IntMatrix) -> IntMatrix {
    let s = smith_form(m);
    let rank = s.rank();
    let rows: Vec<usize> = (rank..m.rows()).collect();
    let cols: Vec<usize> = (0..m.rows()).collect();
    s.u.submatrix(&rows, &cols)
}

/// Saturated integer basis (as rows) of `{x : M·x = 0}`.
pub fn right_kernel(m: &IntMatrix) -> IntMatrix {
    left_kernel(&m.transpose())
}

pub fn rank_q(m: &IntMatrix) -> usize {
    m.rank()
}

/// Reduced row echelon form over ℚ with zero rows dropped.
pub fn rational_row_basis(m: &RatMatrix) -> RatMatrix {
    let mut a = m.to_rows();
    let cols = m.cols();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let v = &a[r][j] * &f;
                    a[i][j] -= v;
                }
            }
        }
        r += 1;
        if r == a.len() {
            break;
        }
    }
    a.truncate(r);
    RatMatrix::from_rows(a, cols).expect("rows share a length")
}

/// Some `x` with `x·B = v`, if one exists.
pub fn solve_left_q(b: &RatMatrix, v: &[BigRational]) -> Option<Vec<BigRational>> {
    let (n, m) = b.shape();
    if v.len() != m {
        return None;
    }
    // Solve Bᵀ x = v by elimination on the augmented system.
    let mut a: Vec<Vec<BigRational>> = (0..m)
        .map(|j| {
            let mut row: Vec<BigRational> = (0..n).map(|i| b[(i, j)].clone()).collect();
            row.push(v[j].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..=n {
                    let t = &a[r][j] * &f;
                    a[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m {
            break;
        }
    }
    if a[r..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); n];
    for (k, &c) in pivots.iter().enumerate() {
        x[c] = a[k][n].clone();
    }
    Some(x)
}

/// Scale every row to a primitive integer vector (positive multiple).
pub fn to_integer_rows(m: &RatMatrix) -> IntMatrix {
    let rows = m
        .to_rows()
        .into_iter()
        .map(|row| primitive_integer_vector(&row))
        .collect();
    IntMatrix::from_rows(rows, m.cols()).expect("rows share a length")
}

/// Positive rational multiple of `v` with coprime integer entries.
pub fn primitive_integer_vector(v: &[BigRational]) -> Vec<BigInt> {
    let den = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer()).collect();
    let g = super::gcd_all(&ints);
    if g.is_zero() {
        ints
    } else {
        ints.into_iter().map(|x| x / &g).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn hermite_example() {
        let m = IntMatrix::from_i64(3, 3, &[2, 4, 4, -6, 6, 12, 10, -4, -16]);
        let h = hermite_rows(&m);
        assert_eq!(h, IntMatrix::from_i64(3, 3, &[2, 4, 4, 0, 6, 0, 0, 0, 12]));
        let dup = IntMatrix::from_i64(3, 2, &[1, 2, 2, 4, 3, 6]);
        assert_eq!(hermite_rows(&dup), IntMatrix::from_i64(1, 2, &[1, 2]));
    }

    #[test]
    fn kernels_are_saturated() {
        let m = IntMatrix::from_i64(1, 2, &[2, 4]);
        let k = right_kernel(&m);
        assert_eq!(k.rows(), 1);
        assert_eq!(hermite_rows(&k.neg()).row(0)[0].abs(), BigInt::from(2));
        assert!(m.dot(&k.transpose()).is_zero());
        let l = left_kernel(&IntMatrix::from_i64(3, 1, &[2, 4, 6]));
        assert_eq!(l.rows(), 2);
        assert_eq!(smith_form(&l).invariant_factors, vec![BigInt::one(), BigInt::one()]);
    }

    #[test]
    fn rational_solve() {
        let b = RatMatrix::from_rows(vec![vec![rat(1, 1), rat(2, 1)], vec![rat(0, 1), rat(1, 2)]], 2).unwrap();
        let v = vec![rat(3, 1), rat(7, 1)];
        let x = solve_left_q(&b, &v).unwrap();
        assert_eq!(b.left_apply(&x), v);
        let sing = RatMatrix::from_rows(vec![vec![rat(1, 1), rat(1, 1)]], 2).unwrap();
        assert!(solve_left_q(&sing, &[rat(1, 1), rat(2, 1)]).is_none());
        assert_eq!(rational_row_basis(&sing).rows(), 1);
        assert_eq!(integer_inverse(&IntMatrix::from_i64(2, 2, &[2, 1, 1, 1])).unwrap(), IntMatrix::from_i64(2, 2, &[1, -1, -1, 2]));
    }
}
