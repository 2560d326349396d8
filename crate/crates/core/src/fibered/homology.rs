use std::thread;

use num_bigint::BigInt;
use num_traits::One;

use super::fox::{fox_derivative, surface_chain_complex, with_inverses};
use super::FiberedPresentation;
use crate::error::{Error, Result};
use crate::exact::{integer_inverse, left_kernel, smith_form, IntMatrix};

/// `H_n` of the fiber with twisted integer coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeHomology {
    pub degree: usize,
    pub free_rank: usize,
    /// Invariant factors greater than one.
    pub torsion: Vec<BigInt>,
    /// Monodromy on the free quotient; column `i` is the image of basis vector `i`.
    pub action: IntMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwistedHomologyResult {
    /// Ranks of the twisted chain groups `ℤ^k ⊗ C_n`.
    pub chain_ranks: [usize; 3],
    pub degrees: Vec<DegreeHomology>,
}

impl TwistedHomologyResult {
    pub fn degree(&self, n: usize) -> Option<&DegreeHomology> {
        self.degrees.get(n)
    }
}

/// Boundary maps and the lifted monodromy of `ℤ^k ⊗ C_•(S̃)`.
#[derive(Debug, Clone)]
pub(crate) struct TwistedComplex {
    /// `∂₁ : C_1 → C_0`, `nk × k`.
    pub d1: IntMatrix,
    /// `∂₂ : C_2 → C_1`, `k × nk` when the surface is closed.
    pub d2: Option<IntMatrix>,
    /// Chain map in degrees 0, 1 and (closed surfaces) 2.
    pub f: Vec<IntMatrix>,
}

fn place(target: &mut IntMatrix, block: &IntMatrix, r0: usize, c0: usize) {
    for i in 0..block.rows() {
        for j in 0..block.cols() {
            target[(r0 + i, c0 + j)] = block[(i, j)].clone();
        }
    }
}

pub(crate) fn twisted_complex(fp: &FiberedPresentation) -> Result<TwistedComplex> {
    let k = fp.rank();
    let complex = surface_chain_complex(fp.surface());
    let n = complex.generators;
    let rep = fp.rep_surface();
    let inverses = with_inverses(rep)?;
    let id = IntMatrix::identity(k);
    let t = fp.rep_t();

    let mut d1 = IntMatrix::zeros(n * k, k);
    for (j, m) in rep.iter().enumerate() {
        place(&mut d1, &m.sub(&id)?, j * k, 0);
    }

    let d2 = if complex.relator.is_some() {
        let mut d2 = IntMatrix::zeros(k, n * k);
        for (j, e) in complex.d2.iter().enumerate() {
            place(&mut d2, &e.evaluate(rep, &inverses, k), 0, j * k);
        }
        Some(d2)
    } else {
        None
    };

    let f1 = match fp.automorphism() {
        None => fp.monodromy_on_h1().transpose().kron(t),
        Some(words) => {
            let mut f1 = IntMatrix::zeros(n * k, n * k);
            for (i, w) in words.iter().enumerate() {
                for j in 0..n {
                    let block = t.dot(&fox_derivative(w, j).evaluate(rep, &inverses, k));
                    place(&mut f1, &block, i * k, j * k);
                }
            }
            f1
        }
    };
    let mut f = vec![t.clone(), f1];
    if d2.is_some() {
        let (w, eps) = fp.top_degree_twist()?;
        f.push(t.dot(&w).scale(&BigInt::from(eps)));
    }

    let out = TwistedComplex { d1, d2, f };
    out.check()?;
    Ok(out)
}

impl TwistedComplex {
    fn check(&self) -> Result<()> {
        if self.d1.dot(&self.f[0]) != self.f[1].dot(&self.d1) {
            return Err(Error::Invalid("lifted monodromy does not commute with the first boundary".into()));
        }
        if let Some(d2) = &self.d2 {
            if !d2.dot(&self.d1).is_zero() {
                return Err(Error::Invalid("twisted boundaries do not compose to zero".into()));
            }
            if d2.dot(&self.f[1]) != self.f[2].dot(d2) {
                return Err(Error::Invalid("lifted monodromy does not commute with the second boundary".into()));
            }
        }
        Ok(())
    }

    pub fn chain_ranks(&self) -> [usize; 3] {
        [self.d1.cols(), self.d1.rows(), self.d2.as_ref().map_or(0, |d| d.rows())]
    }

    /// `(∂_n, ∂_{n+1})` as maps into and out of `C_n`.
    fn boundaries(&self, n: usize) -> (IntMatrix, IntMatrix) {
        let [c0, c1, c2] = self.chain_ranks();
        match n {
            0 => (IntMatrix::zeros(c0, 0), self.d1.clone()),
            1 => (self.d1.clone(), self.d2.clone().unwrap_or_else(|| IntMatrix::zeros(0, c1))),
            _ => (self.d2.clone().unwrap_or_else(|| IntMatrix::zeros(0, c1)), IntMatrix::zeros(0, c2)),
        }
    }
}

/// `L` with `K·L = I` for a saturated row basis `K`.
fn coordinate_map(k: &IntMatrix) -> Result<IntMatrix> {
    let s = smith_form(k);
    if s.invariant_factors.iter().any(|d| !d.is_one()) {
        return Err(Error::Invalid("cycle basis is not saturated".into()));
    }
    let r = k.rows();
    let cols: Vec<usize> = (0..r).collect();
    let rows: Vec<usize> = (0..k.cols()).collect();
    s.v.submatrix(&rows, &cols).mul(&s.u)
}

fn coordinates(v: &[BigInt], k: &IntMatrix, l: &IntMatrix) -> Result<Vec<BigInt>> {
    let c = l.left_apply(v);
    if k.left_apply(&c) != v {
        return Err(Error::Invalid("vector is not a cycle".into()));
    }
    Ok(c)
}

fn degree_homology(n: usize, d_in: &IntMatrix, d_out: &IntMatrix, f: &IntMatrix) -> Result<DegreeHomology> {
    let kernel = left_kernel(d_in);
    let r = kernel.rows();
    if r == 0 {
        return Ok(DegreeHomology { degree: n, free_rank: 0, torsion: Vec::new(), action: IntMatrix::zeros(0, 0) });
    }
    let l = coordinate_map(&kernel)?;
    let y = (0..d_out.rows())
        .map(|i| coordinates(d_out.row(i), &kernel, &l))
        .collect::<Result<Vec<_>>>()?;
    let y = IntMatrix::from_rows(y, r)?;
    let s = smith_form(&y);
    let rank = s.rank();
    let torsion = s.torsion();
    let v_inv = integer_inverse(&s.v)?;
    let free_rank = r - rank;
    let mut images = Vec::with_capacity(free_rank);
    for i in rank..r {
        let cycle = kernel.left_apply(v_inv.row(i));
        let image = f.left_apply(&cycle);
        let c = coordinates(&image, &kernel, &l)?;
        let projected = s.v.left_apply(&c);
        images.push(projected[rank..].to_vec());
    }
    let action = IntMatrix::from_rows(images, free_rank)?.transpose();
    if !action.is_unimodular() {
        return Err(Error::Invalid(format!("monodromy on the free part of H_{n} is not invertible over Z")));
    }
    Ok(DegreeHomology { degree: n, free_rank, torsion, action })
}

/// Homology of `ℤ^k ⊗ C_•(S̃)` in degrees 0..=2 with the monodromy action on
/// each free quotient. Degrees are computed on separate threads.
pub fn twisted_homology(fp: &FiberedPresentation) -> Result<TwistedHomologyResult> {
    let complex = twisted_complex(fp)?;
    let chain_ranks = complex.chain_ranks();
    let degrees = thread::scope(|scope| {
        let handles: Vec<_> = (0..3)
            .map(|n| {
                let complex = &complex;
                scope.spawn(move || {
                    let (d_in, d_out) = complex.boundaries(n);
                    let f = complex.f.get(n).cloned().unwrap_or_else(|| IntMatrix::zeros(0, 0));
                    degree_homology(n, &d_in, &d_out, &f)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("homology worker panicked")).collect::<Result<Vec<_>>>()
    })?;
    Ok(TwistedHomologyResult { chain_ranks, degrees })
}
