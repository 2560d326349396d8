use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::TruncatedProfiniteInt;
use crate::error::{Error, Result};
use crate::exact::{integer_inverse, smith_form, IntMatrix, RatMatrix};

/// One summand `z·Φ` of a symbolic map.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfiniteTerm {
    pub matrix: IntMatrix,
    pub symbol: String,
    pub residue: Option<TruncatedProfiniteInt>,
}

/// A linear map `Σ z_i Φ_i` from rank `a` to rank `b` with formal
/// profinite scalars `z_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolicProfiniteMap {
    source_rank: usize,
    target_rank: usize,
    terms: Vec<ProfiniteTerm>,
}

impl SymbolicProfiniteMap {
    pub fn new(source_rank: usize, target_rank: usize, terms: Vec<ProfiniteTerm>) -> Result<Self> {
        let mut seen = HashSet::new();
        for t in &terms {
            if t.matrix.shape() != (target_rank, source_rank) {
                return Err(Error::Dimension(format!(
                    "term {} has shape {:?}, expected {target_rank}x{source_rank}",
                    t.symbol,
                    t.matrix.shape()
                )));
            }
            if !seen.insert(t.symbol.clone()) {
                return Err(Error::Invalid(format!("symbol {} repeated", t.symbol)));
            }
        }
        Ok(SymbolicProfiniteMap { source_rank, target_rank, terms })
    }

    /// `z·F` for a single symbol.
    pub fn scalar(symbol: &str, f: IntMatrix, residue: Option<TruncatedProfiniteInt>) -> Self {
        let (b, a) = f.shape();
        Self::new(a, b, vec![ProfiniteTerm { matrix: f, symbol: symbol.to_string(), residue }])
            .expect("single term")
    }

    pub fn source_rank(&self) -> usize {
        self.source_rank
    }

    pub fn target_rank(&self) -> usize {
        self.target_rank
    }

    pub fn terms(&self) -> &[ProfiniteTerm] {
        &self.terms
    }

    pub fn symbols(&self) -> Vec<&str> {
        self.terms.iter().map(|t| t.symbol.as_str()).collect()
    }

    /// Coefficients of entry `(i, j)` in the symbol coordinates.
    pub fn entry(&self, i: usize, j: usize) -> Vec<BigInt> {
        self.terms.iter().map(|t| t.matrix[(i, j)].clone()).collect()
    }

    /// `U·Φ·V` for integer matrices of compatible shape.
    pub fn compose(&self, left: &IntMatrix, right: &IntMatrix) -> Result<Self> {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                Ok(ProfiniteTerm {
                    matrix: left.mul(&t.matrix)?.mul(right)?,
                    symbol: t.symbol.clone(),
                    residue: t.residue.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(right.cols(), left.rows(), terms)
    }
}

/// ℤ-span of the entries of a symbolic map, in symbol coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct MCModule {
    pub rank: usize,
    pub basis: Vec<Vec<BigInt>>,
}

pub fn mc_module(phi: &SymbolicProfiniteMap) -> MCModule {
    let r = phi.terms.len();
    let mut rows = Vec::new();
    for i in 0..phi.target_rank {
        for j in 0..phi.source_rank {
            rows.push(phi.entry(i, j));
        }
    }
    let m = IntMatrix::from_rows(rows, r).expect("uniform rows");
    let s = smith_form(&m);
    let rank = s.rank();
    let vinv = integer_inverse(&s.v).expect("Smith transform is unimodular");
    let basis = (0..rank)
        .map(|k| vinv.row(k).iter().map(|x| x * &s.invariant_factors[k]).collect())
        .collect();
    MCModule { rank, basis }
}

/// `Φ = z·F` for the generator `z` of a rank-one coefficient module.
#[derive(Debug, Clone, PartialEq)]
pub struct RankOneFactor {
    /// Generator in symbol coordinates; first nonzero entry positive.
    pub generator: Vec<BigInt>,
    /// Value of the generator when every symbol carries a residue.
    pub residue: Option<TruncatedProfiniteInt>,
    pub f: IntMatrix,
}

impl RankOneFactor {
    /// The same factorization through the other generator `−z`.
    pub fn negated(&self) -> Self {
        RankOneFactor {
            generator: self.generator.iter().map(|x| -x).collect(),
            residue: self.residue.as_ref().map(TruncatedProfiniteInt::neg),
            f: self.f.neg(),
        }
    }

    /// `z·F` with `z` expanded back into symbol coordinates.
    pub fn reassemble(&self, phi: &SymbolicProfiniteMap) -> SymbolicProfiniteMap {
        let terms = phi
            .terms
            .iter()
            .enumerate()
            .map(|(k, t)| ProfiniteTerm {
                matrix: self.f.scale(&self.generator[k]),
                symbol: t.symbol.clone(),
                residue: t.residue.clone(),
            })
            .collect();
        SymbolicProfiniteMap::new(phi.source_rank, phi.target_rank, terms).expect("same shape")
    }
}

pub fn rank_one_factor(phi: &SymbolicProfiniteMap) -> Result<RankOneFactor> {
    let module = mc_module(phi);
    if module.rank != 1 {
        return Err(Error::NotRankOne(module.rank));
    }
    let mut generator = module.basis[0].clone();
    if generator.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        generator = generator.iter().map(|x| -x).collect();
    }
    let pivot = generator.iter().position(|x| !x.is_zero()).expect("nonzero generator");
    let f = IntMatrix::from_fn(phi.target_rank, phi.source_rank, |i, j| {
        let e = phi.entry(i, j);
        let (q, r) = e[pivot].div_rem(&generator[pivot]);
        debug_assert!(r.is_zero());
        debug_assert!(e.iter().zip(&generator).all(|(x, g)| *x == &q * g));
        q
    });
    let residue = phi
        .terms
        .iter()
        .zip(&generator)
        .try_fold(None::<TruncatedProfiniteInt>, |acc, (t, c)| {
            let r = t.residue.as_ref()?;
            let term = TruncatedProfiniteInt::new(r.residue() * c, r.modulus().clone()).ok()?;
            Some(Some(match acc {
                None => term,
                Some(a) => a.add(&term),
            }))
        })
        .flatten();
    Ok(RankOneFactor { generator, residue, f })
}

/// `Σ ε(z_i)·Φ_i`.
pub fn specialize(phi: &SymbolicProfiniteMap, eps: &BTreeMap<String, BigRational>) -> Result<RatMatrix> {
    let mut out = RatMatrix::zeros(phi.target_rank, phi.source_rank);
    for t in &phi.terms {
        let e = eps.get(&t.symbol).ok_or_else(|| Error::MissingSymbol(t.symbol.clone()))?;
        out = out.add(&t.matrix.to_rational().scale(e))?;
    }
    Ok(out)
}

/// Transpose of [`specialize`]: the induced map on cohomology.
pub fn dual_specialize(phi: &SymbolicProfiniteMap, eps: &BTreeMap<String, BigRational>) -> Result<RatMatrix> {
    Ok(specialize(phi, eps)?.transpose())
}
