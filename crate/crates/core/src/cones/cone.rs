use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{gcd_all, primitive_integer_vector, rational_row_basis, RatMatrix};

pub(crate) fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn dot_q(a: &[BigInt], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| y * x).sum()
}

/// Divide by the content; the zero vector is returned unchanged.
pub(crate) fn primitive(v: Vec<BigInt>) -> Vec<BigInt> {
    let g = gcd_all(&v);
    if g.is_zero() {
        v
    } else {
        v.into_iter().map(|x| x / &g).collect()
    }
}

/// Projective normal form: content one and first nonzero entry positive.
pub fn projective_normal(v: &[BigInt]) -> Vec<BigInt> {
    let p = primitive(v.to_vec());
    match p.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => p.into_iter().map(|x| -x).collect(),
        _ => p,
    }
}

fn comb(a: &BigInt, q: &[BigInt], b: &BigInt, p: &[BigInt]) -> Vec<BigInt> {
    primitive(q.iter().zip(p).map(|(x, y)| a * x - b * y).collect())
}

/// Double description: extreme rays and a lineality basis of
/// `{x : a·x ≥ 0 for a in ineqs, e·x = 0 for e in eqs}`.
fn double_description(n: usize, ineqs: &[Vec<BigInt>], eqs: &[Vec<BigInt>]) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let mut constraints: Vec<Vec<BigInt>> = Vec::new();
    for e in eqs {
        constraints.push(e.clone());
        constraints.push(e.iter().map(|x| -x).collect());
    }
    constraints.extend(ineqs.iter().cloned());

    let mut lines: Vec<Vec<BigInt>> =
        (0..n).map(|i| (0..n).map(|j| BigInt::from(u8::from(i == j))).collect()).collect();
    // Each ray carries the indices of the processed constraints it makes tight.
    let mut rays: Vec<(Vec<BigInt>, Vec<usize>)> = Vec::new();

    for (ci, a) in constraints.iter().enumerate() {
        if a.iter().all(Zero::is_zero) {
            for r in rays.iter_mut() {
                r.1.push(ci);
            }
            continue;
        }
        if let Some(pos) = lines.iter().position(|l| !dot(a, l).is_zero()) {
            let mut l = lines.remove(pos);
            let mut al = dot(a, &l);
            if al.is_negative() {
                l = l.into_iter().map(|x| -x).collect();
                al = -al;
            }
            for m in lines.iter_mut() {
                let am = dot(a, m);
                if !am.is_zero() {
                    *m = comb(&al, m, &am, &l);
                }
            }
            for r in rays.iter_mut() {
                let ar = dot(a, &r.0);
                if !ar.is_zero() {
                    r.0 = comb(&al, &r.0, &ar, &l);
                }
                r.1.push(ci);
            }
            // Earlier constraints vanish on every line.
            rays.push((l, (0..ci).collect()));
            continue;
        }
        let values: Vec<BigInt> = rays.iter().map(|r| dot(a, &r.0)).collect();
        let mut next: Vec<(Vec<BigInt>, Vec<usize>)> = Vec::new();
        for (r, v) in rays.iter().zip(&values) {
            if v.is_positive() {
                next.push(r.clone());
            } else if v.is_zero() {
                let mut z = r.1.clone();
                z.push(ci);
                next.push((r.0.clone(), z));
            }
        }
        for (i, vp) in values.iter().enumerate() {
            if !vp.is_positive() {
                continue;
            }
            for (j, vq) in values.iter().enumerate() {
                if !vq.is_negative() {
                    continue;
                }
                let common: Vec<usize> = rays[i].1.iter().copied().filter(|c| rays[j].1.contains(c)).collect();
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(k, r)| k == i || k == j || !common.iter().all(|c| r.1.contains(c)));
                if adjacent {
                    let v = comb(vp, &rays[j].0, vq, &rays[i].0);
                    let mut z = common;
                    z.push(ci);
                    next.push((v, z));
                }
            }
        }
        rays = next;
    }
    (rays.into_iter().map(|r| r.0).collect(), lines)
}

/// Canonical integer basis of the span of `vs`: reduced echelon rows made primitive.
fn canonical_subspace(n: usize, vs: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    if vs.is_empty() {
        return Vec::new();
    }
    let rows: Vec<Vec<BigRational>> =
        vs.iter().map(|v| v.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
    let m = rational_row_basis(&RatMatrix::from_rows(rows, n).expect("uniform rows"));
    m.to_rows().iter().map(|r| primitive_integer_vector(r)).collect()
}

/// Component of `v` orthogonal to the span of `basis`, made primitive.
fn reduce_mod_lines(v: &[BigInt], basis: &[Vec<BigInt>]) -> Vec<BigInt> {
    if basis.is_empty() {
        return v.to_vec();
    }
    let k = basis.len();
    let gram = RatMatrix::from_fn(k, k, |i, j| BigRational::from_integer(dot(&basis[i], &basis[j])));
    let rhs: Vec<BigRational> = basis.iter().map(|b| BigRational::from_integer(dot(b, v))).collect();
    let coeffs = gram.inverse().expect("independent lines").apply(&rhs);
    let out: Vec<BigRational> = (0..v.len())
        .map(|t| {
            let mut x = BigRational::from_integer(v[t].clone());
            for (c, b) in coeffs.iter().zip(basis) {
                x -= c * BigRational::from_integer(b[t].clone());
            }
            x
        })
        .collect();
    primitive_integer_vector(&out)
}

fn canonical_rays(rays: Vec<Vec<BigInt>>, lines: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut out: Vec<Vec<BigInt>> = rays
        .iter()
        .map(|r| reduce_mod_lines(r, lines))
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Closed polyhedral cone in `ℚ^n`, held in both representations:
/// `cone(rays) + span(lines)` and `{x : f·x ≥ 0, e·x = 0}`.
///
/// Both are canonical: rays are primitive, orthogonal to the lines, and
/// sorted; lines and equations are reduced echelon bases.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalCone {
    dim: usize,
    rays: Vec<Vec<BigInt>>,
    lines: Vec<Vec<BigInt>>,
    facets: Vec<Vec<BigInt>>,
    equations: Vec<Vec<BigInt>>,
}

fn check_lengths(n: usize, vs: &[Vec<BigInt>]) -> Result<()> {
    match vs.iter().find(|v| v.len() != n) {
        Some(v) => Err(Error::Dimension(format!("vector of length {} in dimension {n}", v.len()))),
        None => Ok(()),
    }
}

impl RationalCone {
    fn build(n: usize, rays: Vec<Vec<BigInt>>, lines: Vec<Vec<BigInt>>, facets: Vec<Vec<BigInt>>, eqs: Vec<Vec<BigInt>>) -> Self {
        let lines = canonical_subspace(n, &lines);
        let equations = canonical_subspace(n, &eqs);
        RationalCone {
            dim: n,
            rays: canonical_rays(rays, &lines),
            facets: canonical_rays(facets, &equations),
            lines,
            equations,
        }
    }

    /// `cone(rays) + span(lines)`.
    pub fn from_generators(n: usize, rays: &[Vec<BigInt>], lines: &[Vec<BigInt>]) -> Result<Self> {
        check_lengths(n, rays)?;
        check_lengths(n, lines)?;
        let (facets, eqs) = double_description(n, rays, lines);
        let (r, l) = double_description(n, &facets, &eqs);
        Ok(Self::build(n, r, l, facets, eqs))
    }

    /// `{x : f·x ≥ 0 for f in ineqs, e·x = 0 for e in eqs}`.
    pub fn from_inequalities(n: usize, ineqs: &[Vec<BigInt>], eqs: &[Vec<BigInt>]) -> Result<Self> {
        check_lengths(n, ineqs)?;
        check_lengths(n, eqs)?;
        let (rays, lines) = double_description(n, ineqs, eqs);
        let (f, e) = double_description(n, &rays, &lines);
        Ok(Self::build(n, rays, lines, f, e))
    }

    pub fn from_rational_generators(n: usize, rays: &[Vec<BigRational>]) -> Result<Self> {
        let ints: Vec<Vec<BigInt>> = rays.iter().map(|r| primitive_integer_vector(r)).collect();
        Self::from_generators(n, &ints, &[])
    }

    pub fn whole_space(n: usize) -> Self {
        Self::from_inequalities(n, &[], &[]).expect("no constraints")
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vec<BigInt>] {
        &self.rays
    }

    pub fn lines(&self) -> &[Vec<BigInt>] {
        &self.lines
    }

    pub fn facets(&self) -> &[Vec<BigInt>] {
        &self.facets
    }

    pub fn equations(&self) -> &[Vec<BigInt>] {
        &self.equations
    }

    /// Dimension of the linear span.
    pub fn dimension(&self) -> usize {
        self.dim - self.equations.len()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.equations.is_empty()
    }

    pub fn is_pointed(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn contains(&self, x: &[BigRational]) -> bool {
        self.equations.iter().all(|e| dot_q(e, x).is_zero())
            && self.facets.iter().all(|f| !dot_q(f, x).is_negative())
    }

    pub fn contains_int(&self, x: &[BigInt]) -> bool {
        self.equations.iter().all(|e| dot(e, x).is_zero()) && self.facets.iter().all(|f| !dot(f, x).is_negative())
    }

    /// In the relative interior: every facet inequality strict.
    pub fn relative_interior_contains(&self, x: &[BigRational]) -> bool {
        self.equations.iter().all(|e| dot_q(e, x).is_zero()) && self.facets.iter().all(|f| dot_q(f, x).is_positive())
    }

    pub fn contains_cone(&self, other: &RationalCone) -> bool {
        other.rays.iter().all(|r| self.contains_int(r))
            && other.lines.iter().all(|l| self.contains_int(l) && self.contains_int(&negate(l)))
    }

    /// The dual cone `{y : y·x ≥ 0 for all x in self}`.
    pub fn dual(&self) -> RationalCone {
        RationalCone {
            dim: self.dim,
            rays: self.facets.clone(),
            lines: self.equations.clone(),
            facets: self.rays.clone(),
            equations: self.lines.clone(),
        }
    }

    pub fn intersect(&self, other: &RationalCone) -> Result<RationalCone> {
        if self.dim != other.dim {
            return Err(Error::Dimension("cones live in different spaces".into()));
        }
        let ineqs: Vec<_> = self.facets.iter().chain(&other.facets).cloned().collect();
        let eqs: Vec<_> = self.equations.iter().chain(&other.equations).cloned().collect();
        Self::from_inequalities(self.dim, &ineqs, &eqs)
    }

    /// Sum of the rays: a point in the relative interior.
    pub fn interior_point(&self) -> Vec<BigInt> {
        let mut p = vec![BigInt::zero(); self.dim];
        for r in &self.rays {
            for (x, y) in p.iter_mut().zip(r) {
                *x += y;
            }
        }
        p
    }

    /// Image under `x ↦ T·x` for a square rational matrix.
    pub fn image(&self, t: &RatMatrix) -> Result<RationalCone> {
        if t.shape() != (self.dim, self.dim) {
            return Err(Error::Dimension("image needs a square matrix of the ambient size".into()));
        }
        let map = |v: &Vec<BigInt>| {
            let q: Vec<BigRational> = v.iter().map(|x| BigRational::from_integer(x.clone())).collect();
            primitive_integer_vector(&t.apply(&q))
        };
        let rays: Vec<_> = self.rays.iter().map(map).collect();
        let lines: Vec<_> = self.lines.iter().map(map).collect();
        Self::from_generators(self.dim, &rays, &lines)
    }

    /// Mutual containment of the two stored representations.
    pub fn is_consistent(&self) -> bool {
        let from_v = Self::from_generators(self.dim, &self.rays, &self.lines);
        let from_h = Self::from_inequalities(self.dim, &self.facets, &self.equations);
        matches!((from_v, from_h), (Ok(a), Ok(b)) if a.contains_cone(&b) && b.contains_cone(&a))
    }
}

fn negate(v: &[BigInt]) -> Vec<BigInt> {
    v.iter().map(|x| -x).collect()
}

impl fmt::Debug for RationalCone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RationalCone")
            .field("dim", &self.dim)
            .field("rays", &self.rays.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>())
            .field("lines", &self.lines.len())
            .field("facets", &self.facets.len())
            .finish()
    }
}
