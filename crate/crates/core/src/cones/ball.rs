use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::cone::{dot, dot_q, projective_normal, RationalCone};
use crate::error::{Error, Result};

/// Unit ball of a (semi)norm on `H¹`, given by the vertices of its dual
/// polytope in `H₁`. `fibered` lists indices into `dual_vertices` whose
/// top-dimensional cones carry the fibered marking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormBall {
    dim: usize,
    dual_vertices: Vec<Vec<BigInt>>,
    fibered: BTreeSet<usize>,
}

impl NormBall {
    pub fn new(dim: usize, dual_vertices: Vec<Vec<BigInt>>, fibered: impl IntoIterator<Item = usize>) -> Result<Self> {
        if let Some(v) = dual_vertices.iter().find(|v| v.len() != dim) {
            return Err(Error::Dimension(format!("dual vertex of length {} in dimension {dim}", v.len())));
        }
        let set: BTreeSet<&Vec<BigInt>> = dual_vertices.iter().collect();
        for v in &dual_vertices {
            let neg: Vec<BigInt> = v.iter().map(|x| -x).collect();
            if !set.contains(&neg) {
                return Err(Error::Invalid("dual vertices are not symmetric about the origin".into()));
            }
        }
        let fibered: BTreeSet<usize> = fibered.into_iter().collect();
        if let Some(&i) = fibered.iter().find(|&&i| i >= dual_vertices.len()) {
            return Err(Error::Invalid(format!("fibered index {i} out of range")));
        }
        Ok(NormBall { dim, dual_vertices, fibered })
    }

    pub fn from_i64(dim: usize, vertices: &[&[i64]], fibered: &[usize]) -> Result<Self> {
        let vs = vertices.iter().map(|v| v.iter().map(|&x| BigInt::from(x)).collect()).collect();
        Self::new(dim, vs, fibered.iter().copied())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn dual_vertices(&self) -> &[Vec<BigInt>] {
        &self.dual_vertices
    }

    pub fn fibered(&self) -> &BTreeSet<usize> {
        &self.fibered
    }

    pub fn is_fibered_vertex(&self, i: usize) -> bool {
        self.fibered.contains(&i)
    }

    /// Rank of the span of the dual polytope; below `dim` for a seminorm.
    pub fn rank(&self) -> usize {
        let rows: Vec<Vec<BigRational>> = self
            .dual_vertices
            .iter()
            .map(|v| v.iter().map(|x| BigRational::from_integer(x.clone())).collect())
            .collect();
        if rows.is_empty() {
            return 0;
        }
        crate::exact::rational_row_basis(&crate::exact::RatMatrix::from_rows(rows, self.dim).expect("uniform")).rows()
    }

    pub fn kernel_dimension(&self) -> usize {
        self.dim - self.rank()
    }

    pub fn is_norm(&self) -> bool {
        self.kernel_dimension() == 0
    }

    /// Same ball with the fibered markings replaced.
    pub fn with_fibered(&self, fibered: impl IntoIterator<Item = usize>) -> Result<Self> {
        Self::new(self.dim, self.dual_vertices.clone(), fibered)
    }
}

/// `max_v φ(v)` over the dual vertices.
pub fn thurston_norm(ball: &NormBall, phi: &[BigRational]) -> Result<BigRational> {
    if phi.len() != ball.dim {
        return Err(Error::Dimension(format!("covector of length {} in dimension {}", phi.len(), ball.dim)));
    }
    Ok(ball
        .dual_vertices
        .iter()
        .map(|v| dot_q(v, phi))
        .max()
        .map_or_else(BigRational::zero, |m| m.max(BigRational::zero())))
}

pub fn thurston_norm_int(ball: &NormBall, phi: &[BigInt]) -> Result<BigInt> {
    if phi.len() != ball.dim {
        return Err(Error::Dimension(format!("covector of length {} in dimension {}", phi.len(), ball.dim)));
    }
    Ok(ball.dual_vertices.iter().map(|v| dot(v, phi)).max().map_or_else(BigInt::zero, |m| m.max(BigInt::zero())))
}

/// The ball of the pulled-back norm under a degree-`d` cover.
pub fn cover_pullback_norm(ball: &NormBall, d: u64) -> Result<NormBall> {
    if d == 0 {
        return Err(Error::Invalid("covering degree must be at least 1".into()));
    }
    let d = BigInt::from(d);
    let vs = ball.dual_vertices.iter().map(|v| v.iter().map(|x| x * &d).collect()).collect();
    NormBall::new(ball.dim, vs, ball.fibered.iter().copied())
}

/// Radial cone over a top-dimensional face of the unit ball.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormCone {
    /// Index of the dual vertex that is maximal on the cone.
    pub vertex: usize,
    pub cone: RationalCone,
    pub fibered: bool,
}

/// A face of the cone decomposition: the cones it lies in and their intersection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeFace {
    pub cones: BTreeSet<usize>,
    pub cone: RationalCone,
}

impl ConeFace {
    pub fn dimension(&self) -> usize {
        self.cone.dimension()
    }
}

/// The top-dimensional norm cones, sorted by their dual vertex.
pub fn norm_cones(ball: &NormBall) -> Result<Vec<NormCone>> {
    if ball.dual_vertices.iter().all(|v| v.iter().all(Zero::is_zero)) {
        return Err(Error::FullKernel);
    }
    let mut order: Vec<usize> = (0..ball.dual_vertices.len()).collect();
    order.sort_by(|&a, &b| ball.dual_vertices[a].cmp(&ball.dual_vertices[b]));
    order.dedup_by(|a, b| ball.dual_vertices[*a] == ball.dual_vertices[*b]);
    let mut out = Vec::new();
    for i in order {
        let v = &ball.dual_vertices[i];
        let ineqs: Vec<Vec<BigInt>> = ball
            .dual_vertices
            .iter()
            .filter(|w| *w != v)
            .map(|w| v.iter().zip(w).map(|(a, b)| a - b).collect())
            .collect();
        let cone = RationalCone::from_inequalities(ball.dim, &ineqs, &[])?;
        if cone.is_full_dimensional() {
            out.push(NormCone { vertex: i, cone, fibered: ball.is_fibered_vertex(i) });
        }
    }
    Ok(out)
}

/// Every nonempty intersection of norm cones, closed under intersection,
/// ordered by decreasing dimension.
pub fn face_lattice(cones: &[NormCone]) -> Result<Vec<ConeFace>> {
    let mut faces: Vec<ConeFace> = cones
        .iter()
        .enumerate()
        .map(|(i, c)| ConeFace { cones: BTreeSet::from([i]), cone: c.cone.clone() })
        .collect();
    let mut k = 0;
    while k < faces.len() {
        for i in 0..cones.len() {
            if faces[k].cones.contains(&i) {
                continue;
            }
            let cone = faces[k].cone.intersect(&cones[i].cone)?;
            match faces.iter_mut().find(|f| f.cone == cone) {
                Some(f) => {
                    f.cones.insert(i);
                    let extra: Vec<usize> = faces[k].cones.iter().copied().collect();
                    let f = faces.iter_mut().find(|f| f.cone == cone).expect("present");
                    f.cones.extend(extra);
                }
                None => {
                    let mut set = faces[k].cones.clone();
                    set.insert(i);
                    faces.push(ConeFace { cones: set, cone });
                }
            }
        }
        k += 1;
    }
    // A face lies in every cone that contains it.
    for f in faces.iter_mut() {
        for (i, c) in cones.iter().enumerate() {
            if c.cone.contains_cone(&f.cone) {
                f.cones.insert(i);
            }
        }
    }
    faces.sort_by(|a, b| b.dimension().cmp(&a.dimension()).then_with(|| a.cones.cmp(&b.cones)));
    Ok(faces)
}

/// `{[u] : φ(u) ≠ 0 on the interior of C}`, the projectivized dual cone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectiveDualPolytope {
    /// Rays of the dual cone; first nonzero entry positive when read projectively.
    pub rays: Vec<Vec<BigInt>>,
    /// Each face as the set of ray indices on it, from the whole polytope down to vertices.
    pub faces: Vec<BTreeSet<usize>>,
    dual_cone: RationalCone,
}

impl ProjectiveDualPolytope {
    pub fn dual_cone(&self) -> &RationalCone {
        &self.dual_cone
    }

    /// Projective dimension.
    pub fn dimension(&self) -> isize {
        self.dual_cone.dimension() as isize - 1
    }

    pub fn codimension(&self) -> isize {
        self.dual_cone.ambient_dim() as isize - 1 - self.dimension()
    }

    pub fn vertices(&self) -> Vec<Vec<BigInt>> {
        self.rays.iter().map(|r| projective_normal(r)).collect()
    }

    /// Whether `[u]` is a point of the polytope.
    pub fn contains(&self, u: &[BigInt]) -> bool {
        let neg: Vec<BigInt> = u.iter().map(|x| -x).collect();
        self.dual_cone.contains_int(u) || self.dual_cone.contains_int(&neg)
    }
}

pub fn projective_dual_of_cone(c: &RationalCone) -> ProjectiveDualPolytope {
    let dual = c.dual();
    let rays: Vec<Vec<BigInt>> = dual.rays().to_vec();
    let tight = |f: &Vec<BigInt>| -> BTreeSet<usize> {
        rays.iter().enumerate().filter(|(_, r)| dot(f, r).is_zero()).map(|(i, _)| i).collect()
    };
    let mut faces: Vec<BTreeSet<usize>> = vec![(0..rays.len()).collect()];
    let mut frontier: Vec<BTreeSet<usize>> = dual.facets().iter().map(tight).collect();
    while let Some(f) = frontier.pop() {
        if f.is_empty() || faces.contains(&f) {
            continue;
        }
        for g in dual.facets().iter().map(tight) {
            let h: BTreeSet<usize> = f.intersection(&g).copied().collect();
            frontier.push(h);
        }
        faces.push(f);
    }
    faces.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    ProjectiveDualPolytope { rays, faces, dual_cone: dual }
}

/// Projective dual of a top-dimensional norm cone of `ball`.
pub fn projective_dual(ball: &NormBall, c: &RationalCone) -> Result<ProjectiveDualPolytope> {
    if !norm_cones(ball)?.iter().any(|nc| nc.cone == *c) {
        return Err(Error::Invalid("cone is not a top-dimensional norm cone of the ball".into()));
    }
    Ok(projective_dual_of_cone(c))
}

/// Index of a norm cone containing `phi`.
pub fn locate(cones: &[NormCone], phi: &[BigRational]) -> Option<usize> {
    cones.iter().position(|c| c.cone.contains(phi))
}

/// `φ` lies in the open cone iff every other dual vertex is strictly below the marked one.
pub fn in_open_cone(ball: &NormBall, cone: &NormCone, phi: &[BigRational]) -> bool {
    let v = &ball.dual_vertices[cone.vertex];
    let top = dot_q(v, phi);
    ball.dual_vertices.iter().filter(|w| *w != v).all(|w| (&top - dot_q(w, phi)).is_positive())
        || cone.cone.relative_interior_contains(phi)
}
