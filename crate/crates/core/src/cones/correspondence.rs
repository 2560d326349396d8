use crate::error::{Error, Result};
use crate::exact::RatMatrix;

use super::ball::{norm_cones, NormBall, NormCone};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConePair {
    /// Index into the cones of ball B.
    pub source: usize,
    /// Index into the cones of ball A.
    pub target: usize,
    pub fibered: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CorrespondenceFailure {
    /// The image of this cone of B is not a cone of A.
    Straddle { source: usize, meets: Vec<usize> },
    /// Image matches a cone of A with a different fibered marking.
    MarkingMismatch { source: usize, target: usize },
    /// The balls have different numbers of top-dimensional cones.
    CountMismatch { a: usize, b: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Correspondence {
    Bijection(Vec<ConePair>),
    Failure(CorrespondenceFailure),
}

impl Correspondence {
    pub fn is_bijection(&self) -> bool {
        matches!(self, Correspondence::Bijection(_))
    }
}

/// Match each top-dimensional cone of `ball_b` with the cone of `ball_a`
/// equal to its image under `φ ↦ T·φ`.
pub fn cone_correspondence(ball_a: &NormBall, ball_b: &NormBall, t: &RatMatrix) -> Result<Correspondence> {
    let n = ball_a.dim();
    if ball_b.dim() != n || t.shape() != (n, n) {
        return Err(Error::Dimension("cone correspondence needs balls and a map of equal dimension".into()));
    }
    if t.inverse().is_err() {
        return Err(Error::DegenerateSpecialization("the induced map on H^1 is singular".into()));
    }
    let ca = norm_cones(ball_a)?;
    let cb = norm_cones(ball_b)?;
    match_cones(&ca, &cb, t)
}

pub fn match_cones(ca: &[NormCone], cb: &[NormCone], t: &RatMatrix) -> Result<Correspondence> {
    let mut used = vec![false; ca.len()];
    let mut pairs = Vec::with_capacity(cb.len());
    for (j, c) in cb.iter().enumerate() {
        let img = c.cone.image(t)?;
        let Some(i) = ca.iter().position(|a| a.cone == img) else {
            let p = img.interior_point();
            let meets: Vec<usize> = ca
                .iter()
                .enumerate()
                .filter(|(_, a)| a.cone.intersect(&img).is_ok_and(|x| x.is_full_dimensional()) || a.cone.contains_int(&p))
                .map(|(i, _)| i)
                .collect();
            return Ok(Correspondence::Failure(CorrespondenceFailure::Straddle { source: j, meets }));
        };
        if ca[i].fibered != c.fibered {
            return Ok(Correspondence::Failure(CorrespondenceFailure::MarkingMismatch { source: j, target: i }));
        }
        used[i] = true;
        pairs.push(ConePair { source: j, target: i, fibered: c.fibered });
    }
    if ca.len() != cb.len() || used.iter().any(|u| !u) {
        return Ok(Correspondence::Failure(CorrespondenceFailure::CountMismatch { a: ca.len(), b: cb.len() }));
    }
    Ok(Correspondence::Bijection(pairs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, IntMatrix};
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn square(fibered: &[usize]) -> NormBall {
        NormBall::from_i64(2, &[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]], fibered).unwrap()
    }

    fn m(data: &[i64]) -> RatMatrix {
        IntMatrix::from_i64(2, 2, data).to_rational()
    }

    #[test]
    fn identity_matches_everything() {
        let b = square(&[]);
        let Correspondence::Bijection(pairs) = cone_correspondence(&b, &b, &m(&[1, 0, 0, 1])).unwrap() else {
            panic!("identity must match");
        };
        assert_eq!(pairs.len(), 4);
        assert!(pairs.iter().all(|p| p.source == p.target));
    }

    #[test]
    fn rotation_shifts() {
        let b = square(&[]);
        let Correspondence::Bijection(pairs) = cone_correspondence(&b, &b, &m(&[0, -1, 1, 0])).unwrap() else {
            panic!("rotation must match");
        };
        assert_eq!(pairs.len(), 4);
        assert!(pairs.iter().all(|p| p.source != p.target));
        let mut targets: Vec<usize> = pairs.iter().map(|p| p.target).collect();
        targets.sort();
        assert_eq!(targets, vec![0, 1, 2, 3]);
    }

    #[test]
    fn shear_straddles() {
        let b = square(&[]);
        let r = cone_correspondence(&b, &b, &m(&[1, 1, 0, 1])).unwrap();
        match r {
            Correspondence::Failure(CorrespondenceFailure::Straddle { meets, .. }) => assert!(meets.len() >= 2),
            other => panic!("expected a straddle, got {other:?}"),
        }
    }

    #[test]
    fn singular_and_markings() {
        let b = square(&[]);
        assert!(matches!(
            cone_correspondence(&b, &b, &m(&[1, 1, 1, 1])),
            Err(Error::DegenerateSpecialization(_))
        ));
        // Marking the (1,0) vertex on one side only.
        let a = square(&[0]);
        let r = cone_correspondence(&a, &b, &m(&[1, 0, 0, 1])).unwrap();
        assert!(matches!(r, Correspondence::Failure(CorrespondenceFailure::MarkingMismatch { .. })));
        // The −I symmetry carries the mark at (1,0) to the one at (−1,0).
        let a = square(&[1]);
        let b = square(&[0]);
        assert!(cone_correspondence(&a, &b, &m(&[-1, 0, 0, -1])).unwrap().is_bijection());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn identity_is_identity(vs in prop::collection::vec(prop::collection::vec(-3i64..4, 3), 1..4)) {
            let mut all: Vec<Vec<BigInt>> = Vec::new();
            for v in &vs {
                all.push(v.iter().map(|&x| int(x)).collect());
                all.push(v.iter().map(|&x| int(-x)).collect());
            }
            prop_assume!(all.iter().any(|v| v.iter().any(|x| *x != int(0))));
            let b = NormBall::new(3, all, []).unwrap();
            let id = RatMatrix::identity(3);
            match cone_correspondence(&b, &b, &id).unwrap() {
                Correspondence::Bijection(pairs) => prop_assert!(pairs.iter().all(|p| p.source == p.target)),
                other => prop_assert!(false, "{:?}", other),
            }
        }
    }
}
