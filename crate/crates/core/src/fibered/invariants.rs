use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::homology::{twisted_homology, TwistedHomologyResult};
use super::FiberedPresentation;
use crate::error::{Error, Result};
use crate::exact::{laurent_doteq, LaurentPoly, RationalFunction, UnitGroup};

impl TwistedHomologyResult {
    /// `P_n(t) = det(1 − t·f_n)` on the free quotient; `1` outside degrees 0..=2.
    pub fn char_poly(&self, n: usize) -> Result<LaurentPoly> {
        let Some(d) = self.degree(n) else {
            return Ok(LaurentPoly::one());
        };
        let p = d.action.det_one_minus_t()?;
        let leading_ok = p.leading_coeff().is_some_and(|c| c.abs().is_one());
        if !p.coeff(0).is_one() || !leading_ok || p.low_exp() != Some(0) {
            return Err(Error::Invalid(format!("det(1 - t f_{n}) = {p} is not a unit-leading polynomial with constant 1")));
        }
        Ok(p)
    }

    /// `Δ_n` in the canonical form of its `ℚ^×·t^k` class.
    pub fn alexander(&self, n: usize) -> Result<LaurentPoly> {
        Ok(self.char_poly(n)?.primitive_canonical())
    }

    pub fn torsion(&self) -> Result<Torsion> {
        let d: Vec<LaurentPoly> = (0..3).map(|n| self.alexander(n)).collect::<Result<_>>()?;
        if d.iter().any(LaurentPoly::is_zero) {
            return Ok(Torsion::Zero);
        }
        let den = &d[0] * &d[2];
        let tau = RationalFunction::new(d[1].clone(), den)?;
        let (num, den) = tau.doteq_canonical(UnitGroup::Rationals);
        Ok(Torsion::Function(RationalFunction::new(num, den)?))
    }
}

pub fn monodromy_char_poly(fp: &FiberedPresentation, n: usize) -> Result<LaurentPoly> {
    twisted_homology(fp)?.char_poly(n)
}

/// `Δ_n^{ρ,φ_f}` of the mapping torus, computed through the Wang sequence.
pub fn twisted_alexander(fp: &FiberedPresentation, n: usize) -> Result<LaurentPoly> {
    twisted_homology(fp)?.alexander(n)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Torsion {
    /// Some twisted homology module has positive rank.
    Zero,
    Function(RationalFunction),
}

impl Torsion {
    pub fn function(&self) -> Option<&RationalFunction> {
        match self {
            Torsion::Zero => None,
            Torsion::Function(f) => Some(f),
        }
    }

    /// Equality up to `ℚ^×·t^k`.
    pub fn doteq(&self, other: &Torsion) -> bool {
        match (self, other) {
            (Torsion::Zero, Torsion::Zero) => true,
            (Torsion::Function(a), Torsion::Function(b)) => a.doteq(b, UnitGroup::Rationals),
            _ => false,
        }
    }
}

impl fmt::Display for Torsion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Torsion::Zero => write!(f, "zero"),
            Torsion::Function(r) => write!(f, "{r}"),
        }
    }
}

/// `τ = Δ₁ / (Δ₀·Δ₂)`.
pub fn reidemeister_torsion(fp: &FiberedPresentation) -> Result<Torsion> {
    twisted_homology(fp)?.torsion()
}

fn is_prime(q: u64) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d))
}

/// Whether `Δ₁` stays nonzero with coefficients reduced mod the prime `q`.
pub fn fiberedness_evidence(fp: &FiberedPresentation, q: u64) -> Result<bool> {
    if !is_prime(q) {
        return Err(Error::Invalid(format!("{q} is not prime")));
    }
    let p = monodromy_char_poly(fp, 1)?;
    Ok(!p.reduce_mod(&BigInt::from(q)).is_zero())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualityPairing {
    pub label: String,
    pub lhs: LaurentPoly,
    /// Already substituted `t ↦ t⁻¹` and put in canonical form.
    pub rhs: LaurentPoly,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualityReport {
    pub closed: bool,
    pub pairings: Vec<DualityPairing>,
}

impl DualityReport {
    pub fn pass(&self) -> bool {
        self.pairings.iter().all(|p| p.pass)
    }
}

/// Compare `Δ_n^ρ(t)` with `Δ_m^{ρ̄}(t⁻¹)` for `ρ̄ = ρ^{-T}`: `m = n` with
/// `Δ₂ ≐ 1` for punctured fibers, `m = 2 − n` for closed ones.
pub fn duality_check(fp: &FiberedPresentation) -> Result<DualityReport> {
    let h = twisted_homology(fp)?;
    let hb = twisted_homology(&fp.dual()?)?;
    let closed = fp.surface().is_closed();
    let mut pairings = Vec::new();
    for n in 0..3usize {
        let lhs = h.alexander(n)?;
        let (label, rhs) = if closed {
            let m = 2 - n;
            (format!("D{n}(t) ~ Dbar{m}(1/t)"), hb.alexander(m)?.substitute_power(-1).primitive_canonical())
        } else if n == 2 {
            ("D2(t) ~ 1".to_string(), LaurentPoly::one())
        } else {
            (format!("D{n}(t) ~ Dbar{n}(1/t)"), hb.alexander(n)?.substitute_power(-1).primitive_canonical())
        };
        let pass = laurent_doteq(&lhs, &rhs, UnitGroup::Rationals);
        pairings.push(DualityPairing { label, lhs, rhs, pass });
    }
    Ok(DualityReport { closed, pairings })
}

#[cfg(test)]
mod tests {
    use super::super::examples::*;
    use super::super::{SurfaceSpec, Word};
    use super::*;
    use crate::exact::IntMatrix;

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    fn doteq(a: &LaurentPoly, b: &str) -> bool {
        laurent_doteq(a, &p(b), UnitGroup::Rationals)
    }

    #[test]
    fn char_polys() {
        let fp = punctured_torus(cat_map());
        assert_eq!(monodromy_char_poly(&fp, 1).unwrap(), p("1-3t+t^2"));
        assert_eq!(monodromy_char_poly(&fp, 2).unwrap(), LaurentPoly::one());
        assert_eq!(monodromy_char_poly(&fp, 5).unwrap(), LaurentPoly::one());
        let id = closed_torus(IntMatrix::identity(2));
        assert_eq!(monodromy_char_poly(&id, 1).unwrap(), p("1-2t+t^2"));
    }

    #[test]
    fn punctured_torus_bundle() {
        let fp = punctured_torus(cat_map());
        assert!(doteq(&twisted_alexander(&fp, 1).unwrap(), "t^2-3t+1"));
        assert!(doteq(&twisted_alexander(&fp, 0).unwrap(), "1-t"));
        assert!(doteq(&twisted_alexander(&fp, 2).unwrap(), "1"));
        let tau = reidemeister_torsion(&fp).unwrap();
        let expected = RationalFunction::new(p("t^2-3t+1"), p("1-t")).unwrap();
        assert!(tau.doteq(&Torsion::Function(expected)));
        assert!(fiberedness_evidence(&fp, 5).unwrap());
        assert!(fiberedness_evidence(&fp, 4).is_err());
        let report = duality_check(&fp).unwrap();
        assert!(!report.closed);
        assert!(report.pass(), "{report:?}");
    }

    #[test]
    fn closed_torus_bundle() {
        let fp = closed_torus(cat_map());
        assert!(doteq(&twisted_alexander(&fp, 0).unwrap(), "1-t"));
        assert!(doteq(&twisted_alexander(&fp, 1).unwrap(), "t^2-3t+1"));
        assert!(doteq(&twisted_alexander(&fp, 2).unwrap(), "1-t"));
        let tau = reidemeister_torsion(&fp).unwrap();
        let expected = RationalFunction::new(p("t^2-3t+1"), p("1-2t+t^2")).unwrap();
        assert!(tau.doteq(&Torsion::Function(expected)));
        assert!(duality_check(&fp).unwrap().pass());
        let id = closed_torus(IntMatrix::identity(2));
        assert!(doteq(&twisted_alexander(&id, 1).unwrap(), "1-2t+t^2"));
    }

    #[test]
    fn trivial_fiber_homology() {
        // A disk fiber with ρ(t) = −1: H₀ = ℤ with f₀ = −1, so τ = 1/(1+t).
        let m = IntMatrix::from_i64(1, 1, &[-1]);
        let fp = FiberedPresentation::new(SurfaceSpec::new(0, 1), IntMatrix::zeros(0, 0), vec![m.clone()], None, None).unwrap();
        let tau = reidemeister_torsion(&fp).unwrap();
        assert!(tau.doteq(&Torsion::Function(RationalFunction::new(p("1"), p("1+t")).unwrap())));
        // Rank 0 in every degree: the sign rep on a one-generator free group.
        let fp = FiberedPresentation::new(
            SurfaceSpec::new(0, 2),
            IntMatrix::identity(1),
            vec![m.clone(), IntMatrix::identity(1)],
            Some(vec![Word::generator(0)]),
            None,
        )
        .unwrap();
        let h = twisted_homology(&fp).unwrap();
        assert!(h.degrees.iter().all(|d| d.free_rank == 0));
        assert_eq!(reidemeister_torsion(&fp).unwrap(), Torsion::Function(RationalFunction::one()));
    }

    #[test]
    fn sign_rep_invariants() {
        let fp = sign_rep();
        // H₁ = ℤ spanned by a − b, fixed by f₁, so P₁ = 1 − t.
        assert_eq!(monodromy_char_poly(&fp, 1).unwrap(), p("1-t"));
        assert_eq!(monodromy_char_poly(&fp, 0).unwrap(), LaurentPoly::one());
        assert!(duality_check(&fp).unwrap().pass());
    }

    #[test]
    fn orthogonal_rep_is_self_dual() {
        // Rotation by a quarter turn for t, trivial on the fiber.
        let rot = IntMatrix::from_i64(2, 2, &[0, -1, 1, 0]);
        let id = IntMatrix::identity(2);
        let fp = FiberedPresentation::new(
            SurfaceSpec::new(1, 1),
            cat_map(),
            vec![id.clone(), id, rot.clone()],
            None,
            Some(4),
        )
        .unwrap();
        assert_eq!(fp.dual().unwrap(), fp);
        let report = duality_check(&fp).unwrap();
        assert!(report.pass());
        for n in 0..3 {
            let d = twisted_alexander(&fp, n).unwrap();
            assert!(laurent_doteq(&d, &d.substitute_power(-1), UnitGroup::Rationals));
        }
        // H₀ = ℤ² with f₀ = rot: Δ₀ = 1 + t².
        assert!(doteq(&twisted_alexander(&fp, 0).unwrap(), "1+t^2"));
    }
}
