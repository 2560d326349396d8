//! Mapping tori of surface automorphisms: twisted homology of the fiber,
//! the monodromy action on it, twisted Alexander polynomials and
//! Reidemeister torsion.
//!
//! Conventions: chains are row vectors, `ρ(uv) = ρ(u)ρ(v)`, and the stable
//! letter acts on the fiber group by `t⁻¹·x·t = f(x)`. The monodromy matrix
//! on `H₁(S; ℤ)` is in column convention: column `j` is the class of `f(x_j)`.

mod fox;
mod homology;
mod invariants;
mod realize;

pub use fox::{
    fox_derivative, fox_identity_holds, surface_chain_complex, GroupRingElement, Letter, SurfaceChainComplex,
    Word,
};
pub use homology::{twisted_homology, DegreeHomology, TwistedHomologyResult};
pub use invariants::{
    duality_check, fiberedness_evidence, monodromy_char_poly, reidemeister_torsion, twisted_alexander,
    DualityPairing, DualityReport, Torsion,
};
pub use realize::{realize_over_z, IntegralRealization};

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exact::{integer_inverse, IntMatrix};

/// Orders beyond this are rejected when no group order is declared.
pub const MAX_REP_ORDER: u64 = 10_000;

/// Orientable surface of genus `g` with `p` punctures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SurfaceSpec {
    pub genus: usize,
    pub punctures: usize,
}

impl SurfaceSpec {
    pub fn new(genus: usize, punctures: usize) -> Self {
        SurfaceSpec { genus, punctures }
    }

    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.punctures as i64
    }

    pub fn is_closed(&self) -> bool {
        self.punctures == 0
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.euler_characteristic() < 0
    }

    /// Rank of the free group `π₁` for punctured surfaces, `2g` when closed.
    pub fn generator_count(&self) -> usize {
        if self.is_closed() {
            2 * self.genus
        } else {
            2 * self.genus + self.punctures - 1
        }
    }

    /// `a1, b1, …, ag, bg` followed by `c1, …, c(p−1)`.
    pub fn generator_names(&self) -> Vec<String> {
        let mut names = Vec::with_capacity(self.generator_count());
        for i in 1..=self.genus {
            names.push(format!("a{i}"));
            names.push(format!("b{i}"));
        }
        for i in 1..self.punctures {
            names.push(format!("c{i}"));
        }
        names
    }

    /// `[a₁,b₁]⋯[a_g,b_g]` for closed surfaces.
    pub fn relator(&self) -> Option<Word> {
        if !self.is_closed() {
            return None;
        }
        let mut letters = Vec::new();
        for i in 0..self.genus {
            let (a, b) = (2 * i, 2 * i + 1);
            letters.extend([
                Letter::new(a, false),
                Letter::new(b, false),
                Letter::new(a, true),
                Letter::new(b, true),
            ]);
        }
        Some(Word::from_letters(letters))
    }

    /// Intersection form on `H₁` in the `a, b` basis; zero on the `c` part.
    pub fn intersection_form(&self) -> IntMatrix {
        let n = self.generator_count();
        let mut j = IntMatrix::zeros(n, n);
        for i in 0..self.genus {
            j[(2 * i, 2 * i + 1)] = BigInt::one();
            j[(2 * i + 1, 2 * i)] = -BigInt::one();
        }
        j
    }
}

/// A mapping torus `M_f` with a representation of `π₁(M_f) = π₁(S) ⋊ ⟨t⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberedPresentation {
    surface: SurfaceSpec,
    monodromy_on_h1: IntMatrix,
    /// `f(x_j)` as words; needed whenever the surface generators act nontrivially.
    automorphism: Option<Vec<Word>>,
    /// `ρ(x_1), …, ρ(x_n)`.
    rep_surface: Vec<IntMatrix>,
    rep_t: IntMatrix,
    group_order: Option<u64>,
}

impl FiberedPresentation {
    /// `rep` lists `ρ(x_1), …, ρ(x_n)` followed by `ρ(t)`.
    pub fn new(
        surface: SurfaceSpec,
        monodromy_on_h1: IntMatrix,
        rep: Vec<IntMatrix>,
        automorphism: Option<Vec<Word>>,
        group_order: Option<u64>,
    ) -> Result<Self> {
        let n = surface.generator_count();
        if monodromy_on_h1.shape() != (n, n) {
            return Err(Error::Dimension(format!(
                "monodromy is {:?}, the surface has {n} generators",
                monodromy_on_h1.shape()
            )));
        }
        if !monodromy_on_h1.is_unimodular() {
            return Err(Error::Invalid("monodromy on H1 is not invertible over Z".into()));
        }
        if rep.len() != n + 1 {
            return Err(Error::Dimension(format!("expected {} representation matrices, got {}", n + 1, rep.len())));
        }
        let k = rep[n].rows();
        if k == 0 {
            return Err(Error::Dimension("representation of degree 0".into()));
        }
        for (i, m) in rep.iter().enumerate() {
            if m.shape() != (k, k) {
                return Err(Error::Dimension(format!("representation matrix {i} is not {k}x{k}")));
            }
            if !m.is_unimodular() {
                return Err(Error::Invalid(format!("representation matrix {i} is not invertible over Z")));
            }
            check_finite_order(m, group_order).map_err(|e| match e {
                Error::Invalid(msg) => Error::Invalid(format!("representation matrix {i}: {msg}")),
                e => e,
            })?;
        }
        let mut rep = rep;
        let rep_t = rep.pop().expect("n + 1 matrices");
        let fp = FiberedPresentation { surface, monodromy_on_h1, automorphism, rep_surface: rep, rep_t, group_order };
        fp.validate_words()?;
        Ok(fp)
    }

    fn validate_words(&self) -> Result<()> {
        let n = self.surface.generator_count();
        let k = self.rank();
        let inverses = fox::with_inverses(&self.rep_surface)?;
        if let Some(r) = self.surface.relator() {
            if r.evaluate(&self.rep_surface, &inverses, k) != IntMatrix::identity(k) {
                return Err(Error::Invalid("representation does not kill the surface relator".into()));
            }
        }
        let Some(words) = &self.automorphism else {
            if !self.surface_rep_is_trivial() {
                return Err(Error::Invalid(
                    "automorphism words are required when the surface generators act nontrivially".into(),
                ));
            }
            if self.surface.is_closed() {
                self.symplectic_sign()?;
            }
            return Ok(());
        };
        if words.len() != n {
            return Err(Error::Dimension(format!("expected {n} automorphism words, got {}", words.len())));
        }
        for (j, w) in words.iter().enumerate() {
            if w.max_generator().is_some_and(|g| g >= n) {
                return Err(Error::Invalid(format!("word {j} uses a generator outside the surface group")));
            }
            if w.abelianize(n) != self.monodromy_on_h1.column(j) {
                return Err(Error::Invalid(format!("word {j} does not abelianize to column {j} of the monodromy")));
            }
        }
        let t_inv = integer_inverse(&self.rep_t)?;
        for (j, w) in words.iter().enumerate() {
            let lhs = w.evaluate(&self.rep_surface, &inverses, k);
            let rhs = t_inv.dot(&self.rep_surface[j]).dot(&self.rep_t);
            if lhs != rhs {
                return Err(Error::Invalid(format!("representation is incompatible with the monodromy at generator {j}")));
            }
        }
        if self.surface.is_closed() {
            self.relator_conjugator()?;
        }
        Ok(())
    }

    pub fn surface(&self) -> &SurfaceSpec {
        &self.surface
    }

    pub fn monodromy_on_h1(&self) -> &IntMatrix {
        &self.monodromy_on_h1
    }

    pub fn automorphism(&self) -> Option<&[Word]> {
        self.automorphism.as_deref()
    }

    pub fn rep_surface(&self) -> &[IntMatrix] {
        &self.rep_surface
    }

    pub fn rep_t(&self) -> &IntMatrix {
        &self.rep_t
    }

    pub fn group_order(&self) -> Option<u64> {
        self.group_order
    }

    /// Degree `k` of the representation.
    pub fn rank(&self) -> usize {
        self.rep_t.rows()
    }

    pub fn surface_rep_is_trivial(&self) -> bool {
        let id = IntMatrix::identity(self.rank());
        self.rep_surface.iter().all(|m| *m == id)
    }

    /// The same bundle with the representation replaced by `g ↦ ρ(g)^{-T}`.
    pub fn dual(&self) -> Result<Self> {
        let bar = |m: &IntMatrix| integer_inverse(m).map(|x| x.transpose());
        let mut rep = self.rep_surface.iter().map(bar).collect::<Result<Vec<_>>>()?;
        rep.push(bar(&self.rep_t)?);
        Self::new(self.surface, self.monodromy_on_h1.clone(), rep, self.automorphism.clone(), self.group_order)
    }

    /// The same bundle with the trivial representation of degree 1.
    pub fn with_trivial_rep(&self) -> Self {
        let one = IntMatrix::identity(1);
        FiberedPresentation {
            surface: self.surface,
            monodromy_on_h1: self.monodromy_on_h1.clone(),
            automorphism: self.automorphism.clone(),
            rep_surface: vec![one.clone(); self.surface.generator_count()],
            rep_t: one,
            group_order: None,
        }
    }

    /// `ε` with `AᵀJA = εJ`, the degree of the monodromy on a closed surface.
    fn symplectic_sign(&self) -> Result<i64> {
        let j = self.surface.intersection_form();
        let a = &self.monodromy_on_h1;
        let pulled = a.transpose().dot(&j).dot(a);
        if self.surface.genus == 0 || pulled == j {
            Ok(1)
        } else if pulled == j.neg() {
            Ok(-1)
        } else {
            Err(Error::Invalid("monodromy does not preserve the intersection form up to sign".into()))
        }
    }

    /// `(w, ε)` with `f(R) = w·R^ε·w⁻¹` in the free group.
    pub(crate) fn relator_conjugator(&self) -> Result<(Word, i64)> {
        let r = self.surface.relator().expect("closed surface");
        let words = self.automorphism.as_ref().expect("words present");
        if r.is_empty() {
            return Ok((Word::identity(), 1));
        }
        let image = Word::from_letters(r.letters().iter().flat_map(|l| {
            let w = &words[l.generator];
            if l.inverse { w.inverse() } else { w.clone() }.letters().to_vec()
        }));
        let (p, core) = image.cyclic_core();
        for eps in [1i64, -1] {
            let target = r.pow(eps);
            let len = target.len();
            if core.len() != len {
                continue;
            }
            for s in 0..len {
                // core = s1⁻¹·R^ε·s1 with s1 the first s letters of R^ε.
                let s1 = Word::from_letters(target.letters()[..s].iter().copied());
                if s1.inverse().mul(&target).mul(&s1) == core {
                    return Ok((p.mul(&s1.inverse()), eps));
                }
            }
        }
        Err(Error::Invalid("automorphism does not send the surface relator to a conjugate of itself or its inverse".into()))
    }

    /// `(ρ(w), ε)` for the closed-surface top degree.
    pub(crate) fn top_degree_twist(&self) -> Result<(IntMatrix, i64)> {
        if self.automorphism.is_none() {
            return Ok((IntMatrix::identity(self.rank()), self.symplectic_sign()?));
        }
        let (w, eps) = self.relator_conjugator()?;
        let inverses = fox::with_inverses(&self.rep_surface)?;
        Ok((w.evaluate(&self.rep_surface, &inverses, self.rank()), eps))
    }
}

fn check_finite_order(m: &IntMatrix, declared: Option<u64>) -> Result<u64> {
    let k = m.rows();
    let id = IntMatrix::identity(k);
    if let Some(n) = declared {
        if n == 0 {
            return Err(Error::Invalid("declared group order must be positive".into()));
        }
        if m.pow(n) != id {
            return Err(Error::Invalid(format!("order does not divide the declared group order {n}")));
        }
    }
    let mut p = m.clone();
    let mut order = 1u64;
    while p != id {
        if order >= MAX_REP_ORDER {
            return Err(Error::Invalid(format!("no finite order up to {MAX_REP_ORDER}")));
        }
        p = p.dot(m);
        order += 1;
    }
    Ok(order)
}


#[cfg(test)]
mod tests {
    use super::examples::*;
    use super::*;

    #[test]
    fn surfaces() {
        let s = SurfaceSpec::new(2, 0);
        assert_eq!(s.euler_characteristic(), -2);
        assert_eq!(s.generator_names(), ["a1", "b1", "a2", "b2"]);
        assert_eq!(s.relator().unwrap().len(), 8);
        let s = SurfaceSpec::new(1, 3);
        assert_eq!(s.generator_count(), 4);
        assert_eq!(s.generator_names(), ["a1", "b1", "c1", "c2"]);
        assert!(s.relator().is_none());
        assert!(!SurfaceSpec::new(1, 0).is_hyperbolic());
        assert!(SurfaceSpec::new(1, 1).is_hyperbolic());
    }

    #[test]
    fn validation() {
        let one = IntMatrix::identity(1);
        let m = IntMatrix::from_i64(1, 1, &[-1]);
        let s = SurfaceSpec::new(1, 1);
        let singular = IntMatrix::from_i64(2, 2, &[2, 0, 0, 1]);
        assert!(FiberedPresentation::new(s, singular, vec![one.clone(); 3], None, None).is_err());
        // Nontrivial surface action needs words.
        assert!(FiberedPresentation::new(s, cat_map(), vec![m.clone(), m.clone(), one.clone()], None, None).is_err());
        // Infinite order.
        let shear = IntMatrix::from_i64(2, 2, &[1, 1, 0, 1]);
        let id2 = IntMatrix::identity(2);
        assert!(FiberedPresentation::new(s, cat_map(), vec![id2.clone(), id2.clone(), shear], None, None).is_err());
        // ρ(a) = ρ(b) = −1 is compatible with a ↦ a²b, b ↦ a for either sign of ρ(t).
        for t in [&m, &one] {
            let rep = vec![m.clone(), m.clone(), t.clone()];
            assert!(FiberedPresentation::new(s, flip_map(), rep, Some(flip_words()), None).is_ok());
        }
        // but not with b ↦ ab, since ρ(ab) = 1 ≠ ρ(b).
        assert!(FiberedPresentation::new(s, cat_map(), vec![m.clone(), m.clone(), one.clone()], Some(cat_words()), None)
            .is_err());
        // Words must abelianize to the matrix.
        let wrong = vec![Word::from_signed(&[1, 2]).unwrap(), Word::from_signed(&[1, 1, 2]).unwrap()];
        assert!(FiberedPresentation::new(s, cat_map(), vec![one.clone(); 3], Some(wrong), None).is_err());
        assert!(FiberedPresentation::new(s, flip_map(), vec![m.clone(); 3], Some(flip_words()), Some(3)).is_err());
    }

    #[test]
    fn closed_relator_conjugator() {
        let s = SurfaceSpec::new(1, 0);
        let one = IntMatrix::identity(1);
        let fp = FiberedPresentation::new(s, cat_map(), vec![one.clone(); 3], Some(cat_words()), None).unwrap();
        let (w, eps) = fp.relator_conjugator().unwrap();
        let r = s.relator().unwrap();
        let words = cat_words();
        let image = words[0].mul(&words[1]).mul(&words[0].inverse()).mul(&words[1].inverse());
        assert_eq!(image, w.mul(&r.pow(eps)).mul(&w.inverse()));
        assert_eq!(eps, 1);
        // a ↦ b, b ↦ a reverses orientation.
        let swap = IntMatrix::from_i64(2, 2, &[0, 1, 1, 0]);
        let words = vec![Word::generator(1), Word::generator(0)];
        let fp = FiberedPresentation::new(s, swap, vec![one.clone(); 3], Some(words), None).unwrap();
        assert_eq!(fp.relator_conjugator().unwrap().1, -1);
        // A non-automorphism with the right abelianization is caught.
        let bogus = vec![Word::from_signed(&[1, 2, 1, -2, -1]).unwrap(), Word::generator(1)];
        let id = IntMatrix::identity(2);
        assert!(FiberedPresentation::new(s, id, vec![one.clone(); 3], Some(bogus), None).is_err());
    }

    #[test]
    fn dual_rep() {
        let fp = sign_rep();
        let d = fp.dual().unwrap();
        assert_eq!(d.rep_t(), fp.rep_t());
        let rot = IntMatrix::from_i64(2, 2, &[0, -1, 1, 0]);
        assert_eq!(check_finite_order(&rot, None).unwrap(), 4);
        assert!(check_finite_order(&rot, Some(6)).is_err());
    }
}
