use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::SurfaceSpec;
use crate::error::{Error, Result};
use crate::exact::{integer_inverse, IntMatrix};

/// A generator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn inv(self) -> Self {
        Letter { generator: self.generator, inverse: !self.inverse }
    }
}

/// Element of a free group, stored freely reduced.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn generator(g: usize) -> Self {
        Word(vec![Letter::new(g, false)])
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    /// Signed generator indices: `g + 1` for a generator, `-(g + 1)` for its inverse.
    pub fn from_signed(indices: &[i64]) -> Result<Self> {
        indices
            .iter()
            .map(|&i| match i {
                0 => Err(Error::Invalid("letter index 0 is not allowed".into())),
                i => Ok(Letter::new(i.unsigned_abs() as usize - 1, i < 0)),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::from_letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Word) -> Word {
        Word::from_letters(self.0.iter().chain(&other.0).copied())
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// Exponent sum of each generator.
    pub fn abelianize(&self, generators: usize) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); generators];
        for l in &self.0 {
            if l.inverse {
                v[l.generator] -= 1;
            } else {
                v[l.generator] += 1;
            }
        }
        v
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|l| l.generator).max()
    }

    /// Image under a matrix representation, `ρ(uv) = ρ(u)ρ(v)`.
    pub fn evaluate(&self, rep: &[IntMatrix], inverses: &[IntMatrix], k: usize) -> IntMatrix {
        let mut out = IntMatrix::identity(k);
        for l in &self.0 {
            let m = if l.inverse { &inverses[l.generator] } else { &rep[l.generator] };
            out = out.dot(m);
        }
        out
    }

    /// Split into `(p, c)` with `self = p·c·p⁻¹` and `c` cyclically reduced.
    pub fn cyclic_core(&self) -> (Word, Word) {
        let mut lo = 0;
        let mut hi = self.0.len();
        while hi - lo >= 2 && self.0[lo] == self.0[hi - 1].inv() {
            lo += 1;
            hi -= 1;
        }
        (Word(self.0[..lo].to_vec()), Word(self.0[lo..hi].to_vec()))
    }

    pub fn display_with(&self, names: &[String]) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        self.0
            .iter()
            .map(|l| {
                let n = names.get(l.generator).cloned().unwrap_or_else(|| format!("x{}", l.generator + 1));
                if l.inverse {
                    format!("{n}^-1")
                } else {
                    n
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Parse a product of named generators separated by spaces or `*`,
    /// each optionally raised to an integer power: `"a1 a1 b1^-1"`, `"a1^2*b1"`.
    pub fn parse(s: &str, names: &[String]) -> Result<Word> {
        let mut letters = Vec::new();
        let mut pos = 0;
        for token in s.split(|c: char| c.is_whitespace() || c == '*') {
            let start = pos;
            pos += token.len() + 1;
            if token.is_empty() || token == "1" {
                continue;
            }
            let (name, exp) = match token.split_once('^') {
                Some((n, e)) => {
                    let e = e.trim_matches(|c| c == '(' || c == ')');
                    let e: i64 = e
                        .parse()
                        .map_err(|_| Error::Parse { pos: start, msg: format!("bad exponent in {token:?}") })?;
                    (n, e)
                }
                None => (token, 1),
            };
            let g = names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::Parse { pos: start, msg: format!("unknown generator {name:?}") })?;
            let l = Letter::new(g, exp < 0);
            letters.extend(std::iter::repeat_n(l, exp.unsigned_abs() as usize));
        }
        Ok(Word::from_letters(letters))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&[]))
    }
}

/// Finitely supported `ℤ`-combination of free-group elements.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GroupRingElement(BTreeMap<Word, BigInt>);

impl GroupRingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_word(w: Word) -> Self {
        let mut out = Self::zero();
        out.add_term(w, BigInt::one());
        out
    }

    pub fn add_term(&mut self, w: Word, c: BigInt) {
        let e = self.0.entry(w).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.0.retain(|_, v| !v.is_zero());
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &BigInt)> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.0 {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.0 {
            out.add_term(w.clone(), -c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (u, a) in &self.0 {
            for (v, b) in &other.0 {
                out.add_term(u.mul(v), a * b);
            }
        }
        out
    }

    /// Image under the augmentation `g ↦ 1`.
    pub fn augmentation(&self) -> BigInt {
        self.0.values().sum()
    }

    pub fn evaluate(&self, rep: &[IntMatrix], inverses: &[IntMatrix], k: usize) -> IntMatrix {
        let mut out = IntMatrix::zeros(k, k);
        for (w, c) in &self.0 {
            out = out.add(&w.evaluate(rep, inverses, k).scale(c)).expect("square blocks");
        }
        out
    }
}

/// Fox derivative `∂w/∂x_j`.
pub fn fox_derivative(w: &Word, j: usize) -> GroupRingElement {
    let mut out = GroupRingElement::zero();
    let mut prefix = Word::identity();
    for &l in w.letters() {
        if l.generator == j {
            if l.inverse {
                out.add_term(prefix.mul(&Word(vec![l])), -BigInt::one());
            } else {
                out.add_term(prefix.clone(), BigInt::one());
            }
        }
        prefix = prefix.mul(&Word(vec![l]));
    }
    out
}

/// `Σ_j (∂w/∂x_j)(x_j − 1) = w − 1`.
pub fn fox_identity_holds(w: &Word, generators: usize) -> bool {
    let one = GroupRingElement::from_word(Word::identity());
    let mut lhs = GroupRingElement::zero();
    for j in 0..generators {
        let xj = GroupRingElement::from_word(Word::generator(j)).sub(&one);
        lhs = lhs.add(&fox_derivative(w, j).mul(&xj));
    }
    lhs == GroupRingElement::from_word(w.clone()).sub(&one)
}

/// The one-vertex cell structure of a surface with its boundary maps over
/// the free group ring on the surface generators.
#[derive(Debug, Clone)]
pub struct SurfaceChainComplex {
    pub surface: SurfaceSpec,
    pub generators: usize,
    /// The 2-cell attaching word; absent for punctured surfaces.
    pub relator: Option<Word>,
    /// `∂₁` on the edge of `x_j`: `x_j − 1`.
    pub d1: Vec<GroupRingElement>,
    /// `∂₂` on the 2-cell: the Fox derivatives `∂R/∂x_j`.
    pub d2: Vec<GroupRingElement>,
}

impl SurfaceChainComplex {
    pub fn ranks(&self) -> [usize; 3] {
        [1, self.generators, usize::from(self.relator.is_some())]
    }

    pub fn euler_characteristic(&self) -> i64 {
        let [c0, c1, c2] = self.ranks();
        c0 as i64 - c1 as i64 + c2 as i64
    }
}

pub fn surface_chain_complex(s: &SurfaceSpec) -> SurfaceChainComplex {
    let n = s.generator_count();
    let relator = s.relator();
    let one = GroupRingElement::from_word(Word::identity());
    let d1 = (0..n).map(|j| GroupRingElement::from_word(Word::generator(j)).sub(&one)).collect();
    let d2 = match &relator {
        Some(r) => (0..n).map(|j| fox_derivative(r, j)).collect(),
        None => Vec::new(),
    };
    SurfaceChainComplex { surface: *s, generators: n, relator, d1, d2 }
}

/// Matrices `ρ(x)` and `ρ(x)⁻¹` for use with [`Word::evaluate`].
pub(crate) fn with_inverses(rep: &[IntMatrix]) -> Result<Vec<IntMatrix>> {
    rep.iter().map(integer_inverse).collect()
}
