//! JSON interchange formats. Integers are written as decimal strings;
//! plain JSON integers are accepted on input as well.

use std::collections::BTreeMap;
use std::fmt;

use fibered_core::cones::NormBall;
use fibered_core::dynamics::{Edge, LinearModel, ModelQuotient, OrbitRecord, OrbitTable, TransitionGraph};
use fibered_core::exact::{IntMatrix, RatMatrix};
use fibered_core::fibered::{FiberedPresentation, SurfaceSpec, Word};
use fibered_core::group::{FiniteGroup, DEFAULT_ORDER_BOUND};
use fibered_core::profinite::{ProfiniteTerm, SymbolicProfiniteMap, TruncatedProfiniteInt};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::InputError;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Int(pub BigInt);

impl From<BigInt> for Int {
    fn from(x: BigInt) -> Self {
        Int(x)
    }
}

impl From<i64> for Int {
    fn from(x: i64) -> Self {
        Int(BigInt::from(x))
    }
}

impl Serialize for Int {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

struct IntVisitor;

impl Visitor<'_> for IntVisitor {
    type Value = Int;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a decimal string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Int, E> {
        Ok(Int(v.into()))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Int, E> {
        Ok(Int(v.into()))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Int, E> {
        v.trim().parse::<BigInt>().map(Int).map_err(|_| E::custom(format!("`{v}` is not an integer")))
    }
}

impl<'de> Deserialize<'de> for Int {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(IntVisitor)
    }
}

/// Rational written as `"p/q"` or `"p"`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rat(pub BigRational);

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

struct RatVisitor;

impl Visitor<'_> for RatVisitor {
    type Value = Rat;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a rational as \"p/q\" or an integer")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rat, E> {
        Ok(Rat(BigRational::from_integer(v.into())))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rat, E> {
        Ok(Rat(BigRational::from_integer(v.into())))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Rat, E> {
        let bad = || E::custom(format!("`{v}` is not a rational"));
        let (n, d) = match v.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (v.trim(), "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(E::custom("zero denominator"));
        }
        Ok(Rat(BigRational::new(n, d)))
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(RatVisitor)
    }
}

pub fn ints(v: &[BigInt]) -> Vec<Int> {
    v.iter().cloned().map(Int).collect()
}

pub fn bigs(v: &[Int]) -> Vec<BigInt> {
    v.iter().map(|x| x.0.clone()).collect()
}

pub fn matrix_json(m: &IntMatrix) -> Vec<Vec<Int>> {
    m.to_rows().into_iter().map(|r| ints(&r)).collect()
}

pub fn rat_matrix_json(m: &RatMatrix) -> Vec<Vec<Rat>> {
    m.to_rows().into_iter().map(|r| r.into_iter().map(Rat).collect()).collect()
}

pub fn int_matrix(rows: &[Vec<Int>], what: &str) -> Result<IntMatrix, InputError> {
    let cols = rows.first().map_or(0, Vec::len);
    IntMatrix::from_rows(rows.iter().map(|r| bigs(r)).collect(), cols)
        .map_err(|_| InputError::Invalid(format!("{what}: rows have different lengths")))
}

pub fn rat_matrix(rows: &[Vec<Rat>], what: &str) -> Result<RatMatrix, InputError> {
    let cols = rows.first().map_or(0, Vec::len);
    RatMatrix::from_rows(rows.iter().map(|r| r.iter().map(|x| x.0.clone()).collect()).collect(), cols)
        .map_err(|_| InputError::Invalid(format!("{what}: rows have different lengths")))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepJson {
    /// `ρ(x_1), …, ρ(x_n)` in generator order `a1, b1, …, c1, …`.
    pub generators: Vec<Vec<Vec<Int>>>,
    pub t: Vec<Vec<Int>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationJson {
    pub genus: usize,
    pub punctures: usize,
    /// Action on `H₁` of the fiber, columns are images of the generators.
    pub monodromy: Vec<Vec<Int>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rep: Option<RepJson>,
    /// `f(x_j)` as words such as `"a1 a1 b1^-1"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub automorphism: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group_order: Option<u64>,
}

impl PresentationJson {
    pub fn build(&self) -> Result<FiberedPresentation, InputError> {
        let surface = SurfaceSpec::new(self.genus, self.punctures);
        let n = surface.generator_count();
        let a = int_matrix(&self.monodromy, "monodromy")?;
        let rep = match &self.rep {
            None => vec![IntMatrix::identity(1); n + 1],
            Some(r) => {
                let mut ms = r
                    .generators
                    .iter()
                    .enumerate()
                    .map(|(i, m)| int_matrix(m, &format!("rep generator {i}")))
                    .collect::<Result<Vec<_>, _>>()?;
                ms.push(int_matrix(&r.t, "rep t")?);
                ms
            }
        };
        let names = surface.generator_names();
        let words = self
            .automorphism
            .as_ref()
            .map(|ws| ws.iter().map(|w| Word::parse(w, &names)).collect::<Result<Vec<_>, _>>())
            .transpose()?;
        Ok(FiberedPresentation::new(surface, a, rep, words, self.group_order)?)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormBallJson {
    pub dim: usize,
    pub dual_vertices: Vec<Vec<Int>>,
    #[serde(default)]
    pub fibered_cones: Vec<usize>,
}

impl NormBallJson {
    pub fn build(&self) -> Result<NormBall, InputError> {
        Ok(NormBall::new(self.dim, self.dual_vertices.iter().map(|v| bigs(v)).collect(), self.fibered_cones.clone())?)
    }

    pub fn from_ball(b: &NormBall) -> Self {
        NormBallJson {
            dim: b.dim(),
            dual_vertices: b.dual_vertices().iter().map(|v| ints(v)).collect(),
            fibered_cones: b.fibered().iter().copied().collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupJson {
    Trivial,
    Cyclic(usize),
    Symmetric(usize),
    /// Generating permutations of `0..n`.
    Permutations(Vec<Vec<usize>>),
    /// Multiplication table with `0` the identity.
    Table(Vec<Vec<usize>>),
}

impl GroupJson {
    pub fn build(&self) -> Result<FiniteGroup, InputError> {
        Ok(match self {
            GroupJson::Trivial => FiniteGroup::trivial(),
            GroupJson::Cyclic(n) if *n >= 1 => FiniteGroup::cyclic(*n),
            GroupJson::Symmetric(n) if (1..=7).contains(n) => FiniteGroup::symmetric(*n),
            GroupJson::Cyclic(_) | GroupJson::Symmetric(_) => {
                return Err(InputError::Invalid("group size out of the supported range".into()))
            }
            GroupJson::Permutations(gens) => FiniteGroup::from_permutations(gens, DEFAULT_ORDER_BOUND)?,
            GroupJson::Table(t) => FiniteGroup::from_table(t)?,
        })
    }
}

/// A group element: its index, or its permutation for permutation groups.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementJson {
    Index(usize),
    Permutation(Vec<usize>),
}

impl ElementJson {
    pub fn resolve(&self, g: &FiniteGroup) -> Result<usize, InputError> {
        match self {
            ElementJson::Index(i) if *i < g.order() => Ok(*i),
            ElementJson::Index(i) => Err(InputError::Invalid(format!("element {i} out of range"))),
            ElementJson::Permutation(p) => {
                g.element_of(p).ok_or_else(|| InputError::Invalid(format!("permutation {p:?} is not in the group")))
            }
        }
    }
}

pub fn class_index(g: &FiniteGroup) -> Vec<usize> {
    let mut of = vec![0; g.order()];
    for (i, c) in g.conjugacy_classes().iter().enumerate() {
        for &x in c {
            of[x] = i;
        }
    }
    of
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbit: Option<usize>,
    pub period: u32,
    pub prongs: u32,
    pub preserved: bool,
    /// Conjugacy class index, as listed by `nielsen`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<usize>,
    /// Alternative to `class`: any element of the class.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub element: Option<ElementJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub h1: Vec<Int>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub puncture: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitTableJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_period: Option<u32>,
    pub orbits: Vec<OrbitJson>,
}

impl OrbitTableJson {
    pub fn build(&self) -> Result<OrbitTable, InputError> {
        let group = self.group.as_ref().map(GroupJson::build).transpose()?;
        let classes = group.as_ref().map(class_index);
        let records = self
            .orbits
            .iter()
            .enumerate()
            .map(|(i, o)| {
                let class = match (&o.element, &group, &classes) {
                    (Some(e), Some(g), Some(of)) => Some(of[e.resolve(g)?]),
                    (Some(_), _, _) => {
                        return Err(InputError::Invalid(format!("orbit {i} names an element but there is no group")))
                    }
                    (None, _, _) => o.class,
                };
                Ok(OrbitRecord {
                    orbit: o.orbit.unwrap_or(i),
                    period: o.period,
                    prongs: o.prongs,
                    preserved: o.preserved,
                    class,
                    h1: bigs(&o.h1),
                    puncture: o.puncture,
                })
            })
            .collect::<Result<Vec<_>, InputError>>()?;
        Ok(OrbitTable::new(group, records, self.max_period)?)
    }

    pub fn from_table(t: &OrbitTable, group: Option<GroupJson>) -> Self {
        OrbitTableJson {
            group,
            max_period: Some(t.max_period()),
            orbits: t
                .records()
                .iter()
                .map(|r| OrbitJson {
                    orbit: Some(r.orbit),
                    period: r.period,
                    prongs: r.prongs,
                    preserved: r.preserved,
                    class: r.class,
                    element: None,
                    h1: ints(&r.h1),
                    puncture: r.puncture,
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuotientJson {
    pub group: GroupJson,
    pub fiber: Vec<ElementJson>,
    pub t: ElementJson,
}

/// Hyperbolic 2 x 2 integer matrix acting on the torus.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearModelJson {
    pub matrix: Vec<Vec<Int>>,
    #[serde(default = "default_periods")]
    pub periods: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quotient: Option<QuotientJson>,
}

fn default_periods() -> u32 {
    8
}

impl LinearModelJson {
    pub fn build(&self) -> Result<LinearModel, InputError> {
        let a = int_matrix(&self.matrix, "matrix")?;
        let quotient = self
            .quotient
            .as_ref()
            .map(|q| -> Result<ModelQuotient, InputError> {
                let group = q.group.build()?;
                let fiber = q.fiber.iter().map(|e| e.resolve(&group)).collect::<Result<Vec<_>, _>>()?;
                let t = q.t.resolve(&group)?;
                Ok(ModelQuotient { group, fiber, t })
            })
            .transpose()?;
        Ok(LinearModel::new(a, quotient)?)
    }

    pub fn table(&self) -> Result<OrbitTable, InputError> {
        Ok(self.build()?.orbit_table(self.periods)?)
    }
}

/// Either an explicit orbit table or a linear model generating one.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OrbitSourceJson {
    Model(LinearModelJson),
    Table(OrbitTableJson),
}

impl OrbitSourceJson {
    pub fn table(&self) -> Result<OrbitTable, InputError> {
        match self {
            OrbitSourceJson::Model(m) => m.table(),
            OrbitSourceJson::Table(t) => t.build(),
        }
    }

    pub fn group(&self) -> Option<&GroupJson> {
        match self {
            OrbitSourceJson::Model(m) => m.quotient.as_ref().map(|q| &q.group),
            OrbitSourceJson::Table(t) => t.group.as_ref(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VertexRef {
    Index(usize),
    Name(String),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeJson {
    pub from: VertexRef,
    pub to: VertexRef,
    #[serde(default)]
    pub h1: Vec<Int>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h1_rank: Option<usize>,
}

impl GraphJson {
    pub fn build(&self) -> Result<TransitionGraph, InputError> {
        let find = |v: &VertexRef| -> Result<usize, InputError> {
            match v {
                VertexRef::Index(i) => Ok(*i),
                VertexRef::Name(n) => self
                    .vertices
                    .iter()
                    .position(|x| x == n)
                    .ok_or_else(|| InputError::Invalid(format!("unknown vertex `{n}`"))),
            }
        };
        let rank = self.h1_rank.unwrap_or_else(|| self.edges.first().map_or(0, |e| e.h1.len()));
        let edges = self
            .edges
            .iter()
            .map(|e| Ok(Edge { from: find(&e.from)?, to: find(&e.to)?, h1: bigs(&e.h1), label: e.label }))
            .collect::<Result<Vec<_>, InputError>>()?;
        Ok(TransitionGraph::new(self.vertices.clone(), edges, rank)?)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfiniteJson {
    pub residue: Int,
    pub modulus: Int,
}

impl ProfiniteJson {
    pub fn build(&self) -> Result<TruncatedProfiniteInt, InputError> {
        Ok(TruncatedProfiniteInt::new(self.residue.0.clone(), self.modulus.0.clone())?)
    }

    pub fn from_value(x: &TruncatedProfiniteInt) -> Self {
        ProfiniteJson { residue: Int(x.residue().clone()), modulus: Int(x.modulus().clone()) }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub symbol: String,
    pub matrix: Vec<Vec<Int>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residue: Option<ProfiniteJson>,
}

/// `Σ z_i·Φ_i`, each `Φ_i` a `target_rank x source_rank` matrix.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolicMapJson {
    pub source_rank: usize,
    pub target_rank: usize,
    pub terms: Vec<TermJson>,
}

impl SymbolicMapJson {
    pub fn build(&self) -> Result<SymbolicProfiniteMap, InputError> {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                Ok(ProfiniteTerm {
                    matrix: int_matrix(&t.matrix, &format!("term {}", t.symbol))?,
                    symbol: t.symbol.clone(),
                    residue: t.residue.as_ref().map(ProfiniteJson::build).transpose()?,
                })
            })
            .collect::<Result<Vec<_>, InputError>>()?;
        Ok(SymbolicProfiniteMap::new(self.source_rank, self.target_rank, terms)?)
    }

    /// `z·I` with the residue of `z` given by `mu`.
    pub fn scalar_identity(n: usize, mu: &ProfiniteJson) -> Self {
        SymbolicMapJson {
            source_rank: n,
            target_rank: n,
            terms: vec![TermJson {
                symbol: "z".into(),
                matrix: matrix_json(&IntMatrix::identity(n)),
                residue: Some(mu.clone()),
            }],
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SideJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub presentation: Option<PresentationJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ball: Option<NormBallJson>,
    /// The class of the fibration described by `presentation`, as a covector.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fibered_class: Option<Vec<Int>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbits: Option<OrbitSourceJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorrespondingQuotientJson {
    pub group: GroupJson,
    /// Images of the generators of each side's group, in presentation order.
    pub images_a: Vec<ElementJson>,
    pub images_b: Vec<ElementJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSpecJson {
    pub name: String,
    pub a: SideJson,
    pub b: SideJson,
    pub mu: ProfiniteJson,
    /// Map on `H₁` from side A to side B; defaults to `z·I` with `z ≡ μ`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi: Option<SymbolicMapJson>,
    /// Value of every symbol in the specialization; the battery also tries its negative.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<Rat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quotient: Option<CorrespondingQuotientJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_max: Option<u32>,
    /// `(l, d)` pairs for the ideal comparison in `(ℤ/l)[ℤ/d]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ladder: Option<Vec<(u64, u64)>>,
    /// Random covectors added to the basis sample in `norm_values`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

pub fn eps_map(psi: &SymbolicProfiniteMap, eps: &BigRational) -> BTreeMap<String, BigRational> {
    psi.symbols().into_iter().map(|s| (s.to_string(), eps.clone())).collect()
}

pub fn one() -> BigRational {
    BigRational::one()
}
