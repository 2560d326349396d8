use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::cones::RationalCone;
use crate::error::{Error, Result};
use crate::exact::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    /// Homology class in `H₁(M_f; ℤ)`.
    pub h1: Vec<BigInt>,
    /// Conjugacy class in a declared finite quotient.
    pub label: Option<usize>,
}

/// Directed graph of a Markov partition: vertices are birectangles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionGraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    h1_rank: usize,
}

impl TransitionGraph {
    pub fn new(vertices: Vec<String>, edges: Vec<Edge>, h1_rank: usize) -> Result<Self> {
        for (i, e) in edges.iter().enumerate() {
            if e.from >= vertices.len() || e.to >= vertices.len() {
                return Err(Error::Invalid(format!("edge {i} has an endpoint out of range")));
            }
            if e.h1.len() != h1_rank {
                return Err(Error::Dimension(format!("edge {i} has a homology vector of length {}", e.h1.len())));
            }
        }
        Ok(TransitionGraph { vertices, edges, h1_rank })
    }

    /// One vertex per row; entry `T[i][j]` gives that many edges `i → j`
    /// with zero homology.
    pub fn from_transition_matrix(t: &IntMatrix) -> Result<Self> {
        if !t.is_square() {
            return Err(Error::Dimension("transition matrix must be square".into()));
        }
        let n = t.rows();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let c = &t[(i, j)];
                if c.is_negative() {
                    return Err(Error::Invalid("transition matrix has a negative entry".into()));
                }
                let c: usize = c.try_into().map_err(|_| Error::Invalid("transition entry too large".into()))?;
                edges.extend((0..c).map(|_| Edge { from: i, to: j, h1: vec![], label: None }));
            }
        }
        Self::new((0..n).map(|i| format!("R{i}")).collect(), edges, 0)
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn h1_rank(&self) -> usize {
        self.h1_rank
    }

    pub fn transition_matrix(&self) -> IntMatrix {
        let n = self.vertices.len();
        let mut t = IntMatrix::zeros(n, n);
        for e in &self.edges {
            t[(e.from, e.to)] += 1;
        }
        t
    }

    /// `tr(Tᵐ)` for `m = 1..=depth`: closed walks of length `m`.
    pub fn trace_counts(&self, depth: usize) -> Vec<BigInt> {
        let t = self.transition_matrix();
        let mut p = t.clone();
        let mut out = Vec::with_capacity(depth);
        for _ in 0..depth {
            out.push((0..t.rows()).map(|i| p[(i, i)].clone()).sum());
            p = p.dot(&t);
        }
        out
    }

    fn scc_ids(&self) -> Vec<usize> {
        // Kosaraju with explicit stacks.
        let n = self.vertices.len();
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        for e in &self.edges {
            out_adj[e.from].push(e.to);
            in_adj[e.to].push(e.from);
        }
        let mut order = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut stack = vec![(s, 0usize)];
            while let Some((v, i)) = stack.pop() {
                if i < out_adj[v].len() {
                    stack.push((v, i + 1));
                    let w = out_adj[v][i];
                    if !seen[w] {
                        seen[w] = true;
                        stack.push((w, 0));
                    }
                } else {
                    order.push(v);
                }
            }
        }
        let mut comp = vec![usize::MAX; n];
        let mut c = 0;
        for &s in order.iter().rev() {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = c;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for &w in &in_adj[v] {
                    if comp[w] == usize::MAX {
                        comp[w] = c;
                        stack.push(w);
                    }
                }
            }
            c += 1;
        }
        comp
    }

    /// Edges lying on some cycle.
    pub fn recurrent_edges(&self) -> BTreeSet<usize> {
        let comp = self.scc_ids();
        (0..self.edges.len()).filter(|&i| comp[self.edges[i].from] == comp[self.edges[i].to]).collect()
    }

    /// Subgraph on the given edges and their endpoints, vertices renumbered in order.
    pub fn subgraph(&self, edges: &BTreeSet<usize>) -> TransitionGraph {
        let used: BTreeSet<usize> = edges.iter().flat_map(|&i| [self.edges[i].from, self.edges[i].to]).collect();
        let index: Vec<Option<usize>> = {
            let mut idx = vec![None; self.vertices.len()];
            for (k, &v) in used.iter().enumerate() {
                idx[v] = Some(k);
            }
            idx
        };
        let vertices = used.iter().map(|&v| self.vertices[v].clone()).collect();
        let edges = edges
            .iter()
            .map(|&i| {
                let e = &self.edges[i];
                Edge { from: index[e.from].unwrap(), to: index[e.to].unwrap(), h1: e.h1.clone(), label: e.label }
            })
            .collect();
        TransitionGraph { vertices, edges, h1_rank: self.h1_rank }
    }

    /// Restriction to the recurrent part: every remaining vertex has
    /// in- and out-degree at least one.
    pub fn nonwandering(&self) -> TransitionGraph {
        self.subgraph(&self.recurrent_edges())
    }
}

/// A closed edge path, stored in its least rotation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DynamicalCycle {
    pub edges: Vec<usize>,
    pub homology: Vec<BigInt>,
}

impl DynamicalCycle {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// Strictly smaller than every proper rotation: primitive and canonical.
fn is_lyndon(s: &[usize]) -> bool {
    (1..s.len()).all(|k| {
        let rot = s[k..].iter().chain(&s[..k]);
        s.iter().lt(rot)
    })
}

fn cycles_of_length(g: &TransitionGraph, len: usize) -> Vec<DynamicalCycle> {
    let mut out_edges = vec![Vec::new(); g.vertices.len()];
    for (i, e) in g.edges.iter().enumerate() {
        out_edges[e.from].push(i);
    }
    let mut found = Vec::new();
    for first in 0..g.edges.len() {
        let start = g.edges[first].from;
        // Edges smaller than the first cannot occur in a least rotation.
        let mut path = vec![first];
        let mut stack: Vec<usize> = vec![0];
        while let Some(pos) = stack.last_mut() {
            let v = g.edges[*path.last().unwrap()].to;
            if path.len() == len {
                if v == start && is_lyndon(&path) {
                    found.push(path.clone());
                }
                stack.pop();
                path.pop();
                continue;
            }
            let candidates = &out_edges[v];
            while *pos < candidates.len() && candidates[*pos] < first {
                *pos += 1;
            }
            if *pos == candidates.len() {
                stack.pop();
                path.pop();
                continue;
            }
            let e = candidates[*pos];
            *pos += 1;
            path.push(e);
            stack.push(0);
        }
    }
    found
        .into_iter()
        .map(|edges| {
            let mut h = vec![BigInt::zero(); g.h1_rank];
            for &e in &edges {
                for (x, y) in h.iter_mut().zip(&g.edges[e].h1) {
                    *x += y;
                }
            }
            DynamicalCycle { edges, homology: h }
        })
        .collect()
}

/// All primitive cycles of length `1..=max_len`, by length and then lexicographically.
pub fn primitive_cycles(g: &TransitionGraph, max_len: usize) -> Result<Vec<DynamicalCycle>> {
    if max_len == 0 {
        return Err(Error::Invalid("max_len must be at least 1".into()));
    }
    let per_len: Vec<Vec<DynamicalCycle>> = std::thread::scope(|s| {
        let handles: Vec<_> = (1..=max_len).map(|l| s.spawn(move || cycles_of_length(g, l))).collect();
        handles.into_iter().map(|h| h.join().expect("cycle enumeration panicked")).collect()
    });
    Ok(per_len
        .into_iter()
        .flat_map(|mut v| {
            v.sort();
            v
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FriedCone {
    pub cone: RationalCone,
    /// The hull did not change between `max_len − 1` and `max_len`.
    pub stabilized: bool,
    /// Smallest length from which the hull stayed constant up to `max_len`.
    pub stable_from: usize,
}

/// Conical hull of the homology classes of primitive cycles of length at most `max_len`.
pub fn fried_cone(g: &TransitionGraph, max_len: usize) -> Result<FriedCone> {
    let cycles = primitive_cycles(g, max_len)?;
    let n = g.h1_rank;
    let mut hulls = Vec::with_capacity(max_len + 1);
    hulls.push(RationalCone::from_generators(n, &[], &[])?);
    for l in 1..=max_len {
        let gens: Vec<Vec<BigInt>> = cycles.iter().filter(|c| c.len() <= l).map(|c| c.homology.clone()).collect();
        hulls.push(RationalCone::from_generators(n, &gens, &[])?);
    }
    let cone = hulls[max_len].clone();
    let stable_from = (0..=max_len).rev().take_while(|&l| hulls[l] == cone).last().unwrap_or(max_len);
    Ok(FriedCone { stabilized: hulls[max_len - 1] == cone, stable_from, cone })
}

/// `{μ ≥ 0 on edges : Σμ = 1, inflow = outflow at each vertex}`, kept as the
/// cone over it (dropping the normalization).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalancedPolytope {
    pub cone: RationalCone,
    pub edge_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolytopeFace {
    /// Edges with measure zero on the whole face.
    pub zero_edges: BTreeSet<usize>,
    /// Indices into the polytope vertices.
    pub vertices: BTreeSet<usize>,
    pub dimension: isize,
}

impl BalancedPolytope {
    pub fn is_empty(&self) -> bool {
        self.cone.rays().is_empty()
    }

    /// Vertices of the polytope, as primitive integer measures (scale to sum 1).
    pub fn vertices(&self) -> &[Vec<BigInt>] {
        self.cone.rays()
    }

    pub fn dimension(&self) -> isize {
        self.cone.dimension() as isize - 1
    }

    /// H-description: `μ_e ≥ 0` facets that are not implied, and the balance equations.
    pub fn h_representation(&self) -> (&[Vec<BigInt>], &[Vec<BigInt>]) {
        (self.cone.facets(), self.cone.equations())
    }

    fn face_dimension(&self, vs: &BTreeSet<usize>) -> isize {
        if vs.is_empty() {
            return -1;
        }
        let rows: Vec<Vec<BigInt>> = vs.iter().map(|&i| self.cone.rays()[i].clone()).collect();
        IntMatrix::from_rows(rows, self.edge_count).expect("uniform").rank() as isize - 1
    }

    fn zero_set(&self, vs: &BTreeSet<usize>) -> BTreeSet<usize> {
        (0..self.edge_count).filter(|&e| vs.iter().all(|&v| self.cone.rays()[v][e].is_zero())).collect()
    }

    /// Face cut out by `μ_e = 0` for the given edges (possibly empty).
    pub fn face(&self, zero_edges: &BTreeSet<usize>) -> PolytopeFace {
        let vs: BTreeSet<usize> = (0..self.cone.rays().len())
            .filter(|&v| zero_edges.iter().all(|&e| self.cone.rays()[v][e].is_zero()))
            .collect();
        PolytopeFace { zero_edges: self.zero_set(&vs), dimension: self.face_dimension(&vs), vertices: vs }
    }

    /// All nonempty faces, largest first.
    pub fn faces(&self) -> Vec<PolytopeFace> {
        let mut seen: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        let mut out = Vec::new();
        let mut frontier = vec![self.face(&BTreeSet::new())];
        while let Some(f) = frontier.pop() {
            if f.vertices.is_empty() || !seen.insert(f.vertices.clone()) {
                continue;
            }
            for e in 0..self.edge_count {
                if !f.zero_edges.contains(&e) {
                    let mut z = f.zero_edges.clone();
                    z.insert(e);
                    frontier.push(self.face(&z));
                }
            }
            out.push(f);
        }
        out.sort_by(|a, b| b.dimension.cmp(&a.dimension).then_with(|| a.vertices.cmp(&b.vertices)));
        out
    }
}

pub fn balanced_polytope(g: &TransitionGraph) -> Result<BalancedPolytope> {
    let m = g.edges.len();
    let ineqs: Vec<Vec<BigInt>> = (0..m).map(|i| (0..m).map(|j| BigInt::from(u8::from(i == j))).collect()).collect();
    let eqs: Vec<Vec<BigInt>> = (0..g.vertices.len())
        .map(|v| {
            g.edges
                .iter()
                .map(|e| BigInt::from(i8::from(e.to == v) - i8::from(e.from == v)))
                .collect::<Vec<BigInt>>()
        })
        .filter(|row| row.iter().any(|x| !x.is_zero()))
        .collect();
    Ok(BalancedPolytope { cone: RationalCone::from_inequalities(m, &ineqs, &eqs)?, edge_count: m })
}

/// Edges carrying positive measure somewhere on the face; the subgraph is nonwandering.
pub fn support_graph(g: &TransitionGraph, polytope: &BalancedPolytope, face: &PolytopeFace) -> TransitionGraph {
    let support: BTreeSet<usize> = (0..polytope.edge_count).filter(|e| !face.zero_edges.contains(e)).collect();
    g.subgraph(&support)
}
