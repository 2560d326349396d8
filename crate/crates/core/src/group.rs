//! Small finite groups, stored as permutation groups with an explicit
//! element list.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};

/// Largest group we are willing to enumerate.
pub const DEFAULT_ORDER_BOUND: usize = 100_000;

type Perm = Vec<u32>;

fn compose(a: &Perm, b: &Perm) -> Perm {
    // (a·b)(x) = a(b(x))
    b.iter().map(|&x| a[x as usize]).collect()
}

fn invert(a: &Perm) -> Perm {
    let mut out = vec![0u32; a.len()];
    for (i, &x) in a.iter().enumerate() {
        out[x as usize] = i as u32;
    }
    out
}

/// A finite group. Elements are indexed `0..order`, with `0` the identity.
#[derive(Clone)]
pub struct FiniteGroup {
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
    generators: Vec<usize>,
    /// `parent[a] = (b, i)` with `a = b · g_i`; the identity has none.
    parent: Vec<Option<(usize, usize)>>,
    inverse: Vec<usize>,
}

impl std::fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.order())
            .field("generators", &self.generators)
            .finish()
    }
}

impl FiniteGroup {
    /// Group generated by permutations of `0..degree`, enumerated breadth
    /// first by right multiplication with the generators.
    pub fn from_permutations(gens: &[Vec<usize>], bound: usize) -> Result<Self> {
        let degree = gens.first().map_or(1, Vec::len);
        let mut perms = Vec::with_capacity(gens.len());
        for g in gens {
            if g.len() != degree {
                return Err(Error::Invalid("generators act on different point sets".into()));
            }
            let mut seen = vec![false; degree];
            for &x in g {
                if x >= degree || std::mem::replace(&mut seen[x], true) {
                    return Err(Error::Invalid(format!("{g:?} is not a permutation")));
                }
            }
            perms.push(g.iter().map(|&x| x as u32).collect::<Perm>());
        }
        let id: Perm = (0..degree as u32).collect();
        let mut elements = vec![id.clone()];
        let mut index = HashMap::from([(id, 0usize)]);
        let mut parent = vec![None];
        let mut queue = VecDeque::from([0usize]);
        while let Some(a) = queue.pop_front() {
            for (i, g) in perms.iter().enumerate() {
                let p = compose(&elements[a], g);
                if !index.contains_key(&p) {
                    if elements.len() >= bound {
                        return Err(Error::Unsupported(format!("group order exceeds {bound}")));
                    }
                    index.insert(p.clone(), elements.len());
                    elements.push(p);
                    parent.push(Some((a, i)));
                    queue.push_back(elements.len() - 1);
                }
            }
        }
        let generators = perms.iter().map(|g| index[g]).collect();
        let inverse = elements.iter().map(|e| index[&invert(e)]).collect();
        Ok(FiniteGroup { elements, index, generators, parent, inverse })
    }

    /// `ℤ/n`; element `k` is the residue `k`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let gen: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let gens = if n == 1 { vec![] } else { vec![gen] };
        Self::from_permutations(&gens, usize::MAX).expect("valid cycle")
    }

    /// `S_n`, generated by the transposition `(0 1)` and the n-cycle.
    pub fn symmetric(n: usize) -> Self {
        assert!(n >= 1);
        if n == 1 {
            return Self::trivial();
        }
        let mut swap: Vec<usize> = (0..n).collect();
        swap.swap(0, 1);
        let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        Self::from_permutations(&[swap, cycle], usize::MAX).expect("valid generators")
    }

    pub fn trivial() -> Self {
        Self::from_permutations(&[], 1).expect("trivial group")
    }

    /// Group given by a multiplication table `table[a][b] = a·b`; element
    /// labels are kept. Group axioms are verified.
    pub fn from_table(table: &[Vec<usize>]) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::Invalid("empty multiplication table".into()));
        }
        for row in table {
            if row.len() != n {
                return Err(Error::Invalid("multiplication table is not square".into()));
            }
        }
        if (0..n).any(|x| table[0][x] != x || table[x][0] != x) {
            return Err(Error::Invalid("element 0 must be the identity".into()));
        }
        for (a, row) in table.iter().enumerate() {
            let mut seen = vec![false; n];
            for &x in row {
                if x >= n || std::mem::replace(&mut seen[x], true) {
                    return Err(Error::Invalid(format!("row {a} is not a permutation")));
                }
            }
        }
        // Greedy generating set; `parent` records a word for every element.
        let mut gens: Vec<usize> = Vec::new();
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[0] = true;
        while let Some(next) = (0..n).find(|&a| !seen[a]) {
            gens.push(next);
            seen = vec![false; n];
            seen[0] = true;
            parent = vec![None; n];
            let mut queue = VecDeque::from([0usize]);
            while let Some(a) = queue.pop_front() {
                for (i, &g) in gens.iter().enumerate() {
                    let b = table[a][g];
                    if !seen[b] {
                        seen[b] = true;
                        parent[b] = Some((a, i));
                        queue.push_back(b);
                    }
                }
            }
        }
        // Light's test: associativity only needs checking at generators.
        for &g in &gens {
            for x in 0..n {
                for y in 0..n {
                    if table[table[x][g]][y] != table[x][table[g][y]] {
                        return Err(Error::Invalid(format!("associativity fails at ({x}, {g}, {y})")));
                    }
                }
            }
        }
        // Left-regular representation: L_a(x) = a·x.
        let perms: Vec<Perm> = table.iter().map(|row| row.iter().map(|&x| x as u32).collect()).collect();
        let index: HashMap<Perm, usize> = perms.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let inverse = (0..n).map(|a| (0..n).find(|&b| table[a][b] == 0).expect("inverse")).collect();
        Ok(FiniteGroup { elements: perms, index, generators: gens, parent, inverse })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.index[&compose(&self.elements[a], &self.elements[b])]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn conjugate(&self, h: usize, g: usize) -> usize {
        self.mul(self.mul(h, g), self.inv(h))
    }

    pub fn pow(&self, a: usize, n: &BigInt) -> usize {
        let ord = BigInt::from(self.element_order(a));
        let e = n.mod_floor(&ord).to_usize().expect("reduced exponent fits");
        self.pow_u(a, e)
    }

    pub fn pow_u(&self, a: usize, mut e: usize) -> usize {
        let mut result = 0;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        result
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> usize {
        (0..self.order()).fold(1, |acc, a| acc.lcm(&self.element_order(a)))
    }

    /// Word in the generators (indices into [`Self::generators`]) whose
    /// product, left to right, is `a`.
    pub fn word(&self, a: usize) -> Vec<usize> {
        let mut w = Vec::new();
        let mut cur = a;
        while let Some((p, i)) = self.parent[cur] {
            w.push(i);
            cur = p;
        }
        w.reverse();
        w
    }

    /// Conjugacy classes, each sorted, listed by smallest member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut class_id = vec![usize::MAX; n];
        let mut classes = Vec::new();
        for a in 0..n {
            if class_id[a] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let mut members = vec![a];
            class_id[a] = id;
            let mut k = 0;
            while k < members.len() {
                let x = members[k];
                for &g in &self.generators {
                    let y = self.conjugate(g, x);
                    if class_id[y] == usize::MAX {
                        class_id[y] = id;
                        members.push(y);
                    }
                }
                k += 1;
            }
            members.sort_unstable();
            classes.push(members);
        }
        classes
    }

    /// Permutation of `0..degree` realizing element `a`.
    pub fn permutation(&self, a: usize) -> Vec<usize> {
        self.elements[a].iter().map(|&x| x as usize).collect()
    }

    pub fn element_of(&self, perm: &[usize]) -> Option<usize> {
        let p: Perm = perm.iter().map(|&x| x as u32).collect();
        self.index.get(&p).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_labels_are_residues() {
        let z5 = FiniteGroup::cyclic(5);
        assert_eq!(z5.order(), 5);
        for a in 0..5 {
            for b in 0..5 {
                assert_eq!(z5.mul(a, b), (a + b) % 5);
            }
        }
        assert_eq!(z5.pow(2, &BigInt::from(-1)), 3);
        assert_eq!(z5.conjugacy_classes().len(), 5);
        assert_eq!(FiniteGroup::cyclic(1).order(), 1);
    }

    #[test]
    fn symmetric_groups() {
        let s3 = FiniteGroup::symmetric(3);
        assert_eq!(s3.order(), 6);
        assert_eq!(s3.conjugacy_classes().len(), 3);
        assert_eq!(s3.exponent(), 6);
        assert_eq!(FiniteGroup::symmetric(4).conjugacy_classes().len(), 5);
        for a in 0..6 {
            let w = s3.word(a);
            let prod = w.iter().fold(0, |acc, &i| s3.mul(acc, s3.generators()[i]));
            assert_eq!(prod, a);
        }
    }

    #[test]
    fn tables() {
        let table: Vec<Vec<usize>> = (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect();
        let klein = FiniteGroup::from_table(&table).unwrap();
        assert_eq!(klein.order(), 4);
        assert_eq!(klein.mul(1, 2), 3);
        assert_eq!(klein.generators().len(), 2);
        for a in 0..4 {
            let w = klein.word(a);
            assert_eq!(w.iter().fold(0, |acc, &i| klein.mul(acc, klein.generators()[i])), a);
        }
        let bad = vec![vec![0, 1], vec![1, 1]];
        assert!(FiniteGroup::from_table(&bad).is_err());
    }
}
