use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::orbits::{gcd_u, periodic_index, twisted_lefschetz, OrbitTable};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;

/// Conjugacy classes of `Γ` grouped under the power maps `g ↦ gᵉ`, `e` a unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaClasses {
    /// Conjugacy classes as sorted element lists.
    pub classes: Vec<Vec<usize>>,
    /// Each part lists class indices, sorted; parts ordered by least class.
    pub parts: Vec<Vec<usize>>,
    omega_of: Vec<usize>,
}

impl OmegaClasses {
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn omega_of_class(&self, c: usize) -> usize {
        self.omega_of[c]
    }

    /// `χ_ω` as a function on conjugacy classes.
    pub fn indicator(&self, w: usize) -> Vec<BigRational> {
        (0..self.classes.len())
            .map(|c| if self.omega_of[c] == w { BigRational::one() } else { BigRational::zero() })
            .collect()
    }

    /// Parts as sets of group elements.
    pub fn element_parts(&self) -> Vec<Vec<usize>> {
        self.parts
            .iter()
            .map(|p| {
                let mut es: Vec<usize> = p.iter().flat_map(|&c| self.classes[c].iter().copied()).collect();
                es.sort_unstable();
                es
            })
            .collect()
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

pub fn omega_classes(g: &FiniteGroup) -> OmegaClasses {
    let classes = g.conjugacy_classes();
    let mut class_of = vec![0; g.order()];
    for (i, c) in classes.iter().enumerate() {
        for &x in c {
            class_of[x] = i;
        }
    }
    let exp = g.exponent();
    let units: Vec<usize> = (1..=exp).filter(|&e| gcd_u(e, exp) == 1).collect();
    let mut parent: Vec<usize> = (0..classes.len()).collect();
    for (i, c) in classes.iter().enumerate() {
        for &e in &units {
            let j = class_of[g.pow_u(c[0], e)];
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..classes.len() {
        let r = find(&mut parent, i);
        by_root.entry(r).or_default().push(i);
    }
    let parts: Vec<Vec<usize>> = by_root.into_values().collect();
    let mut omega_of = vec![0; classes.len()];
    for (w, p) in parts.iter().enumerate() {
        for &c in p {
            omega_of[c] = w;
        }
    }
    OmegaClasses { classes, parts, omega_of }
}

/// Period-`m` records grouped by the part containing their label.
pub fn hit_census(table: &OrbitTable, m: u32, omega: &OmegaClasses) -> Result<BTreeMap<usize, Vec<usize>>> {
    let mut out: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, r) in table.at_period(m) {
        let c = r.class.ok_or(Error::MissingLabel(i))?;
        if c >= omega.classes.len() {
            return Err(Error::Invalid(format!("record {i}: class {c} out of range")));
        }
        out.entry(omega.omega_of[c]).or_default().push(i);
    }
    Ok(out)
}

/// `L_m(f; χ_ω)` for every part `ω`.
pub fn omega_lefschetz(table: &OrbitTable, m: u32, omega: &OmegaClasses) -> Result<Vec<BigRational>> {
    (0..omega.len()).map(|w| twisted_lefschetz(table, m, &omega.indicator(w))).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NielsenBound {
    pub period: u32,
    pub nielsen: usize,
    /// `#{ω : L_m(χ_ω) ≠ 0}`.
    pub nonzero_parts: usize,
    /// Every essential class lies in its own part.
    pub distinct_hits: bool,
    /// `ν_m(i) = #{ω : L_m(χ_ω) = i}` for all `i`, checked when `distinct_hits`.
    pub equality_holds: Option<bool>,
}

impl NielsenBound {
    pub fn holds(&self) -> bool {
        self.nielsen >= self.nonzero_parts && self.equality_holds != Some(false)
    }
}

pub fn nielsen_bound(table: &OrbitTable, m: u32, omega: &OmegaClasses) -> Result<NielsenBound> {
    let n = super::orbits::nielsen_numbers(table, m)?;
    let ls = omega_lefschetz(table, m, omega)?;
    let nonzero_parts = ls.iter().filter(|l| !l.is_zero()).count();
    let census = hit_census(table, m, omega)?;
    let mut essential_per_part: BTreeMap<usize, usize> = BTreeMap::new();
    for (w, recs) in &census {
        for &i in recs {
            if periodic_index(&table.records()[i])? != 0 {
                *essential_per_part.entry(*w).or_insert(0) += 1;
            }
        }
    }
    let distinct_hits = essential_per_part.values().all(|&k| k <= 1);
    let equality_holds = distinct_hits.then(|| {
        let mut from_l: BTreeMap<i64, usize> = BTreeMap::new();
        for l in ls.iter().filter(|l| !l.is_zero()) {
            if l.is_integer() {
                *from_l.entry(l.to_integer().try_into().unwrap_or(i64::MAX)).or_insert(0) += 1;
            }
        }
        from_l == n.nu
    });
    Ok(NielsenBound { period: m, nielsen: n.total, nonzero_parts, distinct_hits, equality_holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::orbits::{LinearModel, ModelQuotient, OrbitRecord};
    use crate::exact::IntMatrix;
    use proptest::prelude::*;

    #[test]
    fn small_groups() {
        let z5 = omega_classes(&FiniteGroup::cyclic(5));
        assert_eq!(z5.element_parts(), vec![vec![0], vec![1, 2, 3, 4]]);
        let s3 = omega_classes(&FiniteGroup::symmetric(3));
        assert_eq!(s3.len(), 3);
        assert_eq!(s3.classes.len(), 3);
        assert_eq!(omega_classes(&FiniteGroup::trivial()).len(), 1);
        // ℤ/8: units {1,3,5,7} merge the four generators, and 2 with 6.
        let z8 = omega_classes(&FiniteGroup::cyclic(8));
        assert_eq!(z8.element_parts(), vec![vec![0], vec![1, 3, 5, 7], vec![2, 6], vec![4]]);
    }

    #[test]
    fn census_and_bound() {
        let s3 = FiniteGroup::symmetric(3);
        let c = s3.element_of(&[1, 2, 0]).unwrap();
        let tau = s3.element_of(&[1, 0, 2]).unwrap();
        let q = ModelQuotient { group: s3.clone(), fiber: vec![c, s3.pow_u(c, 2)], t: tau };
        let model = LinearModel::new(IntMatrix::from_i64(2, 2, &[3, 2, 1, 1]), Some(q)).unwrap();
        let table = model.orbit_table(5).unwrap();
        let om = omega_classes(&s3);
        for m in 1..=5 {
            let b = nielsen_bound(&table, m, &om).unwrap();
            assert!(b.holds(), "{b:?}");
            let census = hit_census(&table, m, &om).unwrap();
            assert_eq!(census.values().map(Vec::len).sum::<usize>(), b.nielsen);
        }
        // Two orbits in distinct parts: equality case.
        let recs = vec![
            OrbitRecord { orbit: 0, period: 1, prongs: 3, preserved: true, class: Some(1), h1: vec![], puncture: false },
            OrbitRecord { orbit: 1, period: 1, prongs: 2, preserved: false, class: Some(0), h1: vec![], puncture: false },
        ];
        let t = OrbitTable::new(Some(FiniteGroup::cyclic(5)), recs, None).unwrap();
        let om = omega_classes(&FiniteGroup::cyclic(5));
        let b = nielsen_bound(&t, 1, &om).unwrap();
        assert!(b.distinct_hits);
        assert_eq!(b.equality_holds, Some(true));
        assert_eq!(b.nonzero_parts, 2);
    }

    fn relabel_table(table: &[Vec<usize>], perm: &[usize]) -> Vec<Vec<usize>> {
        // New label of a is perm[a]; perm fixes 0.
        let n = table.len();
        let mut inv = vec![0; n];
        for (a, &p) in perm.iter().enumerate() {
            inv[p] = a;
        }
        (0..n).map(|x| (0..n).map(|y| perm[table[inv[x]][inv[y]]]).collect()).collect()
    }

    fn group_table(g: &FiniteGroup) -> Vec<Vec<usize>> {
        (0..g.order()).map(|a| (0..g.order()).map(|b| g.mul(a, b)).collect()).collect()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn invariant_under_relabeling(which in 0usize..4, seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let g = match which {
                0 => FiniteGroup::cyclic(5),
                1 => FiniteGroup::symmetric(3),
                2 => FiniteGroup::cyclic(12),
                _ => FiniteGroup::symmetric(4),
            };
            let table = group_table(&g);
            let n = table.len();
            let mut rest: Vec<usize> = (1..n).collect();
            rest.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let perm: Vec<usize> = std::iter::once(0).chain(rest).collect();
            let h = FiniteGroup::from_table(&relabel_table(&table, &perm)).unwrap();
            let a = omega_classes(&FiniteGroup::from_table(&table).unwrap()).element_parts();
            let b = omega_classes(&h).element_parts();
            let mut mapped: Vec<Vec<usize>> = a.iter().map(|p| { let mut q: Vec<usize> = p.iter().map(|&x| perm[x]).collect(); q.sort_unstable(); q }).collect();
            mapped.sort();
            let mut b = b;
            b.sort();
            prop_assert_eq!(mapped, b);
        }
    }
}
