use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{smith_form, IntMatrix};
use crate::group::FiniteGroup;

/// One `m`-periodic trajectory class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitRecord {
    /// Records of the same period with equal ids lie on one `f`-orbit.
    pub orbit: usize,
    pub period: u32,
    /// Prong count: 2 for a regular point, at least 3 at a singularity, 1 allowed at punctures.
    pub prongs: u32,
    /// Whether `fᵐ` fixes every prong.
    pub preserved: bool,
    /// Conjugacy class index in the declared group.
    pub class: Option<usize>,
    pub h1: Vec<BigInt>,
    pub puncture: bool,
}

impl OrbitRecord {
    pub fn is_flagged(&self) -> bool {
        self.puncture || self.prongs == 1
    }
}

/// `ind_m = 1 − k` if `fᵐ` preserves every prong, `+1` otherwise.
pub fn periodic_index(r: &OrbitRecord) -> Result<i64> {
    if r.prongs == 0 {
        return Err(Error::Invalid("prong count must be at least 1".into()));
    }
    Ok(if r.preserved { 1 - i64::from(r.prongs) } else { 1 })
}

#[derive(Debug, Clone)]
pub struct OrbitTable {
    group: Option<FiniteGroup>,
    records: Vec<OrbitRecord>,
    max_period: u32,
}

impl OrbitTable {
    /// `max_period` is the largest period the table is complete for; it
    /// defaults to the largest period present.
    pub fn new(group: Option<FiniteGroup>, records: Vec<OrbitRecord>, max_period: Option<u32>) -> Result<Self> {
        let classes = group.as_ref().map(|g| g.conjugacy_classes().len());
        for (i, r) in records.iter().enumerate() {
            if r.period == 0 {
                return Err(Error::Invalid(format!("record {i} has period 0")));
            }
            if r.prongs == 0 {
                return Err(Error::Invalid(format!("record {i} has prong count 0")));
            }
            match (r.class, classes) {
                (Some(c), Some(n)) if c >= n => {
                    return Err(Error::Invalid(format!("record {i}: class {c} out of range ({n} classes)")));
                }
                (Some(_), None) => return Err(Error::Invalid(format!("record {i} has a class label but no group"))),
                _ => {}
            }
        }
        let present = records.iter().map(|r| r.period).max().unwrap_or(0);
        let max_period = max_period.unwrap_or(present);
        if max_period < present {
            return Err(Error::Invalid(format!("records reach period {present} beyond max_period {max_period}")));
        }
        Ok(OrbitTable { group, records, max_period })
    }

    pub fn group(&self) -> Option<&FiniteGroup> {
        self.group.as_ref()
    }

    pub fn records(&self) -> &[OrbitRecord] {
        &self.records
    }

    pub fn max_period(&self) -> u32 {
        self.max_period
    }

    pub fn at_period(&self, m: u32) -> impl Iterator<Item = (usize, &OrbitRecord)> {
        self.records.iter().enumerate().filter(move |(_, r)| r.period == m)
    }

    /// Same table with orbit ids renumbered by `perm` and records reversed.
    pub fn relabeled(&self, perm: impl Fn(usize) -> usize) -> OrbitTable {
        let mut records: Vec<OrbitRecord> =
            self.records.iter().map(|r| OrbitRecord { orbit: perm(r.orbit), ..r.clone() }).collect();
        records.reverse();
        OrbitTable { group: self.group.clone(), records, max_period: self.max_period }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NielsenNumbers {
    pub period: u32,
    /// `ν_m(i)`: number of essential classes of index `i`.
    pub nu: BTreeMap<i64, usize>,
    /// `N_m = Σ_i ν_m(i)`.
    pub total: usize,
    /// Records at punctures, reported but not asserted against.
    pub flagged: Vec<usize>,
}

/// Index-zero classes are inessential and not counted.
pub fn nielsen_numbers(table: &OrbitTable, m: u32) -> Result<NielsenNumbers> {
    let mut nu = BTreeMap::new();
    let mut flagged = Vec::new();
    for (i, r) in table.at_period(m) {
        let ind = periodic_index(r)?;
        if r.is_flagged() {
            flagged.push(i);
        }
        if ind != 0 {
            *nu.entry(ind).or_insert(0) += 1;
        }
    }
    Ok(NielsenNumbers { period: m, total: nu.values().sum(), nu, flagged })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StretchEntry {
    pub period: u32,
    pub count: usize,
    /// Largest multiple of `10^-digits` not exceeding `N_m^{1/m}`.
    pub root_lower: BigRational,
    pub running_max: BigRational,
}

/// Largest `p/10^digits` with `(p/10^digits)^m ≤ n`.
pub fn root_lower_bound(n: &BigInt, m: u32, digits: u32) -> BigRational {
    let scale = BigInt::from(10u32).pow(digits);
    // Compare p^m ≤ n·10^{digits·m} by bisection on p.
    let target = n * scale.pow(m);
    let mut lo = BigInt::zero();
    let mut hi = (n + 1u32) * &scale + 1u32;
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) >> 1;
        if mid.pow(m) <= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    BigRational::new(lo, scale)
}

/// `N_m^{1/m}` as exact decimal lower bounds, with the running maximum.
pub fn stretch_estimate(table: &OrbitTable, m_max: u32, digits: u32) -> Result<Vec<StretchEntry>> {
    let mut out = Vec::new();
    let mut best = BigRational::zero();
    for m in 1..=m_max {
        let n = nielsen_numbers(table, m)?.total;
        let root = root_lower_bound(&BigInt::from(n), m, digits);
        if root > best {
            best = root.clone();
        }
        out.push(StretchEntry { period: m, count: n, root_lower: root, running_max: best.clone() });
    }
    Ok(out)
}

/// `Σ ξ(label)·ind` over the period-`m` records.
pub fn twisted_lefschetz(table: &OrbitTable, m: u32, xi: &[BigRational]) -> Result<BigRational> {
    let mut total = BigRational::zero();
    for (i, r) in table.at_period(m) {
        let c = r.class.ok_or(Error::MissingLabel(i))?;
        let x = xi.get(c).ok_or_else(|| Error::Dimension(format!("class function has no value at class {c}")))?;
        total += x * BigRational::from_integer(periodic_index(r)?.into());
    }
    Ok(total)
}

/// Untwisted Lefschetz number; labels are not needed.
pub fn lefschetz(table: &OrbitTable, m: u32) -> Result<BigInt> {
    table.at_period(m).map(|(_, r)| periodic_index(r).map(BigInt::from)).sum()
}

/// Hyperbolic linear automorphism of the torus `ℝ²/ℤ²`, used as a
/// reference model with a finite quotient of its mapping torus group.
#[derive(Debug, Clone)]
pub struct LinearModel {
    a: IntMatrix,
    quotient: Option<ModelQuotient>,
}

/// `π₁` of the mapping torus mapped to `Γ` by images of the fiber basis
/// (which must commute) and of the stable letter, with `t⁻¹xt = A·x`.
#[derive(Debug, Clone)]
pub struct ModelQuotient {
    pub group: FiniteGroup,
    pub fiber: Vec<usize>,
    pub t: usize,
}

impl LinearModel {
    pub fn new(a: IntMatrix, quotient: Option<ModelQuotient>) -> Result<Self> {
        if a.shape() != (2, 2) {
            return Err(Error::Dimension("the linear model is 2 x 2".into()));
        }
        if !a.is_unimodular() {
            return Err(Error::Invalid("matrix is not in GL(2, Z)".into()));
        }
        let tr = &a[(0, 0)] + &a[(1, 1)];
        let det = a.det()?;
        // Hyperbolic iff the characteristic polynomial has no root on the unit circle.
        if tr.abs() <= BigInt::from(2) && det.is_one() || tr.is_zero() {
            return Err(Error::Invalid("matrix is not hyperbolic".into()));
        }
        if let Some(q) = &quotient {
            let g = &q.group;
            if q.fiber.len() != 2 || q.fiber.iter().chain([&q.t]).any(|&x| x >= g.order()) {
                return Err(Error::Invalid("quotient needs two fiber images and a t image in the group".into()));
            }
            if g.mul(q.fiber[0], q.fiber[1]) != g.mul(q.fiber[1], q.fiber[0]) {
                return Err(Error::Invalid("fiber images must commute".into()));
            }
            for j in 0..2 {
                let lhs = g.mul(g.mul(g.inv(q.t), q.fiber[j]), q.t);
                let col = [a[(0, j)].clone(), a[(1, j)].clone()];
                if lhs != fiber_image(g, &q.fiber, &col) {
                    return Err(Error::Invalid(format!("t^-1 x{j} t does not map to the image of A x{j}")));
                }
            }
        }
        Ok(LinearModel { a, quotient })
    }

    pub fn cat_map() -> Self {
        Self::new(IntMatrix::from_i64(2, 2, &[2, 1, 1, 1]), None).expect("hyperbolic")
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.a
    }

    pub fn quotient(&self) -> Option<&ModelQuotient> {
        self.quotient.as_ref()
    }

    /// `|det(Aᵐ − I)|`, the number of fixed points of `fᵐ`.
    pub fn fixed_point_count(&self, m: u32) -> BigInt {
        let am = self.a.pow(u64::from(m));
        am.sub(&IntMatrix::identity(2)).expect("square").det().expect("square").abs()
    }

    /// `det(I − Aᵐ)`; every fixed point of `fᵐ` has index equal to its sign.
    pub fn lefschetz_oracle(&self, m: u32) -> BigInt {
        let am = self.a.pow(u64::from(m));
        IntMatrix::identity(2).sub(&am).expect("square").det().expect("square")
    }

    /// Fixed points of `fᵐ` as reduced fractions `x = (x₀, x₁)` with
    /// their translation vectors `z = (Aᵐ − I)x̃ ∈ ℤ²`.
    pub fn fixed_points(&self, m: u32) -> Vec<([BigRational; 2], [BigInt; 2])> {
        let am = self.a.pow(u64::from(m));
        let mm = am.sub(&IntMatrix::identity(2)).expect("square");
        let s = smith_form(&mm);
        let d = &s.invariant_factors;
        let (d0, d1) = (d[0].to_usize().expect("small"), d[1].to_usize().expect("small"));
        let mut out = Vec::with_capacity(d0 * d1);
        for c0 in 0..d0 {
            for c1 in 0..d1 {
                // x̃ = V·D⁻¹·c
                let y = [BigRational::new(c0.into(), d[0].clone()), BigRational::new(c1.into(), d[1].clone())];
                let x: [BigRational; 2] = std::array::from_fn(|i| {
                    let v = &y[0] * BigRational::from_integer(s.v[(i, 0)].clone())
                        + &y[1] * BigRational::from_integer(s.v[(i, 1)].clone());
                    &v - v.floor()
                });
                let z: [BigInt; 2] = std::array::from_fn(|i| {
                    let v = &x[0] * BigRational::from_integer(mm[(i, 0)].clone())
                        + &x[1] * BigRational::from_integer(mm[(i, 1)].clone());
                    v.to_integer()
                });
                out.push((x, z));
            }
        }
        out.sort();
        out
    }

    fn apply_mod_one(&self, x: &[BigRational; 2]) -> [BigRational; 2] {
        std::array::from_fn(|i| {
            let v = &x[0] * BigRational::from_integer(self.a[(i, 0)].clone())
                + &x[1] * BigRational::from_integer(self.a[(i, 1)].clone());
            &v - v.floor()
        })
    }

    /// Orbit table through period `m_max`, one record per fixed point of `fᵐ`.
    pub fn orbit_table(&self, m_max: u32) -> Result<OrbitTable> {
        let classes = self.quotient.as_ref().map(|q| {
            let cl = q.group.conjugacy_classes();
            let mut of = vec![0; q.group.order()];
            for (i, c) in cl.iter().enumerate() {
                for &g in c {
                    of[g] = i;
                }
            }
            of
        });
        let mut records = Vec::new();
        let mut next_orbit = 0;
        for m in 1..=m_max {
            let index = self.lefschetz_oracle(m).signum();
            let preserved = index.is_negative();
            let points = self.fixed_points(m);
            let mut orbit_of: BTreeMap<[BigRational; 2], usize> = BTreeMap::new();
            for (x, z) in &points {
                let orbit = match orbit_of.get(x) {
                    Some(&o) => o,
                    None => {
                        let o = next_orbit;
                        next_orbit += 1;
                        let mut y = x.clone();
                        loop {
                            orbit_of.insert(y.clone(), o);
                            y = self.apply_mod_one(&y);
                            if &y == x {
                                break;
                            }
                        }
                        o
                    }
                };
                let class = match (&self.quotient, &classes) {
                    (Some(q), Some(of)) => {
                        let g = &q.group;
                        let tm = g.pow_u(q.t, m as usize);
                        Some(of[g.mul(tm, fiber_image(g, &q.fiber, z))])
                    }
                    _ => None,
                };
                records.push(OrbitRecord {
                    orbit,
                    period: m,
                    prongs: 2,
                    preserved,
                    class,
                    h1: vec![BigInt::from(m)],
                    puncture: false,
                });
            }
        }
        OrbitTable::new(self.quotient.as_ref().map(|q| q.group.clone()), records, Some(m_max))
    }
}

fn fiber_image(g: &FiniteGroup, fiber: &[usize], z: &[BigInt]) -> usize {
    let mut acc = g.identity();
    for (&x, e) in fiber.iter().zip(z) {
        acc = g.mul(acc, g.pow(x, e));
    }
    acc
}

/// Orbits of `fᵐ`-fixed points under `f`, as sets of record indices.
pub fn orbit_partition(table: &OrbitTable, m: u32) -> Vec<BTreeSet<usize>> {
    let mut by_id: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for (i, r) in table.at_period(m) {
        by_id.entry(r.orbit).or_default().insert(i);
    }
    by_id.into_values().collect()
}

pub(crate) fn gcd_u(a: usize, b: usize) -> usize {
    a.gcd(&b)
}
