use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::graph::TransitionGraph;
use super::orbits::{lefschetz, twisted_lefschetz, OrbitTable};
use crate::error::Result;
use crate::exact::{solve_left_q, LaurentPoly, RatMatrix, RationalFunction};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZetaSeries {
    /// `c_0 = 1, c_1, …, c_D`.
    pub coeffs: Vec<BigRational>,
    /// The Lefschetz numbers `L_1..L_D` fed in.
    pub lefschetz: Vec<BigRational>,
    /// Rational function with numerator and denominator degrees summing to at
    /// most `D/2` whose expansion agrees through `t^D`.
    pub fit: Option<RationalFunction>,
}

/// `exp(Σ_{m ≤ D} L_m tᵐ / m)` truncated at `t^D`, via `n·c_n = Σ_{k=1}^n L_k c_{n−k}`.
pub fn exp_lefschetz(l: &[BigRational]) -> Vec<BigRational> {
    let mut c = vec![BigRational::one()];
    for n in 1..=l.len() {
        let s: BigRational = (1..=n).map(|k| &l[k - 1] * &c[n - k]).sum();
        c.push(s / BigRational::from_integer(BigInt::from(n)));
    }
    c
}

fn to_integer_poly(coeffs: &[BigRational]) -> LaurentPoly {
    let den = coeffs.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let d = BigRational::from_integer(den);
    LaurentPoly::from_coeffs(0, coeffs.iter().map(|x| (x * &d).to_integer()))
}

/// Smallest-degree `P/Q` with `Q(0) = 1`, `deg P + deg Q ≤ max_total`, and
/// `Q·c ≡ P mod t^{D+1}`, found from the Hankel equations.
pub fn rational_fit(c: &[BigRational], max_total: usize) -> Option<RationalFunction> {
    let d = c.len().checked_sub(1)?;
    let at = |k: isize| if k < 0 { BigRational::zero() } else { c[k as usize].clone() };
    for s in 0..=max_total {
        for q in 0..=s {
            let p = s - q;
            if p > d {
                continue;
            }
            let eqs: Vec<usize> = (p + 1..=d).collect();
            let qs: Vec<BigRational> = if q == 0 {
                if eqs.iter().any(|&n| !c[n].is_zero()) {
                    continue;
                }
                vec![BigRational::one()]
            } else {
                if eqs.is_empty() {
                    continue;
                }
                let b = RatMatrix::from_fn(q, eqs.len(), |j, col| at(eqs[col] as isize - j as isize - 1));
                let v: Vec<BigRational> = eqs.iter().map(|&n| -c[n].clone()).collect();
                let Some(x) = solve_left_q(&b, &v) else { continue };
                std::iter::once(BigRational::one()).chain(x).collect()
            };
            let num: Vec<BigRational> = (0..=p)
                .map(|n| (0..=q.min(n)).map(|j| &qs[j] * &c[n - j]).sum())
                .collect();
            let f = RationalFunction::new(to_integer_poly(&num), to_integer_poly(&qs)).ok()?;
            return Some(f);
        }
    }
    None
}

fn build(l: Vec<BigRational>) -> ZetaSeries {
    let coeffs = exp_lefschetz(&l);
    let fit = rational_fit(&coeffs, l.len() / 2);
    ZetaSeries { coeffs, lefschetz: l, fit }
}

/// Twisted zeta series of an orbit table; `xi = None` uses the plain Lefschetz numbers.
pub fn zeta_series(table: &OrbitTable, xi: Option<&[BigRational]>, depth: u32) -> Result<ZetaSeries> {
    let l = (1..=depth)
        .map(|m| match xi {
            Some(x) => twisted_lefschetz(table, m, x),
            None => lefschetz(table, m).map(BigRational::from_integer),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(build(l))
}

/// Zeta series of a subshift of finite type, `L_m = tr(Tᵐ)`; equal to `1/det(I − tT)`.
pub fn zeta_series_graph(g: &TransitionGraph, depth: usize) -> ZetaSeries {
    build(g.trace_counts(depth).into_iter().map(BigRational::from_integer).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::orbits::{LinearModel, OrbitRecord};
    use crate::exact::{rat, IntMatrix};
    use proptest::prelude::*;

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    fn same(f: &RationalFunction, num: &str, den: &str) -> bool {
        f.numerator() * &p(den) == f.denominator() * &p(num)
    }

    #[test]
    fn cat_map_zeta() {
        let table = LinearModel::cat_map().orbit_table(8).unwrap();
        let z = zeta_series(&table, None, 8).unwrap();
        let oracle = RationalFunction::new(p("1-3t+t^2"), p("1-2t+t^2")).unwrap().expand(8).unwrap();
        assert_eq!(z.coeffs, oracle);
        assert!(same(z.fit.as_ref().unwrap(), "1-3t+t^2", "1-2t+t^2"));
    }

    #[test]
    fn trivial_cases() {
        let empty = OrbitTable::new(None, vec![], None).unwrap();
        let z = zeta_series(&empty, None, 6).unwrap();
        assert_eq!(z.coeffs, vec![rat(1, 1)].into_iter().chain(vec![rat(0, 1); 6]).collect::<Vec<_>>());
        assert!(same(z.fit.as_ref().unwrap(), "1", "1"));
        let recs = (1..=8)
            .map(|m| OrbitRecord { orbit: m as usize, period: m, prongs: 2, preserved: false, class: None, h1: vec![], puncture: false })
            .collect();
        let t = OrbitTable::new(None, recs, None).unwrap();
        let z = zeta_series(&t, None, 8).unwrap();
        assert!(z.coeffs.iter().all(|c| *c == rat(1, 1)));
        assert!(same(z.fit.as_ref().unwrap(), "1", "1-t"));
    }

    #[test]
    fn no_fit_at_shallow_depth() {
        // L_m = 2 − L(m) with Lucas numbers, only four terms: degree 4 needs depth 8.
        let table = LinearModel::cat_map().orbit_table(4).unwrap();
        let z = zeta_series(&table, None, 4).unwrap();
        if let Some(f) = &z.fit {
            assert!(!same(f, "1-3t+t^2", "1-2t+t^2"));
        }
    }

    fn random_matrix() -> impl Strategy<Value = IntMatrix> {
        (1usize..4).prop_flat_map(|n| {
            prop::collection::vec(0i64..3, n * n).prop_map(move |d| IntMatrix::from_i64(n, n, &d))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn graph_zeta_is_inverse_determinant(t in random_matrix()) {
            let g = TransitionGraph::from_transition_matrix(&t).unwrap();
            let depth = 8;
            let z = zeta_series_graph(&g, depth);
            let det = t.det_one_minus_t().unwrap();
            let oracle = RationalFunction::new(LaurentPoly::one(), det).unwrap().expand(depth).unwrap();
            prop_assert_eq!(&z.coeffs, &oracle);
            // Logarithmic derivative: c'·1 = c·Σ L_m t^{m−1}, term by term.
            for n in 1..=depth {
                let lhs = &z.coeffs[n] * BigRational::from_integer(BigInt::from(n));
                let rhs: BigRational = (1..=n).map(|k| &z.lefschetz[k - 1] * &z.coeffs[n - k]).sum();
                prop_assert_eq!(lhs, rhs);
            }
            if t.rows() <= 4 {
                let f = z.fit.expect("denominator degree at most 3 fits at depth 8");
                prop_assert_eq!(f.expand(depth).unwrap(), oracle);
            }
        }
    }
}
