
use super::laurent::LaurentPoly;
use super::matrix::LaurentMatrix;

/// `(a, Q)` with `P·Q·P = a·P` and `a ≠ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnihilatorWitness {
    pub a: LaurentPoly,
    pub q: LaurentMatrix,
}

impl AnnihilatorWitness {
    pub fn verify(&self, p: &LaurentMatrix) -> bool {
        !self.a.is_zero() && p.dot(&self.q).dot(p) == p.scale(&self.a)
    }
}

/// Generalized inverse of `P` up to the scalar `a`.
///
/// Picks a maximal nonsingular square block `P[I, J]` from fraction-free
/// elimination and places its adjugate at the transposed position.
pub fn annihilator_witness(p: &LaurentMatrix) -> AnnihilatorWitness {
    let (rows, cols) = p.shape();
    let piv = p.pivots();
    let mut q = LaurentMatrix::zeros(cols, rows);
    if piv.cols.is_empty() {
        return AnnihilatorWitness { a: LaurentPoly::one(), q };
    }
    let block = p.submatrix(&piv.rows, &piv.cols);
    let a = block.det().expect("square block");
    let adj = block.adjugate().expect("square block");
    for (bi, &j) in piv.cols.iter().enumerate() {
        for (bj, &i) in piv.rows.iter().enumerate() {
            q[(j, i)] = adj[(bi, bj)].clone();
        }
    }
    let w = AnnihilatorWitness { a, q };
    debug_assert!(w.verify(p), "annihilator identity failed");
    w
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] != i + n - k) else { break };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
    out
}

/// Order of the module presented by `P` (rows are generators): the gcd of
/// the `rows × rows` minors, canonical up to `±t^k`. Zero when there are more
/// generators than relations or the minors all vanish.
pub fn module_order(p: &LaurentMatrix) -> LaurentPoly {
    let (rows, cols) = p.shape();
    if rows == 0 {
        return LaurentPoly::one();
    }
    let all_rows: Vec<usize> = (0..rows).collect();
    let mut g: LaurentPoly = LaurentPoly::zero();
    for c in combinations(cols, rows) {
        let d = p.submatrix(&all_rows, &c).det().expect("square minor");
        if d.is_zero() {
            continue;
        }
        g = g.gcd(&d);
        if g.is_one() {
            break;
        }
    }
    g.canonical()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Matrix;

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    fn mat(rows: usize, cols: usize, entries: &[&str]) -> LaurentMatrix {
        Matrix::new(rows, cols, entries.iter().map(|s| p(s)).collect()).unwrap()
    }

    #[test]
    fn orders() {
        assert_eq!(module_order(&mat(1, 1, &["t-2"])), p("t-2").canonical());
        let m = mat(2, 3, &["t-1", "0", "1", "0", "t-1", "1"]);
        assert_eq!(module_order(&m), p("t-1").canonical());
        let sq = mat(2, 2, &["t", "1", "2", "t^-1"]);
        assert_eq!(module_order(&sq), sq.det().unwrap().canonical());
        assert!(module_order(&mat(2, 1, &["1", "1"])).is_zero());
        assert_eq!(combinations(4, 2).len(), 6);
    }

    #[test]
    fn witnesses() {
        let w = annihilator_witness(&mat(1, 1, &["2"]));
        assert_eq!(w.a, p("2"));
        assert_eq!(w.q, mat(1, 1, &["1"]));
        let z = LaurentMatrix::zeros(2, 3);
        let w = annihilator_witness(&z);
        assert!(w.a.is_one() && w.q.is_zero() && w.q.shape() == (3, 2));
        let m = mat(2, 2, &["t", "t", "t", "t"]);
        assert!(annihilator_witness(&m).verify(&m));
        let m = mat(2, 3, &["t-1", "0", "1", "2t-2", "0", "2"]);
        assert!(annihilator_witness(&m).verify(&m));
    }
}
