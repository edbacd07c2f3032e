//! Howell normal form and linear systems over Z/nZ.

use alloc::vec;
use alloc::vec::Vec;

use crate::mat::Mat;
use crate::zn::{xgcd, Modulus};

/// The reduced Howell normal form of a row span in `(Z/n)^cols`.
///
/// Rows are in echelon form with pivots `d | n`, entries above a pivot lie in
/// `0..d`, and for every `k` the rows with pivot column `>= k` span every
/// vector of the span whose first `k` entries vanish. This form is unique for
/// a given span.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Howell {
    modulus: Modulus,
    cols: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<(usize, u64)>,
}

fn combine(m: Modulus, p: &mut [u64], r: &mut [u64], c: usize) {
    let a = p[c];
    let b = r[c];
    let (g, s, t) = xgcd(a as i64, b as i64);
    let s = m.reduce_i64(s);
    let t = m.reduce_i64(t);
    let bg = (b as i64 / g) as u64 % m.value();
    let ag = m.neg((a as i64 / g) as u64 % m.value());
    for k in c..p.len() {
        let (x, y) = (p[k], r[k]);
        p[k] = m.lin2(s, x, t, y);
        r[k] = m.lin2(bg, x, ag, y);
    }
}

impl Howell {
    /// Computes the Howell form of the span of `rows`.
    pub fn new<I>(modulus: Modulus, cols: usize, rows: I) -> Self
    where
        I: IntoIterator<Item = Vec<u64>>,
    {
        let m = modulus;
        let n = m.value();
        let mut pool: Vec<Vec<u64>> = rows
            .into_iter()
            .map(|r| {
                debug_assert_eq!(r.len(), cols);
                r.into_iter().map(|x| x % n).collect::<Vec<u64>>()
            })
            .filter(|r| r.iter().any(|&x| x != 0))
            .collect();
        let mut out: Vec<(usize, u64, Vec<u64>)> = Vec::new();
        for c in 0..cols {
            let mut piv: Option<Vec<u64>> = None;
            let mut i = 0;
            while i < pool.len() {
                if pool[i][c] == 0 {
                    i += 1;
                    continue;
                }
                let mut r = pool.swap_remove(i);
                match piv.as_mut() {
                    None => piv = Some(r),
                    Some(p) => {
                        combine(m, p, &mut r, c);
                        if r[c + 1..].iter().any(|&x| x != 0) {
                            pool.push(r);
                        }
                    }
                }
            }
            if let Some(mut p) = piv {
                let (g, u) = m.unit_normalizer(p[c]);
                if u != 1 {
                    for x in p[c..].iter_mut() {
                        *x = m.mul(*x, u);
                    }
                }
                if g != 1 {
                    let k = n / g;
                    let q: Vec<u64> = p.iter().map(|&x| m.mul(x, k)).collect();
                    if q.iter().any(|&x| x != 0) {
                        pool.push(q);
                    }
                }
                out.push((c, g, p));
            }
        }
        for k in 0..out.len() {
            let (c, d) = (out[k].0, out[k].1);
            let (head, tail) = out.split_at_mut(k);
            let pivot_row = &tail[0].2;
            for row in head.iter_mut() {
                let q = row.2[c] / d;
                if q != 0 {
                    let nq = m.neg(q % n);
                    for (x, &p) in row.2[c..cols].iter_mut().zip(&pivot_row[c..cols]) {
                        *x = (*x + nq * p) % n;
                    }
                }
            }
        }
        let pivots = out.iter().map(|(c, d, _)| (*c, *d)).collect();
        let rows = out.into_iter().map(|(_, _, r)| r).collect();
        Howell {
            modulus,
            cols,
            rows,
            pivots,
        }
    }

    /// Howell form of the row span of a matrix.
    pub fn of_rows(mat: &Mat) -> Self {
        Self::new(mat.modulus(), mat.cols(), mat.to_rows())
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// The nonzero rows of the form.
    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    /// Pivot column and pivot value of each row.
    pub fn pivots(&self) -> &[(usize, u64)] {
        &self.pivots
    }

    /// The rows as a matrix (possibly with zero rows).
    pub fn to_mat(&self) -> Mat {
        Mat::from_rows(self.modulus, self.cols, &self.rows).expect("rows have uniform length")
    }

    /// Reduces `v` in place to the canonical representative of `v + span`.
    pub fn reduce_in_place(&self, v: &mut [u64]) {
        let n = self.modulus.value();
        for (row, &(c, d)) in self.rows.iter().zip(&self.pivots) {
            let q = v[c] / d;
            if q != 0 {
                let nq = self.modulus.neg(q % n);
                for j in c..self.cols {
                    v[j] = (v[j] + nq * row[j]) % n;
                }
            }
        }
    }

    /// Canonical representative of `v + span`.
    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let mut w: Vec<u64> = v.iter().map(|&x| self.modulus.reduce(x)).collect();
        self.reduce_in_place(&mut w);
        w
    }

    /// Whether `v` lies in the span.
    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Orders `n / d` of the successive quotients; their product is the span's size.
    pub fn quotient_orders(&self) -> Vec<u64> {
        let n = self.modulus.value();
        self.pivots.iter().map(|&(_, d)| n / d).collect()
    }
}

/// Solves `A x = b` modulo the row span of a relation matrix in the codomain.
///
/// The solver is built once from `A` (`r x c`) and relations (`k x r`) and then
/// answers many right-hand sides; it also exposes the kernel
/// `{ x : A x in span(relations) }`.
#[derive(Debug, Clone)]
pub struct LinearSolver {
    modulus: Modulus,
    codomain: usize,
    unknowns: usize,
    howell: Howell,
}

impl LinearSolver {
    pub fn new(a: &Mat, relations: Option<&Mat>) -> Self {
        let m = a.modulus();
        let r = a.rows();
        let c = a.cols();
        let width = r + c;
        let mut rows = Vec::with_capacity(c + relations.map_or(0, |x| x.rows()));
        for j in 0..c {
            let mut row = vec![0u64; width];
            for (i, x) in row[..r].iter_mut().enumerate() {
                *x = a.get(i, j);
            }
            row[r + j] = 1;
            rows.push(row);
        }
        if let Some(rel) = relations {
            assert_eq!(rel.cols(), r, "relation width must equal the codomain size");
            for k in 0..rel.rows() {
                let mut row = vec![0u64; width];
                row[..r].copy_from_slice(rel.row(k));
                rows.push(row);
            }
        }
        LinearSolver {
            modulus: m,
            codomain: r,
            unknowns: c,
            howell: Howell::new(m, width, rows),
        }
    }

    /// A solution of `A x = b` modulo relations, if one exists.
    pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
        let m = self.modulus;
        let n = m.value();
        let r = self.codomain;
        let mut v = vec![0u64; r + self.unknowns];
        for (i, &x) in b.iter().enumerate() {
            v[i] = m.reduce(x);
        }
        for (row, &(c, d)) in self.howell.rows.iter().zip(&self.howell.pivots) {
            if c >= r {
                break;
            }
            if !v[c].is_multiple_of(d) {
                return None;
            }
            let q = v[c] / d;
            if q != 0 {
                let nq = m.neg(q % n);
                for j in c..v.len() {
                    v[j] = (v[j] + nq * row[j]) % n;
                }
            }
        }
        if v[..r].iter().any(|&x| x != 0) {
            return None;
        }
        Some(v[r..].iter().map(|&x| m.neg(x)).collect())
    }

    /// Generators of the kernel `{ x : A x in span(relations) }`.
    pub fn kernel(&self) -> Vec<Vec<u64>> {
        let r = self.codomain;
        self.howell
            .rows
            .iter()
            .zip(&self.howell.pivots)
            .filter(|(_, &(c, _))| c >= r)
            .map(|(row, _)| row[r..].to_vec())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn span_by_enumeration(m: Modulus, cols: usize, gens: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let n = m.value();
        let mut set: Vec<Vec<u64>> = vec![vec![0; cols]];
        for g in gens {
            let mut next = Vec::new();
            for v in &set {
                for k in 0..n {
                    let w: Vec<u64> = v.iter().zip(g).map(|(&a, &b)| (a + k * b) % n).collect();
                    next.push(w);
                }
            }
            next.sort();
            next.dedup();
            set = next;
        }
        set
    }

    #[test]
    fn howell_example_mod_12() {
        let m = Modulus::new(12).unwrap();
        let h = Howell::new(m, 2, vec![vec![4, 1], vec![0, 0]]);
        let span = span_by_enumeration(m, 2, &[vec![4, 1]]);
        let h_span = span_by_enumeration(m, 2, h.rows());
        assert_eq!(span, h_span);
        let total: u64 = h.quotient_orders().iter().product();
        assert_eq!(total as usize, span.len());
        assert!(h.contains(&[8, 2]));
        assert!(!h.contains(&[0, 1]));
    }

    #[test]
    fn solver_finds_solutions_and_kernel() {
        let m = Modulus::new(6).unwrap();
        let a = Mat::from_rows(m, 2, &[vec![2, 3]]).unwrap();
        let s = LinearSolver::new(&a, None);
        let x = s.solve(&[1]).unwrap();
        assert_eq!(a.apply(&x), vec![1]);
        for k in s.kernel() {
            assert_eq!(a.apply(&k), vec![0]);
        }
    }
}
