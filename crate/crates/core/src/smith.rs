//! Smith normal form over Z/nZ with column transforms.

use alloc::vec::Vec;

use crate::mat::Mat;
use crate::zn::{xgcd, Modulus};

/// Bezout coefficients that leave the first entry alone when it already divides the second.
fn bezout(a: u64, b: u64) -> (i64, i64, i64) {
    if a != 0 && b.is_multiple_of(a) {
        (a as i64, 1, 0)
    } else {
        xgcd(a as i64, b as i64)
    }
}

/// Diagonalization `U R V = D` of a relation matrix, keeping `V` and `V^-1`.
///
/// The diagonal entries, normalized to divisors of `n`, form a divisibility
/// chain; positions past the rank carry the value `0`, meaning a free cyclic
/// factor.
#[derive(Debug, Clone)]
pub struct SmithForm {
    /// Normalized diagonal, one entry per column; `0` stands for a missing pivot.
    pub diagonal: Vec<u64>,
    /// Column transform `V` (`s x s`).
    pub v: Mat,
    /// Its inverse.
    pub v_inv: Mat,
}

struct Work {
    m: Modulus,
    r: Vec<Vec<u64>>,
    v: Vec<Vec<u64>>,
    vi: Vec<Vec<u64>>,
    rows: usize,
    cols: usize,
}

impl Work {
    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for row in self.r.iter_mut() {
            row.swap(a, b);
        }
        for row in self.v.iter_mut() {
            row.swap(a, b);
        }
        self.vi.swap(a, b);
    }

    fn scale_col(&mut self, c: usize, u: u64) {
        let m = self.m;
        let ui = m.inv(u).expect("scaling factor is a unit");
        for row in self.r.iter_mut() {
            row[c] = m.mul(row[c], u);
        }
        for row in self.v.iter_mut() {
            row[c] = m.mul(row[c], u);
        }
        for x in self.vi[c].iter_mut() {
            *x = m.mul(*x, ui);
        }
    }

    fn combine_rows(&mut self, t: usize, i: usize, c: usize) {
        let m = self.m;
        let (a, b) = (self.r[t][c], self.r[i][c]);
        let (g, s, tt) = bezout(a, b);
        let s = m.reduce_i64(s);
        let tt = m.reduce_i64(tt);
        let bg = m.reduce((b as i64 / g) as u64);
        let ag = m.neg(m.reduce((a as i64 / g) as u64));
        for k in 0..self.cols {
            let (x, y) = (self.r[t][k], self.r[i][k]);
            self.r[t][k] = m.lin2(s, x, tt, y);
            self.r[i][k] = m.lin2(bg, x, ag, y);
        }
    }

    fn combine_cols(&mut self, t: usize, j: usize, rrow: usize) {
        let m = self.m;
        let (a, b) = (self.r[rrow][t], self.r[rrow][j]);
        let (g, s, tt) = bezout(a, b);
        let s = m.reduce_i64(s);
        let tt = m.reduce_i64(tt);
        let bg = m.reduce((b as i64 / g) as u64);
        let ag_pos = m.reduce((a as i64 / g) as u64);
        let ag = m.neg(ag_pos);
        for row in self.r.iter_mut().chain(self.v.iter_mut()) {
            let (x, y) = (row[t], row[j]);
            row[t] = m.lin2(s, x, tt, y);
            row[j] = m.lin2(bg, x, ag, y);
        }
        for k in 0..self.cols {
            let (x, y) = (self.vi[t][k], self.vi[j][k]);
            self.vi[t][k] = m.lin2(ag_pos, x, bg, y);
            self.vi[j][k] = m.lin2(tt, x, m.neg(s), y);
        }
    }
}

impl SmithForm {
    /// Computes the form of a `k x s` relation matrix (rows are relations).
    pub fn new(relations: &Mat) -> Self {
        let m = relations.modulus();
        let rows = relations.rows();
        let cols = relations.cols();
        let id = Mat::identity(m, cols).to_rows();
        let mut w = Work {
            m,
            r: relations.to_rows(),
            v: id.clone(),
            vi: id,
            rows,
            cols,
        };
        let mut diagonal = Vec::with_capacity(cols);
        let mut t = 0;
        while t < rows.min(cols) {
            let mut best: Option<(u64, usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = w.r[i][j];
                    if x != 0 {
                        let g = m.gcd_with(x);
                        if best.is_none_or(|(bg, _, _)| g < bg) {
                            best = Some((g, i, j));
                        }
                    }
                }
            }
            let Some((_, bi, bj)) = best else { break };
            w.r.swap(t, bi);
            w.swap_cols(t, bj);
            loop {
                for i in t + 1..w.rows {
                    if w.r[i][t] != 0 {
                        w.combine_rows(t, i, t);
                    }
                }
                for j in t + 1..cols {
                    if w.r[t][j] != 0 {
                        w.combine_cols(t, j, t);
                    }
                }
                let clean = (t + 1..w.rows).all(|i| w.r[i][t] == 0);
                if !clean {
                    continue;
                }
                let (g, u) = m.unit_normalizer(w.r[t][t]);
                if u != 1 {
                    w.scale_col(t, u);
                }
                let bad = (t + 1..w.rows).find(|&i| (t + 1..cols).any(|j| !w.r[i][j].is_multiple_of(g)));
                match bad {
                    Some(i) => {
                        for k in 0..cols {
                            w.r[t][k] = m.add(w.r[t][k], w.r[i][k]);
                        }
                    }
                    None => break,
                }
            }
            diagonal.push(w.r[t][t]);
            t += 1;
        }
        while diagonal.len() < cols {
            diagonal.push(0);
        }
        SmithForm {
            diagonal,
            v: Mat::from_rows(m, cols, &w.v).expect("square"),
            v_inv: Mat::from_rows(m, cols, &w.vi).expect("square"),
        }
    }

    /// Orders of the cyclic summands, one per generator (`1` for trivial summands).
    pub fn cyclic_orders(&self, modulus: Modulus) -> Vec<u64> {
        self.diagonal
            .iter()
            .map(|&d| if d == 0 { modulus.value() } else { modulus.gcd_with(d) })
            .collect()
    }
}
