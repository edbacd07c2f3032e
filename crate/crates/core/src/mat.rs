//! Dense matrices over Z/nZ.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::zn::Modulus;

/// A dense row-major matrix with entries in Z/nZ.
///
/// Matrices act on column vectors: a `rows x cols` matrix maps
/// `(Z/n)^cols` to `(Z/n)^rows`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    modulus: Modulus,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat[{}x{} mod {}](", self.rows, self.cols, self.modulus.value())?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{:?}", self.row(r))?;
        }
        write!(f, ")")
    }
}

impl Mat {
    pub fn zeros(modulus: Modulus, rows: usize, cols: usize) -> Self {
        Mat {
            modulus,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(modulus: Modulus, n: usize) -> Self {
        let mut m = Self::zeros(modulus, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from rows, reducing every entry.
    pub fn from_rows(modulus: Modulus, cols: usize, rows: &[Vec<u64>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    context: "matrix row",
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend(r.iter().map(|&x| modulus.reduce(x)));
        }
        Ok(Mat {
            modulus,
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_cols(modulus: Modulus, rows: usize, cols: &[Vec<u64>]) -> Result<Self> {
        let mut m = Self::zeros(modulus, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::DimensionMismatch {
                    context: "matrix column",
                    expected: rows,
                    found: c.len(),
                });
            }
            for (i, &x) in c.iter().enumerate() {
                m.data[i * m.cols + j] = modulus.reduce(x);
            }
        }
        Ok(m)
    }

    /// Builds a matrix from a row-major slice of already reduced entries.
    pub fn from_data(modulus: Modulus, rows: usize, cols: usize, data: Vec<u64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                context: "matrix data",
                expected: rows * cols,
                found: data.len(),
            });
        }
        let data = data.into_iter().map(|x| modulus.reduce(x)).collect();
        Ok(Mat {
            modulus,
            rows,
            cols,
            data,
        })
    }

    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = self.modulus.reduce(v);
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<u64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn to_cols(&self) -> Vec<Vec<u64>> {
        (0..self.cols).map(|c| self.col(c)).collect()
    }

    pub fn data(&self) -> &[u64] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.modulus, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        t
    }

    fn check_same(&self, other: &Mat, context: &'static str) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch {
                left: self.modulus.value(),
                right: other.modulus.value(),
            });
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                context,
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        Ok(())
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Mat) -> Result<Mat> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch {
                left: self.modulus.value(),
                right: other.modulus.value(),
            });
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                context: "matrix product",
                expected: self.cols,
                found: other.rows,
            });
        }
        Ok(self.mul_unchecked(other))
    }

    /// Matrix product assuming compatible shapes and moduli.
    pub fn mul_unchecked(&self, other: &Mat) -> Mat {
        let n = self.modulus.value();
        let mut acc = vec![0u128; other.cols];
        let mut out = Mat::zeros(self.modulus, self.rows, other.cols);
        for r in 0..self.rows {
            acc.iter_mut().for_each(|x| *x = 0);
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k];
                if a == 0 {
                    continue;
                }
                let orow = other.row(k);
                for (x, &b) in acc.iter_mut().zip(orow) {
                    *x += (a * b) as u128;
                }
            }
            for (c, x) in acc.iter().enumerate() {
                out.data[r * other.cols + c] = (*x % n as u128) as u64;
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols, "vector length must equal column count");
        let n = self.modulus.value() as u128;
        (0..self.rows)
            .map(|r| {
                let s: u128 = self
                    .row(r)
                    .iter()
                    .zip(v)
                    .map(|(&a, &b)| (a * b) as u128)
                    .sum();
                (s % n) as u64
            })
            .collect()
    }

    pub fn add(&self, other: &Mat) -> Result<Mat> {
        self.check_same(other, "matrix sum")?;
        let m = self.modulus;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| m.add(a, b))
            .collect();
        Ok(Mat {
            modulus: m,
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn sub(&self, other: &Mat) -> Result<Mat> {
        self.check_same(other, "matrix difference")?;
        let m = self.modulus;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| m.sub(a, b))
            .collect();
        Ok(Mat {
            modulus: m,
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn scale(&self, s: u64) -> Mat {
        let m = self.modulus;
        let s = m.reduce(s);
        Mat {
            modulus: m,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| m.mul(a, s)).collect(),
        }
    }

    /// Adds `s * other` into `self` in place.
    pub fn add_scaled(&mut self, other: &Mat, s: u64) {
        debug_assert_eq!(self.data.len(), other.data.len());
        let m = self.modulus;
        let s = m.reduce(s);
        if s == 0 {
            return;
        }
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a = (*a + s * b) % m.value();
        }
    }

    /// Kronecker product `self (x) other`.
    pub fn kron(&self, other: &Mat) -> Mat {
        let m = self.modulus;
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Mat::zeros(m, rows, cols);
        for r1 in 0..self.rows {
            for c1 in 0..self.cols {
                let a = self.get(r1, c1);
                if a == 0 {
                    continue;
                }
                for r2 in 0..other.rows {
                    for c2 in 0..other.cols {
                        let b = other.get(r2, c2);
                        out.data[(r1 * other.rows + r2) * cols + c1 * other.cols + c2] =
                            m.mul(a, b);
                    }
                }
            }
        }
        out
    }

    /// Horizontal concatenation.
    pub fn hstack(&self, other: &Mat) -> Result<Mat> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch {
                context: "horizontal concatenation",
                expected: self.rows,
                found: other.rows,
            });
        }
        let mut out = Mat::zeros(self.modulus, self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            let w = self.cols + other.cols;
            out.data[r * w..r * w + self.cols].copy_from_slice(self.row(r));
            out.data[r * w + self.cols..(r + 1) * w].copy_from_slice(other.row(r));
        }
        Ok(out)
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &Mat) -> Result<Mat> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                context: "vertical concatenation",
                expected: self.cols,
                found: other.cols,
            });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Mat {
            modulus: self.modulus,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Submatrix made of the selected columns, in the given order.
    pub fn select_cols(&self, cols: &[usize]) -> Mat {
        let mut out = Mat::zeros(self.modulus, self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                out.data[r * cols.len() + j] = self.get(r, c);
            }
        }
        out
    }

    /// Submatrix made of the selected rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Mat {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            data.extend_from_slice(self.row(r));
        }
        Mat {
            modulus: self.modulus,
            rows: rows.len(),
            cols: self.cols,
            data,
        }
    }

    /// Column-major flattening: column `j` occupies entries `j*rows..(j+1)*rows`.
    pub fn vec_cols(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.rows * self.cols);
        for c in 0..self.cols {
            for r in 0..self.rows {
                out.push(self.get(r, c));
            }
        }
        out
    }

    /// Inverse of `vec_cols`.
    pub fn unvec_cols(modulus: Modulus, rows: usize, cols: usize, v: &[u64]) -> Mat {
        let mut out = Mat::zeros(modulus, rows, cols);
        for c in 0..cols {
            for r in 0..rows {
                out.data[r * cols + c] = modulus.reduce(v[c * rows + r]);
            }
        }
        out
    }

    /// `I_pre (x) self (x) I_post`.
    pub fn embed_factor(&self, pre: usize, post: usize) -> Mat {
        let m = self.modulus;
        let n_rows = pre * self.rows * post;
        let n_cols = pre * self.cols * post;
        let mut out = Mat::zeros(m, n_rows, n_cols);
        for p in 0..pre {
            for r in 0..self.rows {
                for c in 0..self.cols {
                    let a = self.get(r, c);
                    if a == 0 {
                        continue;
                    }
                    for q in 0..post {
                        let rr = (p * self.rows + r) * post + q;
                        let cc = (p * self.cols + c) * post + q;
                        out.data[rr * n_cols + cc] = a;
                    }
                }
            }
        }
        out
    }
}

/// Helpers on plain vectors of residues.
pub mod vecops {
    use super::*;

    pub fn add(m: Modulus, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(&x, &y)| m.add(x, y)).collect()
    }

    pub fn sub(m: Modulus, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(&x, &y)| m.sub(x, y)).collect()
    }

    pub fn scale(m: Modulus, a: &[u64], s: u64) -> Vec<u64> {
        a.iter().map(|&x| m.mul(x, m.reduce(s))).collect()
    }

    pub fn neg(m: Modulus, a: &[u64]) -> Vec<u64> {
        a.iter().map(|&x| m.neg(x)).collect()
    }

    pub fn unit(n: usize, i: usize) -> Vec<u64> {
        let mut v = vec![0; n];
        v[i] = 1;
        v
    }

    pub fn is_zero(a: &[u64]) -> bool {
        a.iter().all(|&x| x == 0)
    }

    /// Kronecker product of vectors, first factor major.
    pub fn kron(m: Modulus, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut out = Vec::with_capacity(a.len() * b.len());
        for &x in a {
            for &y in b {
                out.push(m.mul(x, y));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m7() -> Modulus {
        Modulus::new(7).unwrap()
    }

    #[test]
    fn product_and_transpose() {
        let a = Mat::from_rows(m7(), 2, &[vec![1, 2], vec![3, 4]]).unwrap();
        let b = Mat::from_rows(m7(), 2, &[vec![5, 6], vec![0, 1]]).unwrap();
        let c = a.mul(&b).unwrap();
        assert_eq!(c.to_rows(), vec![vec![5, 1], vec![1, 1]]);
        assert_eq!(c.transpose(), b.transpose().mul(&a.transpose()).unwrap());
    }

    #[test]
    fn kron_matches_embed() {
        let a = Mat::from_rows(m7(), 2, &[vec![1, 2], vec![3, 4]]).unwrap();
        let e = a.embed_factor(2, 3);
        let i2 = Mat::identity(m7(), 2);
        let i3 = Mat::identity(m7(), 3);
        assert_eq!(e, i2.kron(&a).kron(&i3));
    }

    #[test]
    fn vec_roundtrip() {
        let a = Mat::from_rows(m7(), 3, &[vec![1, 2, 3], vec![4, 5, 6]]).unwrap();
        let v = a.vec_cols();
        assert_eq!(v, vec![1, 4, 2, 5, 3, 6]);
        assert_eq!(Mat::unvec_cols(m7(), 2, 3, &v), a);
    }
}
