//! Unital associative algebras over Z/nZ given by structure constants.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::mat::{vecops, Mat};
use crate::report::Report;
use crate::zn::Modulus;

/// A unital homomorphism from a base ring into the center of an algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseEmbedding {
    /// The base ring, itself an algebra over Z/n.
    pub ring: Algebra,
    /// Matrix `algebra.rank x ring.rank` of the embedding.
    pub map: Mat,
}

/// A unital associative Z/n-algebra on a free carrier `(Z/n)^rank`.
///
/// The product of generators `e_i * e_j` is stored as a coordinate vector.
/// Equality ignores the display name.
#[derive(Debug, Clone)]
pub struct Algebra {
    name: String,
    modulus: Modulus,
    rank: usize,
    table: Vec<Vec<u64>>,
    unit: Vec<u64>,
    base: Option<Box<BaseEmbedding>>,
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus
            && self.rank == other.rank
            && self.table == other.table
            && self.unit == other.unit
            && self.base == other.base
    }
}

impl Eq for Algebra {}

impl Algebra {
    /// Builds an algebra from its multiplication table, indexed by `i * rank + j`.
    ///
    /// Only shapes are validated here; the algebra axioms are checked by [`Algebra::check`].
    pub fn new(
        name: &str,
        modulus: Modulus,
        rank: usize,
        table: Vec<Vec<u64>>,
        unit: Vec<u64>,
    ) -> Result<Self> {
        if rank == 0 {
            return Err(Error::DimensionMismatch {
                context: "algebra rank",
                expected: 1,
                found: 0,
            });
        }
        if table.len() != rank * rank {
            return Err(Error::DimensionMismatch {
                context: "multiplication table",
                expected: rank * rank,
                found: table.len(),
            });
        }
        for v in table.iter().chain(core::iter::once(&unit)) {
            if v.len() != rank {
                return Err(Error::DimensionMismatch {
                    context: "algebra element",
                    expected: rank,
                    found: v.len(),
                });
            }
        }
        let red = |v: Vec<u64>| v.into_iter().map(|x| modulus.reduce(x)).collect::<Vec<_>>();
        Ok(Algebra {
            name: name.to_string(),
            modulus,
            rank,
            table: table.into_iter().map(red).collect(),
            unit: red(unit),
            base: None,
        })
    }

    /// Builds an algebra from a product rule on generator indices.
    pub fn from_fn(
        name: &str,
        modulus: Modulus,
        rank: usize,
        unit: Vec<u64>,
        f: impl Fn(usize, usize) -> Vec<u64>,
    ) -> Result<Self> {
        let mut table = Vec::with_capacity(rank * rank);
        for i in 0..rank {
            for j in 0..rank {
                table.push(f(i, j));
            }
        }
        Self::new(name, modulus, rank, table, unit)
    }

    /// The scalar algebra Z/n itself.
    pub fn scalars(modulus: Modulus) -> Self {
        Algebra {
            name: format!("Z/{}", modulus.value()),
            modulus,
            rank: 1,
            table: vec![vec![1]],
            unit: vec![1],
            base: None,
        }
    }

    /// `Z/n[x] / (x^d - c_{d-1} x^{d-1} - ... - c_0)` with basis `1, x, ..., x^{d-1}`.
    ///
    /// `relation` holds `c_0, ..., c_{d-1}` so that `x^d = sum c_k x^k`.
    pub fn polynomial_quotient(name: &str, modulus: Modulus, relation: &[u64]) -> Result<Self> {
        let d = relation.len();
        if d == 0 {
            return Err(Error::DimensionMismatch {
                context: "polynomial degree",
                expected: 1,
                found: 0,
            });
        }
        let m = modulus;
        let reduce_power = |k: usize| -> Vec<u64> {
            let mut v = vec![0u64; d];
            let mut cur = vec![0u64; d];
            cur[0] = 1;
            for _ in 0..k {
                let top = cur[d - 1];
                let mut next = vec![0u64; d];
                for i in (1..d).rev() {
                    next[i] = cur[i - 1];
                }
                for i in 0..d {
                    next[i] = m.add(next[i], m.mul(top, m.reduce(relation[i])));
                }
                cur = next;
            }
            v.copy_from_slice(&cur);
            v
        };
        let powers: Vec<Vec<u64>> = (0..2 * d).map(reduce_power).collect();
        let mut unit = vec![0u64; d];
        unit[0] = 1;
        Self::from_fn(name, modulus, d, unit, |i, j| powers[i + j].clone())
    }

    /// `Z/n[x]/(x^2)`, the dual numbers.
    pub fn dual_numbers(modulus: Modulus) -> Self {
        Self::polynomial_quotient("D", modulus, &[0, 0]).expect("degree two")
    }

    /// Upper-triangular 2x2 matrices with basis `E11, E12, E22`.
    pub fn upper_triangular(modulus: Modulus) -> Self {
        Self::from_fn("T2", modulus, 3, vec![1, 0, 1], |i, j| match (i, j) {
            (0, 0) => vec![1, 0, 0],
            (0, 1) => vec![0, 1, 0],
            (1, 2) => vec![0, 1, 0],
            (2, 2) => vec![0, 0, 1],
            _ => vec![0, 0, 0],
        })
        .expect("fixed table")
    }

    /// Full 2x2 matrices with basis `E11, E12, E21, E22`.
    pub fn matrices2(modulus: Modulus) -> Self {
        Self::from_fn("M2", modulus, 4, vec![1, 0, 0, 1], |i, j| {
            let (r1, c1) = (i / 2, i % 2);
            let (r2, c2) = (j / 2, j % 2);
            let mut v = vec![0u64; 4];
            if c1 == r2 {
                v[r1 * 2 + c2] = 1;
            }
            v
        })
        .expect("fixed table")
    }

    /// The product ring `Z/n x Z/n` with idempotent basis.
    pub fn split_pair(modulus: Modulus) -> Self {
        Self::from_fn("P2", modulus, 2, vec![1, 1], |i, j| {
            let mut v = vec![0u64; 2];
            if i == j {
                v[i] = 1;
            }
            v
        })
        .expect("fixed table")
    }

    /// `Z/n[x_1, ..., x_k] / (x_1, ..., x_k)^2`, basis `1, x_1, ..., x_k`.
    pub fn square_zero(modulus: Modulus, k: usize) -> Self {
        let mut unit = vec![0u64; k + 1];
        unit[0] = 1;
        Self::from_fn("S", modulus, k + 1, unit, |i, j| {
            let mut v = vec![0u64; k + 1];
            if i == 0 {
                v[j] = 1;
            } else if j == 0 {
                v[i] = 1;
            }
            v
        })
        .expect("fixed table")
    }

    /// Attaches a base embedding `ring -> center`.
    pub fn with_base(mut self, ring: Algebra, map: Mat) -> Result<Self> {
        if map.rows() != self.rank || map.cols() != ring.rank {
            return Err(Error::DimensionMismatch {
                context: "base embedding",
                expected: self.rank * ring.rank,
                found: map.rows() * map.cols(),
            });
        }
        if ring.modulus != self.modulus {
            return Err(Error::ModulusMismatch {
                left: self.modulus.value(),
                right: ring.modulus.value(),
            });
        }
        self.base = Some(Box::new(BaseEmbedding { ring, map }));
        Ok(self)
    }

    /// The same algebra with its base embedding dropped.
    pub fn without_base(mut self) -> Self {
        self.base = None;
        self
    }

    /// Same algebra with a different display name.
    pub fn renamed(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn unit(&self) -> &[u64] {
        &self.unit
    }

    pub fn base(&self) -> Option<&BaseEmbedding> {
        self.base.as_deref()
    }

    /// The `i`-th basis element.
    pub fn generator(&self, i: usize) -> Vec<u64> {
        vecops::unit(self.rank, i)
    }

    /// The product `e_i * e_j`.
    pub fn product(&self, i: usize, j: usize) -> &[u64] {
        &self.table[i * self.rank + j]
    }

    /// The multiplication table.
    pub fn table(&self) -> &[Vec<u64>] {
        &self.table
    }

    /// Product of two elements.
    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let m = self.modulus;
        let mut out = vec![0u64; self.rank];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                let c = m.mul(x, y);
                for (o, &p) in out.iter_mut().zip(self.product(i, j)) {
                    *o = (*o + c * p) % m.value();
                }
            }
        }
        out
    }

    /// Matrix of `x -> a * x`.
    pub fn left_matrix(&self, a: &[u64]) -> Mat {
        let cols: Vec<Vec<u64>> = (0..self.rank).map(|j| self.mul(a, &self.generator(j))).collect();
        Mat::from_cols(self.modulus, self.rank, &cols).expect("square")
    }

    /// Matrix of `x -> x * b`.
    pub fn right_matrix(&self, b: &[u64]) -> Mat {
        let cols: Vec<Vec<u64>> = (0..self.rank).map(|j| self.mul(&self.generator(j), b)).collect();
        Mat::from_cols(self.modulus, self.rank, &cols).expect("square")
    }

    /// Left multiplications by the generators.
    pub fn left_ops(&self) -> Vec<Mat> {
        (0..self.rank).map(|i| self.left_matrix(&self.generator(i))).collect()
    }

    /// Right multiplications by the generators.
    pub fn right_ops(&self) -> Vec<Mat> {
        (0..self.rank).map(|i| self.right_matrix(&self.generator(i))).collect()
    }

    /// The opposite algebra: same carrier, reversed product.
    pub fn opposite(&self) -> Algebra {
        let mut table = Vec::with_capacity(self.rank * self.rank);
        for i in 0..self.rank {
            for j in 0..self.rank {
                table.push(self.product(j, i).to_vec());
            }
        }
        Algebra {
            name: format!("{}^op", self.name),
            modulus: self.modulus,
            rank: self.rank,
            table,
            unit: self.unit.clone(),
            base: self.base.clone(),
        }
    }

    /// Tensor product over Z/n, generator `(i, j)` at index `i * other.rank + j`.
    pub fn tensor(&self, other: &Algebra) -> Algebra {
        let m = self.modulus;
        let (r1, r2) = (self.rank, other.rank);
        let mut table = Vec::with_capacity(r1 * r2 * r1 * r2);
        for i1 in 0..r1 {
            for j1 in 0..r2 {
                for i2 in 0..r1 {
                    for j2 in 0..r2 {
                        table.push(vecops::kron(m, self.product(i1, i2), other.product(j1, j2)));
                    }
                }
            }
        }
        Algebra {
            name: format!("{}(x){}", self.name, other.name),
            modulus: m,
            rank: r1 * r2,
            table,
            unit: vecops::kron(m, &self.unit, &other.unit),
            base: None,
        }
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.rank).all(|i| (0..self.rank).all(|j| self.product(i, j) == self.product(j, i)))
    }

    /// Whether `a` is central.
    pub fn is_central(&self, a: &[u64]) -> bool {
        (0..self.rank).all(|j| {
            let g = self.generator(j);
            self.mul(a, &g) == self.mul(&g, a)
        })
    }

    /// A two-sided inverse of `a`, if it exists.
    pub fn inverse(&self, a: &[u64]) -> Option<Vec<u64>> {
        let l = self.left_matrix(a);
        let s = crate::howell::LinearSolver::new(&l, None);
        let x = s.solve(&self.unit)?;
        if self.mul(&x, a) == self.unit {
            Some(x)
        } else {
            None
        }
    }

    /// Checks associativity, the unit laws and the base embedding.
    pub fn check(&self) -> Report {
        let mut rep = Report::new();
        let r = self.rank;
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    let (a, b, c) = (self.generator(i), self.generator(j), self.generator(k));
                    let lhs = self.mul(&self.mul(&a, &b), &c);
                    let rhs = self.mul(&a, &self.mul(&b, &c));
                    if lhs != rhs {
                        rep.fail_with(
                            "associativity",
                            format!("(e{i}*e{j})*e{k} != e{i}*(e{j}*e{k})"),
                            vec![format!("e{i}"), format!("e{j}"), format!("e{k}")],
                            lhs,
                            rhs,
                        );
                    }
                }
            }
        }
        for i in 0..r {
            let g = self.generator(i);
            let l = self.mul(&self.unit, &g);
            if l != g {
                rep.fail_with("unit", format!("1*e{i} != e{i}"), vec![format!("e{i}")], l, g.clone());
            }
            let rr = self.mul(&g, &self.unit);
            if rr != g {
                rep.fail_with("unit", format!("e{i}*1 != e{i}"), vec![format!("e{i}")], rr, g);
            }
        }
        if let Some(b) = self.base() {
            let img = |v: &[u64]| b.map.apply(v);
            let one = img(b.ring.unit());
            if one != self.unit {
                rep.fail_with(
                    "base-unit",
                    "base embedding does not preserve the unit".into(),
                    vec!["1".into()],
                    one,
                    self.unit.clone(),
                );
            }
            for i in 0..b.ring.rank {
                let ri = b.ring.generator(i);
                for j in 0..b.ring.rank {
                    let rj = b.ring.generator(j);
                    let lhs = img(&b.ring.mul(&ri, &rj));
                    let rhs = self.mul(&img(&ri), &img(&rj));
                    if lhs != rhs {
                        rep.fail_with(
                            "base-multiplicative",
                            format!("embedding not multiplicative on r{i}, r{j}"),
                            vec![format!("r{i}"), format!("r{j}")],
                            lhs,
                            rhs,
                        );
                    }
                }
                for k in 0..r {
                    let g = self.generator(k);
                    let lhs = self.mul(&img(&ri), &g);
                    let rhs = self.mul(&g, &img(&ri));
                    if lhs != rhs {
                        rep.fail_with(
                            "centrality",
                            format!("image of r{i} does not commute with e{k}"),
                            vec![format!("r{i}"), format!("e{k}")],
                            lhs,
                            rhs,
                        );
                    }
                }
            }
        }
        rep
    }

    /// All elements, if there are at most `limit`.
    pub fn elements(&self, limit: u128) -> Option<Vec<Vec<u64>>> {
        crate::module::FpModule::free(self.modulus, self.rank).elements(limit)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_algebras_are_valid() {
        for n in [2u64, 3, 4, 6] {
            let m = Modulus::new(n).unwrap();
            for a in [
                Algebra::scalars(m),
                Algebra::dual_numbers(m),
                Algebra::upper_triangular(m),
                Algebra::matrices2(m),
                Algebra::split_pair(m),
                Algebra::square_zero(m, 2),
                Algebra::polynomial_quotient("C", m, &[1, 2, 0]).unwrap(),
            ] {
                assert!(a.check().holds(), "{}: {}", a.name(), a.check());
                assert!(a.opposite().check().holds());
                assert_eq!(a.opposite().opposite(), a);
            }
        }
    }

    #[test]
    fn triangular_is_not_commutative() {
        let m = Modulus::new(3).unwrap();
        let t = Algebra::upper_triangular(m);
        assert!(!t.is_commutative());
        assert_ne!(t.opposite(), t);
    }

    #[test]
    fn broken_unit_is_reported() {
        let m = Modulus::new(5).unwrap();
        let a = Algebra::from_fn("B", m, 2, vec![1, 0], |i, j| {
            if i == 1 && j == 1 {
                vec![0, 1]
            } else if i == 0 && j == 0 {
                vec![1, 0]
            } else {
                vec![0, 0]
            }
        })
        .unwrap();
        let rep = a.check();
        assert!(rep.has_law("unit"));
    }
}
