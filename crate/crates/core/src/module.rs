//! Finitely presented Z/nZ-modules and maps between them.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::howell::{Howell, LinearSolver};
use crate::mat::{vecops, Mat};
use crate::smith::SmithForm;
use crate::zn::Modulus;

/// The module `(Z/n)^k / span(relations)`, kept with its relations in Howell form.
///
/// Elements are coordinate vectors of length `k`; two vectors are equal in the
/// module when their difference lies in the relation span.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpModule {
    modulus: Modulus,
    ngens: usize,
    relations: Howell,
}

/// A module together with the maps relating it to a presentation it was simplified from.
#[derive(Debug, Clone)]
pub struct Presentation {
    /// The simplified module.
    pub module: FpModule,
    /// Sends old coordinates to new coordinates (`new x old`).
    pub projection: Mat,
    /// Sends new coordinates to old coordinates (`old x new`).
    pub section: Mat,
}

impl FpModule {
    /// The free module `(Z/n)^k`.
    pub fn free(modulus: Modulus, k: usize) -> Self {
        FpModule {
            modulus,
            ngens: k,
            relations: Howell::new(modulus, k, Vec::new()),
        }
    }

    /// `(Z/n)^k` modulo the span of the given relation vectors.
    pub fn new(modulus: Modulus, k: usize, relations: &[Vec<u64>]) -> Result<Self> {
        for r in relations {
            if r.len() != k {
                return Err(Error::DimensionMismatch {
                    context: "relation vector",
                    expected: k,
                    found: r.len(),
                });
            }
        }
        Ok(FpModule {
            modulus,
            ngens: k,
            relations: Howell::new(modulus, k, relations.iter().cloned()),
        })
    }

    /// Module presented by the rows of a relation matrix.
    pub fn from_relation_mat(k: usize, relations: &Mat) -> Result<Self> {
        if relations.cols() != k {
            return Err(Error::DimensionMismatch {
                context: "relation matrix",
                expected: k,
                found: relations.cols(),
            });
        }
        Ok(FpModule {
            modulus: relations.modulus(),
            ngens: k,
            relations: Howell::of_rows(relations),
        })
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    /// Number of generators of the presentation.
    pub fn ngens(&self) -> usize {
        self.ngens
    }

    /// Relations in Howell form.
    pub fn howell(&self) -> &Howell {
        &self.relations
    }

    /// Relations as a matrix whose rows are relation vectors.
    pub fn relation_mat(&self) -> Mat {
        if self.relations.rows().is_empty() {
            return Mat::zeros(self.modulus, 0, self.ngens);
        }
        self.relations.to_mat()
    }

    pub fn is_free(&self) -> bool {
        self.relations.rows().is_empty()
    }

    /// Canonical representative of an element.
    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        self.relations.reduce(v)
    }

    pub fn is_zero(&self, v: &[u64]) -> bool {
        self.relations.contains(v)
    }

    pub fn eq_elems(&self, a: &[u64], b: &[u64]) -> bool {
        self.is_zero(&vecops::sub(self.modulus, a, b))
    }

    /// Whether the whole module is zero.
    pub fn is_trivial(&self) -> bool {
        self.relations.pivots().len() == self.ngens
            && self.relations.pivots().iter().all(|&(_, d)| d == 1)
    }

    /// The `i`-th generator.
    pub fn generator(&self, i: usize) -> Vec<u64> {
        vecops::unit(self.ngens, i)
    }

    /// Number of elements, or `None` if it exceeds `u128`.
    pub fn order(&self) -> Option<u128> {
        let n = self.modulus.value() as u128;
        let mut total: u128 = 1;
        let mut pivot = vec![None; self.ngens];
        for &(c, d) in self.relations.pivots() {
            pivot[c] = Some(d as u128);
        }
        for p in pivot {
            total = total.checked_mul(p.unwrap_or(n))?;
        }
        Some(total)
    }

    /// Whether the module has at most `limit` elements.
    pub fn order_at_most(&self, limit: u128) -> bool {
        self.order().is_some_and(|o| o <= limit)
    }

    /// All elements as canonical representatives, if there are at most `limit`.
    pub fn elements(&self, limit: u128) -> Option<Vec<Vec<u64>>> {
        if !self.order_at_most(limit) {
            return None;
        }
        let n = self.modulus.value();
        let mut bound = vec![n; self.ngens];
        for &(c, d) in self.relations.pivots() {
            bound[c] = d;
        }
        let mut out = Vec::new();
        let mut cur = vec![0u64; self.ngens];
        loop {
            out.push(cur.clone());
            let mut i = 0;
            loop {
                if i == self.ngens {
                    return Some(out);
                }
                cur[i] += 1;
                if cur[i] < bound[i] {
                    break;
                }
                cur[i] = 0;
                i += 1;
            }
        }
    }

    /// Invariant factors: orders of cyclic summands forming a divisibility chain.
    pub fn invariant_factors(&self) -> Vec<u64> {
        self.smith_decomposition().orders
    }

    /// Decomposition into a direct sum of cyclic modules with explicit isomorphisms.
    pub fn smith_decomposition(&self) -> CyclicDecomposition {
        let m = self.modulus;
        let rel = self.relation_mat();
        let sf = SmithForm::new(&rel);
        let orders_all = sf.cyclic_orders(m);
        let keep: Vec<usize> = (0..self.ngens).filter(|&i| orders_all[i] != 1).collect();
        let orders: Vec<u64> = keep.iter().map(|&i| orders_all[i]).collect();
        let vt = sf.v.transpose();
        let to_canonical = vt.select_rows(&keep);
        let vit = sf.v_inv.transpose();
        let from_canonical = vit.select_cols(&keep);
        let n = m.value();
        let rels: Vec<Vec<u64>> = orders
            .iter()
            .enumerate()
            .filter(|(_, &g)| g != n)
            .map(|(i, &g)| {
                let mut r = vec![0; orders.len()];
                r[i] = g;
                r
            })
            .collect();
        let canonical = FpModule::new(m, orders.len(), &rels).expect("shapes match");
        CyclicDecomposition {
            orders,
            canonical,
            to_canonical,
            from_canonical,
        }
    }

    /// Removes generators that relations express through the others.
    pub fn simplify(&self) -> Presentation {
        let m = self.modulus;
        let h = &self.relations;
        let mut unit_row_of = vec![None; self.ngens];
        for (idx, &(c, d)) in h.pivots().iter().enumerate() {
            if d == 1 {
                unit_row_of[c] = Some(idx);
            }
        }
        let kept: Vec<usize> = (0..self.ngens).filter(|&c| unit_row_of[c].is_none()).collect();
        let mut new_index = vec![usize::MAX; self.ngens];
        for (k, &c) in kept.iter().enumerate() {
            new_index[c] = k;
        }
        let mut projection = Mat::zeros(m, kept.len(), self.ngens);
        for c in 0..self.ngens {
            match unit_row_of[c] {
                None => projection.set(new_index[c], c, 1),
                Some(idx) => {
                    let row = &h.rows()[idx];
                    for (k, &kc) in kept.iter().enumerate() {
                        let x = row[kc];
                        if x != 0 {
                            projection.set(k, c, m.neg(x));
                        }
                    }
                }
            }
        }
        let mut section = Mat::zeros(m, self.ngens, kept.len());
        for (k, &c) in kept.iter().enumerate() {
            section.set(c, k, 1);
        }
        let rels: Vec<Vec<u64>> = h
            .rows()
            .iter()
            .zip(h.pivots())
            .filter(|(_, &(_, d))| d != 1)
            .map(|(row, _)| kept.iter().map(|&c| row[c]).collect())
            .collect();
        let module = FpModule::new(m, kept.len(), &rels).expect("shapes match");
        Presentation {
            module,
            projection,
            section,
        }
    }

    /// Quotient by the submodule spanned by `vectors`, simplified.
    pub fn quotient(&self, vectors: &[Vec<u64>]) -> Result<Presentation> {
        let mut rels: Vec<Vec<u64>> = self.relations.rows().to_vec();
        for v in vectors {
            if v.len() != self.ngens {
                return Err(Error::DimensionMismatch {
                    context: "quotient vector",
                    expected: self.ngens,
                    found: v.len(),
                });
            }
            rels.push(v.clone());
        }
        Ok(FpModule::new(self.modulus, self.ngens, &rels)?.simplify())
    }

    /// The submodule generated by `vectors`, simplified, with its inclusion.
    pub fn submodule(&self, vectors: &[Vec<u64>]) -> Result<(FpModule, ModuleMap)> {
        let m = self.modulus;
        let g = Mat::from_cols(m, self.ngens, vectors)?;
        let solver = LinearSolver::new(&g, Some(&self.relation_mat()));
        let rels = solver.kernel();
        let pres = FpModule::new(m, vectors.len(), &rels)?.simplify();
        let inc = g.mul_unchecked(&pres.section);
        let map = ModuleMap::new(pres.module, self.clone(), inc)?;
        Ok((map.source.clone(), map))
    }

    /// The direct sum of `k` copies, coordinates grouped copy by copy.
    pub fn power(&self, k: usize) -> FpModule {
        let t = self.ngens;
        let mut rels = Vec::new();
        for j in 0..k {
            for r in self.relations.rows() {
                let mut v = vec![0; t * k];
                v[j * t..(j + 1) * t].copy_from_slice(r);
                rels.push(v);
            }
        }
        FpModule::new(self.modulus, t * k, &rels).expect("shapes match")
    }

    /// Direct sum with another module.
    pub fn direct_sum(&self, other: &FpModule) -> FpModule {
        let a = self.ngens;
        let b = other.ngens;
        let mut rels = Vec::new();
        for r in self.relations.rows() {
            let mut v = r.clone();
            v.resize(a + b, 0);
            rels.push(v);
        }
        for r in other.relations.rows() {
            let mut v = vec![0; a];
            v.extend_from_slice(r);
            rels.push(v);
        }
        FpModule::new(self.modulus, a + b, &rels).expect("shapes match")
    }

    /// Tensor product over Z/n, generator `(i, j)` at index `i * other.ngens + j`.
    pub fn tensor(&self, other: &FpModule) -> FpModule {
        let m = self.modulus;
        let (a, b) = (self.ngens, other.ngens);
        let mut rels = Vec::new();
        for r in self.relations.rows() {
            for j in 0..b {
                rels.push(vecops::kron(m, r, &vecops::unit(b, j)));
            }
        }
        for r in other.relations.rows() {
            for i in 0..a {
                rels.push(vecops::kron(m, &vecops::unit(a, i), r));
            }
        }
        FpModule::new(m, a * b, &rels).expect("shapes match")
    }

    fn check_modulus(&self, other: &FpModule) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch {
                left: self.modulus.value(),
                right: other.modulus.value(),
            });
        }
        Ok(())
    }
}

/// A module written as `(+) Z/g_i` with isomorphisms to and from it.
#[derive(Debug, Clone)]
pub struct CyclicDecomposition {
    /// Orders `g_1 | g_2 | ...`, all greater than one.
    pub orders: Vec<u64>,
    /// The module `(+) Z/g_i`.
    pub canonical: FpModule,
    /// Matrix of the isomorphism onto the canonical module.
    pub to_canonical: Mat,
    /// Matrix of the inverse isomorphism.
    pub from_canonical: Mat,
}

/// A Z/n-linear map between presented modules, given on generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleMap {
    source: FpModule,
    target: FpModule,
    matrix: Mat,
}

impl ModuleMap {
    /// Builds the map and checks that relations go to zero.
    pub fn new(source: FpModule, target: FpModule, matrix: Mat) -> Result<Self> {
        source.check_modulus(&target)?;
        if matrix.rows() != target.ngens || matrix.cols() != source.ngens {
            return Err(Error::DimensionMismatch {
                context: "module map matrix",
                expected: target.ngens * source.ngens,
                found: matrix.rows() * matrix.cols(),
            });
        }
        let map = ModuleMap {
            source,
            target,
            matrix,
        };
        if let Some(i) = map.first_bad_relation() {
            return Err(Error::NotWellDefined(format!(
                "relation {i} of the source is not sent to zero"
            )));
        }
        Ok(map)
    }

    /// Builds the map without checking well-definedness.
    pub fn new_unchecked(source: FpModule, target: FpModule, matrix: Mat) -> Self {
        ModuleMap {
            source,
            target,
            matrix,
        }
    }

    fn first_bad_relation(&self) -> Option<usize> {
        self.source
            .relations
            .rows()
            .iter()
            .position(|r| !self.target.is_zero(&self.matrix.apply(r)))
    }

    pub fn is_well_defined(&self) -> bool {
        self.first_bad_relation().is_none()
    }

    pub fn identity(module: &FpModule) -> Self {
        ModuleMap {
            source: module.clone(),
            target: module.clone(),
            matrix: Mat::identity(module.modulus, module.ngens),
        }
    }

    pub fn zero(source: &FpModule, target: &FpModule) -> Self {
        ModuleMap {
            source: source.clone(),
            target: target.clone(),
            matrix: Mat::zeros(source.modulus, target.ngens, source.ngens),
        }
    }

    pub fn source(&self) -> &FpModule {
        &self.source
    }

    pub fn target(&self) -> &FpModule {
        &self.target
    }

    pub fn matrix(&self) -> &Mat {
        &self.matrix
    }

    /// Image of an element, reduced.
    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        self.target.reduce(&self.matrix.apply(v))
    }

    /// The composite `self o inner`.
    pub fn compose(&self, inner: &ModuleMap) -> Result<ModuleMap> {
        if inner.target != self.source {
            return Err(Error::DimensionMismatch {
                context: "composition of module maps",
                expected: self.source.ngens,
                found: inner.target.ngens,
            });
        }
        Ok(ModuleMap {
            source: inner.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.mul(&inner.matrix)?,
        })
    }

    /// Equality as maps: the images of all generators agree.
    pub fn equals(&self, other: &ModuleMap) -> bool {
        self.source == other.source
            && self.target == other.target
            && (0..self.source.ngens)
                .all(|j| self.target.eq_elems(&self.matrix.col(j), &other.matrix.col(j)))
    }

    pub fn is_zero(&self) -> bool {
        (0..self.source.ngens).all(|j| self.target.is_zero(&self.matrix.col(j)))
    }

    fn solver(&self) -> LinearSolver {
        LinearSolver::new(&self.matrix, Some(&self.target.relation_mat()))
    }

    /// The kernel as a module with its inclusion into the source.
    pub fn kernel(&self) -> (FpModule, ModuleMap) {
        let gens = self.solver().kernel();
        self.source
            .submodule(&gens)
            .expect("kernel generators have source length")
    }

    /// The image as a submodule of the target, with its inclusion.
    pub fn image(&self) -> (FpModule, ModuleMap) {
        let gens = self.matrix.to_cols();
        self.target
            .submodule(&gens)
            .expect("columns have target length")
    }

    /// The cokernel presentation.
    pub fn cokernel(&self) -> Presentation {
        self.target
            .quotient(&self.matrix.to_cols())
            .expect("columns have target length")
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().0.is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        let s = self.solver();
        (0..self.target.ngens).all(|i| s.solve(&vecops::unit(self.target.ngens, i)).is_some())
    }

    /// A preimage of `b`, if any.
    pub fn preimage(&self, b: &[u64]) -> Option<Vec<u64>> {
        self.solver().solve(b)
    }

    /// The inverse map of a bijection.
    pub fn inverse(&self) -> Result<ModuleMap> {
        if !self.is_injective() {
            return Err(Error::NotInvertible("map has a nonzero kernel".into()));
        }
        let s = self.solver();
        let mut cols = Vec::with_capacity(self.target.ngens);
        for i in 0..self.target.ngens {
            let x = s
                .solve(&vecops::unit(self.target.ngens, i))
                .ok_or_else(|| Error::NotInvertible("map is not surjective".into()))?;
            cols.push(self.source.reduce(&x));
        }
        let mat = Mat::from_cols(self.source.modulus, self.source.ngens, &cols)?;
        ModuleMap::new(self.target.clone(), self.source.clone(), mat)
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }
}

/// Outcome of an isomorphism test.
#[derive(Debug, Clone)]
pub enum IsoResult {
    /// The modules are isomorphic through the witness.
    Isomorphic(ModuleMap),
    /// The invariant factors differ.
    NotIsomorphic { left: Vec<u64>, right: Vec<u64> },
}

/// Decides whether two modules are isomorphic and produces a witness.
pub fn iso_test(a: &FpModule, b: &FpModule) -> Result<IsoResult> {
    a.check_modulus(b)?;
    let da = a.smith_decomposition();
    let db = b.smith_decomposition();
    if da.orders != db.orders {
        return Ok(IsoResult::NotIsomorphic {
            left: da.orders,
            right: db.orders,
        });
    }
    let mat = db.from_canonical.mul(&da.to_canonical)?;
    Ok(IsoResult::Isomorphic(ModuleMap::new(a.clone(), b.clone(), mat)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_of_multiplication_by_two_mod_four() {
        let m = Modulus::new(4).unwrap();
        let z4 = FpModule::free(m, 1);
        let f = ModuleMap::new(z4.clone(), z4.clone(), Mat::from_rows(m, 1, &[vec![2]]).unwrap())
            .unwrap();
        let (k, inc) = f.kernel();
        assert_eq!(k.order(), Some(2));
        assert!(inc.is_injective());
        assert_eq!(f.image().0.order(), Some(2));
    }

    #[test]
    fn z6_is_z2_plus_z3() {
        let m = Modulus::new(6).unwrap();
        let z6 = FpModule::free(m, 1);
        let z2z3 = FpModule::new(m, 2, &[vec![2, 0], vec![0, 3]]).unwrap();
        match iso_test(&z6, &z2z3).unwrap() {
            IsoResult::Isomorphic(w) => assert!(w.is_isomorphism()),
            IsoResult::NotIsomorphic { .. } => panic!("expected an isomorphism"),
        }
    }

    #[test]
    fn simplify_keeps_the_module() {
        let m = Modulus::new(9).unwrap();
        let md = FpModule::new(m, 3, &[vec![1, 2, 0], vec![0, 3, 3]]).unwrap();
        let p = md.simplify();
        assert_eq!(p.module.order(), md.order());
        let back = ModuleMap::new(p.module.clone(), md.clone(), p.section.clone()).unwrap();
        assert!(back.is_isomorphism());
    }
}
