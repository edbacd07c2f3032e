//! Spaces of linear maps cut out by linear constraints.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::howell::LinearSolver;
use crate::mat::Mat;
use crate::module::{FpModule, ModuleMap};

/// A linear condition on maps: `X` satisfies it when every column of the
/// returned matrix is zero in the target module.
pub type Constraint<'a> = &'a dyn Fn(&Mat) -> Mat;

/// A submodule of `Hom(source, target)` given by a presentation and a basis.
///
/// Generator `i` of `module` is the map `basis[i]` (a `target x source`
/// matrix). Elements of the space are coordinate vectors in `module`.
/// A solution of `X o first = phi` inside a map space.
#[derive(Debug, Clone)]
pub struct Factorization {
    /// Coordinates of `X` in the space.
    pub coords: Vec<u64>,
    /// The matrix of `X`.
    pub map: Mat,
    /// Whether every solution defines the same map.
    pub unique: bool,
}

#[derive(Debug, Clone)]
pub struct MapSpace {
    source: FpModule,
    target: FpModule,
    module: FpModule,
    basis: Vec<Mat>,
    solver: LinearSolver,
}

struct Draft {
    module: FpModule,
    basis: Vec<Mat>,
}

fn stack_vecs(target: &FpModule, cols: usize, basis: &[Mat]) -> Mat {
    let m = target.modulus();
    let len = target.ngens() * cols;
    let vecs: Vec<Vec<u64>> = basis.iter().map(|b| b.vec_cols()).collect();
    Mat::from_cols(m, len, &vecs).expect("basis maps share one shape")
}

impl Draft {
    fn restrict(self, target: &FpModule, f: Constraint<'_>) -> Draft {
        if self.basis.is_empty() {
            return self;
        }
        let values: Vec<Mat> = self.basis.iter().map(f).collect();
        let cols = values[0].cols();
        if cols == 0 {
            return self;
        }
        let k = stack_vecs(target, cols, &values);
        let rel = target.power(cols).relation_mat();
        let gens = LinearSolver::new(&k, Some(&rel)).kernel();
        self.with_generators(&gens)
    }

    fn with_generators(self, gens: &[Vec<u64>]) -> Draft {
        let m = self.module.modulus();
        if gens.is_empty() {
            return Draft {
                module: FpModule::free(m, 0),
                basis: Vec::new(),
            };
        }
        let (sub, inc) = self
            .module
            .submodule(gens)
            .expect("generators have presentation length");
        let mat = inc.matrix();
        let mut basis = Vec::with_capacity(sub.ngens());
        for j in 0..sub.ngens() {
            let mut b = Mat::zeros(m, self.basis[0].rows(), self.basis[0].cols());
            for i in 0..self.basis.len() {
                let c = mat.get(i, j);
                if c != 0 {
                    b.add_scaled(&self.basis[i], c);
                }
            }
            basis.push(b);
        }
        Draft { module: sub, basis }
    }
}

impl MapSpace {
    /// All well-defined Z/n-linear maps `source -> target`.
    pub fn hom(source: &FpModule, target: &FpModule) -> Result<MapSpace> {
        Self::constrained(source, target, &[])
    }

    /// Maps `source -> target` satisfying every constraint.
    pub fn constrained(
        source: &FpModule,
        target: &FpModule,
        constraints: &[Constraint<'_>],
    ) -> Result<MapSpace> {
        if source.modulus() != target.modulus() {
            return Err(Error::ModulusMismatch {
                left: source.modulus().value(),
                right: target.modulus().value(),
            });
        }
        let m = source.modulus();
        let (s, t) = (source.ngens(), target.ngens());
        let mut basis = Vec::with_capacity(s * t);
        for j in 0..s {
            for i in 0..t {
                let mut b = Mat::zeros(m, t, s);
                b.set(i, j, 1);
                basis.push(b);
            }
        }
        let mut draft = Draft {
            module: target.power(s),
            basis,
        };
        if !source.is_free() {
            let rt = source.relation_mat().transpose();
            draft = draft.restrict(target, &|x: &Mat| x.mul_unchecked(&rt));
        }
        for c in constraints {
            draft = draft.restrict(target, *c);
        }
        Ok(Self::finish(source, target, draft))
    }

    /// The subspace of `self` satisfying further constraints.
    pub fn restrict(&self, constraints: &[Constraint<'_>]) -> MapSpace {
        let mut draft = Draft {
            module: self.module.clone(),
            basis: self.basis.clone(),
        };
        for c in constraints {
            draft = draft.restrict(&self.target, *c);
        }
        Self::finish(&self.source, &self.target, draft)
    }

    /// The subspace spanned by the given maps, which must be well defined.
    pub fn spanned_by(source: &FpModule, target: &FpModule, maps: &[Mat]) -> Result<MapSpace> {
        let hom = Self::hom(source, target)?;
        let mut gens = Vec::with_capacity(maps.len());
        for x in maps {
            gens.push(hom.coords(x).ok_or_else(|| {
                Error::NotWellDefined("spanning map does not respect relations".into())
            })?);
        }
        let draft = Draft {
            module: hom.module.clone(),
            basis: hom.basis.clone(),
        }
        .with_generators(&gens);
        Ok(Self::finish(source, target, draft))
    }

    fn finish(source: &FpModule, target: &FpModule, draft: Draft) -> MapSpace {
        let m = source.modulus();
        let s = source.ngens();
        let a = if draft.basis.is_empty() {
            Mat::zeros(m, target.ngens() * s, 0)
        } else {
            stack_vecs(target, s, &draft.basis)
        };
        let rel = target.power(s).relation_mat();
        let solver = LinearSolver::new(&a, Some(&rel));
        MapSpace {
            source: source.clone(),
            target: target.clone(),
            module: draft.module,
            basis: draft.basis,
            solver,
        }
    }

    pub fn source(&self) -> &FpModule {
        &self.source
    }

    pub fn target(&self) -> &FpModule {
        &self.target
    }

    /// The space as an abstract module.
    pub fn module(&self) -> &FpModule {
        &self.module
    }

    /// Basis maps, one per generator of `module`.
    pub fn basis(&self) -> &[Mat] {
        &self.basis
    }

    /// The map with the given coordinates.
    pub fn element(&self, coords: &[u64]) -> Mat {
        let m = self.source.modulus();
        let mut x = Mat::zeros(m, self.target.ngens(), self.source.ngens());
        for (b, &c) in self.basis.iter().zip(coords) {
            if c != 0 {
                x.add_scaled(b, c);
            }
        }
        x
    }

    /// Coordinates of a map, or `None` if it does not lie in the space.
    pub fn coords(&self, x: &Mat) -> Option<Vec<u64>> {
        if x.rows() != self.target.ngens() || x.cols() != self.source.ngens() {
            return None;
        }
        let c = self.solver.solve(&x.vec_cols())?;
        Some(self.module.reduce(&c))
    }

    pub fn contains(&self, x: &Mat) -> bool {
        self.coords(x).is_some()
    }

    /// Whether two maps agree as maps `source -> target`.
    pub fn maps_equal(&self, x: &Mat, y: &Mat) -> bool {
        (0..self.source.ngens()).all(|j| self.target.eq_elems(&x.col(j), &y.col(j)))
    }

    /// Matrix on `module` of a linear operation that preserves the space.
    pub fn induced(&self, f: impl Fn(&Mat) -> Mat) -> Result<Mat> {
        self.induced_into(self, f)
    }

    /// Matrix `other.module x self.module` of a linear operation into another space.
    pub fn induced_into(&self, other: &MapSpace, f: impl Fn(&Mat) -> Mat) -> Result<Mat> {
        let m = self.source.modulus();
        let mut cols = Vec::with_capacity(self.basis.len());
        for (i, b) in self.basis.iter().enumerate() {
            let y = f(b);
            let c = other.coords(&y).ok_or_else(|| {
                Error::NoSolution(alloc::format!("image of basis map {i} leaves the target space"))
            })?;
            cols.push(c);
        }
        Mat::from_cols(m, other.module.ngens(), &cols)
    }

    /// The module map `module -> other.module` induced by `f`.
    pub fn module_map_into(&self, other: &MapSpace, f: impl Fn(&Mat) -> Mat) -> Result<ModuleMap> {
        let mat = self.induced_into(other, f)?;
        ModuleMap::new(self.module.clone(), other.module.clone(), mat)
    }

    /// Solves `X o first = phi` for `X` in this space.
    ///
    /// `first` is a matrix `source -> mid` for some module `mid` equal to
    /// `self.source`, and `phi` a matrix `source' -> target`. Returns the
    /// solution and whether it is the only one as a map.
    pub fn factor(&self, first: &Mat, phi: &Mat) -> Option<Factorization> {
        let m = self.source.modulus();
        let s = first.cols();
        let t = self.target.ngens();
        if first.rows() != self.source.ngens() || phi.rows() != t || phi.cols() != s {
            return None;
        }
        let vecs: Vec<Vec<u64>> = self
            .basis
            .iter()
            .map(|b| b.mul_unchecked(first).vec_cols())
            .collect();
        let a = if vecs.is_empty() {
            Mat::zeros(m, t * s, 0)
        } else {
            Mat::from_cols(m, t * s, &vecs).expect("uniform shapes")
        };
        let rel = self.target.power(s).relation_mat();
        let solver = LinearSolver::new(&a, Some(&rel));
        let c = solver.solve(&phi.vec_cols())?;
        let unique = solver
            .kernel()
            .iter()
            .all(|k| self.module.is_zero(k));
        Some(Factorization {
            coords: self.module.reduce(&c),
            map: self.element(&c),
            unique,
        })
    }

    /// Solves `last o X = phi` for `X` in this space, where `last` maps
    /// `self.target` into `outer` and `phi` maps `self.source` into `outer`.
    pub fn factor_after(&self, last: &Mat, outer: &FpModule, phi: &Mat) -> Option<Factorization> {
        let m = self.source.modulus();
        let s = self.source.ngens();
        let t = outer.ngens();
        if last.rows() != t || last.cols() != self.target.ngens() || phi.rows() != t || phi.cols() != s {
            return None;
        }
        let vecs: Vec<Vec<u64>> = self
            .basis
            .iter()
            .map(|b| last.mul_unchecked(b).vec_cols())
            .collect();
        let a = if vecs.is_empty() {
            Mat::zeros(m, t * s, 0)
        } else {
            Mat::from_cols(m, t * s, &vecs).expect("uniform shapes")
        };
        let rel = outer.power(s).relation_mat();
        let solver = LinearSolver::new(&a, Some(&rel));
        let c = solver.solve(&phi.vec_cols())?;
        let unique = solver.kernel().iter().all(|k| self.module.is_zero(k));
        Some(Factorization {
            coords: self.module.reduce(&c),
            map: self.element(&c),
            unique,
        })
    }

    /// Whether `self` and `other` contain the same maps.
    pub fn same_maps(&self, other: &MapSpace) -> bool {
        self.basis.iter().all(|b| other.contains(b)) && other.basis.iter().all(|b| self.contains(b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zn::Modulus;
    use alloc::vec;

    #[test]
    fn hom_z4_to_z2_has_two_elements() {
        let m = Modulus::new(4).unwrap();
        let z4 = FpModule::free(m, 1);
        let z2 = FpModule::new(m, 1, &[vec![2]]).unwrap();
        let h = MapSpace::hom(&z4, &z2).unwrap();
        assert_eq!(h.module().order(), Some(2));
        let h2 = MapSpace::hom(&z2, &z4).unwrap();
        assert_eq!(h2.module().order(), Some(2));
        let x = Mat::from_rows(m, 1, &[vec![2]]).unwrap();
        assert!(h2.contains(&x));
        let y = Mat::from_rows(m, 1, &[vec![1]]).unwrap();
        assert!(!h2.contains(&y));
    }

    #[test]
    fn commuting_constraint() {
        let m = Modulus::new(3).unwrap();
        let f = FpModule::free(m, 2);
        let a = Mat::from_rows(m, 2, &[vec![0, 1], vec![0, 0]]).unwrap();
        let c = |x: &Mat| x.mul_unchecked(&a).sub(&a.mul_unchecked(x)).unwrap();
        let sp = MapSpace::constrained(&f, &f, &[&c]).unwrap();
        assert_eq!(sp.module().order(), Some(9));
    }
}
