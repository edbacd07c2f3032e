//! Algebra maps with variance, conjugations, algebra involutions and conjugate algebras.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::howell::LinearSolver;
use crate::mat::Mat;
use crate::report::Report;

/// Whether a map preserves or reverses products.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variance {
    Covariant,
    Contravariant,
}

impl Variance {
    /// Variance of a composite: the sign product.
    pub fn compose(self, other: Variance) -> Variance {
        if self == other {
            Variance::Covariant
        } else {
            Variance::Contravariant
        }
    }

    pub fn is_covariant(self) -> bool {
        self == Variance::Covariant
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Variance::Covariant => "covariant",
            Variance::Contravariant => "contravariant",
        }
    }
}

/// A Z/n-linear map between algebras that is meant to be a unital
/// homomorphism (covariant) or anti-homomorphism (contravariant).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraMap {
    source: Algebra,
    target: Algebra,
    matrix: Mat,
    variance: Variance,
}

impl AlgebraMap {
    /// Checks shapes only; the homomorphism laws are checked by [`AlgebraMap::check`].
    pub fn new(source: Algebra, target: Algebra, matrix: Mat, variance: Variance) -> Result<Self> {
        if source.modulus() != target.modulus() {
            return Err(Error::ModulusMismatch {
                left: source.modulus().value(),
                right: target.modulus().value(),
            });
        }
        if matrix.rows() != target.rank() || matrix.cols() != source.rank() {
            return Err(Error::DimensionMismatch {
                context: "algebra map",
                expected: target.rank() * source.rank(),
                found: matrix.rows() * matrix.cols(),
            });
        }
        Ok(AlgebraMap {
            source,
            target,
            matrix,
            variance,
        })
    }

    /// The identity of an algebra, covariant.
    pub fn identity(a: &Algebra) -> Self {
        AlgebraMap {
            source: a.clone(),
            target: a.clone(),
            matrix: Mat::identity(a.modulus(), a.rank()),
            variance: Variance::Covariant,
        }
    }

    pub fn source(&self) -> &Algebra {
        &self.source
    }

    pub fn target(&self) -> &Algebra {
        &self.target
    }

    pub fn matrix(&self) -> &Mat {
        &self.matrix
    }

    pub fn variance(&self) -> Variance {
        self.variance
    }

    pub fn apply(&self, a: &[u64]) -> Vec<u64> {
        self.matrix.apply(a)
    }

    /// The composite `self o inner`.
    pub fn compose(&self, inner: &AlgebraMap) -> Result<AlgebraMap> {
        if inner.target != self.source {
            return Err(Error::AlgebraMismatch(format!(
                "cannot compose {} after a map into {}",
                self.source.name(),
                inner.target.name()
            )));
        }
        Ok(AlgebraMap {
            source: inner.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.mul(&inner.matrix)?,
            variance: self.variance.compose(inner.variance),
        })
    }

    /// Whether two maps agree on the carrier.
    pub fn same_matrix(&self, other: &AlgebraMap) -> bool {
        self.matrix == other.matrix
    }

    /// Checks unitality and multiplicativity in the declared variance.
    pub fn check(&self) -> Report {
        let mut rep = Report::new();
        let one = self.apply(self.source.unit());
        if one != self.target.unit() {
            rep.fail_with(
                "unit",
                "map does not send 1 to 1".into(),
                vec!["1".into()],
                one,
                self.target.unit().to_vec(),
            );
        }
        let r = self.source.rank();
        for i in 0..r {
            for j in 0..r {
                let (a, b) = (self.source.generator(i), self.source.generator(j));
                let lhs = self.apply(&self.source.mul(&a, &b));
                let (fa, fb) = (self.apply(&a), self.apply(&b));
                let rhs = match self.variance {
                    Variance::Covariant => self.target.mul(&fa, &fb),
                    Variance::Contravariant => self.target.mul(&fb, &fa),
                };
                if lhs != rhs {
                    rep.fail_with(
                        "multiplicative",
                        format!("f(e{i}*e{j}) differs from the {} product", self.variance.as_str()),
                        vec![format!("e{i}"), format!("e{j}")],
                        lhs,
                        rhs,
                    );
                }
            }
        }
        rep
    }

    /// Whether `self o iota_source = iota_target o phi` for the base embeddings,
    /// where `phi` is an endomap of the base ring. Algebras without base
    /// embedding count as having the scalars as base.
    pub fn respects_base(&self, phi: Option<&Mat>) -> bool {
        match (self.source.base(), self.target.base()) {
            (Some(bs), Some(bt)) => {
                if bs.ring != bt.ring {
                    return false;
                }
                let p = phi
                    .cloned()
                    .unwrap_or_else(|| Mat::identity(bs.ring.modulus(), bs.ring.rank()));
                self.matrix.mul_unchecked(&bs.map) == bt.map.mul_unchecked(&p)
            }
            _ => true,
        }
    }
}

/// An involutive unital (anti-)automorphism of a ring, used as a conjugation of the base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conjugation {
    algebra: Algebra,
    map: Mat,
    variance: Variance,
}

impl Conjugation {
    pub fn new(algebra: Algebra, map: Mat, variance: Variance) -> Result<Self> {
        AlgebraMap::new(algebra.clone(), algebra.clone(), map.clone(), variance)?;
        Ok(Conjugation {
            algebra,
            map,
            variance,
        })
    }

    /// The identity conjugation with the given variance.
    pub fn identity(algebra: &Algebra, variance: Variance) -> Self {
        Conjugation {
            algebra: algebra.clone(),
            map: Mat::identity(algebra.modulus(), algebra.rank()),
            variance,
        }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn map(&self) -> &Mat {
        &self.map
    }

    pub fn variance(&self) -> Variance {
        self.variance
    }

    pub fn apply(&self, a: &[u64]) -> Vec<u64> {
        self.map.apply(a)
    }

    pub fn as_map(&self) -> AlgebraMap {
        AlgebraMap {
            source: self.algebra.clone(),
            target: self.algebra.clone(),
            matrix: self.map.clone(),
            variance: self.variance,
        }
    }

    /// Checks involutivity, unitality, multiplicativity and that the base is fixed.
    pub fn check(&self) -> Report {
        let mut rep = self.as_map().check();
        check_involutive(&self.algebra, &self.map, &mut rep);
        if let Some(b) = self.algebra.base() {
            let lhs = self.map.mul_unchecked(&b.map);
            if lhs != b.map {
                rep.fail("base-fixed", "conjugation moves the image of the base ring".into());
            }
        }
        rep
    }
}

fn check_involutive(a: &Algebra, map: &Mat, rep: &mut Report) {
    for i in 0..a.rank() {
        let g = a.generator(i);
        let back = map.apply(&map.apply(&g));
        if back != g {
            rep.fail_with(
                "involutive",
                format!("applying the map twice moves e{i}"),
                vec![format!("e{i}")],
                back,
                g,
            );
        }
    }
}

/// An involution of an algebra that is conjugate-linear over a conjugation of its base ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraInvolution {
    algebra: Algebra,
    map: Mat,
    variance: Variance,
    over: Conjugation,
}

impl AlgebraInvolution {
    pub fn new(algebra: Algebra, map: Mat, variance: Variance, over: Conjugation) -> Result<Self> {
        AlgebraMap::new(algebra.clone(), algebra.clone(), map.clone(), variance)?;
        if algebra.modulus() != over.algebra.modulus() {
            return Err(Error::ModulusMismatch {
                left: algebra.modulus().value(),
                right: over.algebra.modulus().value(),
            });
        }
        Ok(AlgebraInvolution {
            algebra,
            map,
            variance,
            over,
        })
    }

    /// An involution over the identity conjugation of the base.
    pub fn plain(algebra: Algebra, map: Mat, variance: Variance) -> Result<Self> {
        let base = base_ring(&algebra);
        let over = Conjugation::identity(&base, variance);
        Self::new(algebra, map, variance, over)
    }

    /// The identity map of a commutative algebra as a contravariant involution.
    pub fn identity(algebra: &Algebra, variance: Variance) -> Self {
        let base = base_ring(algebra);
        AlgebraInvolution {
            algebra: algebra.clone(),
            map: Mat::identity(algebra.modulus(), algebra.rank()),
            variance,
            over: Conjugation::identity(&base, variance),
        }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn map(&self) -> &Mat {
        &self.map
    }

    pub fn variance(&self) -> Variance {
        self.variance
    }

    pub fn over(&self) -> &Conjugation {
        &self.over
    }

    pub fn apply(&self, a: &[u64]) -> Vec<u64> {
        self.map.apply(a)
    }

    pub fn as_map(&self) -> AlgebraMap {
        AlgebraMap {
            source: self.algebra.clone(),
            target: self.algebra.clone(),
            matrix: self.map.clone(),
            variance: self.variance,
        }
    }

    /// Checks the involution laws and conjugate-linearity over the base conjugation.
    pub fn check(&self) -> Report {
        let mut rep = self.as_map().check();
        check_involutive(&self.algebra, &self.map, &mut rep);
        if self.over.variance != self.variance {
            rep.fail(
                "variance",
                "involution and base conjugation have different variance".into(),
            );
        }
        let base = base_ring(&self.algebra);
        if self.over.algebra != base {
            rep.fail(
                "base-ring",
                format!("conjugation is not defined on the base ring of {}", self.algebra.name()),
            );
            return rep;
        }
        rep.merge(self.over.check());
        if let Some(b) = self.algebra.base() {
            let lhs = self.map.mul_unchecked(&b.map);
            let rhs = b.map.mul_unchecked(&self.over.map);
            if lhs != rhs {
                rep.fail(
                    "conjugate-linear",
                    "involution does not restrict to the base conjugation".into(),
                );
            }
        }
        rep
    }
}

/// The base ring of an algebra: its declared base, or the scalars.
pub fn base_ring(a: &Algebra) -> Algebra {
    match a.base() {
        Some(b) => b.ring.clone(),
        None => Algebra::scalars(a.modulus()),
    }
}

/// The conjugate algebra of `a` along a conjugation `g` of its base ring.
///
/// The carrier is unchanged; the product is reversed when `g` is
/// contravariant and the base embedding is precomposed with `g`. The
/// returned map is the canonical identification `a -> a^g`, of the variance of `g`.
pub fn gamma_conjugate(a: &Algebra, g: &Conjugation) -> Result<(Algebra, AlgebraMap)> {
    if g.algebra != base_ring(a) {
        return Err(Error::AlgebraMismatch(format!(
            "conjugation acts on {}, not on the base ring of {}",
            g.algebra.name(),
            a.name()
        )));
    }
    let mut conj = match g.variance {
        Variance::Covariant => a.clone(),
        Variance::Contravariant => a.opposite(),
    };
    if let Some(b) = a.base() {
        let map = b.map.mul_unchecked(&g.map);
        conj = conj.without_base().with_base(b.ring.clone(), map)?;
    }
    let conj = conj.renamed(&format!("{}^g", a.name()));
    let eta = AlgebraMap {
        source: a.clone(),
        target: conj.clone(),
        matrix: Mat::identity(a.modulus(), a.rank()),
        variance: g.variance,
    };
    Ok((conj, eta))
}

/// Solves `phi = x o eta` for a covariant map `x` out of the conjugate algebra.
///
/// Returns the factor and whether it is unique.
pub fn factor_through_conjugate(eta: &AlgebraMap, phi: &AlgebraMap) -> Result<(AlgebraMap, bool)> {
    if eta.source != phi.source {
        return Err(Error::AlgebraMismatch("maps have different sources".into()));
    }
    let m = eta.source.modulus();
    let (s, t, c) = (eta.source.rank(), phi.target.rank(), eta.target.rank());
    let mut cols = Vec::with_capacity(t * c);
    for j in 0..c {
        for i in 0..t {
            let mut x = Mat::zeros(m, t, c);
            x.set(i, j, 1);
            cols.push(x.mul_unchecked(&eta.matrix).vec_cols());
        }
    }
    let a = Mat::from_cols(m, t * s, &cols)?;
    let solver = LinearSolver::new(&a, None);
    let sol = solver
        .solve(&phi.matrix.vec_cols())
        .ok_or_else(|| Error::NoSolution("map does not factor through the conjugate".into()))?;
    let unique = solver.kernel().iter().all(|k| k.iter().all(|&v| v == 0));
    let x = Mat::unvec_cols(m, t, c, &sol);
    let variance = phi.variance.compose(eta.variance);
    Ok((
        AlgebraMap::new(eta.target.clone(), phi.target.clone(), x, variance)?,
        unique,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zn::Modulus;

    fn m(n: u64) -> Modulus {
        Modulus::new(n).unwrap()
    }

    #[test]
    fn sign_flip_is_a_conjugation() {
        let d = Algebra::polynomial_quotient("D", m(5), &[0, 0]).unwrap();
        let map = Mat::from_rows(m(5), 2, &[vec![1, 0], vec![0, 4]]).unwrap();
        let c = Conjugation::new(d.clone(), map, Variance::Covariant).unwrap();
        assert!(c.check().holds(), "{}", c.check());
        assert!(Conjugation::identity(&d, Variance::Covariant).check().holds());
    }

    #[test]
    fn doubling_is_not_involutive() {
        let d = Algebra::polynomial_quotient("D", m(5), &[0, 0]).unwrap();
        let map = Mat::from_rows(m(5), 2, &[vec![1, 0], vec![0, 2]]).unwrap();
        let c = Conjugation::new(d, map, Variance::Covariant).unwrap();
        assert!(c.check().has_law("involutive"));
    }

    #[test]
    fn identity_conjugate_is_the_algebra() {
        let d = Algebra::dual_numbers(m(5));
        let g = Conjugation::identity(&Algebra::scalars(m(5)), Variance::Covariant);
        let (c, eta) = gamma_conjugate(&d, &g).unwrap();
        assert_eq!(c, d);
        assert_eq!(eta.matrix(), &Mat::identity(m(5), 2));
    }

    #[test]
    fn contravariant_conjugate_is_opposite() {
        let t = Algebra::upper_triangular(m(3));
        let g = Conjugation::identity(&Algebra::scalars(m(3)), Variance::Contravariant);
        let (c, eta) = gamma_conjugate(&t, &g).unwrap();
        assert_eq!(c, t.opposite());
        assert!(eta.check().holds());
        let (cc, eta2) = gamma_conjugate(&c, &g).unwrap();
        assert_eq!(cc, t);
        assert_eq!(eta2.compose(&eta).unwrap().matrix(), &Mat::identity(m(3), 3));
    }
}
