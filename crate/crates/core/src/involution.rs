//! Involutions on multimodules.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::conjugation::{AlgebraInvolution, Variance};
use crate::error::{Error, Result};
use crate::mat::Mat;
use crate::morphism::{Morphism, Signature, SignatureEntry};
use crate::multimodule::Multimodule;
use crate::report::Report;

/// One action paired with its partner under the index involution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvolutionEntry {
    pub label: String,
    pub partner: String,
    pub dagger: AlgebraInvolution,
}

/// An involutive map `star` on the carrier exchanging actions along an involutive index map.
///
/// For every action `l` with partner `f(l)` the exchange law reads
/// `star(a ._l x) = dagger(a) ._{f(l)} star(x)`, where the side of `f(l)`
/// decides whether this is a left or right multiplication.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultimoduleInvolution {
    pub entries: Vec<InvolutionEntry>,
    pub star: Mat,
}

impl MultimoduleInvolution {
    pub fn new(entries: Vec<InvolutionEntry>, star: Mat) -> Self {
        MultimoduleInvolution { entries, star }
    }

    /// The identity map with every label fixed and the identity involutions.
    ///
    /// This is an involution only if all acting algebras are commutative or
    /// the variance fits; [`MultimoduleInvolution::check`] decides.
    pub fn trivial(m: &Multimodule) -> Self {
        MultimoduleInvolution {
            entries: m
                .actions()
                .iter()
                .map(|a| InvolutionEntry {
                    label: a.label.clone(),
                    partner: a.label.clone(),
                    dagger: AlgebraInvolution::identity(&a.algebra, Variance::Covariant),
                })
                .collect(),
            star: Mat::identity(m.modulus(), m.ngens()),
        }
    }

    pub fn entry(&self, label: &str) -> Option<&InvolutionEntry> {
        self.entries.iter().find(|e| e.label == label)
    }

    pub fn partner(&self, label: &str) -> Option<&str> {
        self.entry(label).map(|e| e.partner.as_str())
    }

    /// Applies `star` to an element.
    pub fn apply(&self, m: &Multimodule, x: &[u64]) -> Vec<u64> {
        m.carrier().reduce(&self.star.apply(x))
    }

    /// Checks the index involution, the pairing conditions, involutivity of
    /// `star` and the exchange laws.
    pub fn check(&self, m: &Multimodule) -> Report {
        let mut rep = Report::new();
        let c = m.carrier();
        if self.star.rows() != m.ngens() || self.star.cols() != m.ngens() {
            rep.fail("shape", "star has the wrong shape".into());
            return rep;
        }
        for a in m.actions() {
            let n = self.entries.iter().filter(|e| e.label == a.label).count();
            if n != 1 {
                rep.fail("index-map", format!("action {} has {n} entries", a.label));
            }
        }
        if !rep.holds() {
            return rep;
        }
        for e in &self.entries {
            let (a, b) = match (m.action(&e.label), m.action(&e.partner)) {
                (Ok(a), Ok(b)) => (a, b),
                _ => {
                    rep.fail("index-map", format!("unknown label in {} -> {}", e.label, e.partner));
                    continue;
                }
            };
            match self.entry(&e.partner) {
                Some(back) if back.partner == e.label => {
                    if back.dagger != e.dagger {
                        rep.fail(
                            "pairing",
                            format!("{} and {} carry different involutions", e.label, e.partner),
                        );
                    }
                }
                _ => rep.fail(
                    "involutive-index",
                    format!("index map is not involutive at {}", e.label),
                ),
            }
            if a.algebra != b.algebra {
                rep.fail(
                    "pairing",
                    format!("{} and {} act by different algebras", e.label, e.partner),
                );
                continue;
            }
            if e.dagger.algebra() != &a.algebra {
                rep.fail("pairing", format!("involution of {} is on another algebra", e.label));
                continue;
            }
            let want = if a.side == b.side {
                Variance::Covariant
            } else {
                Variance::Contravariant
            };
            if e.dagger.variance() != want {
                rep.fail(
                    "variance",
                    format!("{} -> {} needs a {} involution", e.label, e.partner, want.as_str()),
                );
            }
            for v in e.dagger.check().violations {
                rep.fail(&v.law, format!("involution of {}: {}", e.label, v.detail));
            }
        }
        for r in c.relation_mat().to_rows() {
            let img = self.star.apply(&r);
            if !c.is_zero(&img) {
                rep.fail_with(
                    "well-defined",
                    "star does not preserve the relations".into(),
                    vec![format!("relation={r:?}")],
                    c.reduce(&img),
                    vec![0; c.ngens()],
                );
            }
        }
        let sq = self.star.mul_unchecked(&self.star);
        for x in 0..m.ngens() {
            let gx = c.generator(x);
            let y = sq.apply(&gx);
            if !c.eq_elems(&y, &gx) {
                rep.fail_with(
                    "involutive",
                    format!("star moves g{x} after two applications"),
                    vec![format!("x=g{x}")],
                    c.reduce(&y),
                    gx,
                );
            }
        }
        if !rep.holds() {
            return rep;
        }
        for e in &self.entries {
            let a = m.action(&e.label).expect("checked");
            let b = m.action(&e.partner).expect("checked");
            for (i, op) in a.ops.iter().enumerate() {
                let lhs_m = self.star.mul_unchecked(op);
                let rhs_m = b
                    .op(&e.dagger.apply(&a.algebra.generator(i)))
                    .mul_unchecked(&self.star);
                for x in 0..m.ngens() {
                    let (l, r) = (lhs_m.col(x), rhs_m.col(x));
                    if !c.eq_elems(&l, &r) {
                        rep.fail_with(
                            "exchange",
                            format!("star does not exchange {} with {}", e.label, e.partner),
                            vec![format!("a=e{i}@{}", e.label), format!("x=g{x}")],
                            c.reduce(&l),
                            c.reduce(&r),
                        );
                    }
                }
            }
        }
        rep
    }

    /// `star` as an endomorphism with signature `l -> f(l)` through the involutions.
    pub fn as_morphism(&self, m: &Multimodule) -> Result<Morphism> {
        let mut entries = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            m.action(&e.label)?;
            m.action(&e.partner)?;
            entries.push(SignatureEntry {
                source: e.label.clone(),
                target: e.partner.clone(),
                eta: e.dagger.as_map(),
                phi: Some(e.dagger.over().map().clone()).filter(|p| !is_identity(p)),
            });
        }
        Morphism::new(m.clone(), m.clone(), Signature::new(entries), self.star.clone())
    }

    /// The involution with its entries re-keyed through a label renaming.
    pub fn relabeled(&self, rename: impl Fn(&str) -> Option<String>) -> Result<Self> {
        let mut entries = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            let l = rename(&e.label).ok_or_else(|| Error::UnknownLabel(e.label.clone()))?;
            let p = rename(&e.partner).ok_or_else(|| Error::UnknownLabel(e.partner.clone()))?;
            entries.push(InvolutionEntry {
                label: l,
                partner: p,
                dagger: e.dagger.clone(),
            });
        }
        Ok(MultimoduleInvolution {
            entries,
            star: self.star.clone(),
        })
    }
}

fn is_identity(p: &Mat) -> bool {
    p.is_square() && *p == Mat::identity(p.modulus(), p.rows())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Algebra;
    use crate::zn::Modulus;

    fn transpose_matrix(n: u64) -> Mat {
        let m = Modulus::new(n).unwrap();
        let mut t = Mat::zeros(m, 4, 4);
        for r in 0..2 {
            for c in 0..2 {
                t.set(c * 2 + r, r * 2 + c, 1);
            }
        }
        t
    }

    #[test]
    fn transpose_on_matrix_bimodule() {
        let m = Modulus::new(3).unwrap();
        let a = Algebra::matrices2(m);
        let bi = Multimodule::regular(&a, "L", "R").unwrap();
        let t = transpose_matrix(3);
        let dag = AlgebraInvolution::plain(a.clone(), t.clone(), Variance::Contravariant).unwrap();
        let inv = MultimoduleInvolution::new(
            vec![
                InvolutionEntry {
                    label: "L".into(),
                    partner: "R".into(),
                    dagger: dag.clone(),
                },
                InvolutionEntry {
                    label: "R".into(),
                    partner: "L".into(),
                    dagger: dag,
                },
            ],
            t,
        );
        assert!(inv.check(&bi).holds(), "{}", inv.check(&bi));
        let mo = inv.as_morphism(&bi).unwrap();
        assert!(mo.check().holds());
        assert!(mo.compose(&mo).unwrap().equals(&Morphism::identity(&bi)));
    }

    #[test]
    fn trivial_on_commutative_bimodule() {
        let m = Modulus::new(5).unwrap();
        let d = Algebra::dual_numbers(m);
        let bi = Multimodule::regular(&d, "L", "R").unwrap();
        assert!(MultimoduleInvolution::trivial(&bi).check(&bi).holds());
    }

    #[test]
    fn unpaired_algebras_are_reported() {
        let m = Modulus::new(3).unwrap();
        let d = Algebra::dual_numbers(m);
        let s = Algebra::split_pair(m);
        let x = Multimodule::regular(&d, "L", "R").unwrap();
        let y = Multimodule::regular(&s, "L", "R").unwrap();
        let prod = crate::constructions::tensor_z(&x, &y).unwrap();
        let mut inv = MultimoduleInvolution::trivial(&prod);
        let l1 = prod.all_labels()[0].clone();
        let l2 = prod.all_labels()[2].clone();
        for e in inv.entries.iter_mut() {
            if e.label == l1 {
                e.partner = l2.clone();
            } else if e.label == l2 {
                e.partner = l1.clone();
            }
        }
        assert!(inv.check(&prod).has_law("pairing"));
    }
}
