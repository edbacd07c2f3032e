//! Signatures and morphisms of multimodules.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::conjugation::{AlgebraMap, Variance};
use crate::error::{Error, Result};
use crate::mapspace::{Constraint, MapSpace};
use crate::mat::Mat;
use crate::module::ModuleMap;
use crate::multimodule::Multimodule;
use crate::report::Report;

/// Where one source action goes, and through which algebra map.
///
/// The entry is covariant when source and target act from the same side.
/// `phi` is the endomap of the base ring twisting the linearity law; it
/// defaults to the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignatureEntry {
    pub source: String,
    pub target: String,
    pub eta: AlgebraMap,
    pub phi: Option<Mat>,
}

/// The index map of a morphism with its algebra maps, one entry per source action.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Signature {
    pub entries: Vec<SignatureEntry>,
}

impl Signature {
    pub fn new(entries: Vec<SignatureEntry>) -> Self {
        Signature { entries }
    }

    /// Every label to itself through the identity of its algebra.
    pub fn identity(m: &Multimodule) -> Self {
        Signature {
            entries: m
                .actions()
                .iter()
                .map(|a| SignatureEntry {
                    source: a.label.clone(),
                    target: a.label.clone(),
                    eta: AlgebraMap::identity(&a.algebra),
                    phi: None,
                })
                .collect(),
        }
    }

    /// Label-preserving identities between two multimodules with the same index families.
    pub fn matching(source: &Multimodule, target: &Multimodule) -> Result<Self> {
        let mut entries = Vec::new();
        for a in source.actions() {
            let b = target.action(&a.label)?;
            if a.algebra != b.algebra || a.side != b.side {
                return Err(Error::IndexMismatch(format!(
                    "action {} differs between the multimodules",
                    a.label
                )));
            }
            entries.push(SignatureEntry {
                source: a.label.clone(),
                target: a.label.clone(),
                eta: AlgebraMap::identity(&a.algebra),
                phi: None,
            });
        }
        Ok(Signature { entries })
    }

    pub fn entry(&self, source: &str) -> Option<&SignatureEntry> {
        self.entries.iter().find(|e| e.source == source)
    }

    /// The image of a source label.
    pub fn image(&self, source: &str) -> Option<&str> {
        self.entry(source).map(|e| e.target.as_str())
    }

    /// The componentwise composite `self o inner`.
    pub fn compose(&self, inner: &Signature) -> Result<Signature> {
        let mut entries = Vec::with_capacity(inner.entries.len());
        for e in &inner.entries {
            let o = self.entry(&e.target).ok_or_else(|| {
                Error::IncompatibleSignature(format!("label {} has no image", e.target))
            })?;
            let phi = match (&o.phi, &e.phi) {
                (None, None) => None,
                (Some(p), None) => Some(p.clone()),
                (None, Some(q)) => Some(q.clone()),
                (Some(p), Some(q)) => Some(p.mul(q)?),
            };
            entries.push(SignatureEntry {
                source: e.source.clone(),
                target: o.target.clone(),
                eta: o.eta.compose(&e.eta)?,
                phi,
            });
        }
        Ok(Signature { entries })
    }

    /// Checks that the signature fits `source -> target`.
    pub fn check(&self, source: &Multimodule, target: &Multimodule) -> Report {
        let mut rep = Report::new();
        for a in source.actions() {
            let n = self.entries.iter().filter(|e| e.source == a.label).count();
            if n != 1 {
                rep.fail(
                    "index-map",
                    format!("source action {} has {n} images", a.label),
                );
            }
        }
        for (i, e) in self.entries.iter().enumerate() {
            if self.entries[..i].iter().any(|d| d.target == e.target) {
                rep.fail("injective", format!("two actions map to {}", e.target));
            }
            let (sa, ta) = match (source.action(&e.source), target.action(&e.target)) {
                (Ok(s), Ok(t)) => (s, t),
                _ => {
                    rep.fail(
                        "index-map",
                        format!("unknown label in {} -> {}", e.source, e.target),
                    );
                    continue;
                }
            };
            if e.eta.source() != &sa.algebra || e.eta.target() != &ta.algebra {
                rep.fail(
                    "algebra",
                    format!("algebra map for {} has the wrong source or target", e.source),
                );
                continue;
            }
            let want = if sa.side == ta.side {
                Variance::Covariant
            } else {
                Variance::Contravariant
            };
            if e.eta.variance() != want {
                rep.fail(
                    "variance",
                    format!("{} -> {} needs a {} algebra map", e.source, e.target, want.as_str()),
                );
            }
            for v in e.eta.check().violations {
                rep.fail(&v.law, format!("algebra map for {}: {}", e.source, v.detail));
            }
            if !e.eta.respects_base(e.phi.as_ref()) {
                rep.fail(
                    "base",
                    format!("algebra map for {} is not compatible with the base ring", e.source),
                );
            }
        }
        rep
    }
}

/// A carrier map together with its signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    pub source: Multimodule,
    pub target: Multimodule,
    pub signature: Signature,
    pub map: Mat,
}

impl Morphism {
    /// Checks shapes only; equivariance is checked by [`Morphism::check`].
    pub fn new(source: Multimodule, target: Multimodule, signature: Signature, map: Mat) -> Result<Self> {
        if map.rows() != target.ngens() || map.cols() != source.ngens() {
            return Err(Error::DimensionMismatch {
                context: "morphism matrix",
                expected: target.ngens() * source.ngens(),
                found: map.rows() * map.cols(),
            });
        }
        Ok(Morphism {
            source,
            target,
            signature,
            map,
        })
    }

    pub fn identity(m: &Multimodule) -> Self {
        Morphism {
            source: m.clone(),
            target: m.clone(),
            signature: Signature::identity(m),
            map: Mat::identity(m.modulus(), m.ngens()),
        }
    }

    /// The underlying module map.
    pub fn module_map(&self) -> Result<ModuleMap> {
        ModuleMap::new(
            self.source.carrier().clone(),
            self.target.carrier().clone(),
            self.map.clone(),
        )
    }

    /// The composite `self o inner`.
    pub fn compose(&self, inner: &Morphism) -> Result<Morphism> {
        if inner.target != self.source {
            return Err(Error::IndexMismatch(
                "target of the inner morphism is not the source of the outer one".into(),
            ));
        }
        Ok(Morphism {
            source: inner.source.clone(),
            target: self.target.clone(),
            signature: self.signature.compose(&inner.signature)?,
            map: self.map.mul(&inner.map)?,
        })
    }

    /// Whether two morphisms have equal signatures and agree as maps.
    pub fn equals(&self, other: &Morphism) -> bool {
        self.source == other.source
            && self.target == other.target
            && self.signature == other.signature
            && (0..self.source.ngens()).all(|j| {
                self.target
                    .carrier()
                    .eq_elems(&self.map.col(j), &other.map.col(j))
            })
    }

    /// Checks well-definedness, the signature, and equivariance on generators.
    pub fn check(&self) -> Report {
        let mut rep = self.signature.check(&self.source, &self.target);
        let (s, t) = (self.source.carrier(), self.target.carrier());
        for r in s.relation_mat().to_rows() {
            let img = self.map.apply(&r);
            if !t.is_zero(&img) {
                rep.fail_with(
                    "well-defined",
                    "map does not preserve the relations".into(),
                    vec![format!("relation={r:?}")],
                    t.reduce(&img),
                    vec![0; t.ngens()],
                );
            }
        }
        if !rep.holds() {
            return rep;
        }
        for e in &self.signature.entries {
            let sa = self.source.action(&e.source).expect("checked");
            let ta = self.target.action(&e.target).expect("checked");
            for (i, op) in sa.ops.iter().enumerate() {
                let top = ta.op(&e.eta.apply(&sa.algebra.generator(i)));
                let lhs_m = self.map.mul_unchecked(op);
                let rhs_m = top.mul_unchecked(&self.map);
                for x in 0..s.ngens() {
                    let (l, r) = (lhs_m.col(x), rhs_m.col(x));
                    if !t.eq_elems(&l, &r) {
                        rep.fail_with(
                            "equivariance",
                            format!("law {} -> {} fails", e.source, e.target),
                            vec![format!("a=e{i}@{}", e.source), format!("x=g{x}")],
                            t.reduce(&l),
                            t.reduce(&r),
                        );
                    }
                }
            }
        }
        rep
    }
}

/// All maps `source -> target` that are morphisms with the given signature.
pub fn morphism_space(source: &Multimodule, target: &Multimodule, sig: &Signature) -> Result<MapSpace> {
    let rep = sig.check(source, target);
    if !rep.holds() {
        return Err(Error::IncompatibleSignature(rep.to_string()));
    }
    let mut pairs: Vec<(Mat, Mat)> = Vec::new();
    for e in &sig.entries {
        let sa = source.action(&e.source)?;
        let ta = target.action(&e.target)?;
        for (i, op) in sa.ops.iter().enumerate() {
            pairs.push((op.clone(), ta.op(&e.eta.apply(&sa.algebra.generator(i)))));
        }
    }
    let closures: Vec<_> = pairs
        .iter()
        .map(|(s, t)| move |x: &Mat| x.mul_unchecked(s).sub(&t.mul_unchecked(x)).expect("shapes"))
        .collect();
    let cons: Vec<Constraint<'_>> = closures.iter().map(|c| c as Constraint<'_>).collect();
    MapSpace::constrained(source.carrier(), target.carrier(), &cons)
}

/// Covariant identity-signature morphisms between multimodules with the same labels.
pub fn equivariant_space(source: &Multimodule, target: &Multimodule) -> Result<MapSpace> {
    morphism_space(source, target, &Signature::matching(source, target)?)
}

/// The label of a witness entry for an algebra generator.
pub fn generator_label(i: usize, label: &str) -> String {
    format!("e{i}@{label}")
}
