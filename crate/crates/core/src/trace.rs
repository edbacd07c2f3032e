//! Tracial maps, contractions of paired actions, and contracted involutions.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::conjugation::AlgebraMap;
use crate::constructions::{tensor_over, GammaPair, TensorProduct};
use crate::error::{Error, Result};
use crate::involution::{InvolutionEntry, MultimoduleInvolution};
use crate::mapspace::{Factorization, MapSpace};
use crate::mat::{vecops, Mat};
use crate::module::ModuleMap;
use crate::morphism::{generator_label, Morphism, Signature, SignatureEntry};
use crate::multimodule::Multimodule;
use crate::report::Report;

/// A symmetric, injective, irreflexive relation on the action labels.
///
/// Each unordered pair is stored once.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TraceRelation {
    pub pairs: Vec<(String, String)>,
}

impl TraceRelation {
    pub fn new(pairs: &[(&str, &str)]) -> Self {
        TraceRelation {
            pairs: pairs.iter().map(|(a, b)| (String::from(*a), String::from(*b))).collect(),
        }
    }

    pub fn empty() -> Self {
        TraceRelation::default()
    }

    /// The label paired with `label`, if any.
    pub fn partner(&self, label: &str) -> Option<&str> {
        self.pairs.iter().find_map(|(a, b)| {
            if a == label {
                Some(b.as_str())
            } else if b == label {
                Some(a.as_str())
            } else {
                None
            }
        })
    }

    pub fn relates(&self, x: &str, y: &str) -> bool {
        self.partner(x) == Some(y)
    }

    /// Labels occurring in some pair.
    pub fn support(&self) -> Vec<String> {
        self.pairs
            .iter()
            .flat_map(|(a, b)| [a.clone(), b.clone()])
            .collect()
    }

    pub fn validate(&self, m: &Multimodule) -> Result<()> {
        let mut seen: Vec<&str> = Vec::new();
        for (a, b) in &self.pairs {
            if a == b {
                return Err(Error::IndexMismatch(format!("{a} is paired with itself")));
            }
            for l in [a, b] {
                if seen.contains(&l.as_str()) {
                    return Err(Error::IndexMismatch(format!("{l} occurs in two pairs")));
                }
                seen.push(l);
            }
            if m.action(a)?.algebra != m.action(b)?.algebra {
                return Err(Error::AlgebraMismatch(format!(
                    "{a} and {b} act by different algebras"
                )));
            }
        }
        Ok(())
    }
}

/// The universal contraction of a multimodule along a trace relation.
#[derive(Debug, Clone)]
pub struct Contraction {
    /// The quotient, carrying the actions outside the relation.
    pub result: Multimodule,
    /// Matrix `result x m` of the quotient map.
    pub projection: Mat,
    pub relation: TraceRelation,
}

fn relators(m: &Multimodule, g: &TraceRelation) -> Result<Vec<Vec<u64>>> {
    let mut out = Vec::new();
    for (x, y) in &g.pairs {
        let (a, b) = (m.action(x)?, m.action(y)?);
        for (s, t) in a.ops.iter().zip(&b.ops) {
            out.extend(s.sub(t)?.to_cols());
        }
    }
    Ok(out)
}

/// The quotient by the span of `a ._x v - a ._y v` over all pairs `(x, y)`.
///
/// When one of the labels acts from the right the relator reads
/// `a . v - v . a`. The actions in the relation are dropped.
pub fn contraction(m: &Multimodule, g: &TraceRelation) -> Result<Contraction> {
    g.validate(m)?;
    let support = g.support();
    let survivors: Vec<String> = m
        .all_labels()
        .into_iter()
        .filter(|l| !support.contains(l))
        .collect();
    let kept = m.restrict_to(&survivors)?;
    let rel = relators(m, g)?;
    let (_, inc) = kept.submodule_closure(&rel)?;
    let (result, proj) = kept.quotient(&inc.matrix().to_cols())?;
    Ok(Contraction {
        result,
        projection: proj.matrix().clone(),
        relation: g.clone(),
    })
}

/// Checks `t(a ._x v) = t(a ._y v)` for all pairs, algebra generators and carrier generators.
pub fn is_tracial(t: &ModuleMap, m: &Multimodule, g: &TraceRelation) -> Result<Report> {
    g.validate(m)?;
    if t.source() != m.carrier() {
        return Err(Error::IndexMismatch("map is not defined on the carrier".into()));
    }
    let mut rep = Report::new();
    for (x, y) in &g.pairs {
        let (a, b) = (m.action(x)?, m.action(y)?);
        for (i, (s, u)) in a.ops.iter().zip(&b.ops).enumerate() {
            let lm = t.matrix().mul_unchecked(s);
            let rm = t.matrix().mul_unchecked(u);
            for v in 0..m.ngens() {
                let (l, r) = (lm.col(v), rm.col(v));
                if !t.target().eq_elems(&l, &r) {
                    rep.fail_with(
                        "tracial",
                        format!("the map separates {x} and {y}"),
                        vec![format!("a={}", generator_label(i, x)), format!("x=g{v}")],
                        t.target().reduce(&l),
                        t.target().reduce(&r),
                    );
                }
            }
        }
    }
    Ok(rep)
}

impl Contraction {
    /// The quotient map as a module map from the carrier of `m`.
    pub fn projection_map(&self, m: &Multimodule) -> Result<ModuleMap> {
        ModuleMap::new(
            m.carrier().clone(),
            self.result.carrier().clone(),
            self.projection.clone(),
        )
    }

    /// Solves `t = s o projection` for a map `s` out of the contraction.
    pub fn factor(&self, t: &ModuleMap) -> Result<Option<Factorization>> {
        let space = MapSpace::hom(self.result.carrier(), t.target())?;
        Ok(space.factor(&self.projection, t.matrix()))
    }

    fn section(&self, m: &Multimodule) -> Result<Mat> {
        let p = self.projection_map(m)?;
        let k = self.result.ngens();
        let mut cols = Vec::with_capacity(k);
        for j in 0..k {
            cols.push(
                p.preimage(&vecops::unit(k, j))
                    .ok_or_else(|| Error::NoSolution("projection is not surjective".into()))?,
            );
        }
        if cols.is_empty() {
            return Ok(Mat::zeros(m.modulus(), m.ngens(), 0));
        }
        Mat::from_cols(m.modulus(), m.ngens(), &cols)
    }
}

/// The involution induced on the contraction.
///
/// Requires the index map of `inv` to send pairs of the relation to pairs.
pub fn contract_involution(
    m: &Multimodule,
    c: &Contraction,
    inv: &MultimoduleInvolution,
) -> Result<MultimoduleInvolution> {
    let g = &c.relation;
    let f = |l: &str| -> Result<String> {
        inv.partner(l)
            .map(|p| p.to_string())
            .ok_or_else(|| Error::MissingInvolution(format!("no entry for {l}")))
    };
    for (x, y) in &g.pairs {
        let (fx, fy) = (f(x)?, f(y)?);
        if !g.relates(&fx, &fy) {
            return Err(Error::NotCompatible(format!(
                "pair ({x}, {y}) maps to ({fx}, {fy}), which is not related"
            )));
        }
    }
    let section = c.section(m)?;
    let star = crate::multimodule::reduce_cols(
        c.result.carrier(),
        &c.projection.mul_unchecked(&inv.star).mul_unchecked(&section),
    );
    let mut entries = Vec::new();
    for a in c.result.actions() {
        let e = inv
            .entry(&a.label)
            .ok_or_else(|| Error::MissingInvolution(format!("no entry for {}", a.label)))?;
        entries.push(InvolutionEntry {
            label: e.label.clone(),
            partner: e.partner.clone(),
            dagger: e.dagger.clone(),
        });
    }
    Ok(MultimoduleInvolution::new(entries, star))
}

/// The tensor product over paired actions compared with the contraction of the plain tensor product.
#[derive(Debug, Clone)]
pub struct ContractionIso {
    pub tensor: TensorProduct,
    /// The plain tensor product over Z/n.
    pub plain: TensorProduct,
    /// The contraction of `plain` along the pairs.
    pub contraction: Contraction,
    /// The comparison `tensor -> contraction`, compatible with both quotient maps.
    pub iso: Morphism,
}

/// Builds both sides and solves for the comparison map through the quotient maps.
///
/// Returns `NotInvertible` if the solved map is not an isomorphism.
pub fn tensor_contraction_iso(m: &Multimodule, n: &Multimodule, gamma: &[GammaPair]) -> Result<ContractionIso> {
    let tensor = tensor_over(m, n, gamma)?;
    let plain = tensor_over(m, n, &[])?;
    let mut pairs = Vec::with_capacity(gamma.len());
    for (x, y) in gamma {
        let lx = plain
            .left_label(x)
            .ok_or_else(|| Error::UnknownLabel(x.clone()))?;
        let ly = plain
            .right_label(y)
            .ok_or_else(|| Error::UnknownLabel(y.clone()))?;
        pairs.push((lx.to_string(), ly.to_string()));
    }
    let relation = TraceRelation { pairs };
    let contraction = contraction(&plain.result, &relation)?;
    let target_map = contraction.projection.mul_unchecked(&plain.eta);
    let space = MapSpace::hom(tensor.result.carrier(), contraction.result.carrier())?;
    let fact = space
        .factor(&tensor.eta, &target_map)
        .ok_or_else(|| Error::NoSolution("contraction does not factor through the tensor".into()))?;
    let mut entries = Vec::new();
    for (orig, label) in &tensor.left_labels {
        let t = plain.left_label(orig).expect("surviving label");
        entries.push(entry(&tensor.result, label, t)?);
    }
    for (orig, label) in &tensor.right_labels {
        let t = plain.right_label(orig).expect("surviving label");
        entries.push(entry(&tensor.result, label, t)?);
    }
    let iso = Morphism::new(
        tensor.result.clone(),
        contraction.result.clone(),
        Signature::new(entries),
        fact.map,
    )?;
    if !fact.unique || !iso.module_map()?.is_isomorphism() {
        return Err(Error::NotInvertible("comparison map is not bijective".into()));
    }
    Ok(ContractionIso {
        tensor,
        plain,
        contraction,
        iso,
    })
}

fn entry(src: &Multimodule, label: &str, target: &str) -> Result<SignatureEntry> {
    Ok(SignatureEntry {
        source: label.to_string(),
        target: target.to_string(),
        eta: AlgebraMap::identity(&src.action(label)?.algebra),
        phi: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Algebra;
    use crate::conjugation::{AlgebraInvolution, Variance};
    use crate::zn::Modulus;

    fn md(n: u64) -> Modulus {
        Modulus::new(n).unwrap()
    }

    #[test]
    fn upper_triangular_trace_has_order_nine() {
        let t = Algebra::upper_triangular(md(3));
        let r = Multimodule::regular(&t, "L", "R").unwrap();
        let c = contraction(&r, &TraceRelation::new(&[("L", "R")])).unwrap();
        assert_eq!(c.result.carrier().order(), Some(9));
        assert!(c.result.actions().is_empty());
        let p = c.projection_map(&r).unwrap();
        assert!(is_tracial(&p, &r, &c.relation).unwrap().holds());
        let id = ModuleMap::identity(r.carrier());
        let rep = is_tracial(&id, &r, &c.relation).unwrap();
        assert!(rep.has_law("tracial"));
        assert!(rep.violations[0].witness.is_some());
    }

    #[test]
    fn empty_relation_keeps_the_multimodule() {
        let d = Algebra::dual_numbers(md(4));
        let r = Multimodule::regular(&d, "L", "R").unwrap();
        let c = contraction(&r, &TraceRelation::empty()).unwrap();
        assert_eq!(c.result.carrier().order(), Some(16));
        assert_eq!(c.result.all_labels(), r.all_labels());
    }

    #[test]
    fn invalid_relations_are_rejected() {
        let d = Algebra::dual_numbers(md(4));
        let r = Multimodule::regular(&d, "L", "R").unwrap();
        assert!(contraction(&r, &TraceRelation::new(&[("L", "L")])).is_err());
        assert!(contraction(&r, &TraceRelation::new(&[("L", "R"), ("R", "L")])).is_err());
    }

    #[test]
    fn transpose_descends_to_the_trace() {
        let a = Algebra::matrices2(md(3));
        let r = Multimodule::regular(&a, "L", "R").unwrap();
        let prod = crate::constructions::tensor_z(&r, &r).unwrap();
        let labels = prod.all_labels();
        let mut t = Mat::zeros(md(3), 4, 4);
        for i in 0..2 {
            for j in 0..2 {
                t.set(j * 2 + i, i * 2 + j, 1);
            }
        }
        let star = t.kron(&t);
        let dag = AlgebraInvolution::plain(a.clone(), t, Variance::Contravariant).unwrap();
        let pairs = [(0, 1), (2, 3)];
        let mut entries = Vec::new();
        for (x, y) in pairs {
            for (p, q) in [(x, y), (y, x)] {
                entries.push(InvolutionEntry {
                    label: labels[p].clone(),
                    partner: labels[q].clone(),
                    dagger: dag.clone(),
                });
            }
        }
        let inv = MultimoduleInvolution::new(entries, star);
        assert!(inv.check(&prod).holds(), "{}", inv.check(&prod));
        let g = TraceRelation {
            pairs: vec![(labels[1].clone(), labels[2].clone())],
        };
        let c = contraction(&prod, &g).unwrap();
        assert_eq!(c.result.carrier().order(), Some(3u128.pow(4)));
        assert!(matches!(
            contract_involution(&prod, &c, &inv),
            Err(Error::NotCompatible(_))
        ));
        let g3 = TraceRelation {
            pairs: vec![
                (labels[0].clone(), labels[3].clone()),
                (labels[1].clone(), labels[2].clone()),
            ],
        };
        let c3 = contraction(&prod, &g3).unwrap();
        let ci = contract_involution(&prod, &c3, &inv).unwrap();
        assert!(ci.check(&c3.result).holds(), "{}", ci.check(&c3.result));
    }

    #[test]
    fn unit_contraction_iso() {
        let t = Algebra::upper_triangular(md(3));
        let r = Multimodule::regular(&t, "L", "R").unwrap();
        let w = tensor_contraction_iso(&r, &r, &[("R".into(), "L".into())]).unwrap();
        assert!(w.iso.check().holds(), "{}", w.iso.check());
        assert_eq!(w.tensor.result.carrier().order(), Some(27));
    }
}
