//! First-order differential operators between multimodules.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::Algebra;
use crate::conjugation::{base_ring, AlgebraMap, Variance};
use crate::constructions::{fresh_label, twist};
use crate::error::{Error, Result};
use crate::mapspace::{Constraint, MapSpace};
use crate::mat::{vecops, Mat};
use crate::module::ModuleMap;
use crate::morphism::{equivariant_space, generator_label, Morphism, Signature, SignatureEntry};
use crate::multimodule::{reduce_cols, Action, Multimodule};
use crate::report::Report;

/// The space of first-order operators `source -> target` for one signature.
///
/// At the labels of `selection` the conditions use the whole acting
/// algebra; at every other label only its base ring.
#[derive(Debug, Clone)]
pub struct Diff1Space {
    pub source: Multimodule,
    pub target: Multimodule,
    pub signature: Signature,
    pub selection: Vec<String>,
    pub space: MapSpace,
}

impl Diff1Space {
    pub fn rank(&self) -> usize {
        self.space.basis().len()
    }

    pub fn contains(&self, d: &Mat) -> bool {
        self.space.contains(d)
    }

    pub fn is_selected(&self, label: &str) -> bool {
        self.selection.iter().any(|l| l == label)
    }
}

/// Operators of one source label and of its image, on algebra and base-ring generators.
struct LabelOps {
    label: String,
    source: Vec<Mat>,
    target: Vec<Mat>,
    ring_source: Vec<Mat>,
    ring_target: Vec<Mat>,
}

/// The base embedding of an algebra as a matrix, the unit when none is declared.
fn base_matrix(a: &Algebra) -> Mat {
    match a.base() {
        Some(b) => b.map.clone(),
        None => Mat::from_cols(a.modulus(), a.rank(), &[a.unit().to_vec()]).expect("unit shape"),
    }
}

fn label_ops(m: &Multimodule, n: &Multimodule, sig: &Signature, selection: &[String]) -> Result<Vec<LabelOps>> {
    let rep = sig.check(m, n);
    if !rep.holds() {
        return Err(Error::IncompatibleSignature(format!("{rep}")));
    }
    for l in selection {
        m.action(l)?;
    }
    let mut out = Vec::new();
    for a in m.actions() {
        let e = sig.entry(&a.label).expect("checked");
        let t = n.action(&e.target)?;
        let base = base_matrix(&a.algebra);
        let ring_source: Vec<Mat> = base.to_cols().iter().map(|r| a.op(r)).collect();
        let ring_target: Vec<Mat> = base.to_cols().iter().map(|r| t.op(&e.eta.apply(r))).collect();
        let (source, target) = if selection.contains(&a.label) {
            (
                a.ops.clone(),
                (0..a.algebra.rank())
                    .map(|k| t.op(&e.eta.apply(&a.algebra.generator(k))))
                    .collect(),
            )
        } else {
            (ring_source.clone(), ring_target.clone())
        };
        out.push(LabelOps {
            label: a.label.clone(),
            source,
            target,
            ring_source,
            ring_target,
        });
    }
    Ok(out)
}

/// The first-order expression `X P Q + P' Q' X - Q' X P - P' X Q`.
fn first_order(x: &Mat, p: &Mat, q: &Mat, pt: &Mat, qt: &Mat) -> Mat {
    let mut out = x.mul_unchecked(&p.mul_unchecked(q));
    out.add_scaled(&pt.mul_unchecked(&qt.mul_unchecked(x)), 1);
    let neg = x.modulus().value() - 1;
    out.add_scaled(&qt.mul_unchecked(&x.mul_unchecked(p)), neg);
    out.add_scaled(&pt.mul_unchecked(&x.mul_unchecked(q)), neg);
    out
}

fn solve(m: &Multimodule, n: &Multimodule, sig: Signature, selection: &[String]) -> Result<Diff1Space> {
    let ops = label_ops(m, n, &sig, selection)?;
    let mut linear: Vec<(&Mat, &Mat)> = Vec::new();
    for o in &ops {
        linear.extend(o.ring_source.iter().zip(&o.ring_target));
    }
    let mut pairs: Vec<(&Mat, &Mat, &Mat, &Mat)> = Vec::new();
    for (i, a) in ops.iter().enumerate() {
        for b in &ops[i + 1..] {
            for (p, pt) in a.source.iter().zip(&a.target) {
                for (q, qt) in b.source.iter().zip(&b.target) {
                    pairs.push((p, q, pt, qt));
                }
            }
        }
    }
    let md = m.modulus();
    let t = n.ngens();
    let all = move |x: &Mat| -> Mat {
        let mut out = Mat::zeros(md, t, 0);
        for (p, pt) in &linear {
            out = out.hstack(&x.mul_unchecked(p).sub(&pt.mul_unchecked(x)).expect("shapes")).expect("rows");
        }
        for (p, q, pt, qt) in &pairs {
            out = out.hstack(&first_order(x, p, q, pt, qt)).expect("rows");
        }
        out
    };
    let cons: [Constraint<'_>; 1] = [&all];
    let space = MapSpace::constrained(m.carrier(), n.carrier(), &cons)?;
    Ok(Diff1Space {
        source: m.clone(),
        target: n.clone(),
        signature: sig,
        selection: selection.to_vec(),
        space,
    })
}

/// First-order operators with the full algebra at every label.
pub fn diff1(m: &Multimodule, n: &Multimodule) -> Result<Diff1Space> {
    diff1_selected(m, n, &m.all_labels())
}

/// First-order operators with the full algebra at the selected labels only.
pub fn diff1_selected(m: &Multimodule, n: &Multimodule, selection: &[String]) -> Result<Diff1Space> {
    solve(m, n, Signature::matching(m, n)?, selection)
}

/// Operators that are morphisms, as a subspace of `Hom(m, n)`, with their inclusion into Diff1.
pub fn hom_inclusion(d: &Diff1Space) -> Result<(MapSpace, ModuleMap)> {
    let hom = equivariant_space(&d.source, &d.target)?;
    let inc = hom.module_map_into(&d.space, |x| x.clone())?;
    Ok((hom, inc))
}

fn commutators(d: &Mat, ops: &[LabelOps], m: &Multimodule, n: &Multimodule) -> Report {
    let mut rep = Report::new();
    let md = m.modulus();
    let nc = n.carrier();
    let apply = |a: &Mat, v: &[u64]| a.apply(v);
    let bracket = |p: &Mat, pt: &Mat, v: &[u64]| -> Vec<u64> {
        vecops::sub(md, &apply(d, &apply(p, v)), &apply(pt, &apply(d, v)))
    };
    for o in ops {
        for (k, (r, rt)) in o.ring_source.iter().zip(&o.ring_target).enumerate() {
            for x in 0..m.ngens() {
                let v = bracket(r, rt, &vecops::unit(m.ngens(), x));
                if !nc.is_zero(&v) {
                    rep.fail_with(
                        "base-linear",
                        format!("not linear over the base ring at {}", o.label),
                        vec![format!("r=r{k}@{}", o.label), format!("x=g{x}")],
                        nc.reduce(&v),
                        vec![0; n.ngens()],
                    );
                }
            }
        }
    }
    for (i, a) in ops.iter().enumerate() {
        for b in &ops[i + 1..] {
            for (ka, (p, pt)) in a.source.iter().zip(&a.target).enumerate() {
                for (kb, (q, qt)) in b.source.iter().zip(&b.target).enumerate() {
                    for x in 0..m.ngens() {
                        let v = vecops::unit(m.ngens(), x);
                        let inner = bracket(p, pt, &apply(q, &v));
                        let outer = apply(qt, &bracket(p, pt, &v));
                        let w = vecops::sub(md, &inner, &outer);
                        if !nc.is_zero(&w) {
                            rep.fail_with(
                                "first-order",
                                format!("double commutator at ({}, {}) does not vanish", a.label, b.label),
                                vec![
                                    format!("a={}", generator_label(ka, &a.label)),
                                    format!("b={}", generator_label(kb, &b.label)),
                                    format!("x=g{x}"),
                                ],
                                nc.reduce(&w),
                                vec![0; n.ngens()],
                            );
                        }
                    }
                }
            }
        }
    }
    rep
}

/// Evaluates the double commutators `[[d, P_a], Q_b]` on generators, with the full algebra at every label.
pub fn commutator_check(d: &Mat, m: &Multimodule, n: &Multimodule) -> Result<Report> {
    commutator_check_selected(d, m, n, &m.all_labels())
}

/// Double commutators with the full algebra at the selected labels only.
pub fn commutator_check_selected(
    d: &Mat,
    m: &Multimodule,
    n: &Multimodule,
    selection: &[String],
) -> Result<Report> {
    commutator_check_sigma(d, m, n, &Signature::matching(m, n)?, selection)
}

/// Double commutators of an operator with signature `sig`.
pub fn commutator_check_sigma(
    d: &Mat,
    m: &Multimodule,
    n: &Multimodule,
    sig: &Signature,
    selection: &[String],
) -> Result<Report> {
    if d.rows() != n.ngens() || d.cols() != m.ngens() {
        return Err(Error::DimensionMismatch {
            context: "operator",
            expected: n.ngens() * m.ngens(),
            found: d.rows() * d.cols(),
        });
    }
    let ops = label_ops(m, n, sig, selection)?;
    let mut rep = Report::new();
    let rt = m.carrier().relation_mat().transpose();
    let img = reduce_cols(n.carrier(), &d.mul_unchecked(&rt));
    if !img.is_zero() {
        rep.fail("well-defined", "the operator does not respect the source relations".into());
    }
    rep.merge(commutators(d, &ops, m, n));
    Ok(rep)
}

/// Operators with a general signature, and their correspondence with the twisted target.
#[derive(Debug, Clone)]
pub struct SigmaDiff1 {
    /// Solutions of the conditions written with the signature.
    pub space: Diff1Space,
    /// First-order operators into the twist of the target.
    pub twisted: Diff1Space,
    /// The canonical morphism from the twist to the target.
    pub theta: Morphism,
    /// Matrix `twisted.space x space.space` of `d -> d^sigma`.
    pub bijection: Mat,
}

/// First-order operators with signature `sigma`, with the bijection onto
/// first-order operators into the twisted target.
pub fn diff1_sigma(m: &Multimodule, n: &Multimodule, sigma: &Signature) -> Result<SigmaDiff1> {
    let selection = m.all_labels();
    let space = solve(m, n, sigma.clone(), &selection)?;
    let (tw, theta) = twist(n, sigma)?;
    let twisted = diff1_selected(m, &tw, &selection)?;
    let th = theta.map.clone();
    let mut cols = Vec::new();
    for (i, b) in space.space.basis().iter().enumerate() {
        let f = MapSpace::hom(m.carrier(), tw.carrier())?
            .factor_after(&th, n.carrier(), b)
            .ok_or_else(|| Error::NoSolution(format!("basis operator {i} does not lift")))?;
        if !f.unique {
            return Err(Error::NotInvertible(format!("lift of basis operator {i} is not unique")));
        }
        cols.push(twisted.space.coords(&f.map).ok_or_else(|| {
            Error::NoSolution(format!("lift of basis operator {i} is not first-order"))
        })?);
    }
    let bijection = if cols.is_empty() {
        Mat::zeros(m.modulus(), twisted.rank(), 0)
    } else {
        Mat::from_cols(m.modulus(), twisted.rank(), &cols)?
    };
    let bm = ModuleMap::new(space.space.module().clone(), twisted.space.module().clone(), bijection.clone())?;
    if !bm.is_isomorphism() {
        return Err(Error::NotInvertible("d -> d^sigma is not a bijection".into()));
    }
    Ok(SigmaDiff1 {
        space,
        twisted,
        theta,
        bijection,
    })
}

/// Checks that the base ring of every acting algebra is commutative and lands in its center.
pub fn check_central(m: &Multimodule) -> Result<()> {
    for a in m.actions() {
        let r = base_ring(&a.algebra);
        if !r.is_commutative() {
            return Err(Error::NotRCentral(format!("base ring of {} is not commutative", a.label)));
        }
        for c in base_matrix(&a.algebra).to_cols() {
            if !a.algebra.is_central(&c) {
                return Err(Error::NotRCentral(format!(
                    "base ring of {} is not central in {}",
                    a.label,
                    a.algebra.name()
                )));
            }
        }
    }
    Ok(())
}

/// One action installed on a space of first-order operators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diff1Action {
    pub label: String,
    /// The action of the source or target it comes from.
    pub origin: String,
    /// Whether it acts after the operator (on the target) or before it (on the source).
    pub outer: bool,
}

/// A space of first-order operators with its multimodule structure.
#[derive(Debug, Clone)]
pub struct Diff1Multimodule {
    pub result: Multimodule,
    pub actions: Vec<Diff1Action>,
}

/// Installs the actions on a space of first-order operators.
///
/// Every label acts twice: after the operator through the target, from
/// the same side, and before it through the source, from the other side.
/// Unselected labels act by their whole algebra, selected ones by the base
/// ring only.
pub fn diff1_actions(d: &Diff1Space) -> Result<Diff1Multimodule> {
    check_central(&d.source)?;
    check_central(&d.target)?;
    if d.signature != Signature::matching(&d.source, &d.target)? {
        return Err(Error::Unsupported("actions are installed on identity-signature spaces".into()));
    }
    let taken = d.source.all_labels();
    let mut names = taken.clone();
    let mut actions = Vec::new();
    let mut roles = Vec::new();
    for a in d.source.actions() {
        let t = d.target.action(&a.label)?;
        let (alg, elems): (Algebra, Vec<Vec<u64>>) = if d.is_selected(&a.label) {
            (base_ring(&a.algebra), base_matrix(&a.algebra).to_cols())
        } else {
            (a.algebra.clone(), (0..a.algebra.rank()).map(|k| a.algebra.generator(k)).collect())
        };
        let outer_ops = elems
            .iter()
            .map(|e| {
                let o = t.op(e);
                d.space.induced(|x| o.mul_unchecked(x))
            })
            .collect::<Result<Vec<_>>>()?;
        let inner_ops = elems
            .iter()
            .map(|e| {
                let o = a.op(e);
                d.space.induced(|x| x.mul_unchecked(&o))
            })
            .collect::<Result<Vec<_>>>()?;
        let inner_label = fresh_label(&format!("{}.src", a.label), &names);
        names.push(inner_label.clone());
        actions.push(Action {
            label: a.label.clone(),
            side: a.side,
            algebra: alg.clone(),
            ops: outer_ops,
        });
        roles.push(Diff1Action {
            label: a.label.clone(),
            origin: a.label.clone(),
            outer: true,
        });
        actions.push(Action {
            label: inner_label.clone(),
            side: a.side.flip(),
            algebra: alg,
            ops: inner_ops,
        });
        roles.push(Diff1Action {
            label: inner_label,
            origin: a.label.clone(),
            outer: false,
        });
    }
    let result = Multimodule::new(d.space.module().clone(), actions)?;
    Ok(Diff1Multimodule {
        result,
        actions: roles,
    })
}

/// The inclusion of the operators for a larger selection into those for a smaller one,
/// as a morphism of their multimodule structures.
pub fn diff1_inclusion(larger: &Diff1Space, smaller: &Diff1Space) -> Result<Morphism> {
    if smaller.selection.iter().any(|l| !larger.is_selected(l)) {
        return Err(Error::InclusionViolation("selections are not nested".into()));
    }
    let big = diff1_actions(larger)?;
    let small = diff1_actions(smaller)?;
    let mut entries = Vec::new();
    for (act, role) in big.result.actions().iter().zip(&big.actions) {
        let tgt = small.result.action(&act.label)?;
        let eta = if act.algebra == tgt.algebra {
            AlgebraMap::identity(&act.algebra)
        } else {
            let src = larger.source.action(&role.origin)?;
            AlgebraMap::new(
                act.algebra.clone(),
                tgt.algebra.clone(),
                base_matrix(&src.algebra),
                Variance::Covariant,
            )?
        };
        entries.push(SignatureEntry {
            source: act.label.clone(),
            target: act.label.clone(),
            eta,
            phi: None,
        });
    }
    let map = larger.space.induced_into(&smaller.space, |x| x.clone())?;
    Morphism::new(big.result, small.result, Signature::new(entries), map)
}
