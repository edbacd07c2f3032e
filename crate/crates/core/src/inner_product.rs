//! Inner products on multimodules with involutive algebras, and their Riesz maps.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::conjugation::{AlgebraInvolution, Variance};
use crate::duality::{dual, DualModule, DualSelection, TensorTarget};
use crate::error::{Error, Result};
use crate::mapspace::{Constraint, MapSpace};
use crate::mat::{vecops, Mat};
use crate::module::{FpModule, ModuleMap};
use crate::morphism::{generator_label, Morphism, Signature, SignatureEntry};
use crate::multimodule::{Action, Multimodule};
use crate::report::Report;

/// The shape of one axiom of an inner product at one label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum AxiomKind {
    /// `<a x, y> = a . <x, y>`.
    LinearFirst,
    /// `<x, a y> = a . <x, y>`.
    LinearSecond,
    /// `<a x, y> = a* . <x, y>` with `a*` multiplying from the opposite side.
    StarFirst,
    /// `<x, a y> = a* . <x, y>` with `a*` multiplying from the opposite side.
    StarSecond,
    /// `<a x, y> = <x, a* y>`.
    Balanced,
}

impl AxiomKind {
    pub fn as_str(self) -> &'static str {
        match self {
            AxiomKind::LinearFirst => "linear-first",
            AxiomKind::LinearSecond => "linear-second",
            AxiomKind::StarFirst => "star-first",
            AxiomKind::StarSecond => "star-second",
            AxiomKind::Balanced => "balanced",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Axiom {
    pub kind: AxiomKind,
    pub label: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InnerProductKind {
    /// Linear in the second slot at every selected label.
    Right,
    /// Linear in the first slot at every selected label.
    Left,
    /// Linear in the first slot at some labels and in the second at others.
    General,
}

/// A bi-additive form `M x M -> target` on generator pairs.
///
/// `first_slot` lists the labels where the form is linear in its first
/// argument and `second_slot` those where it is linear in its second; at
/// those labels the other argument is conjugate-linear through the
/// involution. At all remaining labels the form is balanced.
#[derive(Debug, Clone)]
pub struct InnerProduct {
    pub module: Multimodule,
    pub stars: Vec<(String, AlgebraInvolution)>,
    pub first_slot: DualSelection,
    pub second_slot: DualSelection,
    pub target: TensorTarget,
    /// Matrix `target x (g * g)` whose column `i * g + j` is `<g_i, g_j>`.
    pub form: Mat,
}

impl InnerProduct {
    /// A form of the given slot shape; validates shapes, selections and involutions.
    pub fn general(
        module: Multimodule,
        stars: Vec<(String, AlgebraInvolution)>,
        first_slot: DualSelection,
        second_slot: DualSelection,
        form: Mat,
    ) -> Result<Self> {
        first_slot.validate(&module)?;
        second_slot.validate(&module)?;
        if !first_slot.is_plain() || !second_slot.is_plain() {
            return Err(Error::Unsupported("inner products use plain selections".into()));
        }
        if first_slot.labels().iter().any(|l| second_slot.contains(l)) {
            return Err(Error::IndexMismatch("slot selections overlap".into()));
        }
        for a in module.actions() {
            let s = stars
                .iter()
                .find(|(l, _)| *l == a.label)
                .map(|(_, s)| s)
                .ok_or_else(|| Error::MissingInvolution(format!("no involution for {}", a.label)))?;
            if s.algebra() != &a.algebra || s.variance() != Variance::Contravariant {
                return Err(Error::MissingInvolution(format!(
                    "{} needs a contravariant involution of its algebra",
                    a.label
                )));
            }
        }
        let mut factors = Vec::new();
        for l in first_slot.labels().into_iter().chain(second_slot.labels()) {
            let alg = module.action(&l)?.algebra.clone();
            factors.push((l, alg));
        }
        let target = TensorTarget::new(module.modulus(), factors)?;
        let g = module.ngens();
        if form.rows() != target.rank() || form.cols() != g * g {
            return Err(Error::DimensionMismatch {
                context: "inner product form",
                expected: target.rank() * g * g,
                found: form.rows() * form.cols(),
            });
        }
        Ok(InnerProduct {
            module,
            stars,
            first_slot,
            second_slot,
            target,
            form,
        })
    }

    /// A form linear in the second slot at `sel`.
    pub fn right(
        module: Multimodule,
        stars: Vec<(String, AlgebraInvolution)>,
        sel: DualSelection,
        form: Mat,
    ) -> Result<Self> {
        Self::general(module, stars, DualSelection::empty(), sel, form)
    }

    /// A form linear in the first slot at `sel`.
    pub fn left(
        module: Multimodule,
        stars: Vec<(String, AlgebraInvolution)>,
        sel: DualSelection,
        form: Mat,
    ) -> Result<Self> {
        Self::general(module, stars, sel, DualSelection::empty(), form)
    }

    /// Builds the form from a function on generator pairs.
    pub fn form_from_fn(&self, f: impl Fn(usize, usize) -> Vec<u64>) -> Mat {
        form_from_fn(self.module.modulus(), self.target.rank(), self.module.ngens(), f)
    }

    pub fn kind(&self) -> InnerProductKind {
        if self.first_slot.labels().is_empty() {
            InnerProductKind::Right
        } else if self.second_slot.labels().is_empty() {
            InnerProductKind::Left
        } else {
            InnerProductKind::General
        }
    }

    pub fn star(&self, label: &str) -> Result<&AlgebraInvolution> {
        self.stars
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, s)| s)
            .ok_or_else(|| Error::MissingInvolution(format!("no involution for {label}")))
    }

    /// The axioms the form must satisfy, one per kind and label, sorted.
    pub fn axioms(&self) -> Vec<Axiom> {
        let mut out = Vec::new();
        for l in self.module.all_labels() {
            let kinds: &[AxiomKind] = if self.second_slot.contains(&l) {
                &[AxiomKind::LinearSecond, AxiomKind::StarFirst]
            } else if self.first_slot.contains(&l) {
                &[AxiomKind::LinearFirst, AxiomKind::StarSecond]
            } else {
                &[AxiomKind::Balanced]
            };
            for &kind in kinds {
                out.push(Axiom {
                    kind,
                    label: l.clone(),
                });
            }
        }
        out.sort();
        out
    }

    /// `<x, y>` for arbitrary elements.
    pub fn value(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let m = self.module.modulus();
        let g = self.module.ngens();
        let mut out = vec![0u64; self.target.rank()];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                let c = m.mul(xi, yj);
                if c != 0 {
                    out = vecops::add(m, &out, &vecops::scale(m, &self.form.col(i * g + j), c));
                }
            }
        }
        out
    }

    /// Checks well-definedness in both slots and every axiom on generator triples.
    pub fn check(&self) -> Report {
        let mut rep = Report::new();
        let c = self.module.carrier();
        let g = self.module.ngens();
        let md = self.module.modulus();
        for r in c.relation_mat().to_rows() {
            for j in 0..g {
                let u = vecops::unit(g, j);
                for (v, slot) in [(self.value(&r, &u), "first"), (self.value(&u, &r), "second")] {
                    if !vecops::is_zero(&v) {
                        rep.fail_with(
                            "well-defined",
                            format!("a relation is not annihilated in the {slot} slot"),
                            vec![format!("relation={r:?}"), format!("g{j}")],
                            v,
                            vec![0; self.target.rank()],
                        );
                    }
                }
            }
        }
        for ax in self.axioms() {
            let act = self.module.action(&ax.label).expect("validated");
            let star = self.star(&ax.label).expect("validated");
            for k in 0..act.algebra.rank() {
                let e = act.algebra.generator(k);
                let op = act.op(&e);
                let se = star.apply(&e);
                let outer = || self.target.mul(act.side, &ax.label, &e).expect("selected");
                let inner = || self.target.mul(act.side.flip(), &ax.label, &se).expect("selected");
                for i in 0..g {
                    for j in 0..g {
                        let (x, y) = (vecops::unit(g, i), vecops::unit(g, j));
                        let ax_ = c.reduce(&op.apply(&x));
                        let ay = c.reduce(&op.apply(&y));
                        let base = || self.value(&x, &y);
                        let (lhs, rhs) = match ax.kind {
                            AxiomKind::LinearFirst => (self.value(&ax_, &y), outer().apply(&base())),
                            AxiomKind::LinearSecond => (self.value(&x, &ay), outer().apply(&base())),
                            AxiomKind::StarFirst => (self.value(&ax_, &y), inner().apply(&base())),
                            AxiomKind::StarSecond => (self.value(&x, &ay), inner().apply(&base())),
                            AxiomKind::Balanced => {
                                let sy = c.reduce(&act.op(&se).apply(&y));
                                (self.value(&ax_, &y), self.value(&x, &sy))
                            }
                        };
                        let (lhs, rhs) = (reduce(md, &lhs), reduce(md, &rhs));
                        if lhs != rhs {
                            rep.fail_with(
                                ax.kind.as_str(),
                                format!("{} fails at {}", ax.kind.as_str(), ax.label),
                                vec![
                                    format!("a={}", generator_label(k, &ax.label)),
                                    format!("x=g{i}"),
                                    format!("y=g{j}"),
                                ],
                                lhs,
                                rhs,
                            );
                        }
                    }
                }
            }
        }
        rep
    }

    /// The involution of the target, factorwise.
    pub fn target_star(&self) -> Result<Mat> {
        let md = self.module.modulus();
        let mut s = Mat::identity(md, 1);
        for (l, _) in self.target.factors() {
            s = s.kron(self.star(l)?.map());
        }
        Ok(s)
    }

    fn with_form(&self, form: Mat, swap: bool) -> InnerProduct {
        let (first_slot, second_slot) = if swap {
            (self.second_slot.clone(), self.first_slot.clone())
        } else {
            (self.first_slot.clone(), self.second_slot.clone())
        };
        InnerProduct {
            module: self.module.clone(),
            stars: self.stars.clone(),
            first_slot,
            second_slot,
            target: self.target.clone(),
            form,
        }
    }

    fn swapped_form(&self) -> Mat {
        let g = self.module.ngens();
        let order: Vec<usize> = (0..g * g).map(|c| (c % g) * g + c / g).collect();
        self.form.select_cols(&order)
    }

    /// `(x, y) -> <y, x>`.
    pub fn transpose(&self) -> InnerProduct {
        self.with_form(self.swapped_form(), true)
    }

    /// `(x, y) -> <x, y>*`.
    pub fn conjugate(&self) -> Result<InnerProduct> {
        Ok(self.with_form(self.target_star()?.mul(&self.form)?, true))
    }

    /// `(x, y) -> <y, x>*`.
    pub fn adjoint(&self) -> Result<InnerProduct> {
        Ok(self.with_form(self.target_star()?.mul(&self.swapped_form())?, false))
    }

    pub fn is_hermitian(&self) -> Result<bool> {
        Ok(self.adjoint()?.form == self.form)
    }
}

fn reduce(m: crate::zn::Modulus, v: &[u64]) -> Vec<u64> {
    v.iter().map(|&x| m.reduce(x)).collect()
}

/// A form matrix from its values on generator pairs.
pub fn form_from_fn(
    modulus: crate::zn::Modulus,
    t: usize,
    g: usize,
    f: impl Fn(usize, usize) -> Vec<u64>,
) -> Mat {
    let mut form = Mat::zeros(modulus, t, g * g);
    for i in 0..g {
        for j in 0..g {
            for (r, v) in f(i, j).into_iter().enumerate() {
                form.set(r, i * g + j, modulus.reduce(v));
            }
        }
    }
    form
}

/// The Riesz maps of a right inner product.
#[derive(Debug, Clone)]
pub struct RieszMaps {
    /// The dual at the second-slot selection.
    pub dual: DualModule,
    /// `x -> <x, .>`, contravariant into the dual.
    pub forward: Morphism,
    /// Maps conjugate-linear at the selection, with the twisted actions.
    pub twisted: Multimodule,
    pub twisted_space: MapSpace,
    /// `y -> <., y>`, covariant into the twisted dual.
    pub backward: Morphism,
}

fn map_of(ip: &InnerProduct, fixed: usize, first: bool) -> Result<Mat> {
    let g = ip.module.ngens();
    let t = ip.target.rank();
    let cols: Vec<Vec<u64>> = (0..g)
        .map(|k| {
            let c = if first { fixed * g + k } else { k * g + fixed };
            ip.form.col(c)
        })
        .collect();
    if cols.is_empty() {
        return Ok(Mat::zeros(ip.module.modulus(), t, 0));
    }
    Mat::from_cols(ip.module.modulus(), t, &cols)
}

fn cols_or_zero(m: crate::zn::Modulus, rows: usize, cols: &[Vec<u64>]) -> Result<Mat> {
    if cols.is_empty() {
        return Ok(Mat::zeros(m, rows, 0));
    }
    Mat::from_cols(m, rows, cols)
}

/// The Riesz maps of a right inner product; a left one is handled through its transpose.
///
/// The twisted dual consists of maps `psi` with `psi(a x) = a* . psi(x)` at
/// the selected labels. A selected label acts on it by multiplying the
/// target factor from the side of the original action, and an unselected
/// label by `(a . psi)(x) = psi(a* x)`.
pub fn riesz(ip: &InnerProduct) -> Result<RieszMaps> {
    match ip.kind() {
        InnerProductKind::Right => {}
        InnerProductKind::Left => return riesz(&ip.transpose()),
        InnerProductKind::General => {
            return Err(Error::Unsupported(
                "Riesz maps are built for right or left inner products".into(),
            ))
        }
    }
    let m = &ip.module;
    let md = m.modulus();
    let sel = &ip.second_slot;
    let d = dual(m, sel)?;
    if d.target != ip.target {
        return Err(Error::IndexMismatch("dual target differs from the form target".into()));
    }
    let mut cols = Vec::with_capacity(m.ngens());
    for i in 0..m.ngens() {
        let x = map_of(ip, i, true)?;
        cols.push(d.space.coords(&x).ok_or_else(|| {
            Error::NotWellDefined(format!("<g{i}, .> is not in the dual"))
        })?);
    }
    let fmat = cols_or_zero(md, d.result.ngens(), &cols)?;
    let mut entries = Vec::new();
    for a in m.actions() {
        let s = ip.star(&a.label)?;
        entries.push(SignatureEntry {
            source: a.label.clone(),
            target: a.label.clone(),
            eta: s.as_map(),
            phi: Some(s.over().map().clone()).filter(|p| *p != Mat::identity(md, p.rows())),
        });
    }
    let forward = Morphism::new(m.clone(), d.result.clone(), Signature::new(entries), fmat)?;

    let tgt = &ip.target;
    let mut pairs: Vec<(Mat, Mat)> = Vec::new();
    for l in sel.labels() {
        let a = m.action(&l)?;
        let s = ip.star(&l)?;
        for (k, op) in a.ops.iter().enumerate() {
            let t = tgt.mul(a.side.flip(), &l, &s.apply(&a.algebra.generator(k)))?;
            pairs.push((op.clone(), t));
        }
    }
    let closures: Vec<_> = pairs
        .iter()
        .map(|(s, t)| move |x: &Mat| x.mul_unchecked(s).sub(&t.mul_unchecked(x)).expect("shapes"))
        .collect();
    let cons: Vec<Constraint<'_>> = closures.iter().map(|c| c as Constraint<'_>).collect();
    let space = MapSpace::constrained(m.carrier(), &tgt.module(), &cons)?;
    let mut actions = Vec::new();
    for a in m.actions() {
        let s = ip.star(&a.label)?;
        let ops = (0..a.algebra.rank())
            .map(|k| {
                let e = a.algebra.generator(k);
                if sel.contains(&a.label) {
                    let t = tgt.mul(a.side, &a.label, &e)?;
                    space.induced(|x| t.mul_unchecked(x))
                } else {
                    let o = a.op(&s.apply(&e));
                    space.induced(|x| x.mul_unchecked(&o))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        actions.push(Action {
            label: a.label.clone(),
            side: a.side,
            algebra: a.algebra.clone(),
            ops,
        });
    }
    let twisted = Multimodule::new(space.module().clone(), actions)?;
    let mut cols = Vec::with_capacity(m.ngens());
    for j in 0..m.ngens() {
        let y = map_of(ip, j, false)?;
        cols.push(space.coords(&y).ok_or_else(|| {
            Error::NotWellDefined(format!("<., g{j}> is not in the twisted dual"))
        })?);
    }
    let bmat = cols_or_zero(md, twisted.ngens(), &cols)?;
    let backward = Morphism::new(m.clone(), twisted.clone(), Signature::matching(m, &twisted)?, bmat)?;
    Ok(RieszMaps {
        dual: d,
        forward,
        twisted,
        twisted_space: space,
        backward,
    })
}

/// The non-degeneracy, fullness and saturation flags of an inner product.
#[derive(Debug, Clone)]
pub struct Classification {
    pub nondegenerate: bool,
    pub full: bool,
    pub saturated: bool,
    /// Generators of the kernel of the forward Riesz map, in carrier coordinates.
    pub forward_kernel: Vec<Vec<u64>>,
    /// Generators of the kernel of the backward Riesz map.
    pub backward_kernel: Vec<Vec<u64>>,
    /// The inverse of the forward Riesz map when it is bijective.
    pub inverse: Option<Mat>,
}

pub fn classify(ip: &InnerProduct) -> Result<Classification> {
    let r = riesz(ip)?;
    let f = r.forward.module_map()?;
    let b = r.backward.module_map()?;
    let kernel_gens = |h: &ModuleMap| -> Vec<Vec<u64>> {
        let (_, inc) = h.kernel();
        inc.matrix()
            .to_cols()
            .into_iter()
            .map(|v| h.source().reduce(&v))
            .filter(|v| !vecops::is_zero(v))
            .collect()
    };
    let forward_kernel = kernel_gens(&f);
    let backward_kernel = kernel_gens(&b);
    let nondegenerate = f.is_injective() && b.is_injective();
    let saturated = f.is_surjective() && b.is_surjective();
    let t = FpModule::free(ip.module.modulus(), ip.target.rank());
    let full = t.quotient(&ip.form.to_cols())?.module.is_trivial();
    let inverse = if f.is_isomorphism() {
        Some(f.inverse()?.matrix().clone())
    } else {
        None
    };
    Ok(Classification {
        nondegenerate,
        full,
        saturated,
        forward_kernel,
        backward_kernel,
        inverse,
    })
}
