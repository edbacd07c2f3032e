//! Multimodules: a carrier with several commuting algebra actions.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::howell::Howell;
use crate::mat::Mat;
use crate::module::{FpModule, ModuleMap};
use crate::report::Report;
use crate::zn::Modulus;

/// The side an algebra acts from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

/// One labeled action: the operator of every algebra generator on the carrier.
///
/// For a right action the operator of `b` is `x -> x . b`, so products
/// compose in reverse: `op(a b) = op(b) op(a)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Action {
    pub label: String,
    pub side: Side,
    pub algebra: Algebra,
    pub ops: Vec<Mat>,
}

impl Action {
    /// Operator of an arbitrary algebra element.
    pub fn op(&self, a: &[u64]) -> Mat {
        let m = self.algebra.modulus();
        let g = self.ops.first().map_or(0, |o| o.rows());
        let mut out = Mat::zeros(m, g, g);
        for (o, &c) in self.ops.iter().zip(a) {
            if c != 0 {
                out.add_scaled(o, c);
            }
        }
        out
    }
}

/// A finitely presented Z/n-module with labeled left and right algebra actions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multimodule {
    carrier: FpModule,
    actions: Vec<Action>,
}

impl Multimodule {
    /// Assembles a multimodule, checking labels and shapes.
    ///
    /// The axioms are checked separately by [`Multimodule::check`].
    pub fn new(carrier: FpModule, actions: Vec<Action>) -> Result<Self> {
        let g = carrier.ngens();
        for (i, a) in actions.iter().enumerate() {
            if actions[..i].iter().any(|b| b.label == a.label) {
                return Err(Error::DuplicateLabel(a.label.clone()));
            }
            if a.algebra.modulus() != carrier.modulus() {
                return Err(Error::ModulusMismatch {
                    left: carrier.modulus().value(),
                    right: a.algebra.modulus().value(),
                });
            }
            if a.ops.len() != a.algebra.rank() {
                return Err(Error::DimensionMismatch {
                    context: "action operators",
                    expected: a.algebra.rank(),
                    found: a.ops.len(),
                });
            }
            for o in &a.ops {
                if o.rows() != g || o.cols() != g {
                    return Err(Error::DimensionMismatch {
                        context: "action operator",
                        expected: g,
                        found: o.rows().max(o.cols()),
                    });
                }
            }
        }
        Ok(Multimodule { carrier, actions })
    }

    /// A multimodule without actions.
    pub fn plain(carrier: FpModule) -> Self {
        Multimodule {
            carrier,
            actions: Vec::new(),
        }
    }

    /// An algebra acting on itself from the left (label `left`) and right (label `right`).
    pub fn regular(a: &Algebra, left: &str, right: &str) -> Result<Self> {
        let carrier = FpModule::free(a.modulus(), a.rank());
        Self::new(
            carrier,
            vec![
                Action {
                    label: left.to_string(),
                    side: Side::Left,
                    algebra: a.clone(),
                    ops: a.left_ops(),
                },
                Action {
                    label: right.to_string(),
                    side: Side::Right,
                    algebra: a.clone(),
                    ops: a.right_ops(),
                },
            ],
        )
    }

    /// An algebra acting on itself from the left only.
    pub fn left_regular(a: &Algebra, label: &str) -> Result<Self> {
        let carrier = FpModule::free(a.modulus(), a.rank());
        Self::new(
            carrier,
            vec![Action {
                label: label.to_string(),
                side: Side::Left,
                algebra: a.clone(),
                ops: a.left_ops(),
            }],
        )
    }

    /// An algebra acting on itself from the right only.
    pub fn right_regular(a: &Algebra, label: &str) -> Result<Self> {
        let carrier = FpModule::free(a.modulus(), a.rank());
        Self::new(
            carrier,
            vec![Action {
                label: label.to_string(),
                side: Side::Right,
                algebra: a.clone(),
                ops: a.right_ops(),
            }],
        )
    }

    pub fn carrier(&self) -> &FpModule {
        &self.carrier
    }

    pub fn modulus(&self) -> Modulus {
        self.carrier.modulus()
    }

    pub fn ngens(&self) -> usize {
        self.carrier.ngens()
    }

    pub fn actions(&self) -> &[Action] {
        &self.actions
    }

    pub fn action(&self, label: &str) -> Result<&Action> {
        self.actions
            .iter()
            .find(|a| a.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn has_label(&self, label: &str) -> bool {
        self.actions.iter().any(|a| a.label == label)
    }

    /// Labels of the actions on one side, in declaration order.
    pub fn labels(&self, side: Side) -> Vec<String> {
        self.actions
            .iter()
            .filter(|a| a.side == side)
            .map(|a| a.label.clone())
            .collect()
    }

    pub fn all_labels(&self) -> Vec<String> {
        self.actions.iter().map(|a| a.label.clone()).collect()
    }

    /// `a ._label x`, reduced.
    pub fn act(&self, label: &str, a: &[u64], x: &[u64]) -> Result<Vec<u64>> {
        let act = self.action(label)?;
        Ok(self.carrier.reduce(&act.op(a).apply(x)))
    }

    /// The same carrier with different actions.
    pub fn with_actions(&self, actions: Vec<Action>) -> Result<Self> {
        Self::new(self.carrier.clone(), actions)
    }

    /// Renames one action.
    pub fn relabel(&self, from: &str, to: &str) -> Result<Self> {
        self.action(from)?;
        let actions = self
            .actions
            .iter()
            .cloned()
            .map(|mut a| {
                if a.label == from {
                    a.label = to.to_string();
                }
                a
            })
            .collect();
        Self::new(self.carrier.clone(), actions)
    }

    /// Keeps only the named actions.
    pub fn restrict_to(&self, labels: &[String]) -> Result<Self> {
        for l in labels {
            self.action(l)?;
        }
        let actions = self
            .actions
            .iter()
            .filter(|a| labels.contains(&a.label))
            .cloned()
            .collect();
        Self::new(self.carrier.clone(), actions)
    }

    /// Checks that actions are well defined, unital, associative and pairwise commuting.
    pub fn check(&self) -> Report {
        let mut rep = Report::new();
        let c = &self.carrier;
        let g = c.ngens();
        let rels = c.relation_mat().to_rows();
        for act in &self.actions {
            let l = &act.label;
            for (i, o) in act.ops.iter().enumerate() {
                for r in &rels {
                    let img = o.apply(r);
                    if !c.is_zero(&img) {
                        rep.fail_with(
                            "well-defined",
                            format!("e{i}@{l} does not preserve the relations"),
                            vec![format!("a=e{i}@{l}"), format!("relation={r:?}")],
                            c.reduce(&img),
                            vec![0; g],
                        );
                    }
                }
            }
            let unit = act.op(act.algebra.unit());
            for x in 0..g {
                let gx = c.generator(x);
                let lhs = unit.apply(&gx);
                if !c.eq_elems(&lhs, &gx) {
                    rep.fail_with(
                        "unital",
                        format!("1@{l} moves g{x}"),
                        vec![format!("a=1@{l}"), format!("x=g{x}")],
                        c.reduce(&lhs),
                        gx,
                    );
                }
            }
            let r = act.algebra.rank();
            for i in 0..r {
                for j in 0..r {
                    let prod = act.op(act.algebra.product(i, j));
                    let (p, q) = (&act.ops[i], &act.ops[j]);
                    let seq = match act.side {
                        Side::Left => p.mul_unchecked(q),
                        Side::Right => q.mul_unchecked(p),
                    };
                    for x in 0..g {
                        let gx = c.generator(x);
                        let lhs = prod.apply(&gx);
                        let rhs = seq.apply(&gx);
                        if !c.eq_elems(&lhs, &rhs) {
                            rep.fail_with(
                                "associative",
                                format!("(e{i}e{j})@{l} differs from acting in turn on g{x}"),
                                vec![format!("a=e{i}@{l}"), format!("b=e{j}@{l}"), format!("x=g{x}")],
                                c.reduce(&lhs),
                                c.reduce(&rhs),
                            );
                        }
                    }
                }
            }
        }
        for (k, s) in self.actions.iter().enumerate() {
            for t in &self.actions[k + 1..] {
                for (i, p) in s.ops.iter().enumerate() {
                    for (j, q) in t.ops.iter().enumerate() {
                        for x in 0..g {
                            let gx = c.generator(x);
                            let lhs = p.apply(&q.apply(&gx));
                            let rhs = q.apply(&p.apply(&gx));
                            if !c.eq_elems(&lhs, &rhs) {
                                rep.fail_with(
                                    "commutation",
                                    format!("actions {} and {} do not commute", s.label, t.label),
                                    vec![
                                        format!("a=e{i}@{}", s.label),
                                        format!("x=g{x}"),
                                        format!("b=e{j}@{}", t.label),
                                    ],
                                    c.reduce(&lhs),
                                    c.reduce(&rhs),
                                );
                            }
                        }
                    }
                }
            }
        }
        rep
    }

    /// The span of `vectors` together with the carrier relations, as a Howell form.
    fn span(&self, vectors: &[Vec<u64>]) -> Howell {
        let rels = self.carrier.relation_mat().to_rows();
        Howell::new(
            self.modulus(),
            self.ngens(),
            rels.into_iter().chain(vectors.iter().cloned()),
        )
    }

    /// Whether the span of `vectors` is stable under every action.
    pub fn is_stable(&self, vectors: &[Vec<u64>]) -> bool {
        let h = self.span(vectors);
        vectors.iter().all(|v| {
            self.actions
                .iter()
                .all(|a| a.ops.iter().all(|o| h.contains(&o.apply(v))))
        })
    }

    /// The smallest action-stable submodule containing `seed`, with its inclusion.
    pub fn submodule_closure(&self, seed: &[Vec<u64>]) -> Result<(Multimodule, ModuleMap)> {
        for v in seed {
            if v.len() != self.ngens() {
                return Err(Error::DimensionMismatch {
                    context: "seed element",
                    expected: self.ngens(),
                    found: v.len(),
                });
            }
        }
        let mut gens: Vec<Vec<u64>> = seed.to_vec();
        let mut frontier = gens.clone();
        let mut h = self.span(&gens);
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for v in &frontier {
                for a in &self.actions {
                    for o in &a.ops {
                        let w = o.apply(v);
                        if !h.contains(&w) {
                            gens.push(w.clone());
                            h = self.span(&gens);
                            next.push(w);
                        }
                    }
                }
            }
            frontier = next;
        }
        let (sub, inc) = self.carrier.submodule(&gens)?;
        let actions = self.induced_actions(&sub, &inc)?;
        Ok((Multimodule::new(sub, actions)?, inc))
    }

    fn induced_actions(&self, sub: &FpModule, inc: &ModuleMap) -> Result<Vec<Action>> {
        let m = self.modulus();
        let k = sub.ngens();
        let mut actions = Vec::with_capacity(self.actions.len());
        for a in &self.actions {
            let mut ops = Vec::with_capacity(a.ops.len());
            for o in &a.ops {
                let mut cols = Vec::with_capacity(k);
                for j in 0..k {
                    let y = o.apply(&inc.matrix().col(j));
                    let pre = inc.preimage(&y).ok_or_else(|| {
                        Error::NotStable(format!("action {} leaves the submodule", a.label))
                    })?;
                    cols.push(sub.reduce(&pre));
                }
                ops.push(Mat::from_cols(m, k, &cols)?);
            }
            actions.push(Action {
                label: a.label.clone(),
                side: a.side,
                algebra: a.algebra.clone(),
                ops,
            });
        }
        Ok(actions)
    }

    /// The quotient by an action-stable submodule, with the projection matrix.
    pub fn quotient(&self, sub: &[Vec<u64>]) -> Result<(Multimodule, ModuleMap)> {
        if !self.is_stable(sub) {
            return Err(Error::NotStable("submodule is not closed under the actions".into()));
        }
        let pres = self.carrier.quotient(sub)?;
        let actions = self
            .actions
            .iter()
            .map(|a| Action {
                label: a.label.clone(),
                side: a.side,
                algebra: a.algebra.clone(),
                ops: a
                    .ops
                    .iter()
                    .map(|o| {
                        let full = pres.projection.mul_unchecked(o).mul_unchecked(&pres.section);
                        reduce_cols(&pres.module, &full)
                    })
                    .collect(),
            })
            .collect();
        let proj = ModuleMap::new(self.carrier.clone(), pres.module.clone(), pres.projection)?;
        Ok((Multimodule::new(pres.module, actions)?, proj))
    }

    /// Generator names used in witnesses.
    pub fn generator_name(i: usize) -> String {
        format!("g{i}")
    }
}

/// Reduces every column of a matrix against the module relations.
pub fn reduce_cols(module: &FpModule, x: &Mat) -> Mat {
    let cols: Vec<Vec<u64>> = (0..x.cols()).map(|j| module.reduce(&x.col(j))).collect();
    if cols.is_empty() {
        return x.clone();
    }
    Mat::from_cols(x.modulus(), x.rows(), &cols).expect("same shape")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(n: u64) -> Modulus {
        Modulus::new(n).unwrap()
    }

    #[test]
    fn regular_bimodule_is_valid() {
        for a in [
            Algebra::upper_triangular(m(3)),
            Algebra::dual_numbers(m(4)),
            Algebra::matrices2(m(2)),
        ] {
            let r = Multimodule::regular(&a, "L", "R").unwrap();
            assert!(r.check().holds(), "{}", r.check());
        }
    }

    #[test]
    fn swapped_right_action_breaks_commutation() {
        let t = Algebra::upper_triangular(m(3));
        let mut r = Multimodule::regular(&t, "L", "R").unwrap();
        r.actions[1].ops = t.left_ops();
        let rep = r.check();
        assert!(rep.has_law("commutation"));
        let w = rep
            .violations
            .iter()
            .find(|v| v.law == "commutation")
            .unwrap()
            .witness
            .clone()
            .unwrap();
        assert_eq!(w.generators.len(), 3);
        assert_ne!(w.lhs, w.rhs);
    }

    #[test]
    fn closure_of_two_in_z4() {
        let z = Algebra::scalars(m(4));
        let r = Multimodule::regular(&z, "L", "R").unwrap();
        let (s, _) = r.submodule_closure(&[vec![2]]).unwrap();
        assert_eq!(s.carrier().order(), Some(2));
        let (q, p) = r.quotient(&[vec![2]]).unwrap();
        assert_eq!(q.carrier().order(), Some(2));
        assert!(q.check().holds());
        assert!(p.is_surjective());
    }

    #[test]
    fn duplicate_labels_rejected() {
        let z = Algebra::scalars(m(4));
        assert!(matches!(
            Multimodule::regular(&z, "L", "L"),
            Err(Error::DuplicateLabel(_))
        ));
    }
}
