//! Duals of multimodules, evaluation maps, semi-adjunctions and global duals.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::Algebra;
use crate::conjugation::{base_ring, gamma_conjugate, AlgebraMap, Conjugation};
use crate::constructions::{fresh_label, MAX_RANK};
use crate::error::{Error, Result};
use crate::mapspace::{Constraint, MapSpace};
use crate::mat::{vecops, Mat};
use crate::module::{FpModule, ModuleMap};
use crate::morphism::{equivariant_space, Morphism, Signature, SignatureEntry};
use crate::multimodule::{Action, Multimodule, Side};
use crate::report::Report;
use crate::zn::Modulus;

/// The tensor product over Z/n of the algebras acting at the selected labels.
///
/// Factors are sorted by label, so two selections with the same labels and
/// algebras give equal targets. With no factors the target is Z/n itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorTarget {
    modulus: Modulus,
    factors: Vec<(String, Algebra)>,
    rank: usize,
}

impl TensorTarget {
    pub fn new(modulus: Modulus, mut factors: Vec<(String, Algebra)>) -> Result<Self> {
        factors.sort_by(|a, b| a.0.cmp(&b.0));
        let mut rank: usize = 1;
        for (i, (l, a)) in factors.iter().enumerate() {
            if i > 0 && factors[i - 1].0 == *l {
                return Err(Error::DuplicateLabel(l.clone()));
            }
            if a.modulus() != modulus {
                return Err(Error::ModulusMismatch {
                    left: modulus.value(),
                    right: a.modulus().value(),
                });
            }
            rank = rank
                .checked_mul(a.rank())
                .filter(|&r| r <= MAX_RANK)
                .ok_or_else(|| Error::SizeOverflow("dual target too large".into()))?;
        }
        Ok(TensorTarget {
            modulus,
            factors,
            rank,
        })
    }

    pub fn factors(&self) -> &[(String, Algebra)] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn module(&self) -> FpModule {
        FpModule::free(self.modulus, self.rank)
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.factors.iter().position(|(l, _)| l == label)
    }

    fn split(&self, k: usize) -> (usize, usize) {
        let pre = self.factors[..k].iter().map(|(_, a)| a.rank()).product();
        let post = self.factors[k + 1..].iter().map(|(_, a)| a.rank()).product();
        (pre, post)
    }

    /// Multiplication by `a` on the factor `label`, from the given side.
    pub fn mul(&self, side: Side, label: &str, a: &[u64]) -> Result<Mat> {
        let k = self
            .position(label)
            .ok_or_else(|| Error::UnknownLabel(label.into()))?;
        let alg = &self.factors[k].1;
        let base = match side {
            Side::Left => alg.left_matrix(a),
            Side::Right => alg.right_matrix(a),
        };
        let (pre, post) = self.split(k);
        Ok(base.embed_factor(pre, post))
    }

    /// Matrix `self x smaller` inserting units at the factors missing from `smaller`.
    pub fn pad_from(&self, smaller: &TensorTarget) -> Result<Mat> {
        for (l, a) in &smaller.factors {
            match self.position(l) {
                Some(k) if self.factors[k].1 == *a => {}
                Some(_) => return Err(Error::AlgebraMismatch(format!("factor {l} differs"))),
                None => {
                    return Err(Error::InclusionViolation(format!(
                        "factor {l} is missing from the larger target"
                    )))
                }
            }
        }
        let m = self.modulus;
        let dims: Vec<usize> = smaller.factors.iter().map(|(_, a)| a.rank()).collect();
        let mut cols = Vec::with_capacity(smaller.rank);
        for j in 0..smaller.rank {
            let mut idx = vec![0usize; dims.len()];
            let mut r = j;
            for p in (0..dims.len()).rev() {
                idx[p] = r % dims[p];
                r /= dims[p];
            }
            let mut v = vec![1u64];
            for (l, a) in &self.factors {
                let piece = match smaller.position(l) {
                    Some(p) => vecops::unit(a.rank(), idx[p]),
                    None => a.unit().to_vec(),
                };
                v = vecops::kron(m, &v, &piece);
            }
            cols.push(v);
        }
        Mat::from_cols(m, self.rank, &cols)
    }
}

/// The indexes at which dual maps are linear, with optional conjugations.
///
/// `left` names left actions and `right` names right actions of the
/// multimodule being dualized. A conjugation at a label replaces the
/// algebra of that target factor by its conjugate.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DualSelection {
    pub left: Vec<String>,
    pub right: Vec<String>,
    pub conjugations: Vec<(String, Conjugation)>,
}

fn subset(a: &[String], b: &[String]) -> bool {
    a.iter().all(|x| b.contains(x))
}

impl DualSelection {
    pub fn new(left: &[&str], right: &[&str]) -> Self {
        DualSelection {
            left: left.iter().map(|s| String::from(*s)).collect(),
            right: right.iter().map(|s| String::from(*s)).collect(),
            conjugations: Vec::new(),
        }
    }

    pub fn empty() -> Self {
        DualSelection::default()
    }

    /// Every action of `m` selected.
    pub fn full(m: &Multimodule) -> Self {
        DualSelection {
            left: m.labels(Side::Left),
            right: m.labels(Side::Right),
            conjugations: Vec::new(),
        }
    }

    pub fn with_conjugation(mut self, label: &str, c: Conjugation) -> Self {
        self.conjugations.retain(|(l, _)| l != label);
        self.conjugations.push((label.into(), c));
        self
    }

    /// The same labels seen from the dual, where the sides are exchanged.
    pub fn swapped(&self) -> Self {
        DualSelection {
            left: self.right.clone(),
            right: self.left.clone(),
            conjugations: self.conjugations.clone(),
        }
    }

    pub fn contains(&self, label: &str) -> bool {
        self.left.iter().chain(&self.right).any(|l| l == label)
    }

    pub fn labels(&self) -> Vec<String> {
        self.left.iter().chain(&self.right).cloned().collect()
    }

    pub fn is_plain(&self) -> bool {
        self.conjugations.is_empty()
    }

    pub fn conjugation(&self, label: &str) -> Option<&Conjugation> {
        self.conjugations
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, c)| c)
    }

    /// Whether `self` selects a subset of the labels of `other` on each side.
    pub fn is_within(&self, other: &DualSelection) -> bool {
        subset(&self.left, &other.left) && subset(&self.right, &other.right)
    }

    /// Whether both selections name the same labels on each side.
    pub fn same_labels(&self, other: &DualSelection) -> bool {
        self.is_within(other) && other.is_within(self)
    }

    pub fn validate(&self, m: &Multimodule) -> Result<()> {
        for (labels, side) in [(&self.left, Side::Left), (&self.right, Side::Right)] {
            for (i, l) in labels.iter().enumerate() {
                let a = m.action(l)?;
                if a.side != side {
                    return Err(Error::IndexMismatch(format!(
                        "{l} is a {} action, selected as {}",
                        a.side.as_str(),
                        side.as_str()
                    )));
                }
                if labels[..i].contains(l) {
                    return Err(Error::DuplicateLabel(l.clone()));
                }
            }
        }
        for (l, c) in &self.conjugations {
            if !self.contains(l) {
                return Err(Error::IndexMismatch(format!("conjugation at unselected {l}")));
            }
            if *c.algebra() != base_ring(&m.action(l)?.algebra) {
                return Err(Error::AlgebraMismatch(format!(
                    "conjugation at {l} is not on the base ring"
                )));
            }
        }
        Ok(())
    }
}

/// How an action of a dual arises from the dualized multimodule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    /// Multiplication on a target factor, opposite to the linearity side.
    Bullet,
    /// Precomposition with an action of the source.
    Odot,
    /// Multiplication on a target factor from the side of the source action.
    Outer,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Bullet => "bullet",
            Role::Odot => "odot",
            Role::Outer => "outer",
        }
    }
}

/// One action of a dual: its role, the source label it comes from, and its own label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualAction {
    pub role: Role,
    pub origin: String,
    pub label: String,
}

/// A dual multimodule with its maps realized as matrices into the target.
///
/// The carrier is the space of maps `M -> target` that are linear at the
/// `inner` selection. The target has one factor per label of `outer`.
/// For an ordinary dual `inner` and `outer` agree.
#[derive(Debug, Clone)]
pub struct DualModule {
    pub result: Multimodule,
    /// Generator `i` of the carrier is the map `space.basis()[i]`.
    pub space: MapSpace,
    pub target: TensorTarget,
    pub inner: DualSelection,
    pub outer: DualSelection,
    pub roles: Vec<DualAction>,
}

impl DualModule {
    /// The map with the given coordinates.
    pub fn map(&self, phi: &[u64]) -> Mat {
        self.space.element(phi)
    }

    /// The pairing `(phi, x) -> phi(x)`.
    pub fn tau(&self, phi: &[u64], x: &[u64]) -> Vec<u64> {
        let m = self.target.modulus;
        self.space
            .element(phi)
            .apply(x)
            .iter()
            .map(|&v| m.reduce(v))
            .collect()
    }

    pub fn label_of(&self, role: Role, origin: &str) -> Option<&str> {
        self.roles
            .iter()
            .find(|r| r.role == role && r.origin == origin)
            .map(|r| r.label.as_str())
    }

    pub fn role_of(&self, label: &str) -> Option<&DualAction> {
        self.roles.iter().find(|r| r.label == label)
    }
}

fn build(m: &Multimodule, inner: &DualSelection, outer: &DualSelection) -> Result<DualModule> {
    inner.validate(m)?;
    outer.validate(m)?;
    if !inner.is_within(outer) {
        return Err(Error::InclusionViolation(
            "inner selection is not contained in the outer one".into(),
        ));
    }
    for (l, c) in &inner.conjugations {
        if outer.conjugation(l) != Some(c) {
            return Err(Error::IndexMismatch(format!(
                "conjugation at {l} differs between the selections"
            )));
        }
    }
    let mut factors = Vec::new();
    let mut etas: Vec<(String, AlgebraMap)> = Vec::new();
    for l in outer.labels() {
        let a = m.action(&l)?;
        let (alg, eta) = match outer.conjugation(&l) {
            Some(g) => gamma_conjugate(&a.algebra, g)?,
            None => (a.algebra.clone(), AlgebraMap::identity(&a.algebra)),
        };
        factors.push((l.clone(), alg));
        etas.push((l, eta));
    }
    let target = TensorTarget::new(m.modulus(), factors)?;
    if target.rank().saturating_mul(m.ngens()) > MAX_RANK {
        return Err(Error::SizeOverflow("dual map space too large".into()));
    }
    let eta_of = |l: &str| &etas.iter().find(|(k, _)| k == l).expect("selected").1;
    let mul_side = |a: &Action, eta: &AlgebraMap| {
        if eta.variance().is_covariant() {
            a.side
        } else {
            a.side.flip()
        }
    };

    let mut pairs: Vec<(Mat, Mat)> = Vec::new();
    for l in inner.labels() {
        let a = m.action(&l)?;
        let eta = eta_of(&l);
        let side = mul_side(a, eta);
        for (i, op) in a.ops.iter().enumerate() {
            let t = target.mul(side, &l, &eta.apply(&a.algebra.generator(i)))?;
            pairs.push((op.clone(), t));
        }
    }
    let closures: Vec<_> = pairs
        .iter()
        .map(|(s, t)| move |x: &Mat| x.mul_unchecked(s).sub(&t.mul_unchecked(x)).expect("shapes"))
        .collect();
    let cons: Vec<Constraint<'_>> = closures.iter().map(|c| c as Constraint<'_>).collect();
    let space = MapSpace::constrained(m.carrier(), &target.module(), &cons)?;

    let mut taken = m.all_labels();
    let mut actions = Vec::new();
    let mut roles = Vec::new();
    for a in m.actions() {
        let l = &a.label;
        if outer.contains(l) {
            let eta = eta_of(l);
            let side = mul_side(a, eta).flip();
            let alg = eta.target().clone();
            let ops = (0..alg.rank())
                .map(|i| {
                    let t = target.mul(side, l, &alg.generator(i))?;
                    space.induced(|x| t.mul_unchecked(x))
                })
                .collect::<Result<Vec<_>>>()?;
            actions.push(Action {
                label: l.clone(),
                side,
                algebra: alg,
                ops,
            });
            roles.push(DualAction {
                role: Role::Bullet,
                origin: l.clone(),
                label: l.clone(),
            });
        }
        if !inner.contains(l) {
            let label = if outer.contains(l) {
                let f = fresh_label(&format!("{l}.src"), &taken);
                taken.push(f.clone());
                f
            } else {
                l.clone()
            };
            let ops = a
                .ops
                .iter()
                .map(|o| space.induced(|x| x.mul_unchecked(o)))
                .collect::<Result<Vec<_>>>()?;
            actions.push(Action {
                label: label.clone(),
                side: a.side.flip(),
                algebra: a.algebra.clone(),
                ops,
            });
            roles.push(DualAction {
                role: Role::Odot,
                origin: l.clone(),
                label,
            });
        }
        if outer.contains(l) && !inner.contains(l) {
            let label = fresh_label(&format!("{l}.out"), &taken);
            taken.push(label.clone());
            let eta = eta_of(l);
            let side = mul_side(a, eta);
            let alg = eta.target().clone();
            let ops = (0..alg.rank())
                .map(|i| {
                    let t = target.mul(side, l, &alg.generator(i))?;
                    space.induced(|x| t.mul_unchecked(x))
                })
                .collect::<Result<Vec<_>>>()?;
            actions.push(Action {
                label: label.clone(),
                side,
                algebra: alg,
                ops,
            });
            roles.push(DualAction {
                role: Role::Outer,
                origin: l.clone(),
                label,
            });
        }
    }
    let result = Multimodule::new(space.module().clone(), actions)?;
    Ok(DualModule {
        result,
        space,
        target,
        inner: inner.clone(),
        outer: outer.clone(),
        roles,
    })
}

/// The dual of `m` at a selection: maps into the selected algebras, linear at the selection.
///
/// A left action `a` at a selected label gives the right action
/// `(phi . a)(x) = phi(x) a` on the target factor; an unselected one gives
/// `(phi . a)(x) = phi(a x)`. Right actions are handled symmetrically.
pub fn dual(m: &Multimodule, sel: &DualSelection) -> Result<DualModule> {
    build(m, sel, sel)
}

/// Label-preserving signature between two duals, matching actions by role and origin.
fn role_signature(source: &DualModule, target: &DualModule) -> Result<Signature> {
    let mut entries = Vec::with_capacity(source.roles.len());
    for r in &source.roles {
        let t = target.label_of(r.role, &r.origin).ok_or_else(|| {
            Error::IndexMismatch(format!("no {} action from {} in the target", r.role.as_str(), r.origin))
        })?;
        let sa = source.result.action(&r.label)?;
        let ta = target.result.action(t)?;
        if sa.algebra != ta.algebra || sa.side != ta.side {
            return Err(Error::AlgebraMismatch(format!(
                "action {} does not match {t}",
                r.label
            )));
        }
        entries.push(SignatureEntry {
            source: r.label.clone(),
            target: t.into(),
            eta: AlgebraMap::identity(&sa.algebra),
            phi: None,
        });
    }
    Ok(Signature::new(entries))
}

fn is_identity_signature(sig: &Signature) -> bool {
    sig.entries.iter().all(|e| {
        e.source == e.target
            && e.eta.variance().is_covariant()
            && e.eta.source() == e.eta.target()
            && e.eta.same_matrix(&AlgebraMap::identity(e.eta.source()))
            && e.phi.is_none()
    })
}

/// Matrix of `psi -> psi o map` from the dual of the target of `map` to the dual of its source.
///
/// `source_dual` dualizes the source of `map` and `target_dual` its target;
/// both must have the same target algebra.
pub fn transpose_matrix(map: &Mat, source_dual: &DualModule, target_dual: &DualModule) -> Result<Mat> {
    if source_dual.target != target_dual.target {
        return Err(Error::IndexMismatch("duals with different targets".into()));
    }
    if map.cols() != source_dual.space.source().ngens() || map.rows() != target_dual.space.source().ngens() {
        return Err(Error::DimensionMismatch {
            context: "transposed map",
            expected: target_dual.space.source().ngens() * source_dual.space.source().ngens(),
            found: map.rows() * map.cols(),
        });
    }
    target_dual
        .space
        .induced_into(&source_dual.space, |psi| psi.mul_unchecked(map))
}

/// The transpose `phi -> phi o mu` between given duals of target and source.
pub fn transpose_between(mu: &Morphism, source_dual: &DualModule, target_dual: &DualModule) -> Result<Morphism> {
    if !is_identity_signature(&mu.signature) {
        return Err(Error::IncompatibleSignature(
            "transposition needs a covariant identity-signature morphism".into(),
        ));
    }
    let map = transpose_matrix(&mu.map, source_dual, target_dual)?;
    Morphism::new(
        target_dual.result.clone(),
        source_dual.result.clone(),
        role_signature(target_dual, source_dual)?,
        map,
    )
}

/// The transpose of a covariant identity-signature morphism at a selection.
pub fn transpose(mu: &Morphism, sel: &DualSelection) -> Result<Morphism> {
    let ds = dual(&mu.source, sel)?;
    let dt = dual(&mu.target, sel)?;
    transpose_between(mu, &ds, &dt)
}

/// Matrix of `x -> (phi -> phi(x))` from `obj` into `dd`, where `d` dualizes `obj` and `dd` dualizes `d`.
pub fn evaluation_matrix(obj: &Multimodule, d: &DualModule, dd: &DualModule) -> Result<Mat> {
    if d.target != dd.target {
        return Err(Error::IndexMismatch("double dual has another target".into()));
    }
    let md = obj.modulus();
    let t = d.target.rank();
    let mut cols = Vec::with_capacity(obj.ngens());
    for x in 0..obj.ngens() {
        let vals: Vec<Vec<u64>> = d.space.basis().iter().map(|b| b.col(x)).collect();
        let ev = if vals.is_empty() {
            Mat::zeros(md, t, 0)
        } else {
            Mat::from_cols(md, t, &vals)?
        };
        cols.push(dd.space.coords(&ev).ok_or_else(|| {
            Error::NoSolution(format!("evaluation at g{x} is not in the double dual"))
        })?);
    }
    if cols.is_empty() {
        return Ok(Mat::zeros(md, dd.result.ngens(), 0));
    }
    Mat::from_cols(md, dd.result.ngens(), &cols)
}

fn require_plain(sel: &DualSelection) -> Result<()> {
    if sel.is_plain() {
        Ok(())
    } else {
        Err(Error::Unsupported(
            "evaluation maps are defined for selections without conjugations".into(),
        ))
    }
}

/// The evaluation morphism into the double dual.
#[derive(Debug, Clone)]
pub struct Evaluation {
    /// The dual at the selection.
    pub first: DualModule,
    /// The dual of `first` at the swapped selection.
    pub second: DualModule,
    /// `x -> (phi -> phi(x))`, a covariant identity-signature morphism.
    pub theta: Morphism,
}

pub fn evaluation(m: &Multimodule, sel: &DualSelection) -> Result<Evaluation> {
    require_plain(sel)?;
    let first = dual(m, sel)?;
    let second = dual(&first.result, &sel.swapped())?;
    let map = evaluation_matrix(m, &first, &second)?;
    let theta = Morphism::new(
        m.clone(),
        second.result.clone(),
        Signature::matching(m, &second.result)?,
        map,
    )?;
    Ok(Evaluation {
        first,
        second,
        theta,
    })
}

/// Whether the evaluation into the double dual is bijective.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Reflexivity {
    pub injective: bool,
    pub surjective: bool,
}

impl Reflexivity {
    pub fn is_reflexive(&self) -> bool {
        self.injective && self.surjective
    }
}

pub fn reflexivity(m: &Multimodule, sel: &DualSelection) -> Result<Reflexivity> {
    let ev = evaluation(m, sel)?;
    let f = ev.theta.module_map()?;
    Ok(Reflexivity {
        injective: f.is_injective(),
        surjective: f.is_surjective(),
    })
}

/// The data of the contravariant semi-adjunction at one multimodule.
#[derive(Debug, Clone)]
pub struct SemiAdjunction {
    /// The dual `M*`.
    pub first: DualModule,
    /// The double dual `M**`.
    pub second: DualModule,
    /// The triple dual `M***`.
    pub third: DualModule,
    /// `M -> M**`.
    pub theta: Morphism,
    /// `M* -> M***`, the evaluation of the dual.
    pub vartheta: Morphism,
    /// `M*** -> M*`, the transpose of `theta`.
    pub flat_theta: Morphism,
}

pub fn semi_adjunction(m: &Multimodule, sel: &DualSelection) -> Result<SemiAdjunction> {
    let ev = evaluation(m, sel)?;
    let third = dual(&ev.second.result, sel)?;
    let d1 = &ev.first.result;
    let vmap = evaluation_matrix(d1, &ev.second, &third)?;
    let vartheta = Morphism::new(
        d1.clone(),
        third.result.clone(),
        Signature::matching(d1, &third.result)?,
        vmap,
    )?;
    let flat_theta = transpose_between(&ev.theta, &ev.first, &third)?;
    Ok(SemiAdjunction {
        first: ev.first,
        second: ev.second,
        third,
        theta: ev.theta,
        vartheta,
        flat_theta,
    })
}

fn compare_maps(rep: &mut Report, law: &str, target: &FpModule, lhs: &Mat, rhs: &Mat, what: &str) {
    for x in 0..lhs.cols() {
        let (l, r) = (lhs.col(x), rhs.col(x));
        if !target.eq_elems(&l, &r) {
            rep.fail_with(
                law,
                format!("{what} differ at g{x}"),
                vec![format!("x=g{x}")],
                target.reduce(&l),
                target.reduce(&r),
            );
        }
    }
}

impl SemiAdjunction {
    /// The identity `flat_theta o vartheta = id` on the dual.
    pub fn identity_report(&self) -> Report {
        let mut rep = Report::new();
        let comp = self.flat_theta.map.mul_unchecked(&self.vartheta.map);
        let id = Mat::identity(comp.modulus(), comp.rows());
        compare_maps(
            &mut rep,
            "semi-adjunction",
            self.first.result.carrier(),
            &comp,
            &id,
            "transposed evaluation after evaluation and the identity",
        );
        rep
    }

    /// The pair `vartheta : M* -> M***` and `flat_theta : M*** -> M*`.
    pub fn evaluation_pairing(&self) -> Result<PairingChecker> {
        PairingChecker::new(
            self.first.result.carrier().clone(),
            self.third.result.carrier().clone(),
            self.vartheta.map.clone(),
            self.flat_theta.map.clone(),
        )
    }
}

/// Two finitely presented modules with linear maps `lambda : first -> second` and `rho : second -> first`.
#[derive(Debug, Clone)]
pub struct PairingChecker {
    pub first: FpModule,
    pub second: FpModule,
    pub lambda: Mat,
    pub rho: Mat,
}

/// Which of the pairing identities hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairingClass {
    /// `rho lambda rho = rho` and `lambda rho lambda = lambda`.
    pub regular: bool,
    /// `lambda rho = id`.
    pub left_semi: bool,
    /// `rho lambda = id`.
    pub right_semi: bool,
    /// Both compositions are identities.
    pub adjunction: bool,
}

impl PairingClass {
    pub fn name(&self) -> &'static str {
        if self.adjunction {
            "adjunction"
        } else if self.right_semi {
            "right semi-adjunction"
        } else if self.left_semi {
            "left semi-adjunction"
        } else if self.regular {
            "regular"
        } else {
            "full pairing"
        }
    }
}

impl PairingChecker {
    pub fn new(first: FpModule, second: FpModule, lambda: Mat, rho: Mat) -> Result<Self> {
        ModuleMap::new(first.clone(), second.clone(), lambda.clone())?;
        ModuleMap::new(second.clone(), first.clone(), rho.clone())?;
        Ok(PairingChecker {
            first,
            second,
            lambda,
            rho,
        })
    }

    fn agree(module: &FpModule, a: &Mat, b: &Mat) -> bool {
        (0..a.cols()).all(|j| module.eq_elems(&a.col(j), &b.col(j)))
    }

    pub fn classify(&self) -> PairingClass {
        let rl = self.rho.mul_unchecked(&self.lambda);
        let lr = self.lambda.mul_unchecked(&self.rho);
        let md = self.lambda.modulus();
        let right_semi = Self::agree(&self.first, &rl, &Mat::identity(md, self.first.ngens()));
        let left_semi = Self::agree(&self.second, &lr, &Mat::identity(md, self.second.ngens()));
        let regular = Self::agree(&self.first, &rl.mul_unchecked(&self.rho), &self.rho)
            && Self::agree(&self.second, &lr.mul_unchecked(&self.lambda), &self.lambda);
        PairingClass {
            regular,
            left_semi,
            right_semi,
            adjunction: left_semi && right_semi,
        }
    }

    /// Whether `lambda rho` is idempotent on the second module.
    pub fn lambda_rho_idempotent(&self) -> bool {
        let lr = self.lambda.mul_unchecked(&self.rho);
        Self::agree(&self.second, &lr.mul_unchecked(&lr), &lr)
    }
}

/// The pairing between `Hom(n, M*)` and `Hom(m, n*)` given by transposition and evaluation.
///
/// `lambda(x) = x* o theta_m` and `rho(y) = y* o theta_n`. Here `n` must
/// carry the labels, sides and algebras of the dual of `m`.
pub fn hom_pairing(m: &Multimodule, n: &Multimodule, sel: &DualSelection) -> Result<PairingChecker> {
    require_plain(sel)?;
    let sw = sel.swapped();
    let m1 = dual(m, sel)?;
    let m2 = dual(&m1.result, &sw)?;
    let n1 = dual(n, &sw)?;
    let n2 = dual(&n1.result, sel)?;
    let theta_m = evaluation_matrix(m, &m1, &m2)?;
    let theta_n = evaluation_matrix(n, &n1, &n2)?;
    let h1 = equivariant_space(n, &m1.result)?;
    let h2 = equivariant_space(m, &n1.result)?;
    let lambda = h1.induced_into(&h2, |x| {
        transpose_matrix(x, &n1, &m2)
            .expect("equivariant maps transpose")
            .mul_unchecked(&theta_m)
    })?;
    let rho = h2.induced_into(&h1, |y| {
        transpose_matrix(y, &m1, &n2)
            .expect("equivariant maps transpose")
            .mul_unchecked(&theta_n)
    })?;
    PairingChecker::new(h1.module().clone(), h2.module().clone(), lambda, rho)
}

/// Checks the semi-adjunction identity and the right semi-adjunction of the hom pairing at `n = M*`.
pub fn check_semiadjunction(m: &Multimodule, sel: &DualSelection) -> Result<Report> {
    let sa = semi_adjunction(m, sel)?;
    let mut rep = sa.identity_report();
    for (name, mo) in [("theta", &sa.theta), ("vartheta", &sa.vartheta), ("flat-theta", &sa.flat_theta)] {
        for v in mo.check().violations {
            rep.fail(&v.law, format!("{name}: {}", v.detail));
        }
    }
    if !sa.evaluation_pairing()?.classify().right_semi {
        rep.fail("pairing", "evaluation pairing is not a right semi-adjunction".into());
    }
    let hp = hom_pairing(m, &sa.first.result, sel)?;
    if !hp.classify().right_semi {
        rep.fail("pairing", "hom pairing is not a right semi-adjunction".into());
    }
    Ok(rep)
}

/// Naturality of evaluation along `mu`: `theta_n o mu = mu** o theta_m`.
pub fn check_naturality(mu: &Morphism, sel: &DualSelection) -> Result<Report> {
    let em = evaluation(&mu.source, sel)?;
    let en = evaluation(&mu.target, sel)?;
    let flat = transpose_between(mu, &em.first, &en.first)?;
    let sharp = transpose_matrix(&flat.map, &en.second, &em.second)?;
    let lhs = en.theta.map.mul_unchecked(&mu.map);
    let rhs = sharp.mul_unchecked(&em.theta.map);
    let mut rep = Report::new();
    compare_maps(
        &mut rep,
        "naturality",
        en.second.result.carrier(),
        &lhs,
        &rhs,
        "evaluation after the morphism and the double transpose after evaluation",
    );
    Ok(rep)
}

/// A global dual with its comparison maps from the two ordinary duals.
#[derive(Debug, Clone)]
pub struct GlobalDual {
    /// Maps into the outer target that are linear at the inner selection.
    pub result: DualModule,
    /// The dual at the inner selection.
    pub inner_dual: DualModule,
    /// The dual at the outer selection.
    pub outer_dual: DualModule,
    /// Inclusion of the outer dual.
    pub eta: Morphism,
    /// Unit padding of the inner dual.
    pub zeta: Morphism,
}

/// The global dual of `m` for `inner` contained in `outer`.
///
/// Besides the bullet and odot actions it carries, for each label of
/// `outer` missing from `inner`, an outer action labeled `<label>.out`
/// multiplying the target factor from the side of the original action.
/// When an odot label collides with a bullet label it becomes `<label>.src`.
pub fn global_dual(m: &Multimodule, inner: &DualSelection, outer: &DualSelection) -> Result<GlobalDual> {
    let result = build(m, inner, outer)?;
    let inner_dual = dual(m, inner)?;
    let outer_dual = dual(m, outer)?;
    let eta = inclusion(&outer_dual, &result)?;
    let zeta = padding(&inner_dual, &result)?;
    Ok(GlobalDual {
        result,
        inner_dual,
        outer_dual,
        eta,
        zeta,
    })
}

/// The inclusion between global duals of one multimodule with the same outer selection.
pub fn inclusion(fine: &DualModule, coarse: &DualModule) -> Result<Morphism> {
    if !fine.outer.same_labels(&coarse.outer) || !coarse.inner.is_within(&fine.inner) {
        return Err(Error::InclusionViolation(
            "inclusion needs equal outer and smaller inner selections".into(),
        ));
    }
    let map = fine.space.induced_into(&coarse.space, |x| x.clone())?;
    Morphism::new(
        fine.result.clone(),
        coarse.result.clone(),
        role_signature(fine, coarse)?,
        map,
    )
}

/// The unit padding between global duals of one multimodule with the same inner selection.
pub fn padding(small: &DualModule, big: &DualModule) -> Result<Morphism> {
    if !small.inner.same_labels(&big.inner) || !small.outer.is_within(&big.outer) {
        return Err(Error::InclusionViolation(
            "padding needs equal inner and larger outer selections".into(),
        ));
    }
    let p = big.target.pad_from(&small.target)?;
    let map = small.space.induced_into(&big.space, |x| p.mul_unchecked(x))?;
    Morphism::new(
        small.result.clone(),
        big.result.clone(),
        role_signature(small, big)?,
        map,
    )
}

fn ev_triangles(rep: &mut Report, obj: &Multimodule, s1: &DualSelection, s2: &DualSelection) -> Result<()> {
    let (w1, w2) = (s1.swapped(), s2.swapped());
    let g = global_dual(obj, s1, s2)?;
    let gg = build(&g.result.result, &w1, &w2)?;
    let ev = evaluation_matrix(obj, &g.result, &gg)?;

    let g1 = global_dual(&g.inner_dual.result, &w1, &w2)?;
    let theta1 = evaluation_matrix(obj, &g.inner_dual, &g1.inner_dual)?;
    let zeta_t = transpose_matrix(&g.zeta.map, &g1.result, &gg)?;
    compare_maps(
        rep,
        "ev-zeta",
        g1.result.result.carrier(),
        &zeta_t.mul_unchecked(&ev),
        &g1.zeta.map.mul_unchecked(&theta1),
        "the padding triangle sides",
    );

    let g2 = global_dual(&g.outer_dual.result, &w1, &w2)?;
    let theta2 = evaluation_matrix(obj, &g.outer_dual, &g2.outer_dual)?;
    let eta_t = transpose_matrix(&g.eta.map, &g2.result, &gg)?;
    compare_maps(
        rep,
        "ev-eta",
        g2.result.result.carrier(),
        &eta_t.mul_unchecked(&ev),
        &g2.eta.map.mul_unchecked(&theta2),
        "the inclusion triangle sides",
    );
    Ok(())
}

fn check_pair(
    rep: &mut Report,
    m: &Multimodule,
    s1: &DualSelection,
    s2: &DualSelection,
    morphisms: &[Morphism],
) -> Result<GlobalDual> {
    let g = global_dual(m, s1, s2)?;
    for (name, mo) in [("eta", &g.eta), ("zeta", &g.zeta)] {
        for v in mo.check().violations {
            rep.fail(&v.law, format!("{name}: {}", v.detail));
        }
    }
    if !g.eta.module_map()?.is_injective() {
        rep.fail("eta-injective", "the inclusion has a kernel".into());
    }
    ev_triangles(rep, m, s1, s2)?;
    ev_triangles(rep, &g.outer_dual.result, &s1.swapped(), &s2.swapped())?;
    for mu in morphisms {
        if mu.source != *m {
            return Err(Error::IndexMismatch("morphism does not start at the multimodule".into()));
        }
        let gn = global_dual(&mu.target, s1, s2)?;
        let mu_g = transpose_matrix(&mu.map, &g.result, &gn.result)?;
        let mu_2 = transpose_matrix(&mu.map, &g.outer_dual, &gn.outer_dual)?;
        let mu_1 = transpose_matrix(&mu.map, &g.inner_dual, &gn.inner_dual)?;
        let gc = g.result.result.carrier();
        compare_maps(
            rep,
            "eta-natural",
            gc,
            &g.eta.map.mul_unchecked(&mu_2),
            &mu_g.mul_unchecked(&gn.eta.map),
            "the inclusion naturality square sides",
        );
        compare_maps(
            rep,
            "zeta-natural",
            gc,
            &mu_g.mul_unchecked(&gn.zeta.map),
            &g.zeta.map.mul_unchecked(&mu_1),
            "the padding naturality square sides",
        );
    }
    Ok(g)
}

/// Checks the morphisms of semi-adjunctions along a chain of nested selections.
///
/// For every pair of selections in the chain the evaluation triangles
/// through padding and inclusion are compared, for `m` and for its outer
/// dual, along with the naturality squares of each morphism starting at
/// `m`. For every triple the composite paddings and inclusions are
/// compared with the direct ones.
pub fn dual_poset_functor(m: &Multimodule, chain: &[DualSelection], morphisms: &[Morphism]) -> Result<Report> {
    let mut rep = Report::new();
    for s in chain {
        require_plain(s)?;
    }
    for w in chain.windows(2) {
        if !w[0].is_within(&w[1]) {
            return Err(Error::InclusionViolation("chain is not ordered by inclusion".into()));
        }
    }
    let k = chain.len();
    for i in 0..k {
        for j in i + 1..k {
            check_pair(&mut rep, m, &chain[i], &chain[j], morphisms)?;
        }
    }
    for i in 0..k {
        for j in i + 1..k {
            for l in j + 1..k {
                let (s1, s2, s3) = (&chain[i], &chain[j], &chain[l]);
                let g12 = global_dual(m, s1, s2)?;
                let g13 = global_dual(m, s1, s3)?;
                let g23 = global_dual(m, s2, s3)?;
                let pad = padding(&g12.result, &g13.result)?;
                compare_maps(
                    &mut rep,
                    "zeta-composite",
                    g13.result.result.carrier(),
                    &pad.map.mul_unchecked(&g12.zeta.map),
                    &g13.zeta.map,
                    "the composite and direct paddings",
                );
                let inc = inclusion(&g23.result, &g13.result)?;
                compare_maps(
                    &mut rep,
                    "eta-composite",
                    g13.result.result.carrier(),
                    &inc.map.mul_unchecked(&g23.eta.map),
                    &g13.eta.map,
                    "the composite and direct inclusions",
                );
                for (name, mo) in [("padding", &pad), ("inclusion", &inc)] {
                    for v in mo.check().violations {
                        rep.fail(&v.law, format!("{name}: {}", v.detail));
                    }
                }
            }
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conjugation::Variance;

    fn md(n: u64) -> Modulus {
        Modulus::new(n).unwrap()
    }

    #[test]
    fn full_dual_of_scalar_bimodule_is_cyclic() {
        let a = Algebra::scalars(md(5));
        let r = Multimodule::regular(&a, "L", "R").unwrap();
        let d = dual(&r, &DualSelection::full(&r)).unwrap();
        assert_eq!(d.result.carrier().order(), Some(5));
        assert!(d.result.check().holds());
    }

    #[test]
    fn zero_module_has_zero_dual() {
        let z = Multimodule::plain(FpModule::free(md(4), 0));
        let d = dual(&z, &DualSelection::empty()).unwrap();
        assert!(d.result.carrier().is_trivial());
        assert!(reflexivity(&z, &DualSelection::empty()).unwrap().is_reflexive());
    }

    #[test]
    fn semiadjunction_on_dual_numbers() {
        let a = Algebra::dual_numbers(md(3));
        let r = Multimodule::regular(&a, "L", "R").unwrap();
        for sel in [
            DualSelection::empty(),
            DualSelection::new(&["L"], &[]),
            DualSelection::new(&[], &["R"]),
            DualSelection::full(&r),
        ] {
            let rep = check_semiadjunction(&r, &sel).unwrap();
            assert!(rep.holds(), "{rep}");
        }
    }

    #[test]
    fn identity_conjugation_gives_plain_dual() {
        let a = Algebra::dual_numbers(md(5));
        let r = Multimodule::regular(&a, "L", "R").unwrap();
        let sel = DualSelection::full(&r);
        let conj = sel
            .clone()
            .with_conjugation("L", Conjugation::identity(&base_ring(&a), Variance::Covariant));
        let d = dual(&r, &sel).unwrap();
        let c = dual(&r, &conj).unwrap();
        assert!(d.space.same_maps(&c.space));
        for (x, y) in d.result.actions().iter().zip(c.result.actions()) {
            assert_eq!((&x.label, x.side, &x.ops), (&y.label, y.side, &y.ops));
        }
    }

    #[test]
    fn padding_pads_with_units() {
        let a = Algebra::dual_numbers(md(3));
        let big = TensorTarget::new(md(3), vec![("A".into(), a.clone()), ("B".into(), a.clone())]).unwrap();
        let small = TensorTarget::new(md(3), vec![("B".into(), a.clone())]).unwrap();
        let p = big.pad_from(&small).unwrap();
        assert_eq!(p.col(1), vec![0, 1, 0, 0]);
        let empty = TensorTarget::new(md(3), vec![]).unwrap();
        assert_eq!(big.pad_from(&empty).unwrap().col(0), vec![1, 0, 0, 0]);
    }

    #[test]
    fn global_dual_with_equal_selections_is_the_dual() {
        let a = Algebra::dual_numbers(md(5));
        let r = Multimodule::regular(&a, "L", "R").unwrap();
        let s = DualSelection::full(&r);
        let g = global_dual(&r, &s, &s).unwrap();
        assert!(g.eta.equals(&Morphism::identity(&g.outer_dual.result)));
        assert_eq!(g.result.result.actions(), g.outer_dual.result.actions());
    }

    #[test]
    fn simple_module_with_trivial_dual_is_not_reflexive() {
        let t = Algebra::upper_triangular(md(3));
        let ops = [0u64, 0, 1]
            .iter()
            .map(|&v| Mat::from_rows(md(3), 1, &[vec![v]]).unwrap())
            .collect();
        let s2 = Multimodule::new(
            FpModule::free(md(3), 1),
            vec![Action {
                label: "L".into(),
                side: Side::Left,
                algebra: t,
                ops,
            }],
        )
        .unwrap();
        assert!(s2.check().holds());
        let sel = DualSelection::new(&["L"], &[]);
        assert!(dual(&s2, &sel).unwrap().result.carrier().is_trivial());
        let r = reflexivity(&s2, &sel).unwrap();
        assert!(!r.injective && r.surjective);
        assert!(check_semiadjunction(&s2, &sel).unwrap().holds());
    }

    #[test]
    fn poset_chain_over_dual_numbers() {
        let a = Algebra::dual_numbers(md(3));
        let r = Multimodule::regular(&a, "L", "R").unwrap();
        let chain = [
            DualSelection::empty(),
            DualSelection::new(&["L"], &[]),
            DualSelection::full(&r),
        ];
        let x = Mat::from_rows(md(3), 2, &[vec![0, 0], vec![1, 0]]).unwrap();
        let mu = Morphism::new(r.clone(), r.clone(), Signature::identity(&r), x).unwrap();
        assert!(mu.check().holds());
        let rep = dual_poset_functor(&r, &chain, &[mu]).unwrap();
        assert!(rep.holds(), "{rep}");
        assert!(dual_poset_functor(&r, &chain[..1], &[]).unwrap().holds());
    }

    #[test]
    fn contravariant_conjugate_dual_is_a_multimodule() {
        let a = Algebra::upper_triangular(md(3));
        let r = Multimodule::regular(&a, "L", "R").unwrap();
        let g = Conjugation::identity(&base_ring(&a), Variance::Contravariant);
        let sel = DualSelection::full(&r).with_conjugation("L", g);
        let d = dual(&r, &sel).unwrap();
        assert!(d.result.check().holds(), "{}", d.result.check());
        assert_eq!(d.result.action("L").unwrap().side, Side::Left);
    }
}
