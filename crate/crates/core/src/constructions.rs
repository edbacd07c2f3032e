//! Twists, free multimodules, hom multimodules and tensor products over a contraction.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::Algebra;
use crate::conjugation::Variance;
use crate::error::{Error, Result};
use crate::involution::{InvolutionEntry, MultimoduleInvolution};
use crate::mapspace::MapSpace;
use crate::mat::{vecops, Mat};
use crate::module::FpModule;
use crate::morphism::{Morphism, Signature};
use crate::multimodule::{reduce_cols, Action, Multimodule, Side};

/// Largest carrier rank a construction may produce.
pub const MAX_RANK: usize = 4096;

/// A label not in `taken`, obtained by appending primes.
pub fn fresh_label(base: &str, taken: &[String]) -> String {
    let mut l = base.to_string();
    while taken.contains(&l) {
        l.push('\'');
    }
    l
}

/// The twist of `n` along a signature whose targets are actions of `n`.
///
/// The result carries one action per signature entry, labeled by the
/// entry's source: `a` acts as `eta(a)` through the target action, from the
/// same side when `eta` is covariant and from the other side otherwise.
/// Returns the twisted multimodule and the identity-carrier morphism into `n`
/// whose signature is the given one.
pub fn twist(n: &Multimodule, sigma: &Signature) -> Result<(Multimodule, Morphism)> {
    let mut actions = Vec::with_capacity(sigma.entries.len());
    for (i, e) in sigma.entries.iter().enumerate() {
        if sigma.entries[..i].iter().any(|d| d.source == e.source) {
            return Err(Error::IncompatibleSignature(format!("label {} repeated", e.source)));
        }
        if sigma.entries[..i].iter().any(|d| d.target == e.target) {
            return Err(Error::IncompatibleSignature(format!("two labels map to {}", e.target)));
        }
        let ta = n.action(&e.target)?;
        if e.eta.target() != &ta.algebra {
            return Err(Error::IncompatibleSignature(format!(
                "algebra map for {} does not land in the algebra of {}",
                e.source, e.target
            )));
        }
        let rep = e.eta.check();
        if !rep.holds() {
            return Err(Error::IncompatibleSignature(format!(
                "algebra map for {}: {rep}",
                e.source
            )));
        }
        let src = e.eta.source();
        let side = match e.eta.variance() {
            Variance::Covariant => ta.side,
            Variance::Contravariant => ta.side.flip(),
        };
        let ops = (0..src.rank())
            .map(|k| ta.op(&e.eta.apply(&src.generator(k))))
            .collect();
        actions.push(Action {
            label: e.source.clone(),
            side,
            algebra: src.clone(),
            ops,
        });
    }
    let tw = Multimodule::new(n.carrier().clone(), actions)?;
    let theta = Morphism::new(
        tw.clone(),
        n.clone(),
        sigma.clone(),
        Mat::identity(n.modulus(), n.ngens()),
    )?;
    Ok((tw, theta))
}

/// The free multimodule on a finite set together with the unit map.
#[derive(Debug, Clone)]
pub struct FreeMultimodule {
    pub result: Multimodule,
    /// Matrix `carrier x |X|` sending the point `x` to `x (x) 1 (x) ... (x) 1`.
    pub unit: Mat,
}

/// The free multimodule on `points` elements over the given left and right algebras.
///
/// Generators are ordered point-major, then by the left factors and then by
/// the right factors, each block row-major.
pub fn free_multimodule(
    modulus: crate::zn::Modulus,
    points: usize,
    lefts: &[(String, Algebra)],
    rights: &[(String, Algebra)],
) -> Result<FreeMultimodule> {
    let factors: Vec<(&String, &Algebra, Side)> = lefts
        .iter()
        .map(|(l, a)| (l, a, Side::Left))
        .chain(rights.iter().map(|(l, a)| (l, a, Side::Right)))
        .collect();
    let mut d: usize = 1;
    for (_, a, _) in &factors {
        if a.modulus() != modulus {
            return Err(Error::ModulusMismatch {
                left: modulus.value(),
                right: a.modulus().value(),
            });
        }
        d = d
            .checked_mul(a.rank())
            .filter(|&x| x <= MAX_RANK)
            .ok_or_else(|| Error::SizeOverflow("free multimodule too large".into()))?;
    }
    let total = points
        .checked_mul(d)
        .filter(|&x| x <= MAX_RANK)
        .ok_or_else(|| Error::SizeOverflow("free multimodule too large".into()))?;
    let mut actions = Vec::with_capacity(factors.len());
    let mut pre = points;
    let mut post = d;
    for (label, a, side) in &factors {
        post /= a.rank();
        let base = match side {
            Side::Left => a.left_ops(),
            Side::Right => a.right_ops(),
        };
        actions.push(Action {
            label: (*label).clone(),
            side: *side,
            algebra: (*a).clone(),
            ops: base.iter().map(|o| o.embed_factor(pre, post)).collect(),
        });
        pre *= a.rank();
    }
    let mut one = vec![1u64];
    for (_, a, _) in &factors {
        one = vecops::kron(modulus, &one, a.unit());
    }
    let cols: Vec<Vec<u64>> = (0..points)
        .map(|x| vecops::kron(modulus, &vecops::unit(points, x), &one))
        .collect();
    let unit = if points == 0 {
        Mat::zeros(modulus, 0, 0)
    } else {
        Mat::from_cols(modulus, total, &cols)?
    };
    let result = Multimodule::new(FpModule::free(modulus, total), actions)?;
    Ok(FreeMultimodule { result, unit })
}

/// The multimodule of all Z/n-linear maps between two multimodules.
#[derive(Debug, Clone)]
pub struct HomMultimodule {
    pub result: Multimodule,
    /// The maps; generator `i` of the carrier is `space.basis()[i]`.
    pub space: MapSpace,
    /// Labels of `n` kept as external actions.
    pub external: Vec<String>,
    /// Labels of `m` with the labels of the internal actions they induce.
    pub internal: Vec<(String, String)>,
}

/// `Hom(m, n)` with external actions from `n` and internal actions from `m`.
///
/// External: `(c . f)(x) = c . f(x)` and `(f . d)(x) = f(x) . d`. Internal:
/// a right action `b` of `m` gives the left action `(b . f)(x) = f(x . b)`,
/// and a left action `a` of `m` gives the right action `(f . a)(x) = f(a . x)`.
pub fn hom_multimodule(m: &Multimodule, n: &Multimodule) -> Result<HomMultimodule> {
    let space = MapSpace::hom(m.carrier(), n.carrier())?;
    let mut taken = n.all_labels();
    let mut actions = Vec::new();
    for a in n.actions() {
        let ops = a
            .ops
            .iter()
            .map(|o| space.induced(|x| o.mul_unchecked(x)))
            .collect::<Result<Vec<_>>>()?;
        actions.push(Action {
            label: a.label.clone(),
            side: a.side,
            algebra: a.algebra.clone(),
            ops,
        });
    }
    let mut internal = Vec::new();
    for a in m.actions() {
        let label = fresh_label(&a.label, &taken);
        taken.push(label.clone());
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
        internal.push((a.label.clone(), label));
    }
    let result = Multimodule::new(space.module().clone(), actions)?;
    Ok(HomMultimodule {
        result,
        space,
        external: n.all_labels(),
        internal,
    })
}

/// The involution `T -> star_n o T o star_m` on `Hom(m, n)`.
pub fn hom_involution(
    hom: &HomMultimodule,
    inv_m: &MultimoduleInvolution,
    inv_n: &MultimoduleInvolution,
) -> Result<MultimoduleInvolution> {
    let (sm, sn) = (inv_m.star.clone(), inv_n.star.clone());
    let star = hom
        .space
        .induced(|x| sn.mul_unchecked(x).mul_unchecked(&sm))?;
    let mut entries = Vec::new();
    for l in &hom.external {
        let e = inv_n
            .entry(l)
            .ok_or_else(|| Error::MissingInvolution(format!("no entry for {l}")))?;
        entries.push(InvolutionEntry {
            label: l.clone(),
            partner: e.partner.clone(),
            dagger: e.dagger.clone(),
        });
    }
    let internal_name = |orig: &str| -> Result<String> {
        hom.internal
            .iter()
            .find(|(o, _)| o == orig)
            .map(|(_, l)| l.clone())
            .ok_or_else(|| Error::UnknownLabel(orig.to_string()))
    };
    for (orig, label) in &hom.internal {
        let e = inv_m
            .entry(orig)
            .ok_or_else(|| Error::MissingInvolution(format!("no entry for {orig}")))?;
        entries.push(InvolutionEntry {
            label: label.clone(),
            partner: internal_name(&e.partner)?,
            dagger: e.dagger.clone(),
        });
    }
    Ok(MultimoduleInvolution::new(entries, star))
}

/// A pair of actions identified by a tensor product: one of the left factor, one of the right.
pub type GammaPair = (String, String);

/// A tensor product over a contraction relation.
#[derive(Debug, Clone)]
pub struct TensorProduct {
    pub result: Multimodule,
    /// Matrix `result x (m.ngens * n.ngens)`: the image of `g_i (x) h_j` in column `i * n.ngens + j`.
    pub eta: Mat,
    /// Surviving labels of the left factor with their labels in the result.
    pub left_labels: Vec<(String, String)>,
    /// Surviving labels of the right factor with their labels in the result.
    pub right_labels: Vec<(String, String)>,
    pub gamma: Vec<GammaPair>,
}

impl TensorProduct {
    pub fn left_label(&self, l: &str) -> Option<&str> {
        self.left_labels.iter().find(|(a, _)| a == l).map(|(_, b)| b.as_str())
    }

    pub fn right_label(&self, l: &str) -> Option<&str> {
        self.right_labels.iter().find(|(a, _)| a == l).map(|(_, b)| b.as_str())
    }
}

fn check_gamma(m: &Multimodule, n: &Multimodule, gamma: &[GammaPair]) -> Result<()> {
    for (i, (x, y)) in gamma.iter().enumerate() {
        let a = m.action(x)?;
        let b = n.action(y)?;
        if a.algebra != b.algebra {
            return Err(Error::AlgebraMismatch(format!(
                "{x} and {y} act by different algebras"
            )));
        }
        if gamma[..i].iter().any(|(p, q)| p == x || q == y) {
            return Err(Error::IndexMismatch(format!(
                "contraction pairs {x} or {y} twice"
            )));
        }
    }
    Ok(())
}

/// The tensor product of `m` and `n` with the paired actions identified.
///
/// For a pair `(s, t)` the relators are `(a ._s x) (x) y - x (x) (a ._t y)`
/// in whichever of the four side combinations the pair has.
pub fn tensor_over(m: &Multimodule, n: &Multimodule, gamma: &[GammaPair]) -> Result<TensorProduct> {
    if m.modulus() != n.modulus() {
        return Err(Error::ModulusMismatch {
            left: m.modulus().value(),
            right: n.modulus().value(),
        });
    }
    check_gamma(m, n, gamma)?;
    let (gm, gn) = (m.ngens(), n.ngens());
    if gm.checked_mul(gn).is_none_or(|x| x > MAX_RANK) {
        return Err(Error::SizeOverflow("tensor product too large".into()));
    }
    let md = m.modulus();
    let ambient = m.carrier().tensor(n.carrier());
    let (im, in_) = (Mat::identity(md, gm), Mat::identity(md, gn));
    let mut relators = Vec::new();
    for (x, y) in gamma {
        let a = m.action(x)?;
        let b = n.action(y)?;
        for (s, t) in a.ops.iter().zip(&b.ops) {
            let rel = s.kron(&in_).sub(&im.kron(t))?;
            relators.extend(rel.to_cols());
        }
    }
    let pres = ambient.quotient(&relators)?;
    let descend = |o: &Mat| {
        reduce_cols(
            &pres.module,
            &pres.projection.mul_unchecked(o).mul_unchecked(&pres.section),
        )
    };
    let mut actions = Vec::new();
    let mut left_labels = Vec::new();
    let mut right_labels = Vec::new();
    let mut taken: Vec<String> = Vec::new();
    for a in m.actions() {
        if gamma.iter().any(|(x, _)| *x == a.label) {
            continue;
        }
        taken.push(a.label.clone());
        left_labels.push((a.label.clone(), a.label.clone()));
        actions.push(Action {
            label: a.label.clone(),
            side: a.side,
            algebra: a.algebra.clone(),
            ops: a.ops.iter().map(|o| descend(&o.kron(&in_))).collect(),
        });
    }
    for a in n.actions() {
        if gamma.iter().any(|(_, y)| *y == a.label) {
            continue;
        }
        let label = fresh_label(&a.label, &taken);
        taken.push(label.clone());
        right_labels.push((a.label.clone(), label.clone()));
        actions.push(Action {
            label,
            side: a.side,
            algebra: a.algebra.clone(),
            ops: a.ops.iter().map(|o| descend(&im.kron(o))).collect(),
        });
    }
    let result = Multimodule::new(pres.module.clone(), actions)?;
    Ok(TensorProduct {
        eta: reduce_cols(&pres.module, &pres.projection),
        result,
        left_labels,
        right_labels,
        gamma: gamma.to_vec(),
    })
}

/// The tensor product over Z/n, keeping every action.
pub fn tensor_z(m: &Multimodule, n: &Multimodule) -> Result<Multimodule> {
    Ok(tensor_over(m, n, &[])?.result)
}

/// The involution `x (x) y -> star_m(x) (x) star_n(y)` on a tensor product.
///
/// Requires the contraction to be stable: every pair `(s, t)` must have
/// `(f(s), f(t))` as a pair too.
pub fn tensor_involution(
    tp: &TensorProduct,
    m: &Multimodule,
    n: &Multimodule,
    inv_m: &MultimoduleInvolution,
    inv_n: &MultimoduleInvolution,
) -> Result<MultimoduleInvolution> {
    for (x, y) in &tp.gamma {
        let fx = inv_m
            .partner(x)
            .ok_or_else(|| Error::MissingInvolution(format!("no entry for {x}")))?;
        let fy = inv_n
            .partner(y)
            .ok_or_else(|| Error::MissingInvolution(format!("no entry for {y}")))?;
        if !tp.gamma.iter().any(|(p, q)| p == fx && q == fy) {
            return Err(Error::NotStable(format!(
                "pair ({x}, {y}) maps to ({fx}, {fy}), which is not contracted"
            )));
        }
    }
    let full = inv_m.star.kron(&inv_n.star);
    let md = m.modulus();
    let (gm, gn) = (m.ngens(), n.ngens());
    let k = tp.result.ngens();
    let mut cols = Vec::with_capacity(k);
    let solver = crate::howell::LinearSolver::new(&tp.eta, Some(&tp.result.carrier().relation_mat()));
    for j in 0..k {
        let pre = solver
            .solve(&vecops::unit(k, j))
            .ok_or_else(|| Error::NoSolution("projection is not surjective".into()))?;
        let img = tp.eta.apply(&full.apply(&pre));
        cols.push(tp.result.carrier().reduce(&img));
    }
    let star = if k == 0 {
        Mat::zeros(md, 0, 0)
    } else {
        Mat::from_cols(md, k, &cols)?
    };
    debug_assert_eq!(tp.eta.cols(), gm * gn);
    let mut entries = Vec::new();
    for (orig, label) in &tp.left_labels {
        let e = inv_m
            .entry(orig)
            .ok_or_else(|| Error::MissingInvolution(format!("no entry for {orig}")))?;
        let partner = tp
            .left_label(&e.partner)
            .ok_or_else(|| Error::NotStable(format!("partner of {orig} was contracted")))?;
        entries.push(InvolutionEntry {
            label: label.clone(),
            partner: partner.to_string(),
            dagger: e.dagger.clone(),
        });
    }
    for (orig, label) in &tp.right_labels {
        let e = inv_n
            .entry(orig)
            .ok_or_else(|| Error::MissingInvolution(format!("no entry for {orig}")))?;
        let partner = tp
            .right_label(&e.partner)
            .ok_or_else(|| Error::NotStable(format!("partner of {orig} was contracted")))?;
        entries.push(InvolutionEntry {
            label: label.clone(),
            partner: partner.to_string(),
            dagger: e.dagger.clone(),
        });
    }
    Ok(MultimoduleInvolution::new(entries, star))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::iso_test;
    use crate::module::IsoResult;
    use crate::zn::Modulus;

    fn m(n: u64) -> Modulus {
        Modulus::new(n).unwrap()
    }

    #[test]
    fn hom_of_scalars_is_rank_one() {
        let z = Algebra::scalars(m(5));
        let r = Multimodule::regular(&z, "L", "R").unwrap();
        let h = hom_multimodule(&r, &r).unwrap();
        assert_eq!(h.result.carrier().order(), Some(5));
        assert_eq!(h.result.actions().len(), 4);
        assert!(h.result.check().holds());
    }

    #[test]
    fn hom_of_dual_numbers_has_rank_four() {
        let d = Algebra::dual_numbers(m(3));
        let r = Multimodule::regular(&d, "L", "R").unwrap();
        let h = hom_multimodule(&r, &r).unwrap();
        assert_eq!(h.result.carrier().order(), Some(81));
        assert!(h.result.check().holds(), "{}", h.result.check());
    }

    #[test]
    fn unit_contraction_recovers_module() {
        let t = Algebra::upper_triangular(m(3));
        let r = Multimodule::regular(&t, "L", "R").unwrap();
        let tp = tensor_over(&r, &r, &[("R".into(), "L".into())]).unwrap();
        assert!(tp.result.check().holds());
        assert!(matches!(
            iso_test(tp.result.carrier(), r.carrier()).unwrap(),
            IsoResult::Isomorphic(_)
        ));
        assert_eq!(tp.right_label("R"), Some("R"));
    }

    #[test]
    fn z4_tensor_z2() {
        let z = Algebra::scalars(m(4));
        let a = Multimodule::right_regular(&z, "S").unwrap();
        let b = Multimodule::new(
            FpModule::new(m(4), 1, &[vec![2]]).unwrap(),
            vec![Action {
                label: "S".into(),
                side: Side::Left,
                algebra: z.clone(),
                ops: vec![Mat::identity(m(4), 1)],
            }],
        )
        .unwrap();
        let tp = tensor_over(&a, &b, &[("S".into(), "S".into())]).unwrap();
        assert_eq!(tp.result.carrier().order(), Some(2));
    }

    #[test]
    fn free_on_two_points() {
        let d = Algebra::dual_numbers(m(3));
        let f = free_multimodule(m(3), 2, &[("L".into(), d)], &[]).unwrap();
        assert_eq!(f.result.ngens(), 4);
        assert!(f.result.check().holds());
        let empty = free_multimodule(m(3), 0, &[], &[]).unwrap();
        assert!(empty.result.carrier().is_trivial());
    }

    #[test]
    fn identity_twist() {
        let t = Algebra::upper_triangular(m(3));
        let r = Multimodule::regular(&t, "L", "R").unwrap();
        let (tw, theta) = twist(&r, &Signature::identity(&r)).unwrap();
        assert_eq!(tw, r);
        assert!(theta.check().holds());
    }
}
