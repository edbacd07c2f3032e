//! Brute-force comparison of solved map spaces against direct enumeration.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand_core::RngCore;

use crate::algebra::Algebra;
use crate::duality::DualSelection;
use crate::error::{Error, Result};
use crate::mapspace::MapSpace;
use crate::mat::Mat;
use crate::module::FpModule;
use crate::multimodule::{Multimodule, Side};

/// Default bound on the number of candidate maps enumerated exhaustively.
pub const ENUM_THRESHOLD: u128 = 4096;

/// Default number of random probes when enumeration is too large.
pub const SAMPLES: usize = 200;

/// How an agreement check was carried out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Exhaustive,
    Sampled,
}

/// The outcome of comparing a solved space with a membership predicate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Agreement {
    pub method: Method,
    /// Number of candidate maps examined.
    pub examined: usize,
    /// Number of maps accepted by the predicate.
    pub accepted: usize,
    /// A map on which the space and the predicate disagree.
    pub mismatch: Option<Mat>,
}

impl Agreement {
    pub fn agrees(&self) -> bool {
        self.mismatch.is_none()
    }
}

/// A map matrix with every column in normal form in the target.
pub fn canonical(target: &FpModule, x: &Mat) -> Mat {
    let cols: Vec<Vec<u64>> = x.to_cols().iter().map(|c| target.reduce(c)).collect();
    if cols.is_empty() {
        return x.clone();
    }
    Mat::from_cols(x.modulus(), x.rows(), &cols).expect("same shape")
}

/// Whether a matrix sends the source relations to zero.
pub fn respects_relations(source: &FpModule, target: &FpModule, x: &Mat) -> bool {
    source
        .relation_mat()
        .to_rows()
        .iter()
        .all(|r| target.is_zero(&x.apply(r)))
}

/// Number of candidate maps `source -> target` when generator images range over the target.
pub fn candidate_count(source: &FpModule, target: &FpModule) -> Option<u128> {
    let t = target.order()?;
    let mut n: u128 = 1;
    for _ in 0..source.ngens() {
        n = n.checked_mul(t)?;
    }
    Some(n)
}

/// Every well-defined map `source -> target`, in canonical form, if there are at most `limit` candidates.
pub fn all_maps(source: &FpModule, target: &FpModule, limit: u128) -> Option<Vec<Mat>> {
    if candidate_count(source, target)? > limit {
        return None;
    }
    let elems = target.elements(limit)?;
    let (s, t) = (source.ngens(), target.ngens());
    let md = source.modulus();
    let mut idx = vec![0usize; s];
    let mut out = Vec::new();
    loop {
        let mut x = Mat::zeros(md, t, s);
        for (j, &k) in idx.iter().enumerate() {
            for (i, &v) in elems[k].iter().enumerate() {
                x.set(i, j, v);
            }
        }
        if respects_relations(source, target, &x) {
            out.push(x);
        }
        let mut j = 0;
        loop {
            if j == s {
                return Some(out);
            }
            idx[j] += 1;
            if idx[j] < elems.len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

/// Every element of a solved space, in canonical form, if the space has at most `limit` elements.
pub fn space_maps(space: &MapSpace, limit: u128) -> Option<Vec<Mat>> {
    let coords = space.module().elements(limit)?;
    Some(
        coords
            .iter()
            .map(|c| canonical(space.target(), &space.element(c)))
            .collect(),
    )
}

fn key(x: &Mat) -> Vec<u64> {
    x.data().to_vec()
}

/// Compares a solved space with a membership predicate.
///
/// Enumerates every map when there are at most `limit` candidates;
/// otherwise probes `samples` random matrices and `samples` random space
/// elements drawn from `rng`.
pub fn agreement(
    space: &MapSpace,
    predicate: impl Fn(&Mat) -> bool,
    limit: u128,
    samples: usize,
    rng: &mut dyn RngCore,
) -> Result<Agreement> {
    let (src, tgt) = (space.source(), space.target());
    if let Some(all) = all_maps(src, tgt, limit) {
        let solved = space_maps(space, limit.max(1))
            .ok_or_else(|| Error::SizeOverflow("solved space exceeds the enumeration bound".into()))?;
        let solved: BTreeSet<Vec<u64>> = solved.iter().map(key).collect();
        let mut accepted = 0;
        for x in &all {
            let p = predicate(x);
            accepted += p as usize;
            if p != solved.contains(&key(x)) {
                return Ok(Agreement {
                    method: Method::Exhaustive,
                    examined: all.len(),
                    accepted,
                    mismatch: Some(x.clone()),
                });
            }
        }
        if accepted != solved.len() {
            return Err(Error::NoSolution(format!(
                "solver lists {} maps but enumeration accepts {accepted}",
                solved.len()
            )));
        }
        return Ok(Agreement {
            method: Method::Exhaustive,
            examined: all.len(),
            accepted,
            mismatch: None,
        });
    }
    let md = src.modulus();
    let n = md.value();
    let mut accepted = 0;
    let mut examined = 0;
    for _ in 0..samples {
        let data: Vec<u64> = (0..tgt.ngens() * src.ngens()).map(|_| rng.next_u64() % n).collect();
        let x = canonical(tgt, &Mat::from_data(md, tgt.ngens(), src.ngens(), data)?);
        examined += 1;
        if !respects_relations(src, tgt, &x) {
            continue;
        }
        let p = predicate(&x);
        accepted += p as usize;
        if p != space.contains(&x) {
            return Ok(Agreement {
                method: Method::Sampled,
                examined,
                accepted,
                mismatch: Some(x),
            });
        }
    }
    for _ in 0..samples {
        let c: Vec<u64> = (0..space.module().ngens()).map(|_| rng.next_u64() % n).collect();
        let x = canonical(tgt, &space.element(&c));
        examined += 1;
        let p = predicate(&x);
        accepted += p as usize;
        if !p {
            return Ok(Agreement {
                method: Method::Sampled,
                examined,
                accepted,
                mismatch: Some(x),
            });
        }
    }
    Ok(Agreement {
        method: Method::Sampled,
        examined,
        accepted,
        mismatch: None,
    })
}

/// Whether `x` commutes with every action, tested elementwise on generators.
pub fn is_equivariant(m: &Multimodule, n: &Multimodule, x: &Mat) -> bool {
    m.actions().iter().all(|a| {
        let Ok(b) = n.action(&a.label) else {
            return false;
        };
        (0..a.algebra.rank()).all(|k| {
            let e = a.algebra.generator(k);
            (0..m.ngens()).all(|g| {
                let mut v = vec![0; m.ngens()];
                v[g] = 1;
                let lhs = x.apply(&a.op(&e).apply(&v));
                let rhs = b.op(&e).apply(&x.apply(&v));
                n.carrier().eq_elems(&lhs, &rhs)
            })
        })
    })
}

/// Multiplies the factor at `pos` of a tensor of algebras by `a` from `side`,
/// working on the mixed-radix coordinates of the tensor.
pub fn tensor_factor_mul(factors: &[Algebra], pos: usize, side: Side, a: &[u64], t: &[u64]) -> Vec<u64> {
    let md = factors[0].modulus();
    let ranks: Vec<usize> = factors.iter().map(|f| f.rank()).collect();
    let stride: usize = ranks[pos + 1..].iter().product();
    let k = ranks[pos];
    let mut out = vec![0u64; t.len()];
    for (idx, &c) in t.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let digit = (idx / stride) % k;
        let base = idx - digit * stride;
        let basis = factors[pos].generator(digit);
        let prod = match side {
            Side::Left => factors[pos].mul(a, &basis),
            Side::Right => factors[pos].mul(&basis, a),
        };
        for (d, &p) in prod.iter().enumerate() {
            let j = base + d * stride;
            out[j] = md.add(out[j], md.mul(c, p));
        }
    }
    out
}

/// Whether `x : m -> A_l1 (x) ... (x) A_lk` is linear at every label of a plain selection,
/// with the selected algebras in label order as target factors.
pub fn is_dual_map(m: &Multimodule, sel: &DualSelection, x: &Mat) -> bool {
    let mut labels = sel.labels();
    labels.sort();
    let factors: Vec<Algebra> = labels
        .iter()
        .map(|l| m.action(l).expect("selected").algebra.clone())
        .collect();
    if factors.is_empty() {
        return true;
    }
    labels.iter().enumerate().all(|(pos, l)| {
        let a = m.action(l).expect("selected");
        (0..a.algebra.rank()).all(|k| {
            let e = a.algebra.generator(k);
            (0..m.ngens()).all(|g| {
                let mut v = vec![0; m.ngens()];
                v[g] = 1;
                let lhs = x.apply(&a.op(&e).apply(&v));
                let rhs = tensor_factor_mul(&factors, pos, a.side, &e, &x.apply(&v));
                lhs == rhs
            })
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morphism::equivariant_space;
    use crate::zn::Modulus;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn maps_from_z4_to_z2() {
        let m4 = Modulus::new(4).unwrap();
        let z4 = FpModule::free(m4, 1);
        let z2 = FpModule::new(m4, 1, &[vec![2]]).unwrap();
        assert_eq!(all_maps(&z4, &z2, 4096).unwrap().len(), 2);
        assert_eq!(all_maps(&z2, &z4, 4096).unwrap().len(), 2);
    }

    #[test]
    fn equivariant_maps_agree_on_dual_numbers() {
        let a = Algebra::dual_numbers(Modulus::new(3).unwrap());
        let r = Multimodule::regular(&a, "L", "R").unwrap();
        let sp = equivariant_space(&r, &r).unwrap();
        let ag = agreement(&sp, |x| is_equivariant(&r, &r, x), 4096, 10, &mut rng(1)).unwrap();
        assert!(ag.agrees());
        assert_eq!(ag.method, Method::Exhaustive);
        assert_eq!(ag.accepted, 9);
    }

    #[test]
    fn sampling_is_used_above_the_threshold() {
        let a = Algebra::dual_numbers(Modulus::new(3).unwrap());
        let r = Multimodule::regular(&a, "L", "R").unwrap();
        let sp = equivariant_space(&r, &r).unwrap();
        let ag = agreement(&sp, |x| is_equivariant(&r, &r, x), 10, 20, &mut rng(7)).unwrap();
        assert!(ag.agrees());
        assert_eq!(ag.method, Method::Sampled);
    }

    #[test]
    fn factor_multiplication_matches_kron() {
        let a = Algebra::dual_numbers(Modulus::new(5).unwrap());
        let b = Algebra::upper_triangular(Modulus::new(5).unwrap());
        let f = [a.clone(), b.clone()];
        let t: Vec<u64> = (0..6).map(|i| (i * 3 + 1) % 5).collect();
        let e = b.generator(1);
        let via = Mat::identity(a.modulus(), 2).kron(&b.left_matrix(&e)).apply(&t);
        assert_eq!(tensor_factor_mul(&f, 1, Side::Left, &e, &t), via);
    }
}
