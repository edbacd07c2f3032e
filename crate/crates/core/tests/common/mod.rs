#![allow(dead_code)]

use multimod_core::constructions::{free_multimodule, tensor_z};
use multimod_core::duality::DualSelection;
use multimod_core::involution::{InvolutionEntry, MultimoduleInvolution};
use multimod_core::multimodule::{Action, Multimodule, Side};
use multimod_core::{Algebra, AlgebraInvolution, FpModule, Mat, MapSpace, Modulus, Variance};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const MODULI: [u64; 6] = [2, 3, 4, 5, 6, 9];
pub const PRIME_MODULI: [u64; 3] = [2, 3, 5];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn md(n: u64) -> Modulus {
    Modulus::new(n).unwrap()
}

/// An algebra of rank at most `max_rank` from a fixed catalogue.
pub fn algebra(r: &mut ChaCha8Rng, n: u64, max_rank: usize) -> Algebra {
    let m = md(n);
    loop {
        let a = match r.gen_range(0..7) {
            0 => Algebra::scalars(m),
            1 => Algebra::dual_numbers(m),
            2 => {
                let c: Vec<u64> = (0..2).map(|_| r.gen_range(0..n)).collect();
                Algebra::polynomial_quotient("Q", m, &c).unwrap()
            }
            3 => {
                let c: Vec<u64> = (0..3).map(|_| r.gen_range(0..n)).collect();
                Algebra::polynomial_quotient("C", m, &c).unwrap()
            }
            4 => Algebra::split_pair(m),
            5 => Algebra::upper_triangular(m),
            _ => Algebra::square_zero(m, 2),
        };
        if a.rank() <= max_rank {
            return a;
        }
    }
}

/// A commutative algebra of rank at most `max_rank`.
pub fn commutative_algebra(r: &mut ChaCha8Rng, n: u64, max_rank: usize) -> Algebra {
    loop {
        let a = algebra(r, n, max_rank);
        if a.is_commutative() {
            return a;
        }
    }
}

/// An algebra with a known unital character, together with that character's values on generators.
fn with_character(r: &mut ChaCha8Rng, n: u64) -> (Algebra, Vec<u64>) {
    let m = md(n);
    match r.gen_range(0..5) {
        0 => (Algebra::scalars(m), vec![1]),
        1 => (Algebra::dual_numbers(m), vec![1, 0]),
        2 => {
            let k = r.gen_range(0..2);
            (Algebra::split_pair(m), if k == 0 { vec![1, 0] } else { vec![0, 1] })
        }
        3 => {
            let k = r.gen_range(0..2);
            (Algebra::upper_triangular(m), if k == 0 { vec![1, 0, 0] } else { vec![0, 0, 1] })
        }
        _ => (Algebra::square_zero(m, 2), vec![1, 0, 0]),
    }
}

fn scalar_action(label: &str, side: Side, a: Algebra, chi: &[u64], carrier: &FpModule) -> Action {
    let m = carrier.modulus();
    let g = carrier.ngens();
    Action {
        label: label.into(),
        side,
        ops: chi.iter().map(|&c| Mat::identity(m, g).scale(c)).collect(),
        algebra: a,
    }
}

/// A random multimodule with carrier rank at most 4, at most two actions per side and algebras of rank at most 3.
pub fn multimodule(r: &mut ChaCha8Rng, n: u64) -> Multimodule {
    loop {
        if let Some(m) = try_multimodule(r, n) {
            if m.ngens() >= 1 && m.ngens() <= 4 {
                return m;
            }
        }
    }
}

fn try_multimodule(r: &mut ChaCha8Rng, n: u64) -> Option<Multimodule> {
    let m = md(n);
    let out = match r.gen_range(0..8) {
        0 => {
            let a = algebra(r, n, 3);
            Multimodule::regular(&a, "L", "R").ok()?
        }
        1 => {
            let a = algebra(r, n, 2);
            let b = algebra(r, n, 2);
            let x = Multimodule::regular(&a, "L", "R").ok()?;
            let y = Multimodule::regular(&b, "L2", "R2").ok()?;
            tensor_z(&x, &y).ok()?
        }
        2 => {
            let a = algebra(r, n, 3);
            let base = Multimodule::regular(&a, "L", "R").ok()?;
            let seed: Vec<u64> = (0..base.ngens()).map(|_| r.gen_range(0..n)).collect();
            let (_, inc) = base.submodule_closure(&[seed]).ok()?;
            let sub = inc.matrix().to_cols();
            base.quotient(&sub).ok()?.0
        }
        3 => {
            let divisors: Vec<u64> = (1..=n).filter(|d| n.is_multiple_of(*d) && *d > 1).collect();
            let d = *divisors.choose(r)?;
            let carrier = if d == n {
                FpModule::free(m, 1)
            } else {
                FpModule::new(m, 1, &[vec![d]]).ok()?
            };
            let (a, chi) = with_character(r, n);
            let (b, psi) = with_character(r, n);
            let mut actions = vec![scalar_action("L", Side::Left, a, &chi, &carrier)];
            if r.gen_bool(0.7) {
                actions.push(scalar_action("R", Side::Right, b, &psi, &carrier));
            }
            Multimodule::new(carrier, actions).ok()?
        }
        4 => {
            let a = algebra(r, n, 3);
            Multimodule::left_regular(&a, "L").ok()?
        }
        5 => {
            let a = algebra(r, n, 3);
            Multimodule::right_regular(&a, "R").ok()?
        }
        6 => {
            let k = r.gen_range(1..=3);
            let rels: Vec<Vec<u64>> = (0..r.gen_range(0..2))
                .map(|_| (0..k).map(|_| r.gen_range(0..n)).collect())
                .collect();
            Multimodule::plain(FpModule::new(m, k, &rels).ok()?)
        }
        _ => {
            let a = algebra(r, n, 2);
            let b = algebra(r, n, 2);
            let points = r.gen_range(1..=2);
            let lefts = vec![("L".to_string(), a)];
            let rights = if r.gen_bool(0.5) { vec![("R".to_string(), b)] } else { vec![] };
            free_multimodule(m, points, &lefts, &rights).ok()?.result
        }
    };
    if out.check().holds() {
        Some(out)
    } else {
        None
    }
}

/// Every plain selection of left and right labels.
pub fn selections(m: &Multimodule) -> Vec<DualSelection> {
    let lefts = m.labels(Side::Left);
    let rights = m.labels(Side::Right);
    let mut out = Vec::new();
    for lm in 0..(1usize << lefts.len()) {
        for rm in 0..(1usize << rights.len()) {
            let l: Vec<&str> = (0..lefts.len()).filter(|i| lm >> i & 1 == 1).map(|i| lefts[i].as_str()).collect();
            let rr: Vec<&str> = (0..rights.len()).filter(|i| rm >> i & 1 == 1).map(|i| rights[i].as_str()).collect();
            out.push(DualSelection::new(&l, &rr));
        }
    }
    out
}

/// A uniformly random element of a solved map space.
pub fn random_element(r: &mut ChaCha8Rng, space: &MapSpace) -> Mat {
    let n = space.source().modulus().value();
    let c: Vec<u64> = (0..space.module().ngens()).map(|_| r.gen_range(0..n)).collect();
    space.element(&c)
}

/// A random matrix of the given shape.
pub fn random_mat(r: &mut ChaCha8Rng, n: u64, rows: usize, cols: usize) -> Mat {
    let data = (0..rows * cols).map(|_| r.gen_range(0..n)).collect();
    Mat::from_data(md(n), rows, cols, data).unwrap()
}

/// Transposition of 2x2 matrices on the basis `E11, E12, E21, E22`.
pub fn matrix_transpose(n: u64) -> Mat {
    let mut t = Mat::zeros(md(n), 4, 4);
    for r in 0..2 {
        for c in 0..2 {
            t.set(c * 2 + r, r * 2 + c, 1);
        }
    }
    t
}

fn swap_entries(left: &str, right: &str, dag: AlgebraInvolution) -> Vec<InvolutionEntry> {
    vec![
        InvolutionEntry {
            label: left.into(),
            partner: right.into(),
            dagger: dag.clone(),
        },
        InvolutionEntry {
            label: right.into(),
            partner: left.into(),
            dagger: dag,
        },
    ]
}

/// A regular bimodule with an involution exchanging its two actions.
///
/// Commutative algebras use the identity, 2x2 matrices use transposition.
pub fn involutive_regular(r: &mut ChaCha8Rng, n: u64, left: &str, right: &str) -> (Multimodule, MultimoduleInvolution) {
    let (a, star) = if r.gen_bool(0.3) {
        (Algebra::matrices2(md(n)), matrix_transpose(n))
    } else {
        let a = commutative_algebra(r, n, 3);
        let id = Mat::identity(md(n), a.rank());
        (a, id)
    };
    let m = Multimodule::regular(&a, left, right).unwrap();
    let dag = AlgebraInvolution::plain(a, star.clone(), Variance::Contravariant).unwrap();
    (m, MultimoduleInvolution::new(swap_entries(left, right, dag), star))
}
