use multimod_core::howell::{Howell, LinearSolver};
use multimod_core::{iso_test, FpModule, IsoResult, Mat, ModuleMap, Modulus};
use proptest::prelude::*;

fn span_enum(n: u64, cols: usize, gens: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let mut set: Vec<Vec<u64>> = vec![vec![0; cols]];
    for g in gens {
        let mut next = Vec::new();
        for v in &set {
            for k in 0..n {
                next.push(v.iter().zip(g).map(|(&a, &b)| (a + k * b) % n).collect());
            }
        }
        next.sort();
        next.dedup();
        set = next;
    }
    set
}

fn all_vectors(n: u64, len: usize) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::new();
        for v in &out {
            for k in 0..n {
                let mut w: Vec<u64> = v.clone();
                w.push(k);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

/// Counts `#{x : d x = 0}` for every divisor `d` of `n`; this determines a
/// finite Z/n-module up to isomorphism.
fn torsion_profile(md: &FpModule) -> Vec<usize> {
    let n = md.modulus().value();
    let elems = md.elements(1 << 16).unwrap();
    (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .map(|d| {
            elems
                .iter()
                .filter(|x| md.is_zero(&x.iter().map(|&a| a * d % n).collect::<Vec<_>>()))
                .count()
        })
        .collect()
}

fn matrix_strategy(max_rows: usize, cols: usize) -> impl Strategy<Value = (u64, Vec<Vec<u64>>)> {
    prop::sample::select(vec![2u64, 3, 4, 5, 6, 8, 9, 12]).prop_flat_map(move |n| {
        (
            Just(n),
            prop::collection::vec(prop::collection::vec(0..n, cols), 0..=max_rows),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn howell_span_matches_enumeration((n, rows) in matrix_strategy(4, 3)) {
        let m = Modulus::new(n).unwrap();
        let h = Howell::new(m, 3, rows.clone());
        prop_assert_eq!(span_enum(n, 3, &rows), span_enum(n, 3, h.rows()));
        let size: u64 = h.quotient_orders().iter().product();
        prop_assert_eq!(size as usize, span_enum(n, 3, &rows).len());
    }

    #[test]
    fn howell_is_canonical((n, rows) in matrix_strategy(4, 3), seed in 0u64..1000) {
        let m = Modulus::new(n).unwrap();
        let h1 = Howell::new(m, 3, rows.clone());
        let mut shuffled = rows.clone();
        let len = shuffled.len();
        if len > 1 {
            shuffled.rotate_left((seed as usize) % len);
        }
        let mut extra = shuffled.clone();
        if len >= 2 {
            extra.push(shuffled[0].iter().zip(&shuffled[1]).map(|(&a, &b)| (a + 2 * b) % n).collect());
        }
        let h2 = Howell::new(m, 3, extra);
        prop_assert_eq!(h1, h2);
    }

    #[test]
    fn reduce_is_coset_canonical((n, rows) in matrix_strategy(3, 3)) {
        let m = Modulus::new(n).unwrap();
        let h = Howell::new(m, 3, rows.clone());
        let span = span_enum(n, 3, &rows);
        for v in all_vectors(n, 3).into_iter().take(200) {
            let r = h.reduce(&v);
            let diff: Vec<u64> = v.iter().zip(&r).map(|(&a, &b)| (a + n - b) % n).collect();
            prop_assert!(span.binary_search(&diff).is_ok());
            prop_assert_eq!(h.reduce(&r), r.clone());
        }
    }

    #[test]
    fn solver_agrees_with_enumeration((n, rows) in matrix_strategy(3, 3), rel in prop::collection::vec(0u64..12, 2)) {
        let m = Modulus::new(n).unwrap();
        let a = Mat::from_rows(m, 3, &rows).unwrap();
        let r = a.rows();
        let relm = Mat::from_rows(m, r, &if r > 0 { vec![rel.iter().take(r).cloned().chain(std::iter::repeat(0)).take(r).collect()] } else { vec![] }).unwrap();
        let target = FpModule::from_relation_mat(r, &relm).unwrap();
        let s = LinearSolver::new(&a, Some(&relm));
        let kernel_enum: Vec<Vec<u64>> = all_vectors(n, 3).into_iter().filter(|x| target.is_zero(&a.apply(x))).collect();
        let kernel_span = span_enum(n, 3, &s.kernel());
        prop_assert_eq!(kernel_span, kernel_enum);
        for b in all_vectors(n, r).into_iter().take(30) {
            let reachable = all_vectors(n, 3).iter().any(|x| target.eq_elems(&a.apply(x), &b));
            match s.solve(&b) {
                Some(x) => prop_assert!(target.eq_elems(&a.apply(&x), &b)),
                None => prop_assert!(!reachable),
            }
        }
    }

    #[test]
    fn module_order_and_elements((n, rows) in matrix_strategy(3, 3)) {
        let m = Modulus::new(n).unwrap();
        let md = FpModule::new(m, 3, &rows).unwrap();
        let span = span_enum(n, 3, &rows);
        let expected = (n as u128).pow(3) / span.len() as u128;
        prop_assert_eq!(md.order(), Some(expected));
        let elems = md.elements(10_000).unwrap();
        prop_assert_eq!(elems.len() as u128, expected);
        for e in &elems {
            prop_assert_eq!(&md.reduce(e), e);
        }
        let f: u128 = md.invariant_factors().iter().map(|&g| g as u128).product();
        prop_assert_eq!(f, expected);
    }

    #[test]
    fn iso_test_matches_torsion_profile((n, r1) in matrix_strategy(3, 3), r2 in prop::collection::vec(prop::collection::vec(0u64..36, 2), 0..3)) {
        let m = Modulus::new(n).unwrap();
        let a = FpModule::new(m, 3, &r1).unwrap();
        let b = FpModule::new(m, 2, &r2.iter().map(|r| r.iter().map(|x| x % n).collect()).collect::<Vec<_>>()).unwrap();
        let same = torsion_profile(&a) == torsion_profile(&b);
        match iso_test(&a, &b).unwrap() {
            IsoResult::Isomorphic(w) => {
                prop_assert!(same);
                prop_assert!(w.is_isomorphism());
                let inv = w.inverse().unwrap();
                prop_assert!(inv.compose(&w).unwrap().equals(&ModuleMap::identity(&a)));
            }
            IsoResult::NotIsomorphic { .. } => prop_assert!(!same),
        }
    }

    #[test]
    fn kernel_image_orders((n, rows) in matrix_strategy(3, 3)) {
        let m = Modulus::new(n).unwrap();
        let a = Mat::from_rows(m, 3, &rows).unwrap();
        let src = FpModule::free(m, 3);
        let tgt = FpModule::free(m, a.rows());
        let f = ModuleMap::new(src.clone(), tgt, a).unwrap();
        let (k, inc) = f.kernel();
        let (im, _) = f.image();
        prop_assert!(inc.is_injective());
        prop_assert_eq!(k.order().unwrap() * im.order().unwrap(), src.order().unwrap());
        prop_assert!(f.compose(&inc).unwrap().is_zero());
    }
}

#[test]
fn howell_spec_example_mod_12() {
    let m = Modulus::new(12).unwrap();
    let h = Howell::new(m, 2, vec![vec![4, 1], vec![0, 0]]);
    assert_eq!(h.rows().len(), 2);
    assert_eq!(h.pivots()[1], (1, 3));
    assert_eq!(span_enum(12, 2, h.rows()).len(), 12);
}

#[test]
fn quotient_of_z4_by_two() {
    let m = Modulus::new(4).unwrap();
    let p = FpModule::free(m, 1).quotient(&[vec![2]]).unwrap();
    assert_eq!(p.module.order(), Some(2));
    assert_eq!(p.module.invariant_factors(), vec![2]);
}
