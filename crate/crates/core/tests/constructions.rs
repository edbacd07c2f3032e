mod common;

use common::*;
use multimod_core::constructions::{free_multimodule, hom_multimodule, tensor_over, twist};
use multimod_core::morphism::{equivariant_space, Signature};
use multimod_core::{FpModule, ModuleMap};
use proptest::prelude::*;
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hom_is_a_multimodule_with_the_right_order(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = MODULI[r.gen_range(0..MODULI.len())];
        let m = multimodule(&mut r, n);
        let k = multimodule(&mut r, n);
        let h = hom_multimodule(&m, &k).unwrap();
        let rep = h.result.check();
        prop_assert!(rep.holds(), "{}", rep);
        prop_assert_eq!(h.result.actions().len(), m.actions().len() + k.actions().len());
        let x = random_element(&mut r, &h.space);
        prop_assert!(h.space.contains(&x));
    }

    #[test]
    fn tensor_over_z_multiplies_free_ranks(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = MODULI[r.gen_range(0..MODULI.len())];
        let m = multimodule(&mut r, n);
        let k = multimodule(&mut r, n);
        let tp = tensor_over(&m, &k, &[]).unwrap();
        prop_assert!(tp.result.check().holds());
        let eta = ModuleMap::new(FpModule::free(md(n), tp.eta.cols()), tp.result.carrier().clone(), tp.eta.clone()).unwrap();
        prop_assert!(eta.is_surjective());
        let (fm, fk) = (m.carrier().invariant_factors(), k.carrier().invariant_factors());
        if fm.iter().chain(&fk).all(|&d| d == n) {
            let expected = (n as u128).pow((fm.len() * fk.len()) as u32);
            prop_assert_eq!(tp.result.carrier().order(), Some(expected));
        }
    }

    #[test]
    fn free_multimodules_have_free_carriers(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = MODULI[r.gen_range(0..MODULI.len())];
        let lefts = vec![("L".to_string(), algebra(&mut r, n, 2))];
        let rights = if r.gen_bool(0.5) { vec![("R".to_string(), algebra(&mut r, n, 2))] } else { vec![] };
        let points = r.gen_range(1..=2);
        let f = free_multimodule(md(n), points, &lefts, &rights).unwrap();
        prop_assert!(f.result.check().holds());
        let rank: usize = lefts.iter().chain(&rights).map(|(_, a)| a.rank()).product::<usize>() * points;
        prop_assert_eq!(f.result.carrier().order(), Some((n as u128).pow(rank as u32)));
        prop_assert_eq!((f.unit.rows(), f.unit.cols()), (f.result.ngens(), points));
    }

    #[test]
    fn identity_twist_is_isomorphic(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = MODULI[r.gen_range(0..MODULI.len())];
        let m = multimodule(&mut r, n);
        let (tw, theta) = twist(&m, &Signature::identity(&m)).unwrap();
        prop_assert!(tw.check().holds());
        prop_assert!(theta.check().holds());
        prop_assert!(theta.module_map().unwrap().is_isomorphism());
        let ends = equivariant_space(&m, &tw).unwrap();
        prop_assert!(ends.contains(&theta.map));
    }
}
