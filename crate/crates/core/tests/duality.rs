mod common;

use common::*;
use multimod_core::duality::{check_naturality, dual, evaluation, semi_adjunction, transpose};
use multimod_core::morphism::{equivariant_space, Morphism, Signature};
use multimod_core::oracle::is_dual_map;
use proptest::prelude::*;
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn semi_adjunction_identities_hold(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = MODULI[r.gen_range(0..MODULI.len())];
        let m = multimodule(&mut r, n);
        let sels = selections(&m);
        let sel = &sels[r.gen_range(0..sels.len())];
        let sa = semi_adjunction(&m, sel).unwrap();
        let rep = sa.identity_report();
        prop_assert!(rep.holds(), "{}", rep);
    }

    #[test]
    fn dual_elements_are_dual_maps(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = MODULI[r.gen_range(0..MODULI.len())];
        let m = multimodule(&mut r, n);
        for sel in selections(&m) {
            let d = dual(&m, &sel).unwrap();
            prop_assert!(d.result.check().holds());
            let phi = random_element(&mut r, &d.space);
            prop_assert!(is_dual_map(&m, &sel, &phi));
        }
    }

    #[test]
    fn evaluation_is_natural(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = MODULI[r.gen_range(0..MODULI.len())];
        let m = multimodule(&mut r, n);
        let ends = equivariant_space(&m, &m).unwrap();
        let mu = Morphism::new(m.clone(), m.clone(), Signature::matching(&m, &m).unwrap(), random_element(&mut r, &ends)).unwrap();
        for sel in selections(&m) {
            let rep = check_naturality(&mu, &sel).unwrap();
            prop_assert!(rep.holds(), "{}", rep);
        }
    }

    #[test]
    fn transpose_reverses_composition(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = MODULI[r.gen_range(0..MODULI.len())];
        let m = multimodule(&mut r, n);
        let ends = equivariant_space(&m, &m).unwrap();
        let sig = Signature::matching(&m, &m).unwrap();
        let f = Morphism::new(m.clone(), m.clone(), sig.clone(), random_element(&mut r, &ends)).unwrap();
        let g = Morphism::new(m.clone(), m.clone(), sig.clone(), random_element(&mut r, &ends)).unwrap();
        let gf = Morphism::new(m.clone(), m.clone(), sig, g.map.mul_unchecked(&f.map)).unwrap();
        for sel in selections(&m) {
            let (tf, tg, tgf) = (transpose(&f, &sel).unwrap(), transpose(&g, &sel).unwrap(), transpose(&gf, &sel).unwrap());
            let target = tgf.target.carrier();
            let composite = tf.map.mul_unchecked(&tg.map);
            prop_assert!((0..target.ngens()).all(|j| target.eq_elems(&composite.col(j), &tgf.map.col(j))));
        }
    }

    #[test]
    fn evaluation_lands_in_the_double_dual(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = MODULI[r.gen_range(0..MODULI.len())];
        let m = multimodule(&mut r, n);
        for sel in selections(&m) {
            let e = evaluation(&m, &sel).unwrap();
            let rep = e.theta.check();
            prop_assert!(rep.holds(), "{}", rep);
        }
    }
}
