mod common;

use common::*;
use multimod_core::constructions::tensor_over;
use multimod_core::multimodule::{Multimodule, Side};
use multimod_core::trace::{contraction, is_tracial, tensor_contraction_iso, TraceRelation};
use multimod_core::{Algebra, MapSpace, ModuleMap};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// A random multimodule over `a` carrying left and right actions labelled `prefix + L/R`.
fn over(r: &mut ChaCha8Rng, a: &Algebra, prefix: &str) -> Multimodule {
    let x = Multimodule::regular(a, &format!("{prefix}L"), &format!("{prefix}R")).unwrap();
    if r.gen_bool(0.5) {
        return x;
    }
    let seed: Vec<u64> = (0..x.ngens()).map(|_| r.gen_range(0..a.modulus().value())).collect();
    let (_, inc) = x.submodule_closure(&[seed]).unwrap();
    x.quotient(&inc.matrix().to_cols()).unwrap().0
}

fn relation(m: &Multimodule) -> TraceRelation {
    let l = m.labels(Side::Left)[0].clone();
    let r = m.labels(Side::Right)[0].clone();
    TraceRelation { pairs: vec![(l, r)] }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn projection_is_tracial_and_onto(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = MODULI[r.gen_range(0..MODULI.len())];
        let a = algebra(&mut r, n, 3);
        let m = over(&mut r, &a, "");
        let rel = relation(&m);
        let c = contraction(&m, &rel).unwrap();
        let p = c.projection_map(&m).unwrap();
        prop_assert!(p.is_surjective());
        let rep = is_tracial(&p, &m, &rel).unwrap();
        prop_assert!(rep.holds(), "{}", rep);
        prop_assert!(c.result.check().holds());
    }

    #[test]
    fn tracial_maps_factor_uniquely(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = MODULI[r.gen_range(0..MODULI.len())];
        let a = algebra(&mut r, n, 3);
        let m = over(&mut r, &a, "");
        let c = contraction(&m, &relation(&m)).unwrap();
        let hom = MapSpace::hom(c.result.carrier(), c.result.carrier()).unwrap();
        let h = random_element(&mut r, &hom);
        let t = ModuleMap::new(m.carrier().clone(), c.result.carrier().clone(), h.mul_unchecked(&c.projection)).unwrap();
        let f = c.factor(&t).unwrap().expect("tracial map factors");
        prop_assert!(f.unique);
        let target = c.result.carrier();
        prop_assert!((0..target.ngens()).all(|j| target.eq_elems(&f.map.col(j), &h.col(j))));
    }

    #[test]
    fn contracting_a_tensor_gives_the_balanced_tensor(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = MODULI[r.gen_range(0..MODULI.len())];
        let a = algebra(&mut r, n, 2);
        let m = over(&mut r, &a, "");
        let k = over(&mut r, &a, "u");
        let gamma = vec![("R".to_string(), "uL".to_string())];
        let ci = tensor_contraction_iso(&m, &k, &gamma).unwrap();
        let rep = ci.iso.check();
        prop_assert!(rep.holds(), "{}", rep);
        prop_assert!(ci.iso.module_map().unwrap().is_isomorphism());
        let direct = tensor_over(&m, &k, &gamma).unwrap();
        prop_assert_eq!(direct.result.carrier().order(), ci.contraction.result.carrier().order());
    }
}
