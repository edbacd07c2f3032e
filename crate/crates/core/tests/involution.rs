mod common;

use common::*;
use multimod_core::constructions::{hom_involution, hom_multimodule, tensor_involution, tensor_over};
use multimod_core::Mat;
use proptest::prelude::*;
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn involutions_square_to_the_identity(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = MODULI[r.gen_range(0..MODULI.len())];
        let (m, inv) = involutive_regular(&mut r, n, "L", "R");
        let rep = inv.check(&m);
        prop_assert!(rep.holds(), "{}", rep);
        prop_assert_eq!(inv.star.mul_unchecked(&inv.star), Mat::identity(md(n), m.ngens()));
        let x: Vec<u64> = (0..m.ngens()).map(|_| r.gen_range(0..n)).collect();
        prop_assert_eq!(inv.apply(&m, &inv.apply(&m, &x)), m.carrier().reduce(&x));
        prop_assert!(inv.as_morphism(&m).unwrap().check().holds());
    }

    #[test]
    fn hom_inherits_an_involution(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = MODULI[r.gen_range(0..MODULI.len())];
        let (m, im) = involutive_regular(&mut r, n, "L", "R");
        let (k, ik) = involutive_regular(&mut r, n, "L", "R");
        let h = hom_multimodule(&m, &k).unwrap();
        let ih = hom_involution(&h, &im, &ik).unwrap();
        let rep = ih.check(&h.result);
        prop_assert!(rep.holds(), "{}", rep);
    }

    #[test]
    fn tensor_inherits_an_involution(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = MODULI[r.gen_range(0..MODULI.len())];
        let (x, ix) = involutive_regular(&mut r, n, "L", "R");
        let (y, iy) = involutive_regular(&mut r, n, "L2", "R2");
        let tp = tensor_over(&x, &y, &[]).unwrap();
        let it = tensor_involution(&tp, &x, &y, &ix, &iy).unwrap();
        let rep = it.check(&tp.result);
        prop_assert!(rep.holds(), "{}", rep);
    }
}
