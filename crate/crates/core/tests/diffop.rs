mod common;

use common::*;
use multimod_core::diffop::{commutator_check, commutator_check_selected, diff1, diff1_selected, hom_inclusion};
use multimod_core::morphism::equivariant_space;
use proptest::prelude::*;
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn elements_pass_the_commutator_conditions(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = MODULI[r.gen_range(0..MODULI.len())];
        let m = multimodule(&mut r, n);
        let d = diff1(&m, &m).unwrap();
        let x = random_element(&mut r, &d.space);
        let rep = commutator_check(&x, &m, &m).unwrap();
        prop_assert!(rep.holds(), "{}", rep);
    }

    #[test]
    fn morphisms_are_first_order(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = MODULI[r.gen_range(0..MODULI.len())];
        let m = multimodule(&mut r, n);
        let d = diff1(&m, &m).unwrap();
        let hom = equivariant_space(&m, &m).unwrap();
        prop_assert!(d.contains(&random_element(&mut r, &hom)));
        let (_, inc) = hom_inclusion(&d).unwrap();
        prop_assert!(inc.is_injective());
    }

    #[test]
    fn fewer_labels_give_a_larger_space(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = MODULI[r.gen_range(0..MODULI.len())];
        let m = multimodule(&mut r, n);
        let labels = m.all_labels();
        let some: Vec<String> = labels.iter().filter(|_| r.gen_bool(0.5)).cloned().collect();
        let all = diff1_selected(&m, &m, &labels).unwrap();
        let fewer = diff1_selected(&m, &m, &some).unwrap();
        let x = random_element(&mut r, &all.space);
        prop_assert!(fewer.contains(&x));
        let y = random_element(&mut r, &fewer.space);
        prop_assert!(commutator_check_selected(&y, &m, &m, &some).unwrap().holds());
    }
}
