mod common;

use common::*;
use multimod_core::duality::DualSelection;
use multimod_core::inner_product::{classify, form_from_fn, riesz, InnerProduct};
use multimod_core::multimodule::Multimodule;
use multimod_core::{Algebra, AlgebraInvolution, Mat, Variance};
use proptest::prelude::*;
use rand::Rng;

/// The multiplication form `<x, y> = xy` on the regular bimodule of a commutative algebra.
fn product_form(a: &Algebra, scale: u64) -> InnerProduct {
    let m = Multimodule::regular(a, "L", "R").unwrap();
    let stars = m
        .actions()
        .iter()
        .map(|x| (x.label.clone(), AlgebraInvolution::identity(&x.algebra, Variance::Contravariant)))
        .collect();
    let md = a.modulus();
    let form = form_from_fn(md, a.rank(), a.rank(), |i, j| {
        a.mul(&a.generator(i), &a.generator(j)).iter().map(|&v| md.mul(v, scale)).collect()
    });
    InnerProduct::right(m, stars, DualSelection::new(&[], &["R"]), form).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn product_form_is_perfect(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = MODULI[r.gen_range(0..MODULI.len())];
        let a = commutative_algebra(&mut r, n, 3);
        let ip = product_form(&a, 1);
        let rep = ip.check();
        prop_assert!(rep.holds(), "{}", rep);
        prop_assert!(ip.is_hermitian().unwrap());
        let c = classify(&ip).unwrap();
        prop_assert!(c.nondegenerate && c.full && c.saturated);
        prop_assert!(c.forward_kernel.is_empty() && c.backward_kernel.is_empty());
        let forward = riesz(&ip).unwrap().forward.map;
        prop_assert_eq!(c.inverse.unwrap().mul_unchecked(&forward), Mat::identity(md(n), a.rank()));
    }

    #[test]
    fn scaling_by_a_zero_divisor_degenerates(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = [4u64, 6, 9][r.gen_range(0..3)];
        let p = (2..n).find(|d| n.is_multiple_of(*d)).unwrap();
        let a = commutative_algebra(&mut r, n, 3);
        let ip = product_form(&a, p);
        prop_assert!(ip.check().holds());
        let c = classify(&ip).unwrap();
        prop_assert!(!c.nondegenerate && !c.full && !c.saturated);
        prop_assert!(!c.forward_kernel.is_empty());
        prop_assert!(c.inverse.is_none());
    }

    #[test]
    fn adjoint_is_an_involution(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = MODULI[r.gen_range(0..MODULI.len())];
        let a = commutative_algebra(&mut r, n, 3);
        let mut ip = product_form(&a, 1);
        ip.form = random_mat(&mut r, n, ip.form.rows(), ip.form.cols());
        prop_assert_eq!(&ip.adjoint().unwrap().adjoint().unwrap().form, &ip.form);
        prop_assert_eq!(&ip.transpose().transpose().form, &ip.form);
    }
}
