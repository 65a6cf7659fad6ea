use fd_star_algebra::linalg::distance;
use fd_star_algebra::{Config, Element, C64};
use proptest::prelude::*;
use weak_hopf_core::*;

fn example(k: usize) -> WeakHopfData {
    match k % 4 {
        0 => pair_groupoid(2).unwrap(),
        1 => pair_groupoid(3).unwrap(),
        2 => group_algebra(&FiniteGroup::symmetric(3).unwrap(), &Config::default()).unwrap().data,
        _ => function_algebra(&FiniteGroup::cyclic(4).unwrap()).unwrap(),
    }
}

fn element(d: usize, c: &[(f64, f64)]) -> Element {
    Element::from_fn(d, |i, _| C64::new(c[i % c.len()].0, c[i % c.len()].1))
}

fn coeffs() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn counital_maps_are_idempotent(k in 0usize..4, xc in coeffs()) {
        let w = example(k);
        let x = element(w.dim(), &xc);
        let et = w.target_map();
        let es = w.source_map();
        prop_assert!(distance((&et * (&et * &x)).as_slice(), (&et * &x).as_slice()) < 1e-12);
        prop_assert!(distance((&es * (&es * &x)).as_slice(), (&es * &x).as_slice()) < 1e-12);
    }

    #[test]
    fn target_elements_satisfy_the_coproduct_characterization(k in 0usize..4, xc in coeffs()) {
        let w = example(k);
        let z = w.target_map() * element(w.dim(), &xc);
        let c1 = w.coproduct(&w.unit());
        let dz = w.coproduct(&z);
        let rhs = w.algebra.left_mul_matrix(&z) * &c1;
        prop_assert!(distance(dz.as_slice(), rhs.as_slice()) < 1e-12);
    }

    #[test]
    fn antipode_is_anti_multiplicative(k in 0usize..4, xc in coeffs(), yc in coeffs()) {
        let w = example(k);
        let x = element(w.dim(), &xc);
        let y = element(w.dim(), &yc);
        let lhs = w.antipode_of(&w.mul(&x, &y));
        let rhs = w.mul(&w.antipode_of(&y), &w.antipode_of(&x));
        prop_assert!(distance(lhs.as_slice(), rhs.as_slice()) < 1e-10);
    }

    #[test]
    fn haar_functional_is_a_positive_trace(k in 0usize..4, xc in coeffs(), yc in coeffs()) {
        let w = example(k);
        let phi = haar_functional(&w, 1e-9).unwrap();
        let x = element(w.dim(), &xc);
        let y = element(w.dim(), &yc);
        prop_assert!((phi.dot(&w.mul(&x, &y)) - phi.dot(&w.mul(&y, &x))).norm() < 1e-10);
        prop_assert!(phi.dot(&w.mul(&w.star(&x), &x)).re >= -1e-12);
    }
}
