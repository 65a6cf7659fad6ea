use fd_star_algebra::{Element, MultiMatrixAlgebra, Report, C64};
use proptest::prelude::*;
use workbench_cli::codec::{element, to_element};
use workbench_cli::{Kind, VerificationReport, WorkbenchObject};

fn algebra_and_element() -> impl Strategy<Value = (Vec<usize>, Vec<(f64, f64)>)> {
    prop::collection::vec(1usize..4, 1..4).prop_flat_map(|blocks| {
        let d: usize = blocks.iter().map(|n| n * n).sum();
        (Just(blocks), prop::collection::vec((any::<f64>(), any::<f64>()), d))
    })
}

proptest! {
    #[test]
    fn elements_round_trip_bit_exactly((blocks, coeffs) in algebra_and_element()) {
        prop_assume!(coeffs.iter().all(|(a, b)| a.is_finite() && b.is_finite()));
        let alg = MultiMatrixAlgebra::new(blocks).unwrap();
        let x = Element::from_iterator(alg.dim(), coeffs.iter().map(|&(a, b)| C64::new(a, b)));
        let o = WorkbenchObject::new(Kind::Element, element(&alg, &x), 1e-9, 0);
        let back = WorkbenchObject::parse(&o.to_json()).unwrap();
        let (alg2, y) = to_element(&back.payload).unwrap();
        prop_assert_eq!(alg2, alg);
        for (p, q) in x.iter().zip(y.iter()) {
            prop_assert_eq!(p.re.to_bits(), q.re.to_bits());
            prop_assert_eq!(p.im.to_bits(), q.im.to_bits());
        }
        prop_assert_eq!(back.to_json(), o.to_json());
    }

    #[test]
    fn report_pass_flag_follows_residuals(rows in prop::collection::vec((0.0..1e-6f64, 1e-12..1e-6f64), 1..12)) {
        let mut r = Report::new("rows");
        for (k, (res, tol)) in rows.iter().enumerate() {
            r.check(&format!("row {k}"), "tag", *res, *tol);
        }
        let mut v = VerificationReport::new("weak Kac", 1e-9, 0);
        v.push(r);
        let expect = rows.iter().all(|(res, tol)| res <= tol);
        prop_assert_eq!(v.passed(), expect);
        let j = v.to_json();
        prop_assert_eq!(j["passed"].as_bool().unwrap(), expect);
        let back = VerificationReport::from_json(&j).unwrap();
        prop_assert_eq!(back.emit(true), v.emit(true));
    }
}
