use fd_star_algebra::linalg::{distance, re, ONE};
use fd_star_algebra::{Config, Matrix, Vector};
use weak_hopf_core::*;

const TOL: f64 = 1e-9;

fn cfg() -> Config {
    Config::default()
}

fn all_examples() -> Vec<(String, WeakHopfData)> {
    let mut v = Vec::new();
    for n in 1..=3 {
        v.push((format!("pair_groupoid({n})"), pair_groupoid(n).unwrap()));
    }
    for n in 2..=5 {
        let g = FiniteGroup::cyclic(n).unwrap();
        v.push((format!("C[Z/{n}]"), group_algebra(&g, &cfg()).unwrap().data));
        v.push((format!("C^Z/{n}"), function_algebra(&g).unwrap()));
    }
    let s3 = FiniteGroup::symmetric(3).unwrap();
    v.push(("C[S3]".into(), group_algebra(&s3, &cfg()).unwrap().data));
    v.push(("C^S3".into(), function_algebra(&s3).unwrap()));
    v
}

#[test]
fn generated_examples_satisfy_the_axioms() {
    for (name, w) in all_examples() {
        let r = verify_axioms(&w, TOL);
        assert!(r.report.passed(), "{name}: {}", r.report);
        assert_eq!(r.classification, Classification::WeakKac, "{name}");
    }
}

#[test]
fn pair_groupoid_antipode_squares_to_identity_exactly() {
    for n in 1..=3 {
        let w = pair_groupoid(n).unwrap();
        assert_eq!(&w.antipode * &w.antipode, Matrix::identity(w.dim(), w.dim()));
        assert_eq!(verify_axioms(&w, TOL).s_squared, 0.0);
    }
}

#[test]
fn broken_counit_fails_the_counit_law() {
    let mut w = pair_groupoid(2).unwrap();
    for j in 0..4 {
        let (_, k, l) = w.algebra.locate(j);
        w.epsilon[j] = if k == l { ONE } else { re(0.0) };
    }
    let r = verify_axioms(&w, TOL);
    assert_eq!(r.classification, Classification::Invalid);
    let c = r.report.get("left counit").unwrap();
    assert!(!c.passed && c.residual >= 1.0 - 1e-12);
}

#[test]
fn counital_maps_of_pair_groupoid() {
    let w = pair_groupoid(3).unwrap();
    let et = w.target_map();
    let es = w.source_map();
    for i in 0..3 {
        for j in 0..3 {
            let e = w.algebra.basis(w.algebra.index(0, i, j));
            assert_eq!(&et * &e, w.algebra.basis(w.algebra.index(0, i, i)));
            assert_eq!(&es * &e, w.algebra.basis(w.algebra.index(0, j, j)));
        }
    }
    let c = cartan_subalgebras(&w, TOL).unwrap();
    assert_eq!((c.target_dim(), c.source_dim()), (3, 3));
    assert!(c.report.passed(), "{}", c.report);
}

#[test]
fn group_algebra_counital_map_is_counit_times_unit() {
    let ga = group_algebra(&FiniteGroup::cyclic(4).unwrap(), &cfg()).unwrap();
    let et = ga.data.target_map();
    for g in 0..4 {
        let x = ga.element(g);
        let lhs = &et * &x;
        let rhs = ga.data.unit() * ga.data.counit(&x);
        assert!(distance(lhs.as_slice(), rhs.as_slice()) < 1e-12);
    }
    let c = cartan_subalgebras(&ga.data, TOL).unwrap();
    assert_eq!(c.target_dim(), 1);
    let f = function_algebra(&FiniteGroup::cyclic(4).unwrap()).unwrap();
    assert_eq!(cartan_subalgebras(&f, TOL).unwrap().target_dim(), 1);
}

// Independent oracle for the integrals: the hand formulas of the examples.
#[test]
fn haar_integrals_of_pair_groupoids() {
    for n in 1..=3 {
        let w = pair_groupoid(n).unwrap();
        let (h, r) = haar(&w, true, TOL).unwrap();
        assert!(r.passed(), "{r}");
        let p = Vector::from_element(n * n, re(1.0 / n as f64));
        assert!(distance(h.projection.as_slice(), p.as_slice()) < TOL);
        for i in 0..n * n {
            let (_, k, l) = w.algebra.locate(i);
            let expect = if k == l { 1.0 } else { 0.0 };
            assert!((h.functional[i] - re(expect)).norm() < TOL);
        }
        assert!((h.functional.dot(&w.unit()) - re(n as f64)).norm() < TOL);
    }
}

#[test]
fn haar_integrals_of_group_algebras() {
    let groups = [
        FiniteGroup::cyclic(2).unwrap(),
        FiniteGroup::cyclic(3).unwrap(),
        FiniteGroup::cyclic(5).unwrap(),
        FiniteGroup::symmetric(3).unwrap(),
    ];
    for g in groups {
        let ga = group_algebra(&g, &cfg()).unwrap();
        let (h, r) = haar(&ga.data, true, TOL).unwrap();
        assert!(r.passed(), "{r}");
        assert!(distance(h.projection.as_slice(), ga.average().as_slice()) < TOL);
        for x in 0..g.order() {
            let expect = if x == g.identity() { 1.0 } else { 0.0 };
            assert!((h.functional.dot(&ga.element(x)) - re(expect)).norm() < TOL);
        }
    }
}

#[test]
fn haar_projection_of_z2_is_average() {
    let ga = group_algebra(&FiniteGroup::cyclic(2).unwrap(), &cfg()).unwrap();
    let p = haar_projection(&ga.data, TOL).unwrap();
    let expect = (ga.element(0) + ga.element(1)) * re(0.5);
    assert!(distance(p.as_slice(), expect.as_slice()) < 1e-12);
}

#[test]
fn trivial_algebra() {
    let w = pair_groupoid(1).unwrap();
    assert_eq!(w.delta[(0, 0)], ONE);
    let (h, _) = haar(&w, true, TOL).unwrap();
    assert!((h.projection[0] - ONE).norm() < 1e-12);
    assert!((h.functional[0] - ONE).norm() < 1e-12);
    let c = connectedness(&w, &cfg()).unwrap();
    assert!(c.connected && c.dual_connected && c.biconnected);
}

#[test]
fn double_dual_is_the_identity() {
    for (name, w) in all_examples() {
        let r = double_dual_residual(&w, &cfg()).unwrap();
        assert!(r <= 1e-12, "{name}: {r:e}");
    }
}

#[test]
fn duals_are_commutative_where_expected() {
    for n in 2..=5 {
        let ga = group_algebra(&FiniteGroup::cyclic(n).unwrap(), &cfg()).unwrap();
        let d = dual_algebra(&ga.data, &cfg()).unwrap();
        assert!(d.data.algebra.is_commutative());
        assert_eq!(d.data.dim(), n);
        assert!(verify_axioms(&d.data, TOL).report.passed());
    }
    let d = dual_algebra(&pair_groupoid(2).unwrap(), &cfg()).unwrap();
    assert!(d.data.algebra.is_commutative());
    assert_eq!(d.data.dim(), 4);
}

#[test]
fn s3_group_algebra_blocks() {
    let ga = group_algebra(&FiniteGroup::symmetric(3).unwrap(), &cfg()).unwrap();
    assert_eq!(ga.data.algebra.blocks(), &[1, 1, 2]);
}

#[test]
fn connectedness_flags() {
    for n in 2..=5 {
        let ga = group_algebra(&FiniteGroup::cyclic(n).unwrap(), &cfg()).unwrap();
        let c = connectedness(&ga.data, &cfg()).unwrap();
        assert!(c.connected && c.dual_connected && c.biconnected, "Z/{n}");
    }
    for n in 2..=3 {
        let c = connectedness(&pair_groupoid(n).unwrap(), &cfg()).unwrap();
        assert!(c.connected && !c.dual_connected && !c.biconnected, "pair groupoid {n}");
    }
}
