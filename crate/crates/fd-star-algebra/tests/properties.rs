use fd_star_algebra::embedding::{diagonal_subalgebra, scalars};
use fd_star_algebra::linalg::{distance, re};
use fd_star_algebra::*;
use proptest::prelude::*;

fn element(alg: &MultiMatrixAlgebra, coeffs: &[(f64, f64)]) -> Element {
    Element::from_fn(alg.dim(), |i, _| C64::new(coeffs[i % coeffs.len()].0, coeffs[i % coeffs.len()].1))
}

// Independent oracle: E(x) solves the Gram system τ(s_i^* E(x)) = τ(s_i^* x)
// over the sub basis, assembled with dense products and a generic solver.
fn oracle_expectation(sub: &SubalgebraEmbedding, t: &TraceState, x: &Element) -> Element {
    let a = sub.ambient();
    let k = sub.sub().dim();
    let s: Vec<Element> = (0..k).map(|i| sub.image(i)).collect();
    let gram = Matrix::from_fn(k, k, |i, j| t.eval(a, &a.mul(&a.adjoint(&s[i]), &s[j])));
    let rhs = Vector::from_fn(k, |i, _| t.eval(a, &a.mul(&a.adjoint(&s[i]), x)));
    let c = gram.lu().solve(&rhs).unwrap();
    sub.map(&c)
}

#[test]
fn weighted_diagonal_expectation_of_flip_is_zero() {
    // M_2 carries a unique trace, so the weights (1/3, 2/3) enter as the
    // weighted inner product φ(x* y) with density diag(1/3, 2/3); the
    // orthogonality equations φ(f_kk^* (E(x) - x)) = 0 are solved by hand.
    let amb = MultiMatrixAlgebra::full(2);
    let sub = diagonal_subalgebra(&amb);
    let x = Element::from_vec(vec![re(0.0), re(1.0), re(1.0), re(0.0)]);
    let w = [1.0 / 3.0, 2.0 / 3.0];
    let solved: Vec<f64> = (0..2).map(|k| w[k] * x[amb.index(0, k, k)].re / w[k]).collect();
    assert_eq!(solved, vec![0.0, 0.0]);
    let t = TraceState::uniform(&amb);
    let e = conditional_expectation(&sub, &t, &x).unwrap();
    assert!(e.norm() < 1e-14);
    assert!(distance(e.as_slice(), oracle_expectation(&sub, &t, &x).as_slice()) < 1e-14);
}

#[test]
fn commutant_of_diagonal_in_m2() {
    let m2 = MultiMatrixAlgebra::full(2);
    let c = relative_commutant(&diagonal_subalgebra(&m2)).unwrap();
    assert_eq!(c.sub().blocks(), &[1, 1]);
    assert_eq!(inclusion_matrix(&c).unwrap().entries, vec![vec![1], vec![1]]);
}

#[test]
fn center_of_m2_plus_m3() {
    let a = MultiMatrixAlgebra::new(vec![2, 3]).unwrap();
    let z = center(&a);
    assert_eq!(z.sub().dim(), 2);
    // the center is the intersection of the algebra with its commutant
    let c = relative_commutant(&SubalgebraEmbedding::identity(&a)).unwrap();
    assert_eq!(c.sub().dim(), 2);
}

#[test]
fn markov_trace_examples() {
    let one = InclusionMatrix::new(vec![vec![1]], vec![3], vec![3]).unwrap();
    let (li, t) = markov_trace(&one).unwrap();
    assert!((li - 1.0).abs() < 1e-14 && (t[0] - 1.0 / 3.0).abs() < 1e-14);
    let l = InclusionMatrix::new(vec![vec![1, 1]], vec![1], vec![1, 1]).unwrap();
    assert!((markov_trace(&l).unwrap().0 - 2.0).abs() < 1e-14);
}

#[test]
fn iterated_basic_construction_follows_reflection() {
    // ℂ ⊂ ℂ² ⊂ M₂ ⊂ M₂ ⊕ M₂
    let c2 = MultiMatrixAlgebra::diagonal(2);
    let cfg = Config::default();
    let t = TraceState::uniform(&c2);
    let first = basic_construction(&scalars(&c2), &t, 0.5, &cfg).unwrap();
    assert_eq!(first.algebra.blocks(), &[2]);
    let second = basic_construction(&first.embedding, &first.trace, 0.5, &cfg).unwrap();
    let lam = inclusion_matrix(&first.embedding).unwrap();
    assert_eq!(second.algebra.blocks(), lam.reflect().ambient_sizes.as_slice());
    let (exe, markov) = second.markov_residuals(&first.embedding, &first.trace).unwrap();
    assert!(exe < 1e-12 && markov < 1e-12);
    assert_eq!(second.span_rank(), second.algebra.dim());
}

#[test]
fn general_subalgebra_decomposition_recovers_commutant() {
    let a = MultiMatrixAlgebra::new(vec![3, 2]).unwrap();
    let d = diagonal_subalgebra(&a);
    let c = relative_commutant(&d).unwrap();
    let e = decompose_subalgebra(&a, c.images(), &Config::default()).unwrap();
    assert_eq!(e.sub().dim(), c.sub().dim());
    for i in 0..e.sub().dim() {
        assert!(c.membership_residual(&e.image(i)) < 1e-10);
    }
}

fn coeffs() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..40)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn expectation_properties(xc in coeffs(), yc in coeffs(), ac in coeffs(), w in 0.1..0.9f64) {
        let amb = MultiMatrixAlgebra::new(vec![2, 1]).unwrap();
        let t = TraceState::new(vec![w / 2.0, 1.0 - w]).unwrap();
        let sub = diagonal_subalgebra(&amb);
        let ex = Expectation::new(&sub, &t).unwrap();
        let x = element(&amb, &xc);
        let y = sub.map(&sub.coords(&element(&amb, &yc)));
        let a = sub.map(&sub.coords(&element(&amb, &ac)));
        let e = ex.apply(&x);
        prop_assert!((t.eval(&amb, &amb.mul(&e, &y)) - t.eval(&amb, &amb.mul(&x, &y))).norm() < 1e-12);
        prop_assert!(distance(ex.apply(&e).as_slice(), e.as_slice()) < 1e-12);
        let lhs = ex.apply(&amb.mul3(&a, &x, &y));
        let rhs = amb.mul3(&a, &e, &y);
        prop_assert!(distance(lhs.as_slice(), rhs.as_slice()) < 1e-12);
        prop_assert!(distance(e.as_slice(), oracle_expectation(&sub, &t, &x).as_slice()) < 1e-10);
    }

    #[test]
    fn trace_is_tracial(xc in coeffs(), yc in coeffs(), w0 in 0.01..1.0f64, w1 in 0.01..1.0f64) {
        let amb = MultiMatrixAlgebra::new(vec![3, 2]).unwrap();
        let t = TraceState::new(vec![w0, w1]).unwrap();
        let x = element(&amb, &xc);
        let y = element(&amb, &yc);
        prop_assert!((t.eval_product(&amb, &x, &y) - t.eval_product(&amb, &y, &x)).norm() < 1e-12);
        prop_assert!(t.eval(&amb, &amb.mul(&amb.adjoint(&x), &x)).re >= -1e-14);
    }

    #[test]
    fn product_is_associative_and_adjoint_reverses(xc in coeffs(), yc in coeffs(), zc in coeffs()) {
        let amb = MultiMatrixAlgebra::new(vec![1, 3, 2]).unwrap();
        let (x, y, z) = (element(&amb, &xc), element(&amb, &yc), element(&amb, &zc));
        let l = amb.mul(&amb.mul(&x, &y), &z);
        let r = amb.mul(&x, &amb.mul(&y, &z));
        prop_assert!(distance(l.as_slice(), r.as_slice()) < 1e-12);
        let a = amb.adjoint(&amb.mul(&x, &y));
        let b = amb.mul(&amb.adjoint(&y), &amb.adjoint(&x));
        prop_assert!(distance(a.as_slice(), b.as_slice()) < 1e-12);
    }

    #[test]
    fn markov_vector_is_an_eigenvector(entries in prop::collection::vec(1usize..3, 6)) {
        let rows = vec![entries[0..3].to_vec(), entries[3..6].to_vec()];
        let lam = InclusionMatrix::new(rows.clone(), vec![1, 1], vec![entries[0] + entries[3], entries[1] + entries[4], entries[2] + entries[5]]).unwrap();
        let (li, t) = markov_trace(&lam).unwrap();
        let l = lam.as_matrix();
        let g = &l * l.transpose();
        let tv = nalgebra::DVector::from_vec(t.clone());
        prop_assert!((&g * &tv - &tv * li).amax() < 1e-9);
        prop_assert!(t.iter().all(|&x| x > 0.0));
    }

    #[test]
    fn uniform_watatani_index(blocks in prop::collection::vec(1usize..4, 1..4)) {
        let a = MultiMatrixAlgebra::new(blocks.clone()).unwrap();
        let d = a.dim();
        // τ_α = m_α / d is normalized and gives Index = d·1
        let t = TraceState::new(blocks.iter().map(|&m| m as f64 / d as f64).collect()).unwrap();
        let idx = watatani_index(&a, &t).unwrap();
        prop_assert!(distance((idx / re(d as f64)).as_slice(), a.unit().as_slice()) < 1e-12);
    }
}
