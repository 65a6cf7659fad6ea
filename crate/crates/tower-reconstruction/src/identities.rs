//! Residual sweep of the identities satisfied by the reconstructed
//! structure. x, y range over the matrix units of M₁, a over A, b, c over B
//! and z over B_t.

use fd_star_algebra::linalg::{distance, hermitian_eigen, re, ZERO};
use fd_star_algebra::{Element, Matrix, Report};
use weak_hopf_core::verify_axioms;

use crate::pairing::{pair_with_b, pairing_scale};
use crate::reconstruct::ReconstructedStructure;
use crate::tower::TowerData;

fn dv(a: &Element, b: &Element) -> f64 {
    distance(a.as_slice(), b.as_slice())
}

fn dm(a: &Matrix, b: &Matrix) -> f64 {
    distance(a.as_slice(), b.as_slice())
}

/// Row names of the suite, in order.
pub const IDENTITY_NAMES: [&str; 17] = [
    "<a, b1 b2> = <E_M1(b2 a e2), b1> / lambda",
    "<a, target(b)> = d tau(a e1 b e2) / lambda^2 = <E_M(a e1), b> / lambda",
    "b1 (x) target(b2) = 1(1) b (x) 1(2) and b target(c) = eps(b1 c) b2",
    "E_M1(b x e2) = E_M1(e2 x S(b))",
    "S(B_s) = B_t",
    "S^2 = id and S(b)* = S(b*)",
    "S anti-multiplicative and coproduct(S b) = flip (S (x) S) coproduct(b)",
    "coproduct(1) = sum S(f_kl) (x) f_lk / (d tau_alpha), positive in B_s (x) B_t",
    "target(b1) b2 = H b",
    "coproduct(b*) = coproduct(b)*",
    "v_ij e1 = sum_k E_M1(v_ik e1 e2) H^-1 v_kj / lambda",
    "b x = E_M1(b1 x e2) H^-1 b2 / lambda",
    "E_M1(b x y e2) = E_M1(b1 x e2) H^-1 E_M1(b2 y e2) / lambda",
    "coproduct(bc) = coproduct(b)(1 (x) H^-1)coproduct(c)",
    "b1 S(b2 H^-1) = target(b)",
    "target(zb) = z target(b), coproduct(bz) = b1 z (x) b2, b1 S(z) (x) b2 = b1 (x) b2 z",
    "tau o S_B = tau and tau o S_A = tau",
];

/// Tags: the family each identity belongs to.
pub const IDENTITY_TAGS: [&str; 17] = [
    "pairing and products",
    "target counital map",
    "counital identities",
    "antipode exchange",
    "antipode on Cartan subalgebras",
    "antipode involutive",
    "antipode and coproduct",
    "coproduct of the unit",
    "canonical element",
    "coproduct *-preserving",
    "comatrix units and e1",
    "commutation with M1",
    "expectation product formula",
    "twisted multiplicativity",
    "twisted antipode",
    "Cartan module maps",
    "trace invariance",
];

/// Evaluate all identities and return one row per identity.
pub fn identity_suite(t: &TowerData, r: &ReconstructedStructure, tol: f64) -> Report {
    let mut rep = Report::new("identity suite");
    let res = residuals(t, r);
    for ((name, tag), v) in IDENTITY_NAMES.iter().zip(IDENTITY_TAGS).zip(res) {
        rep.check(name, tag, v, tol);
    }
    rep.fact("dim B", t.b.sub().dim());
    rep.fact("dim M1", t.sub_m1.sub().dim());
    rep
}

fn residuals(t: &TowerData, r: &ReconstructedStructure) -> [f64; 17] {
    let w = &r.on_b;
    let balg = &w.algebra;
    let aalg = &r.on_a.algebra;
    let m1alg = t.sub_m1.sub();
    let n = balg.dim();
    let p = &r.pairing.gram;
    let inv = re(1.0 / t.lambda);
    let bb = t.basis_b();
    let ba = t.basis_a();
    let bm1 = t.basis_m1();
    let et = w.target_map();
    let es = w.source_map();
    let s = &w.antipode;
    let cops: Vec<Matrix> = (0..n).map(|j| w.coproduct_of_basis(j)).collect();
    let ax = verify_axioms(w, 0.0);
    let row = |name: &str| ax.report.get(name).map_or(f64::INFINITY, |c| c.residual);
    let mut out = [0.0_f64; 17];

    // 1
    let mut worst = 0.0_f64;
    for (i, a) in ba.iter().enumerate() {
        for (b2i, b2) in bb.iter().enumerate() {
            let rhs = pair_with_b(t, &t.e_m1(&t.mul3(b2, a, &t.e2))) * inv;
            for b1i in 0..n {
                let lhs = balg.basis_product(b1i, b2i).map_or(ZERO, |k| p[(i, k)]);
                worst = worst.max((lhs - rhs[b1i]).norm());
            }
        }
    }
    out[0] = worst;

    // 2
    let pe = p * &et;
    let sc = pairing_scale(t);
    let mut worst = 0.0_f64;
    for (i, a) in ba.iter().enumerate() {
        let ae1 = t.mul(a, &t.e1);
        let via_m = pair_with_b(t, &t.e_m(&ae1)) * inv;
        for (j, b) in bb.iter().enumerate() {
            let direct = t.trace_product(&t.mul(&ae1, b), &t.e2) * sc;
            worst = worst.max((pe[(i, j)] - direct).norm()).max((pe[(i, j)] - via_m[j]).norm());
        }
    }
    out[1] = worst;

    // 3
    out[2] = row("b1 (x) target(b2) = 1(1) b (x) 1(2)").max(row("b target(c) = eps(b1 c) b2"));

    // 4
    let sb: Vec<Element> = (0..n).map(|j| t.b.map(&s.column(j).into_owned())).collect();
    let mut worst = 0.0_f64;
    for (j, b) in bb.iter().enumerate() {
        for x in &bm1 {
            let lhs = t.e_m1(&t.mul3(b, x, &t.e2));
            let rhs = t.e_m1(&t.mul3(&t.e2, x, &sb[j]));
            worst = worst.max(dv(&lhs, &rhs));
        }
    }
    out[3] = worst;

    // 5: S maps B_s into B_t and onto it
    let s_es = s * &es;
    let onto = fd_star_algebra::linalg::rank(&s_es, 1e-9) as f64 - fd_star_algebra::linalg::rank(&et, 1e-9) as f64;
    out[4] = dm(&(&et * &s_es), &s_es).max(onto.abs());

    // 6
    let id = Matrix::identity(n, n);
    let j = w.star_matrix();
    out[5] = dm(&(s * s), &id).max(dm(&(s * &j), &(&j * s.conjugate())));

    // 7
    out[6] = row("S anti-multiplicative").max(row("S anti-comultiplicative"));

    // 8
    let c1 = w.coproduct(&balg.unit());
    let bt = t.b_t.sub();
    let mut formula = Matrix::zeros(n, n);
    for i in 0..bt.dim() {
        let (al, k, l) = bt.locate(i);
        let tau_al = t.trace(&t.b_t.image(bt.index(al, 0, 0))).re;
        let f_kl = t.b.coords(&t.b_t.image(i));
        let f_lk = t.b.coords(&t.b_t.image(bt.index(al, l, k)));
        formula += (s * f_kl) * f_lk.transpose() * re(1.0 / (t.d as f64 * tau_al));
    }
    let tens = w.tensor_square();
    let x1 = tens.from_pairs(&c1);
    let mut lowest = f64::INFINITY;
    for al in 0..tens.algebra.num_blocks() {
        let (vals, _) = hermitian_eigen(&tens.algebra.block(&x1, al));
        lowest = lowest.min(vals.first().copied().unwrap_or(0.0));
    }
    let membership = dm(&(&es * &c1 * et.transpose()), &c1);
    let selfadj = dv(&tens.algebra.adjoint(&x1), &x1);
    out[7] = dm(&formula, &c1).max(membership).max(selfadj).max((-lowest).max(0.0));

    // 9
    let mut worst = 0.0_f64;
    for (jb, x) in cops.iter().enumerate() {
        let lhs = w.multiply_pairs(&(&et * x));
        worst = worst.max(dv(&lhs, &balg.mul(&r.h, &balg.basis(jb))));
    }
    out[8] = worst;

    // 10
    out[9] = row("comultiplication *-preserving");

    // 11
    let v_amb: Vec<Element> = (0..n).map(|i| t.b.map(&r.gram_inverse.column(i).into_owned())).collect();
    let hinv_amb = t.b.map(&r.h_inv);
    let e12 = t.mul(&t.e1, &t.e2);
    let mut worst = 0.0_f64;
    for i in 0..n {
        let (al, ii, jj) = aalg.locate(i);
        let m = aalg.blocks()[al];
        let lhs = t.mul(&v_amb[i], &t.e1);
        let mut rhs = t.ambient.zero();
        for k in 0..m {
            let left = t.e_m1(&t.mul(&v_amb[aalg.index(al, ii, k)], &e12));
            rhs += t.mul3(&left, &hinv_amb, &v_amb[aalg.index(al, k, jj)]);
        }
        worst = worst.max(dv(&lhs, &(rhs * inv)));
    }
    out[10] = worst;

    // 12 and 13: act[p][x] = E_M1(b_p x e2)/λ, once in ambient and once in M₁ coordinates
    let act: Vec<Vec<Element>> = bb
        .iter()
        .map(|b| bm1.iter().map(|x| t.e_m1(&t.mul3(b, x, &t.e2)) * inv).collect())
        .collect();
    let actc: Vec<Vec<Element>> = act.iter().map(|row| row.iter().map(|y| t.sub_m1.coords(y)).collect()).collect();
    let hinv_b: Vec<Element> = (0..n).map(|q| t.b.map(&balg.mul(&r.h_inv, &balg.basis(q)))).collect();
    let mut worst = 0.0_f64;
    for (jb, x) in cops.iter().enumerate() {
        let rows: Vec<(usize, Element)> = (0..n)
            .filter_map(|pp| {
                let mut acc = t.ambient.zero();
                let mut any = false;
                for q in 0..n {
                    if x[(pp, q)] != ZERO {
                        acc += &hinv_b[q] * x[(pp, q)];
                        any = true;
                    }
                }
                any.then_some((pp, acc))
            })
            .collect();
        for (xi, xm) in bm1.iter().enumerate() {
            let lhs = t.mul(&bb[jb], xm);
            let mut rhs = t.ambient.zero();
            for (pp, acc) in &rows {
                rhs += t.mul(&act[*pp][xi], acc);
            }
            worst = worst.max(dv(&lhs, &rhs));
        }
    }
    out[11] = worst;

    let hinv_m1 = t.sub_m1.coords(&hinv_amb);
    let d1 = m1alg.dim();
    let mut worst = 0.0_f64;
    for (jb, x) in cops.iter().enumerate() {
        for yi in 0..d1 {
            // w_p = H⁻¹ Σ_q X[p, q] act[q][y]
            let ws: Vec<(usize, Element)> = (0..n)
                .filter_map(|pp| {
                    let mut acc = m1alg.zero();
                    let mut any = false;
                    for q in 0..n {
                        if x[(pp, q)] != ZERO {
                            acc += &actc[q][yi] * x[(pp, q)];
                            any = true;
                        }
                    }
                    any.then(|| (pp, m1alg.mul(&hinv_m1, &acc)))
                })
                .collect();
            for xi in 0..d1 {
                let lhs = m1alg.basis_product(xi, yi).map_or_else(|| m1alg.zero(), |k| actc[jb][k].clone());
                let mut rhs = m1alg.zero();
                for (pp, wp) in &ws {
                    rhs += m1alg.mul(&actc[*pp][xi], wp);
                }
                worst = worst.max(dv(&lhs, &rhs));
            }
        }
    }
    out[12] = worst;

    // 14
    let lh_t = balg.left_mul_matrix(&r.h_inv).transpose();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for jj in 0..n {
            let lhs = balg.basis_product(i, jj).map_or_else(|| Matrix::zeros(n, n), |k| cops[k].clone());
            let rhs = tens.mul_pairs(&cops[i], &(&cops[jj] * &lh_t));
            worst = worst.max(dm(&lhs, &rhs));
        }
    }
    out[13] = worst;

    // 15
    let m = (s * balg.right_mul_matrix(&r.h_inv)).transpose();
    let mut worst = 0.0_f64;
    for (jb, x) in cops.iter().enumerate() {
        worst = worst.max(dv(&w.multiply_pairs(&(x * &m)), &et.column(jb).into_owned()));
    }
    out[14] = worst;

    // 16
    let mut worst = 0.0_f64;
    for i in 0..bt.dim() {
        let z = t.b.coords(&t.b_t.image(i));
        let lz = balg.left_mul_matrix(&z);
        let rz = balg.right_mul_matrix(&z);
        let rsz = balg.right_mul_matrix(&w.antipode_of(&z));
        worst = worst.max(dm(&(&et * &lz), &(&lz * &et)));
        for (jb, x) in cops.iter().enumerate() {
            let bz = balg.mul(&balg.basis(jb), &z);
            worst = worst.max(dm(&(&rz * x), &w.coproduct(&bz)));
            worst = worst.max(dm(&(&rsz * x), &(x * rz.transpose())));
        }
    }
    out[15] = worst;

    // 17
    let tb = Element::from_iterator(n, bb.iter().map(|b| t.trace(b)));
    let ta = Element::from_iterator(n, ba.iter().map(|a| t.trace(a)));
    out[16] = dv(&(s.transpose() * &tb), &tb).max(dv(&(r.on_a.antipode.transpose() * &ta), &ta));

    out
}
