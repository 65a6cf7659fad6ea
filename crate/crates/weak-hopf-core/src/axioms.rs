use std::fmt;

use fd_star_algebra::linalg::{distance, ZERO};
use fd_star_algebra::{Element, Matrix, Report, C64};

use crate::data::WeakHopfData;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    WeakKac,
    WeakCStarHopf,
    Invalid,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::WeakKac => "weak Kac",
            Classification::WeakCStarHopf => "weak C*-Hopf",
            Classification::Invalid => "invalid",
        })
    }
}

#[derive(Clone, Debug)]
pub struct AxiomReport {
    pub report: Report,
    pub classification: Classification,
    /// max residual of S² = id
    pub s_squared: f64,
    /// max residual of S∘* = *∘S
    pub star_commutation: f64,
}

fn d2(a: &Matrix, b: &Matrix) -> f64 {
    distance(a.as_slice(), b.as_slice())
}

fn dv(a: &Element, b: &Element) -> f64 {
    distance(a.as_slice(), b.as_slice())
}

/// Evaluate every weak Hopf axiom on basis elements (pairs where the axiom
/// is bilinear) and classify the structure.
pub fn verify_axioms(w: &WeakHopfData, tol: f64) -> AxiomReport {
    let d = w.dim();
    let alg = &w.algebra;
    let mut r = Report::new("weak Hopf axioms");
    r.fact("dimension", d);
    r.fact("blocks", format!("{:?}", alg.blocks()));

    let cops: Vec<Matrix> = (0..d).map(|j| w.coproduct_of_basis(j)).collect();
    let basis: Vec<Element> = (0..d).map(|j| alg.basis(j)).collect();

    // coalgebra
    let mut coassoc = 0.0_f64;
    // both sides as D³ arrays indexed (i1, i2, i3), skipping zero coefficients
    let dsq = d * d;
    let cols: Vec<&[C64]> = (0..d).map(|k| &w.delta.as_slice()[k * dsq..(k + 1) * dsq]).collect();
    let mut left = vec![ZERO; dsq * d];
    let mut right = vec![ZERO; dsq * d];
    for p in &cops {
        left.fill(ZERO);
        right.fill(ZERO);
        for k in 0..d {
            for i in 0..d {
                let c = p[(k, i)];
                if c != ZERO {
                    // Δ(b_k) ⊗ b_i
                    for (r, v) in cols[k].iter().enumerate() {
                        left[r * d + i] += c * v;
                    }
                }
                let c = p[(i, k)];
                if c != ZERO {
                    // b_i ⊗ Δ(b_k)
                    for (r, v) in cols[k].iter().enumerate() {
                        right[i * dsq + r] += c * v;
                    }
                }
            }
        }
        let mut worst = 0.0_f64;
        let mut scale = 1.0_f64;
        for (a, b) in left.iter().zip(&right) {
            worst = worst.max((a - b).norm());
            scale = scale.max(a.norm()).max(b.norm());
        }
        coassoc = coassoc.max(worst / scale);
    }
    r.check("coassociativity", "coalgebra", coassoc, tol);
    let (mut lc, mut rc) = (0.0_f64, 0.0_f64);
    for (j, p) in cops.iter().enumerate() {
        lc = lc.max(dv(&(p.transpose() * &w.epsilon), &basis[j]));
        rc = rc.max(dv(&(p * &w.epsilon), &basis[j]));
    }
    r.check("left counit", "coalgebra", lc, tol);
    r.check("right counit", "coalgebra", rc, tol);

    // Δ multiplicative and *-preserving
    let t = w.tensor_square();
    let tens: Vec<Element> = cops.iter().map(|p| t.from_pairs(p)).collect();
    let mut mult = 0.0_f64;
    for i in 0..d {
        for j in 0..d {
            let lhs = match alg.basis_product(i, j) {
                Some(k) => tens[k].clone(),
                None => t.algebra.zero(),
            };
            let rhs = t.algebra.mul(&tens[i], &tens[j]);
            mult = mult.max(dv(&lhs, &rhs));
        }
    }
    r.check("comultiplication multiplicative", "comultiplication", mult, tol);
    let jm = w.star_matrix();
    let mut starp = 0.0_f64;
    for (j, p) in cops.iter().enumerate() {
        let lhs = w.coproduct(&w.star(&basis[j]));
        let rhs = &jm * p.conjugate() * jm.transpose();
        starp = starp.max(d2(&lhs, &rhs));
    }
    r.check("comultiplication *-preserving", "comultiplication", starp, tol);

    // counital maps
    let et = w.target_map();
    let es = w.source_map();
    let eps2 = w.epsilon_products();
    let c1 = w.coproduct(&w.unit());
    let (mut t1, mut t2, mut s1, mut s2) = (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
    for (bi, p) in cops.iter().enumerate() {
        let b = &basis[bi];
        // column c of each side is the identity evaluated at b_c
        t1 = t1.max(d2(&(alg.left_mul_matrix(b) * &et), &(p.transpose() * &eps2)));
        s1 = s1.max(d2(&(alg.right_mul_matrix(b) * &es), &(p * eps2.transpose())));
        let lhs = p * et.transpose();
        let rhs = alg.right_mul_matrix(b) * &c1;
        t2 = t2.max(d2(&lhs, &rhs));
        let lhs = &es * p;
        let rhs = &c1 * alg.left_mul_matrix(b).transpose();
        s2 = s2.max(d2(&lhs, &rhs));
    }
    r.check("b target(c) = eps(b1 c) b2", "target counital map", t1, tol);
    r.check("b1 (x) target(b2) = 1(1) b (x) 1(2)", "target counital map", t2, tol);
    r.check("source(c) b = b1 eps(c b2)", "source counital map", s1, tol);
    r.check("source(b1) (x) b2 = 1(1) (x) b 1(2)", "source counital map", s2, tol);

    // antipode
    let s = &w.antipode;
    let st = s.transpose();
    let (mut a3, mut a3p, mut cop) = (0.0_f64, 0.0_f64, 0.0_f64);
    for (bi, p) in cops.iter().enumerate() {
        a3 = a3.max(dv(&w.multiply_pairs(&(p * &st)), &et.column(bi).into_owned()));
        a3p = a3p.max(dv(&w.multiply_pairs(&(s * p)), &es.column(bi).into_owned()));
        let lhs = w.coproduct(&s.column(bi).into_owned());
        let rhs = s * p.transpose() * &st;
        cop = cop.max(d2(&lhs, &rhs));
    }
    r.check("b1 S(b2) = target(b)", "antipode", a3, tol);
    r.check("S(b1) b2 = source(b)", "antipode", a3p, tol);
    let mut anti = 0.0_f64;
    let scols: Vec<Element> = (0..d).map(|j| s.column(j).into_owned()).collect();
    for i in 0..d {
        for j in 0..d {
            let lhs = match alg.basis_product(i, j) {
                Some(k) => scols[k].clone(),
                None => alg.zero(),
            };
            anti = anti.max(dv(&lhs, &alg.mul(&scols[j], &scols[i])));
        }
    }
    r.check("S anti-multiplicative", "antipode", anti, tol);
    r.check("S anti-comultiplicative", "antipode", cop, tol);
    let sj = s * &jm;
    let sstar2 = &sj * sj.conjugate();
    let id = Matrix::identity(d, d);
    r.check("(S o *)^2 = id", "antipode", d2(&sstar2, &id), tol);

    // the involution itself
    let mut inv = d2(&(&jm * jm.conjugate()), &id);
    for i in 0..d {
        for j in 0..d {
            let lhs = w.star(&alg.mul(&basis[i], &basis[j]));
            let rhs = alg.mul(&w.star(&basis[j]), &w.star(&basis[i]));
            inv = inv.max(dv(&lhs, &rhs));
        }
    }
    r.check("involution anti-multiplicative and involutive", "involution", inv, tol);

    let s_squared = d2(&(s * s), &id);
    let star_commutation = d2(&sj, &(&jm * s.conjugate()));
    r.fact("S^2 = id residual", format!("{s_squared:.6e}"));
    r.fact("S o * = * o S residual", format!("{star_commutation:.6e}"));
    let classification = if !r.passed() {
        Classification::Invalid
    } else if s_squared <= tol && star_commutation <= tol {
        Classification::WeakKac
    } else {
        Classification::WeakCStarHopf
    };
    r.fact("classification", classification);
    AxiomReport { report: r, classification, s_squared, star_commutation }
}
