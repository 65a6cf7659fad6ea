use fd_star_algebra::linalg::{self, distance, max_abs};
use fd_star_algebra::{Element, Matrix, Report, Vector};

use crate::data::WeakHopfData;
use crate::error::{HopfError, Result};

/// Haar projection p and normalized Haar functional φ (as the vector with
/// φ(x) = φ·x).
#[derive(Clone, Debug)]
pub struct HaarData {
    pub projection: Element,
    pub functional: Vector,
}

fn stack(blocks: &[Matrix], cols: usize) -> Matrix {
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = Matrix::zeros(rows, cols);
    let mut r = 0;
    for b in blocks {
        out.view_mut((r, 0), b.shape()).copy_from(b);
        r += b.nrows();
    }
    out
}

/// Solve {x p = ε^t(x) p for basis x, S(p) = p, ε^t(p) = 1}.
pub fn haar_projection(w: &WeakHopfData, tol: f64) -> Result<Element> {
    let d = w.dim();
    let alg = &w.algebra;
    let et = w.target_map();
    let id = Matrix::identity(d, d);
    let mut blocks = Vec::with_capacity(d + 2);
    for i in 0..d {
        let x = alg.basis(i);
        blocks.push(alg.left_mul_matrix(&x) - alg.left_mul_matrix(&et.column(i).into_owned()));
    }
    blocks.push(&w.antipode - &id);
    blocks.push(et.clone());
    let a = stack(&blocks, d);
    let mut b = Vector::zeros(a.nrows());
    b.rows_mut(a.nrows() - d, d).copy_from(&w.unit());
    let sol = linalg::least_squares(&a, &b, 1e-10)?;
    if sol.nullity > 0 {
        return Err(HopfError::HaarProjection(format!("solution not unique, nullity {}", sol.nullity)));
    }
    if sol.residual > tol {
        return Err(HopfError::HaarProjection(format!("no solution, residual {:.3e}", sol.residual)));
    }
    Ok(sol.x)
}

/// Solve {(id⊗φ)Δ = (ε^t⊗φ)Δ, φ∘S = φ, φ∘ε^t = ε}.
pub fn haar_functional(w: &WeakHopfData, tol: f64) -> Result<Vector> {
    let d = w.dim();
    let et = w.target_map();
    let id = Matrix::identity(d, d);
    let mut blocks = Vec::with_capacity(d + 2);
    for j in 0..d {
        let p = w.coproduct_of_basis(j);
        blocks.push(&p - &et * &p);
    }
    blocks.push(w.antipode.transpose() - &id);
    blocks.push(et.transpose());
    let a = stack(&blocks, d);
    let mut b = Vector::zeros(a.nrows());
    b.rows_mut(a.nrows() - d, d).copy_from(&w.epsilon);
    let sol = linalg::least_squares(&a, &b, 1e-10)?;
    if sol.nullity > 0 {
        return Err(HopfError::HaarFunctional(format!("solution not unique, nullity {}", sol.nullity)));
    }
    if sol.residual > tol {
        return Err(HopfError::HaarFunctional(format!("no solution, residual {:.3e}", sol.residual)));
    }
    Ok(sol.x)
}

/// Smallest eigenvalue of the Gram matrix φ(b_p^* b_q), relative to the largest.
pub fn positivity_margin(w: &WeakHopfData, phi: &Vector) -> f64 {
    let d = w.dim();
    let basis: Vec<Element> = (0..d).map(|i| w.algebra.basis(i)).collect();
    let stars: Vec<Element> = basis.iter().map(|b| w.star(b)).collect();
    let g = Matrix::from_fn(d, d, |p, q| phi.dot(&w.mul(&stars[p], &basis[q])));
    let (vals, _) = linalg::hermitian_eigen(&g);
    let top = vals.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(1e-300);
    vals.first().copied().unwrap_or(0.0) / top
}

/// max |φ(b_i b_j) − φ(b_j b_i)|.
pub fn traciality_defect(w: &WeakHopfData, phi: &Vector) -> f64 {
    let alg = &w.algebra;
    let d = alg.dim();
    let mut worst = 0.0_f64;
    for i in 0..d {
        for j in 0..d {
            let a = alg.basis_product(i, j).map(|k| phi[k]).unwrap_or_default();
            let b = alg.basis_product(j, i).map(|k| phi[k]).unwrap_or_default();
            worst = worst.max((a - b).norm());
        }
    }
    worst / max_abs(phi.as_slice()).max(1.0)
}

/// Solve both systems and verify the defining identities, positivity and
/// the expected traciality (trace exactly when `kac`).
pub fn haar(w: &WeakHopfData, kac: bool, tol: f64) -> Result<(HaarData, Report)> {
    let p = haar_projection(w, tol)?;
    let phi = haar_functional(w, tol)?;
    let alg = &w.algebra;
    let et = w.target_map();
    let mut r = Report::new("Haar integrals");

    let mut xp = 0.0_f64;
    for i in 0..w.dim() {
        let lhs = alg.mul(&alg.basis(i), &p);
        let rhs = alg.mul(&et.column(i).into_owned(), &p);
        xp = xp.max(distance(lhs.as_slice(), rhs.as_slice()));
    }
    r.check("x p = target(x) p", "Haar projection", xp, tol);
    r.check("S(p) = p", "Haar projection", distance(w.antipode_of(&p).as_slice(), p.as_slice()), tol);
    r.check("target(p) = 1", "Haar projection", distance((&et * &p).as_slice(), w.unit().as_slice()), tol);
    r.check("p = p*", "Haar projection", distance(w.star(&p).as_slice(), p.as_slice()), tol);
    r.check("p = p^2", "Haar projection", distance(alg.mul(&p, &p).as_slice(), p.as_slice()), tol);

    let mut inv = 0.0_f64;
    for j in 0..w.dim() {
        let c = w.coproduct_of_basis(j);
        let lhs = &c * &phi;
        let rhs = &et * (&c * &phi);
        inv = inv.max(distance(lhs.as_slice(), rhs.as_slice()));
    }
    r.check("(id (x) phi) coproduct = (target (x) phi) coproduct", "Haar functional", inv, tol);
    let phis = w.antipode.transpose() * &phi;
    r.check("phi o S = phi", "Haar functional", distance(phis.as_slice(), phi.as_slice()), tol);
    let phit = et.transpose() * &phi;
    r.check("phi o target = eps", "Haar functional", distance(phit.as_slice(), w.epsilon.as_slice()), tol);
    let margin = positivity_margin(w, &phi);
    r.check("phi positive (min Gram eigenvalue)", "Haar functional", (-margin).max(0.0), tol);
    if margin < -tol {
        return Err(HopfError::NotPositive(margin));
    }
    let tr = traciality_defect(w, &phi);
    if kac {
        r.check("phi tracial", "Haar functional", tr, tol);
    } else {
        r.check_at_least("phi not tracial", "Haar functional", tr, tol);
    }
    r.fact("phi(1)", format!("{:.6}", phi.dot(&w.unit()).re));
    Ok((HaarData { projection: p, functional: phi }, r))
}
