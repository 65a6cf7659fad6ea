//! Search for an explicit isomorphism between two weak Hopf structures.
//!
//! Two cases are handled: commutative algebras, where an algebra map is a
//! permutation of minimal projections, and a single full matrix block, where
//! it is Ad(u) with u matching the target Cartan subalgebras.

use fd_star_algebra::linalg::{distance, hermitian_eigen, kron, re, ONE, ZERO};
use fd_star_algebra::{Matrix, MultiMatrixAlgebra};
use weak_hopf_core::WeakHopfData;

use crate::error::{Result, TowerError};

/// Φ with column i the image of the i-th basis element of the source, in
/// target coordinates.
#[derive(Clone, Debug)]
pub struct Isomorphism {
    pub matrix: Matrix,
    pub residual: f64,
}

/// Worst defect of Φ as a morphism of algebras, coalgebras, antipodes and
/// involutions, plus invertibility.
pub fn morphism_residual(x: &WeakHopfData, y: &WeakHopfData, phi: &Matrix) -> f64 {
    let d = x.dim();
    if phi.shape() != (y.dim(), d) {
        return f64::INFINITY;
    }
    if phi.clone().try_inverse().is_none() {
        return f64::INFINITY;
    }
    let mut worst = 0.0_f64;
    for i in 0..d {
        let pi = phi.column(i).into_owned();
        for j in 0..d {
            let lhs = x.algebra.basis_product(i, j).map_or_else(|| y.algebra.zero(), |k| phi.column(k).into_owned());
            let rhs = y.mul(&pi, &phi.column(j).into_owned());
            worst = worst.max(distance(lhs.as_slice(), rhs.as_slice()));
        }
    }
    let coprod = kron(phi, phi) * &x.delta - &y.delta * phi;
    worst = worst.max(distance(coprod.as_slice(), &vec![ZERO; coprod.len()]));
    worst = worst.max(distance((phi.transpose() * &y.epsilon).as_slice(), x.epsilon.as_slice()));
    worst = worst.max(distance((&y.antipode * phi).as_slice(), (phi * &x.antipode).as_slice()));
    worst = worst.max(distance((phi * x.star_matrix()).as_slice(), (y.star_matrix() * phi.conjugate()).as_slice()));
    worst
}

/// Lexicographic successor; false after the last permutation.
fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn commutative_search(x: &WeakHopfData, y: &WeakHopfData, tol: f64) -> Option<Isomorphism> {
    let n = x.dim();
    let mut assign = vec![usize::MAX; n];
    let mut used = vec![false; n];

    fn consistent(x: &WeakHopfData, y: &WeakHopfData, assign: &[usize], upto: usize, tol: f64) -> bool {
        let n = x.dim();
        let i = upto;
        let pi = assign[i];
        if (x.epsilon[i] - y.epsilon[pi]).norm() > tol {
            return false;
        }
        for a in 0..=upto {
            for b in 0..=upto {
                let (pa, pb) = (assign[a], assign[b]);
                // Δ entries with all three indices assigned
                for (c, pc) in [(i, pi), (a, pa), (b, pb)] {
                    for (u, pu, v, pv) in [(a, pa, b, pb), (a, pa, i, pi), (i, pi, b, pb)] {
                        if (x.delta[(u * n + v, c)] - y.delta[(pu * n + pv, pc)]).norm() > tol {
                            return false;
                        }
                    }
                }
                if (x.antipode[(a, b)] - y.antipode[(pa, pb)]).norm() > tol {
                    return false;
                }
            }
        }
        true
    }

    fn go(x: &WeakHopfData, y: &WeakHopfData, k: usize, assign: &mut Vec<usize>, used: &mut Vec<bool>, tol: f64) -> bool {
        let n = x.dim();
        if k == n {
            return true;
        }
        for cand in 0..n {
            if used[cand] {
                continue;
            }
            assign[k] = cand;
            used[cand] = true;
            if consistent(x, y, assign, k, tol) && go(x, y, k + 1, assign, used, tol) {
                return true;
            }
            used[cand] = false;
        }
        assign[k] = usize::MAX;
        false
    }

    if !go(x, y, 0, &mut assign, &mut used, tol) {
        return None;
    }
    let mut phi = Matrix::zeros(n, n);
    for (i, &pi) in assign.iter().enumerate() {
        phi[(pi, i)] = ONE;
    }
    let residual = morphism_residual(x, y, &phi);
    Some(Isomorphism { matrix: phi, residual })
}

/// Eigenvectors of a generic self-adjoint element of the target subalgebra
/// of a single-block structure, or None if the spectrum is degenerate.
fn cartan_frame(w: &WeakHopfData) -> Option<Matrix> {
    let alg = &w.algebra;
    let et = w.target_map();
    let mut z = alg.zero();
    for k in 0..et.ncols() {
        let c = et.column(k).into_owned();
        z += (&c + w.star(&c)) * re((k as f64 + 2.0).sqrt().fract() + 0.1 * k as f64);
    }
    let (vals, vecs) = hermitian_eigen(&alg.block(&z, 0));
    let gap = vals.windows(2).map(|p| p[1] - p[0]).fold(f64::INFINITY, f64::min);
    (gap > 1e-6).then_some(vecs)
}

fn conjugation_matrix(alg: &MultiMatrixAlgebra, u: &Matrix, u_inv: &Matrix) -> Matrix {
    let d = alg.dim();
    let mut phi = Matrix::zeros(d, d);
    for i in 0..d {
        let e = alg.block(&alg.basis(i), 0);
        let img = u * e * u_inv;
        let v = alg.from_blocks(&[img]).expect("single block");
        phi.set_column(i, &v);
    }
    phi
}

fn full_block_search(x: &WeakHopfData, y: &WeakHopfData, tol: f64) -> Option<Isomorphism> {
    let alg = &x.algebra;
    let n = alg.blocks()[0];
    if n > 7 {
        return None;
    }
    let vx = cartan_frame(x)?;
    let vy = cartan_frame(y)?;
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<Isomorphism> = None;
    loop {
        let mut pm = Matrix::zeros(n, n);
        for (i, &p) in perm.iter().enumerate() {
            pm[(p, i)] = ONE;
        }
        let u0 = &vy * &pm * vx.adjoint();
        let phi0 = conjugation_matrix(alg, &u0, &u0.adjoint());
        // rescale u by a diagonal in the x-frame so that ε is preserved
        let frame: Vec<_> = (0..n)
            .map(|i| {
                let mut e = Matrix::zeros(n, n);
                e[(i, 0)] = ONE;
                alg.from_blocks(&[&vx * e * vx.adjoint()]).expect("single block")
            })
            .collect();
        let c: Vec<_> = frame.iter().map(|f| y.epsilon.dot(&(&phi0 * f))).collect();
        let target: Vec<_> = frame.iter().map(|f| x.epsilon.dot(f)).collect();
        if c.iter().all(|v| v.norm() > 1e-9) {
            let dvec: Vec<_> = (0..n).map(|i| target[i] / c[i]).collect();
            let dm = Matrix::from_diagonal(&fd_star_algebra::Vector::from_vec(dvec.clone()));
            let dinv = Matrix::from_diagonal(&fd_star_algebra::Vector::from_vec(dvec.iter().map(|v| ONE / v).collect()));
            let u = &u0 * &vx * dm * vx.adjoint();
            let u_inv = &vx * dinv * vx.adjoint() * u0.adjoint();
            let phi = conjugation_matrix(alg, &u, &u_inv);
            let residual = morphism_residual(x, y, &phi);
            if best.as_ref().is_none_or(|b| residual < b.residual) {
                best = Some(Isomorphism { matrix: phi, residual });
            }
            if residual <= tol {
                break;
            }
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    best
}

/// Find Φ: x → y with residual ≤ tol. Err if the shapes are not comparable,
/// Ok(None) if the search finds nothing.
pub fn find_isomorphism(x: &WeakHopfData, y: &WeakHopfData, tol: f64) -> Result<Option<Isomorphism>> {
    let (bx, by) = (x.algebra.blocks(), y.algebra.blocks());
    let mut sx = bx.to_vec();
    let mut sy = by.to_vec();
    sx.sort_unstable();
    sy.sort_unstable();
    if sx != sy {
        return Ok(None);
    }
    let found = if bx.iter().all(|&m| m == 1) {
        commutative_search(x, y, tol.max(1e-12) * 10.0)
    } else if bx.len() == 1 {
        full_block_search(x, y, tol)
    } else {
        return Err(TowerError::Precondition(format!("isomorphism search does not cover blocks {bx:?}")));
    };
    Ok(found.filter(|iso| iso.residual <= tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use weak_hopf_core::pair_groupoid;

    #[test]
    fn permutations_are_enumerated_once() {
        let mut p = vec![0, 1, 2, 3];
        let mut count = 1;
        while next_permutation(&mut p) {
            count += 1;
        }
        assert_eq!(count, 24);
        assert_eq!(p, vec![3, 2, 1, 0]);
    }

    #[test]
    fn a_structure_is_isomorphic_to_itself() {
        let pg = pair_groupoid(3).unwrap();
        let iso = find_isomorphism(&pg, &pg, 1e-9).unwrap().unwrap();
        assert!(iso.residual <= 1e-12);
    }

    #[test]
    fn different_block_shapes_are_not_isomorphic() {
        let pg = pair_groupoid(2).unwrap();
        let f = weak_hopf_core::function_algebra(&weak_hopf_core::FiniteGroup::cyclic(4).unwrap()).unwrap();
        assert!(find_isomorphism(&pg, &f, 1e-9).unwrap().is_none());
    }
}
