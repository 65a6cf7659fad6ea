//! Thin helpers over nalgebra for the dense complex linear algebra used
//! throughout: orthonormal bases, null spaces, least squares, Hermitian
//! spectra and pivoted column selection.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{AlgebraError, Result};

pub type C64 = Complex64;
pub type Vector = DVector<C64>;
pub type Matrix = DMatrix<C64>;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };

pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

pub fn max_abs(v: &[C64]) -> f64 {
    v.iter().fold(0.0_f64, |m, z| m.max(z.norm()))
}

/// Residual scaled by the larger of 1 and the operand magnitude.
pub fn relative(diff: f64, scale: f64) -> f64 {
    diff / scale.max(1.0)
}

/// Max-abs distance between two coefficient slices, relative to their size.
pub fn distance(a: &[C64], b: &[C64]) -> f64 {
    let diff = a.iter().zip(b).fold(0.0_f64, |m, (x, y)| m.max((x - y).norm()));
    relative(diff, max_abs(a).max(max_abs(b)))
}

fn singular(m: &Matrix, u: bool, v: bool) -> nalgebra::SVD<C64, nalgebra::Dyn, nalgebra::Dyn> {
    m.clone().svd(u, v)
}

/// Orthonormal basis (as columns) of the column span of `cols`.
pub fn orthonormal_basis(cols: &Matrix, tol: f64) -> Matrix {
    let (rows, n) = cols.shape();
    if n == 0 || rows == 0 {
        return Matrix::zeros(rows, 0);
    }
    let svd = singular(cols, true, false);
    let u = svd.u.expect("left vectors requested");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    if smax <= f64::MIN_POSITIVE {
        return Matrix::zeros(rows, 0);
    }
    let mut keep: Vec<(f64, usize)> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > tol * smax)
        .map(|(i, &s)| (s, i))
        .collect();
    keep.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut out = Matrix::zeros(rows, keep.len());
    for (c, &(_, i)) in keep.iter().enumerate() {
        out.set_column(c, &u.column(i));
    }
    out
}

pub fn singular_values(m: &Matrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = singular(m, false, false).singular_values.iter().cloned().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

pub fn rank(m: &Matrix, tol: f64) -> usize {
    let s = singular_values(m);
    match s.first() {
        Some(&smax) if smax > f64::MIN_POSITIVE => s.iter().filter(|&&x| x > tol * smax).count(),
        _ => 0,
    }
}

pub fn condition_number(m: &Matrix) -> f64 {
    let s = singular_values(m);
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        _ => f64::INFINITY,
    }
}

/// Orthonormal basis of {x : a x = 0}; singular values at or below
/// `tol * max` count as zero.
pub fn null_space(a: &Matrix, tol: f64) -> Matrix {
    let (rows, n) = a.shape();
    if n == 0 {
        return Matrix::zeros(0, 0);
    }
    let square;
    let m = if rows < n {
        let mut p = Matrix::zeros(n, n);
        p.view_mut((0, 0), (rows, n)).copy_from(a);
        square = p;
        &square
    } else {
        a
    };
    let svd = singular(m, false, true);
    let vt = svd.v_t.expect("right vectors requested");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let mut idx: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| smax <= f64::MIN_POSITIVE || svd.singular_values[i] <= tol * smax)
        .collect();
    idx.sort_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]).then(i.cmp(&j)));
    let mut out = Matrix::zeros(n, idx.len());
    for (c, &i) in idx.iter().enumerate() {
        for r in 0..n {
            out[(r, c)] = vt[(i, r)].conj();
        }
    }
    out
}

/// Dimension of the intersection of two column spans.
pub fn intersection_dim(u: &Matrix, v: &Matrix, tol: f64) -> usize {
    let ru = rank(u, tol);
    let rv = rank(v, tol);
    let mut both = Matrix::zeros(u.nrows(), u.ncols() + v.ncols());
    both.view_mut((0, 0), u.shape()).copy_from(u);
    both.view_mut((0, u.ncols()), v.shape()).copy_from(v);
    (ru + rv).saturating_sub(rank(&both, tol))
}

/// Least-squares solution of `a x = b`.
pub struct LeastSquares {
    pub x: Vector,
    /// Dimension of the numerical null space of `a`.
    pub nullity: usize,
    /// Relative residual of the solution.
    pub residual: f64,
}

pub fn least_squares(a: &Matrix, b: &Vector, tol: f64) -> Result<LeastSquares> {
    let (rows, n) = a.shape();
    if b.len() != rows {
        return Err(AlgebraError::Dimension(format!("system has {rows} rows, rhs {}", b.len())));
    }
    let svd = singular(a, true, true);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let cut = tol * smax;
    let nullity = n - svd.singular_values.iter().filter(|&&s| s > cut).count();
    let x = svd
        .solve(b, cut.max(f64::MIN_POSITIVE))
        .map_err(|e| AlgebraError::Numerical(e.to_string()))?;
    let r = a * &x - b;
    let residual = relative(max_abs(r.as_slice()), max_abs(b.as_slice()));
    Ok(LeastSquares { x, nullity, residual })
}

/// Eigenvalues (ascending) and eigenvectors of the Hermitian part of `m`.
pub fn hermitian_eigen(m: &Matrix) -> (Vec<f64>, Matrix) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), Matrix::zeros(0, 0));
    }
    let h = (m + m.adjoint()) * re(0.5);
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]).then(i.cmp(&j)));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vecs = Matrix::zeros(n, n);
    for (c, &i) in order.iter().enumerate() {
        vecs.set_column(c, &eig.eigenvectors.column(i));
    }
    (vals, vecs)
}

/// Apply a real function to the spectrum of a Hermitian matrix.
pub fn hermitian_function(m: &Matrix, f: impl Fn(f64) -> f64) -> Matrix {
    let (vals, vecs) = hermitian_eigen(m);
    let n = m.nrows();
    let mut scaled = vecs.clone();
    for c in 0..n {
        let s = re(f(vals[c]));
        for r in 0..n {
            scaled[(r, c)] *= s;
        }
    }
    scaled * vecs.adjoint()
}

/// Greedy column selection by Gram-Schmidt with column pivoting.  Returns
/// the indices of the chosen columns in the order they were picked; columns
/// whose remaining norm falls below `tol` times the largest initial norm
/// are never picked.
pub fn pivoted_columns(cols: &Matrix, tol: f64) -> Vec<usize> {
    let (rows, n) = cols.shape();
    let mut work = cols.clone();
    let mut norms: Vec<f64> = (0..n).map(|j| work.column(j).norm()).collect();
    let top = norms.iter().cloned().fold(0.0, f64::max);
    let mut taken = vec![false; n];
    let mut picked = Vec::new();
    if top <= f64::MIN_POSITIVE {
        return picked;
    }
    while picked.len() < rows.min(n) {
        let mut best = None;
        for j in 0..n {
            if !taken[j] && best.is_none_or(|b: usize| norms[j] > norms[b] * (1.0 + 1e-12)) {
                best = Some(j);
            }
        }
        let Some(j) = best else { break };
        let nj = work.column(j).norm();
        if nj <= tol * top {
            break;
        }
        taken[j] = true;
        picked.push(j);
        let q = work.column(j) / re(nj);
        for k in 0..n {
            if taken[k] {
                continue;
            }
            // two passes keep the residual columns orthogonal to q
            for _ in 0..2 {
                let proj = q.dotc(&work.column(k));
                let upd = work.column(k) - &q * proj;
                work.set_column(k, &upd);
            }
            norms[k] = work.column(k).norm();
        }
    }
    picked
}

/// Kronecker product a ⊗ b.
pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = Matrix::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let s = a[(i, j)];
            if s == ZERO {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = s * b[(k, l)];
                }
            }
        }
    }
    out
}

pub fn real_matrix(m: &DMatrix<f64>) -> Matrix {
    m.map(re)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: usize, cols: usize, v: &[f64]) -> Matrix {
        Matrix::from_row_slice(rows, cols, &v.iter().map(|&x| re(x)).collect::<Vec<_>>())
    }

    #[test]
    fn null_space_of_wide_matrix() {
        let a = m(1, 3, &[1.0, 1.0, 0.0]);
        let ns = null_space(&a, 1e-12);
        assert_eq!(ns.ncols(), 2);
        assert!((&a * &ns).norm() < 1e-12);
    }

    #[test]
    fn rank_and_basis_agree() {
        let a = m(3, 3, &[1.0, 2.0, 3.0, 2.0, 4.0, 6.0, 0.0, 1.0, 1.0]);
        assert_eq!(rank(&a, 1e-12), 2);
        let q = orthonormal_basis(&a, 1e-12);
        assert_eq!(q.ncols(), 2);
        let g = q.adjoint() * &q;
        assert!((g - Matrix::identity(2, 2)).norm() < 1e-12);
    }

    #[test]
    fn least_squares_detects_nullity() {
        let a = m(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        let b = Vector::from_vec(vec![re(2.0), re(2.0)]);
        let ls = least_squares(&a, &b, 1e-12).unwrap();
        assert_eq!(ls.nullity, 1);
        assert!(ls.residual < 1e-12);
    }

    #[test]
    fn pivoting_prefers_large_independent_columns() {
        let a = m(2, 3, &[1.0, 3.0, 2.0, 0.0, 0.0, 1.0]);
        assert_eq!(pivoted_columns(&a, 1e-12), vec![1, 2]);
    }

    #[test]
    fn square_root_squares_back() {
        let a = m(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let r = hermitian_function(&a, f64::sqrt);
        assert!((&r * &r - a).norm() < 1e-12);
    }
}
