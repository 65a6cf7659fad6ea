//! The dual weak Hopf algebra B*.
//!
//! In the dual basis β_i(b_j) = δ_ij the product is the transpose of Δ, the
//! coproduct the transpose of the product, the unit is ε, the counit is
//! evaluation at 1, S* = S^t and β* = conj(β(S(·)*)).  To present B* as a
//! multimatrix algebra, the left regular representation is made a
//! *-representation with the inner product ω(x*y), ω = Tr∘L, and then
//! block-decomposed.

use fd_star_algebra::linalg::{distance, kron, re};
use fd_star_algebra::{decompose_subalgebra, Config, Matrix, MultiMatrixAlgebra, Vector, C64};

use crate::data::{Involution, WeakHopfData};
use crate::error::{HopfError, Result};

#[derive(Clone, Debug)]
pub struct DualHopf {
    pub data: WeakHopfData,
    /// Column a: the a-th matrix unit of the dual in the dual basis β, so
    /// the pairing is ⟨f_a, b_j⟩ = basis[(j, a)].
    pub basis: Matrix,
}

fn flatten(m: &Matrix) -> Vector {
    Vector::from_column_slice(m.transpose().as_slice())
}

fn unflatten(v: &Vector, n: usize) -> Matrix {
    Matrix::from_row_slice(n, n, v.as_slice())
}

pub fn dual_algebra(w: &WeakHopfData, cfg: &Config) -> Result<DualHopf> {
    let d = w.dim();
    let alg = &w.algebra;
    // left multiplication by β_r in the β basis: L_r[i, q] = Δ[r d + q, i]
    let lmul: Vec<Matrix> = (0..d).map(|r| Matrix::from_fn(d, d, |i, q| w.delta[(r * d + q, i)])).collect();
    let omega: Vec<C64> = lmul.iter().map(|l| l.trace()).collect();
    let jdual = (w.star_matrix().conjugate() * &w.antipode).transpose();

    // Gram ω(β_p^* β_q)
    let mut gram = Matrix::zeros(d, d);
    for p in 0..d {
        for q in 0..d {
            let mut s = C64::new(0.0, 0.0);
            for a in 0..d {
                let c = jdual[(a, p)];
                if c.norm() == 0.0 {
                    continue;
                }
                let mut t = C64::new(0.0, 0.0);
                for i in 0..d {
                    t += w.delta[(a * d + q, i)] * omega[i];
                }
                s += c * t;
            }
            gram[(p, q)] = s;
        }
    }
    let gram = (&gram + gram.adjoint()) * re(0.5);
    let chol = gram
        .clone()
        .cholesky()
        .ok_or_else(|| HopfError::Dimension("regular trace of the dual is not positive definite".into()))?;
    let rmat = chol.l().adjoint();
    let rinv = rmat
        .clone()
        .try_inverse()
        .ok_or_else(|| HopfError::Dimension("singular Cholesky factor".into()))?;

    let full = MultiMatrixAlgebra::full(d);
    let mut span = Matrix::zeros(d * d, d);
    for (r, l) in lmul.iter().enumerate() {
        span.set_column(r, &flatten(&(&rmat * l * &rinv)));
    }
    let emb = decompose_subalgebra(&full, &span, cfg)?;
    let sub = emb.sub().clone();
    let mut basis = Matrix::zeros(d, d);
    for f in 0..sub.dim() {
        let m = unflatten(&emb.image(f), d);
        let x = &rinv * m * &rmat * &w.epsilon;
        basis.set_column(f, &x);
    }

    // structure in the β basis
    let mut dstar = Matrix::zeros(d * d, d);
    for j in 0..d {
        for k in 0..d {
            if let Some(i) = alg.basis_product(j, k) {
                dstar[(j * d + k, i)] = re(1.0);
            }
        }
    }
    let pinv = basis
        .clone()
        .try_inverse()
        .ok_or_else(|| HopfError::Dimension("dual basis change is singular".into()))?;
    let delta = kron(&pinv, &pinv) * dstar * &basis;
    let epsilon = basis.transpose() * w.unit();
    let antipode = &pinv * w.antipode.transpose() * &basis;
    let j = &pinv * jdual * basis.conjugate();
    let involution = if distance(j.as_slice(), sub.adjoint_matrix().as_slice()) < 1e-10 {
        Involution::Adjoint
    } else {
        Involution::Antilinear(j)
    };
    let data = WeakHopfData::new(sub, delta, epsilon, antipode, involution)?;
    Ok(DualHopf { data, basis })
}

/// Residual of the canonical identification B → B** (b ↦ evaluation at b)
/// as an isomorphism of all structure maps.
pub fn double_dual_residual(w: &WeakHopfData, cfg: &Config) -> Result<f64> {
    let first = dual_algebra(w, cfg)?;
    let second = dual_algebra(&first.data, cfg)?;
    let dd = &second.data;
    if dd.algebra.dim() != w.dim() {
        return Ok(f64::INFINITY);
    }
    let qinv = second
        .basis
        .clone()
        .try_inverse()
        .ok_or_else(|| HopfError::Dimension("double dual basis singular".into()))?;
    let t = qinv * first.basis.transpose();
    let d = w.dim();
    let alg = &w.algebra;
    let mut worst = 0.0_f64;
    let tcols: Vec<Vector> = (0..d).map(|i| t.column(i).into_owned()).collect();
    for i in 0..d {
        for j in 0..d {
            let lhs = match alg.basis_product(i, j) {
                Some(k) => tcols[k].clone(),
                None => Vector::zeros(d),
            };
            worst = worst.max(distance(lhs.as_slice(), dd.algebra.mul(&tcols[i], &tcols[j]).as_slice()));
        }
    }
    let dl = &dd.delta * &t;
    let dr = kron(&t, &t) * &w.delta;
    worst = worst.max(distance(dl.as_slice(), dr.as_slice()));
    let el = t.transpose() * &dd.epsilon;
    worst = worst.max(distance(el.as_slice(), w.epsilon.as_slice()));
    let sl = &dd.antipode * &t;
    let sr = &t * &w.antipode;
    worst = worst.max(distance(sl.as_slice(), sr.as_slice()));
    let jl = dd.star_matrix() * t.conjugate();
    let jr = &t * w.star_matrix();
    worst = worst.max(distance(jl.as_slice(), jr.as_slice()));
    Ok(worst)
}
