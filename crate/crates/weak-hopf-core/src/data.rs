use fd_star_algebra::linalg::{distance, max_abs, ZERO};
use fd_star_algebra::{Element, Matrix, MultiMatrixAlgebra, TensorProduct, Vector};

use crate::error::{HopfError, Result};

/// The *-operation of the algebra: either the block adjoint or an explicit
/// antilinear map x ↦ J conj(x) on coefficient vectors.
#[derive(Clone, Debug, PartialEq)]
pub enum Involution {
    Adjoint,
    Antilinear(Matrix),
}

/// Structure tensors of a finite-dimensional weak Hopf algebra in the
/// matrix-unit basis b_0..b_{D-1} of `algebra`.
///
/// `delta` is D²×D: column j holds Δ(b_j), row i1·D + i2 the coefficient of
/// b_i1 ⊗ b_i2.  `epsilon[j] = ε(b_j)`, `antipode` is the matrix of S.
#[derive(Clone, Debug)]
pub struct WeakHopfData {
    pub algebra: MultiMatrixAlgebra,
    pub delta: Matrix,
    pub epsilon: Vector,
    pub antipode: Matrix,
    pub involution: Involution,
}

impl WeakHopfData {
    pub fn new(algebra: MultiMatrixAlgebra, delta: Matrix, epsilon: Vector, antipode: Matrix, involution: Involution) -> Result<Self> {
        let d = algebra.dim();
        if delta.shape() != (d * d, d) {
            return Err(HopfError::Dimension(format!("delta is {:?}, expected {}x{}", delta.shape(), d * d, d)));
        }
        if epsilon.len() != d {
            return Err(HopfError::Dimension(format!("epsilon has {} entries, expected {d}", epsilon.len())));
        }
        if antipode.shape() != (d, d) {
            return Err(HopfError::Dimension(format!("antipode is {:?}, expected {d}x{d}", antipode.shape())));
        }
        if let Involution::Antilinear(j) = &involution {
            if j.shape() != (d, d) {
                return Err(HopfError::Dimension(format!("involution is {:?}, expected {d}x{d}", j.shape())));
            }
        }
        Ok(WeakHopfData { algebra, delta, epsilon, antipode, involution })
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn unit(&self) -> Element {
        self.algebra.unit()
    }

    pub fn mul(&self, x: &Element, y: &Element) -> Element {
        self.algebra.mul(x, y)
    }

    /// Matrix J with x* = J conj(x).
    pub fn star_matrix(&self) -> Matrix {
        match &self.involution {
            Involution::Adjoint => self.algebra.adjoint_matrix(),
            Involution::Antilinear(j) => j.clone(),
        }
    }

    pub fn star(&self, x: &Element) -> Element {
        match &self.involution {
            Involution::Adjoint => self.algebra.adjoint(x),
            Involution::Antilinear(j) => j * x.conjugate(),
        }
    }

    pub fn counit(&self, x: &Element) -> fd_star_algebra::C64 {
        self.epsilon.dot(x)
    }

    pub fn antipode_of(&self, x: &Element) -> Element {
        &self.antipode * x
    }

    /// Δ(x) as a D×D pair matrix: entry (i1, i2) is the coefficient of b_i1 ⊗ b_i2.
    pub fn coproduct(&self, x: &Element) -> Matrix {
        let d = self.dim();
        let v = &self.delta * x;
        Matrix::from_fn(d, d, |i, j| v[i * d + j])
    }

    pub fn coproduct_of_basis(&self, j: usize) -> Matrix {
        let d = self.dim();
        Matrix::from_fn(d, d, |a, b| self.delta[(a * d + b, j)])
    }

    /// Flatten a pair matrix back to a D² vector.
    pub fn flatten_pairs(&self, p: &Matrix) -> Vector {
        let d = self.dim();
        Vector::from_fn(d * d, |k, _| p[(k / d, k % d)])
    }

    /// Σ Q_ij b_i b_j.
    pub fn multiply_pairs(&self, q: &Matrix) -> Element {
        let a = &self.algebra;
        let mut out = a.zero();
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                let c = q[(i, j)];
                if c == ZERO {
                    continue;
                }
                if let Some(k) = a.basis_product(i, j) {
                    out[k] += c;
                }
            }
        }
        out
    }

    /// Eps2[i, k] = ε(b_i b_k).
    pub fn epsilon_products(&self) -> Matrix {
        let a = &self.algebra;
        Matrix::from_fn(a.dim(), a.dim(), |i, k| match a.basis_product(i, k) {
            Some(r) => self.epsilon[r],
            None => ZERO,
        })
    }

    /// Matrix of ε^t(b) = ε(1₍₁₎ b) 1₍₂₎.
    pub fn target_map(&self) -> Matrix {
        let c1 = self.coproduct(&self.unit());
        c1.transpose() * self.epsilon_products()
    }

    /// Matrix of ε^s(b) = 1₍₁₎ ε(b 1₍₂₎).
    pub fn source_map(&self) -> Matrix {
        let c1 = self.coproduct(&self.unit());
        c1 * self.epsilon_products().transpose()
    }

    pub fn tensor_square(&self) -> TensorProduct {
        self.algebra.tensor(&self.algebra)
    }

    /// Express the structure in a new basis: column k of `p` is the new k-th
    /// basis vector in old coordinates, `algebra` the multimatrix algebra
    /// whose matrix units the new basis realizes.
    pub fn transform(&self, algebra: MultiMatrixAlgebra, p: &Matrix) -> Result<WeakHopfData> {
        let pinv = p
            .clone()
            .try_inverse()
            .ok_or_else(|| HopfError::Dimension("basis change is singular".into()))?;
        let kp = fd_star_algebra::linalg::kron(&pinv, &pinv);
        let delta = kp * &self.delta * p;
        let epsilon = p.transpose() * &self.epsilon;
        let antipode = &pinv * &self.antipode * p;
        let j = &pinv * self.star_matrix() * p.conjugate();
        let involution = if distance(j.as_slice(), algebra.adjoint_matrix().as_slice()) < 1e-10 {
            Involution::Adjoint
        } else {
            Involution::Antilinear(j)
        };
        WeakHopfData::new(algebra, delta, epsilon, antipode, involution)
    }

    /// Largest entry of the structure tensors, for relative residuals.
    pub fn scale(&self) -> f64 {
        max_abs(self.delta.as_slice())
            .max(max_abs(self.epsilon.as_slice()))
            .max(max_abs(self.antipode.as_slice()))
            .max(1.0)
    }
}
