use crate::error::{AlgebraError, Result};
use crate::linalg::{Matrix, Vector, C64, ONE, ZERO};

/// Coefficients of an element in the matrix-unit basis of its algebra.
///
/// Block α occupies `offset(α)..offset(α) + m_α²`, row-major within the
/// block, so `f^α_{kl}` sits at `offset(α) + k m_α + l`.
pub type Element = Vector;

/// Direct sum ⊕_α M_{m_α}(ℂ).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiMatrixAlgebra {
    blocks: Vec<usize>,
    offsets: Vec<usize>,
    dim: usize,
}

impl MultiMatrixAlgebra {
    pub fn new(blocks: Vec<usize>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(AlgebraError::InvalidBlocks("no blocks".into()));
        }
        if let Some(p) = blocks.iter().position(|&m| m == 0) {
            return Err(AlgebraError::InvalidBlocks(format!("block {p} has size 0")));
        }
        let mut offsets = Vec::with_capacity(blocks.len());
        let mut dim = 0;
        for &m in &blocks {
            offsets.push(dim);
            dim += m * m;
        }
        Ok(MultiMatrixAlgebra { blocks, offsets, dim })
    }

    /// M_n(ℂ).
    pub fn full(n: usize) -> Self {
        Self::new(vec![n]).expect("n >= 1")
    }

    /// ℂ^n as n one-dimensional blocks.
    pub fn diagonal(n: usize) -> Self {
        Self::new(vec![1; n]).expect("n >= 1")
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn offset(&self, alpha: usize) -> usize {
        self.offsets[alpha]
    }

    pub fn index(&self, alpha: usize, k: usize, l: usize) -> usize {
        self.offsets[alpha] + k * self.blocks[alpha] + l
    }

    /// (block, row, column) of basis index `i`.
    pub fn locate(&self, i: usize) -> (usize, usize, usize) {
        let alpha = match self.offsets.binary_search(&i) {
            Ok(a) => a,
            Err(a) => a - 1,
        };
        let m = self.blocks[alpha];
        let r = i - self.offsets[alpha];
        (alpha, r / m, r % m)
    }

    /// Index of `(f_i)*`.
    pub fn adjoint_index(&self, i: usize) -> usize {
        let (a, k, l) = self.locate(i);
        self.index(a, l, k)
    }

    /// Index of `f_i f_j`, if nonzero.
    pub fn basis_product(&self, i: usize, j: usize) -> Option<usize> {
        let (a, k, l) = self.locate(i);
        let (b, p, q) = self.locate(j);
        (a == b && l == p).then(|| self.index(a, k, q))
    }

    pub fn zero(&self) -> Element {
        Element::zeros(self.dim)
    }

    pub fn basis(&self, i: usize) -> Element {
        let mut x = self.zero();
        x[i] = ONE;
        x
    }

    pub fn unit(&self) -> Element {
        let mut x = self.zero();
        for (a, &m) in self.blocks.iter().enumerate() {
            for k in 0..m {
                x[self.index(a, k, k)] = ONE;
            }
        }
        x
    }

    /// Minimal central projection of block α.
    pub fn block_unit(&self, alpha: usize) -> Element {
        let mut x = self.zero();
        for k in 0..self.blocks[alpha] {
            x[self.index(alpha, k, k)] = ONE;
        }
        x
    }

    pub fn block(&self, x: &Element, alpha: usize) -> Matrix {
        let m = self.blocks[alpha];
        let o = self.offsets[alpha];
        Matrix::from_row_slice(m, m, &x.as_slice()[o..o + m * m])
    }

    pub fn from_blocks(&self, blocks: &[Matrix]) -> Result<Element> {
        if blocks.len() != self.blocks.len() {
            return Err(AlgebraError::Dimension(format!(
                "{} blocks given, algebra has {}",
                blocks.len(),
                self.blocks.len()
            )));
        }
        let mut x = self.zero();
        for (a, b) in blocks.iter().enumerate() {
            let m = self.blocks[a];
            if b.shape() != (m, m) {
                return Err(AlgebraError::Dimension(format!("block {a} is {:?}, expected {m}x{m}", b.shape())));
            }
            for k in 0..m {
                for l in 0..m {
                    x[self.index(a, k, l)] = b[(k, l)];
                }
            }
        }
        Ok(x)
    }

    pub fn mul(&self, x: &Element, y: &Element) -> Element {
        let mut out = self.zero();
        let (xs, ys) = (x.as_slice(), y.as_slice());
        let os = out.as_mut_slice();
        for (a, &m) in self.blocks.iter().enumerate() {
            let o = self.offsets[a];
            for i in 0..m {
                let row = &mut os[o + i * m..o + (i + 1) * m];
                for k in 0..m {
                    let s = xs[o + i * m + k];
                    if s == ZERO {
                        continue;
                    }
                    let yr = &ys[o + k * m..o + (k + 1) * m];
                    for (r, v) in row.iter_mut().zip(yr) {
                        *r += s * v;
                    }
                }
            }
        }
        out
    }

    pub fn mul3(&self, x: &Element, y: &Element, z: &Element) -> Element {
        self.mul(&self.mul(x, y), z)
    }

    pub fn adjoint(&self, x: &Element) -> Element {
        let mut out = self.zero();
        for (a, &m) in self.blocks.iter().enumerate() {
            for k in 0..m {
                for l in 0..m {
                    out[self.index(a, l, k)] = x[self.index(a, k, l)].conj();
                }
            }
        }
        out
    }

    pub fn commutator(&self, x: &Element, y: &Element) -> Element {
        self.mul(x, y) - self.mul(y, x)
    }

    /// Unweighted trace Σ_α tr(x_α).
    pub fn matrix_trace(&self, x: &Element) -> C64 {
        let mut t = ZERO;
        for (a, &m) in self.blocks.iter().enumerate() {
            for k in 0..m {
                t += x[self.index(a, k, k)];
            }
        }
        t
    }

    /// tr(x_α y_α) for one block, without forming the product.
    pub fn block_trace_of_product(&self, x: &Element, y: &Element, alpha: usize) -> C64 {
        let m = self.blocks[alpha];
        let o = self.offsets[alpha];
        let mut t = ZERO;
        for i in 0..m {
            for k in 0..m {
                t += x[o + i * m + k] * y[o + k * m + i];
            }
        }
        t
    }

    /// Matrix of y ↦ x y on coefficient vectors.
    pub fn left_mul_matrix(&self, x: &Element) -> Matrix {
        let mut out = Matrix::zeros(self.dim, self.dim);
        for j in 0..self.dim {
            let (a, p, q) = self.locate(j);
            for i in 0..self.blocks[a] {
                out[(self.index(a, i, q), j)] += x[self.index(a, i, p)];
            }
        }
        out
    }

    /// Matrix of y ↦ y x on coefficient vectors.
    pub fn right_mul_matrix(&self, x: &Element) -> Matrix {
        let mut out = Matrix::zeros(self.dim, self.dim);
        for j in 0..self.dim {
            let (a, p, q) = self.locate(j);
            for l in 0..self.blocks[a] {
                out[(self.index(a, p, l), j)] += x[self.index(a, q, l)];
            }
        }
        out
    }

    /// Matrix of the adjoint as an antilinear map: x* = J conj(x).
    pub fn adjoint_matrix(&self) -> Matrix {
        let mut j = Matrix::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            j[(self.adjoint_index(i), i)] = ONE;
        }
        j
    }

    /// ℂ-span of the block units.
    pub fn center_basis(&self) -> Matrix {
        let mut z = Matrix::zeros(self.dim, self.num_blocks());
        for a in 0..self.num_blocks() {
            z.set_column(a, &self.block_unit(a));
        }
        z
    }

    pub fn is_commutative(&self) -> bool {
        self.blocks.iter().all(|&m| m == 1)
    }

    pub fn tensor(&self, other: &MultiMatrixAlgebra) -> TensorProduct {
        TensorProduct::new(self, other)
    }
}

/// A ⊗ B realized as the multimatrix algebra with blocks m_α n_β in
/// lexicographic (α, β) order, together with the index map from coefficient
/// pairs (i, j) (meaning f_i ⊗ g_j) to the tensor basis.
#[derive(Clone, Debug)]
pub struct TensorProduct {
    pub algebra: MultiMatrixAlgebra,
    left_dim: usize,
    right_dim: usize,
    pair_to_tensor: Vec<usize>,
}

impl TensorProduct {
    pub fn new(a: &MultiMatrixAlgebra, b: &MultiMatrixAlgebra) -> Self {
        let mut blocks = Vec::new();
        for &m in a.blocks() {
            for &n in b.blocks() {
                blocks.push(m * n);
            }
        }
        let algebra = MultiMatrixAlgebra::new(blocks).expect("positive sizes");
        let nb = b.num_blocks();
        let mut pair_to_tensor = vec![0; a.dim() * b.dim()];
        for i in 0..a.dim() {
            let (al, k, l) = a.locate(i);
            for j in 0..b.dim() {
                let (be, p, q) = b.locate(j);
                let n = b.blocks()[be];
                pair_to_tensor[i * b.dim() + j] = algebra.index(al * nb + be, k * n + p, l * n + q);
            }
        }
        TensorProduct { algebra, left_dim: a.dim(), right_dim: b.dim(), pair_to_tensor }
    }

    /// Tensor-basis coefficients of Σ c_ij f_i ⊗ g_j.
    pub fn from_pairs(&self, c: &Matrix) -> Element {
        let mut x = self.algebra.zero();
        for i in 0..self.left_dim {
            for j in 0..self.right_dim {
                x[self.pair_to_tensor[i * self.right_dim + j]] = c[(i, j)];
            }
        }
        x
    }

    pub fn to_pairs(&self, x: &Element) -> Matrix {
        let mut c = Matrix::zeros(self.left_dim, self.right_dim);
        for i in 0..self.left_dim {
            for j in 0..self.right_dim {
                c[(i, j)] = x[self.pair_to_tensor[i * self.right_dim + j]];
            }
        }
        c
    }

    /// Product of two tensors given in pair coordinates.
    pub fn mul_pairs(&self, x: &Matrix, y: &Matrix) -> Matrix {
        let p = self.algebra.mul(&self.from_pairs(x), &self.from_pairs(y));
        self.to_pairs(&p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::re;

    #[test]
    fn matrix_units_multiply() {
        let a = MultiMatrixAlgebra::new(vec![2, 1]).unwrap();
        assert_eq!(a.dim(), 5);
        let f01 = a.basis(a.index(0, 0, 1));
        let f10 = a.basis(a.index(0, 1, 0));
        assert_eq!(a.mul(&f01, &f10), a.basis(a.index(0, 0, 0)));
        assert_eq!(a.basis_product(a.index(0, 0, 1), a.index(0, 1, 0)), Some(a.index(0, 0, 0)));
        assert_eq!(a.basis_product(a.index(0, 0, 1), a.index(1, 0, 0)), None);
        assert_eq!(a.adjoint(&f01), f10);
    }

    #[test]
    fn locate_inverts_index() {
        let a = MultiMatrixAlgebra::new(vec![1, 3, 2]).unwrap();
        for i in 0..a.dim() {
            let (al, k, l) = a.locate(i);
            assert_eq!(a.index(al, k, l), i);
        }
    }

    #[test]
    fn multiplication_matrices_match_products() {
        let a = MultiMatrixAlgebra::new(vec![2, 1]).unwrap();
        let x = Vector::from_fn(5, |i, _| C64::new(i as f64, 1.0 - i as f64));
        let y = Vector::from_fn(5, |i, _| C64::new(0.5 * i as f64, 2.0));
        assert!((a.left_mul_matrix(&x) * &y - a.mul(&x, &y)).norm() < 1e-12);
        assert!((a.right_mul_matrix(&x) * &y - a.mul(&y, &x)).norm() < 1e-12);
        let j = a.adjoint_matrix();
        assert!((j * x.conjugate() - a.adjoint(&x)).norm() < 1e-12);
    }

    #[test]
    fn tensor_product_is_multiplicative() {
        let a = MultiMatrixAlgebra::new(vec![2, 1]).unwrap();
        let b = MultiMatrixAlgebra::new(vec![1, 2]).unwrap();
        let t = a.tensor(&b);
        assert_eq!(t.algebra.blocks(), &[2, 4, 1, 2]);
        let x1 = Vector::from_fn(5, |i, _| re(1.0 + i as f64));
        let y1 = Vector::from_fn(5, |i, _| re(2.0 - i as f64));
        let x2 = Vector::from_fn(5, |i, _| C64::new(0.0, i as f64));
        let y2 = Vector::from_fn(5, |i, _| re((i * i) as f64));
        let p = &x1 * x2.transpose();
        let q = &y1 * y2.transpose();
        let expect = a.mul(&x1, &y1) * b.mul(&x2, &y2).transpose();
        assert!((t.mul_pairs(&p, &q) - expect).norm() < 1e-10);
    }
}
