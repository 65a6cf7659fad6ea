use nalgebra::DMatrix;

use crate::embedding::SubalgebraEmbedding;
use crate::error::{AlgebraError, Result};

/// Λ_{αβ} = multiplicity of sub block α in ambient block β.
#[derive(Clone, Debug, PartialEq)]
pub struct InclusionMatrix {
    pub entries: Vec<Vec<usize>>,
    pub sub_sizes: Vec<usize>,
    pub ambient_sizes: Vec<usize>,
}

impl InclusionMatrix {
    pub fn new(entries: Vec<Vec<usize>>, sub_sizes: Vec<usize>, ambient_sizes: Vec<usize>) -> Result<Self> {
        if entries.len() != sub_sizes.len() || entries.iter().any(|r| r.len() != ambient_sizes.len()) {
            return Err(AlgebraError::Dimension("inclusion matrix shape does not match block counts".into()));
        }
        Ok(InclusionMatrix { entries, sub_sizes, ambient_sizes })
    }

    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.ambient_sizes.len()
    }

    pub fn as_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows(), self.cols(), |a, b| self.entries[a][b] as f64)
    }

    /// Λ^t m == n.
    pub fn is_unital(&self) -> bool {
        (0..self.cols()).all(|b| {
            let s: usize = (0..self.rows()).map(|a| self.entries[a][b] * self.sub_sizes[a]).sum();
            s == self.ambient_sizes[b]
        })
    }

    /// Inclusion matrix of the basic construction: the ambient becomes the
    /// sub, the new ambient has block sizes Λ n.
    pub fn reflect(&self) -> InclusionMatrix {
        let sizes = (0..self.rows())
            .map(|a| (0..self.cols()).map(|b| self.entries[a][b] * self.ambient_sizes[b]).sum())
            .collect();
        let entries = (0..self.cols()).map(|b| (0..self.rows()).map(|a| self.entries[a][b]).collect()).collect();
        InclusionMatrix { entries, sub_sizes: self.ambient_sizes.clone(), ambient_sizes: sizes }
    }

    /// Weights λ Λ^t τ on the ambient blocks.
    pub fn ambient_weights(&self, lambda: f64, sub_weights: &[f64]) -> Vec<f64> {
        (0..self.cols())
            .map(|b| lambda * (0..self.rows()).map(|a| self.entries[a][b] as f64 * sub_weights[a]).sum::<f64>())
            .collect()
    }
}

/// Multiplicities from ranks of π_β(f^α_11) (a projection, so rank = trace).
pub fn inclusion_matrix(emb: &SubalgebraEmbedding) -> Result<InclusionMatrix> {
    let s = emb.sub();
    let a = emb.ambient();
    let mut entries = vec![vec![0; a.num_blocks()]; s.num_blocks()];
    for alpha in 0..s.num_blocks() {
        let p = emb.image(s.index(alpha, 0, 0));
        for beta in 0..a.num_blocks() {
            let t = a.block(&p, beta).trace().re;
            let k = t.round();
            if (t - k).abs() > 1e-6 || k < 0.0 {
                return Err(AlgebraError::Numerical(format!("non-integral multiplicity {t}")));
            }
            entries[alpha][beta] = k as usize;
        }
    }
    let lam = InclusionMatrix::new(entries, s.blocks().to_vec(), a.blocks().to_vec())?;
    if !lam.is_unital() {
        return Err(AlgebraError::NotUnital);
    }
    Ok(lam)
}

fn connected(m: &DMatrix<f64>) -> bool {
    let n = m.nrows();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..n {
            if !seen[j] && m[(i, j)] > 0.0 {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Perron-Frobenius data of ΛΛ^t: (λ⁻¹, τ⃗ on sub blocks) with Σ m_α τ_α = 1.
pub fn markov_trace(lam: &InclusionMatrix) -> Result<(f64, Vec<f64>)> {
    if lam.rows() == 0 {
        return Err(AlgebraError::Dimension("empty inclusion matrix".into()));
    }
    let l = lam.as_matrix();
    let g = &l * l.transpose();
    if !connected(&g) {
        return Err(AlgebraError::NotConnected);
    }
    let eig = g.clone().symmetric_eigen();
    let (k, &value) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty spectrum");
    let mut v: Vec<f64> = eig.eigenvectors.column(k).iter().copied().collect();
    if v.iter().sum::<f64>() < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    if v.iter().any(|&x| x <= 0.0) {
        return Err(AlgebraError::Numerical("Perron-Frobenius vector not positive".into()));
    }
    let norm: f64 = v.iter().zip(&lam.sub_sizes).map(|(x, &m)| x * m as f64).sum();
    v.iter_mut().for_each(|x| *x /= norm);
    let tv = nalgebra::DVector::from_vec(v.clone());
    let residual = (&g * &tv - &tv * value).amax() / tv.amax();
    if residual > 1e-10 * value.max(1.0) {
        return Err(AlgebraError::Numerical(format!("eigen residual {residual:.3e}")));
    }
    Ok((value, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::MultiMatrixAlgebra;
    use crate::embedding::{diagonal_subalgebra, scalars};

    #[test]
    fn scalars_in_c2() {
        let l = inclusion_matrix(&scalars(&MultiMatrixAlgebra::diagonal(2))).unwrap();
        assert_eq!(l.entries, vec![vec![1, 1]]);
        let (li, t) = markov_trace(&l).unwrap();
        assert!((li - 2.0).abs() < 1e-12);
        assert!((t[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn diagonal_in_m2() {
        let l = inclusion_matrix(&diagonal_subalgebra(&MultiMatrixAlgebra::full(2))).unwrap();
        assert_eq!(l.entries, vec![vec![1], vec![1]]);
    }

    #[test]
    fn all_ones_two_by_two() {
        let l = InclusionMatrix::new(vec![vec![1, 1], vec![1, 1]], vec![1, 1], vec![2, 2]).unwrap();
        let (li, t) = markov_trace(&l).unwrap();
        assert!((li - 4.0).abs() < 1e-12);
        assert!((t[0] - 0.5).abs() < 1e-12 && (t[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn disconnected_is_rejected() {
        let l = InclusionMatrix::new(vec![vec![1, 0], vec![0, 1]], vec![1, 1], vec![1, 1]).unwrap();
        assert!(matches!(markov_trace(&l), Err(AlgebraError::NotConnected)));
    }

    #[test]
    fn reflection_sizes() {
        let l = InclusionMatrix::new(vec![vec![1, 1]], vec![1], vec![1, 1]).unwrap();
        let r = l.reflect();
        assert_eq!(r.ambient_sizes, vec![2]);
        assert_eq!(r.entries, vec![vec![1], vec![1]]);
    }
}
