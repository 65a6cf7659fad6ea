use crate::algebra::{Element, MultiMatrixAlgebra};
use crate::error::{AlgebraError, Result};
use crate::linalg::{re, C64, ZERO};

/// Trace τ(x) = Σ_α τ_α tr(x_α), one weight per block.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceState {
    weights: Vec<f64>,
}

impl TraceState {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(AlgebraError::Numerical(format!("trace weights must be finite and non-negative: {weights:?}")));
        }
        Ok(TraceState { weights })
    }

    /// The normalized trace proportional to the matrix trace.
    pub fn uniform(alg: &MultiMatrixAlgebra) -> Self {
        let total: usize = alg.blocks().iter().sum();
        TraceState { weights: vec![1.0 / total as f64; alg.num_blocks()] }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn is_faithful(&self) -> bool {
        self.weights.iter().all(|&w| w > 0.0)
    }

    pub fn total(&self, alg: &MultiMatrixAlgebra) -> f64 {
        alg.blocks().iter().zip(&self.weights).map(|(&m, &w)| m as f64 * w).sum()
    }

    pub fn is_normalized(&self, alg: &MultiMatrixAlgebra, tol: f64) -> bool {
        (self.total(alg) - 1.0).abs() <= tol
    }

    pub fn check(&self, alg: &MultiMatrixAlgebra) -> Result<()> {
        if self.weights.len() != alg.num_blocks() {
            return Err(AlgebraError::Dimension(format!(
                "trace has {} weights, algebra has {} blocks",
                self.weights.len(),
                alg.num_blocks()
            )));
        }
        Ok(())
    }

    pub fn eval(&self, alg: &MultiMatrixAlgebra, x: &Element) -> C64 {
        let mut t = ZERO;
        for (a, &m) in alg.blocks().iter().enumerate() {
            let mut s = ZERO;
            for k in 0..m {
                s += x[alg.index(a, k, k)];
            }
            t += s * re(self.weights[a]);
        }
        t
    }

    /// τ(x y) without forming the product.
    pub fn eval_product(&self, alg: &MultiMatrixAlgebra, x: &Element, y: &Element) -> C64 {
        (0..alg.num_blocks())
            .map(|a| alg.block_trace_of_product(x, y, a) * re(self.weights[a]))
            .sum()
    }
}

/// Watatani index Σ_α (m_α / τ_α) 1_α of a faithful trace.
pub fn watatani_index(alg: &MultiMatrixAlgebra, trace: &TraceState) -> Result<Element> {
    trace.check(alg)?;
    if !trace.is_faithful() {
        return Err(AlgebraError::ZeroWeight);
    }
    let mut x = alg.zero();
    for (a, &m) in alg.blocks().iter().enumerate() {
        x += alg.block_unit(a) * re(m as f64 / trace.weights()[a]);
    }
    Ok(x)
}
