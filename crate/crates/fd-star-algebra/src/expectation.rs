use crate::algebra::Element;
use crate::embedding::SubalgebraEmbedding;
use crate::error::{AlgebraError, Result};
use crate::linalg::re;
use crate::trace::TraceState;

/// τ-orthogonal projection onto the image of a subalgebra.
///
/// In matrix units the Gram matrix τ(f_i^* f_j) is diagonal with entries
/// τ(f^α_{kk}), so E(x) = Σ τ(f_{lk} x)/τ(f^α_{11}) f_{kl}.
#[derive(Clone, Debug)]
pub struct Expectation {
    sub: SubalgebraEmbedding,
    trace: TraceState,
    weights: Vec<f64>,
}

impl Expectation {
    pub fn new(sub: &SubalgebraEmbedding, trace: &TraceState) -> Result<Self> {
        trace.check(sub.ambient())?;
        let s = sub.sub();
        let mut weights = Vec::with_capacity(s.num_blocks());
        for a in 0..s.num_blocks() {
            let w = trace.eval(sub.ambient(), &sub.image(s.index(a, 0, 0))).re;
            if !(w > 1e-14) {
                return Err(AlgebraError::DegenerateTrace);
            }
            weights.push(w);
        }
        Ok(Expectation { sub: sub.clone(), trace: trace.clone(), weights })
    }

    pub fn embedding(&self) -> &SubalgebraEmbedding {
        &self.sub
    }

    /// Sub coordinates of E(x).
    pub fn coords(&self, x: &Element) -> Element {
        let s = self.sub.sub();
        let amb = self.sub.ambient();
        let mut c = s.zero();
        for i in 0..s.dim() {
            let (a, _, _) = s.locate(i);
            let fi_star = self.sub.image(s.adjoint_index(i));
            c[i] = self.trace.eval_product(amb, &fi_star, x) / re(self.weights[a]);
        }
        c
    }

    /// E(x) in ambient coordinates.
    pub fn apply(&self, x: &Element) -> Element {
        self.sub.map(&self.coords(x))
    }
}

pub fn conditional_expectation(sub: &SubalgebraEmbedding, trace: &TraceState, x: &Element) -> Result<Element> {
    Ok(Expectation::new(sub, trace)?.apply(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::MultiMatrixAlgebra;
    use crate::embedding::{diagonal_subalgebra, scalars};
    use crate::linalg::C64;

    #[test]
    fn onto_diagonal_keeps_diagonal() {
        let a = MultiMatrixAlgebra::full(2);
        let x = Element::from_vec(vec![re(1.0), re(2.0), re(3.0), re(4.0)]);
        let e = conditional_expectation(&diagonal_subalgebra(&a), &TraceState::uniform(&a), &x).unwrap();
        assert!((e - Element::from_vec(vec![re(1.0), re(0.0), re(0.0), re(4.0)])).norm() < 1e-14);
    }

    #[test]
    fn onto_scalars_is_the_trace() {
        let a = MultiMatrixAlgebra::new(vec![2, 1]).unwrap();
        let t = TraceState::new(vec![0.25, 0.5]).unwrap();
        let x = Element::from_fn(5, |i, _| C64::new(i as f64, 1.0));
        let e = conditional_expectation(&scalars(&a), &t, &x).unwrap();
        assert!((e - a.unit() * t.eval(&a, &x)).norm() < 1e-14);
    }

    #[test]
    fn degenerate_trace_is_reported() {
        let a = MultiMatrixAlgebra::diagonal(2);
        let t = TraceState::new(vec![0.0, 1.0]).unwrap();
        let sub = crate::embedding::SubalgebraEmbedding::identity(&a);
        assert!(matches!(Expectation::new(&sub, &t), Err(AlgebraError::DegenerateTrace)));
    }
}
