//! ⟨D, e⟩ for an inclusion C ⊂ D with a faithful trace on D.
//!
//! D acts on L²(D, τ) with orthonormal basis ξ = f/√τ_β (f the matrix units
//! of D).  In this basis left multiplication by a matrix unit is a 0/1
//! matrix and so is right multiplication.  ⟨D, e⟩ is the commutant of the
//! right action of C, computed with the structured commutant routine.

use crate::algebra::{Element, MultiMatrixAlgebra};
use crate::embedding::{relative_commutant, SubalgebraEmbedding};
use crate::error::{AlgebraError, Result};
use crate::expectation::Expectation;
use crate::inclusion::inclusion_matrix;
use crate::linalg::{self, distance, re, Matrix};
use crate::trace::TraceState;
use crate::Config;

/// The basic construction of C ⊂ D.
#[derive(Clone, Debug)]
pub struct JonesExtension {
    /// ⟨D, e⟩ as an abstract multimatrix algebra.
    pub algebra: MultiMatrixAlgebra,
    /// D ⊂ ⟨D, e⟩.
    pub embedding: SubalgebraEmbedding,
    /// ⟨D, e⟩ ⊂ End(L²(D)).
    pub representation: SubalgebraEmbedding,
    /// Jones projection in ⟨D, e⟩ coordinates.
    pub e: Element,
    pub trace: TraceState,
    pub lambda: f64,
}

fn operator(m: &Matrix) -> Element {
    // row-major flattening matches index(0, i, j) = i n + j
    Element::from_column_slice(m.transpose().as_slice())
}

/// Builds ⟨D, e⟩ for `sub`: C → D with trace on D and the Markov scalar λ.
pub fn basic_construction(sub: &SubalgebraEmbedding, trace: &TraceState, lambda: f64, cfg: &Config) -> Result<JonesExtension> {
    let d = sub.ambient();
    let c = sub.sub();
    trace.check(d)?;
    if !trace.is_faithful() {
        return Err(AlgebraError::DegenerateTrace);
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(AlgebraError::NotMarkov(f64::NAN));
    }
    let n = d.dim();
    let full = MultiMatrixAlgebra::full(n);

    // C → End(L²D) through g_kl = ρ(c_lk), which turns the anti-homomorphism
    // ρ into a homomorphism
    let mut gimages = Matrix::zeros(full.dim(), c.dim());
    for i in 0..c.dim() {
        let rho = d.right_mul_matrix(&sub.image(c.adjoint_index(i)));
        gimages.set_column(i, &operator(&rho));
    }
    let right = SubalgebraEmbedding::new(c.clone(), full.clone(), gimages, 1e-9)?;
    let representation = relative_commutant(&right)?;
    let algebra = representation.sub().clone();

    // D → ⟨D, e⟩ by left multiplication
    let mut left = Matrix::zeros(full.dim(), d.dim());
    for i in 0..d.dim() {
        left.set_column(i, &operator(&d.left_mul_matrix(&d.basis(i))));
    }
    let left = SubalgebraEmbedding::new(d.clone(), full.clone(), left, 1e-9)?;
    let embedding = left.restrict(&representation, 1e-8)?;

    // e = projection onto the closure of C in L²(D)
    let mut proj = Matrix::zeros(n, n);
    let ctrace = sub.restrict_trace(trace)?;
    for i in 0..c.dim() {
        let (a, _, _) = c.locate(i);
        let x = sub.image(i);
        let mut v = linalg::Vector::zeros(n);
        for j in 0..n {
            let (b, _, _) = d.locate(j);
            v[j] = x[j] * re(trace.weights()[b].sqrt());
        }
        v /= re(ctrace.weights()[a].sqrt());
        proj += &v * v.adjoint();
    }
    let e_full = operator(&proj);
    let r = representation.membership_residual(&e_full);
    if r > 1e-8 {
        return Err(AlgebraError::Numerical(format!("Jones projection outside the commutant ({r:.3e})")));
    }
    let e = representation.coords(&e_full);

    // predicted block sizes Λ n_D
    let lam = inclusion_matrix(sub)?;
    let predicted = lam.reflect().ambient_sizes;
    if predicted != algebra.blocks() {
        return Err(AlgebraError::Decomposition(format!(
            "basic construction blocks {:?}, predicted {:?}",
            algebra.blocks(),
            predicted
        )));
    }
    // commutant blocks follow the blocks of C, and e c^α_11 is minimal in block α
    let weights: Vec<f64> = ctrace.weights().iter().map(|t| lambda * t).collect();
    let ext = TraceState::new(weights)?;

    // τ_E restricted to D must be τ_D
    let restricted = embedding.restrict_trace(&ext)?;
    let markov = restricted
        .weights()
        .iter()
        .zip(trace.weights())
        .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs() / b.abs().max(1e-300)));
    if markov > cfg.tol {
        return Err(AlgebraError::NotMarkov(markov));
    }
    let out = JonesExtension { algebra, embedding, representation, e, trace: ext, lambda };
    let resid = out.extended_trace_residual(trace);
    if resid > cfg.tol {
        return Err(AlgebraError::ExtendedTrace(resid));
    }
    Ok(out)
}

impl JonesExtension {
    /// max |τ_E(x e y) − λ τ_D(xy)| over matrix units x, y of D.
    pub fn extended_trace_residual(&self, dtrace: &TraceState) -> f64 {
        let d = self.embedding.sub();
        let e_alg = &self.algebra;
        let mut worst = 0.0_f64;
        let xs: Vec<Element> = (0..d.dim()).map(|i| self.embedding.image(i)).collect();
        let xe: Vec<Element> = xs.iter().map(|x| e_alg.mul(x, &self.e)).collect();
        for i in 0..d.dim() {
            for j in 0..d.dim() {
                let lhs = self.trace.eval_product(e_alg, &xe[i], &xs[j]);
                let rhs = match d.basis_product(i, j) {
                    Some(k) => dtrace.eval(d, &d.basis(k)) * re(self.lambda),
                    None => re(0.0),
                };
                worst = worst.max((lhs - rhs).norm());
            }
        }
        worst
    }

    /// max ‖e x e − E(x) e‖ and |τ(x e) − λ τ(x)| over matrix units of D.
    pub fn markov_residuals(&self, sub: &SubalgebraEmbedding, dtrace: &TraceState) -> Result<(f64, f64)> {
        let d = self.embedding.sub();
        let ex = Expectation::new(sub, dtrace)?;
        let a = &self.algebra;
        let (mut w1, mut w2) = (0.0_f64, 0.0_f64);
        for i in 0..d.dim() {
            let x = self.embedding.image(i);
            let exe = a.mul3(&self.e, &x, &self.e);
            let ce = a.mul(&self.embedding.map(&ex.apply(&d.basis(i))), &self.e);
            w1 = w1.max(distance(exe.as_slice(), ce.as_slice()));
            let t = self.trace.eval_product(a, &x, &self.e) - dtrace.eval(d, &d.basis(i)) * re(self.lambda);
            w2 = w2.max(t.norm());
        }
        Ok((w1, w2))
    }

    /// dim span{x e y : x, y ∈ D}; equals dim ⟨D, e⟩ for a basic construction.
    pub fn span_rank(&self) -> usize {
        let d = self.embedding.sub();
        let a = &self.algebra;
        let xs: Vec<Element> = (0..d.dim()).map(|i| self.embedding.image(i)).collect();
        let xe: Vec<Element> = xs.iter().map(|x| a.mul(x, &self.e)).collect();
        let mut cols = Matrix::zeros(a.dim(), d.dim() * d.dim());
        for i in 0..d.dim() {
            for j in 0..d.dim() {
                cols.set_column(i * d.dim() + j, &a.mul(&xe[i], &xs[j]));
            }
        }
        linalg::rank(&cols, 1e-9)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::{diagonal_subalgebra, scalars};
    use crate::linalg::C64;

    #[test]
    fn scalars_in_c2_give_m2() {
        let d = MultiMatrixAlgebra::diagonal(2);
        let j = basic_construction(&scalars(&d), &TraceState::uniform(&d), 0.5, &Config::default()).unwrap();
        assert_eq!(j.algebra.blocks(), &[2]);
        let e_op = j.representation.map(&j.e);
        for v in e_op.iter() {
            assert!((v - C64::new(0.5, 0.0)).norm() < 1e-12);
        }
        assert!((j.trace.weights()[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn diagonal_in_m2_gives_dimension_eight() {
        let d = MultiMatrixAlgebra::full(2);
        let j = basic_construction(&diagonal_subalgebra(&d), &TraceState::uniform(&d), 0.5, &Config::default()).unwrap();
        assert_eq!(j.algebra.dim(), 8);
        assert_eq!(j.algebra.blocks(), &[2, 2]);
        assert_eq!(j.span_rank(), 8);
    }

    #[test]
    fn identity_inclusion_has_unit_projection() {
        let d = MultiMatrixAlgebra::full(3);
        let j = basic_construction(&SubalgebraEmbedding::identity(&d), &TraceState::uniform(&d), 1.0, &Config::default()).unwrap();
        assert!(distance(j.e.as_slice(), j.algebra.unit().as_slice()) < 1e-12);
    }

    #[test]
    fn wrong_lambda_is_not_markov() {
        let d = MultiMatrixAlgebra::diagonal(2);
        let r = basic_construction(&scalars(&d), &TraceState::uniform(&d), 0.3, &Config::default());
        assert!(matches!(r, Err(AlgebraError::NotMarkov(_))));
    }

    #[test]
    fn non_markov_trace_is_rejected() {
        let d = MultiMatrixAlgebra::diagonal(2);
        let t = TraceState::new(vec![0.25, 0.75]).unwrap();
        let r = basic_construction(&scalars(&d), &t, 0.5, &Config::default());
        assert!(matches!(r, Err(AlgebraError::NotMarkov(_))));
    }
}
