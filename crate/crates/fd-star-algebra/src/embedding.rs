use crate::algebra::{Element, MultiMatrixAlgebra};
use crate::error::{AlgebraError, Result};
use crate::linalg::{self, distance, max_abs, re, Matrix, ONE};
use crate::trace::TraceState;

/// Unital *-embedding of `sub` into `ambient`, stored as the images of the
/// matrix units of `sub` (columns of `images`, in ambient coordinates).
#[derive(Clone, Debug)]
pub struct SubalgebraEmbedding {
    sub: MultiMatrixAlgebra,
    ambient: MultiMatrixAlgebra,
    images: Matrix,
    norms: Vec<f64>,
}

/// Largest violation of the matrix-unit relations by `images`.
///
/// Checks (f_{kl})* = f_{lk}, f_{k1} f_{1l} = f_{kl}, f_{1k} f_{k1} = f_{11},
/// Σ f_{kk} = 1.  Together with a nonzero f_{11} per block these imply every
/// relation f_{kl} f_{pq} = δ_{lp} f_{kq}, including orthogonality across
/// blocks (projections summing to 1 are orthogonal).
pub fn matrix_unit_defect(sub: &MultiMatrixAlgebra, ambient: &MultiMatrixAlgebra, images: &Matrix) -> f64 {
    let img = |i: usize| images.column(i).into_owned();
    let mut worst = 0.0_f64;
    let mut total = ambient.zero();
    for (a, &m) in sub.blocks().iter().enumerate() {
        let f11 = img(sub.index(a, 0, 0));
        if max_abs(f11.as_slice()) < 1e-12 {
            return f64::INFINITY;
        }
        for k in 0..m {
            let fk1 = img(sub.index(a, k, 0));
            for l in 0..m {
                let fkl = img(sub.index(a, k, l));
                let flk = img(sub.index(a, l, k));
                worst = worst.max(distance(ambient.adjoint(&fkl).as_slice(), flk.as_slice()));
                let f1l = img(sub.index(a, 0, l));
                worst = worst.max(distance(ambient.mul(&fk1, &f1l).as_slice(), fkl.as_slice()));
            }
            let f1k = img(sub.index(a, 0, k));
            worst = worst.max(distance(ambient.mul(&f1k, &fk1).as_slice(), f11.as_slice()));
            total += img(sub.index(a, k, k));
        }
    }
    worst.max(distance(total.as_slice(), ambient.unit().as_slice()))
}

impl SubalgebraEmbedding {
    pub fn new(sub: MultiMatrixAlgebra, ambient: MultiMatrixAlgebra, images: Matrix, tol: f64) -> Result<Self> {
        if images.shape() != (ambient.dim(), sub.dim()) {
            return Err(AlgebraError::Dimension(format!(
                "images are {:?}, expected {}x{}",
                images.shape(),
                ambient.dim(),
                sub.dim()
            )));
        }
        let defect = matrix_unit_defect(&sub, &ambient, &images);
        if !(defect <= tol) {
            return Err(AlgebraError::NotSubalgebra(format!("matrix-unit defect {defect:.3e}")));
        }
        Ok(Self::trusted(sub, ambient, images))
    }

    /// Skips the matrix-unit check; for images built by exact formulas.
    pub(crate) fn trusted(sub: MultiMatrixAlgebra, ambient: MultiMatrixAlgebra, images: Matrix) -> Self {
        let norms = (0..sub.dim()).map(|i| images.column(i).norm_squared()).collect();
        SubalgebraEmbedding { sub, ambient, images, norms }
    }

    pub fn identity(alg: &MultiMatrixAlgebra) -> Self {
        Self::trusted(alg.clone(), alg.clone(), Matrix::identity(alg.dim(), alg.dim()))
    }

    pub fn sub(&self) -> &MultiMatrixAlgebra {
        &self.sub
    }

    pub fn ambient(&self) -> &MultiMatrixAlgebra {
        &self.ambient
    }

    pub fn images(&self) -> &Matrix {
        &self.images
    }

    pub fn image(&self, i: usize) -> Element {
        self.images.column(i).into_owned()
    }

    /// Ambient coordinates of a sub element.
    pub fn map(&self, x: &Element) -> Element {
        &self.images * x
    }

    /// Sub coordinates of an ambient element assumed to lie in the image
    /// (Hilbert-Schmidt projection onto the image otherwise).
    pub fn coords(&self, x: &Element) -> Element {
        let mut c = self.images.adjoint() * x;
        for (i, n) in self.norms.iter().enumerate() {
            c[i] /= re(*n);
        }
        c
    }

    /// Relative distance of `x` from the image.
    pub fn membership_residual(&self, x: &Element) -> f64 {
        distance(x.as_slice(), self.map(&self.coords(x)).as_slice())
    }

    /// X → Y followed by Y → Z.
    pub fn compose(&self, outer: &SubalgebraEmbedding) -> Result<Self> {
        if outer.sub != self.ambient {
            return Err(AlgebraError::Dimension("composed embeddings do not chain".into()));
        }
        Ok(Self::trusted(self.sub.clone(), outer.ambient.clone(), &outer.images * &self.images))
    }

    /// Given X → Z (self) and Y → Z (onto) with image(X) ⊂ image(Y),
    /// the induced embedding X → Y.
    pub fn restrict(&self, onto: &SubalgebraEmbedding, tol: f64) -> Result<Self> {
        if onto.ambient != self.ambient {
            return Err(AlgebraError::Dimension("restriction needs a common ambient".into()));
        }
        let mut images = Matrix::zeros(onto.sub.dim(), self.sub.dim());
        for i in 0..self.sub.dim() {
            let x = self.image(i);
            let r = onto.membership_residual(&x);
            if r > tol {
                return Err(AlgebraError::NotSubalgebra(format!("image not contained (residual {r:.3e})")));
            }
            images.set_column(i, &onto.coords(&x));
        }
        Self::new(self.sub.clone(), onto.sub.clone(), images, tol.max(1e-10))
    }

    /// Trace of the ambient restricted to the sub: τ_α = τ(image of f^α_11).
    pub fn restrict_trace(&self, trace: &TraceState) -> Result<TraceState> {
        let w = (0..self.sub.num_blocks())
            .map(|a| trace.eval(&self.ambient, &self.image(self.sub.index(a, 0, 0))).re)
            .collect();
        TraceState::new(w)
    }

    /// Orthonormal basis (Hilbert-Schmidt) of the image subspace.
    pub fn image_basis(&self) -> Matrix {
        let mut q = self.images.clone();
        for (i, n) in self.norms.iter().enumerate() {
            let s = re(1.0 / n.sqrt());
            for r in 0..q.nrows() {
                q[(r, i)] *= s;
            }
        }
        q
    }
}

/// S′ ∩ ambient for the image S of `sub`.
///
/// Inside each ambient block β, let w_1..w_μ be an orthonormal basis of the
/// range of π_β(f^α_11).  The vectors u_{k,r} = π_β(f^α_{k1}) w_r are
/// orthonormal and g_{rs} = Σ_k u_{k,r} u_{k,s}^* are matrix units of the
/// commutant block of size μ = multiplicity of α in β.
pub fn relative_commutant(sub: &SubalgebraEmbedding) -> Result<SubalgebraEmbedding> {
    let amb = sub.ambient();
    let s = sub.sub();
    let mut blocks = Vec::new();
    let mut units: Vec<(usize, Vec<Matrix>)> = Vec::new(); // (ambient block, u_{k} as n_β x μ)
    for (beta, &n) in amb.blocks().iter().enumerate() {
        for (alpha, &m) in s.blocks().iter().enumerate() {
            let p = amb.block(&sub.image(s.index(alpha, 0, 0)), beta);
            let mu = p.trace().re.round() as usize;
            if mu == 0 {
                continue;
            }
            let (_, vecs) = linalg::hermitian_eigen(&p);
            let w = vecs.columns(n - mu, mu).into_owned();
            let us = (0..m)
                .map(|k| amb.block(&sub.image(s.index(alpha, k, 0)), beta) * &w)
                .collect();
            blocks.push(mu);
            units.push((beta, us));
        }
    }
    let comm = MultiMatrixAlgebra::new(blocks)?;
    let mut images = Matrix::zeros(amb.dim(), comm.dim());
    for (g, (beta, us)) in units.iter().enumerate() {
        let mu = comm.blocks()[g];
        let n = amb.blocks()[*beta];
        for r in 0..mu {
            for t in 0..mu {
                let mut blk = Matrix::zeros(n, n);
                for u in us {
                    blk += u.column(r) * u.column(t).adjoint();
                }
                let col = comm.index(g, r, t);
                for i in 0..n {
                    for j in 0..n {
                        images[(amb.index(*beta, i, j), col)] = blk[(i, j)];
                    }
                }
            }
        }
    }
    let defect = matrix_unit_defect(&comm, amb, &images);
    if defect > 1e-8 {
        return Err(AlgebraError::Decomposition(format!("commutant units defect {defect:.3e}")));
    }
    Ok(SubalgebraEmbedding::trusted(comm, amb.clone(), images))
}

/// Z(alg) as the span of the block units.
pub fn center(alg: &MultiMatrixAlgebra) -> SubalgebraEmbedding {
    SubalgebraEmbedding::trusted(MultiMatrixAlgebra::diagonal(alg.num_blocks()), alg.clone(), alg.center_basis())
}

/// Center of an embedded subalgebra, embedded in the same ambient.
pub fn center_of(sub: &SubalgebraEmbedding) -> SubalgebraEmbedding {
    let s = sub.sub();
    let z = center(s);
    let images = sub.images() * z.images();
    SubalgebraEmbedding::trusted(z.sub().clone(), sub.ambient().clone(), images)
}

/// Embedding of ℂ·1.
pub fn scalars(alg: &MultiMatrixAlgebra) -> SubalgebraEmbedding {
    let mut images = Matrix::zeros(alg.dim(), 1);
    images.set_column(0, &alg.unit());
    SubalgebraEmbedding::trusted(MultiMatrixAlgebra::full(1), alg.clone(), images)
}

/// Diagonal ℂ^m inside the block algebra, one unit per diagonal position.
pub fn diagonal_subalgebra(alg: &MultiMatrixAlgebra) -> SubalgebraEmbedding {
    let total: usize = alg.blocks().iter().sum();
    let mut images = Matrix::zeros(alg.dim(), total);
    let mut c = 0;
    for (a, &m) in alg.blocks().iter().enumerate() {
        for k in 0..m {
            images[(alg.index(a, k, k), c)] = ONE;
            c += 1;
        }
    }
    SubalgebraEmbedding::trusted(MultiMatrixAlgebra::diagonal(total), alg.clone(), images)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn commutant_of_full_algebra_is_scalars() {
        let a = MultiMatrixAlgebra::full(3);
        let c = relative_commutant(&SubalgebraEmbedding::identity(&a)).unwrap();
        assert_eq!(c.sub().blocks(), &[1]);
        assert!((c.image(0) - a.unit()).norm() < 1e-12);
    }

    #[test]
    fn commutant_of_scalars_is_everything() {
        let a = MultiMatrixAlgebra::full(3);
        let c = relative_commutant(&scalars(&a)).unwrap();
        assert_eq!(c.sub().blocks(), &[3]);
    }

    #[test]
    fn commutant_of_diagonal_is_diagonal() {
        let a = MultiMatrixAlgebra::full(2);
        let d = diagonal_subalgebra(&a);
        let c = relative_commutant(&d).unwrap();
        assert_eq!(c.sub().blocks(), &[1, 1]);
        for i in 0..2 {
            assert!(d.membership_residual(&c.image(i)) < 1e-12);
        }
    }

    #[test]
    fn center_of_two_blocks() {
        let a = MultiMatrixAlgebra::new(vec![2, 3]).unwrap();
        let z = center(&a);
        assert_eq!(z.sub().dim(), 2);
        assert!((z.image(0) + z.image(1) - a.unit()).norm() < 1e-14);
    }

    #[test]
    fn bad_units_are_rejected() {
        let a = MultiMatrixAlgebra::full(2);
        let mut images = Matrix::zeros(4, 1);
        images[(0, 0)] = ONE;
        let r = SubalgebraEmbedding::new(MultiMatrixAlgebra::full(1), a, images, 1e-9);
        assert!(matches!(r, Err(AlgebraError::NotSubalgebra(_))));
    }

    #[test]
    fn restriction_recovers_coordinates() {
        let a = MultiMatrixAlgebra::full(2);
        let d = diagonal_subalgebra(&a);
        let s = scalars(&a);
        let r = s.restrict(&d, 1e-9).unwrap();
        assert!((r.image(0) - d.sub().unit()).norm() < 1e-14);
    }
}
