//! Finite towers N ⊂ M ⊂ M₁ ⊂ M₂ realized inside one multimatrix algebra.

use fd_star_algebra::embedding::scalars;
use fd_star_algebra::linalg::{self, distance, max_abs, re, Matrix};
use fd_star_algebra::{
    basic_construction, relative_commutant, Config, Element, Expectation, MultiMatrixAlgebra, Report, SubalgebraEmbedding,
    TraceState, C64,
};
use weak_hopf_core::FiniteGroup;

use crate::error::{Result, TowerError};

/// A tower with its Jones projections and the relative commutants
///
/// A = N′∩M₁, B = M′∩M₂, A_t = N′∩M, B_t = M′∩M₁, B_s = M₁′∩M₂,
/// all embedded in the M₂-level algebra `ambient`.
#[derive(Clone, Debug)]
pub struct TowerData {
    pub ambient: MultiMatrixAlgebra,
    pub sub_n: SubalgebraEmbedding,
    pub sub_m: SubalgebraEmbedding,
    pub sub_m1: SubalgebraEmbedding,
    pub e1: Element,
    pub e2: Element,
    pub tau: TraceState,
    pub lambda: f64,
    pub a: SubalgebraEmbedding,
    pub b: SubalgebraEmbedding,
    pub a_t: SubalgebraEmbedding,
    pub b_t: SubalgebraEmbedding,
    pub b_s: SubalgebraEmbedding,
    /// N′∩M₂
    pub nm2: SubalgebraEmbedding,
    pub d: usize,
    exp_n: Expectation,
    exp_m: Expectation,
    exp_m1: Expectation,
    exp_b: Expectation,
}

impl TowerData {
    /// Assemble a tower from the chain of embeddings into the ambient
    /// algebra; the relative commutants are computed here.  The premises
    /// themselves are not checked (see [`verify_tower_premises`]).
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        ambient: MultiMatrixAlgebra,
        sub_n: SubalgebraEmbedding,
        sub_m: SubalgebraEmbedding,
        sub_m1: SubalgebraEmbedding,
        e1: Element,
        e2: Element,
        tau: TraceState,
        lambda: f64,
    ) -> Result<Self> {
        for (name, s) in [("N", &sub_n), ("M", &sub_m), ("M1", &sub_m1)] {
            if s.ambient() != &ambient {
                return Err(TowerError::InvalidTower(format!("{name} is not embedded in the ambient algebra")));
            }
        }
        if e1.len() != ambient.dim() || e2.len() != ambient.dim() {
            return Err(TowerError::InvalidTower("Jones projections have the wrong length".into()));
        }
        if !(lambda > 0.0 && lambda <= 1.0) {
            return Err(TowerError::InvalidTower(format!("lambda = {lambda} is not in (0, 1]")));
        }
        tau.check(&ambient)?;
        let tol = 1e-8;
        let n_in_m = sub_n.restrict(&sub_m, tol)?;
        let n_in_m1 = sub_n.restrict(&sub_m1, tol)?;
        let m_in_m1 = sub_m.restrict(&sub_m1, tol)?;
        let a = relative_commutant(&n_in_m1)?.compose(&sub_m1)?;
        let b_t = relative_commutant(&m_in_m1)?.compose(&sub_m1)?;
        let a_t = relative_commutant(&n_in_m)?.compose(&sub_m)?;
        let b = relative_commutant(&sub_m)?;
        let b_s = relative_commutant(&sub_m1)?;
        let nm2 = relative_commutant(&sub_n)?;
        let d = b_t.sub().dim();
        let exp_n = Expectation::new(&sub_n, &tau)?;
        let exp_m = Expectation::new(&sub_m, &tau)?;
        let exp_m1 = Expectation::new(&sub_m1, &tau)?;
        let exp_b = Expectation::new(&b, &tau)?;
        Ok(TowerData {
            ambient,
            sub_n,
            sub_m,
            sub_m1,
            e1,
            e2,
            tau,
            lambda,
            a,
            b,
            a_t,
            b_t,
            b_s,
            nm2,
            d,
            exp_n,
            exp_m,
            exp_m1,
            exp_b,
        })
    }

    /// Same chain with a different e₂ (used for negative controls).
    pub fn with_e2(&self, e2: Element) -> Self {
        TowerData { e2, ..self.clone() }
    }

    pub fn mul(&self, x: &Element, y: &Element) -> Element {
        self.ambient.mul(x, y)
    }

    pub fn mul3(&self, x: &Element, y: &Element, z: &Element) -> Element {
        self.ambient.mul3(x, y, z)
    }

    pub fn trace(&self, x: &Element) -> C64 {
        self.tau.eval(&self.ambient, x)
    }

    pub fn trace_product(&self, x: &Element, y: &Element) -> C64 {
        self.tau.eval_product(&self.ambient, x, y)
    }

    pub fn adjoint(&self, x: &Element) -> Element {
        self.ambient.adjoint(x)
    }

    pub fn unit(&self) -> Element {
        self.ambient.unit()
    }

    pub fn e_n(&self, x: &Element) -> Element {
        self.exp_n.apply(x)
    }

    pub fn e_m(&self, x: &Element) -> Element {
        self.exp_m.apply(x)
    }

    pub fn e_m1(&self, x: &Element) -> Element {
        self.exp_m1.apply(x)
    }

    /// E_{M₁} in M₁ coordinates.
    pub fn e_m1_coords(&self, x: &Element) -> Element {
        self.exp_m1.coords(x)
    }

    /// Expectation onto M′∩M₂ = B.
    pub fn e_mprime(&self, x: &Element) -> Element {
        self.exp_b.apply(x)
    }

    pub fn index(&self) -> f64 {
        1.0 / self.lambda
    }

    fn images(s: &SubalgebraEmbedding) -> Vec<Element> {
        (0..s.sub().dim()).map(|i| s.image(i)).collect()
    }

    pub fn basis_m(&self) -> Vec<Element> {
        Self::images(&self.sub_m)
    }

    pub fn basis_m1(&self) -> Vec<Element> {
        Self::images(&self.sub_m1)
    }

    pub fn basis_a(&self) -> Vec<Element> {
        Self::images(&self.a)
    }

    pub fn basis_b(&self) -> Vec<Element> {
        Self::images(&self.b)
    }

    pub fn basis_nm2(&self) -> Vec<Element> {
        Self::images(&self.nm2)
    }
}

/// The tower ℂ ⊂ M ⊂ M₁ ⊂ M₂ over a multimatrix algebra M with its Markov
/// trace τ_α = m_α / Σ m_β², λ = 1/Σ m_β².
pub fn build_tower(m: &MultiMatrixAlgebra, cfg: &Config) -> Result<TowerData> {
    if m.dim() < 2 {
        return Err(TowerError::Precondition("a tower needs dim M >= 2".into()));
    }
    let total: usize = m.blocks().iter().map(|&k| k * k).sum();
    let lambda = 1.0 / total as f64;
    let weights = m.blocks().iter().map(|&k| k as f64 / total as f64).collect();
    let trace = TraceState::new(weights)?;
    let first = basic_construction(&scalars(m), &trace, lambda, cfg)?;
    let second = basic_construction(&first.embedding, &first.trace, lambda, cfg)?;
    let ambient = second.algebra.clone();
    let sub_m1 = second.embedding.clone();
    let sub_m = first.embedding.compose(&sub_m1)?;
    let sub_n = scalars(&ambient);
    let e1 = sub_m1.map(&first.e);
    TowerData::new(ambient, sub_n, sub_m, sub_m1, e1, second.e, second.trace, lambda)
}

/// The tower with M = ℂ^G.
pub fn build_tower_from_group(g: &FiniteGroup, cfg: &Config) -> Result<TowerData> {
    if g.order() < 2 {
        return Err(TowerError::Precondition("the group must have at least two elements".into()));
    }
    build_tower(&MultiMatrixAlgebra::diagonal(g.order()), cfg)
}

fn dist(a: &Element, b: &Element) -> f64 {
    distance(a.as_slice(), b.as_slice())
}

/// rank of the products {x e y}, x, y in `left`/`right`.
fn product_rank(t: &TowerData, left: &[Element], mid: Option<&Element>, right: &[Element]) -> usize {
    let mut cols = Matrix::zeros(t.ambient.dim(), left.len() * right.len());
    let mut c = 0;
    for x in left {
        let xm = match mid {
            Some(e) => t.mul(x, e),
            None => x.clone(),
        };
        for y in right {
            cols.set_column(c, &t.mul(&xm, y));
            c += 1;
        }
    }
    linalg::rank(&cols, 1e-9)
}

/// Residuals of the tower premises: Jones and Markov identities, the
/// commuting square, non-degeneracy and the spanning conditions.
pub fn verify_tower_premises(t: &TowerData, tol: f64) -> Report {
    let mut r = Report::new("tower premises");
    let amb = &t.ambient;
    r.fact("dim N", t.sub_n.sub().dim());
    r.fact("dim M", t.sub_m.sub().dim());
    r.fact("dim M1", t.sub_m1.sub().dim());
    r.fact("dim M2", amb.dim());
    r.fact("dim A", t.a.sub().dim());
    r.fact("dim B", t.b.sub().dim());
    r.fact("dim B_t", t.b_t.sub().dim());
    r.fact("dim B_s", t.b_s.sub().dim());
    r.fact("d", t.d);
    r.fact("lambda", format!("{:.12}", t.lambda));
    r.fact("index", format!("{:.12}", t.index()));

    let tr1 = (t.trace(&t.unit()) - re(1.0)).norm();
    r.check("tau(1) = 1", "trace", tr1, tol);

    for (name, e) in [("e1", &t.e1), ("e2", &t.e2)] {
        let idem = dist(&t.mul(e, e), e);
        let sa = dist(&t.adjoint(e), e);
        r.check(&format!("{name} is a projection"), "Jones projections", idem.max(sa), tol);
    }

    let bm = t.basis_m();
    let bm1 = t.basis_m1();
    let bn: Vec<Element> = (0..t.sub_n.sub().dim()).map(|i| t.sub_n.image(i)).collect();

    // e1 ∈ N′∩M₁, e2 ∈ M′∩M₂
    let mut c1 = t.sub_m1.membership_residual(&t.e1);
    for x in &bn {
        c1 = c1.max(max_abs(t.ambient.commutator(x, &t.e1).as_slice()));
    }
    r.check("e1 in N' cap M1", "Jones projections", c1, tol);
    let mut c2 = 0.0_f64;
    for x in &bm {
        c2 = c2.max(max_abs(t.ambient.commutator(x, &t.e2).as_slice()));
    }
    r.check("e2 in M' cap M2", "Jones projections", c2, tol);

    let markov = |e: &Element, xs: &[Element], exp: &dyn Fn(&Element) -> Element| -> (f64, f64) {
        let (mut tw, mut jw) = (0.0_f64, 0.0_f64);
        for x in xs {
            let lhs = t.trace_product(x, e);
            let rhs = t.trace(x) * re(t.lambda);
            tw = tw.max((lhs - rhs).norm());
            let exe = t.mul3(e, x, e);
            let ce = t.mul(&exp(x), e);
            jw = jw.max(dist(&exe, &ce));
        }
        (tw, jw)
    };
    let (tw, jw) = markov(&t.e2, &bm1, &|x| t.e_m(x));
    r.check("tau(x e2) = lambda tau(x) on M1", "Markov property", tw, tol);
    r.check("e2 x e2 = E_M(x) e2 on M1", "Markov property", jw, tol);
    let (tw, jw) = markov(&t.e1, &bm, &|x| t.e_n(x));
    r.check("tau(x e1) = lambda tau(x) on M", "Markov property", tw, tol);
    r.check("e1 x e1 = E_N(x) e1 on M", "Markov property", jw, tol);

    let nm2 = t.basis_nm2();
    let mut sq = 0.0_f64;
    let mut l31a = 0.0_f64;
    let mut l31b = 0.0_f64;
    let inv = re(1.0 / t.lambda);
    for x in &nm2 {
        sq = sq.max(dist(&t.e_m1(&t.e_mprime(x)), &t.e_mprime(&t.e_m1(x))));
        let xe2 = t.mul(x, &t.e2);
        let rhs = t.mul(&t.e_m1(&xe2), &t.e2) * inv;
        l31a = l31a.max(dist(&xe2, &rhs));
        let xe1 = t.mul(x, &t.e1);
        let rhs = t.mul(&t.e_mprime(&xe1), &t.e1) * inv;
        l31b = l31b.max(dist(&xe1, &rhs));
    }
    r.check("E_M1 E_M' = E_M' E_M1 on N' cap M2", "commuting square", sq, tol);

    let ba = t.basis_a();
    let bb = t.basis_b();
    let ab = product_rank(t, &ba, None, &bb);
    r.fact("rank span(A B)", ab);
    r.check("span(A B) = N' cap M2", "commuting square", (nm2.len() - ab.min(nm2.len())) as f64, tol);
    r.check("x e2 = E_M1(x e2) e2 / lambda on N' cap M2", "Jones projections", l31a, tol);
    r.check("x e1 = E_M'(x e1) e1 / lambda on N' cap M2", "Jones projections", l31b, tol);

    let r1 = product_rank(t, &bm, Some(&t.e1), &bm);
    let r2 = product_rank(t, &bm1, Some(&t.e2), &bm1);
    r.fact("rank span(M e1 M)", r1);
    r.fact("rank span(M1 e2 M1)", r2);
    // e1 ∈ M₁ was checked above, so the products lie in M₁ and rank decides equality
    r.check("span(M e1 M) = M1", "spanning", (bm1.len() as f64 - r1 as f64).abs(), tol);
    r.check("span(M1 e2 M1) = M2", "spanning", ((amb.dim() as f64) - r2 as f64).abs(), tol);
    r
}
