//! Left actions b ⊗ x ↦ b ▷ x of a weak Hopf structure B on a multimatrix
//! algebra M, stored as one linear operator on M per basis element of B.

use fd_star_algebra::linalg::{distance, intersection_dim, null_space, ZERO};
use fd_star_algebra::{Config, Element, Matrix, MultiMatrixAlgebra, Report};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use weak_hopf_core::WeakHopfData;

use crate::error::{ActionError, Result};
use crate::sample::random_element;

/// Largest dim B · (dim M)² for which the multiplicativity axiom is checked
/// on every triple of basis elements; above it random pairs are used.
pub const EXHAUSTIVE_BUDGET: usize = 70_000;
pub const SAMPLED_PAIRS: usize = 12;

#[derive(Clone, Debug)]
pub struct ActionData {
    pub hopf: WeakHopfData,
    pub carrier: MultiMatrixAlgebra,
    /// `ops[i]` is the matrix of x ↦ b_i ▷ x.
    pub ops: Vec<Matrix>,
}

impl ActionData {
    pub fn new(hopf: WeakHopfData, carrier: MultiMatrixAlgebra, ops: Vec<Matrix>) -> Result<Self> {
        let m = carrier.dim();
        if ops.len() != hopf.dim() {
            return Err(ActionError::Shape(format!("{} operators for dim B = {}", ops.len(), hopf.dim())));
        }
        if let Some(bad) = ops.iter().position(|o| o.shape() != (m, m)) {
            return Err(ActionError::Shape(format!("operator {bad} is {:?}, carrier has dim {m}", ops[bad].shape())));
        }
        Ok(ActionData { hopf, carrier, ops })
    }

    /// Matrix of x ↦ b ▷ x.
    pub fn operator(&self, b: &Element) -> Matrix {
        let m = self.carrier.dim();
        let mut out = Matrix::zeros(m, m);
        for (i, op) in self.ops.iter().enumerate() {
            if b[i] != ZERO {
                out += op * b[i];
            }
        }
        out
    }

    pub fn act(&self, b: &Element, x: &Element) -> Element {
        self.operator(b) * x
    }

    /// b ▷ 1 for every basis element, as columns.
    pub fn unit_images(&self) -> Matrix {
        let u = self.carrier.unit();
        Matrix::from_columns(&self.ops.iter().map(|o| o * &u).collect::<Vec<_>>())
    }
}

/// The counit action b ▷ x = ε(b)x.  It is an action exactly when ε is
/// multiplicative, e.g. for Hopf algebras (B_t = ℂ).
pub fn counit_action(hopf: &WeakHopfData, carrier: &MultiMatrixAlgebra) -> Result<ActionData> {
    let m = carrier.dim();
    let ops = (0..hopf.dim()).map(|i| Matrix::identity(m, m) * hopf.epsilon[i]).collect();
    ActionData::new(hopf.clone(), carrier.clone(), ops)
}

fn mdist(a: &Matrix, b: &Matrix) -> f64 {
    distance(a.as_slice(), b.as_slice())
}

/// Residuals of the module law and the three action axioms:
/// b ▷ xy = (b₁ ▷ x)(b₂ ▷ y),  (b ▷ x)* = S(b)* ▷ x*,
/// b ▷ 1 = εᵗ(b) ▷ 1 with b ▷ 1 = 0 iff εᵗ(b) = 0.
pub fn verify_action(a: &ActionData, cfg: &Config) -> Report {
    let tol = cfg.tol;
    let w = &a.hopf;
    let alg = &a.carrier;
    let (db, dm) = (w.dim(), alg.dim());
    let mut r = Report::new("action");
    r.fact("dim B", db);
    r.fact("dim M", dm);

    r.check("1 |> x = x", "module law", mdist(&a.operator(&w.unit()), &Matrix::identity(dm, dm)), tol);
    let mut module = 0.0_f64;
    for i in 0..db {
        for j in 0..db {
            let lhs = match w.algebra.basis_product(i, j) {
                Some(k) => a.ops[k].clone(),
                None => Matrix::zeros(dm, dm),
            };
            module = module.max(mdist(&lhs, &(&a.ops[i] * &a.ops[j])));
        }
    }
    r.check("(bc) |> x = b |> (c |> x)", "module law", module, tol);

    // b ▷ xy on basis triples, or on random pairs for large carriers
    let pairs: Vec<(Element, Element)> = if db * dm * dm <= EXHAUSTIVE_BUDGET {
        (0..dm).flat_map(|p| (0..dm).map(move |q| (p, q))).map(|(p, q)| (alg.basis(p), alg.basis(q))).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xAC71);
        (0..SAMPLED_PAIRS).map(|_| (random_element(&mut rng, dm), random_element(&mut rng, dm))).collect()
    };
    r.fact("multiplicativity pairs", pairs.len());
    let coproducts: Vec<_> = (0..db).map(|i| coproduct_terms(w, &w.algebra.basis(i))).collect();
    let mut mult = 0.0_f64;
    for (x, y) in &pairs {
        let ax: Vec<Element> = a.ops.iter().map(|o| o * x).collect();
        let ay: Vec<Element> = a.ops.iter().map(|o| o * y).collect();
        let xy = alg.mul(x, y);
        for (i, terms) in coproducts.iter().enumerate() {
            let lhs = &a.ops[i] * &xy;
            let mut rhs = alg.zero();
            for &(j1, j2, c) in terms {
                rhs += alg.mul(&ax[j1], &ay[j2]) * c;
            }
            mult = mult.max(distance(lhs.as_slice(), rhs.as_slice()));
        }
    }
    r.check("b |> xy = (b1 |> x)(b2 |> y)", "action axioms", mult, tol);

    let mut star = 0.0_f64;
    for i in 0..db {
        let sb = w.star(&w.antipode_of(&w.algebra.basis(i)));
        let op = a.operator(&sb);
        for p in 0..dm {
            let x = alg.basis(p);
            let lhs = alg.adjoint(&(&a.ops[i] * &x));
            let rhs = &op * alg.adjoint(&x);
            star = star.max(distance(lhs.as_slice(), rhs.as_slice()));
        }
    }
    r.check("(b |> x)* = S(b)* |> x*", "action axioms", star, tol);

    let k1 = a.unit_images();
    let et = w.target_map();
    r.check("b |> 1 = target(b) |> 1", "action axioms", mdist(&k1, &(&k1 * &et)), tol);
    let n1 = null_space(&k1, tol);
    let n2 = null_space(&et, tol);
    let common = intersection_dim(&n1, &n2, tol);
    r.fact("dim ker(b -> b |> 1)", n1.ncols());
    r.fact("dim ker target", n2.ncols());
    r.require(
        "b |> 1 = 0 iff target(b) = 0",
        "action axioms",
        n1.ncols() == n2.ncols() && common == n1.ncols(),
    );
    r
}

/// Nonzero terms (j1, j2, c) of Δ(b) = Σ c b_j1 ⊗ b_j2, using only the
/// columns of the structure tensor where b is nonzero.
pub(crate) fn coproduct_terms(w: &WeakHopfData, b: &Element) -> Vec<(usize, usize, fd_star_algebra::C64)> {
    let d = w.dim();
    let mut flat = fd_star_algebra::Vector::zeros(d * d);
    for (t, &bt) in b.iter().enumerate() {
        if bt != ZERO {
            flat.axpy(bt, &w.delta.column(t), fd_star_algebra::linalg::re(1.0));
        }
    }
    flat.iter()
        .enumerate()
        .filter(|(_, c)| c.norm() > 1e-15)
        .map(|(r, &c)| (r / d, r % d, c))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use weak_hopf_core::pair_groupoid;

    #[test]
    fn trivial_algebra_acts_trivially() {
        let c = pair_groupoid(1).unwrap();
        let a = counit_action(&c, &MultiMatrixAlgebra::new(vec![2, 1]).unwrap()).unwrap();
        let r = verify_action(&a, &Config::default());
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn operator_count_is_checked() {
        let c = pair_groupoid(2).unwrap();
        let m = MultiMatrixAlgebra::full(2);
        assert!(ActionData::new(c, m, vec![]).is_err());
    }
}
