//! θ([x ⊗ b]) = x S̃(H)^{1/2} b S̃(H)^{-1/2} from M₁ ⋊ B to the M₂-level
//! algebra of the tower.

use fd_star_algebra::linalg::{distance, hermitian_function, max_abs, rank};
use fd_star_algebra::{Config, Element, Matrix, MultiMatrixAlgebra, Report};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tower_reconstruction::{DeformedStructure, TowerData};

use crate::crossed::{sparse_mul, CrossedProduct};
use crate::error::{ActionError, Result};

#[derive(Clone, Debug)]
pub struct ThetaMap {
    /// Column k is θ of the k-th basis class, in ambient coordinates.
    pub matrix: Matrix,
    pub rank: usize,
    pub report: Report,
}

/// Apply a real function blockwise to a self-adjoint element.
fn functional_calculus(alg: &MultiMatrixAlgebra, x: &Element, f: impl Fn(f64) -> f64 + Copy) -> Result<Element> {
    let blocks: Vec<Matrix> = (0..alg.num_blocks()).map(|a| hermitian_function(&alg.block(x, a), f)).collect();
    Ok(alg.from_blocks(&blocks)?)
}

/// Build θ on the basis classes and check it is well defined, unital,
/// multiplicative, involutive and bijective.  Rank deficiency and
/// multiplicativity failures are errors; other rows are reported.
pub fn theta_iso(t: &TowerData, def: &DeformedStructure, cp: &CrossedProduct, cfg: &Config) -> Result<ThetaMap> {
    let tol = cfg.tol;
    let b_alg = t.b.sub();
    let sh = &def.s_h;
    let herm = distance(sh.as_slice(), b_alg.adjoint(sh).as_slice());
    let spectrum_min = (0..b_alg.num_blocks())
        .flat_map(|a| fd_star_algebra::linalg::hermitian_eigen(&b_alg.block(sh, a)).0)
        .fold(f64::INFINITY, f64::min);
    if herm > tol || spectrum_min <= 0.0 {
        return Err(ActionError::Tower(tower_reconstruction::TowerError::BadCanonicalElement(format!(
            "S~(H) must be positive invertible (self-adjointness defect {herm:.3e}, least eigenvalue {spectrum_min:.3e})"
        ))));
    }
    let half = t.b.map(&functional_calculus(b_alg, sh, f64::sqrt)?);
    let neg_half = t.b.map(&functional_calculus(b_alg, sh, |v| 1.0 / v.sqrt())?);
    let theta_pure = |x: &Element, b: &Element| -> Element {
        let xb = t.mul(&t.sub_m1.map(x), &half);
        t.mul3(&xb, &t.b.map(b), &neg_half)
    };

    let dim = cp.dim();
    let target = t.ambient.dim();
    let cols: Vec<Element> = (0..dim)
        .map(|k| {
            let (x, b) = cp.representative(k);
            theta_pure(x, b)
        })
        .collect();
    let matrix = Matrix::from_columns(&cols);
    let apply = |u: &fd_star_algebra::Vector| -> Element { sparse_mul(&matrix, u) };

    let mut r = Report::new("theta");
    r.fact("dim crossed product", dim);
    r.fact("dim M2-level algebra", target);
    let rk = rank(&matrix, tol);
    r.fact("rank", rk);
    r.require("dim crossed product = dim M2-level algebra", "theta", dim == target);
    r.require("theta bijective", "theta", rk == dim && dim == target);
    if rk != dim || dim != target {
        return Err(ActionError::NotBijective { rank: rk, dim, target });
    }

    let one = apply(&cp.unit());
    r.check("theta([1 (x) 1]) = 1", "theta", distance(one.as_slice(), t.unit().as_slice()), tol);

    // balanced classes: θ([x(z ▷ 1) ⊗ b]) = θ([x ⊗ zb]) for z in B_t
    let act = &cp.action;
    let w = &act.hopf;
    let m1 = &act.carrier;
    let et = w.target_map();
    let mut balance = 0.0_f64;
    for z in et.column_iter() {
        let z = z.into_owned();
        if max_abs(z.as_slice()) <= 1e-12 {
            continue;
        }
        let zone = act.act(&z, &m1.unit());
        for p in 0..m1.dim() {
            let x = m1.basis(p);
            let xz = m1.mul(&x, &zone);
            for q in 0..w.dim() {
                let b = w.algebra.basis(q);
                let lhs = theta_pure(&xz, &b);
                let rhs = theta_pure(&x, &w.mul(&z, &b));
                balance = balance.max(distance(lhs.as_slice(), rhs.as_slice()));
            }
        }
    }
    r.check("theta([x(z |> 1) (x) b]) = theta([x (x) zb])", "theta", balance, tol);

    // θ computed from class coordinates agrees with the defining formula
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x7E7A);
    let mut consistent = 0.0_f64;
    for _ in 0..8 {
        let x = m1.basis(rng.random_range(0..m1.dim()));
        let b = w.algebra.basis(rng.random_range(0..w.dim()));
        let lhs = apply(&cp.class_of(&x, &b));
        consistent = consistent.max(distance(lhs.as_slice(), theta_pure(&x, &b).as_slice()));
    }
    r.check("theta on class coordinates = x S(H)^1/2 b S(H)^-1/2", "theta", consistent, tol);

    let mut mult = 0.0_f64;
    for k in 0..dim {
        for l in 0..dim {
            let lhs = apply(&cp.mul_basis(k, l));
            let rhs = t.mul(&cols[k], &cols[l]);
            mult = mult.max(distance(lhs.as_slice(), rhs.as_slice()));
        }
    }
    r.fact("multiplicativity pairs", dim * dim);
    r.check("theta multiplicative", "theta", mult, tol);
    if mult > tol {
        return Err(ActionError::NotMultiplicative(mult));
    }

    let mut star = 0.0_f64;
    for (k, col) in cols.iter().enumerate() {
        let lhs = apply(&cp.star(&cp.basis(k)));
        star = star.max(distance(lhs.as_slice(), t.adjoint(col).as_slice()));
    }
    r.check("theta preserves the involution", "theta", star, tol);

    Ok(ThetaMap { matrix, rank: rk, report: r })
}
