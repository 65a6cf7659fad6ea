//! The action b ▷ x = λ⁻¹E_{M₁}(bxe₂) of B on M₁ and its fixed points.

use fd_star_algebra::linalg::{distance, re};
use fd_star_algebra::{decompose_subalgebra, AlgebraError, Config, Element, Matrix, Report, SubalgebraEmbedding};
use tower_reconstruction::{DeformedStructure, TowerData};

use crate::action::{coproduct_terms, verify_action, ActionData};
use crate::error::{first_failure, ActionError, Result};
use crate::sample::solve_homogeneous;

#[derive(Clone, Debug)]
pub struct CanonicalAction {
    pub action: ActionData,
    pub report: Report,
}

/// Build the action tensor on the bases of B and M₁ and verify it, together
/// with bx = (b₁ ▷ x)b₂ (deformed coproduct), e₂ ▷ x = E_M(x) and
/// z ▷ x = zx for z in B_t.  Any failing row is an error.
pub fn canonical_action(t: &TowerData, def: &DeformedStructure, cfg: &Config) -> Result<CanonicalAction> {
    let tol = cfg.tol;
    let m1 = t.sub_m1.sub().clone();
    let bs = t.basis_b();
    let xs = t.basis_m1();
    let inv = re(1.0 / t.lambda);
    let ops: Vec<Matrix> = bs
        .iter()
        .map(|b| Matrix::from_columns(&xs.iter().map(|x| t.e_m1_coords(&t.mul3(b, x, &t.e2)) * inv).collect::<Vec<_>>()))
        .collect();
    let action = ActionData::new(def.data.clone(), m1.clone(), ops)?;
    let mut r = Report::new("canonical action");
    r.absorb(verify_action(&action, cfg), "");

    let w = &action.hopf;
    let mut commute = 0.0_f64;
    for (i, b) in bs.iter().enumerate() {
        let terms = coproduct_terms(w, &w.algebra.basis(i));
        for (p, x) in xs.iter().enumerate() {
            let lhs = t.mul(b, x);
            let mut rhs = t.ambient.zero();
            for &(j1, j2, c) in &terms {
                let moved = t.sub_m1.map(&action.ops[j1].column(p).into_owned());
                rhs += t.mul(&moved, &bs[j2]) * c;
            }
            commute = commute.max(distance(lhs.as_slice(), rhs.as_slice()));
        }
    }
    r.check("b x = (b1 |> x) b2", "commutation through the action", commute, tol);

    let e2 = t.b.coords(&t.e2);
    let op = action.operator(&e2);
    let mut jones = 0.0_f64;
    for (p, x) in xs.iter().enumerate() {
        let lhs = t.sub_m1.map(&op.column(p).into_owned());
        jones = jones.max(distance(lhs.as_slice(), t.e_m(x).as_slice()));
    }
    r.check("e2 |> x = E_M(x)", "canonical action", jones, tol);

    let mut module = 0.0_f64;
    for z in t.b_t.images().column_iter() {
        let z = z.into_owned();
        let op = action.operator(&t.b.coords(&z));
        for (p, x) in xs.iter().enumerate() {
            let lhs = t.sub_m1.map(&op.column(p).into_owned());
            module = module.max(distance(lhs.as_slice(), t.mul(&z, x).as_slice()));
        }
    }
    r.check("z |> x = z x for z in B_t", "canonical action", module, tol);

    if let Some(e) = first_failure(&r) {
        return Err(e);
    }
    Ok(CanonicalAction { action, report: r })
}

/// M^B = {x : b ▷ x = εᵗ(b) ▷ x for all b}, solved as a null space and
/// decomposed as a subalgebra of the carrier.
pub fn fixed_points(a: &ActionData, cfg: &Config) -> Result<SubalgebraEmbedding> {
    let w = &a.hopf;
    let (db, dm) = (w.dim(), a.carrier.dim());
    let et = w.target_map();
    let mut system = Matrix::zeros(db * dm, dm);
    for i in 0..db {
        let block = &a.ops[i] - a.operator(&et.column(i).into_owned());
        system.view_mut((i * dm, 0), (dm, dm)).copy_from(&block);
    }
    let fixed = solve_homogeneous(&system, dm, cfg.tol);
    decompose_subalgebra(&a.carrier, &fixed, cfg).map_err(|e| match e {
        AlgebraError::NotSubalgebra(s) | AlgebraError::Decomposition(s) => ActionError::FixedPointsNotSubalgebra(s),
        other => ActionError::Algebra(other),
    })
}

/// Compare the fixed points of the canonical action with the image of M
/// in M₁: equal dimension and every element of M fixed.
pub fn fixed_point_report(t: &TowerData, fixed: &SubalgebraEmbedding, tol: f64) -> Result<Report> {
    let m_in_m1 = t.sub_m.restrict(&t.sub_m1, 1e-8)?;
    let mut r = Report::new("fixed points");
    r.fact("dim fixed points", fixed.sub().dim());
    r.fact("dim M", m_in_m1.sub().dim());
    r.require("dim fixed points = dim M", "fixed points", fixed.sub().dim() == m_in_m1.sub().dim());
    let inside = m_in_m1
        .images()
        .column_iter()
        .map(|c| fixed.membership_residual(&Element::from(c)))
        .fold(0.0, f64::max);
    r.check("M is fixed", "fixed points", inside, tol);
    Ok(r)
}
