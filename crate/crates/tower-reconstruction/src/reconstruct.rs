//! The coalgebra and antipode of B = M′∩M₂ (and symmetrically of A = N′∩M₁)
//! read off from the pairing ⟨a, b⟩ = dλ⁻²τ(a e₂ e₁ b).
//!
//! With P the Gram matrix over the matrix units a_i, b_j:
//! Δ_B(b_m) = P⁻¹ C_m P⁻ᵀ where C_m[i, j] = ⟨a_i a_j, b_m⟩,
//! ε_B = Pᵀ 1_A, and S_B = P⁻¹ Y with Y[i, m] = conj⟨a_i*, b_m*⟩.

use fd_star_algebra::linalg::{distance, hermitian_eigen, max_abs, re, ZERO};
use fd_star_algebra::{watatani_index, Config, Element, Matrix, MultiMatrixAlgebra, Report, TraceState};
use weak_hopf_core::{verify_axioms, Involution, WeakHopfData};

use crate::deform::TwistedStructure;
use crate::error::{Result, TowerError};
use crate::pairing::{pairing, PairingForm};
use crate::tower::TowerData;

#[derive(Clone, Debug)]
pub struct ReconstructedStructure {
    /// (B, Δ_B, ε_B, S_B) in the matrix units of B, with the ambient adjoint.
    pub on_b: WeakHopfData,
    /// (A, Δ_A, ε_A, S_A) in the matrix units of A.
    pub on_a: WeakHopfData,
    /// H = S_B(1₍₁₎)1₍₂₎ in B coordinates.
    pub h: Element,
    pub h_inv: Element,
    pub pairing: PairingForm,
    /// Columns: the basis of B dual to the matrix units of A.
    pub gram_inverse: Matrix,
    pub report: Report,
}

impl ReconstructedStructure {
    pub fn twisted(&self) -> TwistedStructure {
        TwistedStructure { data: self.on_b.clone(), h: self.h.clone() }
    }

    /// ‖H − 1‖ relative.
    pub fn h_defect(&self) -> f64 {
        distance(self.h.as_slice(), self.on_b.unit().as_slice())
    }
}

/// (1/d) · Index of a faithful trace on `alg`: Σ_α m_α/(d τ_α) 1_α.
pub fn canonical_element(alg: &MultiMatrixAlgebra, trace: &TraceState, d: usize) -> Result<Element> {
    Ok(watatani_index(alg, trace)? * re(1.0 / d as f64))
}

fn flatten_into(delta: &mut Matrix, col: usize, x: &Matrix) {
    let n = x.nrows();
    for p in 0..n {
        for q in 0..n {
            delta[(p * n + q, col)] = x[(p, q)];
        }
    }
}

/// Left multiplication inverse applied to the unit.
pub(crate) fn inverse_element(alg: &MultiMatrixAlgebra, x: &Element) -> Option<Element> {
    alg.left_mul_matrix(x).try_inverse().map(|l| l * alg.unit())
}

fn fail_or(report: &mut Report, name: &str, tag: &str, residual: f64, tol: f64) -> Result<()> {
    if report.check(name, tag, residual, tol) {
        Ok(())
    } else {
        Err(TowerError::CrossCheck { formula: name.into(), residual })
    }
}

pub fn reconstruct(t: &TowerData, cfg: &Config) -> Result<ReconstructedStructure> {
    let tol = cfg.tol;
    let pf = pairing(t)?;
    let p = &pf.gram;
    let pinv = pf.inverse()?;
    let pinv_t = pinv.transpose();
    let aalg = t.a.sub().clone();
    let balg = t.b.sub().clone();
    let n = balg.dim();

    let mut delta_b = Matrix::zeros(n * n, n);
    let mut delta_a = Matrix::zeros(n * n, n);
    for m in 0..n {
        let c = Matrix::from_fn(n, n, |i, j| aalg.basis_product(i, j).map(|k| p[(k, m)]).unwrap_or(ZERO));
        flatten_into(&mut delta_b, m, &(&pinv * c * &pinv_t));
        let c = Matrix::from_fn(n, n, |i, j| balg.basis_product(i, j).map(|k| p[(m, k)]).unwrap_or(ZERO));
        flatten_into(&mut delta_a, m, &(&pinv_t * c * &pinv));
    }
    let eps_b = p.transpose() * aalg.unit();
    let eps_a = p * balg.unit();
    let y = Matrix::from_fn(n, n, |i, m| p[(aalg.adjoint_index(i), balg.adjoint_index(m))].conj());
    let s_b = &pinv * y;
    let y = Matrix::from_fn(n, n, |j, m| p[(aalg.adjoint_index(m), balg.adjoint_index(j))].conj());
    let s_a = &pinv_t * y;
    let on_b = WeakHopfData::new(balg.clone(), delta_b, eps_b, s_b, Involution::Adjoint)?;
    let on_a = WeakHopfData::new(aalg.clone(), delta_a, eps_a, s_a, Involution::Adjoint)?;

    let mut r = Report::new("reconstruction");
    r.fact("pairing condition number", format!("{:.6e}", pf.condition_number));
    r.fact("dim B", n);
    r.fact("blocks of B", format!("{:?}", balg.blocks()));
    r.fact("blocks of A", format!("{:?}", aalg.blocks()));

    // coalgebras
    for (label, w) in [("B", &on_b), ("A", &on_a)] {
        let ax = verify_axioms(w, tol);
        for name in ["coassociativity", "left counit", "right counit"] {
            let c = ax.report.get(name).expect("axiom row present");
            r.check(&format!("{name} ({label})"), "coalgebra", c.residual, tol);
        }
    }

    let bb = t.basis_b();
    let d = re(t.d as f64);
    let inv = re(1.0 / t.lambda);

    // the pairing on special elements
    let one_one = pf.eval(&aalg.unit(), &balg.unit());
    r.check("<1, 1> = d", "pairing", (one_one - d).norm() / t.d as f64, tol);
    let mut ce = 0.0_f64;
    for (j, b) in bb.iter().enumerate() {
        let rhs = t.trace_product(b, &t.e2) * d * inv;
        ce = ce.max((on_b.epsilon[j] - rhs).norm());
    }
    r.check("eps_B(b) = d tau(b e2) / lambda", "pairing", ce, tol);
    let e1a = t.a.coords(&t.e1);
    let mut ct = t.a.membership_residual(&t.e1);
    for (j, b) in bb.iter().enumerate() {
        let lhs = pf.eval(&e1a, &balg.basis(j));
        ct = ct.max((lhs - t.trace(b) * d).norm());
    }
    r.check("<e1, b> = d tau(b)", "pairing", ct, tol);

    // duality consistency
    let mut dual = 0.0_f64;
    let scale = max_abs(p.as_slice()).max(1.0);
    for m in 0..n {
        let x = on_a.coproduct_of_basis(m);
        let lhs = p.transpose() * x * p;
        let c = Matrix::from_fn(n, n, |i, j| balg.basis_product(i, j).map(|k| p[(m, k)]).unwrap_or(ZERO));
        dual = dual.max(max_abs((lhs - c).as_slice()) / scale);
        let x = on_b.coproduct_of_basis(m);
        let lhs = p * x * p.transpose();
        let c = Matrix::from_fn(n, n, |i, j| aalg.basis_product(i, j).map(|k| p[(k, m)]).unwrap_or(ZERO));
        dual = dual.max(max_abs((lhs - c).as_slice()) / scale);
    }
    r.check("coproducts transpose the products under the pairing", "pairing", dual, tol);
    let sa = max_abs((p * &on_b.antipode - on_a.antipode.transpose() * p).as_slice()) / scale;
    r.check("<a, S_B(b)> = <S_A(a), b>", "pairing", sa, tol);

    // cross-checks against the expectation formulas
    let et = on_b.target_map();
    let mut ctarget = 0.0_f64;
    let mut cs = 0.0_f64;
    let e12 = t.mul(&t.e1, &t.e2);
    let l3 = re(1.0 / t.lambda.powi(3));
    for (j, b) in bb.iter().enumerate() {
        let lhs = t.b.map(&et.column(j).into_owned());
        let rhs = t.e_m1(&t.mul(b, &t.e2)) * inv;
        ctarget = ctarget.max(distance(lhs.as_slice(), rhs.as_slice()));
        let lhs = t.b.map(&on_b.antipode.column(j).into_owned());
        let rhs = t.e_mprime(&t.mul(&e12, &t.e_m1(&t.mul(b, &e12)))) * l3;
        cs = cs.max(distance(lhs.as_slice(), rhs.as_slice()));
    }
    fail_or(&mut r, "target(b) = E_M1(b e2) / lambda", "cross-check", ctarget, tol)?;
    fail_or(&mut r, "S_B(b) = E_M'(e1 e2 E_M1(b e1 e2)) / lambda^3", "cross-check", cs, tol)?;

    // the canonical element
    let c1 = on_b.coproduct(&balg.unit());
    let h = on_b.multiply_pairs(&(&on_b.antipode * &c1));
    let bt_trace = t.b_t.restrict_trace(&t.tau)?;
    let hw_amb = t.b_t.map(&canonical_element(t.b_t.sub(), &bt_trace, t.d)?);
    let hw = t.b.coords(&hw_amb);
    let agree = distance(h.as_slice(), hw.as_slice()).max(t.b.membership_residual(&hw_amb));
    fail_or(&mut r, "S_B(1(1)) 1(2) = Index(tau on B_t) / d", "canonical element", agree, tol)?;
    let h_amb = t.b.map(&h);
    r.check("tau(H) = 1", "canonical element", (t.trace(&h_amb) - re(1.0)).norm(), tol);
    let mut central = t.b_t.membership_residual(&h_amb);
    for i in 0..t.b_t.sub().dim() {
        central = central.max(max_abs(t.ambient.commutator(&h_amb, &t.b_t.image(i)).as_slice()));
    }
    r.check("H central in B_t", "canonical element", central, tol);
    let (vals, _) = hermitian_eigen(&balg.left_mul_matrix(&h));
    let herm = distance(balg.adjoint(&h).as_slice(), h.as_slice());
    let lowest = vals.first().copied().unwrap_or(0.0);
    r.check("H self-adjoint", "canonical element", herm, tol);
    r.fact("min eigenvalue of H", format!("{lowest:.6e}"));
    if !(lowest > tol) {
        return Err(TowerError::BadCanonicalElement(format!("min eigenvalue {lowest:.3e}")));
    }
    let h_inv = inverse_element(&balg, &h).ok_or_else(|| TowerError::BadCanonicalElement("singular".into()))?;
    r.fact("|H - 1|", format!("{:.6e}", distance(h.as_slice(), balg.unit().as_slice())));

    let e2b = t.b.coords(&t.e2);
    let se2 = distance(on_b.antipode_of(&e2b).as_slice(), e2b.as_slice()).max(t.b.membership_residual(&t.e2));
    r.check("S_B(e2) = e2", "antipode", se2, tol);
    r.fact("eps_B(1)", format!("{:.12}", on_b.counit(&balg.unit()).re));

    Ok(ReconstructedStructure { on_b, on_a, h, h_inv, pairing: pf, gram_inverse: pinv, report: r })
}
