//! H-deformation of a reconstructed structure into a weak C*-Hopf algebra
//! and its formal inverse.
//!
//! Everything is written with the left and right regular matrices L_x, R_x
//! of B:  Δ̃ = (1⊗L_{H⁻¹})Δ,  ε̃ = ε∘L_H,  S̃ = S∘L_H R_{H⁻¹},
//! b† = S(H)⁻¹ b* S(H).

use fd_star_algebra::linalg::{distance, kron, max_abs, re};
use fd_star_algebra::{Element, Matrix, MultiMatrixAlgebra, Report, C64};
use weak_hopf_core::{haar, verify_axioms, AxiomReport, Classification, HaarData, Involution, WeakHopfData};

use crate::error::{Result, TowerError};
use crate::reconstruct::{inverse_element, ReconstructedStructure};
use crate::tower::TowerData;

/// Data satisfying the twisted axiom bundle: Δ multiplicative only up to
/// the canonical element, Δ(bc) = Δ(b)(1⊗H⁻¹)Δ(c).
#[derive(Clone, Debug)]
pub struct TwistedStructure {
    pub data: WeakHopfData,
    pub h: Element,
}

#[derive(Clone, Debug)]
pub struct DeformedStructure {
    /// (B, Δ̃, ε̃, S̃, †)
    pub data: WeakHopfData,
    /// G = S̃(H)⁻¹H
    pub g: Element,
    pub s_h: Element,
    pub h: Element,
    pub haar: HaarData,
    pub axioms: AxiomReport,
    pub report: Report,
}

fn involution_for(alg: &MultiMatrixAlgebra, j: Matrix) -> Involution {
    if distance(j.as_slice(), alg.adjoint_matrix().as_slice()) < 1e-13 {
        Involution::Adjoint
    } else {
        Involution::Antilinear(j)
    }
}

/// Eigenvalues of a general complex matrix.
pub(crate) fn spectrum(m: &Matrix) -> Vec<C64> {
    let s = m.clone().schur();
    let (_, t) = s.unpack();
    (0..t.nrows()).map(|i| t[(i, i)]).collect()
}

/// Largest entry difference of the structure tensors and involutions.
pub fn structure_distance(a: &WeakHopfData, b: &WeakHopfData) -> f64 {
    if a.algebra.blocks() != b.algebra.blocks() {
        return f64::INFINITY;
    }
    distance(a.delta.as_slice(), b.delta.as_slice())
        .max(distance(a.epsilon.as_slice(), b.epsilon.as_slice()))
        .max(distance(a.antipode.as_slice(), b.antipode.as_slice()))
        .max(distance(a.star_matrix().as_slice(), b.star_matrix().as_slice()))
}

/// max ‖[x, y_j]‖ over the columns y_j of `ys`.
fn commutes_with_columns(alg: &MultiMatrixAlgebra, x: &Element, ys: &Matrix) -> f64 {
    (0..ys.ncols())
        .map(|j| max_abs(alg.commutator(x, &ys.column(j).into_owned()).as_slice()))
        .fold(0.0, f64::max)
}

/// H invertible, self-adjoint, with positive spectrum, in the centre of B_t.
fn check_canonical(w: &WeakHopfData, h: &Element, r: &mut Report, tol: f64) -> f64 {
    let alg = &w.algebra;
    let et = w.target_map();
    let inside = distance((&et * h).as_slice(), h.as_slice());
    let central = commutes_with_columns(alg, h, &et);
    let herm = distance(w.star(h).as_slice(), h.as_slice());
    let spec = spectrum(&alg.left_mul_matrix(h));
    let imag = spec.iter().fold(0.0_f64, |m, z| m.max(z.im.abs()));
    let lowest = spec.iter().fold(f64::INFINITY, |m, z| m.min(z.re));
    r.check("H in B_t", "canonical element", inside, tol);
    r.check("H central in B_t", "canonical element", central, tol);
    r.check("H self-adjoint", "canonical element", herm, tol);
    r.check("spectrum of H real", "canonical element", imag, tol);
    r.check_at_least("min eigenvalue of H", "canonical element", lowest, tol);
    lowest
}

/// The twisted axiom bundle satisfied by every reconstructed structure.
pub fn twisted_bundle(tw: &TwistedStructure, tol: f64) -> Report {
    let w = &tw.data;
    let alg = &w.algebra;
    let d = w.dim();
    let mut r = Report::new("twisted axiom bundle");
    let ax = verify_axioms(w, tol);
    for name in [
        "coassociativity",
        "left counit",
        "right counit",
        "comultiplication *-preserving",
        "b1 (x) target(b2) = 1(1) b (x) 1(2)",
        "b target(c) = eps(b1 c) b2",
        "S anti-multiplicative",
        "S anti-comultiplicative",
        "involution anti-multiplicative and involutive",
    ] {
        let c = ax.report.get(name).expect("axiom row present");
        r.check(name, &c.tag, c.residual, tol);
    }
    r.check("S^2 = id", "antipode", ax.s_squared, tol);
    r.check("S o * = * o S", "antipode", ax.star_commutation, tol);
    let lowest = check_canonical(w, &tw.h, &mut r, tol);
    let Some(h_inv) = (lowest > tol).then(|| inverse_element(alg, &tw.h)).flatten() else {
        r.require("H invertible", "canonical element", false);
        return r;
    };

    let t = w.tensor_square();
    let lh_t = alg.left_mul_matrix(&h_inv).transpose();
    let cops: Vec<Matrix> = (0..d).map(|j| w.coproduct_of_basis(j)).collect();
    let mut twisted = 0.0_f64;
    for i in 0..d {
        for j in 0..d {
            let lhs = match alg.basis_product(i, j) {
                Some(k) => cops[k].clone(),
                None => Matrix::zeros(d, d),
            };
            let rhs = t.mul_pairs(&cops[i], &(&cops[j] * &lh_t));
            twisted = twisted.max(distance(lhs.as_slice(), rhs.as_slice()));
        }
    }
    r.check("coproduct(bc) = coproduct(b)(1 (x) H^-1)coproduct(c)", "comultiplication", twisted, tol);
    let m = (&w.antipode * alg.right_mul_matrix(&h_inv)).transpose();
    let et = w.target_map();
    let mut anti = 0.0_f64;
    for (j, p) in cops.iter().enumerate() {
        let lhs = w.multiply_pairs(&(p * &m));
        anti = anti.max(distance(lhs.as_slice(), et.column(j).into_owned().as_slice()));
    }
    r.check("b1 S(b2 H^-1) = target(b)", "antipode", anti, tol);
    r.fact(
        "comultiplication multiplicative residual",
        format!("{:.6e}", ax.report.get("comultiplication multiplicative").map_or(0.0, |c| c.residual)),
    );
    r
}

fn bundle_error(r: &Report) -> TowerError {
    let names: Vec<String> = r.failures().iter().map(|c| format!("{} ({:.3e})", c.name, c.residual)).collect();
    TowerError::Bundle(names.join("; "))
}

/// Def. of the deformed operations. Fails before deforming if the bundle is
/// violated and after deforming if the output is not a weak C*-Hopf algebra.
pub fn deform(tw: &TwistedStructure, tol: f64) -> Result<DeformedStructure> {
    let bundle = twisted_bundle(tw, tol);
    if !bundle.passed() {
        return Err(bundle_error(&bundle));
    }
    let w = &tw.data;
    let alg = &w.algebra;
    let d = w.dim();
    let h = tw.h.clone();
    let h_inv = inverse_element(alg, &h).ok_or_else(|| TowerError::BadCanonicalElement("singular".into()))?;
    let s_h = w.antipode_of(&h);
    let s_h_inv = inverse_element(alg, &s_h).ok_or_else(|| TowerError::BadCanonicalElement("S(H) singular".into()))?;
    let l = |x: &Element| alg.left_mul_matrix(x);
    let rm = |x: &Element| alg.right_mul_matrix(x);
    let id = Matrix::identity(d, d);

    let dagger = l(&s_h_inv) * rm(&s_h) * w.star_matrix();
    let delta = kron(&id, &l(&h_inv)) * &w.delta;
    let epsilon = l(&h).transpose() * &w.epsilon;
    let antipode = &w.antipode * l(&h) * rm(&h_inv);
    let data = WeakHopfData::new(alg.clone(), delta, epsilon, antipode, involution_for(alg, dagger))?;

    let mut r = Report::new("deformation");
    r.absorb(bundle, "input");
    let axioms = verify_axioms(&data, tol);
    if axioms.classification == Classification::Invalid {
        return Err(TowerError::Axioms(axioms.report.to_string()));
    }
    r.fact("classification", axioms.classification);
    r.check(
        "deformed structure is a weak C*-Hopf algebra",
        "deformed axioms",
        axioms.report.max_residual(),
        tol,
    );

    let st_h = data.antipode_of(&h);
    let g = alg.mul(&inverse_element(alg, &st_h).ok_or_else(|| TowerError::BadCanonicalElement("S~(H) singular".into()))?, &h);
    let g_inv = inverse_element(alg, &g).ok_or_else(|| TowerError::BadCanonicalElement("G singular".into()))?;
    r.check("S~(H) = S(H)", "deformed antipode", distance(st_h.as_slice(), s_h.as_slice()), tol);
    r.check(
        "deformed target map unchanged",
        "deformed counit",
        distance(data.target_map().as_slice(), w.target_map().as_slice()),
        tol,
    );
    let s2 = &data.antipode * &data.antipode;
    let ad = l(&g) * rm(&g_inv);
    r.check("S~^2 = Ad(G)", "deformed antipode", distance(s2.as_slice(), ad.as_slice()), tol);
    let sj = &data.antipode * data.star_matrix();
    r.check("(S~ o dagger)^2 = id", "deformed antipode", distance((&sj * sj.conjugate()).as_slice(), id.as_slice()), tol);
    r.fact("|G - 1|", format!("{:.6e}", distance(g.as_slice(), alg.unit().as_slice())));

    let (haar_data, hr) = haar(&data, axioms.classification == Classification::WeakKac, tol)?;
    r.absorb(hr, "deformed");
    Ok(DeformedStructure { data, g, s_h, h, haar: haar_data, axioms, report: r })
}

impl DeformedStructure {
    /// max ‖[G^k, b]‖ over basis elements, for k = 1..=powers.
    pub fn g_power_noncentrality(&self, powers: usize) -> Vec<f64> {
        let alg = &self.data.algebra;
        let basis = Matrix::identity(alg.dim(), alg.dim());
        let mut gk = alg.unit();
        (0..powers)
            .map(|_| {
                gk = alg.mul(&gk, &self.g);
                commutes_with_columns(alg, &gk, &basis)
            })
            .collect()
    }
}

/// `deform` on a reconstructed tower structure, plus the tower-side Haar
/// data: projection e₂H and functional b ↦ dτ(S̃(H)Hb).
pub fn deform_tower(t: &TowerData, r: &ReconstructedStructure, tol: f64) -> Result<DeformedStructure> {
    let mut def = deform(&r.twisted(), tol)?;
    let alg = &def.data.algebra;
    let e2h = alg.mul(&t.b.coords(&t.e2), &def.h);
    def.report.check(
        "deformed Haar projection = e2 H",
        "deformed Haar",
        distance(def.haar.projection.as_slice(), e2h.as_slice()),
        tol,
    );
    let w = alg.mul(&def.s_h, &def.h);
    let d = re(t.d as f64);
    let phi = Element::from_fn(alg.dim(), |j, _| t.trace(&t.b.map(&alg.mul(&w, &alg.basis(j)))) * d);
    def.report.check(
        "deformed Haar functional = d tau(S~(H) H b)",
        "deformed Haar",
        distance(def.haar.functional.as_slice(), phi.as_slice()),
        tol,
    );
    let index = t.index();
    if (index - index.round()).abs() > tol {
        for (k, v) in def.g_power_noncentrality(4).iter().enumerate() {
            def.report.fact(&format!("|[G^{}, B]|", k + 1), format!("{v:.6e}"));
        }
    }
    Ok(def)
}

/// Formal inverse of `deform`: Δ = (1⊗L_h)Δ̃, ε = ε̃∘L_{h⁻¹},
/// S = S̃∘L_{h⁻¹}R_h, b* = S̃(h) b† S̃(h)⁻¹.
pub fn undeform(w: &WeakHopfData, h: &Element, tol: f64) -> Result<(TwistedStructure, Report)> {
    let ax = verify_axioms(w, tol);
    if ax.classification == Classification::Invalid {
        return Err(TowerError::Axioms(ax.report.to_string()));
    }
    let alg = &w.algebra;
    let d = w.dim();
    if h.len() != d {
        return Err(TowerError::Precondition(format!("h has {} coefficients, expected {d}", h.len())));
    }
    let mut pre = Report::new("undeform preconditions");
    let lowest = check_canonical(w, h, &mut pre, tol);
    if !pre.passed() || !(lowest > tol) {
        let names: Vec<String> = pre.failures().iter().map(|c| c.name.clone()).collect();
        return Err(TowerError::Precondition(format!("h rejected: {}", names.join(", "))));
    }
    let h_inv = inverse_element(alg, h).ok_or_else(|| TowerError::Precondition("h singular".into()))?;
    let sh = w.antipode_of(h);
    let sh_inv = inverse_element(alg, &sh).ok_or_else(|| TowerError::Precondition("S(h) singular".into()))?;
    let l = |x: &Element| alg.left_mul_matrix(x);
    let rm = |x: &Element| alg.right_mul_matrix(x);
    let id = Matrix::identity(d, d);

    let delta = kron(&id, &l(h)) * &w.delta;
    let epsilon = l(&h_inv).transpose() * &w.epsilon;
    let antipode = &w.antipode * l(&h_inv) * rm(h);
    let star = l(&sh) * rm(&sh_inv) * w.star_matrix();
    let data = WeakHopfData::new(alg.clone(), delta, epsilon, antipode, involution_for(alg, star))?;
    let tw = TwistedStructure { data, h: h.clone() };
    let bundle = twisted_bundle(&tw, tol);
    if !bundle.passed() {
        return Err(bundle_error(&bundle));
    }
    let mut r = Report::new("undeform");
    r.absorb(pre, "");
    r.absorb(bundle, "");
    r.fact("normalization", "tau(h) = 1 is not required");
    Ok((tw, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use fd_star_algebra::linalg::re;
    use weak_hopf_core::pair_groupoid;

    #[test]
    fn spectrum_of_a_triangular_matrix() {
        let m = Matrix::from_row_slice(2, 2, &[re(2.0), re(5.0), re(0.0), re(3.0)]);
        let mut s: Vec<f64> = spectrum(&m).iter().map(|z| z.re).collect();
        s.sort_by(f64::total_cmp);
        assert!((s[0] - 2.0).abs() < 1e-12 && (s[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn unit_h_changes_nothing() {
        let pg = pair_groupoid(2).unwrap();
        let (tw, _) = undeform(&pg, &pg.unit(), 1e-9).unwrap();
        assert!(structure_distance(&tw.data, &pg) <= 1e-12);
        let back = deform(&tw, 1e-9).unwrap();
        assert!(structure_distance(&back.data, &pg) <= 1e-12);
        assert!(distance(back.g.as_slice(), pg.unit().as_slice()) <= 1e-12);
    }

    #[test]
    fn non_central_h_is_rejected() {
        let pg = pair_groupoid(2).unwrap();
        // E_00 + E_01 + E_10 + 2 E_11 is not in the diagonal target algebra
        let h = Element::from_vec(vec![re(1.0), re(0.5), re(0.5), re(2.0)]);
        assert!(matches!(undeform(&pg, &h, 1e-9), Err(TowerError::Precondition(_))));
        let neg = Element::from_vec(vec![re(1.0), re(0.0), re(0.0), re(-1.0)]);
        assert!(matches!(undeform(&pg, &neg, 1e-9), Err(TowerError::Precondition(_))));
    }
}
