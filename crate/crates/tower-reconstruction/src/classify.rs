//! Decide whether the reconstructed structure is a weak Kac algebra (H = 1)
//! and record arithmetic facts about the index.

use fd_star_algebra::linalg::{distance, re};
use fd_star_algebra::{inclusion_matrix, Element, Report};
use weak_hopf_core::{haar, verify_axioms, Classification};

use crate::deform::TwistedStructure;
use crate::error::{Result, TowerError};
use crate::reconstruct::ReconstructedStructure;
use crate::tower::TowerData;

#[derive(Clone, Debug)]
pub struct ClassifyOutcome {
    pub classification: Classification,
    pub h_is_one: bool,
    pub index: f64,
    pub integral: bool,
    pub square_free: bool,
    pub prime: bool,
    pub report: Report,
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|p| p * p <= n).all(|p| !n.is_multiple_of(p))
}

pub fn is_square_free(n: u64) -> bool {
    n >= 1 && (2..).take_while(|p| p * p <= n).all(|p| !n.is_multiple_of(p * p))
}

/// Least Δ non-multiplicativity accepted as a witness that H ≠ 1 matters.
pub const NON_MULTIPLICATIVITY_THRESHOLD: f64 = 1e-3;

/// The H = 1 dichotomy on any structure satisfying the twisted bundle:
/// H = 1 must give a weak Kac algebra, H ≠ 1 must not.
pub fn kac_dichotomy(tw: &TwistedStructure, tol: f64) -> Result<(Classification, bool, Report)> {
    let w = &tw.data;
    let mut rep = Report::new("weak Kac dichotomy");
    let h_defect = distance(tw.h.as_slice(), w.unit().as_slice());
    let h_is_one = h_defect <= tol;
    rep.fact("|H - 1|", format!("{h_defect:.6e}"));
    let ax = verify_axioms(w, tol);
    rep.fact("axiom classification", ax.classification);
    if h_is_one {
        if ax.classification != Classification::WeakKac {
            return Err(TowerError::InvalidTower(format!("H = 1 but the axioms fail:\n{}", ax.report)));
        }
        rep.check("weak Kac axioms", "H = 1 branch", ax.report.max_residual(), tol);
    } else {
        let mult = ax.report.get("comultiplication multiplicative").map_or(0.0, |c| c.residual);
        rep.require("not weak Kac when H != 1", "H != 1 branch", ax.classification != Classification::WeakKac);
        rep.check_at_least(
            "comultiplication non-multiplicativity",
            "H != 1 branch",
            mult,
            NON_MULTIPLICATIVITY_THRESHOLD,
        );
    }
    Ok((ax.classification, h_is_one, rep))
}

pub fn classify(t: &TowerData, r: &ReconstructedStructure, tol: f64) -> Result<ClassifyOutcome> {
    let w = &r.on_b;
    let (classification, h_is_one, mut rep) = kac_dichotomy(&r.twisted(), tol)?;
    rep.title = "classification".into();
    if h_is_one {
        let (hd, hr) = haar(w, true, tol)?;
        rep.absorb(hr, "");
        let e2 = t.b.coords(&t.e2);
        rep.check("Haar projection = e2", "H = 1 branch", distance(hd.projection.as_slice(), e2.as_slice()), tol);
        let d = re(t.d as f64);
        let dtau = Element::from_iterator(w.dim(), t.basis_b().iter().map(|b| t.trace(b) * d));
        rep.check("Haar functional = d tau", "H = 1 branch", distance(hd.functional.as_slice(), dtau.as_slice()), tol);
    }

    // ΛΛᵗτ = λ⁻¹τ for B_t ⊂ B
    let bt_in_b = t.b_t.restrict(&t.b, tol)?;
    let lam = inclusion_matrix(&bt_in_b)?.as_matrix();
    let bt_trace = t.b_t.restrict_trace(&t.tau)?;
    let tv = nalgebra::DVector::from_vec(bt_trace.weights().to_vec());
    let lhs = &lam * lam.transpose() * &tv;
    let rhs = &tv / t.lambda;
    let perron = (lhs - &rhs).amax() / rhs.amax().max(1.0);
    rep.check("Lambda Lambda^t tau = tau / lambda for B_t in B", "index arithmetic", perron, tol);

    let index = t.index();
    let rounded = index.round();
    let integral = (index - rounded).abs() <= tol * index.max(1.0);
    let n = rounded as u64;
    let square_free = integral && is_square_free(n);
    let prime = integral && is_prime(n);
    rep.fact("index", format!("{index:.12}"));
    rep.fact("index integral", integral);
    rep.fact("index square-free", square_free);
    rep.fact("index prime", prime);
    if h_is_one {
        rep.require("index integral when H = 1", "index arithmetic", integral);
    }
    Ok(ClassifyOutcome { classification, h_is_one, index, integral, square_free, prime, report: rep })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_arithmetic() {
        assert!(is_prime(2) && is_prime(3) && !is_prime(6) && !is_prime(1));
        assert!(is_square_free(6) && !is_square_free(4) && !is_square_free(12));
    }
}
