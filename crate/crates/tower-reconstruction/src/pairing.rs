use fd_star_algebra::linalg::{condition_number, re};
use fd_star_algebra::{Element, Matrix, Vector, C64};

use crate::error::{Result, TowerError};
use crate::tower::TowerData;

/// Largest admissible condition number of the Gram matrix.
pub const MAX_CONDITION: f64 = 1e8;

/// ⟨a, b⟩ = dλ⁻²τ(a e₂ e₁ b) on the matrix-unit bases of A and B.
#[derive(Clone, Debug)]
pub struct PairingForm {
    /// gram[(i, j)] = ⟨a_i, b_j⟩
    pub gram: Matrix,
    pub condition_number: f64,
}

impl PairingForm {
    /// ⟨x, y⟩ for x in A coordinates and y in B coordinates.
    pub fn eval(&self, x: &Element, y: &Element) -> C64 {
        (x.transpose() * &self.gram * y)[(0, 0)]
    }

    pub fn inverse(&self) -> Result<Matrix> {
        self.gram
            .clone()
            .try_inverse()
            .ok_or(TowerError::DegeneratePairing(self.condition_number))
    }
}

/// The scale dλ⁻² in front of the trace.
pub fn pairing_scale(t: &TowerData) -> C64 {
    re(t.d as f64 / (t.lambda * t.lambda))
}

/// ⟨y, b⟩ for an arbitrary ambient y and ambient b.
pub fn pair_ambient(t: &TowerData, y: &Element, b: &Element) -> C64 {
    let w = t.mul3(y, &t.e2, &t.e1);
    t.trace_product(&w, b) * pairing_scale(t)
}

/// ⟨y, b_j⟩ for an ambient y against every matrix unit b_j of B.
pub fn pair_with_b(t: &TowerData, y: &Element) -> Vector {
    let w = t.mul3(y, &t.e2, &t.e1);
    let s = pairing_scale(t);
    let n = t.b.sub().dim();
    Vector::from_fn(n, |j, _| t.trace_product(&w, &t.b.image(j)) * s)
}

pub fn pairing(t: &TowerData) -> Result<PairingForm> {
    let ba = t.basis_a();
    let bb = t.basis_b();
    if ba.len() != bb.len() {
        return Err(TowerError::DegeneratePairing(f64::INFINITY));
    }
    let e21 = t.mul(&t.e2, &t.e1);
    let s = pairing_scale(t);
    let mut gram = Matrix::zeros(ba.len(), bb.len());
    for (i, a) in ba.iter().enumerate() {
        let w = t.mul(a, &e21);
        for (j, b) in bb.iter().enumerate() {
            gram[(i, j)] = t.trace_product(&w, b) * s;
        }
    }
    let condition_number = condition_number(&gram);
    if !(condition_number <= MAX_CONDITION) {
        return Err(TowerError::DegeneratePairing(condition_number));
    }
    Ok(PairingForm { gram, condition_number })
}
