use fd_star_algebra::{Element, C64};
use rand::Rng;

/// Element with independent uniform real and imaginary parts in [-1, 1).
pub fn random_element(rng: &mut impl Rng, dim: usize) -> Element {
    Element::from_fn(dim, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

/// Null space of a homogeneous system whose coefficients are O(1); a
/// system with no entry above `tol` is treated as identically zero.
pub fn solve_homogeneous(system: &fd_star_algebra::Matrix, cols: usize, tol: f64) -> fd_star_algebra::Matrix {
    if fd_star_algebra::linalg::max_abs(system.as_slice()) <= tol {
        return fd_star_algebra::Matrix::identity(cols, cols);
    }
    fd_star_algebra::linalg::null_space(system, tol)
}
