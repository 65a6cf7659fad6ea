//! Relative commutant of the carrier inside the crossed product.

use fd_star_algebra::linalg::{distance, intersection_dim, max_abs, rank};
use fd_star_algebra::{Config, Matrix, Report};

use crate::crossed::CrossedProduct;
use crate::sample::solve_homogeneous;

#[derive(Clone, Debug)]
pub struct Minimality {
    pub minimal: bool,
    pub commutant_dim: usize,
    pub source_dim: usize,
    pub report: Report,
}

/// Solve [x ⊗ 1]u = u[x ⊗ 1] for all basis x and compare the solution
/// space with the image of B_s.
pub fn minimality(cp: &CrossedProduct, cfg: &Config) -> Minimality {
    let tol = cfg.tol;
    let alg = &cp.action.carrier;
    let w = &cp.action.hopf;
    let (dm, dim) = (alg.dim(), cp.dim());
    let mut rows: Vec<Vec<fd_star_algebra::C64>> = Vec::new();
    for p in 0..dm {
        let ex = cp.embed_carrier(&alg.basis(p));
        let mut block = Matrix::zeros(dim, dim);
        for l in 0..dim {
            let e = cp.basis(l);
            block.set_column(l, &(cp.mul(&ex, &e) - cp.mul(&e, &ex)));
        }
        // equations that vanish to tolerance carry no information
        rows.extend(block.row_iter().filter(|r| max_abs(r.clone_owned().as_slice()) > tol).map(|r| r.iter().cloned().collect()));
    }
    let system = Matrix::from_fn(rows.len(), dim, |i, j| rows[i][j]);
    let commutant = solve_homogeneous(&system, dim, tol);
    let source: Vec<_> = w
        .source_map()
        .column_iter()
        .map(|c| cp.embed_hopf(&c.into_owned()))
        .filter(|v| max_abs(v.as_slice()) > 1e-12)
        .collect();
    let source = Matrix::from_columns(&source);
    let source_dim = rank(&source, tol);
    let commutant_dim = commutant.ncols();
    let common = intersection_dim(&commutant, &source, tol);

    let mut r = Report::new("minimality");
    r.fact("dim commutant", commutant_dim);
    r.fact("dim B_s", source_dim);
    let residual = (0..source.ncols())
        .map(|j| {
            let v = source.column(j).into_owned();
            let proj = &commutant * (commutant.adjoint() * &v);
            distance(proj.as_slice(), v.as_slice())
        })
        .fold(0.0, f64::max);
    r.check("B_s image commutes with M", "minimality", residual, tol);
    let minimal = commutant_dim == source_dim && common == source_dim;
    r.fact("minimal", minimal);
    Minimality { minimal, commutant_dim, source_dim, report: r }
}
