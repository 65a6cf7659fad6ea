use fd_star_algebra::linalg::{self, distance};
use fd_star_algebra::{Element, Matrix, Report};

use crate::data::WeakHopfData;
use crate::error::{HopfError, Result};

/// B_t and B_s as orthonormal bases (columns, coefficient coordinates) of
/// the fixed spaces of ε^t and ε^s.
#[derive(Clone, Debug)]
pub struct CartanPair {
    pub target: Matrix,
    pub source: Matrix,
    pub report: Report,
}

impl CartanPair {
    pub fn target_dim(&self) -> usize {
        self.target.ncols()
    }

    pub fn source_dim(&self) -> usize {
        self.source.ncols()
    }
}

fn fixed_space(map: &Matrix, tol: f64) -> Matrix {
    let d = map.nrows();
    linalg::null_space(&(map - Matrix::identity(d, d)), tol)
}

fn closure_defect(w: &WeakHopfData, basis: &Matrix) -> f64 {
    let proj = basis * basis.adjoint();
    let mut worst = 0.0_f64;
    let cols: Vec<Element> = (0..basis.ncols()).map(|i| basis.column(i).into_owned()).collect();
    for x in &cols {
        let xs = w.star(x);
        worst = worst.max(distance((&proj * &xs).as_slice(), xs.as_slice()));
        for y in &cols {
            let p = w.mul(x, y);
            worst = worst.max(distance((&proj * &p).as_slice(), p.as_slice()));
        }
    }
    let u = w.unit();
    worst.max(distance((&proj * &u).as_slice(), u.as_slice()))
}

/// Counital images, their closure as unital *-subalgebras, and the
/// relations between them.
pub fn cartan_subalgebras(w: &WeakHopfData, tol: f64) -> Result<CartanPair> {
    let et = w.target_map();
    let es = w.source_map();
    let target = fixed_space(&et, 1e-9);
    let source = fixed_space(&es, 1e-9);
    let mut r = Report::new("Cartan subalgebras");
    r.fact("dim B_t", target.ncols());
    r.fact("dim B_s", source.ncols());

    let ct = closure_defect(w, &target);
    let cs = closure_defect(w, &source);
    if ct > 1e-7 || cs > 1e-7 {
        return Err(HopfError::Cartan(format!("closure defects {ct:.3e} (target), {cs:.3e} (source)")));
    }
    r.check("B_t closed under product, * and unit", "Cartan subalgebras", ct, tol);
    r.check("B_s closed under product, * and unit", "Cartan subalgebras", cs, tol);
    r.check("target o target = target", "counital maps", distance((&et * &et).as_slice(), et.as_slice()), tol);
    r.check("source o source = source", "counital maps", distance((&es * &es).as_slice(), es.as_slice()), tol);

    let tcols: Vec<Element> = (0..target.ncols()).map(|i| target.column(i).into_owned()).collect();
    let scols: Vec<Element> = (0..source.ncols()).map(|i| source.column(i).into_owned()).collect();
    let mut comm = 0.0_f64;
    for x in &tcols {
        for y in &scols {
            let c = w.mul(x, y) - w.mul(y, x);
            comm = comm.max(linalg::max_abs(c.as_slice()));
        }
    }
    r.check("[B_t, B_s] = 0", "Cartan subalgebras", comm, tol);

    // S(B_t) = B_s: images lie in B_s and dimensions agree
    let sproj = &source * source.adjoint();
    let mut sb = 0.0_f64;
    for x in &tcols {
        let y = w.antipode_of(x);
        sb = sb.max(distance((&sproj * &y).as_slice(), y.as_slice()));
    }
    if target.ncols() != source.ncols() {
        sb = sb.max(1.0);
    }
    r.check("S(B_t) = B_s", "Cartan subalgebras", sb, tol);
    let comp = distance((&w.antipode * &es).as_slice(), (&et * &w.antipode).as_slice());
    r.check("S o source = target o S", "counital maps", comp, tol);

    // membership characterization Δ(z) = z 1(1) ⊗ 1(2) = 1(1) z ⊗ 1(2) on B_t
    let c1 = w.coproduct(&w.unit());
    let alg = &w.algebra;
    let mut mt = 0.0_f64;
    for z in &tcols {
        let dz = w.coproduct(z);
        let a = alg.left_mul_matrix(z) * &c1;
        let b = alg.right_mul_matrix(z) * &c1;
        mt = mt.max(distance(dz.as_slice(), a.as_slice())).max(distance(dz.as_slice(), b.as_slice()));
    }
    let mut ms = 0.0_f64;
    for z in &scols {
        let dz = w.coproduct(z);
        let a = &c1 * alg.left_mul_matrix(z).transpose();
        let b = &c1 * alg.right_mul_matrix(z).transpose();
        ms = ms.max(distance(dz.as_slice(), a.as_slice())).max(distance(dz.as_slice(), b.as_slice()));
    }
    r.check("coproduct characterization of B_t", "Cartan subalgebras", mt, tol);
    r.check("coproduct characterization of B_s", "Cartan subalgebras", ms, tol);
    Ok(CartanPair { target, source, report: r })
}
