//! Matrix units s^α_jk of A and the dual comatrix units v^α_jk of B.

use fd_star_algebra::linalg::{distance, re};
use fd_star_algebra::{Element, Matrix, Report};

use crate::error::{Result, TowerError};
use crate::reconstruct::ReconstructedStructure;
use crate::tower::TowerData;

#[derive(Clone, Debug)]
pub struct DualBases {
    /// Column i: s_i = the i-th matrix unit of A, in A coordinates (the identity).
    pub s_units: Matrix,
    /// Column i: v_i in B coordinates, ⟨s_i, v_k⟩ = δ_ik.
    pub v_units: Matrix,
    /// |α| = τ(s^α_kk), one per block of A.
    pub block_traces: Vec<f64>,
    pub report: Report,
}

impl DualBases {
    pub fn v(&self, i: usize) -> Element {
        self.v_units.column(i).into_owned()
    }
}

pub fn dual_bases(t: &TowerData, r: &ReconstructedStructure, tol: f64) -> Result<DualBases> {
    let aalg = t.a.sub();
    let balg = t.b.sub();
    let n = aalg.dim();
    let s_units = Matrix::identity(n, n);
    let v_units = r.gram_inverse.clone();
    let block_traces: Vec<f64> = (0..aalg.num_blocks())
        .map(|al| t.trace(&t.a.image(aalg.index(al, 0, 0))).re)
        .collect();
    let mut rep = Report::new("dual bases");
    rep.fact("block traces of A", format!("{block_traces:?}"));

    let duality = distance((&r.pairing.gram * &v_units).as_slice(), s_units.as_slice());
    rep.check("<s_i, v_k> = delta_ik", "comatrix units", duality, tol);
    if !rep.passed() {
        return Err(TowerError::CrossCheck { formula: "<s_i, v_k> = delta_ik".into(), residual: duality });
    }

    let v_amb: Vec<Element> = (0..n).map(|i| t.b.map(&v_units.column(i).into_owned())).collect();
    let e21 = t.mul(&t.e2, &t.e1);
    let e12 = t.mul(&t.e1, &t.e2);
    let (mut cop, mut cou, mut i1, mut i2, mut i3, mut i4) = (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
    let inv = re(1.0 / t.lambda);
    for i in 0..n {
        let (al, j, k) = aalg.locate(i);
        let m = aalg.blocks()[al];
        let v = v_units.column(i).into_owned();

        let want = (0..m).fold(Matrix::zeros(n, n), |acc, l| {
            acc + v_units.column(aalg.index(al, j, l)) * v_units.column(aalg.index(al, l, k)).transpose()
        });
        cop = cop.max(distance(r.on_b.coproduct(&v).as_slice(), want.as_slice()));
        let want = if j == k { re(1.0) } else { re(0.0) };
        cou = cou.max((r.on_b.counit(&v) - want).norm());

        let c = re(t.lambda * t.lambda / (t.d as f64 * block_traces[al]));
        let kj = aalg.index(al, k, j);
        let s_kj = t.a.image(kj);
        let lhs = t.e_m1(&t.mul(&e21, &v_amb[i]));
        i1 = i1.max(distance(lhs.as_slice(), (s_kj * c).as_slice()));
        let sa = t.a.map(&r.on_a.antipode_of(&aalg.basis(kj)));
        let lhs = t.e_m1(&t.mul(&v_amb[i], &e12));
        i2 = i2.max(distance(lhs.as_slice(), (sa * c).as_slice()));

        // (iii) over all s_pq in the same block and a different block
        for p in 0..n {
            let (be, pp, qq) = aalg.locate(p);
            let sa = t.a.map(&r.on_a.antipode_of(&aalg.basis(p)));
            let lhs = t.e_mprime(&t.mul3(&sa, &v_amb[i], &t.e1)) * inv;
            let rhs = if be == al && pp == j {
                v_amb[aalg.index(al, qq, k)].clone()
            } else {
                t.ambient.zero()
            };
            i3 = i3.max(distance(lhs.as_slice(), rhs.as_slice()));
        }

        let lhs = r.on_b.antipode_of(&v);
        let rhs = balg.adjoint(&v_units.column(kj).into_owned());
        i4 = i4.max(distance(lhs.as_slice(), rhs.as_slice()));
    }
    rep.check("coproduct(v_jk) = sum_l v_jl (x) v_lk", "comatrix units", cop, tol);
    rep.check("eps(v_jk) = delta_jk", "comatrix units", cou, tol);
    rep.check("E_M1(e2 e1 v_jk) = lambda^2 s_kj / (d |alpha|)", "comatrix units", i1, tol);
    rep.check("E_M1(v_jk e1 e2) = lambda^2 S_A(s_kj) / (d |alpha|)", "comatrix units", i2, tol);
    rep.check("E_M'(S_A(s_pq) v_ij e1) / lambda = delta delta v_qj", "comatrix units", i3, tol);
    rep.check("S_B(v_jk) = v_kj*", "comatrix units", i4, tol);
    if !rep.passed() {
        let worst = rep.failures().iter().map(|c| c.residual).fold(0.0, f64::max);
        let names: Vec<String> = rep.failures().iter().map(|c| c.name.clone()).collect();
        return Err(TowerError::CrossCheck { formula: names.join("; "), residual: worst });
    }
    Ok(DualBases { s_units, v_units, block_traces, report: rep })
}
