use fd_star_algebra::linalg::intersection_dim;
use fd_star_algebra::{Config, Report};

use crate::cartan::cartan_subalgebras;
use crate::data::WeakHopfData;
use crate::dual::dual_algebra;
use crate::error::{HopfError, Result};

#[derive(Clone, Debug)]
pub struct Connectedness {
    pub connected: bool,
    pub dual_connected: bool,
    pub biconnected: bool,
    pub report: Report,
}

fn center_intersection(w: &WeakHopfData, tol: f64) -> Result<(usize, usize)> {
    let c = cartan_subalgebras(w, tol)?;
    let z = w.algebra.center_basis();
    Ok((intersection_dim(&c.target, &z, 1e-8), intersection_dim(&c.target, &c.source, 1e-8)))
}

/// connected ⟺ dim(B_t ∩ Z(B)) = 1; the dual flag uses the dual algebra.
/// The criterion dim(B_t ∩ B_s) = 1 ⟺ B* connected is cross-checked in
/// both directions.
pub fn connectedness(w: &WeakHopfData, cfg: &Config) -> Result<Connectedness> {
    let (zt, ts) = center_intersection(w, cfg.tol)?;
    let dual = dual_algebra(w, cfg)?;
    let (dzt, dts) = center_intersection(&dual.data, cfg.tol)?;
    let connected = zt == 1;
    let dual_connected = dzt == 1;
    let mut r = Report::new("connectedness");
    r.fact("dim B_t ∩ Z(B)", zt);
    r.fact("dim B_t ∩ B_s", ts);
    r.fact("dual dim B_t ∩ Z(B)", dzt);
    r.fact("dual dim B_t ∩ B_s", dts);
    r.fact("connected", connected);
    r.fact("dual connected", dual_connected);
    r.fact("biconnected", connected && dual_connected);
    let agree_dual = (ts == 1) == dual_connected;
    let agree_primal = (dts == 1) == connected;
    r.require("B_t ∩ B_s = C iff dual connected", "connectedness", agree_dual);
    r.require("dual B_t ∩ B_s = C iff connected", "connectedness", agree_primal);
    if !(agree_dual && agree_primal) {
        return Err(HopfError::Connectedness(format!(
            "center criterion gives ({connected}, {dual_connected}), Cartan intersection gives ({}, {})",
            dts == 1,
            ts == 1
        )));
    }
    Ok(Connectedness { connected, dual_connected, biconnected: connected && dual_connected, report: r })
}
