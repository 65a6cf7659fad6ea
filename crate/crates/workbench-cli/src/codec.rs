//! JSON forms of the library types.  Complex numbers are `[re, im]`,
//! elements are lists of square blocks, structure tensors are sparse
//! `[i, j, k, re, im]` lists.

use actions_crossed_products::{ActionData, CrossedProduct, ThetaMap};
use fd_star_algebra::linalg::{distance, ZERO};
use fd_star_algebra::{Element, Matrix, MultiMatrixAlgebra, SubalgebraEmbedding, TraceState, Vector, C64};
use serde_json::{json, Map, Value};
use tower_reconstruction::TowerData;
use weak_hopf_core::{FiniteGroup, Involution, WeakHopfData};

use crate::error::{schema, CliError, Result};

pub fn complex(z: C64) -> Value {
    json!([z.re, z.im])
}

pub fn field<'a>(v: &'a Value, key: &str, what: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| schema(format!("{what}: missing \"{key}\"")))
}

pub fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| schema(format!("{what}: expected an array")))
}

pub fn real(v: &Value, what: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| schema(format!("{what}: expected a number")))
}

pub fn index(v: &Value, what: &str) -> Result<usize> {
    v.as_u64().map(|n| n as usize).ok_or_else(|| schema(format!("{what}: expected a non-negative integer")))
}

pub fn to_complex(v: &Value, what: &str) -> Result<C64> {
    match v.as_array().map(|a| a.as_slice()) {
        Some([re, im]) => Ok(C64::new(real(re, what)?, real(im, what)?)),
        _ => Err(schema(format!("{what}: expected [re, im]"))),
    }
}

pub fn coefficients(v: &Vector) -> Value {
    Value::Array(v.iter().map(|&z| complex(z)).collect())
}

pub fn to_coefficients(v: &Value, len: usize, what: &str) -> Result<Vector> {
    let a = array(v, what)?;
    if a.len() != len {
        return Err(schema(format!("{what}: {} coefficients, expected {len}", a.len())));
    }
    let zs = a.iter().map(|z| to_complex(z, what)).collect::<Result<Vec<_>>>()?;
    Ok(Vector::from_vec(zs))
}

/// Row-major list of rows.
pub fn dense(m: &Matrix) -> Value {
    Value::Array(m.row_iter().map(|r| Value::Array(r.iter().map(|&z| complex(z)).collect())).collect())
}

pub fn to_dense(v: &Value, rows: usize, cols: usize, what: &str) -> Result<Matrix> {
    let a = array(v, what)?;
    if a.len() != rows {
        return Err(schema(format!("{what}: {} rows, expected {rows}", a.len())));
    }
    let mut m = Matrix::zeros(rows, cols);
    for (i, row) in a.iter().enumerate() {
        let row = array(row, what)?;
        if row.len() != cols {
            return Err(schema(format!("{what}: row {i} has {} entries, expected {cols}", row.len())));
        }
        for (j, z) in row.iter().enumerate() {
            m[(i, j)] = to_complex(z, what)?;
        }
    }
    Ok(m)
}

pub fn blocks(alg: &MultiMatrixAlgebra) -> Value {
    json!(alg.blocks())
}

pub fn to_algebra(v: &Value, what: &str) -> Result<MultiMatrixAlgebra> {
    let sizes = array(v, what)?.iter().map(|b| index(b, what)).collect::<Result<Vec<_>>>()?;
    MultiMatrixAlgebra::new(sizes).map_err(|e| schema(format!("{what}: {e}")))
}

/// `{"blocks": [...], "value": [block matrices]}`
pub fn element(alg: &MultiMatrixAlgebra, x: &Element) -> Value {
    let value: Vec<Value> = (0..alg.num_blocks()).map(|a| dense(&alg.block(x, a))).collect();
    json!({ "blocks": blocks(alg), "value": value })
}

pub fn to_element(v: &Value) -> Result<(MultiMatrixAlgebra, Element)> {
    let alg = to_algebra(field(v, "blocks", "element")?, "element blocks")?;
    let value = array(field(v, "value", "element")?, "element value")?;
    if value.len() != alg.num_blocks() {
        return Err(schema(format!("element: {} blocks of coefficients for {} blocks", value.len(), alg.num_blocks())));
    }
    let mut ms = Vec::with_capacity(value.len());
    for (a, (b, &n)) in value.iter().zip(alg.blocks()).enumerate() {
        let rows = array(b, "element block")?;
        if rows.iter().any(|r| r.as_array().map(|r| r.len()) != Some(rows.len())) {
            return Err(schema(format!("element block {a} is not a square coefficient array")));
        }
        if rows.len() != n {
            return Err(schema(format!("element block {a} is {}x{}, expected {n}x{n}", rows.len(), rows.len())));
        }
        ms.push(to_dense(b, n, n, "element block")?);
    }
    let x = alg.from_blocks(&ms).map_err(|e| schema(e.to_string()))?;
    Ok((alg, x))
}

pub fn weak_hopf(w: &WeakHopfData, h: Option<&Element>) -> Value {
    let d = w.dim();
    let mut delta = Vec::new();
    for i in 0..d {
        for r in 0..d * d {
            let c = w.delta[(r, i)];
            if c != ZERO {
                delta.push(json!([i, r / d, r % d, c.re, c.im]));
            }
        }
    }
    let involution = match &w.involution {
        Involution::Adjoint => json!("adjoint"),
        Involution::Antilinear(j) => dense(j),
    };
    let mut out = Map::new();
    out.insert("blocks".into(), blocks(&w.algebra));
    out.insert("delta".into(), Value::Array(delta));
    out.insert("epsilon".into(), coefficients(&w.epsilon));
    out.insert("antipode".into(), dense(&w.antipode));
    out.insert("involution".into(), involution);
    if let Some(h) = h {
        out.insert("H".into(), element(&w.algebra, h));
    }
    Value::Object(out)
}

pub fn to_weak_hopf(v: &Value) -> Result<(WeakHopfData, Option<Element>)> {
    let alg = to_algebra(field(v, "blocks", "weak-hopf")?, "weak-hopf blocks")?;
    let d = alg.dim();
    let mut delta = Matrix::zeros(d * d, d);
    for entry in array(field(v, "delta", "weak-hopf")?, "delta")? {
        match entry.as_array().map(|a| a.as_slice()) {
            Some([i, j, k, re, im]) => {
                let (i, j, k) = (index(i, "delta")?, index(j, "delta")?, index(k, "delta")?);
                if i >= d || j >= d || k >= d {
                    return Err(schema(format!("delta entry ({i}, {j}, {k}) out of range for dimension {d}")));
                }
                delta[(j * d + k, i)] += C64::new(real(re, "delta")?, real(im, "delta")?);
            }
            _ => return Err(schema("delta: entries must be [i, j, k, re, im]")),
        }
    }
    let epsilon = to_coefficients(field(v, "epsilon", "weak-hopf")?, d, "epsilon")?;
    let antipode = to_dense(field(v, "antipode", "weak-hopf")?, d, d, "antipode")?;
    let involution = match field(v, "involution", "weak-hopf")? {
        Value::String(s) if s == "adjoint" => Involution::Adjoint,
        Value::String(s) => return Err(schema(format!("involution: unknown value \"{s}\""))),
        m => Involution::Antilinear(to_dense(m, d, d, "involution")?),
    };
    let w = WeakHopfData::new(alg, delta, epsilon, antipode, involution).map_err(|e| schema(e.to_string()))?;
    let h = match v.get("H") {
        None | Some(Value::Null) => None,
        Some(hv) => {
            let (halg, h) = to_element(hv)?;
            if halg != w.algebra {
                return Err(schema("H: blocks differ from the algebra"));
            }
            Some(h)
        }
    };
    Ok((w, h))
}

fn embedding(s: &SubalgebraEmbedding) -> Value {
    let images: Vec<Value> = s.images().column_iter().map(|c| coefficients(&c.into_owned())).collect();
    json!({ "blocks": blocks(s.sub()), "images": images })
}

fn to_embedding(v: &Value, ambient: &MultiMatrixAlgebra, name: &str, tol: f64) -> Result<SubalgebraEmbedding> {
    let sub = to_algebra(field(v, "blocks", name)?, name)?;
    let imgs = array(field(v, "images", name)?, name)?;
    if imgs.len() != sub.dim() {
        return Err(schema(format!("{name}: {} images for a subalgebra of dimension {}", imgs.len(), sub.dim())));
    }
    let cols = imgs.iter().map(|c| to_coefficients(c, ambient.dim(), name)).collect::<Result<Vec<_>>>()?;
    let images = Matrix::from_columns(&cols);
    SubalgebraEmbedding::new(sub, ambient.clone(), images, tol)
        .map_err(|e| CliError::Invariant(format!("{name} is not a unital *-subalgebra: {e}")))
}

pub fn tower(t: &TowerData) -> Value {
    json!({
        "ambient": blocks(&t.ambient),
        "N": embedding(&t.sub_n),
        "M": embedding(&t.sub_m),
        "M1": embedding(&t.sub_m1),
        "e1": coefficients(&t.e1),
        "e2": coefficients(&t.e2),
        "tau": t.tau.weights(),
        "lambda": t.lambda,
    })
}

/// Decode a tower and run the invariant pre-checks: embeddings are
/// matrix-unit systems and e₁, e₂ are projections.
pub fn to_tower(v: &Value, tol: f64) -> Result<TowerData> {
    let ambient = to_algebra(field(v, "ambient", "tower")?, "ambient")?;
    let sub_n = to_embedding(field(v, "N", "tower")?, &ambient, "N", tol)?;
    let sub_m = to_embedding(field(v, "M", "tower")?, &ambient, "M", tol)?;
    let sub_m1 = to_embedding(field(v, "M1", "tower")?, &ambient, "M1", tol)?;
    let e1 = to_coefficients(field(v, "e1", "tower")?, ambient.dim(), "e1")?;
    let e2 = to_coefficients(field(v, "e2", "tower")?, ambient.dim(), "e2")?;
    let weights = array(field(v, "tau", "tower")?, "tau")?.iter().map(|w| real(w, "tau")).collect::<Result<Vec<_>>>()?;
    if weights.len() != ambient.num_blocks() {
        return Err(schema(format!("tau: {} weights for {} blocks", weights.len(), ambient.num_blocks())));
    }
    let lambda = real(field(v, "lambda", "tower")?, "lambda")?;
    for (name, e) in [("e1", &e1), ("e2", &e2)] {
        let idem = distance(ambient.mul(e, e).as_slice(), e.as_slice());
        let sa = distance(ambient.adjoint(e).as_slice(), e.as_slice());
        if idem.max(sa) > tol {
            return Err(CliError::Invariant(format!("{name} not a projection (residual {:.6e})", idem.max(sa))));
        }
    }
    let tau = TraceState::new(weights).map_err(|e| CliError::Invariant(format!("tau: {e}")))?;
    TowerData::new(ambient, sub_n, sub_m, sub_m1, e1, e2, tau, lambda).map_err(|e| CliError::Invariant(e.to_string()))
}

pub fn action(a: &ActionData) -> Value {
    let mut ops = Vec::new();
    for (i, op) in a.ops.iter().enumerate() {
        for c in 0..op.ncols() {
            for r in 0..op.nrows() {
                let z = op[(r, c)];
                if z != ZERO {
                    ops.push(json!([i, r, c, z.re, z.im]));
                }
            }
        }
    }
    json!({ "hopf": weak_hopf(&a.hopf, None), "carrier": blocks(&a.carrier), "operators": ops })
}

/// The crossed product as the algebra it is isomorphic to, with the basis
/// classes [x ⊗ b] and θ as a sparse matrix from classes to matrix units.
pub fn crossed_product(cp: &CrossedProduct, theta: &ThetaMap, target: &MultiMatrixAlgebra) -> Value {
    let basis: Vec<Value> = cp
        .classes
        .iter()
        .map(|c| json!({ "summand": c.summand, "carrier_index": c.carrier_index, "hopf_index": c.hopf_index }))
        .collect();
    let mut entries = Vec::new();
    for c in 0..theta.matrix.ncols() {
        for r in 0..theta.matrix.nrows() {
            let z = theta.matrix[(r, c)];
            if z.norm() > 1e-15 {
                entries.push(json!([r, c, z.re, z.im]));
            }
        }
    }
    json!({
        "blocks": blocks(target),
        "dim": cp.dim(),
        "basis": basis,
        "theta": entries,
        "action": action(&cp.action),
    })
}

pub fn group(g: &FiniteGroup) -> Value {
    json!({ "name": g.name, "table": g.table() })
}

pub fn to_group(v: &Value) -> Result<FiniteGroup> {
    let name = field(v, "name", "group")?.as_str().ok_or_else(|| schema("group name: expected a string"))?;
    let rows = array(field(v, "table", "group")?, "group table")?;
    let table = rows
        .iter()
        .map(|r| array(r, "group table")?.iter().map(|x| index(x, "group table")).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    FiniteGroup::from_table(name, table).map_err(|e| CliError::Invariant(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use weak_hopf_core::pair_groupoid;

    #[test]
    fn weak_hopf_round_trip() {
        let w = pair_groupoid(2).unwrap();
        let v = weak_hopf(&w, None);
        let (back, h) = to_weak_hopf(&v).unwrap();
        assert!(h.is_none());
        assert_eq!(back.delta, w.delta);
        assert_eq!(back.antipode, w.antipode);
        assert_eq!(weak_hopf(&back, None), v);
    }

    #[test]
    fn non_square_block_is_a_schema_error() {
        let v = json!({ "blocks": [2], "value": [[[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0]]]] });
        assert!(matches!(to_element(&v), Err(CliError::Schema(_))));
    }

    #[test]
    fn complex_needs_two_parts() {
        assert!(to_complex(&json!([1.0]), "z").is_err());
        assert_eq!(to_complex(&json!([1.5, -2.0]), "z").unwrap(), C64::new(1.5, -2.0));
    }
}
