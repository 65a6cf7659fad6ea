//! The crossed product M ⋊ B = M ⊗_{B_t} B with
//! [x⊗b][y⊗c] = [x(b₁ ▷ y) ⊗ b₂c] and [x⊗b]* = [(b₁* ▷ x*) ⊗ b₂*].
//!
//! With matrix units u^α_ij of B_t and m^α_ij = u^α_ij ▷ 1, the map
//! x⊗b ↦ Σ_{α,i} x m^α_i1 ⊗ u^α_1i b kills the balancing relators and
//! identifies the quotient with ⊕_α (M m^α_11) ⊗ (u^α_11 B).  Bases of the
//! two factors are chosen by column pivoting, so every basis class is
//! [x_a ⊗ u^α_11 b_q] for basis elements x_a of M and b_q of B.

use fd_star_algebra::linalg::{distance, max_abs, pivoted_columns, re, ZERO};
use fd_star_algebra::{decompose_subalgebra, Config, Element, Matrix, Report, Vector, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::action::{coproduct_terms, ActionData};
use crate::error::{ActionError, Result};

/// Largest number of (relator, class) pairs checked exhaustively.
const RELATOR_BUDGET: usize = 20_000;
/// Largest dimension whose triples are all checked for associativity.
const TRIPLE_BUDGET: usize = 30;
const SAMPLES: usize = 24;

/// Provenance of a basis class [x_a ⊗ u^α_11 b_q].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BasisClass {
    pub summand: usize,
    pub carrier_index: usize,
    pub hopf_index: usize,
}

#[derive(Clone, Debug)]
struct Summand {
    /// (u^α_i1 ▷ 1, u^α_i1, u^α_1i) for i = 1..n_α
    units: Vec<(Element, Element, Element)>,
    /// coordinates on M m^α_11 of x m^α_i1, as matrices of x
    carrier_maps: Vec<Matrix>,
    /// coordinates on u^α_11 B of u^α_1i b, as matrices of b
    hopf_maps: Vec<Matrix>,
    rows: usize,
    cols: usize,
    offset: usize,
}

#[derive(Clone, Debug)]
pub struct CrossedProduct {
    pub action: ActionData,
    pub classes: Vec<BasisClass>,
    reps: Vec<(Element, Element)>,
    rep_coproducts: Vec<Vec<(usize, usize, C64)>>,
    summands: Vec<Summand>,
    star_ops: Vec<Matrix>,
    star_basis: Vec<Element>,
    pub report: Report,
}

/// Left inverse (P*P)⁻¹P* of a matrix with independent columns.
fn left_inverse(p: &Matrix) -> Result<Matrix> {
    let g = p.adjoint() * p;
    let inv = g
        .try_inverse()
        .ok_or_else(|| ActionError::Algebra(fd_star_algebra::AlgebraError::Numerical("singular pivot block".into())))?;
    Ok(inv * p.adjoint())
}

/// m·v, skipping the zero entries of v.
pub(crate) fn sparse_mul(m: &Matrix, v: &Element) -> Element {
    let mut out = Element::zeros(m.nrows());
    for (t, &vt) in v.iter().enumerate() {
        if vt != ZERO {
            out.axpy(vt, &m.column(t), re(1.0));
        }
    }
    out
}

fn vdist(a: &Vector, b: &Vector) -> f64 {
    distance(a.as_slice(), b.as_slice())
}

impl CrossedProduct {
    pub fn dim(&self) -> usize {
        self.classes.len()
    }

    pub fn basis(&self, k: usize) -> Vector {
        let mut v = Vector::zeros(self.dim());
        v[k] = re(1.0);
        v
    }

    /// Representative (x, b) of the k-th basis class.
    pub fn representative(&self, k: usize) -> (&Element, &Element) {
        (&self.reps[k].0, &self.reps[k].1)
    }

    /// Coordinates of the class [x ⊗ b].
    pub fn class_of(&self, x: &Element, b: &Element) -> Vector {
        let mut out = Vector::zeros(self.dim());
        self.add_class(&mut out, x, b, re(1.0));
        out
    }

    /// out += coef · [x ⊗ b]
    fn add_class(&self, out: &mut Vector, x: &Element, b: &Element, coef: C64) {
        for s in &self.summands {
            for (cm, ch) in s.carrier_maps.iter().zip(&s.hopf_maps) {
                let u = sparse_mul(cm, x);
                let v = sparse_mul(ch, b);
                for p in 0..s.rows {
                    if u[p] == ZERO {
                        continue;
                    }
                    let up = u[p] * coef;
                    for q in 0..s.cols {
                        out[s.offset + p * s.cols + q] += up * v[q];
                    }
                }
            }
        }
    }

    pub fn unit(&self) -> Vector {
        self.class_of(&self.action.carrier.unit(), &self.action.hopf.unit())
    }

    /// [x ⊗ 1]
    pub fn embed_carrier(&self, x: &Element) -> Vector {
        self.class_of(x, &self.action.hopf.unit())
    }

    /// [1 ⊗ b]
    pub fn embed_hopf(&self, b: &Element) -> Vector {
        self.class_of(&self.action.carrier.unit(), b)
    }

    fn product_terms(&self, x: &Element, terms: &[(usize, usize, C64)], y: &Element, c: &Element) -> Vector {
        let a = &self.action;
        let (alg, w) = (&a.carrier, &a.hopf);
        let mut out = Vector::zeros(self.dim());
        // group by the first leg so that each x(b₁ ▷ y) is formed once
        let mut j1s: Vec<usize> = terms.iter().map(|t| t.0).collect();
        j1s.sort_unstable();
        j1s.dedup();
        let mut bc_cache: Vec<Option<Element>> = vec![None; w.dim()];
        for j1 in j1s {
            let left = alg.mul(x, &sparse_mul(&a.ops[j1], y));
            let mut right = w.algebra.zero();
            for &(k1, j2, coef) in terms {
                if k1 != j1 {
                    continue;
                }
                let bc = bc_cache[j2].get_or_insert_with(|| w.mul(&w.algebra.basis(j2), c));
                right += &*bc * coef;
            }
            self.add_class(&mut out, &left, &right, re(1.0));
        }
        out
    }

    /// [x ⊗ b][y ⊗ c]
    pub fn mul_pure(&self, x: &Element, b: &Element, y: &Element, c: &Element) -> Vector {
        let terms = coproduct_terms(&self.action.hopf, b);
        self.product_terms(x, &terms, y, c)
    }

    pub fn mul_basis(&self, k: usize, l: usize) -> Vector {
        let (x, _) = &self.reps[k];
        let (y, c) = &self.reps[l];
        self.product_terms(x, &self.rep_coproducts[k], y, c)
    }

    pub fn mul(&self, u: &Vector, v: &Vector) -> Vector {
        let mut out = Vector::zeros(self.dim());
        for (k, &uk) in u.iter().enumerate() {
            if uk == ZERO {
                continue;
            }
            for (l, &vl) in v.iter().enumerate() {
                if vl != ZERO {
                    out += self.mul_basis(k, l) * (uk * vl);
                }
            }
        }
        out
    }

    /// [x ⊗ b]*
    pub fn star_pure(&self, x: &Element, b: &Element) -> Vector {
        let a = &self.action;
        let xs = a.carrier.adjoint(x);
        let mut out = Vector::zeros(self.dim());
        for (j1, j2, c) in coproduct_terms(&a.hopf, b) {
            self.add_class(&mut out, &sparse_mul(&self.star_ops[j1], &xs), &self.star_basis[j2], c.conj());
        }
        out
    }

    pub fn star(&self, u: &Vector) -> Vector {
        let mut out = Vector::zeros(self.dim());
        for (k, &uk) in u.iter().enumerate() {
            if uk != ZERO {
                let (x, b) = &self.reps[k];
                out += self.star_pure(x, b) * uk.conj();
            }
        }
        out
    }

    /// Balancing relators x(z ▷ 1) ⊗ b − x ⊗ zb as pairs of pure tensors,
    /// for basis x, b and matrix units z.
    fn relators(&self) -> Vec<((Element, Element), (Element, Element))> {
        let a = &self.action;
        let (alg, w) = (&a.carrier, &a.hopf);
        let mut out = Vec::new();
        for s in &self.summands {
            let n = s.units.len();
            for i in 0..n {
                for j in 0..n {
                    // u_ij = u_i1 u_1j
                    let z = w.mul(&s.units[i].1, &s.units[j].2);
                    let zone = &a.operator(&z) * alg.unit();
                    for p in 0..alg.dim() {
                        let x = alg.basis(p);
                        let xz = alg.mul(&x, &zone);
                        for q in 0..w.dim() {
                            let b = w.algebra.basis(q);
                            out.push(((xz.clone(), b.clone()), (x.clone(), w.mul(&z, &b))));
                        }
                    }
                }
            }
        }
        out
    }
}

/// Build M ⋊ B for a verified action.  Fails if the class coordinates, the
/// product or the involution depend on representatives beyond `cfg.tol`.
pub fn crossed_product(a: &ActionData, cfg: &Config) -> Result<CrossedProduct> {
    let tol = cfg.tol;
    let w = &a.hopf;
    let alg = &a.carrier;
    let (db, dm) = (w.dim(), alg.dim());
    let bt = decompose_subalgebra(&w.algebra, &w.target_map(), cfg)?;

    let mut summands = Vec::new();
    let mut classes = Vec::new();
    let mut reps = Vec::new();
    let mut offset = 0;
    for (alpha, &n) in bt.sub().blocks().iter().enumerate() {
        let unit = |i: usize, j: usize| bt.image(bt.sub().index(alpha, i, j));
        let units: Vec<(Element, Element, Element)> =
            (0..n).map(|i| (a.act(&unit(i, 0), &alg.unit()), unit(i, 0), unit(0, i))).collect();
        let m11 = &units[0].0;
        let u11 = unit(0, 0);
        let rm = alg.right_mul_matrix(m11);
        let lu = w.algebra.left_mul_matrix(&u11);
        let xp = pivoted_columns(&rm, tol);
        let bp = pivoted_columns(&lu, tol);
        let px = Matrix::from_columns(&xp.iter().map(|&p| rm.column(p).into_owned()).collect::<Vec<_>>());
        let pb = Matrix::from_columns(&bp.iter().map(|&q| lu.column(q).into_owned()).collect::<Vec<_>>());
        let (lx, lb) = (left_inverse(&px)?, left_inverse(&pb)?);
        let carrier_maps = units.iter().map(|(m, _, _)| &lx * alg.right_mul_matrix(m)).collect();
        let hopf_maps = units.iter().map(|(_, _, u)| &lb * w.algebra.left_mul_matrix(u)).collect();
        for &p in &xp {
            for &q in &bp {
                classes.push(BasisClass { summand: alpha, carrier_index: p, hopf_index: q });
                reps.push((alg.basis(p), w.mul(&u11, &w.algebra.basis(q))));
            }
        }
        summands.push(Summand { units, carrier_maps, hopf_maps, rows: xp.len(), cols: bp.len(), offset });
        offset += xp.len() * bp.len();
    }
    let rep_coproducts = reps.iter().map(|(_, b)| coproduct_terms(w, b)).collect();
    let star_basis: Vec<Element> = (0..db).map(|j| w.star(&w.algebra.basis(j))).collect();
    let star_ops = star_basis.iter().map(|s| a.operator(s)).collect();
    let mut cp = CrossedProduct {
        action: a.clone(),
        classes,
        reps,
        rep_coproducts,
        summands,
        star_ops,
        star_basis,
        report: Report::new("crossed product"),
    };
    let dim = cp.dim();
    let mut r = Report::new("crossed product");
    r.fact("dim M (x) B", dm * db);
    r.fact("dim B_t", bt.sub().dim());
    r.fact("dim crossed product", dim);

    let unit_coords = (0..dim).map(|k| vdist(&cp.class_of(&cp.reps[k].0, &cp.reps[k].1), &cp.basis(k))).fold(0.0, f64::max);
    r.check("representatives have unit coordinates", "balanced tensor product", unit_coords, tol);

    let relators = cp.relators();
    r.fact("balancing relators", relators.len());
    let mut kill = 0.0_f64;
    for ((x1, b1), (x2, b2)) in &relators {
        kill = kill.max(vdist(&cp.class_of(x1, b1), &cp.class_of(x2, b2)));
    }
    r.check("class coordinates vanish on balancing relators", "balanced tensor product", kill, tol);

    // representative independence of the product and the involution
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xC205);
    let chosen: Vec<usize> = if relators.len() * dim <= RELATOR_BUDGET {
        (0..relators.len()).collect()
    } else {
        (0..4).map(|_| rng.random_range(0..relators.len())).collect()
    };
    r.fact("relators multiplied against every class", chosen.len());
    let (mut prod_dep, mut star_dep) = (0.0_f64, 0.0_f64);
    for &i in &chosen {
        let ((x1, b1), (x2, b2)) = &relators[i];
        for (y, c) in &cp.reps {
            let left = cp.mul_pure(x1, b1, y, c) - cp.mul_pure(x2, b2, y, c);
            let right = cp.mul_pure(y, c, x1, b1) - cp.mul_pure(y, c, x2, b2);
            prod_dep = prod_dep.max(max_abs(left.as_slice())).max(max_abs(right.as_slice()));
        }
        star_dep = star_dep.max(max_abs((cp.star_pure(x1, b1) - cp.star_pure(x2, b2)).as_slice()));
    }
    r.check("product well defined on classes", "crossed product", prod_dep, tol);
    r.check("involution well defined on classes", "crossed product", star_dep, tol);
    for name in ["class coordinates vanish on balancing relators", "product well defined on classes", "involution well defined on classes"] {
        let c = r.get(name).expect("row recorded");
        if !c.passed {
            return Err(ActionError::NotWellDefined { name: name.into(), residual: c.residual });
        }
    }

    let one = cp.unit();
    let mut unital = 0.0_f64;
    let mut involutive = 0.0_f64;
    for k in 0..dim {
        let e = cp.basis(k);
        unital = unital.max(vdist(&cp.mul(&one, &e), &e)).max(vdist(&cp.mul(&e, &one), &e));
        involutive = involutive.max(vdist(&cp.star(&cp.star(&e)), &e));
    }
    r.check("[1 (x) 1] is a two-sided unit", "crossed product", unital, tol);
    r.check("involution is involutive", "crossed product", involutive, tol);

    let triples: Vec<(Vector, Vector, Vector)> = if dim <= TRIPLE_BUDGET {
        let mut t = Vec::new();
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    t.push((cp.basis(i), cp.basis(j), cp.basis(k)));
                }
            }
        }
        t
    } else {
        (0..SAMPLES)
            .map(|_| {
                let mut pick = || cp.basis(rng.random_range(0..dim));
                (pick(), pick(), pick())
            })
            .collect()
    };
    r.fact("associativity triples", triples.len());
    let mut assoc = 0.0_f64;
    let mut anti = 0.0_f64;
    for (u, v, x) in &triples {
        let uv = cp.mul(u, v);
        assoc = assoc.max(vdist(&cp.mul(&uv, x), &cp.mul(u, &cp.mul(v, x))));
        anti = anti.max(vdist(&cp.star(&uv), &cp.mul(&cp.star(v), &cp.star(u))));
    }
    r.check("product associative", "crossed product", assoc, tol);
    r.check("involution anti-multiplicative", "crossed product", anti, tol);

    // embeddings of M and B_s
    let mut hom = 0.0_f64;
    for p in 0..dm {
        let x = alg.basis(p);
        let ex = cp.embed_carrier(&x);
        hom = hom.max(vdist(&cp.star(&ex), &cp.embed_carrier(&alg.adjoint(&x))));
        for q in 0..dm {
            let y = alg.basis(q);
            hom = hom.max(vdist(&cp.mul(&ex, &cp.embed_carrier(&y)), &cp.embed_carrier(&alg.mul(&x, &y))));
        }
    }
    hom = hom.max(vdist(&cp.embed_carrier(&alg.unit()), &one));
    r.check("x -> [x (x) 1] is a unital *-homomorphism", "crossed product", hom, tol);

    let es = w.source_map();
    let zs: Vec<Element> = es.column_iter().map(|c| c.into_owned()).filter(|z| max_abs(z.as_slice()) > 1e-12).collect();
    let (mut bs_hom, mut bs_comm) = (0.0_f64, 0.0_f64);
    for z in &zs {
        let ez = cp.embed_hopf(z);
        bs_hom = bs_hom.max(vdist(&cp.star(&ez), &cp.embed_hopf(&w.star(z))));
        for z2 in &zs {
            bs_hom = bs_hom.max(vdist(&cp.mul(&ez, &cp.embed_hopf(z2)), &cp.embed_hopf(&w.mul(z, z2))));
        }
        for p in 0..dm {
            let x = alg.basis(p);
            let ex = cp.embed_carrier(&x);
            let xz = cp.class_of(&x, z);
            bs_comm = bs_comm.max(vdist(&cp.mul(&ez, &ex), &xz)).max(vdist(&cp.mul(&ex, &ez), &xz));
        }
    }
    r.check("z -> [1 (x) z] is a *-homomorphism on B_s", "crossed product", bs_hom, tol);
    r.check("[1 (x) z][x (x) 1] = [x (x) z] = [x (x) 1][1 (x) z] for z in B_s", "crossed product", bs_comm, tol);

    cp.report = r;
    Ok(cp)
}
