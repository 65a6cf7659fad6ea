//! Wedderburn decomposition of a *-subalgebra given by a spanning set.
//!
//! A random self-adjoint element h of the subalgebra S has, almost surely,
//! simple spectrum on each simple summand and distinct spectra across
//! summands, so its spectral projections are a complete family of minimal
//! projections of S.  Two of them lie in the same summand iff q_i s q_j ≠ 0
//! for a random s ∈ S; off-diagonal units come from normalizing q_1 s q_k.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Element, MultiMatrixAlgebra};
use crate::embedding::{matrix_unit_defect, SubalgebraEmbedding};
use crate::error::{AlgebraError, Result};
use crate::linalg::{self, distance, max_abs, re, Matrix, C64};
use crate::Config;

const ATTEMPTS: u64 = 8;

/// Decompose span(`spanning`) ⊂ `ambient` into matrix blocks.
///
/// The span must be closed under products and the ambient adjoint and
/// contain the unit; otherwise `NotSubalgebra` is returned.
pub fn decompose_subalgebra(ambient: &MultiMatrixAlgebra, spanning: &Matrix, cfg: &Config) -> Result<SubalgebraEmbedding> {
    let q = linalg::orthonormal_basis(spanning, 1e-10);
    let r = q.ncols();
    if r == 0 {
        return Err(AlgebraError::NotSubalgebra("empty span".into()));
    }
    let proj = |x: &Element| -> Element { &q * (q.adjoint() * x) };
    let closure = closure_defect(ambient, &q, &proj);
    if closure > cfg.tol.max(1e-10) * 10.0 {
        return Err(AlgebraError::NotSubalgebra(format!("span not closed (defect {closure:.3e})")));
    }
    let unit = ambient.unit();
    if distance(proj(&unit).as_slice(), unit.as_slice()) > 1e-8 {
        return Err(AlgebraError::NotSubalgebra("span does not contain the unit".into()));
    }
    let mut last = String::new();
    for attempt in 0..ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(0x9E37_79B9).wrapping_add(attempt));
        match try_decompose(ambient, &q, &proj, &mut rng) {
            Ok(e) => return Ok(e),
            Err(e) => last = e,
        }
    }
    Err(AlgebraError::Decomposition(last))
}

fn closure_defect(ambient: &MultiMatrixAlgebra, q: &Matrix, proj: &dyn Fn(&Element) -> Element) -> f64 {
    let r = q.ncols();
    let mut worst = 0.0_f64;
    for i in 0..r {
        let x = q.column(i).into_owned();
        let xa = ambient.adjoint(&x);
        worst = worst.max(distance(proj(&xa).as_slice(), xa.as_slice()));
        for j in 0..r {
            let y = q.column(j).into_owned();
            let p = ambient.mul(&x, &y);
            worst = worst.max(distance(proj(&p).as_slice(), p.as_slice()));
        }
    }
    worst
}

fn random_element(q: &Matrix, rng: &mut ChaCha8Rng) -> Element {
    let c = linalg::Vector::from_fn(q.ncols(), |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    q * c
}

fn try_decompose(
    ambient: &MultiMatrixAlgebra,
    q: &Matrix,
    proj: &dyn Fn(&Element) -> Element,
    rng: &mut ChaCha8Rng,
) -> std::result::Result<SubalgebraEmbedding, String> {
    let r = q.ncols();
    let y = random_element(q, rng);
    let h = proj(&(&y + ambient.adjoint(&y)));
    let s = random_element(q, rng);

    // spectrum of h across all ambient blocks
    let mut spectrum: Vec<(f64, usize, Element)> = Vec::new();
    for beta in 0..ambient.num_blocks() {
        let (vals, vecs) = linalg::hermitian_eigen(&ambient.block(&h, beta));
        for (c, v) in vals.iter().enumerate() {
            let col = vecs.column(c);
            let mut blocks: Vec<Matrix> = ambient.blocks().iter().map(|&m| Matrix::zeros(m, m)).collect();
            blocks[beta] = col * col.adjoint();
            spectrum.push((*v, beta, ambient.from_blocks(&blocks).map_err(|e| e.to_string())?));
        }
    }
    spectrum.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let scale = spectrum.iter().fold(1.0_f64, |m, s| m.max(s.0.abs()));
    let gap = 1e-6 * scale;
    let mut clusters: Vec<(f64, Element)> = Vec::new();
    for (v, _, p) in spectrum {
        match clusters.last_mut() {
            Some((c, acc)) if (v - *c).abs() <= gap => *acc += p,
            _ => clusters.push((v, p)),
        }
    }
    // the minimal gap between distinct eigenvalues must be comfortably larger
    // than the clustering threshold
    for w in clusters.windows(2) {
        if w[1].0 - w[0].0 < 1e-4 * scale {
            return Err("eigenvalues too close".into());
        }
    }
    let mut minimal: Vec<Element> = Vec::with_capacity(clusters.len());
    for (_, p) in clusters {
        let mut p = proj(&p);
        for _ in 0..3 {
            let p2 = ambient.mul(&p, &p);
            let p3 = ambient.mul(&p2, &p);
            p = proj(&(p2 * re(3.0) - p3 * re(2.0)));
            p = (&p + ambient.adjoint(&p)) * re(0.5);
        }
        minimal.push(p);
    }

    // group minimal projections into simple summands
    let n = minimal.len();
    let sq: Vec<Element> = minimal.iter().map(|p| ambient.mul(&s, p)).collect();
    let mut block_of = vec![usize::MAX; n];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        if block_of[i] != usize::MAX {
            continue;
        }
        let g = groups.len();
        block_of[i] = g;
        let mut members = vec![i];
        for j in i + 1..n {
            if block_of[j] != usize::MAX {
                continue;
            }
            let link = ambient.mul(&minimal[i], &sq[j]);
            if max_abs(link.as_slice()) > 1e-7 {
                block_of[j] = g;
                members.push(j);
            }
        }
        groups.push(members);
    }
    let sizes: Vec<usize> = groups.iter().map(|g| g.len()).collect();
    if sizes.iter().map(|m| m * m).sum::<usize>() != r {
        return Err(format!("block sizes {sizes:?} do not account for dimension {r}"));
    }

    // block order: size, then position of the first projection in the spectrum
    let mut order: Vec<usize> = (0..groups.len()).collect();
    order.sort_by_key(|&g| (groups[g].len(), groups[g][0]));
    let sub = MultiMatrixAlgebra::new(order.iter().map(|&g| groups[g].len()).collect()).map_err(|e| e.to_string())?;
    let mut images = Matrix::zeros(ambient.dim(), sub.dim());
    for (alpha, &g) in order.iter().enumerate() {
        let members = &groups[g];
        let m = members.len();
        let q1 = &minimal[members[0]];
        let mut row: Vec<Element> = vec![q1.clone()];
        for &k in &members[1..] {
            let x = ambient.mul(q1, &sq[k]);
            let xx = ambient.mul(&x, &ambient.adjoint(&x));
            let c = (q1.dotc(&xx) / q1.dotc(q1)).re;
            if c <= 1e-14 {
                return Err("vanishing off-diagonal unit".into());
            }
            row.push(x * re(1.0 / c.sqrt()));
        }
        for k in 0..m {
            let fk1 = ambient.adjoint(&row[k]);
            for l in 0..m {
                let fkl = if k == 0 { row[l].clone() } else { ambient.mul(&fk1, &row[l]) };
                images.set_column(sub.index(alpha, k, l), &fkl);
            }
        }
    }
    let defect = matrix_unit_defect(&sub, ambient, &images);
    if defect > 1e-9 {
        return Err(format!("matrix-unit defect {defect:.3e}"));
    }
    SubalgebraEmbedding::new(sub, ambient.clone(), images, 1e-9).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::diagonal_subalgebra;
    use crate::linalg::ONE;

    #[test]
    fn decomposes_block_diagonal_subalgebra() {
        // M_2 ⊕ ℂ sitting block-diagonally inside M_3
        let amb = MultiMatrixAlgebra::full(3);
        let mut span = Matrix::zeros(9, 5);
        let mut c = 0;
        for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1), (2, 2)] {
            span[(amb.index(0, i, j), c)] = ONE;
            c += 1;
        }
        let e = decompose_subalgebra(&amb, &span, &Config::default()).unwrap();
        assert_eq!(e.sub().blocks(), &[1, 2]);
    }

    #[test]
    fn decomposes_diagonal() {
        let amb = MultiMatrixAlgebra::new(vec![2, 1]).unwrap();
        let d = diagonal_subalgebra(&amb);
        let e = decompose_subalgebra(&amb, d.images(), &Config::default()).unwrap();
        assert_eq!(e.sub().blocks(), &[1, 1, 1]);
    }

    #[test]
    fn rejects_non_algebra() {
        let amb = MultiMatrixAlgebra::full(2);
        let mut span = Matrix::zeros(4, 2);
        span.set_column(0, &amb.unit());
        span[(amb.index(0, 0, 1), 1)] = ONE;
        assert!(decompose_subalgebra(&amb, &span, &Config::default()).is_err());
    }
}
