use fd_star_algebra::linalg::{re, ONE};
use fd_star_algebra::{Config, Matrix, MultiMatrixAlgebra, Vector};

use crate::data::{Involution, WeakHopfData};
use crate::dual::dual_algebra;
use crate::error::{HopfError, Result};

/// A finite group as a multiplication table on 0..n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    pub name: String,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

impl FiniteGroup {
    /// Validates closure, associativity, identity and inverses.
    pub fn from_table(name: &str, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(HopfError::InvalidGroup("empty table".into()));
        }
        if table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(HopfError::InvalidGroup("table is not n x n over 0..n".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or_else(|| HopfError::InvalidGroup("no identity".into()))?;
        let mut inverses = vec![0; n];
        for g in 0..n {
            inverses[g] = (0..n)
                .find(|&h| table[g][h] == identity && table[h][g] == identity)
                .ok_or_else(|| HopfError::InvalidGroup(format!("element {g} has no inverse")))?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(HopfError::InvalidGroup(format!("not associative at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        Ok(FiniteGroup { name: name.into(), table, identity, inverses })
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(HopfError::InvalidGroup("order must be positive".into()));
        }
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(&format!("Z/{n}"), table)
    }

    /// Permutations of 0..n in lexicographic order, (στ)(i) = σ(τ(i)).
    pub fn symmetric(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(HopfError::InvalidGroup("degree must be positive".into()));
        }
        let mut perms: Vec<Vec<usize>> = Vec::new();
        let mut cur: Vec<usize> = (0..n).collect();
        loop {
            perms.push(cur.clone());
            // next permutation in lexicographic order
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else { break };
            let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).expect("exists");
            cur.swap(i, j);
            cur[i + 1..].reverse();
        }
        let index = |p: &Vec<usize>| perms.iter().position(|q| q == p).expect("closed");
        let table = perms
            .iter()
            .map(|s| perms.iter().map(|t| index(&t.iter().map(|&k| s[k]).collect())).collect())
            .collect();
        Self::from_table(&format!("S{n}"), table)
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverses[g]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.table[a][b] == self.table[b][a]))
    }
}

/// M_n with Δ(E_ij) = E_ij ⊗ E_ij, ε(E_ij) = 1, S(E_ij) = E_ji.
pub fn pair_groupoid(n: usize) -> Result<WeakHopfData> {
    if n == 0 {
        return Err(HopfError::Dimension("pair groupoid needs n >= 1".into()));
    }
    let alg = MultiMatrixAlgebra::full(n);
    let d = alg.dim();
    let mut delta = Matrix::zeros(d * d, d);
    let mut antipode = Matrix::zeros(d, d);
    for j in 0..d {
        delta[(j * d + j, j)] = ONE;
        antipode[(alg.adjoint_index(j), j)] = ONE;
    }
    let epsilon = Vector::from_element(d, ONE);
    WeakHopfData::new(alg, delta, epsilon, antipode, Involution::Adjoint)
}

/// ℂ^G with basis δ_g: Δ(δ_g) = Σ_{hk=g} δ_h ⊗ δ_k, ε(δ_g) = [g = e], S(δ_g) = δ_{g⁻¹}.
pub fn function_algebra(g: &FiniteGroup) -> Result<WeakHopfData> {
    let n = g.order();
    let alg = MultiMatrixAlgebra::diagonal(n);
    let mut delta = Matrix::zeros(n * n, n);
    for h in 0..n {
        for k in 0..n {
            delta[(h * n + k, g.mul(h, k))] = ONE;
        }
    }
    let mut epsilon = Vector::zeros(n);
    epsilon[g.identity()] = ONE;
    let mut antipode = Matrix::zeros(n, n);
    for x in 0..n {
        antipode[(g.inverse(x), x)] = ONE;
    }
    WeakHopfData::new(alg, delta, epsilon, antipode, Involution::Adjoint)
}

/// ℂ[G] presented in matrix units, with the group elements kept alongside.
#[derive(Clone, Debug)]
pub struct GroupAlgebra {
    pub data: WeakHopfData,
    pub group: FiniteGroup,
    /// Column g: the group element g in matrix-unit coordinates.
    pub elements: Matrix,
}

impl GroupAlgebra {
    pub fn element(&self, g: usize) -> Vector {
        self.elements.column(g).into_owned()
    }

    /// (1/|G|) Σ g, the Haar projection.
    pub fn average(&self) -> Vector {
        let n = self.group.order();
        (0..n).map(|g| self.element(g)).fold(Vector::zeros(self.data.dim()), |a, b| a + b) * re(1.0 / n as f64)
    }
}

/// ℂ[G] as the dual of ℂ^G; the dual basis element of δ_g is g.
pub fn group_algebra(g: &FiniteGroup, cfg: &Config) -> Result<GroupAlgebra> {
    let fun = function_algebra(g)?;
    let dual = dual_algebra(&fun, cfg)?;
    let pinv = dual
        .basis
        .clone()
        .try_inverse()
        .ok_or_else(|| HopfError::Dimension("singular basis".into()))?;
    Ok(GroupAlgebra { data: dual.data, group: g.clone(), elements: pinv })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_group_tables() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
        assert_eq!(s3.identity(), 0);
        assert!(FiniteGroup::cyclic(4).unwrap().is_abelian());
    }

    #[test]
    fn bad_tables_are_rejected() {
        assert!(FiniteGroup::from_table("x", vec![vec![0, 0], vec![0, 1]]).is_err());
        assert!(FiniteGroup::from_table("x", vec![vec![0, 1], vec![1, 1]]).is_err());
        assert!(FiniteGroup::from_table("x", vec![vec![0, 2], vec![1, 0]]).is_err());
    }

    #[test]
    fn group_elements_multiply() {
        let g = FiniteGroup::cyclic(3).unwrap();
        let ga = group_algebra(&g, &Config::default()).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                let p = ga.data.mul(&ga.element(a), &ga.element(b));
                let q = ga.element(g.mul(a, b));
                assert!((p - q).norm() < 1e-10);
            }
        }
    }
}
