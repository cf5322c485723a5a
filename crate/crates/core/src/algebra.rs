//! Finite-dimensional algebras given by structure constants.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{self, float, CMat, CycMatrix, C64};
use crate::scalars::{CycVec, Cyclotomic};

/// An associative algebra over Q(ζ_N) with basis e_0..e_{d−1}.
///
/// `consts[(i*d + j)*d + k]` is the coefficient of e_k in e_i·e_j.
#[derive(Clone, Debug)]
pub struct ScAlgebra {
    dim: usize,
    labels: Vec<usize>,
    consts: CycVec,
    unit: CycVec,
}

impl ScAlgebra {
    /// Builds the algebra and solves the unit-law system for its unit.
    pub fn new(labels: Vec<usize>, consts: CycVec) -> Result<Self> {
        let dim = labels.len();
        if consts.len() != dim * dim * dim {
            return Err(Error::Algebra(format!(
                "{} structure constants for dimension {dim}",
                consts.len()
            )));
        }
        let unit = solve_unit(dim, &consts)?;
        Ok(ScAlgebra {
            dim,
            labels,
            consts,
            unit,
        })
    }

    /// Builds the algebra with a supplied unit, unchecked until audited.
    pub fn with_unit(labels: Vec<usize>, consts: CycVec, unit: CycVec) -> Result<Self> {
        let dim = labels.len();
        if consts.len() != dim * dim * dim || unit.len() != dim {
            return Err(Error::Algebra("structure constant shape mismatch".into()));
        }
        Ok(ScAlgebra {
            dim,
            labels,
            consts,
            unit,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.consts.order()
    }

    /// Group elements (or orbit identifiers) labelling the basis.
    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn consts(&self) -> &CycVec {
        &self.consts
    }

    pub fn unit(&self) -> &CycVec {
        &self.unit
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dim + j) * self.dim + k
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> Cyclotomic {
        self.consts.get(self.idx(i, j, k))
    }

    /// Exact check of (e_i e_j) e_k = e_i (e_j e_k) for all basis triples.
    pub fn is_associative(&self) -> bool {
        let d = self.dim;
        let c = &self.consts;
        let nz: Vec<bool> = (0..c.len()).map(|i| !c.is_zero_at(i)).collect();
        (0..d).into_par_iter().all(|i| {
            let mut acc = c.acc();
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        for m in 0..d {
                            let ij = (i * d + j) * d + m;
                            let mk = (m * d + k) * d + l;
                            if nz[ij] && nz[mk] {
                                acc.add_product(c.slot(ij), c.slot(mk));
                            }
                            let jk = (j * d + k) * d + m;
                            let im = (i * d + m) * d + l;
                            if nz[jk] && nz[im] {
                                acc.sub_product(c.slot(jk), c.slot(im));
                            }
                        }
                        if !acc.is_zero() {
                            return false;
                        }
                        acc.clear();
                    }
                }
            }
            true
        })
    }

    /// Exact check that `unit` is a two-sided identity.
    pub fn unit_law_holds(&self) -> bool {
        let d = self.dim;
        let c = &self.consts;
        let u = &self.unit;
        let mut acc = c.acc();
        let mut out = Vec::with_capacity(d * self.order());
        for side in 0..2 {
            for j in 0..d {
                out.clear();
                for k in 0..d {
                    for i in 0..d {
                        let ix = if side == 0 { self.idx(i, j, k) } else { self.idx(j, i, k) };
                        acc.add_product(u.slot(i), c.slot(ix));
                    }
                    acc.drain_into(&mut out);
                }
                let den = u.den() as i128 * c.den() as i128;
                for k in 0..d {
                    let s = &out[k * self.order()..(k + 1) * self.order()];
                    let want = if j == k { den } else { 0 };
                    if s[0] != want || s[1..].iter().any(|&x| x != 0) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Exact basis of the center (nullspace of the commutator system).
    pub fn center_basis(&self) -> Result<Vec<Vec<Cyclotomic>>> {
        let d = self.dim;
        let order = self.order();
        // row (j, k), column i: c_ijk − c_jik
        let mut wide = Vec::with_capacity(d * d * d * order);
        for j in 0..d {
            for k in 0..d {
                for i in 0..d {
                    let a = self.consts.slot(self.idx(i, j, k));
                    let b = self.consts.slot(self.idx(j, i, k));
                    wide.extend(a.iter().zip(b).map(|(&x, &y)| x as i128 - y as i128));
                }
            }
        }
        let m = CycMatrix::new(d * d, d, CycVec::from_wide(order, wide, self.consts.den() as i128)?)?;
        linalg::nullspace(&m)
    }

    /// Whether e_i ↦ e_{perm[i]} is an algebra automorphism.
    pub fn is_automorphism(&self, perm: &[usize]) -> bool {
        let d = self.dim;
        (0..d).all(|i| {
            (0..d).all(|j| {
                (0..d).all(|k| {
                    self.consts
                        .entry_eq(self.idx(i, j, k), &self.consts, self.idx(perm[i], perm[j], perm[k]))
                })
            })
        }) && (0..d).all(|i| self.unit.entry_eq(i, &self.unit, perm[i]))
    }

    /// Whether `other` has the same structure constants after e_i ↦ e'_{map[i]}.
    pub fn isomorphic_via(&self, other: &ScAlgebra, map: &[usize]) -> bool {
        let d = self.dim;
        d == other.dim
            && (0..d).all(|i| {
                (0..d).all(|j| {
                    (0..d).all(|k| {
                        self.consts
                            .entry_eq(self.idx(i, j, k), &other.consts, other.idx(map[i], map[j], map[k]))
                    })
                })
            })
    }

    pub fn is_commutative(&self) -> bool {
        let d = self.dim;
        (0..d).all(|i| {
            (0..i).all(|j| {
                (0..d).all(|k| self.consts.entry_eq(self.idx(i, j, k), &self.consts, self.idx(j, i, k)))
            })
        })
    }

    /// Complex embedding ζ_N ↦ exp(2πi/N).
    pub fn to_float(&self) -> FloatAlgebra {
        FloatAlgebra {
            dim: self.dim,
            consts: self.consts.embed(),
            unit: self.unit.embed(),
        }
    }
}

/// Solves Σ_i u_i c_{ijk} = δ_jk and Σ_i u_i c_{jik} = δ_jk.
fn solve_unit(d: usize, consts: &CycVec) -> Result<CycVec> {
    let order = consts.order();
    let mut idx = Vec::with_capacity(2 * d * d * d);
    for side in 0..2 {
        for j in 0..d {
            for k in 0..d {
                for i in 0..d {
                    idx.push(if side == 0 { (i * d + j) * d + k } else { (j * d + i) * d + k });
                }
            }
        }
    }
    let a = CycMatrix::new(2 * d * d, d, consts.gather(&idx))?;
    let mut rhs = vec![0i128; 2 * d * d * order];
    for side in 0..2 {
        for j in 0..d {
            rhs[((side * d + j) * d + j) * order] = 1;
        }
    }
    let b = CycMatrix::new(2 * d * d, 1, CycVec::from_wide(order, rhs, 1)?)?;
    match linalg::solve(&a, &b) {
        Ok(Some(x)) => Ok(x.data().clone()),
        Ok(None) => Err(Error::Algebra("algebra has no unit".into())),
        Err(Error::Singular) => Err(Error::Algebra("unit-law system is underdetermined".into())),
        Err(e) => Err(e),
    }
}

/// An algebra with complex floating-point structure constants.
#[derive(Clone, Debug)]
pub struct FloatAlgebra {
    dim: usize,
    consts: Vec<C64>,
    unit: Vec<C64>,
}

impl FloatAlgebra {
    pub fn new(dim: usize, consts: Vec<C64>, unit: Vec<C64>) -> Result<Self> {
        if consts.len() != dim * dim * dim || unit.len() != dim {
            return Err(Error::Algebra("structure constant shape mismatch".into()));
        }
        Ok(FloatAlgebra { dim, consts, unit })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn consts(&self) -> &[C64] {
        &self.consts
    }

    pub fn unit(&self) -> &[C64] {
        &self.unit
    }

    #[inline]
    pub fn c(&self, i: usize, j: usize, k: usize) -> C64 {
        self.consts[(i * self.dim + j) * self.dim + k]
    }

    /// Matrix of y ↦ x·y.
    pub fn left_mult(&self, x: &[C64]) -> CMat {
        let d = self.dim;
        let mut m = CMat::zeros(d, d);
        for (i, &xi) in x.iter().enumerate() {
            if xi == C64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..d {
                for k in 0..d {
                    m[(k, j)] += xi * self.c(i, j, k);
                }
            }
        }
        m
    }

    /// Matrix of y ↦ y·x.
    pub fn right_mult(&self, x: &[C64]) -> CMat {
        let d = self.dim;
        let mut m = CMat::zeros(d, d);
        for (j, &xj) in x.iter().enumerate() {
            if xj == C64::new(0.0, 0.0) {
                continue;
            }
            for i in 0..d {
                for k in 0..d {
                    m[(k, i)] += xj * self.c(i, j, k);
                }
            }
        }
        m
    }

    pub fn product(&self, x: &[C64], y: &[C64]) -> Vec<C64> {
        let d = self.dim;
        let mut out = vec![C64::new(0.0, 0.0); d];
        for (i, &xi) in x.iter().enumerate() {
            for (j, &yj) in y.iter().enumerate() {
                let s = xi * yj;
                if s == C64::new(0.0, 0.0) {
                    continue;
                }
                for (k, o) in out.iter_mut().enumerate() {
                    *o += s * self.c(i, j, k);
                }
            }
        }
        out
    }

    /// Trace of left multiplication by x.
    pub fn left_trace(&self, x: &[C64]) -> C64 {
        let d = self.dim;
        x.iter()
            .enumerate()
            .map(|(i, &xi)| xi * (0..d).map(|j| self.c(i, j, j)).sum::<C64>())
            .sum()
    }

    /// Largest associativity or unit-law defect.
    pub fn audit_residual(&self) -> f64 {
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let mut s = C64::new(0.0, 0.0);
                        for m in 0..d {
                            s += self.c(i, j, m) * self.c(m, k, l) - self.c(j, k, m) * self.c(i, m, l);
                        }
                        worst = worst.max(s.norm());
                    }
                }
            }
        }
        for j in 0..d {
            let e: Vec<C64> = (0..d).map(|k| C64::new((j == k) as u8 as f64, 0.0)).collect();
            let l = self.product(&self.unit, &e);
            let r = self.product(&e, &self.unit);
            for k in 0..d {
                worst = worst.max((l[k] - e[k]).norm()).max((r[k] - e[k]).norm());
            }
        }
        worst
    }

    /// Numerical basis of the center, as columns.
    pub fn center_basis(&self, rel_tol: f64) -> CMat {
        let d = self.dim;
        let mut m = CMat::zeros(d * d, d);
        for j in 0..d {
            for k in 0..d {
                for i in 0..d {
                    m[(j * d + k, i)] = self.c(i, j, k) - self.c(j, i, k);
                }
            }
        }
        float::null_space(&m, rel_tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Functions on n points: e_i e_j = δ_ij e_i.
    pub(crate) fn function_algebra(n: usize) -> ScAlgebra {
        let mut v = vec![Cyclotomic::zero(1).unwrap(); n * n * n];
        for i in 0..n {
            v[(i * n + i) * n + i] = Cyclotomic::one(1).unwrap();
        }
        ScAlgebra::new((0..n).collect(), CycVec::from_cyclotomics(1, &v).unwrap()).unwrap()
    }

    #[test]
    fn function_algebra_unit_and_center() {
        let a = function_algebra(5);
        assert!(a.is_associative() && a.unit_law_holds() && a.is_commutative());
        assert!((0..5).all(|i| a.unit().entry_is_rational(i, 1, 1)));
        assert_eq!(a.center_basis().unwrap().len(), 5);
    }

    #[test]
    fn algebra_without_unit_is_rejected() {
        let v = vec![Cyclotomic::zero(1).unwrap(); 8];
        let err = ScAlgebra::new(vec![0, 1], CycVec::from_cyclotomics(1, &v).unwrap()).unwrap_err();
        assert!(matches!(err, Error::Algebra(_)));
    }
}
