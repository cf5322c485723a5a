//! Wedderburn block dimensions and irreducible representations of
//! semisimple algebras over C.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{FloatAlgebra, ScAlgebra};
use crate::error::{Error, Result};
use crate::linalg::float::{self, CMat, C64};

/// Relative singular-value cut for numerical kernels of exact-rank systems.
pub(crate) const KERNEL_CUT: f64 = 1e-7;

/// Matrix block sizes of a semisimple algebra.
#[derive(Clone, Debug)]
pub struct WedderburnSpectrum {
    /// Block sizes, ascending.
    pub dims: Vec<usize>,
    /// Largest deviation of a computed central idempotent from e² = e.
    pub idempotent_residual: f64,
    /// Primitive central idempotents, in the same order as `dims`.
    pub idempotents: Vec<Vec<C64>>,
}

/// Exact associativity and unit law.
pub fn algebra_audit(a: &ScAlgebra) -> bool {
    a.is_associative() && a.unit_law_holds()
}

/// Block sizes of an exact algebra: exact center, float spectral split.
pub fn wedderburn_dims(a: &ScAlgebra, seed: u64, tol: f64) -> Result<WedderburnSpectrum> {
    let center = a.center_basis()?;
    let d = a.dim();
    let mut z = CMat::zeros(d, center.len());
    for (c, v) in center.iter().enumerate() {
        for (r, x) in v.iter().enumerate() {
            z[(r, c)] = x.embed();
        }
    }
    from_center(&a.to_float(), &z, seed, tol)
}

/// Block sizes of a float algebra, with a numerical center.
pub fn wedderburn_dims_float(a: &FloatAlgebra, seed: u64, tol: f64) -> Result<WedderburnSpectrum> {
    let z = a.center_basis(KERNEL_CUT);
    from_center(a, &z, seed, tol)
}

fn random_real(rng: &mut ChaCha8Rng, n: usize) -> Vec<C64> {
    (0..n).map(|_| C64::new(rng.random_range(-1.0..1.0), 0.0)).collect()
}

fn from_center(a: &FloatAlgebra, z: &CMat, seed: u64, tol: f64) -> Result<WedderburnSpectrum> {
    let d = a.dim();
    let k = z.ncols();
    if k == 0 {
        return Err(Error::Algebra("algebra has a trivial center".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = random_real(&mut rng, k);
    let zr: Vec<C64> = (0..d).map(|i| (0..k).map(|c| z[(i, c)] * r[c]).sum()).collect();
    // matrix of multiplication by zr on the center, in the basis z
    let lz = a.left_mult(&zr);
    let m = float::least_squares(z, &(&lz * z))?;
    let eig = float::eigenvalues(&m)?;
    let scale = eig.iter().map(|x| x.norm()).fold(1.0, f64::max);
    for i in 0..k {
        for j in 0..i {
            if (eig[i] - eig[j]).norm() < tol * scale {
                return Err(Error::Retryable(format!(
                    "central eigenvalues {} and {} closer than {tol}",
                    eig[i], eig[j]
                )));
            }
        }
    }
    let mut blocks: Vec<(usize, Vec<C64>)> = Vec::with_capacity(k);
    let mut residual: f64 = 0.0;
    let mut total = 0;
    for &lambda in &eig {
        let shifted = &m - CMat::identity(k, k) * lambda;
        let v = float::null_space(&shifted, KERNEL_CUT);
        if v.ncols() != 1 {
            return Err(Error::Retryable(format!(
                "eigenspace for {lambda} has dimension {}",
                v.ncols()
            )));
        }
        let e0: Vec<C64> = (0..d).map(|i| (0..k).map(|c| z[(i, c)] * v[(c, 0)]).sum()).collect();
        let sq = a.product(&e0, &e0);
        let num: C64 = e0.iter().zip(&sq).map(|(x, y)| x.conj() * y).sum();
        let den: C64 = e0.iter().map(|x| x.conj() * x).sum();
        let mu = num / den;
        if mu.norm() < tol {
            return Err(Error::Algebra("central element is nilpotent; algebra not semisimple".into()));
        }
        let e: Vec<C64> = e0.iter().map(|x| x / mu).collect();
        let e2 = a.product(&e, &e);
        residual = e2
            .iter()
            .zip(&e)
            .map(|(x, y)| (x - y).norm())
            .fold(residual, f64::max);
        let tr = a.left_trace(&e);
        let root = tr.re.max(0.0).sqrt();
        let di = root.round() as usize;
        if di == 0 || (root - di as f64).abs() >= 0.01 || tr.im.abs() >= 0.01 {
            return Err(Error::Algebra(format!(
                "block trace {tr} is not a perfect square; algebra not semisimple or tolerance too tight"
            )));
        }
        total += di * di;
        blocks.push((di, e));
    }
    if total != d {
        return Err(Error::Algebra(format!("block dimensions square-sum to {total}, not {d}")));
    }
    if residual > tol * d as f64 {
        return Err(Error::Numerical(format!("idempotent residual {residual:e}")));
    }
    blocks.sort_by_key(|(di, _)| *di);
    let (dims, idempotents) = blocks.into_iter().unzip();
    Ok(WedderburnSpectrum {
        dims,
        idempotent_residual: residual,
        idempotents,
    })
}

/// An irreducible representation: one n×n matrix per basis element.
#[derive(Clone, Debug)]
pub struct IrrRep {
    pub n: usize,
    pub mats: Vec<CMat>,
}

impl IrrRep {
    /// max ‖π(e_i)π(e_j) − π(e_i e_j)‖ and ‖π(1) − I‖.
    pub fn homomorphism_residual(&self, a: &FloatAlgebra) -> f64 {
        let d = a.dim();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let mut rhs = CMat::zeros(self.n, self.n);
                for k in 0..d {
                    rhs += &self.mats[k] * a.c(i, j, k);
                }
                worst = worst.max(float::max_abs(&(&self.mats[i] * &self.mats[j] - rhs)));
            }
        }
        let mut unit = CMat::zeros(self.n, self.n);
        for (k, &u) in a.unit().iter().enumerate() {
            unit += &self.mats[k] * u;
        }
        worst.max(float::max_abs(&(unit - CMat::identity(self.n, self.n))))
    }

    /// Dimension of the span of the matrices π(e_i).
    pub fn span_dimension(&self) -> usize {
        let cols: Vec<_> = self
            .mats
            .iter()
            .map(|m| nalgebra::DVector::from_iterator(self.n * self.n, m.iter().cloned()))
            .collect();
        float::rank(&CMat::from_columns(&cols), KERNEL_CUT)
    }
}

/// Irreducible representation of a simple algebra of dimension n², from an
/// n-dimensional eigenspace of right multiplication by a random element.
pub fn split_simple(a: &FloatAlgebra, seed: u64, tol: f64) -> Result<IrrRep> {
    let d = a.dim();
    let n = (d as f64).sqrt().round() as usize;
    if n * n != d {
        return Err(Error::Algebra(format!("dimension {d} is not a square")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = random_real(&mut rng, d);
    let ra = a.right_mult(&x);
    let eig = float::eigenvalues(&ra)?;
    let scale = eig.iter().map(|x| x.norm()).fold(1.0, f64::max);
    let clusters = float::cluster(&eig, 1e-6 * scale);
    for cl in clusters.iter().filter(|c| c.len() == n) {
        let lambda = cl.iter().map(|&i| eig[i]).sum::<C64>() / cl.len() as f64;
        let e = float::null_space(&(&ra - CMat::identity(d, d) * lambda), 1e-6);
        if e.ncols() != n {
            continue;
        }
        let eh = e.adjoint();
        let mats: Vec<CMat> = (0..d)
            .map(|i| {
                let mut unit = vec![C64::new(0.0, 0.0); d];
                unit[i] = C64::new(1.0, 0.0);
                &eh * a.left_mult(&unit) * &e
            })
            .collect();
        let rep = IrrRep { n, mats };
        let res = rep.homomorphism_residual(a);
        if res > tol * d as f64 {
            return Err(Error::Numerical(format!("representation residual {res:e}")));
        }
        return Ok(rep);
    }
    Err(Error::Retryable(format!("no eigenspace of dimension {n} for this random element")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{CycVec, Cyclotomic};

    /// e_11, e_12, e_21, e_22
    fn matrix_units() -> ScAlgebra {
        let mut v = vec![Cyclotomic::zero(1).unwrap(); 64];
        let one = Cyclotomic::one(1).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    // e_ij e_jk = e_ik
                    v[((i * 2 + j) * 4 + (j * 2 + k)) * 4 + i * 2 + k] = one.clone();
                }
            }
        }
        ScAlgebra::new((0..4).collect(), CycVec::from_cyclotomics(1, &v).unwrap()).unwrap()
    }

    fn function_algebra(n: usize) -> ScAlgebra {
        let mut v = vec![Cyclotomic::zero(1).unwrap(); n * n * n];
        for i in 0..n {
            v[(i * n + i) * n + i] = Cyclotomic::one(1).unwrap();
        }
        ScAlgebra::new((0..n).collect(), CycVec::from_cyclotomics(1, &v).unwrap()).unwrap()
    }

    #[test]
    fn audits() {
        assert!(algebra_audit(&function_algebra(5)));
        let m = matrix_units();
        assert!(algebra_audit(&m));
        let mut vals = m.consts().to_cyclotomics();
        vals[0] = Cyclotomic::from_integer(1, 2).unwrap();
        let bad = ScAlgebra::with_unit(m.labels().to_vec(), CycVec::from_cyclotomics(1, &vals).unwrap(), m.unit().clone())
            .unwrap();
        assert!(!algebra_audit(&bad));
    }

    #[test]
    fn spectra_of_small_algebras() {
        assert_eq!(wedderburn_dims(&function_algebra(4), 0, 1e-8).unwrap().dims, vec![1; 4]);
        assert_eq!(wedderburn_dims(&matrix_units(), 0, 1e-8).unwrap().dims, vec![2]);
    }

    #[test]
    fn split_matrix_units() {
        let a = matrix_units().to_float();
        let rep = split_simple(&a, 3, 1e-8).unwrap();
        assert_eq!(rep.n, 2);
        let s = &rep.mats[0] + &rep.mats[3];
        assert!(float::max_abs(&(s - CMat::identity(2, 2))) < 1e-10);
        assert_eq!(rep.span_dimension(), 4);
    }
}
