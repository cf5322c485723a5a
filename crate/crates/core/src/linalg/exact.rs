//! Exact linear algebra over Q(ζ_N).
//!
//! Row reduction runs over word-sized primes q ≡ 1 (mod N), once per
//! embedding ζ ↦ ω^k, and the reduced echelon entries are lifted back by
//! Chinese remaindering and rational reconstruction. Every result is then
//! certified by exact multiplication before it is returned; a prime whose
//! pivot structure disagrees with the best seen so far is discarded.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use super::modular::{prime_for, rref_free};
use crate::error::{Error, Result};
use crate::scalars::{field, CycVec, Cyclotomic, Rational};

/// Primes tried before giving up on reconstruction.
const MAX_PRIMES: usize = 24;

/// Dense row-major matrix over Q(ζ_N).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycMatrix {
    rows: usize,
    cols: usize,
    data: CycVec,
}

impl CycMatrix {
    pub fn new(rows: usize, cols: usize, data: CycVec) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Config(format!(
                "matrix data has {} entries, expected {rows}×{cols}",
                data.len()
            )));
        }
        Ok(CycMatrix { rows, cols, data })
    }

    pub fn from_cyclotomics(order: usize, rows: usize, cols: usize, v: &[Cyclotomic]) -> Result<Self> {
        Self::new(rows, cols, CycVec::from_cyclotomics(order, v)?)
    }

    pub fn identity(order: usize, n: usize) -> Result<Self> {
        let mut wide = vec![0i128; n * n * order];
        for i in 0..n {
            wide[(i * n + i) * order] = 1;
        }
        Self::new(n, n, CycVec::from_wide(order, wide, 1)?)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn order(&self) -> usize {
        self.data.order()
    }

    pub fn data(&self) -> &CycVec {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Cyclotomic {
        self.data.get(i * self.cols + j)
    }

    /// Exact product.
    pub fn matmul(&self, other: &CycMatrix) -> Result<CycMatrix> {
        if self.cols != other.rows {
            return Err(Error::Config("matmul shape mismatch".into()));
        }
        if self.order() != other.order() {
            return Err(Error::OrderMismatch(self.order(), other.order()));
        }
        let order = self.order();
        let (r, c, k) = (self.rows, self.cols, other.cols);
        let rows: Vec<Vec<i128>> = (0..r)
            .into_par_iter()
            .map(|i| {
                let mut acc = self.data.acc();
                let mut out = Vec::with_capacity(k * order);
                for j in 0..k {
                    for l in 0..c {
                        let a = i * c + l;
                        if self.data.is_zero_at(a) {
                            continue;
                        }
                        acc.add_product(self.data.slot(a), other.data.slot(l * k + j));
                    }
                    acc.drain_into(&mut out);
                }
                out
            })
            .collect();
        let wide = rows.concat();
        let den = self.data.den() as i128 * other.data.den() as i128;
        CycMatrix::new(r, k, CycVec::from_wide(order, wide, den)?)
    }

    /// `[self | other]`
    pub fn hcat(&self, other: &CycMatrix) -> Result<CycMatrix> {
        if self.rows != other.rows {
            return Err(Error::Config("hcat row mismatch".into()));
        }
        let order = self.order();
        let (da, db) = (self.data.den() as i128, other.data.den() as i128);
        let l = da.lcm(&db);
        let (sa, sb) = (l / da, l / db);
        let cols = self.cols + other.cols;
        let mut wide = Vec::with_capacity(self.rows * cols * order);
        for i in 0..self.rows {
            for j in 0..self.cols {
                wide.extend(self.data.slot(i * self.cols + j).iter().map(|&x| x as i128 * sa));
            }
            for j in 0..other.cols {
                wide.extend(other.data.slot(i * other.cols + j).iter().map(|&x| x as i128 * sb));
            }
        }
        CycMatrix::new(self.rows, cols, CycVec::from_wide(order, wide, l)?)
    }

    pub fn is_zero(&self) -> bool {
        (0..self.data.len()).all(|i| self.data.is_zero_at(i))
    }

    pub fn column(&self, j: usize) -> Vec<Cyclotomic> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }
}

/// Reduced row echelon data: pivot columns and the entries on free columns.
#[derive(Debug)]
struct Rref {
    pivots: Vec<usize>,
    free: Vec<usize>,
    /// `pivots.len() × free.len()`, row-major.
    values: Vec<Cyclotomic>,
}

impl Rref {
    fn value(&self, pivot_row: usize, free_idx: usize) -> &Cyclotomic {
        &self.values[pivot_row * self.free.len() + free_idx]
    }
}

/// Runs modular row reduction prime by prime until `accept` certifies a result.
fn multimodular<T>(
    m: &CycMatrix,
    first_prime: usize,
    mut accept: impl FnMut(&Rref) -> Result<Option<T>>,
) -> Result<T> {
    let order = m.order();
    let f = field(order)?;
    let phi = f.phi;
    let (rows, cols) = (m.rows, m.cols);
    let mut best: Option<Vec<usize>> = None;
    let mut modulus = BigInt::one();
    let mut residues: Vec<BigInt> = Vec::new();

    for idx in first_prime..first_prime + MAX_PRIMES {
        let prime = prime_for(f, idx);
        let mont = prime.mont;
        let images: Vec<(Vec<usize>, Vec<u64>)> = f
            .units
            .par_iter()
            .map(|&k| {
                let mut a: Vec<u64> = (0..rows * cols)
                    .map(|e| prime.embed(m.data.slot(e), k))
                    .collect();
                rref_free(&mont, rows, cols, &mut a)
            })
            .collect();
        let pivots = images[0].0.clone();
        if images.iter().any(|(p, _)| *p != pivots) {
            continue;
        }
        match &best {
            Some(b) if better(b, &pivots) => continue,
            Some(b) if *b == pivots => {}
            _ => {
                best = Some(pivots.clone());
                modulus = BigInt::one();
                residues.clear();
            }
        }
        let mut is_pivot = vec![false; cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..cols).filter(|&c| !is_pivot[c]).collect();
        let n_entries = pivots.len() * free.len();
        if n_entries == 0 {
            let r = Rref {
                pivots,
                free,
                values: Vec::new(),
            };
            if let Some(t) = accept(&r)? {
                return Ok(t);
            }
            continue;
        }

        // power-basis coefficients mod q for every entry
        let q = mont.q;
        let mut coeffs = vec![0u64; n_entries * phi];
        for e in 0..n_entries {
            for j in 0..phi {
                let mut acc = 0u64;
                for (r, img) in images.iter().enumerate() {
                    let v = mont.to_mont(img.1[e]);
                    acc = mont.add(acc, mont.mul(prime.vandermonde_inv[j * phi + r], v));
                }
                coeffs[e * phi + j] = mont.from_mont(acc);
            }
        }
        if residues.is_empty() {
            residues = coeffs.iter().map(|&c| BigInt::from(c)).collect();
        } else {
            let m_mod_q = (&modulus % q).to_u64().expect("reduced mod q");
            let minv = mod_inv(m_mod_q, q);
            for (res, &c) in residues.iter_mut().zip(&coeffs) {
                let r_mod_q = (&*res % q).to_u64().expect("reduced mod q");
                let diff = (c + q - r_mod_q) % q;
                let t = ((diff as u128 * minv as u128) % q as u128) as u64;
                *res += &modulus * t;
            }
        }
        modulus *= q;

        let Some(values) = reconstruct_all(&residues, &modulus, order, phi) else {
            continue;
        };
        let r = Rref {
            pivots,
            free,
            values,
        };
        if let Some(t) = accept(&r)? {
            return Ok(t);
        }
    }
    Err(Error::NoConvergence(MAX_PRIMES))
}

/// `current` beats `candidate`: higher rank, or equal rank with earlier pivots.
fn better(current: &[usize], candidate: &[usize]) -> bool {
    current.len() > candidate.len() || (current.len() == candidate.len() && current < candidate)
}

fn mod_inv(a: u64, q: u64) -> u64 {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (q as i128, a as i128);
    while new_r != 0 {
        let quo = r / new_r;
        (t, new_t) = (new_t, t - quo * new_t);
        (r, new_r) = (new_r, r - quo * new_r);
    }
    t.rem_euclid(q as i128) as u64
}

fn reconstruct_all(residues: &[BigInt], modulus: &BigInt, order: usize, phi: usize) -> Option<Vec<Cyclotomic>> {
    let bound = (modulus / 2u32).sqrt();
    residues
        .chunks(phi)
        .map(|chunk| {
            let coeffs = chunk
                .iter()
                .map(|r| rational_reconstruction(r, modulus, &bound))
                .collect::<Option<Vec<Rational>>>()?;
            Cyclotomic::from_coeffs(order, coeffs).ok()
        })
        .collect()
}

/// The unique a/b ≡ r (mod m) with |a|, b ≤ bound, if any.
fn rational_reconstruction(r: &BigInt, m: &BigInt, bound: &BigInt) -> Option<Rational> {
    let (mut r0, mut r1) = (m.clone(), r.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while &r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > *bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(Rational::new(r1, t1))
}

fn nullspace_vectors(r: &Rref, cols: usize, order: usize) -> Result<Vec<Vec<Cyclotomic>>> {
    let zero = Cyclotomic::zero(order)?;
    let one = Cyclotomic::one(order)?;
    Ok(r.free
        .iter()
        .enumerate()
        .map(|(fi, &fcol)| {
            let mut v = vec![zero.clone(); cols];
            v[fcol] = one.clone();
            for (pi, &pcol) in r.pivots.iter().enumerate() {
                v[pcol] = -r.value(pi, fi);
            }
            v
        })
        .collect())
}

fn columns_to_matrix(vectors: &[Vec<Cyclotomic>], rows: usize, order: usize) -> Result<CycMatrix> {
    let k = vectors.len();
    let mut flat = Vec::with_capacity(rows * k);
    for i in 0..rows {
        for v in vectors {
            flat.push(v[i].clone());
        }
    }
    CycMatrix::from_cyclotomics(order, rows, k, &flat)
}

/// A basis of {x : M x = 0}, one vector per free column (reduced echelon form).
pub fn nullspace(m: &CycMatrix) -> Result<Vec<Vec<Cyclotomic>>> {
    let order = m.order();
    multimodular(m, 0, |r| {
        let vecs = nullspace_vectors(r, m.cols, order)?;
        if vecs.is_empty() {
            return Ok(Some(vecs));
        }
        let basis = columns_to_matrix(&vecs, m.cols, order)?;
        Ok(m.matmul(&basis)?.is_zero().then_some(vecs))
    })
}

/// Rank, certified through an exactly verified nullspace.
pub fn rank(m: &CycMatrix) -> Result<usize> {
    Ok(m.cols - nullspace(m)?.len())
}

/// Solves A X = B for X when A has full column rank.
///
/// Returns `Ok(None)` when the system is inconsistent and `Err(Singular)` when
/// A has a nontrivial kernel.
pub fn solve(a: &CycMatrix, b: &CycMatrix) -> Result<Option<CycMatrix>> {
    let order = a.order();
    let aug = a.hcat(b)?;
    let n = a.cols;
    let k = b.cols;
    let mut first_prime = 0;
    loop {
        let outcome = multimodular(&aug, first_prime, |r| {
            if r.pivots.len() < n || r.pivots[..n].iter().enumerate().any(|(i, &p)| i != p) {
                return Ok(Some(Outcome::Deficient));
            }
            if r.pivots.len() > n {
                // rank([A|B]) > rank(A): certified, since rank only drops mod q
                return Ok(Some(Outcome::Inconsistent));
            }
            let flat: Vec<Cyclotomic> = (0..n)
                .flat_map(|i| (0..k).map(move |j| (i, j)))
                .map(|(i, j)| r.value(i, j).clone())
                .collect();
            let x = CycMatrix::from_cyclotomics(order, n, k, &flat)?;
            let ax = a.matmul(&x)?;
            Ok(ax.data.values_eq(&b.data).then_some(Outcome::Solved(x)))
        })?;
        match outcome {
            Outcome::Solved(x) => return Ok(Some(x)),
            Outcome::Inconsistent => return Ok(None),
            Outcome::Deficient => {
                if !nullspace(a)?.is_empty() {
                    return Err(Error::Singular);
                }
                // unlucky prime; A is certified full rank
                first_prime += MAX_PRIMES;
            }
        }
    }
}

enum Outcome {
    Solved(CycMatrix),
    Inconsistent,
    Deficient,
}

/// Exact inverse of a square matrix.
pub fn inverse(a: &CycMatrix) -> Result<CycMatrix> {
    if a.rows != a.cols {
        return Err(Error::Config("inverse of a non-square matrix".into()));
    }
    let id = CycMatrix::identity(a.order(), a.rows)?;
    solve(a, &id)?.ok_or(Error::Singular)
}

/// Whether the column spans of `a` and `b` coincide.
pub fn same_column_space(a: &CycMatrix, b: &CycMatrix) -> Result<bool> {
    let ra = rank(a)?;
    let rb = rank(b)?;
    if ra != rb {
        return Ok(false);
    }
    Ok(rank(&a.hcat(b)?)? == ra)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(order: usize, rows: usize, cols: usize, lits: &[&str]) -> CycMatrix {
        let v: Vec<Cyclotomic> = lits.iter().map(|s| Cyclotomic::parse(s, order).unwrap()).collect();
        CycMatrix::from_cyclotomics(order, rows, cols, &v).unwrap()
    }

    #[test]
    fn inverse_of_rational_matrix() {
        let a = mat(1, 2, 2, &["2", "1", "7", "4"]);
        let inv = inverse(&a).unwrap();
        assert_eq!(inv, mat(1, 2, 2, &["4", "-1", "-7", "2"]));
    }

    #[test]
    fn inverse_over_q_zeta5() {
        let a = mat(
            5,
            2,
            2,
            &["1/1*E(5)^1", "1/3*E(5)^2;1/1*E(5)^0", "-2/7*E(5)^4", "5/1*E(5)^3"],
        );
        let inv = inverse(&a).unwrap();
        let id = CycMatrix::identity(5, 2).unwrap();
        assert!(a.matmul(&inv).unwrap().data().values_eq(id.data()));
    }

    #[test]
    fn singular_and_nullspace() {
        let a = mat(3, 2, 3, &["1", "1/1*E(3)^1", "0", "1/1*E(3)^1", "1/1*E(3)^2", "0"]);
        assert_eq!(rank(&a).unwrap(), 1);
        let ns = nullspace(&a).unwrap();
        assert_eq!(ns.len(), 2);
        let sq = mat(3, 2, 2, &["1", "1/1*E(3)^1", "1/1*E(3)^1", "1/1*E(3)^2"]);
        assert!(matches!(inverse(&sq), Err(Error::Singular)));
    }

    #[test]
    fn inconsistent_system() {
        let a = mat(1, 2, 1, &["1", "1"]);
        let b = mat(1, 2, 1, &["1", "2"]);
        assert!(solve(&a, &b).unwrap().is_none());
        let b = mat(1, 2, 1, &["3/5", "3/5"]);
        assert_eq!(solve(&a, &b).unwrap().unwrap().get(0, 0), Cyclotomic::parse("3/5", 1).unwrap());
    }

    #[test]
    fn rank_of_large_heights_needs_several_primes() {
        // Hilbert-like matrix: reconstruction needs more than one 62-bit prime
        let n = 9;
        let v: Vec<Cyclotomic> = (0..n * n)
            .map(|e| {
                let (i, j) = (e / n, e % n);
                Cyclotomic::parse(&format!("1/{}", i + j + 1), 1).unwrap()
            })
            .collect();
        let h = CycMatrix::from_cyclotomics(1, n, n, &v).unwrap();
        let inv = inverse(&h).unwrap();
        assert!(h.matmul(&inv).unwrap().data().values_eq(CycMatrix::identity(1, n).unwrap().data()));
    }
}
