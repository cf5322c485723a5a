//! Word-sized prime fields F_q with q ≡ 1 (mod N), so that Q(ζ_N) maps into F_q
//! along each of its φ(N) embeddings ζ ↦ ω^k.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::scalars::FieldData;

/// Montgomery arithmetic modulo an odd prime q < 2^62.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Mont {
    pub q: u64,
    neg_qinv: u64,
    r2: u64,
}

impl Mont {
    pub fn new(q: u64) -> Self {
        debug_assert!(q % 2 == 1 && q < (1 << 62));
        let mut inv: u64 = 1;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(q.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % q as u128) as u64;
        let r2 = ((r as u128 * r as u128) % q as u128) as u64;
        Mont {
            q,
            neg_qinv: inv.wrapping_neg(),
            r2,
        }
    }

    #[inline(always)]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.neg_qinv);
        let s = (t + m as u128 * self.q as u128) >> 64;
        let s = s as u64;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline(always)]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    #[inline(always)]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline(always)]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    pub fn to_mont(&self, a: u64) -> u64 {
        self.mul(a % self.q, self.r2)
    }

    pub fn from_mont(&self, a: u64) -> u64 {
        self.redc(a as u128)
    }

    pub fn from_i64(&self, x: i64) -> u64 {
        let r = x.rem_euclid(self.q as i64) as u64;
        self.to_mont(r)
    }

    pub fn one(&self) -> u64 {
        self.to_mont(1)
    }

    pub fn pow(&self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> u64 {
        self.pow(a, self.q - 2)
    }
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for 64-bit inputs.
pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &WITNESSES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &WITNESSES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// One prime together with the data needed to move Q(ζ_N) values in and out of F_q.
#[derive(Debug)]
pub(crate) struct PrimeData {
    pub mont: Mont,
    /// ω^j in Montgomery form for j in 0..N, ω a primitive N-th root of unity.
    pub omega_pows: Vec<u64>,
    /// Inverse of the φ×φ matrix V[r][j] = ω^{units[r]·j} (Montgomery form, row-major).
    pub vandermonde_inv: Vec<u64>,
}

impl PrimeData {
    fn new(q: u64, field: &FieldData) -> Self {
        let mont = Mont::new(q);
        let n = field.order as u64;
        let factors = prime_factors(field.order);
        let mut omega = 0;
        for g in 2u64.. {
            let w = powmod(g, (q - 1) / n, q);
            if factors.iter().all(|&r| powmod(w, n / r as u64, q) != 1) {
                omega = w;
                break;
            }
        }
        let omega_m = mont.to_mont(omega);
        let mut omega_pows = Vec::with_capacity(field.order);
        let mut cur = mont.one();
        for _ in 0..field.order {
            omega_pows.push(cur);
            cur = mont.mul(cur, omega_m);
        }
        let phi = field.phi;
        let mut v = vec![0u64; phi * phi];
        for (r, &k) in field.units.iter().enumerate() {
            for j in 0..phi {
                v[r * phi + j] = omega_pows[(k * j) % field.order];
            }
        }
        let vandermonde_inv = invert_mod(&mont, &v, phi).expect("Vandermonde at distinct nodes");
        PrimeData {
            mont,
            omega_pows,
            vandermonde_inv,
        }
    }

    /// Image of an integer polynomial in ζ under ζ ↦ ω^k.
    #[inline]
    pub fn embed(&self, poly: &[i64], k: usize) -> u64 {
        let n = self.omega_pows.len();
        let mut acc = 0u64;
        for (j, &c) in poly.iter().enumerate() {
            if c != 0 {
                let w = self.omega_pows[(k * j) % n];
                acc = self.mont.add(acc, self.mont.mul(self.mont.from_i64(c), w));
            }
        }
        acc
    }
}

fn invert_mod(m: &Mont, a: &[u64], n: usize) -> Option<Vec<u64>> {
    let w = 2 * n;
    let mut aug = vec![0u64; n * w];
    for i in 0..n {
        aug[i * w..i * w + n].copy_from_slice(&a[i * n..(i + 1) * n]);
        aug[i * w + n + i] = m.one();
    }
    for col in 0..n {
        let piv = (col..n).find(|&r| aug[r * w + col] != 0)?;
        if piv != col {
            for j in 0..w {
                aug.swap(piv * w + j, col * w + j);
            }
        }
        let inv = m.inv(aug[col * w + col]);
        for j in 0..w {
            aug[col * w + j] = m.mul(aug[col * w + j], inv);
        }
        for r in 0..n {
            if r != col {
                let f = aug[r * w + col];
                if f != 0 {
                    for j in 0..w {
                        let t = m.mul(f, aug[col * w + j]);
                        aug[r * w + j] = m.sub(aug[r * w + j], t);
                    }
                }
            }
        }
    }
    Some(
        (0..n)
            .flat_map(|i| aug[i * w + n..(i + 1) * w].to_vec())
            .collect(),
    )
}

/// The `idx`-th prime q ≡ 1 (mod N) below 2^62, counting downward.
pub(crate) fn prime_for(field: &'static FieldData, idx: usize) -> Arc<PrimeData> {
    type Cache = Mutex<HashMap<usize, Vec<Arc<PrimeData>>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("prime cache poisoned");
    let list = guard.entry(field.order).or_default();
    let n = field.order as u64;
    while list.len() <= idx {
        let mut k = match list.last() {
            Some(p) => (p.mont.q - 1) / n - 1,
            None => ((1u64 << 62) - 2) / n,
        };
        loop {
            let q = k * n + 1;
            if q % 2 == 1 && is_prime_u64(q) {
                list.push(Arc::new(PrimeData::new(q, field)));
                break;
            }
            k -= 1;
        }
    }
    list[idx].clone()
}

/// Row reduction over F_q (Montgomery form, row-major `rows × cols`).
///
/// Returns the pivot columns and, for each pivot row, the reduced-row-echelon
/// entries on the free columns (normal form, `rank × free` row-major).
pub(crate) fn rref_free(m: &Mont, rows: usize, cols: usize, a: &mut [u64]) -> (Vec<usize>, Vec<u64>) {
    let mut pivots = Vec::new();
    let mut prow = 0;
    for col in 0..cols {
        if prow == rows {
            break;
        }
        let Some(r) = (prow..rows).find(|&r| a[r * cols + col] != 0) else {
            continue;
        };
        if r != prow {
            let (lo, hi) = a.split_at_mut(r * cols);
            lo[prow * cols..(prow + 1) * cols].swap_with_slice(&mut hi[..cols]);
        }
        let inv = m.inv(a[prow * cols + col]);
        for x in &mut a[prow * cols + col..(prow + 1) * cols] {
            *x = m.mul(*x, inv);
        }
        let (head, tail) = a.split_at_mut((prow + 1) * cols);
        let pivot_row = &head[prow * cols..];
        for row in tail.chunks_exact_mut(cols) {
            let f = row[col];
            if f == 0 {
                continue;
            }
            row[col] = 0;
            for j in col + 1..cols {
                let p = pivot_row[j];
                if p != 0 {
                    row[j] = m.sub(row[j], m.mul(f, p));
                }
            }
        }
        pivots.push(col);
        prow += 1;
    }
    let rank = pivots.len();
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..cols).filter(|&c| !is_pivot[c]).collect();
    // back substitution restricted to free columns
    for i in (0..rank).rev() {
        let pi = pivots[i];
        for j in 0..i {
            let f = a[j * cols + pi];
            if f == 0 {
                continue;
            }
            a[j * cols + pi] = 0;
            for &c in free.iter().filter(|&&c| c > pi) {
                let t = m.mul(f, a[i * cols + c]);
                a[j * cols + c] = m.sub(a[j * cols + c], t);
            }
        }
    }
    let mut values = Vec::with_capacity(rank * free.len());
    for i in 0..rank {
        for &c in &free {
            values.push(m.from_mont(a[i * cols + c]));
        }
    }
    (pivots, values)
}
