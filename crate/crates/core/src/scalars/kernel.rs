//! Integer kernel for bulk exact arithmetic.
//!
//! A [`CycVec`] stores many values of Q(ζ_N) as integer polynomials over one
//! shared positive denominator. Products are cyclic convolutions in
//! Z[x]/(x^N − 1) accumulated in `i128`; reduction modulo Φ_N happens only
//! when a result is stored or compared.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{field, Cyclotomic, FieldData, Rational};
use crate::error::{Error, Result};

/// Bound on stored numerators and denominators. Keeps every accumulated
/// sum of products far below `i128::MAX`.
const MAX_ABS: i128 = 1 << 46;

/// A vector of cyclotomic values over a common denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycVec {
    order: usize,
    phi: usize,
    len: usize,
    den: i64,
    /// `len * order` numerators; slots at index ≥ φ within each value are zero.
    num: Vec<i64>,
}

impl CycVec {
    pub fn zeros(order: usize, len: usize) -> Result<Self> {
        let f = field(order)?;
        Ok(CycVec {
            order,
            phi: f.phi,
            len,
            den: 1,
            num: vec![0; len * order],
        })
    }

    pub fn from_cyclotomics(order: usize, values: &[Cyclotomic]) -> Result<Self> {
        let f = field(order)?;
        let mut lcm = BigInt::one();
        for v in values {
            if v.order() != order {
                return Err(Error::OrderMismatch(order, v.order()));
            }
            for c in v.coeffs() {
                if !c.is_zero() {
                    lcm = lcm.lcm(c.denom());
                }
            }
        }
        let den = lcm
            .to_i64()
            .filter(|d| (*d as i128) < MAX_ABS)
            .ok_or_else(|| Error::Overflow(format!("common denominator {lcm}")))?;
        let mut num = vec![0i64; values.len() * order];
        for (i, v) in values.iter().enumerate() {
            for (j, c) in v.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let scaled = c.numer() * (&lcm / c.denom());
                num[i * order + j] = scaled
                    .to_i64()
                    .filter(|x| (*x as i128).abs() < MAX_ABS)
                    .ok_or_else(|| Error::Overflow(format!("numerator {scaled}")))?;
            }
        }
        Ok(CycVec {
            order,
            phi: f.phi,
            len: values.len(),
            den,
            num,
        })
    }

    /// Builds from reduced `i128` numerators over `den`, cancelling common factors.
    pub(crate) fn from_wide(order: usize, wide: Vec<i128>, den: i128) -> Result<Self> {
        let f = field(order)?;
        debug_assert!(den > 0);
        debug_assert_eq!(wide.len() % order, 0);
        let mut g = den;
        for &x in &wide {
            if x != 0 {
                g = g.gcd(&x);
                if g == 1 {
                    break;
                }
            }
        }
        let den = den / g;
        if den >= MAX_ABS {
            return Err(Error::Overflow(format!("denominator {den}")));
        }
        let mut num = Vec::with_capacity(wide.len());
        for x in wide {
            let y = x / g;
            if y.abs() >= MAX_ABS {
                return Err(Error::Overflow(format!("numerator {y}")));
            }
            num.push(y as i64);
        }
        Ok(CycVec {
            order,
            phi: f.phi,
            len: num.len() / order,
            den: den as i64,
            num,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    /// Numerator polynomial of entry `i` (length N, canonical).
    #[inline]
    pub fn slot(&self, i: usize) -> &[i64] {
        &self.num[i * self.order..(i + 1) * self.order]
    }

    #[inline]
    pub fn is_zero_at(&self, i: usize) -> bool {
        self.slot(i)[..self.phi].iter().all(|&x| x == 0)
    }

    pub fn get(&self, i: usize) -> Cyclotomic {
        let den = BigInt::from(self.den);
        let coeffs = self.slot(i)[..self.phi]
            .iter()
            .map(|&x| Rational::new(BigInt::from(x), den.clone()))
            .collect();
        Cyclotomic::from_coeffs(self.order, coeffs).expect("validated order")
    }

    pub fn to_cyclotomics(&self) -> Vec<Cyclotomic> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    /// Complex embeddings of every entry.
    pub fn embed(&self) -> Vec<num_complex::Complex64> {
        let roots: Vec<num_complex::Complex64> = (0..self.order)
            .map(|j| {
                num_complex::Complex64::from_polar(
                    1.0,
                    2.0 * std::f64::consts::PI * j as f64 / self.order as f64,
                )
            })
            .collect();
        let d = self.den as f64;
        (0..self.len)
            .map(|i| {
                self.slot(i)
                    .iter()
                    .zip(&roots)
                    .filter(|(&x, _)| x != 0)
                    .map(|(&x, r)| r * (x as f64 / d))
                    .sum()
            })
            .collect()
    }

    /// Exact equality of entry `i` here with entry `j` of `other`.
    pub fn entry_eq(&self, i: usize, other: &CycVec, j: usize) -> bool {
        let a = self.slot(i);
        let b = other.slot(j);
        let (da, db) = (self.den as i128, other.den as i128);
        a.iter()
            .zip(b)
            .all(|(&x, &y)| x as i128 * db == y as i128 * da)
    }

    /// True when every entry equals the corresponding entry of `other`.
    pub fn values_eq(&self, other: &CycVec) -> bool {
        self.order == other.order
            && self.len == other.len
            && (0..self.len).all(|i| self.entry_eq(i, other, i))
    }

    /// Entry `i` equals the rational `n / d`.
    pub fn entry_is_rational(&self, i: usize, n: i64, d: i64) -> bool {
        let s = self.slot(i);
        s[0] as i128 * d as i128 == n as i128 * self.den as i128 && s[1..].iter().all(|&x| x == 0)
    }

    /// Selects entries by index.
    pub fn gather(&self, idx: &[usize]) -> CycVec {
        let mut num = Vec::with_capacity(idx.len() * self.order);
        for &i in idx {
            num.extend_from_slice(self.slot(i));
        }
        CycVec {
            order: self.order,
            phi: self.phi,
            len: idx.len(),
            den: self.den,
            num,
        }
    }

    /// Concatenates two vectors over a common denominator.
    pub fn concat(&self, other: &CycVec) -> Result<CycVec> {
        if self.order != other.order {
            return Err(Error::OrderMismatch(self.order, other.order));
        }
        let l = (self.den as i128).lcm(&(other.den as i128));
        let (sa, sb) = (l / self.den as i128, l / other.den as i128);
        let wide: Vec<i128> = self
            .num
            .iter()
            .map(|&x| x as i128 * sa)
            .chain(other.num.iter().map(|&x| x as i128 * sb))
            .collect();
        CycVec::from_wide(self.order, wide, l)
    }

    /// Builds from unreduced sums in Z[x]/(x^N − 1) over `den`.
    pub(crate) fn from_sums(order: usize, mut wide: Vec<i128>, den: i128) -> Result<Self> {
        let f = field(order)?;
        for slot in wide.chunks_mut(order) {
            reduce_slot(f, slot);
        }
        Self::from_wide(order, wide, den)
    }

    pub(crate) fn field(&self) -> &'static FieldData {
        field(self.order).expect("validated order")
    }

    pub fn acc(&self) -> CycAcc {
        CycAcc::new(field(self.order).expect("validated order"))
    }
}

/// Accumulator for one value of Z[x]/(x^N − 1) in `i128`.
#[derive(Clone, Debug)]
pub struct CycAcc {
    field: &'static FieldData,
    buf: Vec<i128>,
}

impl CycAcc {
    pub(crate) fn new(field: &'static FieldData) -> Self {
        CycAcc {
            field,
            buf: vec![0; field.order],
        }
    }

    pub fn for_order(order: usize) -> Result<Self> {
        Ok(Self::new(field(order)?))
    }

    #[inline]
    pub fn clear(&mut self) {
        self.buf.iter_mut().for_each(|x| *x = 0);
    }

    /// buf += a · b (cyclic convolution).
    #[inline]
    pub fn add_product(&mut self, a: &[i64], b: &[i64]) {
        conv_add(self.field, &mut self.buf, a, b);
    }

    /// buf += k · a
    #[inline]
    pub fn add_scaled(&mut self, a: &[i64], k: i128) {
        for (dst, &x) in self.buf.iter_mut().zip(a) {
            *dst += x as i128 * k;
        }
    }

    /// buf −= a · b
    #[inline]
    pub fn sub_product(&mut self, a: &[i64], b: &[i64]) {
        let n = self.field.order;
        let phi = self.field.phi;
        for (i, &x) in a[..phi].iter().enumerate() {
            if x == 0 {
                continue;
            }
            let x = x as i128;
            for (j, &y) in b[..phi].iter().enumerate() {
                let k = if i + j >= n { i + j - n } else { i + j };
                self.buf[k] -= x * y as i128;
            }
        }
    }

    /// Reduces modulo Φ_N in place; afterwards slots ≥ φ are zero.
    pub fn reduce(&mut self) -> &[i128] {
        reduce_slot(self.field, &mut self.buf);
        &self.buf
    }

    /// Reduces and tests for zero.
    pub fn is_zero(&mut self) -> bool {
        self.reduce().iter().all(|&x| x == 0)
    }

    /// Reduces and appends the value to `out`.
    pub fn drain_into(&mut self, out: &mut Vec<i128>) {
        self.reduce();
        out.extend_from_slice(&self.buf);
        self.clear();
    }
}

/// dst += a · b in Z[x]/(x^N − 1); `dst` has length N.
#[inline]
pub(crate) fn conv_add(f: &FieldData, dst: &mut [i128], a: &[i64], b: &[i64]) {
    let n = f.order;
    let phi = f.phi;
    if n == 1 {
        dst[0] += a[0] as i128 * b[0] as i128;
        return;
    }
    for (i, &x) in a[..phi].iter().enumerate() {
        if x == 0 {
            continue;
        }
        let x = x as i128;
        for (j, &y) in b[..phi].iter().enumerate() {
            let k = if i + j >= n { i + j - n } else { i + j };
            dst[k] += x * y as i128;
        }
    }
}

/// Reduces one length-N slot modulo Φ_N.
pub(crate) fn reduce_slot(f: &FieldData, buf: &mut [i128]) {
    let phi = f.phi;
    for k in (phi..f.order).rev() {
        let c = buf[k];
        if c == 0 {
            continue;
        }
        buf[k] = 0;
        for i in 0..phi {
            let m = f.cyclo[i] as i128;
            if m != 0 {
                buf[k - phi + i] -= c * m;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_through_kernel() {
        let vals = vec![
            Cyclotomic::parse("1/9*E(3)^1", 3).unwrap(),
            Cyclotomic::parse("-2/3*E(3)^2;5/1*E(3)^0", 3).unwrap(),
            Cyclotomic::zero(3).unwrap(),
        ];
        let v = CycVec::from_cyclotomics(3, &vals).unwrap();
        assert_eq!(v.den(), 9);
        assert_eq!(v.to_cyclotomics(), vals);
        assert!(v.is_zero_at(2));
    }

    #[test]
    fn convolution_product_matches_field_product() {
        let a = Cyclotomic::parse("1/2*E(5)^1;3/1*E(5)^3", 5).unwrap();
        let b = Cyclotomic::parse("-1/3*E(5)^2;1/1*E(5)^4", 5).unwrap();
        let va = CycVec::from_cyclotomics(5, std::slice::from_ref(&a)).unwrap();
        let vb = CycVec::from_cyclotomics(5, std::slice::from_ref(&b)).unwrap();
        let mut acc = va.acc();
        acc.add_product(va.slot(0), vb.slot(0));
        let mut wide = Vec::new();
        acc.drain_into(&mut wide);
        let prod = CycVec::from_wide(5, wide, va.den() as i128 * vb.den() as i128).unwrap();
        assert_eq!(prod.get(0), &a * &b);
    }

    #[test]
    fn overflow_is_reported() {
        let huge = Cyclotomic::from_integer(3, 1 << 50).unwrap();
        assert!(matches!(
            CycVec::from_cyclotomics(3, &[huge]),
            Err(Error::Overflow(_))
        ));
    }
}
