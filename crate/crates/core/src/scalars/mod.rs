//! Exact arithmetic in cyclotomic fields Q(ζ_N).
//!
//! A [`Cyclotomic`] is a polynomial in ζ_N of degree below φ(N) with rational
//! coefficients, reduced modulo the N-th cyclotomic polynomial, so two values
//! are equal exactly when their coefficient vectors are. Bulk products go
//! through [`CycVec`], an integer representation over a shared denominator.

pub(crate) mod kernel;

pub use kernel::{CycAcc, CycVec};

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Largest supported cyclotomic order.
pub const MAX_ORDER: usize = 10_000;

/// Per-order constants: Φ_N and the unit group of Z/N.
#[derive(Debug)]
pub(crate) struct FieldData {
    pub order: usize,
    pub phi: usize,
    /// Coefficients of Φ_N, low degree first; monic of degree `phi`.
    pub cyclo: Vec<i64>,
    /// Residues k in [1, N) coprime to N, ascending (for N = 1 this is `[0]`).
    pub units: Vec<usize>,
}

pub(crate) fn field(order: usize) -> Result<&'static FieldData> {
    if order == 0 || order > MAX_ORDER {
        return Err(Error::UnsupportedOrder(order));
    }
    static CACHE: OnceLock<Mutex<HashMap<usize, &'static FieldData>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("field cache poisoned");
    if let Some(f) = guard.get(&order) {
        return Ok(f);
    }
    let cyclo = cyclotomic_polynomial(order);
    let units = if order == 1 {
        vec![0]
    } else {
        (1..order).filter(|k| k.gcd(&order) == 1).collect()
    };
    let data: &'static FieldData = Box::leak(Box::new(FieldData {
        order,
        phi: cyclo.len() - 1,
        cyclo,
        units,
    }));
    guard.insert(order, data);
    Ok(data)
}

fn mobius(mut n: usize) -> i32 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Φ_N = Π_{d | N} (x^d − 1)^{μ(N/d)}, multiplying out the numerator first.
pub(crate) fn cyclotomic_polynomial(n: usize) -> Vec<i64> {
    let divisors: Vec<usize> = (1..=n).filter(|d| n % d == 0).collect();
    let mut poly = vec![1i64];
    for &d in &divisors {
        if mobius(n / d) == 1 {
            let mut next = vec![0i64; poly.len() + d];
            for (i, &c) in poly.iter().enumerate() {
                next[i + d] += c;
                next[i] -= c;
            }
            poly = next;
        }
    }
    for &d in &divisors {
        if mobius(n / d) == -1 {
            // exact division by x^d − 1: p[k] = q[k−d] − q[k]
            let deg_q = poly.len() - 1 - d;
            let mut q = vec![0i64; deg_q + 1];
            for k in (d..poly.len()).rev() {
                let upper = if k <= deg_q { q[k] } else { 0 };
                q[k - d] = poly[k] + upper;
            }
            debug_assert!((0..d).all(|k| poly[k] == -q.get(k).copied().unwrap_or(0)));
            poly = q;
        }
    }
    poly
}

/// An element of Q(ζ_N) in canonical power-basis form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclotomic {
    order: usize,
    coeffs: Vec<Rational>,
}

impl Cyclotomic {
    pub fn zero(order: usize) -> Result<Self> {
        let f = field(order)?;
        Ok(Cyclotomic {
            order,
            coeffs: vec![Rational::zero(); f.phi],
        })
    }

    pub fn one(order: usize) -> Result<Self> {
        Self::from_rational(order, Rational::one())
    }

    pub fn from_rational(order: usize, r: Rational) -> Result<Self> {
        let mut z = Self::zero(order)?;
        z.coeffs[0] = r;
        Ok(z)
    }

    pub fn from_integer(order: usize, n: i64) -> Result<Self> {
        Self::from_rational(order, Rational::from_integer(BigInt::from(n)))
    }

    /// ζ_N^k for any integer k.
    pub fn zeta_pow(order: usize, k: i64) -> Result<Self> {
        Self::from_terms(order, &[(Rational::one(), k)])
    }

    /// Σ c·ζ_N^k over the given terms, exponents taken mod N.
    pub fn from_terms(order: usize, terms: &[(Rational, i64)]) -> Result<Self> {
        let f = field(order)?;
        let mut poly = vec![Rational::zero(); order];
        for (c, k) in terms {
            let e = k.rem_euclid(order as i64) as usize;
            poly[e] += c;
        }
        Ok(Cyclotomic {
            order,
            coeffs: reduce_rational(poly, f),
        })
    }

    /// Builds from power-basis coefficients of any length (exponents folded mod N).
    pub fn from_coeffs(order: usize, coeffs: Vec<Rational>) -> Result<Self> {
        let f = field(order)?;
        let mut poly = vec![Rational::zero(); order.max(1)];
        for (k, c) in coeffs.into_iter().enumerate() {
            poly[k % order] += c;
        }
        Ok(Cyclotomic {
            order,
            coeffs: reduce_rational(poly, f),
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Canonical coefficients of 1, ζ, …, ζ^{φ(N)−1}.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The value as a rational, if it lies in Q.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order != other.order {
            return Err(Error::OrderMismatch(self.order, other.order));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(Cyclotomic {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(Cyclotomic {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let f = field(self.order)?;
        let mut prod = vec![Rational::zero(); 2 * f.phi - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Ok(Cyclotomic {
            order: self.order,
            coeffs: reduce_rational(prod, f),
        })
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against Φ_N.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = field(self.order)?;
        let modulus: Vec<Rational> = f
            .cyclo
            .iter()
            .map(|&c| Rational::from_integer(BigInt::from(c)))
            .collect();
        // invariant: s·a ≡ r (mod Φ)
        let (mut r0, mut r1) = (modulus, trim(self.coeffs.clone()));
        let (mut s0, mut s1) = (Vec::<Rational>::new(), vec![Rational::one()]);
        while !(r1.is_empty()) {
            let (q, r) = poly_divrem(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
        }
        // r0 is a nonzero constant because Φ_N is irreducible
        debug_assert_eq!(r0.len(), 1);
        let c = r0[0].recip();
        let s: Vec<Rational> = s0.into_iter().map(|x| x * &c).collect();
        Self::from_coeffs(self.order, s)
    }

    /// The Galois automorphism ζ ↦ ζ^k (k coprime to N).
    pub fn galois(&self, k: i64) -> Self {
        let terms: Vec<(Rational, i64)> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| (c.clone(), j as i64 * k))
            .collect();
        Self::from_terms(self.order, &terms).expect("order already validated")
    }

    /// Complex conjugation, the Galois map ζ ↦ ζ^{N−1}.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    /// Re-expresses the value in Q(ζ_M) for a multiple M of the current order.
    pub fn rescale(&self, new_order: usize) -> Result<Self> {
        if new_order % self.order != 0 {
            return Err(Error::BadRescale {
                from: self.order,
                to: new_order,
            });
        }
        let step = (new_order / self.order) as i64;
        let terms: Vec<(Rational, i64)> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| (c.clone(), j as i64 * step))
            .collect();
        Self::from_terms(new_order, &terms)
    }

    /// Image under ζ_N ↦ exp(2πi/N).
    pub fn embed(&self) -> Complex64 {
        let mut z = Complex64::new(0.0, 0.0);
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let theta = 2.0 * std::f64::consts::PI * j as f64 / self.order as f64;
            z += Complex64::from_polar(1.0, theta) * c.to_f64().unwrap_or(f64::NAN);
        }
        z
    }

    /// Parses the `a/b*E(M)^k;…` literal format into Q(ζ_order); each M must divide `order`.
    pub fn parse(s: &str, order: usize) -> Result<Self> {
        field(order)?;
        let s = s.trim();
        if s == "0" {
            return Self::zero(order);
        }
        let mut terms = Vec::new();
        for raw in s.split(';') {
            let term = raw.trim();
            if term.is_empty() {
                return Err(Error::Parse(format!("empty term in {s:?}")));
            }
            let (coef_str, root_str) = match term.find("E(") {
                Some(pos) => {
                    let head = term[..pos].trim_end();
                    let head = head.strip_suffix('*').unwrap_or(head).trim();
                    (head, Some(&term[pos..]))
                }
                None => (term, None),
            };
            let coef = if coef_str.is_empty() {
                Rational::one()
            } else if coef_str == "-" {
                -Rational::one()
            } else {
                parse_rational(coef_str)?
            };
            let exponent = match root_str {
                None => 0,
                Some(r) => {
                    let close = r
                        .find(')')
                        .ok_or_else(|| Error::Parse(format!("unclosed E( in {term:?}")))?;
                    let m: usize = r[2..close]
                        .trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad root order in {term:?}")))?;
                    if m == 0 || order % m != 0 {
                        return Err(Error::Parse(format!(
                            "E({m}) does not live in Q(E({order}))"
                        )));
                    }
                    let rest = r[close + 1..].trim();
                    let k: i64 = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^')
                            .ok_or_else(|| Error::Parse(format!("expected ^ in {term:?}")))?
                            .trim()
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad exponent in {term:?}")))?
                    };
                    k * (order / m) as i64
                }
            };
            terms.push((coef, exponent));
        }
        Self::from_terms(order, &terms)
    }
}

/// Parses `a` or `a/b` with b > 0.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if !d.is_positive() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(";")?;
            }
            first = false;
            write!(f, "{}/{}*E({})^{}", c.numer(), c.denom(), self.order, j)?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclotomic({self})")
    }
}

macro_rules! impl_binop {
    ($tr:ident, $m:ident, $try:ident) => {
        impl std::ops::$tr for &Cyclotomic {
            type Output = Cyclotomic;
            /// Panics if the orders differ; use the `try_` form to get an error instead.
            fn $m(self, rhs: &Cyclotomic) -> Cyclotomic {
                self.$try(rhs).expect("cyclotomic order mismatch")
            }
        }
        impl std::ops::$tr for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: Cyclotomic) -> Cyclotomic {
                (&self).$try(&rhs).expect("cyclotomic order mismatch")
            }
        }
    };
}
impl_binop!(Add, add, try_add);
impl_binop!(Sub, sub, try_sub);
impl_binop!(Mul, mul, try_mul);

impl std::ops::Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl std::ops::Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

/// Reduces a rational polynomial modulo Φ_N, returning exactly φ(N) coefficients.
fn reduce_rational(mut poly: Vec<Rational>, f: &FieldData) -> Vec<Rational> {
    let phi = f.phi;
    for k in (phi..poly.len()).rev() {
        if poly[k].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut poly[k]);
        for i in 0..phi {
            let m = f.cyclo[i];
            if m != 0 {
                poly[k - phi + i] -= &c * BigInt::from(m);
            }
        }
    }
    poly.resize(phi, Rational::zero());
    poly
}

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

/// Polynomial long division; `b` must be nonzero and trimmed.
fn poly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut rem = trim(a.to_vec());
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let lead = b.last().expect("nonzero divisor").recip();
    let mut quot = vec![Rational::zero(); rem.len() - b.len() + 1];
    while rem.len() >= b.len() && !rem.is_empty() {
        let shift = rem.len() - b.len();
        let c = rem.last().unwrap() * &lead;
        for (i, y) in b.iter().enumerate() {
            rem[shift + i] -= &c * y;
        }
        quot[shift] = c;
        rem = trim(rem);
    }
    (trim(quot), rem)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        // Φ_105 is the first with a coefficient of absolute value 2
        assert!(cyclotomic_polynomial(105).iter().any(|&c| c == -2));
        assert_eq!(cyclotomic_polynomial(105).len() - 1, 48);
    }

    #[test]
    fn root_of_unity_identities() {
        let z = Cyclotomic::zeta_pow(3, 1).unwrap();
        let z2 = Cyclotomic::zeta_pow(3, 2).unwrap();
        assert!((&z * &z2).is_one());
        let one = Cyclotomic::one(3).unwrap();
        assert!((&(&one + &z) + &z2).is_zero());
        let z5 = Cyclotomic::zeta_pow(5, 1).unwrap();
        assert_eq!(z5.conj(), Cyclotomic::zeta_pow(5, 4).unwrap());
    }

    #[test]
    fn inverse_of_zero_is_an_error() {
        assert!(matches!(
            Cyclotomic::zero(7).unwrap().inv(),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn mismatched_orders_are_an_error() {
        let a = Cyclotomic::zeta_pow(3, 1).unwrap();
        let b = Cyclotomic::zeta_pow(5, 1).unwrap();
        assert!(matches!(a.try_mul(&b), Err(Error::OrderMismatch(3, 5))));
        let a15 = a.rescale(15).unwrap();
        let b15 = b.rescale(15).unwrap();
        let prod = a15.try_mul(&b15).unwrap();
        assert_eq!(prod, Cyclotomic::zeta_pow(15, 8).unwrap());
        assert!(a.rescale(10).is_err());
    }

    #[test]
    fn literal_round_trip() {
        let v = Cyclotomic::parse("1/9*E(3)^1;2/9*E(3)^2", 3).unwrap();
        // 1/9 ζ + 2/9 ζ² = −2/9 − 1/9 ζ
        assert_eq!(v.coeffs(), &[q(-2, 9), q(-1, 9)]);
        assert_eq!(v.to_string(), "-2/9*E(3)^0;-1/9*E(3)^1");
        assert_eq!(Cyclotomic::parse(&v.to_string(), 3).unwrap(), v);
        assert!(Cyclotomic::parse("0", 5).unwrap().is_zero());
        assert_eq!(
            Cyclotomic::parse("1/2", 4).unwrap(),
            Cyclotomic::from_rational(4, q(1, 2)).unwrap()
        );
        // E(3) inside Q(E(6))
        assert_eq!(
            Cyclotomic::parse("1/1*E(3)^1", 6).unwrap(),
            Cyclotomic::zeta_pow(6, 2).unwrap()
        );
        assert!(Cyclotomic::parse("1/0*E(3)^1", 3).is_err());
        assert!(Cyclotomic::parse("1/2*E(4)^1", 6).is_err());
    }

    #[test]
    fn embedding_matches_unit_circle() {
        let z = Cyclotomic::zeta_pow(12, 5).unwrap().embed();
        let expected = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * 5.0 / 12.0);
        assert!((z - expected).norm() < 1e-14);
    }

    fn arb_cyclo(order: usize) -> impl Strategy<Value = Cyclotomic> {
        let phi = field(order).unwrap().phi;
        proptest::collection::vec((-1000i64..=1000, 1i64..=30), phi).prop_map(move |cs| {
            Cyclotomic::from_coeffs(order, cs.into_iter().map(|(n, d)| q(n, d)).collect())
                .unwrap()
        })
    }

    fn arb_order() -> impl Strategy<Value = usize> {
        prop::sample::select(vec![1usize, 2, 3, 4, 5, 7, 8, 9, 12, 15])
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn field_axioms((a, b, c) in arb_order().prop_flat_map(|n| (arb_cyclo(n), arb_cyclo(n), arb_cyclo(n)))) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            if !a.is_zero() {
                prop_assert!((&a * &a.inv().unwrap()).is_one());
            }
        }

        #[test]
        fn embedding_is_multiplicative((a, b) in arb_order().prop_flat_map(|n| (arb_cyclo(n), arb_cyclo(n)))) {
            let lhs = (&a * &b).embed();
            let rhs = a.embed() * b.embed();
            prop_assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm().max(1.0));
        }

        #[test]
        fn conjugation(a in arb_order().prop_flat_map(arb_cyclo)) {
            prop_assert_eq!(a.conj().conj(), a.clone());
            let lhs = a.conj().embed();
            let rhs = a.embed().conj();
            prop_assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm().max(1.0));
        }

        #[test]
        fn literal_format_round_trips(a in arb_order().prop_flat_map(arb_cyclo)) {
            prop_assert_eq!(Cyclotomic::parse(&a.to_string(), a.order()).unwrap(), a);
        }
    }
}
