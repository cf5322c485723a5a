//! Drinfeld twists J ∈ C[H]⊗C[H] and the identities they satisfy.
//!
//! Elements of C[H]⊗C[H] are stored as |H|×|H| coefficient arrays over local
//! indices of H (row = first tensor leg); triple tensors as |H|³ arrays.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::{Bicharacter, FiniteGroup, Subgroup};
use crate::linalg::{self, CycMatrix};
use crate::scalars::kernel::conv_add;
use crate::scalars::kernel::reduce_slot;
use crate::scalars::{CycVec, Cyclotomic, Rational};

/// A twist that has not been verified yet.
#[derive(Clone, Debug)]
pub struct TwistCandidate {
    h: Subgroup,
    j: CycVec,
}

/// Outcome of the twist axiom checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TwistAudit {
    pub two_cocycle: bool,
    pub counit_left: bool,
    pub counit_right: bool,
    pub invertible: bool,
    pub coassociativity_delta1: bool,
    pub coassociativity_delta2: bool,
}

impl TwistAudit {
    pub fn passed(&self) -> bool {
        self.failed().is_empty()
    }

    /// Names of the failed checks.
    pub fn failed(&self) -> Vec<&'static str> {
        [
            (self.two_cocycle, "two_cocycle"),
            (self.counit_left, "counit_left"),
            (self.counit_right, "counit_right"),
            (self.invertible, "invertible"),
            (self.coassociativity_delta1, "coassociativity_delta1"),
            (self.coassociativity_delta2, "coassociativity_delta2"),
        ]
        .into_iter()
        .filter(|(ok, _)| !ok)
        .map(|(_, name)| name)
        .collect()
    }
}

/// A verified twist together with its inverse.
#[derive(Clone, Debug)]
pub struct TwistData {
    h: Subgroup,
    j: CycVec,
    jinv: CycVec,
}

impl TwistCandidate {
    /// `j[a * |H| + b]` is the coefficient of a⊗b (local indices).
    pub fn new(h: Subgroup, j: CycVec) -> Result<Self> {
        let d = h.len();
        if j.len() != d * d {
            return Err(Error::Twist(format!("twist has {} coefficients, expected {}", j.len(), d * d)));
        }
        Ok(TwistCandidate { h, j })
    }

    /// J = 1⊗1.
    pub fn trivial(h: Subgroup) -> Result<Self> {
        let d = h.len();
        let mut wide = vec![0i128; d * d];
        wide[0] = 1;
        Self::new(h, CycVec::from_wide(1, wide, 1)?)
    }

    /// Parses a twist file: `N dim`, then dim rows of dim cyclotomic literals.
    pub fn parse(text: &str, h: Subgroup) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty twist file".into()))?;
        let nums: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|e| Error::Parse(format!("twist header {t:?}: {e}"))))
            .collect::<Result<_>>()?;
        let [order, dim] = nums[..] else {
            return Err(Error::Parse("twist header must be `N dim`".into()));
        };
        if dim != h.len() {
            return Err(Error::Twist(format!("twist dimension {dim} but |H| = {}", h.len())));
        }
        let mut values = Vec::with_capacity(dim * dim);
        for row in 0..dim {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("twist file ends before row {row}")))?;
            let entries: Vec<&str> = line.split_whitespace().collect();
            if entries.len() != dim {
                return Err(Error::Parse(format!("twist row {row} has {} entries", entries.len())));
            }
            for e in entries {
                values.push(Cyclotomic::parse(e, order)?);
            }
        }
        Self::new(h, CycVec::from_cyclotomics(order, &values)?)
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.h
    }

    pub fn coefficients(&self) -> &CycVec {
        &self.j
    }

    /// Runs every axiom check; the inverse is returned when it exists.
    pub fn audit(&self) -> Result<(TwistAudit, Option<CycVec>)> {
        let g = self.h.local();
        let d = g.order();
        let j = &self.j;
        let jinv = match invert_twist(g, j) {
            Ok(x) => Some(x),
            Err(Error::Singular) => None,
            Err(e) => return Err(e),
        };
        let two_cocycle = {
            let lhs = triple_sum(g, j, j, |c, dd, a, b| (g.mul(c, a), g.mul(c, b), dd));
            let rhs = triple_sum(g, j, j, |c, dd, a, b| (c, g.mul(dd, a), g.mul(dd, b)));
            lhs == rhs
        };
        let counit_left = (0..d).all(|b| column_sum_is(j, d, b, true));
        let counit_right = (0..d).all(|a| column_sum_is(j, d, a, false));
        let (invertible, coassociativity_delta2) = match &jinv {
            Some(ji) => {
                let inv_ok = is_unit2(&mul2(g, j, ji)?) && is_unit2(&mul2(g, ji, j)?);
                let coassoc = (0..d).all(|x| {
                    let lhs = triple_sum(g, ji, ji, |s, t, u, v| {
                        let sx = g.mul(s, x);
                        (g.mul(u, sx), g.mul(v, sx), g.mul(t, x))
                    });
                    let rhs = triple_sum(g, ji, ji, |s, t, u, v| {
                        let tx = g.mul(t, x);
                        (g.mul(s, x), g.mul(u, tx), g.mul(v, tx))
                    });
                    lhs == rhs
                });
                (inv_ok, coassoc)
            }
            None => (false, false),
        };
        let coassociativity_delta1 = (0..d).all(|x| {
            let lhs = triple_sum(g, j, j, |u, v, s, t| {
                let xu = g.mul(x, u);
                (g.mul(xu, s), g.mul(xu, t), g.mul(x, v))
            });
            let rhs = triple_sum(g, j, j, |u, v, s, t| {
                let xv = g.mul(x, v);
                (g.mul(x, u), g.mul(xv, s), g.mul(xv, t))
            });
            lhs == rhs
        });
        let audit = TwistAudit {
            two_cocycle,
            counit_left,
            counit_right,
            invertible,
            coassociativity_delta1,
            coassociativity_delta2,
        };
        Ok((audit, jinv))
    }

    /// Runs the audit and, when every axiom holds, returns the verified twist.
    pub fn check(self) -> Result<(TwistAudit, Option<TwistData>)> {
        let (audit, jinv) = self.audit()?;
        let data = match jinv {
            Some(jinv) if audit.passed() => Some(TwistData {
                h: self.h,
                j: self.j,
                jinv,
            }),
            _ => None,
        };
        Ok((audit, data))
    }

    /// Verifies every axiom; errors name the failed ones.
    pub fn verify(self) -> Result<(TwistData, TwistAudit)> {
        match self.check()? {
            (audit, Some(t)) => Ok((t, audit)),
            (audit, None) => Err(Error::Twist(format!("failed axioms: {}", audit.failed().join(", ")))),
        }
    }
}

/// Σ_a J_ab (fixed b, `by_column`) or Σ_b J_ab (fixed a) equals [index = e].
fn column_sum_is(j: &CycVec, d: usize, fixed: usize, by_column: bool) -> bool {
    let mut acc = j.acc();
    for other in 0..d {
        let i = if by_column { other * d + fixed } else { fixed * d + other };
        acc.add_scaled(j.slot(i), 1);
    }
    let r = acc.reduce();
    let want = if fixed == 0 { j.den() as i128 } else { 0 };
    r[0] == want && r[1..].iter().all(|&x| x == 0)
}

fn is_unit2(x: &CycVec) -> bool {
    (0..x.len()).all(|i| if i == 0 { x.entry_is_rational(0, 1, 1) } else { x.is_zero_at(i) })
}

/// Σ x_ab y_cd · (index(a,b,c,d)) in C[H]^{⊗3}, as reduced wide numerators over
/// den(x)·den(y).
fn triple_sum(
    g: &FiniteGroup,
    x: &CycVec,
    y: &CycVec,
    index: impl Fn(usize, usize, usize, usize) -> (usize, usize, usize),
) -> Vec<i128> {
    let d = g.order();
    let n = x.order();
    let f = x.field();
    let mut buf = vec![0i128; d * d * d * n];
    for a in 0..d {
        for b in 0..d {
            let xi = a * d + b;
            if x.is_zero_at(xi) {
                continue;
            }
            for c in 0..d {
                for e in 0..d {
                    let yi = c * d + e;
                    if y.is_zero_at(yi) {
                        continue;
                    }
                    let (p, q, r) = index(a, b, c, e);
                    let at = ((p * d + q) * d + r) * n;
                    conv_add(f, &mut buf[at..at + n], x.slot(xi), y.slot(yi));
                }
            }
        }
    }
    for slot in buf.chunks_mut(n) {
        reduce_slot(f, slot);
    }
    buf
}

/// Product in C[H]⊗C[H].
pub fn mul2(g: &FiniteGroup, x: &CycVec, y: &CycVec) -> Result<CycVec> {
    if x.order() != y.order() {
        return Err(Error::OrderMismatch(x.order(), y.order()));
    }
    let d = g.order();
    let n = x.order();
    let f = x.field();
    let mut buf = vec![0i128; d * d * n];
    for a in 0..d {
        for b in 0..d {
            let xi = a * d + b;
            if x.is_zero_at(xi) {
                continue;
            }
            for c in 0..d {
                for e in 0..d {
                    let yi = c * d + e;
                    if y.is_zero_at(yi) {
                        continue;
                    }
                    let at = (g.mul(a, c) * d + g.mul(b, e)) * n;
                    conv_add(f, &mut buf[at..at + n], x.slot(xi), y.slot(yi));
                }
            }
        }
    }
    CycVec::from_sums(n, buf, x.den() as i128 * y.den() as i128)
}

/// Product in C[H].
pub fn mul1(g: &FiniteGroup, x: &CycVec, y: &CycVec) -> Result<CycVec> {
    let d = g.order();
    let n = x.order();
    let f = x.field();
    let mut buf = vec![0i128; d * n];
    for a in 0..d {
        if x.is_zero_at(a) {
            continue;
        }
        for b in 0..d {
            if y.is_zero_at(b) {
                continue;
            }
            let at = g.mul(a, b) * n;
            conv_add(f, &mut buf[at..at + n], x.slot(a), y.slot(b));
        }
    }
    CycVec::from_sums(n, buf, x.den() as i128 * y.den() as i128)
}

/// Inverse of an element of C[H]⊗C[H] through its left-regular representation.
pub fn invert_twist(g: &FiniteGroup, j: &CycVec) -> Result<CycVec> {
    let d = g.order();
    let dd = d * d;
    let n = j.order();
    // column (c, e) holds J·(c⊗e) = Σ J_ab (ac ⊗ be)
    let mut wide = vec![0i128; dd * dd * n];
    for a in 0..d {
        for b in 0..d {
            let ji = a * d + b;
            if j.is_zero_at(ji) {
                continue;
            }
            for c in 0..d {
                for e in 0..d {
                    let row = g.mul(a, c) * d + g.mul(b, e);
                    let col = c * d + e;
                    let at = (row * dd + col) * n;
                    for (dst, &v) in wide[at..at + n].iter_mut().zip(j.slot(ji)) {
                        *dst += v as i128;
                    }
                }
            }
        }
    }
    let l = CycMatrix::new(dd, dd, CycVec::from_wide(n, wide, j.den() as i128)?)?;
    let mut rhs = vec![0i128; dd * n];
    rhs[0] = 1;
    let e = CycMatrix::new(dd, 1, CycVec::from_wide(n, rhs, 1)?)?;
    linalg::solve(&l, &e)?
        .map(|x| x.data().clone())
        .ok_or(Error::Singular)
}

/// Inverse of an element of C[H] through its left-regular representation.
pub fn invert_group_algebra_element(g: &FiniteGroup, q: &CycVec) -> Result<CycVec> {
    let d = g.order();
    let n = q.order();
    let mut wide = vec![0i128; d * d * n];
    for x in 0..d {
        for c in 0..d {
            let at = (g.mul(x, c) * d + c) * n;
            for (dst, &v) in wide[at..at + n].iter_mut().zip(q.slot(x)) {
                *dst += v as i128;
            }
        }
    }
    let l = CycMatrix::new(d, d, CycVec::from_wide(n, wide, q.den() as i128)?)?;
    let mut rhs = vec![0i128; d * n];
    rhs[0] = 1;
    let e = CycMatrix::new(d, 1, CycVec::from_wide(n, rhs, 1)?)?;
    linalg::solve(&l, &e)?
        .map(|x| x.data().clone())
        .ok_or(Error::Singular)
}

/// J_ab = σ(a, b)/|H| for a nondegenerate alternating bicharacter σ on H.
pub fn symplectic_twist(h: &Subgroup, sigma: &Bicharacter) -> Result<(TwistData, TwistAudit)> {
    symplectic_candidate(h, sigma)?.verify()
}

/// The unverified twist J = |H|⁻¹ Σ σ(a,b) a⊗b.
pub fn symplectic_candidate(h: &Subgroup, sigma: &Bicharacter) -> Result<TwistCandidate> {
    let d = h.len();
    if sigma.group().order() != d || sigma.group().table() != h.local().table() {
        return Err(Error::Twist("bicharacter is not defined on H".into()));
    }
    let scale = Rational::new(1.into(), (d as i64).into());
    let values: Vec<Cyclotomic> = sigma.values().iter().map(|v| v.scale(&scale)).collect();
    let j = CycVec::from_cyclotomics(sigma.order(), &values)?;
    TwistCandidate::new(h.clone(), j)
}

/// R = J_21⁻¹J with its triangularity and rank.
#[derive(Clone, Debug)]
pub struct TriangularStructure {
    pub r: CycVec,
    pub rank: usize,
    pub minimal: bool,
}

/// Q = Σ J_ab a⁻¹b with the antipode identity verdict.
#[derive(Clone, Debug)]
pub struct QCheck {
    pub q: CycVec,
    pub q_inv: CycVec,
    pub pass: bool,
}

impl TwistData {
    pub fn subgroup(&self) -> &Subgroup {
        &self.h
    }

    pub fn group(&self) -> &FiniteGroup {
        self.h.local()
    }

    /// |H|
    pub fn dim(&self) -> usize {
        self.h.len()
    }

    pub fn order(&self) -> usize {
        self.j.order()
    }

    pub fn j(&self) -> &CycVec {
        &self.j
    }

    pub fn jinv(&self) -> &CycVec {
        &self.jinv
    }

    /// Coefficient of a⊗b in J (local indices).
    pub fn coefficient(&self, a: usize, b: usize) -> Cyclotomic {
        self.j.get(a * self.dim() + b)
    }

    /// Twist file text.
    pub fn to_file_string(&self) -> String {
        twist_file_string(&self.j, self.dim())
    }

    /// R = J_21⁻¹J; errors if R_21·R ≠ 1⊗1.
    pub fn triangular_structure(&self) -> Result<TriangularStructure> {
        let g = self.group();
        let d = self.dim();
        let j21inv = transpose2(&self.jinv, d);
        let r = mul2(g, &j21inv, &self.j)?;
        let r21 = transpose2(&r, d);
        if !is_unit2(&mul2(g, &r21, &r)?) {
            return Err(Error::Twist("triangularity R_21·R = 1⊗1 fails".into()));
        }
        let rank = linalg::rank(&CycMatrix::new(d, d, r.clone())?)?;
        Ok(TriangularStructure {
            r,
            rank,
            minimal: rank == d,
        })
    }

    /// Q and the identity (S_0⊗S_0)(J) = (Q⊗Q)·J_21⁻¹·Δ_0(Q)⁻¹.
    pub fn q_element_and_antipode_check(&self) -> Result<QCheck> {
        let g = self.group();
        let d = self.dim();
        let n = self.order();
        let f = self.j.field();
        let mut q = vec![0i128; d * n];
        for a in 0..d {
            for b in 0..d {
                let at = g.mul(g.inv(a), b) * n;
                for (dst, &v) in q[at..at + n].iter_mut().zip(self.j.slot(a * d + b)) {
                    *dst += v as i128;
                }
            }
        }
        let q = CycVec::from_wide(n, q, self.j.den() as i128)?;
        let q_inv = match invert_group_algebra_element(g, &q) {
            Ok(x) => x,
            Err(Error::Singular) => return Err(Error::Twist("Q is not invertible".into())),
            Err(e) => return Err(e),
        };
        // (x, y) ↦ (x⁻¹, y⁻¹) is an involution, so gathering applies S_0⊗S_0
        let inverted: Vec<usize> = (0..d * d).map(|i| g.inv(i / d) * d + g.inv(i % d)).collect();
        let s0s0 = self.j.gather(&inverted);
        let mut qq = vec![0i128; d * d * n];
        for a in 0..d {
            for b in 0..d {
                let at = (a * d + b) * n;
                conv_add(f, &mut qq[at..at + n], q.slot(a), q.slot(b));
            }
        }
        let qq = CycVec::from_sums(n, qq, q.den() as i128 * q.den() as i128)?;
        let delta = |x: &CycVec| -> Result<CycVec> {
            let mut w = vec![0i128; d * d * n];
            for a in 0..d {
                let at = (a * d + a) * n;
                for (dst, &v) in w[at..at + n].iter_mut().zip(x.slot(a)) {
                    *dst = v as i128;
                }
            }
            CycVec::from_wide(n, w, x.den() as i128)
        };
        let dq = delta(&q)?;
        let dq_inv = delta(&q_inv)?;
        let delta_ok = is_unit2(&mul2(g, &dq, &dq_inv)?);
        let rhs = mul2(g, &mul2(g, &qq, &transpose2(&self.jinv, d))?, &dq_inv)?;
        Ok(QCheck {
            q,
            q_inv,
            pass: delta_ok && rhs.values_eq(&s0s0),
        })
    }

    /// Whether |H| is a perfect square.
    pub fn square_dimension_check(&self) -> bool {
        let d = self.dim();
        let r = (d as f64).sqrt().round() as usize;
        r * r == d
    }
}

/// x_21
fn transpose2(x: &CycVec, d: usize) -> CycVec {
    let idx: Vec<usize> = (0..d * d).map(|i| (i % d) * d + i / d).collect();
    x.gather(&idx)
}

/// Twist file text for a coefficient array.
pub fn twist_file_string(j: &CycVec, d: usize) -> String {
    let mut s = format!("{} {}\n", j.order(), d);
    for a in 0..d {
        let row: Vec<String> = (0..d).map(|b| j.get(a * d + b).to_string()).collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::build_elementary_abelian_symplectic;
    use std::sync::Arc;

    fn p3() -> (TwistData, TwistAudit) {
        let (h, sigma) = build_elementary_abelian_symplectic(3, 1).unwrap();
        symplectic_twist(&Subgroup::whole(h), &sigma).unwrap()
    }

    #[test]
    fn symplectic_p3_coefficients() {
        let (t, audit) = p3();
        assert!(audit.passed());
        let g = t.group();
        let x = g.find_label(&[1, 0]).unwrap();
        let y = g.find_label(&[0, 1]).unwrap();
        assert_eq!(t.coefficient(x, y).to_string(), "1/9*E(3)^1");
        for b in 0..9 {
            assert_eq!(t.coefficient(0, b).to_string(), "1/9*E(3)^0");
        }
    }

    #[test]
    fn symplectic_inverse_is_conjugate() {
        let (t, _) = p3();
        for i in 0..81 {
            assert_eq!(t.jinv().get(i), t.j().get(i).conj());
        }
    }

    #[test]
    fn trivial_twist_passes() {
        let (h, _) = build_elementary_abelian_symplectic(3, 1).unwrap();
        let (t, audit) = TwistCandidate::trivial(Subgroup::whole(h)).unwrap().verify().unwrap();
        assert!(audit.passed());
        assert!(t.jinv().values_eq(t.j()));
        let tri = t.triangular_structure().unwrap();
        assert_eq!((tri.rank, tri.minimal), (1, false));
        let q = t.q_element_and_antipode_check().unwrap();
        assert!(q.pass && q.q.entry_is_rational(0, 1, 1));
    }

    #[test]
    fn perturbed_twist_breaks_cocycle() {
        let (t, _) = p3();
        let mut vals = t.j().to_cyclotomics();
        vals[10] = &vals[10] + &vals[10];
        let c = TwistCandidate::new(t.subgroup().clone(), CycVec::from_cyclotomics(3, &vals).unwrap()).unwrap();
        let (audit, _) = c.audit().unwrap();
        assert!(!audit.two_cocycle);
        assert!(c.verify().is_err());
    }

    #[test]
    fn triangular_and_q_for_p3() {
        let (t, _) = p3();
        let tri = t.triangular_structure().unwrap();
        assert_eq!(tri.rank, 9);
        assert!(tri.minimal && t.square_dimension_check());
        assert!(t.q_element_and_antipode_check().unwrap().pass);
    }

    #[test]
    fn twist_file_round_trip() {
        let (t, _) = p3();
        let text = t.to_file_string();
        let c = TwistCandidate::parse(&text, t.subgroup().clone()).unwrap();
        assert!(c.coefficients().values_eq(t.j()));
        let g = Arc::new(FiniteGroup::parse_cayley("1\n0\n").unwrap());
        assert!(TwistCandidate::parse(&text, Subgroup::whole(g)).is_err());
    }
}
