//! Projective representations from group actions on simple algebras, their
//! 2-cocycles, and twisted group algebras.

use crate::algebra::FloatAlgebra;
use crate::dual_algebras::GroupAction;
use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, Subgroup};
use crate::linalg::float::{self, CMat, C64};
use crate::semisimple::{IrrRep, WedderburnSpectrum, KERNEL_CUT};

/// T with T·src[i] = dst[i]·T for all i, unique up to scale.
///
/// Normalized to Frobenius norm sqrt(n) with its first entry of modulus
/// above `tol` (row-major) positive real.
pub fn intertwiner(src: &[CMat], dst: &[CMat], tol: f64) -> Result<CMat> {
    let n = src[0].nrows();
    let nn = n * n;
    let mut sys = CMat::zeros(src.len() * nn, nn);
    let id = CMat::identity(n, n);
    for (i, (s, t)) in src.iter().zip(dst).enumerate() {
        // vec(T S) = (Sᵀ ⊗ I) vec T, vec(D T) = (I ⊗ D) vec T (column-major vec)
        let block = s.transpose().kronecker(&id) - id.kronecker(t);
        sys.view_mut((i * nn, 0), (nn, nn)).copy_from(&block);
    }
    let ker = float::null_space(&sys, KERNEL_CUT);
    if ker.ncols() != 1 {
        return Err(Error::Numerical(format!(
            "intertwiner space has dimension {}, expected 1",
            ker.ncols()
        )));
    }
    let t = CMat::from_column_slice(n, n, ker.column(0).as_slice());
    Ok(normalize_gauge(t, tol))
}

/// Frobenius norm sqrt(n), first significant entry (row-major) positive real.
pub fn normalize_gauge(t: CMat, tol: f64) -> CMat {
    let n = t.nrows();
    let mut t = &t * C64::new((n as f64).sqrt() / t.norm(), 0.0);
    let first = (0..n)
        .flat_map(|r| (0..n).map(move |c| (r, c)))
        .map(|(r, c)| t[(r, c)])
        .find(|z| z.norm() > tol);
    if let Some(z) = first {
        t *= z.conj() / z.norm();
    }
    t
}

/// T with T·π(x) = π(α(x))·T, where α(e_i) = e_{perm[i]}.
pub fn skolem_noether(pi: &IrrRep, perm: &[usize], tol: f64) -> Result<CMat> {
    if perm.iter().enumerate().all(|(i, &p)| i == p) {
        return Ok(CMat::identity(pi.n, pi.n));
    }
    let dst: Vec<CMat> = perm.iter().map(|&p| pi.mats[p].clone()).collect();
    intertwiner(&pi.mats, &dst, tol)
}

/// A projective representation of a subgroup K, with its cocycle.
#[derive(Clone, Debug)]
pub struct ProjectiveRep {
    pub group: Subgroup,
    pub n: usize,
    /// T[a] for each local index a of K; T[0] = I.
    pub t: Vec<CMat>,
    /// c(a, b) at a·|K| + b.
    pub c: Vec<C64>,
}

impl ProjectiveRep {
    /// Extracts c(a,b) = tr(T_a T_b T_ab⁻¹)/n and checks that T_a T_b T_ab⁻¹ is scalar.
    pub fn from_matrices(group: Subgroup, t: Vec<CMat>, tol: f64) -> Result<Self> {
        let kl = group.local();
        let k = kl.order();
        let n = t[0].nrows();
        let inverses: Vec<CMat> = t
            .iter()
            .map(|m| m.clone().try_inverse().ok_or_else(|| Error::Numerical("singular lift".into())))
            .collect::<Result<_>>()?;
        let mut c = Vec::with_capacity(k * k);
        for a in 0..k {
            for b in 0..k {
                let ab = kl.mul(a, b);
                let m = &t[a] * &t[b] * &inverses[ab];
                let s = m.trace() / n as f64;
                let dev = float::max_abs(&(m - CMat::identity(n, n) * s));
                if dev > tol * n as f64 {
                    return Err(Error::Numerical(format!(
                        "T_a T_b T_ab⁻¹ not scalar at ({a}, {b}): deviation {dev:e}"
                    )));
                }
                c.push(s);
            }
        }
        let rep = ProjectiveRep { group, n, t, c };
        let res = rep.cocycle_residual();
        if res > tol * 10.0 {
            return Err(Error::Numerical(format!("cocycle identity residual {res:e}")));
        }
        Ok(rep)
    }

    pub fn cocycle(&self, a: usize, b: usize) -> C64 {
        self.c[a * self.group.len() + b]
    }

    /// max |c(a,b)c(ab,d) − c(a,bd)c(b,d)|
    pub fn cocycle_residual(&self) -> f64 {
        cocycle_residual(self.group.local(), &self.c)
    }

    /// max ‖T_a T_b − c(a,b) T_ab‖
    pub fn lift_residual(&self) -> f64 {
        let kl = self.group.local();
        let k = kl.order();
        let mut worst: f64 = 0.0;
        for a in 0..k {
            for b in 0..k {
                let d = &self.t[a] * &self.t[b] - &self.t[kl.mul(a, b)] * self.cocycle(a, b);
                worst = worst.max(float::max_abs(&d));
            }
        }
        worst
    }

    pub fn trace(&self, a: usize) -> C64 {
        self.t[a].trace()
    }
}

pub fn cocycle_residual(kl: &FiniteGroup, c: &[C64]) -> f64 {
    let k = kl.order();
    let mut worst: f64 = 0.0;
    for a in 0..k {
        for b in 0..k {
            let ab = kl.mul(a, b);
            for d in 0..k {
                let lhs = c[a * k + b] * c[ab * k + d];
                let rhs = c[a * k + kl.mul(b, d)] * c[b * k + d];
                worst = worst.max((lhs - rhs).norm());
            }
        }
    }
    worst
}

/// Lifts a permutation action on a simple algebra to a projective
/// representation on the irreducible module π.
///
/// The lifts are made unitary (determinant 1, then conjugation by the square
/// root of Σ T_aᴴT_a) so that every cocycle value has modulus 1.
pub fn projective_rep_from_action(act: &GroupAction, pi: &IrrRep, tol: f64) -> Result<ProjectiveRep> {
    let k = act.subgroup().len();
    let n = pi.n;
    let mut t = Vec::with_capacity(k);
    for a in 0..k {
        let m = skolem_noether(pi, act.perm(a), tol)?;
        let det = m.determinant();
        let root = C64::from_polar(det.norm().powf(1.0 / n as f64), det.arg() / n as f64);
        t.push(m / root);
    }
    let mut p = CMat::zeros(n, n);
    for m in &t {
        p += m.adjoint() * m;
    }
    let s = float::hermitian_sqrt(&(p / C64::new(k as f64, 0.0)));
    let s_inv = s
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Numerical("singular unitarizer".into()))?;
    let mut t: Vec<CMat> = t.iter().map(|m| normalize_gauge(&s * m * &s_inv, tol)).collect();
    t[0] = CMat::identity(n, n);
    ProjectiveRep::from_matrices(act.subgroup().clone(), t, tol)
}

/// W = V_2 ⊗ (V_1 pulled back along a ↦ g⁻¹ag), as a projective representation of K_g.
pub fn pullback_and_tensor_cocycle(
    grp: &FiniteGroup,
    h: &Subgroup,
    v1: &ProjectiveRep,
    v2: &ProjectiveRep,
    g: usize,
    kg: &Subgroup,
    tol: f64,
) -> Result<ProjectiveRep> {
    let gi = grp.inv(g);
    let k = kg.len();
    let mut theta1 = Vec::with_capacity(k);
    let mut theta2 = Vec::with_capacity(k);
    for &a in kg.elements() {
        let conj = h
            .local_index(grp.conj(gi, a))
            .ok_or_else(|| Error::Group(format!("g⁻¹·{a}·g is not in H")))?;
        theta1.push(conj);
        theta2.push(h.local_index(a).ok_or_else(|| Error::Group("K_g ⊄ H".into()))?);
    }
    let t: Vec<CMat> = (0..k)
        .map(|a| v2.t[theta2[a]].kronecker(&v1.t[theta1[a]]))
        .collect();
    let mut c = Vec::with_capacity(k * k);
    for a in 0..k {
        for b in 0..k {
            c.push(v2.cocycle(theta2[a], theta2[b]) * v1.cocycle(theta1[a], theta1[b]));
        }
    }
    let w = ProjectiveRep {
        group: kg.clone(),
        n: v1.n * v2.n,
        t,
        c,
    };
    let res = w.cocycle_residual();
    if res > tol * 10.0 {
        return Err(Error::Numerical(format!("c_W cocycle residual {res:e}")));
    }
    let lift = w.lift_residual();
    if lift > tol * w.n as f64 {
        return Err(Error::Numerical(format!("T_W lift residual {lift:e}")));
    }
    Ok(w)
}

/// C_c[K]: basis u_a with u_a·u_b = c(a,b)·u_ab.
pub fn twisted_group_algebra(k: &Subgroup, c: &[C64], tol: f64) -> Result<FloatAlgebra> {
    let kl = k.local();
    let n = kl.order();
    if c.len() != n * n {
        return Err(Error::Algebra("cocycle table has the wrong size".into()));
    }
    let one = C64::new(1.0, 0.0);
    if (0..n).any(|a| (c[a] - one).norm() > tol || (c[a * n] - one).norm() > tol) {
        return Err(Error::Algebra("cocycle is not normalized".into()));
    }
    let res = cocycle_residual(kl, c);
    if res > tol * 10.0 {
        return Err(Error::Algebra(format!("cocycle identity fails by {res:e}")));
    }
    let mut consts = vec![C64::new(0.0, 0.0); n * n * n];
    for a in 0..n {
        for b in 0..n {
            consts[(a * n + b) * n + kl.mul(a, b)] = c[a * n + b];
        }
    }
    let mut unit = vec![C64::new(0.0, 0.0); n];
    unit[0] = one;
    FloatAlgebra::new(n, consts, unit)
}

/// |tr T_W[a]| < tol for a ≠ e and tr T_W[e] = dim W = |H|.
pub fn trace_vanishing_check(w: &ProjectiveRep, h_order: usize, tol: f64) -> bool {
    w.n == h_order
        && (w.trace(0) - C64::new(h_order as f64, 0.0)).norm() < tol
        && (1..w.group.len()).all(|a| w.trace(a).norm() < tol)
}

/// Multiplicities of the irreducibles of C_{c_W}[K_g] in W.
#[derive(Clone, Debug)]
pub struct MultiplicityCheck {
    pub multiplicities: Vec<f64>,
    pub expected: Vec<f64>,
    pub commutant_dim: f64,
    pub max_deviation: f64,
}

/// m_i = tr(ρ_W(e_i))/d_i, compared with (|H|/|K_g|)·d_i.
pub fn multiplicity_law(w: &ProjectiveRep, spectrum: &WedderburnSpectrum, h_order: usize) -> MultiplicityCheck {
    let k = w.group.len();
    let ratio = h_order as f64 / k as f64;
    let mut multiplicities = Vec::new();
    let mut expected = Vec::new();
    let mut dev: f64 = 0.0;
    for (e, &d) in spectrum.idempotents.iter().zip(&spectrum.dims) {
        let mut rho = CMat::zeros(w.n, w.n);
        for (a, &coef) in e.iter().enumerate() {
            rho += &w.t[a] * coef;
        }
        let m = rho.trace() / d as f64;
        dev = dev.max((m - C64::new(ratio * d as f64, 0.0)).norm());
        multiplicities.push(m.re);
        expected.push(ratio * d as f64);
    }
    let commutant_dim = multiplicities.iter().map(|m| m * m).sum::<f64>();
    dev = dev.max((commutant_dim - (h_order * h_order) as f64 / k as f64).abs());
    MultiplicityCheck {
        multiplicities,
        expected,
        commutant_dim,
        max_deviation: dev,
    }
}
