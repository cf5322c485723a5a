//! The dual algebras A_1*, A_2*, the double-coset blocks A_Z* of (C[G]^J)*,
//! and the map A_2* → A_1*^op.

use rand::Rng;
use serde::Serialize;

pub use crate::algebra::{FloatAlgebra, ScAlgebra};
use crate::error::{Error, Result};
use crate::groups::{DoubleCoset, FiniteGroup, Subgroup};
use crate::linalg::{self, CycMatrix};
use crate::scalars::kernel::conv_add;
use crate::scalars::CycVec;
use crate::twist::{QCheck, TwistData};

/// A permutation action of a subgroup K on a basis.
///
/// `perms[a][i]` is the image of basis vector i under the local element a.
#[derive(Clone, Debug)]
pub struct GroupAction {
    k: Subgroup,
    dim: usize,
    perms: Vec<Vec<usize>>,
}

impl GroupAction {
    /// Checks that the identity acts trivially and that the map is a homomorphism.
    pub fn new(k: Subgroup, dim: usize, perms: Vec<Vec<usize>>) -> Result<Self> {
        let kl = k.local();
        if perms.len() != kl.order() || perms.iter().any(|p| p.len() != dim) {
            return Err(Error::Algebra("action has the wrong shape".into()));
        }
        if perms[0].iter().enumerate().any(|(i, &x)| i != x) {
            return Err(Error::Algebra("identity does not act trivially".into()));
        }
        for a in 0..kl.order() {
            for b in 0..kl.order() {
                let ab = kl.mul(a, b);
                if (0..dim).any(|i| perms[a][perms[b][i]] != perms[ab][i]) {
                    return Err(Error::Algebra(format!("action is not a homomorphism at ({a}, {b})")));
                }
            }
        }
        Ok(GroupAction { k, dim, perms })
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.k
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Permutation of the local element `a`.
    pub fn perm(&self, a: usize) -> &[usize] {
        &self.perms[a]
    }

    /// Trace of the permutation matrix (number of fixed basis vectors).
    pub fn trace(&self, a: usize) -> usize {
        self.perms[a].iter().enumerate().filter(|(i, &x)| *i == x).count()
    }
}

/// A_1*, A_2* and the actions ρ_1(h)δ_y = δ_{hy}, ρ_2(h)δ_y = δ_{yh⁻¹}.
#[derive(Clone, Debug)]
pub struct DualAlgebras {
    pub a1: ScAlgebra,
    pub a2: ScAlgebra,
    pub rho1: GroupAction,
    pub rho2: GroupAction,
}

/// Builds A_1* and A_2* from the coproducts (x⊗x)J and J⁻¹(x⊗x), audits them
/// and checks that ρ_1, ρ_2 act by automorphisms.
pub fn build_a1_a2_star(t: &TwistData) -> Result<DualAlgebras> {
    let g = t.group();
    let d = t.dim();
    let mut idx1 = Vec::with_capacity(d * d * d);
    let mut idx2 = Vec::with_capacity(d * d * d);
    for h in 0..d {
        for h2 in 0..d {
            for x in 0..d {
                let xi = g.inv(x);
                idx1.push(g.mul(xi, h) * d + g.mul(xi, h2));
                idx2.push(g.mul(h, xi) * d + g.mul(h2, xi));
            }
        }
    }
    let labels = t.subgroup().elements().to_vec();
    let a1 = ScAlgebra::new(labels.clone(), t.j().gather(&idx1))?;
    let a2 = ScAlgebra::new(labels, t.jinv().gather(&idx2))?;
    for (name, a) in [("A_1*", &a1), ("A_2*", &a2)] {
        if !a.is_associative() {
            return Err(Error::Algebra(format!("{name} is not associative")));
        }
        if !a.unit_law_holds() {
            return Err(Error::Algebra(format!("{name} fails the unit law")));
        }
    }
    let h = t.subgroup().clone();
    let rho1 = GroupAction::new(
        h.clone(),
        d,
        (0..d).map(|a| (0..d).map(|y| g.mul(a, y)).collect()).collect(),
    )?;
    let rho2 = GroupAction::new(
        h,
        d,
        (0..d).map(|a| (0..d).map(|y| g.mul(y, g.inv(a))).collect()).collect(),
    )?;
    for a in 0..d {
        if !a1.is_automorphism(rho1.perm(a)) {
            return Err(Error::Algebra(format!("ρ_1({a}) is not an automorphism of A_1*")));
        }
        if !a2.is_automorphism(rho2.perm(a)) {
            return Err(Error::Algebra(format!("ρ_2({a}) is not an automorphism of A_2*")));
        }
    }
    Ok(DualAlgebras { a1, a2, rho1, rho2 })
}

/// Position of each element of `z` (or `None`), indexed by group element.
fn positions(n: usize, z: &[usize]) -> Vec<Option<usize>> {
    let mut pos = vec![None; n];
    for (i, &x) in z.iter().enumerate() {
        pos[x] = Some(i);
    }
    pos
}

/// The block A_Z* with structure constants read off Δ_J(x) = J⁻¹(x⊗x)J.
pub fn build_block_algebra(g: &FiniteGroup, h: &Subgroup, t: &TwistData, z: &DoubleCoset) -> Result<ScAlgebra> {
    let consts = block_constants(g, h, t, z)?;
    let a = ScAlgebra::new(z.elements.clone(), consts)?;
    if !a.is_associative() {
        return Err(Error::Algebra(format!("block of {} is not associative", z.representative)));
    }
    if !a.unit_law_holds() {
        return Err(Error::Algebra(format!("block of {} fails the unit law", z.representative)));
    }
    Ok(a)
}

fn block_constants(g: &FiniteGroup, h: &Subgroup, t: &TwistData, z: &DoubleCoset) -> Result<CycVec> {
    let d = h.len();
    let m = z.len();
    let n = t.order();
    let (j, jinv) = (t.j(), t.jinv());
    let f = j.field();
    let pos = positions(g.order(), &z.elements);
    let mut wide = vec![0i128; m * m * m * n];
    // s x u for s, u ∈ H, as a position in Z
    let mut sxu = vec![0usize; d * d];
    for (kx, &x) in z.elements.iter().enumerate() {
        for s in 0..d {
            let sx = g.mul(h.global(s), x);
            for u in 0..d {
                sxu[s * d + u] = pos[g.mul(sx, h.global(u))]
                    .ok_or_else(|| Error::Algebra("product escapes the double coset".into()))?;
            }
        }
        for s in 0..d {
            for tt in 0..d {
                let st = s * d + tt;
                if jinv.is_zero_at(st) {
                    continue;
                }
                for u in 0..d {
                    let a = sxu[s * d + u];
                    for v in 0..d {
                        let uv = u * d + v;
                        if j.is_zero_at(uv) {
                            continue;
                        }
                        let b = sxu[tt * d + v];
                        let at = ((a * m + b) * m + kx) * n;
                        conv_add(f, &mut wide[at..at + n], jinv.slot(st), j.slot(uv));
                    }
                }
            }
        }
    }
    CycVec::from_sums(n, wide, jinv.den() as i128 * j.den() as i128)
}

/// Checks δ_a·δ_b = 0 in (C[G]^J)* for sampled a, b in different double cosets,
/// by evaluating the product on every x ∈ G.
pub fn cross_coset_products_vanish(
    g: &FiniteGroup,
    h: &Subgroup,
    t: &TwistData,
    cosets: &[DoubleCoset],
    samples: usize,
    rng: &mut impl Rng,
) -> bool {
    if cosets.len() < 2 {
        return true;
    }
    let d = h.len();
    let (j, jinv) = (t.j(), t.jinv());
    let mut acc = j.acc();
    for _ in 0..samples {
        let i1 = rng.random_range(0..cosets.len());
        let mut i2 = rng.random_range(0..cosets.len() - 1);
        if i2 >= i1 {
            i2 += 1;
        }
        let a = cosets[i1].elements[rng.random_range(0..cosets[i1].len())];
        let b = cosets[i2].elements[rng.random_range(0..cosets[i2].len())];
        for x in 0..g.order() {
            let xi = g.inv(x);
            for s in 0..d {
                let u = g.mul(xi, g.mul(g.inv(h.global(s)), a));
                let Some(u) = h.local_index(u) else { continue };
                for tt in 0..d {
                    let v = g.mul(xi, g.mul(g.inv(h.global(tt)), b));
                    let Some(v) = h.local_index(v) else { continue };
                    acc.add_product(jinv.slot(s * d + tt), j.slot(u * d + v));
                }
            }
            if !acc.is_zero() {
                return false;
            }
            acc.clear();
        }
    }
    true
}

/// δ_x ↦ coefficients of x⁻¹·Q⁻¹, with its audits.
#[derive(Clone, Debug)]
pub struct A2ToA1op {
    /// Row x holds the image of δ_x.
    pub matrix: CycVec,
    pub audit: IsoAudit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IsoAudit {
    pub bijective: bool,
    pub anti_homomorphism: bool,
    pub equivariant: bool,
}

impl IsoAudit {
    pub fn passed(&self) -> bool {
        self.bijective && self.anti_homomorphism && self.equivariant
    }
}

/// Builds the linear map A_2* → A_1* and audits it as an H-algebra isomorphism
/// A_2* ≅ A_1*^op; errors when an audit fails.
pub fn a2_to_a1op_iso(t: &TwistData, q: &QCheck, duals: &DualAlgebras) -> Result<A2ToA1op> {
    let map = a2_to_a1op_map(t, q, duals)?;
    if !map.audit.passed() {
        return Err(Error::Audit(format!("A_2* → A_1*^op: {:?}", map.audit)));
    }
    Ok(map)
}

/// Same as [`a2_to_a1op_iso`] but returns failing audits instead of an error.
pub fn a2_to_a1op_map(t: &TwistData, q: &QCheck, duals: &DualAlgebras) -> Result<A2ToA1op> {
    let g = t.group();
    let d = t.dim();
    let n = t.order();
    let qi = &q.q_inv;
    // (x⁻¹Q⁻¹)_h = Q⁻¹_{xh}
    let idx: Vec<usize> = (0..d * d).map(|e| g.mul(e / d, e % d)).collect();
    let phi = qi.gather(&idx);
    let bijective = linalg::rank(&CycMatrix::new(d, d, phi.clone())?)? == d;

    let c1 = duals.a1.consts();
    let c2 = duals.a2.consts();
    let f = phi.field();
    // lhs[(u, v), h] = Σ_w c2_uvw φ_wh
    let mut lhs = vec![0i128; d * d * d * n];
    for u in 0..d {
        for v in 0..d {
            for w in 0..d {
                let ci = (u * d + v) * d + w;
                if c2.is_zero_at(ci) {
                    continue;
                }
                for hh in 0..d {
                    let at = ((u * d + v) * d + hh) * n;
                    conv_add(f, &mut lhs[at..at + n], c2.slot(ci), phi.slot(w * d + hh));
                }
            }
        }
    }
    let lhs = CycVec::from_sums(n, lhs, c2.den() as i128 * phi.den() as i128)?;
    // tmp[(u, s), h] = Σ_t φ_ut c1_sth
    let mut tmp = vec![0i128; d * d * d * n];
    for u in 0..d {
        for s in 0..d {
            for tt in 0..d {
                if phi.is_zero_at(u * d + tt) {
                    continue;
                }
                for hh in 0..d {
                    let ci = (s * d + tt) * d + hh;
                    if c1.is_zero_at(ci) {
                        continue;
                    }
                    let at = ((u * d + s) * d + hh) * n;
                    conv_add(f, &mut tmp[at..at + n], phi.slot(u * d + tt), c1.slot(ci));
                }
            }
        }
    }
    let tmp = CycVec::from_sums(n, tmp, phi.den() as i128 * c1.den() as i128)?;
    // rhs[(u, v), h] = (φ(v)·φ(u))_h = Σ_s φ_vs tmp[(u, s), h]
    let mut rhs = vec![0i128; d * d * d * n];
    for u in 0..d {
        for v in 0..d {
            for s in 0..d {
                if phi.is_zero_at(v * d + s) {
                    continue;
                }
                for hh in 0..d {
                    let ti = (u * d + s) * d + hh;
                    let at = ((u * d + v) * d + hh) * n;
                    conv_add(f, &mut rhs[at..at + n], phi.slot(v * d + s), tmp.slot(ti));
                }
            }
        }
    }
    let rhs = CycVec::from_sums(n, rhs, phi.den() as i128 * tmp.den() as i128)?;
    let anti_homomorphism = lhs.values_eq(&rhs);

    // φ(ρ_2(a)δ_x) = ρ_1(a)φ(δ_x)
    let equivariant = (0..d).all(|a| {
        (0..d).all(|x| {
            let xa = duals.rho2.perm(a)[x];
            (0..d).all(|k| phi.entry_eq(xa * d + k, &phi, x * d + g.mul(g.inv(a), k)))
        })
    });
    Ok(A2ToA1op {
        matrix: phi,
        audit: IsoAudit {
            bijective,
            anti_homomorphism,
            equivariant,
        },
    })
}

/// The fibers of F_g: for each y ∈ Z, the pairs (h, h') (local indices) with h·g·h' = y.
#[derive(Clone, Debug)]
pub struct FgMap {
    pub g: usize,
    pub fibers: Vec<Vec<(usize, usize)>>,
}

/// F_g(δ_y) = Σ_{hgh'=y} δ_h⊗δ_h'.
pub fn f_g_fibers(grp: &FiniteGroup, h: &Subgroup, z: &DoubleCoset, g: usize) -> Result<FgMap> {
    if !z.contains(g) {
        return Err(Error::Audit(format!("{g} is not in the double coset of {}", z.representative)));
    }
    let pos = positions(grp.order(), &z.elements);
    let d = h.len();
    let mut fibers = vec![Vec::new(); z.len()];
    for a in 0..d {
        let ag = grp.mul(h.global(a), g);
        for b in 0..d {
            let y = grp.mul(ag, h.global(b));
            let Some(p) = pos[y] else {
                return Err(Error::Audit("h·g·h' left the double coset".into()));
            };
            fibers[p].push((a, b));
        }
    }
    Ok(FgMap { g, fibers })
}

/// U_g: orbit sums of ρ(a) = ρ_2(a)⊗ρ_1(g⁻¹ag) on pairs (h, h').
#[derive(Clone, Debug)]
pub struct InvariantAlgebra {
    pub algebra: ScAlgebra,
    /// Orbits of pairs (local indices), in order of their minimal pair.
    pub orbits: Vec<Vec<(usize, usize)>>,
    /// Orbit of the pair (h, h'), at index h·|H| + h'.
    pub orbit_of: Vec<usize>,
}

/// Pair permutations ρ(a), one per element of K_g.
pub fn rho_action(grp: &FiniteGroup, h: &Subgroup, kg: &Subgroup, g: usize) -> Result<Vec<Vec<usize>>> {
    let d = h.len();
    let gi = grp.inv(g);
    kg.elements()
        .iter()
        .map(|&a| {
            let ag = h
                .local_index(grp.conj(gi, a))
                .ok_or_else(|| Error::Group(format!("g⁻¹·{a}·g is not in H")))?;
            let ainv = h.local_index(grp.inv(a)).ok_or_else(|| Error::Group("K_g ⊄ H".into()))?;
            let hl = h.local();
            Ok((0..d * d)
                .map(|e| {
                    let (x, y) = (e / d, e % d);
                    hl.mul(x, ainv) * d + hl.mul(ag, y)
                })
                .collect())
        })
        .collect()
}

/// Builds U_g with structure constants from products of orbit sums in A_2*⊗A_1*.
///
/// Products of invariants are invariant (ρ acts by automorphisms), so each
/// coefficient is read at one representative of the target orbit.
pub fn invariant_algebra_ug(
    grp: &FiniteGroup,
    h: &Subgroup,
    duals: &DualAlgebras,
    kg: &Subgroup,
    g: usize,
) -> Result<InvariantAlgebra> {
    let d = h.len();
    let perms = rho_action(grp, h, kg, g)?;
    let mut orbit_of = vec![usize::MAX; d * d];
    let mut orbits: Vec<Vec<(usize, usize)>> = Vec::new();
    for e in 0..d * d {
        if orbit_of[e] != usize::MAX {
            continue;
        }
        let mut orbit: Vec<usize> = perms.iter().map(|p| p[e]).collect();
        orbit.sort_unstable();
        orbit.dedup();
        for &x in &orbit {
            orbit_of[x] = orbits.len();
        }
        orbits.push(orbit.iter().map(|&x| (x / d, x % d)).collect());
    }
    let m = orbits.len();
    if m * kg.len() != d * d {
        return Err(Error::Algebra(format!(
            "U_g has dimension {m}, expected |H|²/|K_g| = {}",
            d * d / kg.len()
        )));
    }
    let (c1, c2) = (duals.a1.consts(), duals.a2.consts());
    let n = c1.order();
    let f = c1.field();
    let mut wide = vec![0i128; m * m * m * n];
    for i in 0..m {
        for j in 0..m {
            for &(h1, h1p) in &orbits[i] {
                for &(k1, k1p) in &orbits[j] {
                    for (k, ok) in orbits.iter().enumerate() {
                        let (x, y) = ok[0];
                        let a2 = (h1 * d + k1) * d + x;
                        let a1 = (h1p * d + k1p) * d + y;
                        if c2.is_zero_at(a2) || c1.is_zero_at(a1) {
                            continue;
                        }
                        let at = ((i * m + j) * m + k) * n;
                        conv_add(f, &mut wide[at..at + n], c2.slot(a2), c1.slot(a1));
                    }
                }
            }
        }
    }
    let consts = CycVec::from_sums(n, wide, c1.den() as i128 * c2.den() as i128)?;
    let algebra = ScAlgebra::new((0..m).collect(), consts)?;
    Ok(InvariantAlgebra {
        algebra,
        orbits,
        orbit_of,
    })
}

impl InvariantAlgebra {
    /// Full product O_i·O_j in A_2*⊗A_1* compared with Σ_k c_ijk O_k.
    pub fn full_product_matches(&self, duals: &DualAlgebras, i: usize, j: usize) -> Result<bool> {
        let d = duals.a1.dim();
        let (c1, c2) = (duals.a1.consts(), duals.a2.consts());
        let n = c1.order();
        let f = c1.field();
        let mut prod = vec![0i128; d * d * n];
        for &(h1, h1p) in &self.orbits[i] {
            for &(k1, k1p) in &self.orbits[j] {
                for x in 0..d {
                    let a2 = (h1 * d + k1) * d + x;
                    if c2.is_zero_at(a2) {
                        continue;
                    }
                    for y in 0..d {
                        let a1 = (h1p * d + k1p) * d + y;
                        let at = (x * d + y) * n;
                        conv_add(f, &mut prod[at..at + n], c2.slot(a2), c1.slot(a1));
                    }
                }
            }
        }
        let prod = CycVec::from_sums(n, prod, c1.den() as i128 * c2.den() as i128)?;
        let m = self.orbits.len();
        let consts = self.algebra.consts();
        Ok((0..d * d).all(|e| {
            let k = self.orbit_of[e];
            prod.entry_eq(e, consts, (i * m + j) * m + k)
        }))
    }
}

/// Audits of F_g.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FgAudit {
    pub homomorphism: bool,
    pub rank: usize,
    pub injective: bool,
    pub equivariant: bool,
    pub image_equals_ug: bool,
}

impl FgAudit {
    pub fn passed(&self) -> bool {
        self.homomorphism && self.injective && self.equivariant && self.image_equals_ug
    }
}

/// Audits F_g against A_Z* and U_g: homomorphism, injectivity, Im F_g = U_g,
/// and equivariance F_{aga'} = (ρ_2(a)⊗ρ_1(a')⁻¹)F_g on sampled pairs.
pub fn audit_f_g(
    grp: &FiniteGroup,
    h: &Subgroup,
    z: &DoubleCoset,
    fg: &FgMap,
    block: &ScAlgebra,
    ug: &InvariantAlgebra,
    duals: &DualAlgebras,
    equivariance_samples: usize,
    rng: &mut impl Rng,
) -> Result<FgAudit> {
    let d = h.len();
    let m = z.len();
    // each F_g(δ_y) is one orbit sum; record which
    let mut image_orbit = Vec::with_capacity(m);
    let mut fibers_are_orbits = true;
    for fiber in &fg.fibers {
        let Some(&(a, b)) = fiber.first() else {
            fibers_are_orbits = false;
            image_orbit.push(usize::MAX);
            continue;
        };
        let o = ug.orbit_of[a * d + b];
        let mut sorted = fiber.clone();
        sorted.sort_unstable();
        fibers_are_orbits &= sorted == ug.orbits[o];
        image_orbit.push(o);
    }
    let mut homomorphism = fibers_are_orbits && block.dim() == ug.algebra.dim();
    if homomorphism {
        homomorphism = block.isomorphic_via(&ug.algebra, &image_orbit);
    }
    if homomorphism {
        let picks = [(0, 0), (m - 1, 0), (m / 2, m.saturating_sub(1))];
        for (i, j) in picks {
            homomorphism &= ug.full_product_matches(duals, image_orbit[i], image_orbit[j])?;
        }
    }

    // F as a |H|² × |Z| 0/1 matrix, and the orbit indicator matrix
    let indicator = |cols: &[Vec<(usize, usize)>]| -> Result<CycMatrix> {
        let mut w = vec![0i128; d * d * cols.len()];
        for (c, pairs) in cols.iter().enumerate() {
            for &(a, b) in pairs {
                w[(a * d + b) * cols.len() + c] += 1;
            }
        }
        CycMatrix::new(d * d, cols.len(), CycVec::from_wide(1, w, 1)?)
    };
    let f_mat = indicator(&fg.fibers)?;
    let rank = linalg::rank(&f_mat)?;
    let image_equals_ug = linalg::same_column_space(&f_mat, &indicator(&ug.orbits)?)?;

    let mut equivariant = true;
    let hl = h.local();
    for _ in 0..equivariance_samples {
        let a = rng.random_range(0..d);
        let a2 = rng.random_range(0..d);
        let g2 = grp.mul(grp.mul(h.global(a), fg.g), h.global(a2));
        let moved = f_g_fibers(grp, h, z, g2)?;
        let (ainv, a2inv) = (hl.inv(a), hl.inv(a2));
        for (y, fiber) in fg.fibers.iter().enumerate() {
            let mut image: Vec<(usize, usize)> =
                fiber.iter().map(|&(x, w)| (hl.mul(x, ainv), hl.mul(a2inv, w))).collect();
            image.sort_unstable();
            let mut target = moved.fibers[y].clone();
            target.sort_unstable();
            equivariant &= image == target;
        }
    }
    Ok(FgAudit {
        homomorphism,
        rank,
        injective: rank == m,
        equivariant,
        image_equals_ug,
    })
}
