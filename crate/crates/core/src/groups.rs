//! Finite groups as Cayley tables, subgroups, double cosets and bicharacters.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalars::Cyclotomic;

/// Largest group order handled.
pub const MAX_GROUP_ORDER: usize = 10_000;

/// Groups up to this order get an exhaustive associativity audit.
const EXHAUSTIVE_AUDIT: usize = 1000;

/// A finite group on `0..n` with identity 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<u16>,
    inv: Vec<u16>,
    /// Optional integer tuple attached to each element (vector coordinates or
    /// permutation images).
    labels: Option<Vec<Vec<u32>>>,
    /// Modulus of vector labels, for elementary abelian groups.
    modulus: Option<u32>,
}

impl FiniteGroup {
    /// Validates a row-major Cayley table (`table[g * n + h]` = index of g·h).
    pub fn from_table(order: usize, table: Vec<usize>) -> Result<Self> {
        if order == 0 || order > MAX_GROUP_ORDER {
            return Err(Error::Group(format!("order {order} outside 1..={MAX_GROUP_ORDER}")));
        }
        if table.len() != order * order {
            return Err(Error::Group(format!(
                "table has {} entries, expected {}",
                table.len(),
                order * order
            )));
        }
        if let Some(&bad) = table.iter().find(|&&x| x >= order) {
            return Err(Error::Group(format!("entry {bad} out of range")));
        }
        let mul: Vec<u16> = table.iter().map(|&x| x as u16).collect();
        for x in 0..order {
            if mul[x] as usize != x || mul[x * order] as usize != x {
                return Err(Error::Group("index 0 is not the identity".into()));
            }
        }
        let mut inv = vec![u16::MAX; order];
        for x in 0..order {
            match (0..order).find(|&y| mul[x * order + y] == 0) {
                Some(y) if mul[y * order + x] == 0 => inv[x] = y as u16,
                _ => return Err(Error::Group(format!("element {x} has no two-sided inverse"))),
            }
        }
        let g = FiniteGroup {
            order,
            mul,
            inv,
            labels: None,
            modulus: None,
        };
        g.audit_associativity()?;
        Ok(g)
    }

    /// Parses the text format: line 1 `n`, then n rows of n indices.
    pub fn parse_cayley(text: &str) -> Result<Self> {
        let mut tokens = text.split_whitespace();
        let n: usize = tokens
            .next()
            .ok_or_else(|| Error::Parse("empty Cayley file".into()))?
            .parse()
            .map_err(|e| Error::Parse(format!("group order: {e}")))?;
        let table = tokens
            .map(|t| t.parse::<usize>().map_err(|e| Error::Parse(format!("table entry {t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::from_table(n, table)
    }

    fn audit_associativity(&self) -> Result<()> {
        let n = self.order;
        let check = |a: usize, b: usize, c: usize| self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c));
        if n <= EXHAUSTIVE_AUDIT {
            for a in 0..n {
                for b in 0..n {
                    let ab = self.mul(a, b);
                    for c in 0..n {
                        if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                            return Err(Error::Group(format!("not associative at ({a}, {b}, {c})")));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            for _ in 0..1_000_000 {
                let (a, b, c) = (rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n));
                if !check(a, b, c) {
                    return Err(Error::Group(format!("not associative at ({a}, {b}, {c})")));
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    /// g·a·g⁻¹
    #[inline]
    pub fn conj(&self, g: usize, a: usize) -> usize {
        self.mul(self.mul(g, a), self.inv(g))
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let (mut x, mut k) = (a, 1);
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Row-major Cayley table.
    pub fn table(&self) -> Vec<usize> {
        self.mul.iter().map(|&x| x as usize).collect()
    }

    pub fn label(&self, a: usize) -> Option<&[u32]> {
        self.labels.as_ref().map(|l| l[a].as_slice())
    }

    pub fn find_label(&self, label: &[u32]) -> Option<usize> {
        self.labels.as_ref()?.iter().position(|l| l == label)
    }

    pub fn modulus(&self) -> Option<u32> {
        self.modulus
    }

    /// Cayley file text.
    pub fn to_cayley_string(&self) -> String {
        let mut s = format!("{}\n", self.order);
        for row in self.mul.chunks(self.order) {
            let r: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            s.push_str(&r.join(" "));
            s.push('\n');
        }
        s
    }
}

/// A subgroup, with its induced group structure on local indices.
#[derive(Clone, Debug)]
pub struct Subgroup {
    parent: Arc<FiniteGroup>,
    elements: Vec<usize>,
    position: Vec<Option<u16>>,
    local: FiniteGroup,
}

impl Subgroup {
    /// Validates that `elements` is a subgroup of `parent`.
    pub fn new(parent: Arc<FiniteGroup>, elements: &[usize]) -> Result<Self> {
        let mut elements = elements.to_vec();
        elements.sort_unstable();
        elements.dedup();
        let n = parent.order();
        if elements.iter().any(|&x| x >= n) {
            return Err(Error::Group("subgroup element out of range".into()));
        }
        if elements.first() != Some(&0) {
            return Err(Error::Group("subgroup does not contain the identity".into()));
        }
        let mut position = vec![None; n];
        for (i, &x) in elements.iter().enumerate() {
            position[x] = Some(i as u16);
        }
        let k = elements.len();
        let mut table = Vec::with_capacity(k * k);
        for &a in &elements {
            if position[parent.inv(a)].is_none() {
                return Err(Error::Group(format!("subgroup not closed under inverse at {a}")));
            }
            for &b in &elements {
                match position[parent.mul(a, b)] {
                    Some(p) => table.push(p as usize),
                    None => return Err(Error::Group(format!("subgroup not closed at {a}·{b}"))),
                }
            }
        }
        let mut local = FiniteGroup::from_table(k, table)?;
        if let Some(l) = &parent.labels {
            local.labels = Some(elements.iter().map(|&x| l[x].clone()).collect());
            local.modulus = parent.modulus;
        }
        Ok(Subgroup {
            parent,
            elements,
            position,
            local,
        })
    }

    /// The whole group as a subgroup of itself.
    pub fn whole(parent: Arc<FiniteGroup>) -> Self {
        let all: Vec<usize> = (0..parent.order()).collect();
        Self::new(parent, &all).expect("a group is a subgroup of itself")
    }

    pub fn trivial(parent: Arc<FiniteGroup>) -> Self {
        Self::new(parent, &[0]).expect("identity subgroup")
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.position[x].is_some()
    }

    /// Local index of a parent element.
    pub fn local_index(&self, x: usize) -> Option<usize> {
        self.position[x].map(|p| p as usize)
    }

    /// Parent element at a local index.
    pub fn global(&self, i: usize) -> usize {
        self.elements[i]
    }

    /// The induced group on local indices.
    pub fn local(&self) -> &FiniteGroup {
        &self.local
    }
}

/// A double coset HgH.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleCoset {
    pub representative: usize,
    pub elements: Vec<usize>,
}

impl DoubleCoset {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }
}

/// The double coset H·g·H.
pub fn double_coset_of(h: &Subgroup, g: usize) -> DoubleCoset {
    let grp = h.parent();
    let mut elements: Vec<usize> = h
        .elements()
        .iter()
        .flat_map(|&a| {
            let ag = grp.mul(a, g);
            h.elements().iter().map(move |&b| grp.mul(ag, b))
        })
        .collect();
    elements.sort_unstable();
    elements.dedup();
    DoubleCoset {
        representative: elements[0],
        elements,
    }
}

/// Partition of G into double cosets, sorted by minimal element.
pub fn double_cosets(h: &Subgroup) -> Vec<DoubleCoset> {
    let n = h.parent().order();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for g in 0..n {
        if seen[g] {
            continue;
        }
        let z = double_coset_of(h, g);
        for &x in &z.elements {
            seen[x] = true;
        }
        out.push(z);
    }
    out
}

/// K_g = H ∩ gHg⁻¹, as a subgroup of G.
pub fn stabilizer_kg(h: &Subgroup, g: usize) -> Subgroup {
    let grp = h.parent();
    let gi = grp.inv(g);
    let elems: Vec<usize> = h
        .elements()
        .iter()
        .copied()
        .filter(|&a| h.contains(grp.conj(gi, a)))
        .collect();
    Subgroup::new(grp.clone(), &elems).expect("intersection of subgroups")
}

/// A bicharacter σ : H × H → μ_N on an abelian group.
#[derive(Clone, Debug)]
pub struct Bicharacter {
    group: Arc<FiniteGroup>,
    order: usize,
    values: Vec<Cyclotomic>,
}

impl Bicharacter {
    /// Checks multiplicativity, skew-symmetry and nondegeneracy.
    pub fn new(group: Arc<FiniteGroup>, order: usize, values: Vec<Cyclotomic>) -> Result<Self> {
        let n = group.order();
        if values.len() != n * n {
            return Err(Error::Group("bicharacter table has the wrong size".into()));
        }
        if !group.is_abelian() {
            return Err(Error::Group("bicharacter on a non-abelian group".into()));
        }
        let b = Bicharacter { group, order, values };
        let g = &b.group;
        for a in 0..n {
            for c in 0..n {
                if b.value(a, c) != &b.value(c, a).conj() {
                    return Err(Error::Group(format!("bicharacter not skew at ({a}, {c})")));
                }
                for d in 0..n {
                    if b.value(g.mul(a, c), d) != &(b.value(a, d) * b.value(c, d)) {
                        return Err(Error::Group(format!("bicharacter not multiplicative at ({a}, {c}, {d})")));
                    }
                }
            }
            if a != 0 && (0..n).all(|c| b.value(a, c).is_one()) {
                return Err(Error::Group(format!("bicharacter degenerate at {a}")));
            }
        }
        Ok(b)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    /// Cyclotomic order of the values.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self, a: usize, b: usize) -> &Cyclotomic {
        &self.values[a * self.group.order() + b]
    }

    pub fn values(&self) -> &[Cyclotomic] {
        &self.values
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// (Z/p)^{2n} with the standard symplectic form, elements in lexicographic order.
pub fn build_elementary_abelian_symplectic(p: u32, n: usize) -> Result<(Arc<FiniteGroup>, Bicharacter)> {
    if p % 2 == 0 || !is_prime(p as u64) {
        return Err(Error::Group(format!("p = {p} must be an odd prime")));
    }
    if n == 0 {
        return Err(Error::Group("n must be positive".into()));
    }
    let dim = 2 * n;
    let size = (p as u64)
        .checked_pow(dim as u32)
        .filter(|&s| s <= MAX_GROUP_ORDER as u64)
        .ok_or_else(|| Error::Group(format!("p^(2n) = {p}^{dim} exceeds {MAX_GROUP_ORDER}")))?
        as usize;
    let coords: Vec<Vec<u32>> = (0..size).map(|i| index_to_vector(i, p, dim)).collect();
    let mut table = Vec::with_capacity(size * size);
    for a in &coords {
        for b in &coords {
            let s: Vec<u32> = a.iter().zip(b).map(|(x, y)| (x + y) % p).collect();
            table.push(vector_to_index(&s, p));
        }
    }
    let mut group = FiniteGroup::from_table(size, table)?;
    group.labels = Some(coords.clone());
    group.modulus = Some(p);
    let group = Arc::new(group);
    let mut values = Vec::with_capacity(size * size);
    for a in &coords {
        for b in &coords {
            let (x, y) = a.split_at(n);
            let (x2, y2) = b.split_at(n);
            let dot = |u: &[u32], v: &[u32]| u.iter().zip(v).map(|(s, t)| (s * t) as i64).sum::<i64>();
            let e = (dot(x, y2) - dot(y, x2)).rem_euclid(p as i64);
            values.push(Cyclotomic::zeta_pow(p as usize, e)?);
        }
    }
    let sigma = Bicharacter::new(group.clone(), p as usize, values)?;
    Ok((group, sigma))
}

fn index_to_vector(mut i: usize, p: u32, dim: usize) -> Vec<u32> {
    let mut v = vec![0u32; dim];
    for slot in v.iter_mut().rev() {
        *slot = (i % p as usize) as u32;
        i /= p as usize;
    }
    v
}

fn vector_to_index(v: &[u32], p: u32) -> usize {
    v.iter().fold(0usize, |acc, &x| acc * p as usize + x as usize)
}

/// Square matrix over Z/p, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModMatrix {
    pub dim: usize,
    pub p: u32,
    pub entries: Vec<u32>,
}

impl ModMatrix {
    pub fn new(dim: usize, p: u32, entries: &[i64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::Group(format!(
                "generator has {} entries, expected {}",
                entries.len(),
                dim * dim
            )));
        }
        Ok(ModMatrix {
            dim,
            p,
            entries: entries.iter().map(|&x| x.rem_euclid(p as i64) as u32).collect(),
        })
    }

    pub fn identity(dim: usize, p: u32) -> Self {
        let mut entries = vec![0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1 % p;
        }
        ModMatrix { dim, p, entries }
    }

    pub fn mul(&self, other: &ModMatrix) -> ModMatrix {
        let d = self.dim;
        let p = self.p as u64;
        let mut entries = vec![0u32; d * d];
        for i in 0..d {
            for j in 0..d {
                let s: u64 = (0..d)
                    .map(|k| self.entries[i * d + k] as u64 * other.entries[k * d + j] as u64)
                    .sum();
                entries[i * d + j] = (s % p) as u32;
            }
        }
        ModMatrix { dim: d, p: self.p, entries }
    }

    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        let d = self.dim;
        (0..d)
            .map(|i| {
                let s: u64 = (0..d).map(|k| self.entries[i * d + k] as u64 * v[k] as u64).sum();
                (s % self.p as u64) as u32
            })
            .collect()
    }

    /// Determinant mod p.
    pub fn det(&self) -> u32 {
        let d = self.dim;
        let p = self.p as i64;
        let mut a: Vec<i64> = self.entries.iter().map(|&x| x as i64).collect();
        let mut det = 1i64;
        for c in 0..d {
            let Some(r) = (c..d).find(|&r| a[r * d + c] != 0) else {
                return 0;
            };
            if r != c {
                for k in 0..d {
                    a.swap(r * d + k, c * d + k);
                }
                det = (p - det) % p;
            }
            let piv = a[c * d + c];
            det = det * piv % p;
            let inv = mod_pow(piv, p - 2, p);
            for r2 in c + 1..d {
                let f = a[r2 * d + c] * inv % p;
                for k in c..d {
                    a[r2 * d + k] = (a[r2 * d + k] - f * a[c * d + k]).rem_euclid(p);
                }
            }
        }
        det as u32
    }
}

fn mod_pow(mut b: i64, mut e: i64, m: i64) -> i64 {
    let mut r = 1;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// The matrix group generated by `generators`, identity first.
pub fn matrix_closure(dim: usize, p: u32, generators: &[ModMatrix], limit: usize) -> Result<Vec<ModMatrix>> {
    let id = ModMatrix::identity(dim, p);
    let mut elems = vec![id.clone()];
    let mut index: HashMap<ModMatrix, usize> = HashMap::from([(id, 0)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for g in generators {
            let prod = elems[i].mul(g);
            if !index.contains_key(&prod) {
                if elems.len() >= limit {
                    return Err(Error::Group(format!("generated matrix group exceeds {limit} elements")));
                }
                index.insert(prod.clone(), elems.len());
                queue.push_back(elems.len());
                elems.push(prod);
            }
        }
    }
    Ok(elems)
}

/// A semidirect product H ⋊ Γ with H elementary abelian.
#[derive(Clone, Debug)]
pub struct Semidirect {
    pub group: Arc<FiniteGroup>,
    pub h: Subgroup,
    /// Elements of Γ; (h, γ_k) has index `k·|H| + h`.
    pub gamma: Vec<ModMatrix>,
}

/// G = H ⋊ Γ with (h, γ)(h', γ') = (h + γh', γγ').
pub fn build_semidirect(h: &FiniteGroup, generators: &[Vec<i64>]) -> Result<Semidirect> {
    let (Some(p), Some(coords)) = (h.modulus, h.labels.as_ref()) else {
        return Err(Error::Group("semidirect product needs a vector-labelled H".into()));
    };
    let dim = coords[0].len();
    let gens = generators
        .iter()
        .map(|g| ModMatrix::new(dim, p, g))
        .collect::<Result<Vec<_>>>()?;
    for (i, g) in gens.iter().enumerate() {
        if g.det() == 0 {
            return Err(Error::Group(format!("generator {i} is singular mod {p}")));
        }
    }
    let nh = h.order();
    let gamma = matrix_closure(dim, p, &gens, MAX_GROUP_ORDER / nh)?;
    let ng = gamma.len();
    let gindex: HashMap<&ModMatrix, usize> = gamma.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let gamma_mul: Vec<usize> = gamma
        .iter()
        .flat_map(|a| gamma.iter().map(|b| gindex[&a.mul(b)]).collect::<Vec<_>>())
        .collect();
    let action: Vec<usize> = gamma
        .iter()
        .flat_map(|m| coords.iter().map(|v| vector_to_index(&m.apply(v), p)).collect::<Vec<_>>())
        .collect();
    let n = nh * ng;
    let mut table = Vec::with_capacity(n * n);
    for a in 0..n {
        let (ga, ha) = (a / nh, a % nh);
        for b in 0..n {
            let (gb, hb) = (b / nh, b % nh);
            let hh = h.mul(ha, action[ga * nh + hb]);
            table.push(gamma_mul[ga * ng + gb] * nh + hh);
        }
    }
    let group = Arc::new(FiniteGroup::from_table(n, table)?);
    let hs = Subgroup::new(group.clone(), &(0..nh).collect::<Vec<_>>())?;
    Ok(Semidirect { group, h: hs, gamma })
}

/// The symmetric group on k letters, permutations in lexicographic order of
/// their image tuples, with (στ)(i) = σ(τ(i)).
pub fn symmetric_group(k: usize) -> Result<Arc<FiniteGroup>> {
    let mut perms: Vec<Vec<u32>> = Vec::new();
    let mut cur: Vec<u32> = (0..k as u32).collect();
    loop {
        perms.push(cur.clone());
        // next permutation
        let Some(i) = (1..k).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..k).rev().find(|&j| cur[j] > cur[i - 1]).expect("exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    if perms.len() > MAX_GROUP_ORDER {
        return Err(Error::Group(format!("S_{k} too large")));
    }
    let index: HashMap<&Vec<u32>, usize> = perms.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut table = Vec::with_capacity(perms.len() * perms.len());
    for s in &perms {
        for t in &perms {
            let st: Vec<u32> = t.iter().map(|&x| s[x as usize]).collect();
            table.push(index[&st]);
        }
    }
    let mut g = FiniteGroup::from_table(perms.len(), table)?;
    g.labels = Some(perms);
    Ok(Arc::new(g))
}
