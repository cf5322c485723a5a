#![allow(dead_code)]

use std::sync::Arc;

use cotwist::correspondence::{Construction, Instance};
use cotwist::groups::{symmetric_group, FiniteGroup, Subgroup};
use cotwist::scalars::{CycVec, Cyclotomic, Rational};
use cotwist::twist::TwistCandidate;

pub fn symplectic(p: u32, gens: &[[[i64; 2]; 2]]) -> Instance {
    let gamma_generators = gens
        .iter()
        .map(|m| m.iter().map(|r| r.to_vec()).collect())
        .collect();
    Instance::build(&Construction::Symplectic { p, n: 1, gamma_generators }).unwrap()
}

/// Index of the permutation with images `p` in `symmetric_group`.
pub fn perm(g: &FiniteGroup, p: &[u32]) -> usize {
    g.find_label(p).unwrap()
}

/// S_4 with the non-normal Klein four-group {e, (01), (23), (01)(23)} and the
/// twist J = ¼ Σ β(a,b) a⊗b, β(a,b) = (−1)^{a₁b₁ + a₁b₂ + a₂b₂}.
pub fn s4_klein() -> Instance {
    let g = symmetric_group(4).unwrap();
    let elems = [[0, 1, 2, 3], [1, 0, 2, 3], [0, 1, 3, 2], [1, 0, 3, 2]].map(|p| perm(&g, &p));
    let h = Subgroup::new(g.clone(), &elems).unwrap();
    let coord = |i: usize| {
        let p = g.label(h.global(i)).unwrap();
        ((p[0] == 1) as i64, (p[2] == 3) as i64)
    };
    let mut values = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            let ((x1, x2), (y1, y2)) = (coord(a), coord(b));
            let s = if (x1 * y1 + x1 * y2 + x2 * y2) % 2 == 0 { 1 } else { -1 };
            values.push(Cyclotomic::from_rational(1, Rational::new(s.into(), 4.into())).unwrap());
        }
    }
    let twist = TwistCandidate::new(h.clone(), CycVec::from_cyclotomics(1, &values).unwrap()).unwrap();
    Instance {
        group: g,
        h,
        twist,
        description: serde_json::json!({"type": "s4_klein"}),
    }
}

/// G with H = {e} and J = 1⊗1.
pub fn trivial_h(group: Arc<FiniteGroup>) -> Instance {
    let h = Subgroup::trivial(group.clone());
    Instance {
        group,
        twist: TwistCandidate::trivial(h.clone()).unwrap(),
        h,
        description: serde_json::json!({"type": "trivial"}),
    }
}
