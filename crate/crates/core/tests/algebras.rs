mod common;

use cotwist::correspondence::Engine;
use cotwist::dual_algebras::{a2_to_a1op_iso, build_a1_a2_star, build_block_algebra, cross_coset_products_vanish};
use cotwist::groups::{build_elementary_abelian_symplectic, double_cosets, Subgroup};
use cotwist::linalg::{self, float, CMat, CycMatrix};
use cotwist::projective::intertwiner;
use cotwist::semisimple::{split_simple, wedderburn_dims};
use cotwist::twist::{symplectic_twist, TwistCandidate, TwistData};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{s4_klein, symplectic};

fn sympl(p: u32) -> TwistData {
    let (h, sigma) = build_elementary_abelian_symplectic(p, 1).unwrap();
    symplectic_twist(&Subgroup::whole(h), &sigma).unwrap().0
}

#[test]
fn trivial_twist_blocks_are_commutative() {
    let mut inst = s4_klein();
    inst.twist = TwistCandidate::trivial(inst.h.clone()).unwrap();
    let (t, _) = inst.twist.clone().verify().unwrap();
    for z in double_cosets(&inst.h) {
        let b = build_block_algebra(&inst.group, &inst.h, &t, &z).unwrap();
        let m = z.len();
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    let want = (i == j && j == k) as i64;
                    assert!(b.consts().entry_is_rational(b.idx(i, j, k), want, 1));
                }
            }
        }
    }
}

#[test]
fn a1_star_is_simple_with_regular_action() {
    let t = sympl(3);
    let duals = build_a1_a2_star(&t).unwrap();
    assert_eq!(wedderburn_dims(&duals.a1, 0, 1e-8).unwrap().dims, vec![3]);
    assert_eq!(wedderburn_dims(&duals.a2, 0, 1e-8).unwrap().dims, vec![3]);
    let g = t.group();
    for h in 0..9 {
        // h·y = y only for h = e
        let fixed = (0..9).filter(|&y| g.mul(h, y) == y).count();
        assert_eq!(fixed, if h == 0 { 9 } else { 0 });
        assert_eq!(duals.rho1.trace(h), fixed);
        assert_eq!(duals.rho2.trace(h), fixed);
    }
}

#[test]
fn example_blocks() {
    let inst = symplectic(3, &[[[1, 0], [0, 2]]]);
    let (t, _) = inst.twist.clone().verify().unwrap();
    let cosets = double_cosets(&inst.h);
    for z in &cosets {
        let b = build_block_algebra(&inst.group, &inst.h, &t, z).unwrap();
        // unit = Σ_y δ_y
        assert!((0..z.len()).all(|i| b.unit().entry_is_rational(i, 1, 1)));
    }
    let b = build_block_algebra(&inst.group, &inst.h, &t, &cosets[1]).unwrap();
    assert_eq!(b.dim(), 9);
    assert_eq!(b.center_basis().unwrap().len(), 1);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    assert!(cross_coset_products_vanish(&inst.group, &inst.h, &t, &cosets, 30, &mut rng));
}

#[test]
fn cross_coset_products_vanish_in_s4() {
    let inst = s4_klein();
    let (t, _) = inst.twist.clone().verify().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    assert!(cross_coset_products_vanish(&inst.group, &inst.h, &t, &double_cosets(&inst.h), 50, &mut rng));
}

#[test]
fn a2_to_a1op_trivial_is_inversion() {
    let (h, _) = build_elementary_abelian_symplectic(3, 1).unwrap();
    let (t, _) = TwistCandidate::trivial(Subgroup::whole(h)).unwrap().verify().unwrap();
    let q = t.q_element_and_antipode_check().unwrap();
    let duals = build_a1_a2_star(&t).unwrap();
    let map = a2_to_a1op_iso(&t, &q, &duals).unwrap();
    let g = t.group();
    for x in 0..9 {
        for y in 0..9 {
            let want = (y == g.inv(x)) as i64;
            assert!(map.matrix.entry_is_rational(x * 9 + y, want, 1));
        }
    }
}

#[test]
fn a2_to_a1op_symplectic() {
    for p in [3usize, 5] {
        let t = sympl(p as u32);
        let q = t.q_element_and_antipode_check().unwrap();
        let duals = build_a1_a2_star(&t).unwrap();
        let map = a2_to_a1op_iso(&t, &q, &duals).unwrap();
        assert!(map.audit.passed());
        let d = p * p;
        let m = CycMatrix::new(d, d, map.matrix.clone()).unwrap();
        assert_eq!(linalg::rank(&m).unwrap(), d);
        let f = CMat::from_row_slice(d, d, &map.matrix.embed());
        assert_eq!(float::rank(&f, 1e-9), d);
    }
}

#[test]
fn split_a1_star() {
    for p in [3usize, 5] {
        let t = sympl(p as u32);
        let a = build_a1_a2_star(&t).unwrap().a1.to_float();
        let pi = split_simple(&a, 0, 1e-8).unwrap();
        assert_eq!(pi.n, p);
        assert!(pi.homomorphism_residual(&a) < 1e-9);
        assert_eq!(pi.span_dimension(), p * p);
        // flattened matrices have full rank p² (independent of span_dimension)
        let mut flat = CMat::zeros(p * p, p * p);
        for (i, m) in pi.mats.iter().enumerate() {
            for (k, z) in m.iter().enumerate() {
                flat[(k, i)] = *z;
            }
        }
        assert!(flat.singular_values().min() > 1e-8);
    }
}

#[test]
fn split_outputs_are_equivalent() {
    let t = sympl(3);
    let a = build_a1_a2_star(&t).unwrap().a1.to_float();
    let p1 = split_simple(&a, 1, 1e-8).unwrap();
    let p2 = split_simple(&a, 2, 1e-8).unwrap();
    let x = intertwiner(&p1.mats, &p2.mats, 1e-8).unwrap();
    for (s, d) in p1.mats.iter().zip(&p2.mats) {
        assert!(float::max_abs(&(&x * s - d * &x)) < 1e-6);
    }
}

#[test]
fn block_count_is_center_dimension() {
    let e = {
        let inst = s4_klein();
        let (t, _) = inst.twist.clone().verify().unwrap();
        Engine::new(inst.group.clone(), inst.h.clone(), t, 0, 1e-8).unwrap()
    };
    for z in double_cosets(&e.h) {
        let b = build_block_algebra(&e.group, &e.h, &e.twist, &z).unwrap();
        let spectrum = wedderburn_dims(&b, 0, 1e-8).unwrap();
        assert_eq!(spectrum.dims.len(), b.center_basis().unwrap().len());
        assert_eq!(spectrum.dims.iter().map(|d| d * d).sum::<usize>(), b.dim());
        assert!(spectrum.idempotent_residual < 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn wedderburn_is_seed_independent(seed in any::<u64>()) {
        let inst = symplectic(3, &[[[1, 0], [0, 2]]]);
        let (t, _) = inst.twist.clone().verify().unwrap();
        for z in double_cosets(&inst.h) {
            let b = build_block_algebra(&inst.group, &inst.h, &t, &z).unwrap();
            prop_assert_eq!(
                wedderburn_dims(&b, seed, 1e-8).unwrap().dims,
                wedderburn_dims(&b, 0, 1e-8).unwrap().dims
            );
        }
    }
}
