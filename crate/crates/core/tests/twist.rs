use std::sync::Arc;

use cotwist::groups::{build_elementary_abelian_symplectic, symmetric_group, Bicharacter, FiniteGroup, Subgroup};
use cotwist::scalars::{CycVec, Cyclotomic, Rational};
use cotwist::twist::{invert_twist, symplectic_twist, TwistCandidate, TwistData};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn sympl(p: u32) -> (TwistData, Bicharacter) {
    let (h, sigma) = build_elementary_abelian_symplectic(p, 1).unwrap();
    let (t, audit) = symplectic_twist(&Subgroup::whole(h), &sigma).unwrap();
    assert!(audit.passed());
    (t, sigma)
}

/// Naive product in C[H]⊗C[H] on coefficient vectors.
fn naive_mul(g: &FiniteGroup, x: &[Cyclotomic], y: &[Cyclotomic]) -> Vec<Cyclotomic> {
    let d = g.order();
    let mut out = vec![Cyclotomic::zero(x[0].order()).unwrap(); d * d];
    for i in 0..d * d {
        if x[i].is_zero() {
            continue;
        }
        for k in 0..d * d {
            if y[k].is_zero() {
                continue;
            }
            let at = g.mul(i / d, k / d) * d + g.mul(i % d, k % d);
            out[at] = &out[at] + &(&x[i] * &y[k]);
        }
    }
    out
}

fn is_unit(v: &[Cyclotomic]) -> bool {
    v[0].is_one() && v[1..].iter().all(Cyclotomic::is_zero)
}

#[test]
fn coefficients_p3() {
    let (t, _) = sympl(3);
    let g = t.group();
    let ninth = Rational::new(1.into(), 9.into());
    for b in 0..9 {
        assert_eq!(t.coefficient(0, b), Cyclotomic::from_rational(3, ninth.clone()).unwrap());
    }
    let (a, b) = (g.find_label(&[1, 0]).unwrap(), g.find_label(&[0, 1]).unwrap());
    assert_eq!(t.coefficient(a, b), Cyclotomic::zeta_pow(3, 1).unwrap().scale(&ninth));
    // (ε⊗id)(J): column sums
    for b in 0..9 {
        let s = (0..9).fold(Cyclotomic::zero(3).unwrap(), |acc, a| &acc + &t.coefficient(a, b));
        assert_eq!(s.is_one(), b == 0);
        assert_eq!(s.is_zero(), b != 0);
    }
}

#[test]
fn inverse_of_symplectic_twist() {
    for p in [3, 5] {
        let (t, sigma) = sympl(p);
        let d = t.dim() as i64;
        let jinv = t.jinv().to_cyclotomics();
        for (i, s) in sigma.values().iter().enumerate() {
            assert_eq!(jinv[i], s.conj().scale(&Rational::new(1.into(), d.into())));
        }
        assert!(is_unit(&naive_mul(t.group(), &jinv, &t.j().to_cyclotomics())));
    }
}

#[test]
fn inverse_of_trivial_twist() {
    let (h, _) = build_elementary_abelian_symplectic(3, 1).unwrap();
    let (t, _) = TwistCandidate::trivial(Subgroup::whole(h)).unwrap().verify().unwrap();
    assert_eq!(t.jinv().to_cyclotomics(), t.j().to_cyclotomics());
}

#[test]
fn audits() {
    let (t, _) = sympl(3);
    let h = t.subgroup().clone();
    let (a, _) = TwistCandidate::trivial(h.clone()).unwrap().audit().unwrap();
    assert!(a.passed());
    let mut vals = t.j().to_cyclotomics();
    vals[4 * 9 + 7] = &vals[4 * 9 + 7] + &vals[4 * 9 + 7];
    let bad = TwistCandidate::new(h, CycVec::from_cyclotomics(3, &vals).unwrap()).unwrap();
    let (a, _) = bad.clone().audit().unwrap();
    assert!(!a.two_cocycle);
    assert!(a.failed().contains(&"two_cocycle"));
    let err = bad.verify().unwrap_err().to_string();
    assert!(err.contains("two_cocycle"), "{err}");
}

#[test]
fn triangular_structures() {
    let (h, _) = build_elementary_abelian_symplectic(3, 1).unwrap();
    let (t, _) = TwistCandidate::trivial(Subgroup::whole(h.clone())).unwrap().verify().unwrap();
    let tri = t.triangular_structure().unwrap();
    assert!(is_unit(&tri.r.to_cyclotomics()));
    assert_eq!((tri.rank, tri.minimal), (1, false));
    let (t1, _) = TwistCandidate::trivial(Subgroup::trivial(h)).unwrap().verify().unwrap();
    assert!(t1.triangular_structure().unwrap().minimal);
    assert!(t1.square_dimension_check());

    for p in [3usize, 5] {
        let (t, _) = sympl(p as u32);
        let tri = t.triangular_structure().unwrap();
        assert_eq!(tri.rank, p * p);
        assert!(tri.minimal);
        assert!(t.square_dimension_check());
        // float oracle for the rank
        let d = p * p;
        let m = DMatrix::from_row_slice(d, d, &tri.r.embed());
        let sv = m.singular_values();
        assert!(sv.min() > 1e-8 * sv.max());
    }
}

#[test]
fn non_square_subgroup_is_not_minimal() {
    let s4 = symmetric_group(4).unwrap();
    let even: Vec<usize> = (0..24)
        .filter(|&i| {
            let p = s4.label(i).unwrap();
            let inversions = (0..4).flat_map(|a| (a + 1..4).map(move |b| (a, b))).filter(|&(a, b)| p[a] > p[b]).count();
            inversions % 2 == 0
        })
        .collect();
    let a4 = Subgroup::new(s4, &even).unwrap();
    let (t, _) = TwistCandidate::trivial(a4).unwrap().verify().unwrap();
    assert!(!t.square_dimension_check());
    assert!(!t.triangular_structure().unwrap().minimal);
}

#[test]
fn q_element() {
    let (h, _) = build_elementary_abelian_symplectic(3, 1).unwrap();
    let (t, _) = TwistCandidate::trivial(Subgroup::whole(h)).unwrap().verify().unwrap();
    let q = t.q_element_and_antipode_check().unwrap();
    assert!(q.pass);
    let v = q.q.to_cyclotomics();
    assert!(v[0].is_one() && v[1..].iter().all(Cyclotomic::is_zero));
    for p in [3, 5] {
        let (t, _) = sympl(p);
        let q = t.q_element_and_antipode_check().unwrap();
        assert!(q.pass);
        // Q·Q⁻¹ = e in C[H]
        let g = t.group();
        let (a, b) = (q.q.to_cyclotomics(), q.q_inv.to_cyclotomics());
        let mut prod = vec![Cyclotomic::zero(q.q.order()).unwrap(); g.order()];
        for x in 0..g.order() {
            for y in 0..g.order() {
                prod[g.mul(x, y)] = &prod[g.mul(x, y)] + &(&a[x] * &b[y]);
            }
        }
        assert!(prod[0].is_one() && prod[1..].iter().all(Cyclotomic::is_zero));
    }
}

#[test]
fn file_round_trip() {
    let (t, _) = sympl(3);
    let text = t.to_file_string();
    let back = TwistCandidate::parse(&text, t.subgroup().clone()).unwrap();
    assert_eq!(back.coefficients().to_cyclotomics(), t.j().to_cyclotomics());
    assert!(TwistCandidate::parse("3 4\n", t.subgroup().clone()).is_err());
    assert!(TwistCandidate::parse("", t.subgroup().clone()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    /// Powers σ^k of the symplectic form give further minimal twists.
    #[test]
    fn twist_family_properties(p in prop::sample::select(vec![3u32, 5]), k in 1i64..5) {
        prop_assume!(k % p as i64 != 0);
        let (h, sigma) = build_elementary_abelian_symplectic(p, 1).unwrap();
        let d = h.order();
        let vals: Vec<Cyclotomic> = sigma
            .values()
            .iter()
            .map(|s| s.galois(k).scale(&Rational::new(1.into(), (d as i64).into())))
            .collect();
        let hs = Subgroup::whole(Arc::new((*h).clone()));
        let (t, _) = TwistCandidate::new(hs, CycVec::from_cyclotomics(p as usize, &vals).unwrap())
            .unwrap()
            .verify()
            .unwrap();
        let tri = t.triangular_structure().unwrap();
        prop_assert!(tri.minimal);
        prop_assert!(t.square_dimension_check());
        prop_assert!(t.q_element_and_antipode_check().unwrap().pass);
        let back = invert_twist(t.group(), t.jinv()).unwrap();
        prop_assert_eq!(back.to_cyclotomics(), t.j().to_cyclotomics());
    }
}
