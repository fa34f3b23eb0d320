use num_traits::{One, Signed};
use proptest::prelude::*;

use schur::bar_oracle::{bar_h1, bar_h2, FiniteGroup, DEFAULT_CAP};
use schur::compose::{parse_expr, schur_multiplier, GroupExpr};
use schur::presentation::{abelianization, multiplier_bounds, Presentation, Word};
use schur::{cokernel_group, homology, snf, FgAbelianGroup, IntMatrix};

fn matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| {
        prop::collection::vec(-20i64..=20, r * c).prop_map(move |v| IntMatrix::from_i64(r, c, &v))
    })
}

fn abelian() -> impl Strategy<Value = FgAbelianGroup> {
    (0usize..=2, prop::collection::vec(1u64..=12, 0..=3))
        .prop_map(|(r, v)| FgAbelianGroup::normalize(r, v).unwrap())
}

fn leaf() -> impl Strategy<Value = GroupExpr> {
    prop_oneof![
        (1u64..=12).prop_map(GroupExpr::CyclicFinite),
        Just(GroupExpr::CyclicInfinite),
        abelian().prop_map(GroupExpr::AbelianLeaf),
        prop::sample::select(vec!["Q8", "S3", "D4", "A4"]).prop_map(|s| parse_expr(s).unwrap()),
    ]
}

fn expr() -> impl Strategy<Value = GroupExpr> {
    leaf().prop_recursive(3, 8, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| GroupExpr::free_product(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| GroupExpr::direct_product(a, b)),
        ]
    })
}

fn multiplier(e: &GroupExpr) -> FgAbelianGroup {
    schur_multiplier(e).unwrap().0
}

fn presentation() -> impl Strategy<Value = Presentation> {
    (1usize..=3).prop_flat_map(|n| {
        let word = prop::collection::vec((0..n, -3i64..=3), 0..=6).prop_map(Word::from_syllables);
        prop::collection::vec(word, 0..=4).prop_map(move |rels| {
            let names = (0..n).map(|i| format!("g{i}")).collect();
            Presentation::new(names, rels).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn snf_is_a_unimodular_diagonalization(m in matrix()) {
        let r = snf(&m);
        prop_assert_eq!(r.u.checked_mul(&m).unwrap().checked_mul(&r.v).unwrap(), r.d.clone());
        prop_assert!(r.u.determinant().unwrap().abs().is_one());
        prop_assert!(r.v.determinant().unwrap().abs().is_one());
    }

    #[test]
    fn snf_diagonal_is_transpose_invariant(m in matrix()) {
        prop_assert_eq!(snf(&m).diagonal(), snf(&m.transpose()).diagonal());
    }

    #[test]
    fn cokernel_order_is_the_determinant(v in prop::collection::vec(-9i64..=9, 9)) {
        let m = IntMatrix::from_i64(3, 3, &v);
        let det = m.determinant().unwrap();
        let g = cokernel_group(&m);
        match g.order() {
            Some(order) => prop_assert_eq!(order, det.abs()),
            None => prop_assert_eq!(det, 0.into()),
        }
    }

    #[test]
    fn homology_at_the_ends(m in matrix()) {
        let zero_out = IntMatrix::zeros(1, m.nrows());
        prop_assert_eq!(homology(&zero_out, &m).unwrap(), cokernel_group(&m));
        let zero_in = IntMatrix::zeros(m.ncols(), 0);
        prop_assert_eq!(homology(&m, &zero_in).unwrap(), FgAbelianGroup::free(m.ncols() - m.rank()));
    }

    #[test]
    fn presentation_invariants(p in presentation(), k in 0usize..5) {
        let base = (abelianization(&p), multiplier_bounds(&p));
        let mut reversed = p.relators().to_vec();
        reversed.reverse();
        let inverted = p.relators().iter().map(Word::inverse).collect();
        let rotated = p.relators().iter().map(|w| w.rotate(k)).collect();
        for rels in [reversed, inverted, rotated] {
            let q = p.with_relators(rels);
            prop_assert_eq!(&(abelianization(&q), multiplier_bounds(&q)), &base);
        }
    }

    #[test]
    fn hopf_bound(p in presentation()) {
        let b = multiplier_bounds(&p);
        prop_assert!(b.h2_complex.is_free());
        prop_assert!(b.rank_bound <= b.relator_bound);
    }

    #[test]
    fn composition_is_symmetric(a in expr(), b in expr()) {
        let ab = GroupExpr::direct_product(a.clone(), b.clone());
        let ba = GroupExpr::direct_product(b.clone(), a.clone());
        prop_assert_eq!(multiplier(&ab), multiplier(&ba));
        let ab = GroupExpr::free_product(a.clone(), b.clone());
        let ba = GroupExpr::free_product(b, a);
        prop_assert_eq!(multiplier(&ab), multiplier(&ba));
    }

    #[test]
    fn direct_product_is_associative(a in expr(), b in expr(), c in expr()) {
        let left = GroupExpr::direct_product(GroupExpr::direct_product(a.clone(), b.clone()), c.clone());
        let right = GroupExpr::direct_product(a, GroupExpr::direct_product(b, c));
        prop_assert_eq!(multiplier(&left), multiplier(&right));
    }

    #[test]
    fn abelian_groups_follow_the_exterior_square(a in abelian(), b in abelian()) {
        let e = GroupExpr::direct_product(GroupExpr::AbelianLeaf(a.clone()), GroupExpr::AbelianLeaf(b.clone()));
        prop_assert_eq!(multiplier(&e), a.direct_sum(&b).exterior_square());
    }

    #[test]
    fn display_round_trips(e in expr()) {
        let again = parse_expr(&e.to_string()).unwrap();
        prop_assert_eq!(multiplier(&again), multiplier(&e));
        prop_assert_eq!(again.to_string(), e.to_string());
    }
}

fn small_groups() -> Vec<FiniteGroup> {
    vec![
        FiniteGroup::cyclic(6),
        FiniteGroup::dihedral(4),
        FiniteGroup::quaternion8(),
        FiniteGroup::symmetric3(),
        FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(4)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn bar_homology_ignores_labels(which in 0usize..5, seed in any::<u64>()) {
        let g = &small_groups()[which];
        let mut perm: Vec<usize> = (0..g.order()).collect();
        let mut s = seed;
        for i in (1..perm.len()).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let h = g.relabel(&perm).unwrap();
        prop_assert_eq!(bar_h1(&h), bar_h1(g));
        prop_assert_eq!(bar_h2(&h, DEFAULT_CAP).unwrap(), bar_h2(g, DEFAULT_CAP).unwrap());
    }
}

#[test]
fn free_abelian_multipliers() {
    for n in 0..=7usize {
        let e = (0..n).fold(GroupExpr::CyclicFinite(1), |acc, _| {
            GroupExpr::direct_product(acc, GroupExpr::CyclicInfinite)
        });
        assert_eq!(
            multiplier(&e),
            FgAbelianGroup::free(n * n.saturating_sub(1) / 2)
        );
    }
}

#[test]
fn oracle_agrees_with_composition_on_mixed_products() {
    for text in [
        "S3 x Z/2",
        "Q8 x Z/2",
        "D4 x Z/3",
        "A4 x Z/2",
        "Z/2 x Z/2 x Z/2",
        "S3 x Z/4",
    ] {
        let e = parse_expr(text).unwrap();
        let g = schur::compose::to_finite_group(&e, DEFAULT_CAP).unwrap();
        assert_eq!(bar_h2(&g, DEFAULT_CAP).unwrap(), multiplier(&e), "{text}");
    }
}
