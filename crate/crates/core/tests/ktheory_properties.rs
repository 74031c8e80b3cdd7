//! K-theory computations against brute-force counts.

use num_bigint::BigInt;
use proptest::prelude::*;

use omn_core::ktheory::oracle::{coker_hom_count, localized_coker_order, rational_rank};
use omn_core::ktheory::{
    cokernel, kernel, localized_coker_ker, crossed_product_kgroups, pv_dual_action_kgroups, six_term_kgroups, smith_normal_form,
    IntMatrix, LocalizedMap, Parity,
};

fn matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..4, 1usize..4)
        .prop_flat_map(|(r, c)| proptest::collection::vec(proptest::collection::vec(-6i64..=6, c), r))
        .prop_map(|rows| IntMatrix::from_i64(&rows).unwrap())
}

proptest! {
    #[test]
    fn cokernel_matches_hom_counts(m in matrix()) {
        let g = cokernel(&m).group;
        for modulus in [2u64, 3, 4, 5, 6] {
            prop_assert_eq!(g.hom_count(modulus), BigInt::from(coker_hom_count(&m, modulus)));
        }
    }

    #[test]
    fn rank_nullity(m in matrix()) {
        let (k, basis) = kernel(&m);
        prop_assert_eq!(k.free_rank + rational_rank(&m), m.cols());
        for v in basis {
            let v: Vec<BigInt> = v.into_iter().map(BigInt::from).collect();
            prop_assert!(m.apply(&v).iter().all(|x| x == &BigInt::from(0)));
        }
    }

    #[test]
    fn smith_form_reconstructs(m in matrix()) {
        let s = smith_normal_form(&m);
        prop_assert_eq!(s.u.mul(&m).unwrap().mul(&s.v).unwrap(), s.d.clone());
        prop_assert_eq!(s.u.mul(&s.u_inv).unwrap(), IntMatrix::identity(m.rows()));
    }
}

#[test]
fn localized_cokernels_match_congruence_search() {
    for d in 1..=10u64 {
        for c in -10..=10i64 {
            let (coker, ker) = localized_coker_ker(LocalizedMap { d, c }).unwrap();
            if c == 1 {
                assert!(!coker.is_finitely_generated() || d == 1);
                continue;
            }
            assert!(ker.is_trivial());
            let order: BigInt = coker.torsion.iter().product();
            assert_eq!(order, BigInt::from(localized_coker_order(LocalizedMap { d, c }, 8)), "d={d} c={c}");
        }
    }
}

#[test]
fn both_sequences_agree() {
    for m in 1..=12u32 {
        for n in 2..=12u32 {
            if num_integer::gcd(m, n) == 1 {
                assert_eq!(six_term_kgroups(m, n).unwrap(), pv_dual_action_kgroups(m, n).unwrap());
            }
        }
    }
}

#[test]
fn odd_case_generator_labels() {
    for n in 2..=10u32 {
        let r = crossed_product_kgroups(Parity::Odd, n).unwrap();
        assert_eq!(r.basis_orders[0].name, "e_0");
        assert_eq!(r.basis_orders[0].order, Some(n as u64 - 1));
        assert_eq!(serde_json::to_value(&r.k1).unwrap(), serde_json::json!({"free_rank": 1, "torsion": []}));
    }
}
