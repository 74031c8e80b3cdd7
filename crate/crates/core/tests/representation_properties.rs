//! The shift representation on `ℓ²(Z[1/m])` and the solenoid representations.

use num_rational::BigRational;
use proptest::prelude::*;

use omn_core::algebra::{Algebra, Monomial};
use omn_core::numbers::rat;
use omn_core::random;
use omn_core::representations::solenoid::{brute_force_count, mobius_count, SolenoidPeriodicPoint};
use omn_core::representations::{
    monomial_affine_map, relation_residuals, solenoid_periodic_points, window_indices, Variant,
};

const PARAMS: [(u32, u32); 4] = [(1, 2), (2, 3), (3, 2), (3, 4)];

fn act(mon: &Monomial, alg: &Algebra, variant: Variant, q: &BigRational) -> Option<BigRational> {
    monomial_affine_map(mon, alg.params, variant).apply(q)
}

proptest! {
    #[test]
    fn action_is_multiplicative(idx in 0usize..4, seed in any::<u64>(), b_variant in any::<bool>()) {
        let (m, n) = PARAMS[idx];
        let alg = Algebra::new(m, n).unwrap();
        let variant = if b_variant { Variant::B } else { Variant::A };
        let mut rng = random::rng(seed);
        let a = random::monomial(&mut rng, alg.params, 3, 4);
        let b = random::monomial(&mut rng, alg.params, 3, 4);
        let ab = alg.mul_monomials(&a, &b);
        for q in window_indices(m, 12, 2) {
            let composed = act(&b, &alg, variant, &q).and_then(|r| act(&a, &alg, variant, &r));
            let direct = ab.as_ref().and_then(|p| act(p, &alg, variant, &q));
            prop_assert_eq!(composed, direct, "a = {}, b = {}, q = {}", a, b, q);
        }
    }

    #[test]
    fn ranges_partition_the_indices(idx in 0usize..4, num in -400i64..400, e in 0u32..3) {
        let (m, n) = PARAMS[idx];
        let alg = Algebra::new(m, n).unwrap();
        let q = rat(num, (m as i64).pow(e));
        for variant in [Variant::A, Variant::B] {
            let hits = (1..=n).filter(|&i| act(&Monomial::s_star(i), &alg, variant, &q).is_some()).count();
            prop_assert_eq!(hits, 1);
        }
    }
}

#[test]
fn relations_hold_in_both_variants() {
    for (m, n) in PARAMS {
        let alg = Algebra::new(m, n).unwrap();
        for variant in [Variant::A, Variant::B] {
            let r = relation_residuals(variant, alg.params, 64, 2);
            assert!(r.passed(0.95), "({m},{n}) {variant:?}: {} violations, coverage {}", r.violations, r.coverage);
        }
    }
}

#[test]
fn periodic_point_counts() {
    for m in 2..=4u64 {
        for k in 1..=6u32 {
            if m.pow(k) > 5000 {
                continue;
            }
            let points = solenoid_periodic_points(m, k).unwrap();
            assert_eq!(points.len() as i64, mobius_count(m, k), "m={m} k={k}");
            if m.pow(k) <= 300 {
                assert_eq!(points.len(), brute_force_count(m, k), "m={m} k={k}");
            }
            assert!(points.iter().all(SolenoidPeriodicPoint::is_consistent));
        }
    }
}
