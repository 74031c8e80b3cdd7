use omn_core::algebra::Algebra;
use omn_core::entropy;
use omn_core::reproduce;

#[test]
fn criterion_ids_are_bounded() {
    assert!(reproduce::run_criterion(0, 1).is_err());
    assert!(reproduce::run_criterion(10, 1).is_err());
    assert_eq!(reproduce::TITLES.len(), 9);
}

#[test]
fn criteria_are_deterministic_in_the_seed() {
    let a = reproduce::run_criterion(9, 5).unwrap();
    let b = reproduce::run_criterion(9, 5).unwrap();
    assert_eq!(a.details, b.details);
}

#[test]
fn orbit_span_grows_linearly() {
    // The span of the orbit elements alone grows linearly, which is why the
    // dimension count uses the monomials of each Φ^l(x).
    let t = entropy::entropy_estimate(&Algebra::new(1, 2).unwrap(), 0, 6, 100_000).unwrap();
    let orbit: Vec<usize> = t.rows.iter().map(|r| r.orbit_dimension).collect();
    assert_eq!(orbit, (1..=6).map(|n| 2 * n + 1).collect::<Vec<_>>());
}
