use minpool::pool::parse_pool;
use minpool::pool_search::{random_mcp, random_mcp_with, symmetry_adapted_mcp, SearchOptions};
use minpool::symmetry::{build_constraints, expected_pool_size, is_starter};
use minpool::{check_pool, CheckLevel, Error, SymmetrySpec};
use proptest::prelude::*;

#[test]
fn random_pools_pass_requested_level() {
    for n in 2..=7 {
        for level in [CheckLevel::Group, CheckLevel::Inseparable, CheckLevel::Algebra] {
            let pool = random_mcp(n, n as u64, level).unwrap();
            assert_eq!(pool.len(), 2 * n - 2);
            assert!(check_pool(pool.operators(), level, None).unwrap().complete, "n={n} {level}");
            assert_eq!(pool.meta.level, Some(level));
        }
    }
}

#[test]
fn adapted_pools_have_requested_starters() {
    for (spec, counts) in [
        (SymmetrySpec::h4(), vec![1, 3, 6, 9, 10]),
        (SymmetrySpec::lih(), vec![4, 8]),
        (SymmetrySpec::beh2(), vec![6]),
    ] {
        let cs = build_constraints(&spec);
        let level = CheckLevel::default_for(spec.n_qubits()).min(CheckLevel::Inseparable);
        for k in counts {
            let pool = symmetry_adapted_mcp(&spec, k, 5, level).unwrap();
            assert_eq!(pool.len(), expected_pool_size(&spec));
            assert_eq!(pool.operators().iter().filter(|p| is_starter(p, &spec)).count(), k);
            assert!(pool.operators().iter().all(|p| cs.satisfies(p) && p.is_odd()));
            assert!(check_pool(pool.operators(), level, Some(&spec)).unwrap().complete);
        }
    }
}

#[test]
fn adapted_pool_passes_algebra_level() {
    let spec = SymmetrySpec::h4();
    let pool = symmetry_adapted_mcp(&spec, 6, 11, CheckLevel::Algebra).unwrap();
    let report = check_pool(pool.operators(), CheckLevel::Algebra, Some(&spec)).unwrap();
    assert!(report.complete);
    assert_eq!(report.closure_size.map(|s| s as u128), report.closure_target);
}

#[test]
fn pool_files_round_trip() {
    let pool = symmetry_adapted_mcp(&SymmetrySpec::h4(), 4, 3, CheckLevel::Inseparable).unwrap();
    let (ops, meta) = parse_pool(&pool.to_file_string()).unwrap();
    assert_eq!(ops, pool.operators());
    assert_eq!(meta, pool.meta);
}

#[test]
fn infeasible_requests_are_errors() {
    assert!(matches!(random_mcp(1, 0, CheckLevel::Group), Err(Error::TooFewQubits(1))));
    assert!(matches!(
        symmetry_adapted_mcp(&SymmetrySpec::h4(), 11, 0, CheckLevel::Group),
        Err(Error::InfeasibleStarters { .. })
    ));
    let opts = SearchOptions {
        seed: 0,
        level: CheckLevel::Algebra,
        max_attempts: 0,
    };
    assert!(matches!(random_mcp_with(4, &opts), Err(Error::AttemptsExhausted { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn search_is_deterministic(seed in any::<u64>(), n in 2usize..=6) {
        let a = random_mcp(n, seed, CheckLevel::Algebra).unwrap();
        let b = random_mcp(n, seed, CheckLevel::Algebra).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert!(check_pool(a.operators(), CheckLevel::Algebra, None).unwrap().complete);
    }

    #[test]
    fn adapted_search_is_deterministic(seed in any::<u64>(), k in 1usize..=10) {
        let spec = SymmetrySpec::h4();
        let a = symmetry_adapted_mcp(&spec, k, seed, CheckLevel::Inseparable).unwrap();
        let b = symmetry_adapted_mcp(&spec, k, seed, CheckLevel::Inseparable).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert!(check_pool(a.operators(), CheckLevel::Inseparable, Some(&spec)).unwrap().complete);
    }
}
