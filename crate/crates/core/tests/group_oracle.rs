mod common;

use std::collections::HashSet;

use common::*;
use minpool::catalog;
use minpool::group::{build_group, inseparability, lie_closure, odd_count_target};
use minpool::symmetry::{build_constraints, is_starter, CharacterColumn};
use minpool::{check_pool, CheckLevel, PauliString, SymmetrySpec};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_pool(rng: &mut ChaCha8Rng, n: usize, size: usize) -> Vec<PauliString> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    while out.len() < size {
        let p = random_odd(rng, n);
        if seen.insert(p) {
            out.push(p);
        }
    }
    out
}

fn elements(pool: &[PauliString]) -> Vec<PauliString> {
    let mut out = Vec::new();
    build_group(pool).unwrap().for_each_element(30, |p| out.push(p)).unwrap();
    out
}

#[test]
fn gray_code_visits_each_element_once() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in 2..=5 {
        for size in 1..=2 * n {
            let pool = random_pool(&mut rng, n, size);
            let group = build_group(&pool).unwrap();
            let els = elements(&pool);
            let distinct: HashSet<_> = els.iter().copied().collect();
            assert_eq!(els.len(), 1 << group.rank());
            assert_eq!(distinct.len(), els.len());
            assert!(els.iter().all(|p| group.contains(p)));
        }
    }
}

#[test]
fn closure_lies_in_group() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for n in 2..=5 {
        for _ in 0..20 {
            let pool = random_pool(&mut rng, n, 2 * n - 2);
            let group = build_group(&pool).unwrap();
            let closure = lie_closure(&pool, 1 << 16).unwrap();
            assert!(closure.elements().iter().all(|p| p.is_odd() && group.contains(p)));
        }
    }
}

#[test]
fn equal_flips_differ_by_z_string() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in 2..=4 {
        for _ in 0..10 {
            let els = elements(&random_pool(&mut rng, n, 2 * n - 2));
            for a in &els {
                for b in &els {
                    if a.x_mask() == b.x_mask() {
                        assert_eq!(a.product(b).unwrap().x_mask(), 0);
                    }
                }
            }
        }
    }
}

#[test]
fn flip_coverage_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for n in 2..=5 {
        for size in [n - 1, n, 2 * n - 3, 2 * n - 2] {
            let pool = random_pool(&mut rng, n, size.max(1));
            let flips: HashSet<u64> = elements(&pool).iter().filter(|p| p.is_odd()).map(|p| p.x_mask()).collect();
            let brute = (1..1u64 << n).all(|f| flips.contains(&f));
            assert_eq!(build_group(&pool).unwrap().flip_coverage(None).unwrap(), brute);
        }
    }
}

#[test]
fn inseparability_matches_closure_on_screened_pools() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in [3, 4] {
        let target = odd_count_target(n).unwrap() as usize;
        let mut screened = 0;
        while screened < 500 {
            let pool = random_pool(&mut rng, n, 2 * n - 2);
            let group = build_group(&pool).unwrap();
            if group.rank() != 2 * n - 2 || !group.flip_coverage(None).unwrap() {
                continue;
            }
            screened += 1;
            let full = lie_closure(&pool, target + 1).unwrap().len() == target;
            assert_eq!(inseparability(&pool).unwrap(), full, "{pool:?}");
        }
    }
}

#[test]
fn symmetry_compatible_strings_form_a_group() {
    let spec = SymmetrySpec::new(4, 0b0101, 0b0011, vec![CharacterColumn {
            label: None,
            mask: 0b0110,
        }]).unwrap();
    let cs = build_constraints(&spec);
    let mut all = Vec::new();
    for x in 0..16u64 {
        for z in 0..16u64 {
            all.push(PauliString::from_masks(4, x, z).unwrap());
        }
    }
    let good: Vec<_> = all.iter().filter(|p| cs.satisfies(p)).collect();
    for a in &good {
        for b in &good {
            assert!(cs.satisfies(&a.product(b).unwrap()));
        }
    }
    for p in &all {
        if is_starter(p, &spec) {
            assert!(cs.satisfies(p));
        }
    }
}

#[test]
fn starters_satisfy_constraints_for_presets() {
    for spec in [SymmetrySpec::h4(), SymmetrySpec::lih(), SymmetrySpec::beh2()] {
        let cs = build_constraints(&spec);
        let n = spec.n_qubits();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..20000 {
            let p = random_string(&mut rng, n);
            if is_starter(&p, &spec) {
                assert!(cs.satisfies(&p));
            }
        }
        for x in minpool::pool_search::starter_flip_masks(&spec) {
            assert!(cs.allows_flip(x));
        }
    }
}

#[test]
fn flip_dimension_matches_enumeration() {
    for spec in [SymmetrySpec::h4(), SymmetrySpec::lih(), SymmetrySpec::beh2()] {
        let cs = build_constraints(&spec);
        let allowed = (0..1u64 << spec.n_qubits()).filter(|&f| cs.allows_flip(f)).count();
        assert_eq!(allowed, 1 << cs.flip_dimension(), "{:?}", spec.name);
    }
}

#[test]
fn bundled_pools_pass_their_checks() {
    let h4 = SymmetrySpec::h4();
    for pool in [
        catalog::h4_ten_starters(),
        catalog::h4_three_starters(),
        catalog::h4_six_starters(),
        catalog::h4_nine_starters(),
    ] {
        assert!(check_pool(&pool, CheckLevel::Algebra, Some(&h4)).unwrap().complete);
    }
    assert!(check_pool(&catalog::lih(), CheckLevel::Algebra, Some(&SymmetrySpec::lih())).unwrap().complete);
    assert!(check_pool(&catalog::beh2(), CheckLevel::Inseparable, Some(&SymmetrySpec::beh2())).unwrap().complete);
}

#[test]
fn single_y_pool_is_incomplete() {
    let n = 4;
    let pool: Vec<_> = (0..n).map(|q| PauliString::single(n, q, 'Y').unwrap()).collect();
    assert!(!inseparability(&pool).unwrap());
    let report = check_pool(&pool, CheckLevel::Algebra, None).unwrap();
    assert!(!report.complete);
    assert_eq!(report.closure_size, Some(n));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closure_never_exceeds_target(seed in any::<u64>(), n in 2usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pool = random_pool(&mut rng, n, 2 * n - 2);
        let target = odd_count_target(n).unwrap() as usize;
        let closure = lie_closure(&pool, target + 1).unwrap();
        prop_assert!(!closure.capped());
        prop_assert!(closure.len() <= target);
    }

    #[test]
    fn closure_is_order_independent(seed in any::<u64>(), n in 2usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pool = random_pool(&mut rng, n, 2 * n - 2);
        let mut reversed = pool.clone();
        reversed.reverse();
        let a: HashSet<_> = lie_closure(&pool, 1 << 16).unwrap().elements().iter().copied().collect();
        let b: HashSet<_> = lie_closure(&reversed, 1 << 16).unwrap().elements().iter().copied().collect();
        prop_assert_eq!(a, b);
    }
}
