mod common;

use common::*;
use minpool::adapt::{run_adapt, run_adapt_observed, vqe_minimize, AdaptConfig, AdaptStatus};
use minpool::catalog;
use minpool::hamiltonian::{ground_energy, random_real_hamiltonian, sector_ground_energy};
use minpool::optimize::LbfgsOptions;
use minpool::pool_search::random_mcp;
use minpool::simulator::{pool_gradients, Ansatz, RealState};
use minpool::symmetry::{build_constraints, is_starter};
use minpool::trace::{parse_csv, to_csv};
use minpool::{CheckLevel, Error, PauliString, SymmetrySpec};
use proptest::prelude::*;

fn all_odd(n: usize) -> Vec<PauliString> {
    let mut out = Vec::new();
    for x in 0..1u64 << n {
        for z in 0..1u64 << n {
            let p = PauliString::from_masks(n, x, z).unwrap();
            if p.is_odd() {
                out.push(p);
            }
        }
    }
    out
}

#[test]
fn energies_never_increase() {
    for seed in 0..3 {
        let h = random_real_hamiltonian(5, 60, seed, None).unwrap();
        let pool = random_mcp(5, seed, CheckLevel::Algebra).unwrap();
        let exact = ground_energy(&h).unwrap();
        let (ansatz, trace) = run_adapt(&h, pool.operators(), 0, &AdaptConfig::default(), Some(exact)).unwrap();
        for w in trace.records.windows(2) {
            assert!(w[1].energy <= w[0].energy, "{} then {}", w[0].energy, w[1].energy);
        }
        assert!(trace.final_energy().unwrap() >= exact - 1e-9);
        assert_eq!(ansatz.len(), trace.iterations());
        for (k, r) in trace.records.iter().enumerate() {
            assert_eq!(r.iter, k);
            assert_eq!(r.params, k);
            assert_eq!(r.op.is_empty(), k == 0);
        }
    }
}

#[test]
fn reruns_are_identical() {
    let h = random_real_hamiltonian(5, 50, 21, None).unwrap();
    let pool = random_mcp(5, 21, CheckLevel::Algebra).unwrap();
    let a = run_adapt(&h, pool.operators(), 1, &AdaptConfig::default(), None).unwrap();
    let b = run_adapt(&h, pool.operators(), 1, &AdaptConfig::default(), None).unwrap();
    assert_eq!(a, b);
    assert_eq!(to_csv(&a.1), to_csv(&b.1));
}

#[test]
fn observer_sees_every_row_and_csv_round_trips() {
    let h = random_real_hamiltonian(4, 20, 22, None).unwrap();
    let pool = random_mcp(4, 22, CheckLevel::Algebra).unwrap();
    let exact = ground_energy(&h).unwrap();
    let mut seen = Vec::new();
    let (_, trace) = run_adapt_observed(&h, pool.operators(), 0, &AdaptConfig::default(), Some(exact), |r| {
        seen.push(r.clone());
        Ok(())
    })
    .unwrap();
    assert_eq!(seen, trace.records);
    assert_eq!(parse_csv(&to_csv(&trace)).unwrap(), trace);
}

#[test]
fn iteration_cap_is_reported() {
    let h = random_real_hamiltonian(5, 60, 23, None).unwrap();
    let pool = random_mcp(5, 23, CheckLevel::Algebra).unwrap();
    let config = AdaptConfig {
        max_iters: Some(3),
        ..AdaptConfig::default()
    };
    let (ansatz, trace) = run_adapt(&h, pool.operators(), 0, &config, Some(ground_energy(&h).unwrap())).unwrap();
    assert_eq!(trace.status, Some(AdaptStatus::IterationCap));
    assert_eq!(ansatz.len(), 3);
}

#[test]
fn bad_inputs_are_errors() {
    let h = random_real_hamiltonian(3, 10, 0, None).unwrap();
    let cfg = AdaptConfig::default();
    assert!(matches!(run_adapt(&h, &[], 0, &cfg, None), Err(Error::EmptyPool)));
    assert!(run_adapt(&h, &[ps("XX")], 0, &cfg, None).is_err());
    assert!(run_adapt(&h, &[ps("XXZ")], 0, &cfg, None).is_err());
    assert!(run_adapt(&h, &[ps("YII")], 8, &cfg, None).is_err());
    let bad = AdaptConfig {
        eps_grad: 0.0,
        ..AdaptConfig::default()
    };
    assert!(run_adapt(&h, &[ps("YII")], 0, &bad, None).is_err());
}

#[test]
fn generic_pool_never_selects_violating_operators() {
    let spec = SymmetrySpec::h4();
    let cs = build_constraints(&spec);
    let hf = spec.hf_occupation();
    let h = constrained_hamiltonian(&spec, 120, 31, 4);
    let exact = sector_ground_energy(&h, &cs, hf).unwrap();
    let pool = random_mcp(8, 31, CheckLevel::Algebra).unwrap();
    let ops = pool.operators();
    assert!(ops.iter().any(|p| !cs.satisfies(p)));
    let (_, full) = run_adapt(&h, ops, hf, &AdaptConfig::default(), Some(exact)).unwrap();
    let steps = full.iterations();
    for k in 0..=steps.min(8) {
        let config = AdaptConfig {
            max_iters: Some(k.max(1)),
            ..AdaptConfig::default()
        };
        let state = if k == 0 {
            RealState::basis_state(8, hf).unwrap()
        } else {
            run_adapt(&h, ops, hf, &config, Some(exact)).unwrap().0.state().unwrap()
        };
        let grads = pool_gradients(&h, &state, ops).unwrap();
        let worst_violating = ops
            .iter()
            .zip(&grads)
            .filter(|(p, _)| !cs.satisfies(p))
            .fold(0.0f64, |m, (_, g)| m.max(g.abs()));
        assert!(worst_violating <= 1e-12, "iteration {k}: {worst_violating}");
        if k < steps {
            let chosen = &full.records[k + 1].op;
            let idx = ops.iter().position(|p| &p.to_string() == chosen).unwrap();
            assert!(cs.satisfies(&ops[idx]));
            assert!(grads[idx].abs() >= worst_violating);
        }
    }
}

#[test]
fn first_gradients_come_from_starters() {
    for spec in [SymmetrySpec::h4(), SymmetrySpec::lih()] {
        let n = spec.n_qubits();
        let hf = RealState::basis_state(n, spec.hf_occupation()).unwrap();
        let h = molecular_like_hamiltonian(&spec, 150, 41);
        let candidates: Vec<PauliString> = if n <= 8 {
            all_odd(n)
        } else {
            let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(41);
            (0..20000).map(|_| random_odd(&mut rng, n)).collect()
        };
        let grads = pool_gradients(&h, &hf, &candidates).unwrap();
        let mut nonzero = 0;
        for (p, g) in candidates.iter().zip(&grads) {
            if g.abs() > 1e-12 {
                nonzero += 1;
                assert!(is_starter(p, &spec), "{p} has gradient {g}");
            }
        }
        assert!(nonzero > 0);
    }
}

#[test]
fn bundled_starter_pools_start() {
    let spec = SymmetrySpec::h4();
    let hf = RealState::basis_state(8, spec.hf_occupation()).unwrap();
    let h = molecular_like_hamiltonian(&spec, 150, 42);
    for pool in [catalog::h4_three_starters(), catalog::h4_ten_starters()] {
        let grads = pool_gradients(&h, &hf, &pool).unwrap();
        for (p, g) in pool.iter().zip(&grads) {
            if !is_starter(p, &spec) {
                assert!(g.abs() < 1e-12);
            }
        }
        assert!(grads.iter().any(|g| g.abs() > 1e-12));
    }
}

#[test]
fn vqe_reaches_single_qubit_minimum() {
    let h = minpool::PauliSumHamiltonian::new(2, [(1.0, ps("ZI")), (0.5, ps("XI")), (0.3, ps("ZZ"))]).unwrap();
    let exact = ground_energy(&h).unwrap();
    let a = Ansatz::with_layers(2, 0, vec![ps("YI"), ps("IY"), ps("YZ")], vec![0.0; 3]).unwrap();
    let r = vqe_minimize(&a, &[0.1, -0.2, 0.3], &h, &LbfgsOptions::default()).unwrap();
    assert!((r.energy - exact).abs() < 1e-10, "{} vs {exact}", r.energy);
    assert!(r.energy <= r.initial_energy);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn small_runs_reach_the_ground_state(seed in 0u64..1000) {
        let h = random_real_hamiltonian(3, 12, seed, None).unwrap();
        let pool = random_mcp(3, seed, CheckLevel::Algebra).unwrap();
        let exact = ground_energy(&h).unwrap();
        let (_, trace) = run_adapt(&h, pool.operators(), 0, &AdaptConfig::default(), Some(exact)).unwrap();
        prop_assert!(trace.records.windows(2).all(|w| w[1].energy <= w[0].energy));
        prop_assert!(trace.final_energy().unwrap() >= exact - 1e-9);
        if trace.status == Some(AdaptStatus::Converged) {
            prop_assert!(trace.final_error().unwrap() < 1e-8);
        }
    }
}
