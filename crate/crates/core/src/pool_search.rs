//! Seeded random search for minimal complete pools.
//!
//! Randomness comes from ChaCha8 (`rand_chacha`). Attempt `i` of a search
//! with seed `s` draws from `ChaCha8Rng::seed_from_u64(s)` switched to stream
//! `i`, so every attempt is reproducible on its own and pools are identical
//! across machines and thread counts. Attempts run in parallel batches and
//! the accepted pool is always the one with the lowest attempt index.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::{build_group, check_pool, inseparability, CheckLevel};
use crate::pauli::{low_mask, PauliString};
use crate::pool::{Pool, PoolMeta};
use crate::symmetry::{build_constraints, expected_pool_size, is_starter, ConstraintSet, SymmetrySpec};

pub const DEFAULT_MAX_ATTEMPTS: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub seed: u64,
    pub level: CheckLevel,
    pub max_attempts: u64,
}

impl SearchOptions {
    pub fn new(seed: u64, level: CheckLevel) -> Self {
        SearchOptions {
            seed,
            level,
            max_attempts: DEFAULT_MAX_ATTEMPTS,
        }
    }
}

fn attempt_rng(seed: u64, attempt: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(attempt);
    rng
}

/// Uniform odd string on `n` qubits.
fn random_odd(rng: &mut ChaCha8Rng, n: usize) -> PauliString {
    let mask = low_mask(n);
    loop {
        let (x, z) = (rng.random::<u64>() & mask, rng.random::<u64>() & mask);
        if (x & z).count_ones() % 2 == 1 {
            return PauliString::from_masks(n, x, z).expect("masked to n qubits");
        }
    }
}

/// Uniform odd string with flip mask `x` (which must be nonzero).
fn random_odd_with_flips(rng: &mut ChaCha8Rng, n: usize, x: u64) -> PauliString {
    let mask = low_mask(n);
    loop {
        let z = rng.random::<u64>() & mask;
        if (x & z).count_ones() % 2 == 1 {
            return PauliString::from_masks(n, x, z).expect("masked to n qubits");
        }
    }
}

#[derive(Debug, Default, Clone, Copy)]
struct Tally {
    rank: u64,
    coverage_or_closure: u64,
    inseparable: u64,
}

enum Outcome {
    Accepted(Vec<PauliString>),
    Rejected(Tally),
}

fn judge(ops: Vec<PauliString>, expected_rank: usize, level: CheckLevel, spec: Option<&SymmetrySpec>) -> Result<Outcome> {
    let mut tally = Tally::default();
    if build_group(&ops)?.rank() != expected_rank {
        tally.rank = 1;
        return Ok(Outcome::Rejected(tally));
    }
    if level >= CheckLevel::Inseparable && !inseparability(&ops)? {
        tally.inseparable = 1;
        return Ok(Outcome::Rejected(tally));
    }
    // the closure is the expensive part, so screen at the cheaper level first
    let screen = level.min(CheckLevel::Inseparable);
    let passes = check_pool(&ops, screen, spec)?.complete
        && (level == screen || check_pool(&ops, level, spec)?.complete);
    if passes {
        Ok(Outcome::Accepted(ops))
    } else {
        tally.coverage_or_closure = 1;
        Ok(Outcome::Rejected(tally))
    }
}

fn search<F>(opts: &SearchOptions, attempt: F) -> Result<(Vec<PauliString>, u64)>
where
    F: Fn(&mut ChaCha8Rng) -> Result<Outcome> + Sync,
{
    let mut total = Tally::default();
    let mut start = 0u64;
    while start < opts.max_attempts {
        // one attempt per worker; the lowest accepted index still wins
        let batch = rayon::current_num_threads().max(1) as u64;
        let end = (start + batch).min(opts.max_attempts);
        let outcomes: Vec<Result<Outcome>> = (start..end)
            .into_par_iter()
            .map(|i| attempt(&mut attempt_rng(opts.seed, i)))
            .collect();
        for (offset, outcome) in outcomes.into_iter().enumerate() {
            match outcome? {
                Outcome::Accepted(ops) => return Ok((ops, start + offset as u64 + 1)),
                Outcome::Rejected(t) => {
                    total.rank += t.rank;
                    total.inseparable += t.inseparable;
                    total.coverage_or_closure += t.coverage_or_closure;
                }
            }
        }
        start = end;
    }
    Err(Error::AttemptsExhausted {
        attempts: opts.max_attempts,
        diagnostics: format!(
            "rejected for rank {}, inseparability {}, coverage or closure {}",
            total.rank, total.inseparable, total.coverage_or_closure
        ),
    })
}

/// Random minimal complete pool of `2n - 2` odd strings on `n` qubits.
pub fn random_mcp(n: usize, seed: u64, level: CheckLevel) -> Result<Pool> {
    random_mcp_with(n, &SearchOptions::new(seed, level))
}

pub fn random_mcp_with(n: usize, opts: &SearchOptions) -> Result<Pool> {
    if n < 2 {
        return Err(Error::TooFewQubits(n));
    }
    if n > 32 {
        return Err(Error::TooLarge { n_qubits: n, cap: 32 });
    }
    let size = 2 * n - 2;
    let (ops, attempts) = search(opts, |rng| {
        let mut seen = HashSet::with_capacity(size);
        let mut ops = Vec::with_capacity(size);
        while ops.len() < size {
            let p = random_odd(rng, n);
            if seen.insert(p) {
                ops.push(p);
            }
        }
        judge(ops, size, opts.level, None)
    })?;
    let mut pool = Pool::new(ops)?;
    pool.meta = PoolMeta {
        seed: Some(opts.seed),
        attempts: Some(attempts),
        level: Some(opts.level),
    };
    Ok(pool)
}

/// Flip masks of starters: four flips, balanced holes and particles in each
/// spin sector, even under every character column.
pub fn starter_flip_masks(spec: &SymmetrySpec) -> Vec<u64> {
    let n = spec.n_qubits();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    let x = (1u64 << a) | (1 << b) | (1 << c) | (1 << d);
                    // is_starter ignores z, so any z with these flips decides it
                    let probe = PauliString::from_masks(n, x, 0).expect("in range");
                    if is_starter(&probe, spec) {
                        out.push(x);
                    }
                }
            }
        }
    }
    out
}

/// Constraint-satisfying odd string that is not a starter.
fn random_filler(rng: &mut ChaCha8Rng, spec: &SymmetrySpec, cs: &ConstraintSet) -> PauliString {
    loop {
        let p = random_odd(rng, spec.n_qubits());
        if cs.satisfies(&p) && !is_starter(&p, spec) {
            return p;
        }
    }
}

/// Symmetry-adapted minimal complete pool with exactly `n_starters`
/// starters, the rest being constraint-satisfying non-starters.
pub fn symmetry_adapted_mcp(spec: &SymmetrySpec, n_starters: usize, seed: u64, level: CheckLevel) -> Result<Pool> {
    symmetry_adapted_mcp_with(spec, n_starters, &SearchOptions::new(seed, level))
}

pub fn symmetry_adapted_mcp_with(spec: &SymmetrySpec, n_starters: usize, opts: &SearchOptions) -> Result<Pool> {
    let n = spec.n_qubits();
    if n > 32 {
        return Err(Error::TooLarge { n_qubits: n, cap: 32 });
    }
    let size = expected_pool_size(spec);
    let max = size.saturating_sub(1);
    let starter_x = starter_flip_masks(spec);
    // each starter flip mask carries 2^(n-1) odd strings
    let available = (starter_x.len() as u128) << (n - 1);
    if size == 0 || n_starters > max || n_starters as u128 > available {
        return Err(Error::InfeasibleStarters {
            requested: n_starters,
            pool_size: size,
            max: max.min(available.min(usize::MAX as u128) as usize),
        });
    }
    let cs = build_constraints(spec);
    let (ops, attempts) = search(opts, |rng| {
        let mut seen = HashSet::with_capacity(size);
        let mut ops = Vec::with_capacity(size);
        while ops.len() < n_starters {
            let x = starter_x[rng.random_range(0..starter_x.len())];
            let p = random_odd_with_flips(rng, n, x);
            if seen.insert(p) {
                ops.push(p);
            }
        }
        while ops.len() < size {
            let p = random_filler(rng, spec, &cs);
            if seen.insert(p) {
                ops.push(p);
            }
        }
        judge(ops, size, opts.level, Some(spec))
    })?;
    let mut pool = Pool::new(ops)?.with_spec(spec.clone())?;
    pool.meta = PoolMeta {
        seed: Some(opts.seed),
        attempts: Some(attempts),
        level: Some(opts.level),
    };
    Ok(pool)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_and_three_qubits() {
        let p = random_mcp(2, 1, CheckLevel::Algebra).unwrap();
        assert_eq!(p.len(), 2);
        let p = random_mcp(3, 1, CheckLevel::Algebra).unwrap();
        assert_eq!(p.len(), 4);
        let r = check_pool(p.operators(), CheckLevel::Algebra, None).unwrap();
        assert_eq!(r.closure_size, Some(10));
    }

    #[test]
    fn deterministic() {
        let a = random_mcp(5, 42, CheckLevel::Inseparable).unwrap();
        let b = random_mcp(5, 42, CheckLevel::Inseparable).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn starter_masks_are_starters() {
        let spec = SymmetrySpec::h4();
        let xs = starter_flip_masks(&spec);
        assert!(!xs.is_empty());
        for p in crate::catalog::h4_ten_starters() {
            assert_eq!(is_starter(&p, &spec), xs.contains(&p.x_mask()));
        }
    }

    #[test]
    fn too_many_starters() {
        let spec = SymmetrySpec::h4();
        assert!(matches!(
            symmetry_adapted_mcp(&spec, 11, 0, CheckLevel::Group),
            Err(Error::InfeasibleStarters { .. })
        ));
    }

    #[test]
    fn budget_exhaustion_reports() {
        let opts = SearchOptions {
            seed: 0,
            level: CheckLevel::Algebra,
            max_attempts: 1,
        };
        // one attempt at n = 8 is very unlikely to be complete; either outcome is valid
        match random_mcp_with(8, &opts) {
            Ok(p) => assert_eq!(p.len(), 14),
            Err(Error::AttemptsExhausted { attempts, .. }) => assert_eq!(attempts, 1),
            Err(e) => panic!("unexpected {e}"),
        }
    }
}
