//! A Hamiltonian obeying the H4 symmetries, run from the Hartree-Fock state
//! with a generic minimal complete pool and with a symmetry-adapted one.
//! The generic pool stalls with every gradient zero; the adapted pool
//! converges.
//!
//! cargo run --release --example symmetry_roadblock -- [seed] [starters]

use minpool::adapt::{run_adapt, AdaptConfig};
use minpool::hamiltonian::{random_real_hamiltonian_with, sector_ground_energy, RandomHamiltonian};
use minpool::pool_search::{random_mcp, symmetry_adapted_mcp};
use minpool::symmetry::build_constraints;
use minpool::{CheckLevel, SymmetrySpec};

fn main() -> minpool::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse().expect("integer argument")).collect();
    let seed = args.first().copied().unwrap_or(1);
    let starters = args.get(1).copied().unwrap_or(6) as usize;

    let spec = SymmetrySpec::h4();
    let cs = build_constraints(&spec);
    let mut opts = RandomHamiltonian::new(spec.n_qubits(), 120, seed);
    opts.constraints = Some(cs.clone());
    opts.max_flip_weight = Some(4);
    let h = random_real_hamiltonian_with(&opts)?;
    let hf = spec.hf_occupation();
    let exact = sector_ground_energy(&h, &cs, hf)?;

    let generic = random_mcp(spec.n_qubits(), seed, CheckLevel::Algebra)?;
    let adapted = symmetry_adapted_mcp(&spec, starters, seed, CheckLevel::Algebra)?;
    for (name, pool) in [("generic", &generic), ("adapted", &adapted)] {
        let (_, trace) = run_adapt(&h, pool.operators(), hf, &AdaptConfig::default(), Some(exact))?;
        let last = trace.last().expect("reference row");
        println!(
            "{name:8} pool: {} after {} operators, error {:.3e}",
            trace.status.expect("finished"),
            last.iter,
            last.error.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
