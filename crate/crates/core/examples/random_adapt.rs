//! ADAPT-VQE on a seeded random real Hamiltonian with a seeded random
//! minimal complete pool.
//!
//! cargo run --release --example random_adapt -- [qubits] [terms] [seed]

use minpool::adapt::{run_adapt, AdaptConfig};
use minpool::hamiltonian::{ground_energy, random_real_hamiltonian};
use minpool::pool_search::random_mcp;
use minpool::CheckLevel;

fn main() -> minpool::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse().expect("integer argument")).collect();
    let n = args.first().copied().unwrap_or(6) as usize;
    let terms = args.get(1).copied().unwrap_or(200) as usize;
    let seed = args.get(2).copied().unwrap_or(1);

    let h = random_real_hamiltonian(n, terms, seed, None)?;
    let pool = random_mcp(n, seed, CheckLevel::default_for(n))?;
    let exact = ground_energy(&h)?;
    println!("{n} qubits, {terms} terms, pool of {} found after {} attempts", pool.len(), pool.meta.attempts.unwrap_or(0));

    let (ansatz, trace) = run_adapt(&h, pool.operators(), 0, &AdaptConfig::default(), Some(exact))?;
    for r in &trace.records {
        println!("{:4} {:>10} |g|={:9.3e} err={:9.3e}", r.iter, r.op, r.max_grad, r.error.unwrap_or(f64::NAN));
    }
    println!("status {} with {} parameters", trace.status.expect("finished"), ansatz.len());
    Ok(())
}
