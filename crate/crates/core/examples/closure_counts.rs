//! Size of the Lie closure of the canonical minimal complete pool against
//! `2^{n-1}(2^{n-1}+1)/2`, and of random pools that pass or fail the
//! inseparability screen.
//!
//! cargo run --release --example closure_counts -- [max_qubits]

use minpool::group::{build_group, inseparability, lie_closure, odd_count_target};
use minpool::pool_search::random_mcp;
use minpool::{CheckLevel, PauliString};

/// Z_j and Y_j on all but the last two qubits, then Y_{n-1} and Z_{n-1} Y_n.
fn canonical(n: usize) -> minpool::Result<Vec<PauliString>> {
    let mut gens = Vec::new();
    for q in 0..n - 2 {
        gens.push(PauliString::single(n, q, 'Z')?);
        gens.push(PauliString::single(n, q, 'Y')?);
    }
    gens.push(PauliString::single(n, n - 2, 'Y')?);
    gens.push(PauliString::single(n, n - 2, 'Z')?.product(&PauliString::single(n, n - 1, 'Y')?)?);
    Ok(gens)
}

fn main() -> minpool::Result<()> {
    let max_n: usize = std::env::args().nth(1).map_or(8, |a| a.parse().expect("integer"));
    println!("  n   target   odd in canonical group   random pool closure");
    for n in 2..=max_n {
        let target = odd_count_target(n)?;
        let group_odd = build_group(&canonical(n)?)?.count_odd(None, 40)?;
        let pool = random_mcp(n, 1, CheckLevel::Inseparable)?;
        let closure = lie_closure(pool.operators(), target as usize + 1)?;
        println!("{n:3} {target:8} {group_odd:24} {:21}", closure.len());
    }

    // a pool that generates the right group but splits into two commuting halves
    let split: Vec<PauliString> = ["YII", "IYI", "ZZY", "IIY"].iter().map(|s| s.parse().unwrap()).collect();
    println!(
        "\n{:?}: rank {}, inseparable {}, closure {}",
        split.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        build_group(&split)?.rank(),
        inseparability(&split)?,
        lie_closure(&split, 1000)?.len()
    );
    Ok(())
}
