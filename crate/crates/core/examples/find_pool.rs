//! Seeded search for a minimal complete pool, unrestricted or adapted to a
//! built-in symmetry, printed in pool-file format.
//!
//! cargo run --release --example find_pool -- [qubits|h4|lih|beh2] [seed] [starters]

use minpool::cli::load_symmetry;
use minpool::pool_search::{random_mcp, symmetry_adapted_mcp};
use minpool::symmetry::{default_starter_count, expected_pool_size};
use minpool::CheckLevel;

fn main() -> minpool::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let target = args.first().map_or("6", |s| s);
    let seed: u64 = args.get(1).map_or(0, |s| s.parse().expect("integer seed"));

    let pool = match target.parse::<usize>() {
        Ok(n) => random_mcp(n, seed, CheckLevel::default_for(n))?,
        Err(_) => {
            let spec = load_symmetry(target)?;
            let starters = args
                .get(2)
                .map_or(default_starter_count(expected_pool_size(&spec)), |s| s.parse().expect("integer"));
            symmetry_adapted_mcp(&spec, starters, seed, CheckLevel::default_for(spec.n_qubits()))?
        }
    };
    print!("{}", pool.to_file_string());
    Ok(())
}
