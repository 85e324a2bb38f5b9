//! Iterations needed to reach a given error with the bundled H4 pools of 3,
//! 6 and 9 starters, over several seeded Hamiltonians obeying the H4
//! symmetries.
//!
//! cargo run --release --example starter_study -- [seeds] [terms]

use minpool::adapt::{run_adapt, AdaptConfig};
use minpool::catalog;
use minpool::hamiltonian::{random_real_hamiltonian_with, sector_ground_energy, RandomHamiltonian};
use minpool::symmetry::build_constraints;
use minpool::SymmetrySpec;

fn main() -> minpool::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse().expect("integer argument")).collect();
    let seeds = args.first().copied().unwrap_or(5);
    let terms = args.get(1).copied().unwrap_or(120) as usize;

    let spec = SymmetrySpec::h4();
    let cs = build_constraints(&spec);
    let hf = spec.hf_occupation();
    let pools = [
        (3, catalog::h4_three_starters()),
        (6, catalog::h4_six_starters()),
        (9, catalog::h4_nine_starters()),
    ];
    let config = AdaptConfig {
        eps_energy: 1e-4,
        ..AdaptConfig::default()
    };
    println!("seed  3-starter  6-starter  9-starter   (iterations to error < 1e-4)");
    for seed in 0..seeds {
        let mut opts = RandomHamiltonian::new(spec.n_qubits(), terms, seed);
        opts.constraints = Some(cs.clone());
        opts.max_flip_weight = Some(4);
        let h = random_real_hamiltonian_with(&opts)?;
        let exact = sector_ground_energy(&h, &cs, hf)?;
        let mut row = format!("{seed:4}");
        for (_, pool) in &pools {
            let (_, trace) = run_adapt(&h, pool, hf, &config, Some(exact))?;
            match trace.iterations_to(1e-4) {
                Some(k) => row.push_str(&format!(" {k:10}")),
                None => row.push_str(&format!(" {:>10}", trace.status.expect("finished").as_str())),
            }
        }
        println!("{row}");
    }
    Ok(())
}
