//! Random real Hamiltonians, their file format, and ground energies by
//! Lanczos, by dense diagonalization and within a symmetry sector.
//!
//! cargo run --release --example hamiltonian_fci -- [qubits] [terms] [seed]

use minpool::hamiltonian::{
    dense_ground_energy, ground_energy, parse_hamiltonian, random_real_hamiltonian, sector_ground_energy,
};
use minpool::symmetry::build_constraints;
use minpool::SymmetrySpec;

fn main() -> minpool::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse().expect("integer argument")).collect();
    let n = args.first().copied().unwrap_or(8) as usize;
    let terms = args.get(1).copied().unwrap_or(40) as usize;
    let seed = args.get(2).copied().unwrap_or(0);

    let h = random_real_hamiltonian(n, terms, seed, None)?;
    let text = h.to_file_string();
    for line in text.lines().take(5) {
        println!("{line}");
    }
    println!("...");
    assert_eq!(parse_hamiltonian(&text)?, h);

    println!("Lanczos ground energy {:.12}", ground_energy(&h)?);
    if n <= 10 {
        println!("dense ground energy   {:.12}", dense_ground_energy(&h));
    }

    let spec = SymmetrySpec::h4();
    let cs = build_constraints(&spec);
    let constrained = random_real_hamiltonian(8, terms, seed, Some(&cs))?;
    println!(
        "\nH4-symmetric Hamiltonian: global {:.10}, Hartree-Fock sector {:.10}",
        ground_energy(&constrained)?,
        sector_ground_energy(&constrained, &cs, spec.hf_occupation())?
    );
    Ok(())
}
