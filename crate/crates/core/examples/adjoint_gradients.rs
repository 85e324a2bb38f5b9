//! Energy gradients of a fixed ansatz by the adjoint sweep, against
//! central finite differences.
//!
//! cargo run --release --example adjoint_gradients -- [qubits] [layers]

use minpool::hamiltonian::random_real_hamiltonian;
use minpool::simulator::{ansatz_energy_gradient, expectation, Ansatz};
use minpool::PauliString;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> minpool::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).map(|a| a.parse().expect("integer argument")).collect();
    let n = args.first().copied().unwrap_or(6);
    let layers = args.get(1).copied().unwrap_or(10);
    let mut rng = ChaCha8Rng::seed_from_u64(3);

    let h = random_real_hamiltonian(n, 50, 3, None)?;
    let mask = (1u64 << n) - 1;
    let mut ops = Vec::new();
    while ops.len() < layers {
        let p = PauliString::from_masks(n, rng.random::<u64>() & mask, rng.random::<u64>() & mask)?;
        if p.is_odd() {
            ops.push(p);
        }
    }
    let params: Vec<f64> = (0..layers).map(|_| rng.random_range(-1.0..1.0)).collect();
    let ansatz = Ansatz::with_layers(n, 0, ops, params.clone())?;
    let (energy, grad) = ansatz_energy_gradient(&ansatz, &params, &h)?;
    println!("energy {energy:.12}");

    let step = 1e-5;
    for (k, g) in grad.iter().enumerate() {
        let mut plus = params.clone();
        let mut minus = params.clone();
        plus[k] += step;
        minus[k] -= step;
        let fd = (expectation(&h, &ansatz.state_at(&plus)?)? - expectation(&h, &ansatz.state_at(&minus)?)?) / (2.0 * step);
        println!("{k:3} {:>8}  adjoint {g:+.10}  finite difference {fd:+.10}", ansatz.operators[k].to_string());
    }
    Ok(())
}
