//! Pauli strings as real matrices: products, commutation and the rotation
//! that maps one anticommuting odd string onto their product.
//!
//! cargo run --example pauli_basics -- [A] [B]

use minpool::simulator::{apply_pauli, apply_rotation, RealState};
use minpool::{parse_pauli, PauliString};

fn main() -> minpool::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let a: PauliString = parse_pauli(args.first().map_or("YXZ", |s| s))?;
    let b: PauliString = parse_pauli(args.get(1).map_or("YZI", |s| s))?;

    println!("A = {a}  odd={}  flips {:0w$b}", a.is_odd(), a.x_mask(), w = a.n_qubits());
    println!("B = {b}  odd={}  flips {:0w$b}", b.is_odd(), b.x_mask(), w = b.n_qubits());
    let ab = a.product(&b)?;
    println!("A.B = ±{ab}, commute: {}, product odd: {}", a.commutes(&b)?, ab.is_odd());

    println!("\nmatrix of A (Y taken as iY):\n{}", a.dense_matrix());

    if a.is_odd() && b.is_odd() && !a.commutes(&b)? {
        // exp(π/4 A) B exp(-π/4 A) = A.B, checked on one basis state
        let s = RealState::basis_state(a.n_qubits(), 0)?;
        let lhs = apply_rotation(&a, std::f64::consts::FRAC_PI_4, &s)?;
        let lhs = apply_pauli(&b, &lhs)?;
        let lhs = apply_rotation(&a, -std::f64::consts::FRAC_PI_4, &lhs)?;
        let rhs = apply_pauli(&ab, &s)?;
        let sign = lhs.dot(&rhs);
        println!("conjugated B acts on |0..0> as {sign:+.1} x (A.B)");
    }
    Ok(())
}
