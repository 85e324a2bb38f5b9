//! Symmetry constraints of the built-in molecules, the resulting pool
//! sizes, and starter flags for the bundled adapted pools.
//!
//! cargo run --example symmetry_starters

use minpool::catalog;
use minpool::pool_search::starter_flip_masks;
use minpool::symmetry::{build_constraints, expected_pool_size, is_starter};
use minpool::SymmetrySpec;

fn main() {
    let cases = [
        (SymmetrySpec::h4(), catalog::h4_ten_starters()),
        (SymmetrySpec::lih(), catalog::lih()),
        (SymmetrySpec::beh2(), catalog::beh2()),
    ];
    for (spec, pool) in cases {
        let cs = build_constraints(&spec);
        println!(
            "{}: {} qubits, {} independent constraints, pool size {}, {} starter flip patterns",
            spec.name.as_deref().unwrap_or("?"),
            spec.n_qubits(),
            cs.rank(),
            expected_pool_size(&spec),
            starter_flip_masks(&spec).len()
        );
        for p in &pool {
            let tag = if is_starter(p, &spec) { "starter" } else { "" };
            println!("   {p}  {tag}");
        }
    }
}
