//! Completeness report for the bundled pools, or for a pool file.
//!
//! cargo run --release --example check_pool -- [POOL_FILE [h4|lih|beh2]]

use minpool::catalog;
use minpool::cli::load_symmetry;
use minpool::pool::read_pool_file;
use minpool::{check_pool, CheckLevel};

fn main() -> minpool::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if let Some(path) = args.first() {
        let (ops, _) = read_pool_file(path.as_ref())?;
        let spec = args.get(1).map(|s| load_symmetry(s)).transpose()?;
        let level = CheckLevel::default_for(ops[0].n_qubits());
        println!("{}", check_pool(&ops, level, spec.as_ref())?);
        return Ok(());
    }

    for (name, ops) in [("random, 6 qubits", catalog::random6()), ("random, 8 qubits", catalog::random8())] {
        let r = check_pool(&ops, CheckLevel::Algebra, None)?;
        println!("{name}: {} (closure {:?} of {:?})", r.verdict(), r.closure_size, r.closure_target);
    }
    let h4 = minpool::SymmetrySpec::h4();
    let r = check_pool(&catalog::h4_ten_starters(), CheckLevel::Algebra, Some(&h4))?;
    println!();
    println!("{r}");
    Ok(())
}
