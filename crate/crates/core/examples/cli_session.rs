//! The command-line workflow driven in-process: find a pool, generate a
//! Hamiltonian, run ADAPT-VQE and plot, all in a scratch directory.
//! Each call is what `minpool ...` would do from a shell.
//!
//! cargo run --release --example cli_session -- [out_dir]

use std::path::PathBuf;

fn minpool(args: &[&str]) -> i32 {
    println!("$ minpool {}", args.join(" "));
    let code = minpool::cli::run(std::iter::once("minpool").chain(args.iter().copied()));
    println!("(exit {code})\n");
    code
}

fn main() {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| std::env::temp_dir().join("minpool-session").display().to_string()));
    std::fs::create_dir_all(&dir).expect("output directory");
    let path = |name: &str| dir.join(name).display().to_string();
    let (pool, ham, trace, svg) = (path("h4.pool"), path("h4.ham"), path("trace.csv"), path("trace.svg"));

    minpool(&["pool", "find", "--symmetry", "h4", "--starters", "6", "--seed", "1", "-o", &pool]);
    minpool(&["pool", "check", &pool, "--symmetry", "h4", "--level", "algebra"]);
    minpool(&["ham", "random", "--qubits", "8", "--terms", "120", "--seed", "1", "--symmetry", "h4", "--max-flip-weight", "4", "-o", &ham]);
    minpool(&["ham", "fci", &ham, "--symmetry", "h4", "--ref", "11110000"]);
    minpool(&["adapt", "run", "--hamiltonian", &ham, "--pool", &pool, "--ref", "11110000", "--symmetry", "h4", "--fci", "--trace", &trace]);
    minpool(&["plot", "--trace", &trace, "-o", &svg]);
}
