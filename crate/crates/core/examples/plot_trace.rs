//! Runs a small ADAPT-VQE problem, writes the trace CSV and an SVG plot
//! of error and largest gradient per iteration.
//!
//! cargo run --release --example plot_trace -- [out_dir]

use std::path::PathBuf;

use minpool::adapt::{run_adapt, AdaptConfig};
use minpool::hamiltonian::{ground_energy, random_real_hamiltonian};
use minpool::plot::{render_svg, PlotOptions};
use minpool::pool_search::random_mcp;
use minpool::trace::write_trace;
use minpool::CheckLevel;

fn main() -> minpool::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| ".".into()));
    let h = random_real_hamiltonian(5, 60, 7, None)?;
    let pool = random_mcp(5, 7, CheckLevel::Algebra)?;
    let (_, trace) = run_adapt(&h, pool.operators(), 0, &AdaptConfig::default(), Some(ground_energy(&h)?))?;

    let csv = dir.join("trace.csv");
    let svg = dir.join("trace.svg");
    write_trace(&csv, &trace)?;
    std::fs::write(&svg, render_svg(&trace, PlotOptions::default())?)?;
    println!("{} rows, status {}", trace.records.len(), trace.status.expect("finished"));
    println!("wrote {} and {}", csv.display(), svg.display());
    Ok(())
}
