//! Reduces the 4-DOF chain to a fractional 2-DOF chain that reproduces the
//! responses of DOFs 1 and 3, with masses {1,2} and {3,4} lumped.
//!
//! cargo run --example mdof_to_fndof [-- OUTPUT_DIR]

use fracred::chain::{build_chain, integer_tf, FrequencyGrid};
use fracred::io::reduction_to_csv;
use fracred::numerics::NewtonConfig;
use fracred::reduction::{reduce_to_fndof, MassPartition};

fn main() -> fracred::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "target/fracred-examples".into());
    std::fs::create_dir_all(&out)?;
    let model = build_chain(&[1.0, 2.0, 1.0, 2.0], &[1.0, 2.0, 1.0, 2.0], &[1.0, 2.0, 1.0, 2.0])?;
    let active = [1, 3];
    let partition = MassPartition::from_sizes(&[2, 2], 4)?;
    let grid = FrequencyGrid::log(1.0, 100.0, 60)?;
    let r = reduce_to_fndof(&model, 1, &active, &partition, &grid, &NewtonConfig::default())?;
    println!("masses {:?}, k_bar {:.6}, {} of {} points converged", r.masses, r.k_bar, r.converged_count(), r.len());
    println!("{:>10}  {:>24}  {:>24}  {:>10}", "omega", "alpha", "beta", "mismatch");
    for i in (0..r.len()).step_by(10) {
        let w = r.grid.omegas()[i];
        let g = r.response_at(i)?;
        let mismatch = active
            .iter()
            .zip(&g)
            .map(|(&d, gj)| Ok((gj - integer_tf(&model, 1, d, w)?).norm() / gj.norm()))
            .collect::<fracred::Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        let b = r.betas[i][0];
        println!("{w:>10.5}  {:>24}  {:>24}  {mismatch:>10.2e}", format!("{:.6}", r.alphas[i]), format!("{:.6} {:+.6}i", b.re, b.im));
    }
    let path = format!("{out}/fndof.csv");
    std::fs::write(&path, reduction_to_csv(&r))?;
    println!("wrote {path}");
    Ok(())
}
