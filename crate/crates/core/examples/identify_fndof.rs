//! Recovers the order and coupling of a fractional 2-DOF chain from the Bode
//! data of both DOFs.
//!
//! cargo run --example identify_fndof

use fracred::chain::FrequencyGrid;
use fracred::fractional::{fndof_tf, ComplexOrder, FractionalNdof};
use fracred::numerics::NewtonConfig;
use fracred::sysid::{identify_fndof, BodeDataset};
use num_complex::Complex64;

fn main() -> fracred::Result<()> {
    let alpha = ComplexOrder::new(1.7, 0.2);
    let beta = Complex64::new(0.6, 0.1);
    let truth = FractionalNdof::new(vec![6.0, 6.0], 0.4167, vec![beta], alpha)?;
    let grid = FrequencyGrid::default_log();
    let datasets = (0..2)
        .map(|j| BodeDataset::from_fn(&grid, |w| Ok(fndof_tf(w, &truth, 1)?[j])))
        .collect::<fracred::Result<Vec<_>>>()?;

    let id = identify_fndof(&datasets, &[6.0, 6.0], 0.4167, 1, &NewtonConfig::default())?;
    let s = &id.schedule;
    let worst = (0..s.len())
        .filter(|&i| s.converged[i])
        .map(|i| (s.alphas[i].value() - alpha.value()).norm().max((s.betas[i][0] - beta).norm()))
        .fold(0.0, f64::max);
    println!("true alpha {alpha:.4}, beta {:.4} {:+.4}i", beta.re, beta.im);
    println!("{} of {} points converged", s.converged_count(), s.len());
    println!("largest parameter error {worst:.2e}, max reconstruction error {:.2e}", id.max_reconstruction_error);
    for w in [0.01, 1.0, 100.0] {
        let i = grid.nearest(w);
        println!("  omega {:>8.4}: alpha {:.10}, beta {:.10} {:+.10}i", grid.omegas()[i], s.alphas[i], s.betas[i][0].re, s.betas[i][0].im);
    }
    Ok(())
}
