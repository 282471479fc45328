//! Reduces the 4-DOF chain to a fractional single-DOF oscillator that
//! matches the transfer function of one chosen DOF, over a frequency grid.
//!
//! cargo run --example mdof_to_fsdof [-- OUTPUT_DIR]

use fracred::chain::{build_chain, FrequencyGrid};
use fracred::io::reduction_to_csv;
use fracred::reduction::{lump_parameters, sweep_fsdof};

fn main() -> fracred::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "target/fracred-examples".into());
    std::fs::create_dir_all(&out)?;
    let model = build_chain(&[1.0, 2.0, 1.0, 2.0], &[1.0, 2.0, 1.0, 2.0], &[1.0, 2.0, 1.0, 2.0])?;
    let l = lump_parameters(&model);
    println!("lumped mass {}, series stiffness {:.6}", l.m_bar, l.k_bar);

    let grid = FrequencyGrid::log(0.01, 100.0, 101)?;
    for dof in [1, 3] {
        let r = sweep_fsdof(&model, 1, dof, &grid)?;
        println!("\nactive DOF {dof}: {}/{} points matched, max residual {:.2e}", r.converged_count(), r.len(), r.residuals.iter().cloned().fold(0.0, f64::max));
        for w in [0.01, 0.1, 1.0, 10.0, 100.0] {
            let i = grid.nearest(w);
            println!("  alpha({:>6}) = {:.6}", grid.omegas()[i], r.alphas[i]);
        }
        let path = format!("{out}/fsdof_dof{dof}.csv");
        std::fs::write(&path, reduction_to_csv(&r))?;
        println!("  wrote {path}");
    }
    Ok(())
}
