//! Identifies a fractional single-DOF oscillator from Bode data, then
//! compares it with a second-order fit around one resonance.
//!
//! cargo run --example identify_fsdof [-- OUTPUT_DIR]

use fracred::chain::{build_chain, integer_tf, FrequencyGrid};
use fracred::fractional::{fsdof_response, FractionalSdof};
use fracred::io::{bode_to_csv, identified_to_csv};
use fracred::sysid::{fit_integer_peak, identify_fsdof, max_relative_magnitude_error, BodeDataset};

fn main() -> fracred::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "target/fracred-examples".into());
    std::fs::create_dir_all(&out)?;
    // Measured data stand-in: DOF 1 of a damped 4-DOF chain.
    let model = build_chain(&[1.0, 2.0, 1.0, 2.0], &[1.0, 2.0, 1.0, 2.0], &[1.0, 2.0, 1.0, 2.0])?;
    let grid = FrequencyGrid::default_log();
    let data = BodeDataset::from_fn(&grid, |w| integer_tf(&model, 1, 1, w))?;
    std::fs::write(format!("{out}/measured.csv"), bode_to_csv(&data))?;

    let (m_bar, k_bar) = (6.0, 1.0 / 3.0);
    let id = identify_fsdof(&data, m_bar, Some(k_bar))?;
    println!("{} of {} points identified, max reconstruction error {:.2e}", id.schedule.converged_count(), id.schedule.len(), id.max_reconstruction_error);

    let estimated = identify_fsdof(&data, m_bar, None)?;
    println!("with k_bar estimated from the lowest frequency: k_bar = {:.6}", estimated.schedule.k_bar);

    let frac_err = max_relative_magnitude_error(&data, |w| {
        let i = grid.nearest(w);
        let m = FractionalSdof::new(m_bar, k_bar, id.schedule.alphas[i]).ok()?;
        Some(fsdof_response(w, &m).ok()?.0)
    });
    let fit = fit_integer_peak(&data, 0.3)?;
    let int_err = max_relative_magnitude_error(&data, |w| Some(fit.response(w)));
    println!("second-order fit at 0.3 rad/s: m = {:.4}, c = {:.4}, k = {:.4}", fit.m, fit.c, fit.k);
    println!("max relative magnitude error: fractional {frac_err:.2e}, second-order {int_err:.2e}");

    std::fs::write(format!("{out}/identified_fsdof.csv"), identified_to_csv(&id))?;
    println!("wrote {out}/measured.csv and {out}/identified_fsdof.csv");
    Ok(())
}
