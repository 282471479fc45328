//! Converts a damped oscillator into an undamped fractional oscillator with
//! the same mass and stiffness, and checks that both share one transfer
//! function.
//!
//! cargo run --example sdof_conversion

use fracred::chain::{build_chain, integer_tf};
use fracred::fractional::{fsdof_response, FractionalSdof};
use fracred::oracle::analytic_sdof_steady;
use fracred::reduction::alpha_isdof;

fn main() -> fracred::Result<()> {
    let (m, c, k) = (2.0, 1.0, 10.0);
    let model = build_chain(&[m], &[k], &[c])?;
    println!("{:>8}  {:>24}  {:>12}  {:>12}", "omega", "alpha", "|G - H|/|H|", "psi + phi");
    for w in [0.1, 1.0, 2.0, 5f64.sqrt(), 10.0, 100.0, 1000.0] {
        let alpha = alpha_isdof(m, c, k, w)?;
        let (g, polar) = fsdof_response(w, &FractionalSdof::new(m, k, alpha)?)?;
        let h = integer_tf(&model, 1, 1, w)?;
        let (_, phi) = analytic_sdof_steady(m, c, k, 1.0, w)?;
        println!(
            "{w:>8.4}  {:>24}  {:>12.2e}  {:>12.2e}",
            format!("{alpha:.6}"),
            (g - h).norm() / h.norm(),
            fracred::numerics::wrap_phase(polar.phase + phi)
        );
    }
    println!("\nwithout the damper the order is exactly 2: {}", alpha_isdof(m, 0.0, k, 3.0)?);
    Ok(())
}
