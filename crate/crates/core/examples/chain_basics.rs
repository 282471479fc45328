//! Builds the 4-DOF chain, prints its state-space form, natural frequencies
//! and a few transfer-function values.
//!
//! cargo run --example chain_basics

use fracred::chain::{assemble_state_space, build_chain, integer_tf, natural_frequencies};
use fracred::fractional::PolarResponse;

fn main() -> fracred::Result<()> {
    let model = build_chain(&[1.0, 2.0, 1.0, 2.0], &[1.0, 2.0, 1.0, 2.0], &[1.0, 2.0, 1.0, 2.0])?;
    let ss = assemble_state_space(&model, 1)?;
    println!("state matrix A ({0}x{0}), state [x1, v1, ..., x4, v4]:", ss.n);
    for row in ss.a.chunks(ss.n) {
        println!("  {}", row.iter().map(|v| format!("{v:6.2}")).collect::<Vec<_>>().join(" "));
    }
    println!("Gershgorin radius of A: {}", ss.gershgorin_radius());
    println!("undamped natural frequencies [rad/s]: {:.4?}", natural_frequencies(&model));
    println!("\n{:>8} {:>4} {:>12} {:>10}", "omega", "dof", "|H|", "arg H");
    for w in [0.01, 0.3, 1.0, 3.0] {
        for dof in 1..=4 {
            let p = PolarResponse::from_complex(integer_tf(&model, 1, dof, w)?);
            println!("{w:>8} {dof:>4} {:>12.6e} {:>10.5}", p.magnitude, p.phase);
        }
    }
    Ok(())
}
