//! Reads a JSON model file, reports validation errors, and round-trips a
//! reduction schedule through CSV.
//!
//! cargo run --example model_files

use fracred::chain::FrequencyGrid;
use fracred::io::{parse_model_str, reduction_from_csv, reduction_to_csv};
use fracred::reduction::sweep_fsdof;

fn main() -> fracred::Result<()> {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/reference4dof.json"))?;
    let file = parse_model_str(&text)?;
    println!("{} DOFs, force on DOF {}, active DOFs {:?}", file.model.dofs(), file.force_dof, file.active_dofs);

    for bad in [
        r#"{"masses": [], "stiffnesses": [], "dampers": []}"#,
        "{\"masses\": [1],\n \"masses\": [2], \"stiffnesses\": [1], \"dampers\": [0]}",
        r#"{"masses": [1], "stiffnesses": [1], "dampers": [0], "gravity": 9.81}"#,
    ] {
        println!("rejected: {}", parse_model_str(bad).unwrap_err());
    }

    let r = sweep_fsdof(&file.model, file.force_dof, 1, &FrequencyGrid::log(0.1, 10.0, 5)?)?;
    let csv = reduction_to_csv(&r);
    print!("\n{csv}");
    assert_eq!(reduction_from_csv(&csv)?, r);
    println!("CSV re-parses to the identical schedule");
    Ok(())
}
