//! Renders magnitude, phase and order plots for the fractional single-DOF
//! reduction of a model file.
//!
//! cargo run --example bode_plots [-- MODEL.json OUTPUT_DIR]

use fracred::chain::{integer_tf, FrequencyGrid};
use fracred::io::parse_model_file;
use fracred::plot::{emit_svg, Axes, Series};
use fracred::reduction::sweep_fsdof;

fn main() -> fracred::Result<()> {
    let mut args = std::env::args().skip(1);
    let model_path = args.next().unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/reference4dof.json").into());
    let out = args.next().unwrap_or_else(|| "target/fracred-examples".into());
    std::fs::create_dir_all(&out)?;
    let file = parse_model_file(&model_path)?;
    let grid = FrequencyGrid::log(0.01, 100.0, 400)?;
    let dof = file.active_dofs[0];
    let r = sweep_fsdof(&file.model, file.force_dof, dof, &grid)?;

    let w = grid.omegas();
    let h: Vec<_> = w.iter().map(|&w| integer_tf(&file.model, file.force_dof, dof, w)).collect::<fracred::Result<_>>()?;
    let g: Vec<_> = (0..r.len()).map(|i| r.response_at(i).map(|v| v[0])).collect::<fracred::Result<_>>()?;
    let mag = |v: &[num_complex::Complex64]| w.iter().zip(v).map(|(&w, z)| (w, z.norm())).collect();
    let phase = |v: &[num_complex::Complex64]| w.iter().zip(v).map(|(&w, z)| (w, z.arg())).collect();

    let axes = |title: &str, y: &str, y_log| Axes {
        title: title.into(),
        x_label: "ω [rad/s]".into(),
        y_label: y.into(),
        x_log: true,
        y_log,
    };
    let plots = [
        ("magnitude.svg", vec![Series::new("integer", mag(&h)), Series::new("fractional", mag(&g))], axes("Magnitude", "|X/F|", true)),
        ("phase.svg", vec![Series::new("integer", phase(&h)), Series::new("fractional", phase(&g))], axes("Phase", "rad", false)),
        (
            "alpha.svg",
            vec![
                Series::new("Re α", w.iter().zip(&r.alphas).map(|(&w, a)| (w, a.a)).collect()),
                Series::new("Im α", w.iter().zip(&r.alphas).map(|(&w, a)| (w, a.b)).collect()),
            ],
            axes("Order", "α", false),
        ),
    ];
    for (name, series, axes) in plots {
        let path = format!("{out}/{name}");
        std::fs::write(&path, emit_svg(&series, &axes)?)?;
        println!("wrote {path}");
    }
    Ok(())
}
