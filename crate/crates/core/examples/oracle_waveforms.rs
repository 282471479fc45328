//! Integrates the 4-DOF chain under harmonic load and overlays the
//! steady-state waveforms with those predicted by the fractional models.
//!
//! cargo run --release --example oracle_waveforms [-- OUTPUT_DIR]

use std::f64::consts::PI;

use fracred::chain::{build_chain, integer_tf, FrequencyGrid};
use fracred::fractional::{fsdof_response, steady_state, FractionalSdof};
use fracred::io::trajectory_to_csv;
use fracred::numerics::wrap_phase;
use fracred::oracle::{fit_sine, integrate_chain};
use fracred::plot::{emit_svg, Axes, Series};
use fracred::reduction::{lump_parameters, sweep_fsdof};

fn main() -> fracred::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "target/fracred-examples".into());
    std::fs::create_dir_all(&out)?;
    let model = build_chain(&[1.0, 2.0, 1.0, 2.0], &[1.0, 2.0, 1.0, 2.0], &[1.0, 2.0, 1.0, 2.0])?;
    let w = 1.0;
    let traj = integrate_chain(&model, 1, 1.0, w, 200, 400)?;
    let tail = traj.tail(190.0 * 2.0 * PI / w - 1e-9);
    let l = lump_parameters(&model);
    let mut series = Vec::new();
    for dof in [1, 3] {
        let samples = tail.displacement(dof);
        let fit = fit_sine(&samples, w)?;
        let h = integer_tf(&model, 1, dof, w)?;
        let r = sweep_fsdof(&model, 1, dof, &FrequencyGrid::new(vec![w])?)?;
        let (_, polar) = fsdof_response(w, &FractionalSdof::new(l.m_bar, l.k_bar, r.alphas[0])?)?;
        let dev = samples.iter().map(|&(t, x)| (x - steady_state(t, w, 1.0, polar)).abs()).fold(0.0, f64::max);
        println!(
            "DOF {dof}: fitted amplitude {:.9} phase {:.9} | transfer function {:.9} {:.9} | fractional waveform deviation {:.2e} of amplitude",
            fit.amplitude,
            fit.phase,
            h.norm(),
            wrap_phase(h.arg()),
            dev / polar.magnitude
        );
        let one_period: Vec<_> = samples.iter().copied().filter(|p| p.0 < tail.times[0] + 2.0 * PI / w).collect();
        series.push(Series::new(format!("integrated x{dof}"), one_period.clone()));
        series.push(Series::new(format!("fractional x{dof}"), one_period.iter().map(|&(t, _)| (t, steady_state(t, w, 1.0, polar))).collect()));
    }
    let axes = Axes {
        title: "Steady state at 1 rad/s".into(),
        x_label: "t [s]".into(),
        y_label: "x".into(),
        ..Axes::default()
    };
    std::fs::write(format!("{out}/waveforms.svg"), emit_svg(&series, &axes)?)?;
    std::fs::write(format!("{out}/trajectory_tail.csv"), trajectory_to_csv(&tail))?;
    println!("wrote {out}/waveforms.svg and {out}/trajectory_tail.csv");
    Ok(())
}
