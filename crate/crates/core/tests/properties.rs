//! Cross-module properties over random chains and frequencies.

use fracred::chain::{build_chain, integer_tf, ChainModel, FrequencyGrid};
use fracred::fractional::{fsdof_response, gamma, steady_state, ComplexOrder, FractionalSdof, PolarResponse};
use fracred::numerics::{principal_log, wrap_phase, NewtonConfig};
use fracred::oracle::analytic_sdof_steady;
use fracred::reduction::{alpha_isdof, reduce_to_fndof, sweep_fsdof, MassPartition};
use fracred::sysid::{identify_fndof, identify_fsdof, BodeDataset};
use num_complex::Complex64;
use proptest::prelude::*;

fn reference_chain() -> ChainModel {
    build_chain(&[1.0, 2.0, 1.0, 2.0], &[1.0, 2.0, 1.0, 2.0], &[1.0, 2.0, 1.0, 2.0]).unwrap()
}

fn chain_strategy() -> impl Strategy<Value = ChainModel> {
    (1usize..=5).prop_flat_map(|n| {
        (
            prop::collection::vec(0.2f64..5.0, n),
            prop::collection::vec(0.2f64..5.0, n),
            prop::collection::vec(0.05f64..2.0, n),
        )
            .prop_map(|(m, k, c)| build_chain(&m, &k, &c).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conjugate_symmetry(model in chain_strategy(), lw in -2.0f64..2.0) {
        let w = 10f64.powf(lw);
        let ss = fracred::chain::assemble_state_space(&model, 1).unwrap();
        let pos = ss.transfer(Complex64::new(0.0, w)).unwrap();
        let neg = ss.transfer(Complex64::new(0.0, -w)).unwrap();
        prop_assert!((neg - pos.conj()).norm() <= 1e-12 * pos.norm());
    }

    #[test]
    fn gamma_is_the_principal_power(lw in -3.0f64..3.0, a in -1.0f64..4.0, b in -2.0f64..2.0) {
        let w = 10f64.powf(lw);
        let alpha = ComplexOrder::new(a, b);
        let expected = (alpha.value() * principal_log(Complex64::new(0.0, w)).unwrap()).exp();
        prop_assert!((gamma(w, alpha) - expected).norm() <= 1e-13 * expected.norm());
    }

    #[test]
    fn fsdof_reduction_is_exact(model in chain_strategy(), lw in -2.0f64..2.0, pick in 0usize..5) {
        let w = 10f64.powf(lw);
        let dof = 1 + pick % model.dofs();
        let r = sweep_fsdof(&model, 1, dof, &FrequencyGrid::new(vec![w]).unwrap()).unwrap();
        prop_assume!(r.converged[0]);
        let h = integer_tf(&model, 1, dof, w).unwrap();
        let g = r.response_at(0).unwrap()[0];
        prop_assert!((g - h).norm() <= 1e-10 * h.norm());
    }

    #[test]
    fn sysid_agrees_with_reduction(model in chain_strategy()) {
        let grid = FrequencyGrid::log(0.05, 20.0, 25).unwrap();
        let data = BodeDataset::from_fn(&grid, |w| integer_tf(&model, 1, 1, w)).unwrap();
        let m_bar: f64 = model.masses().iter().sum();
        let k_bar = 1.0 / model.stiffnesses().iter().map(|k| 1.0 / k).sum::<f64>();
        let id = identify_fsdof(&data, m_bar, Some(k_bar)).unwrap();
        let red = sweep_fsdof(&model, 1, 1, &grid).unwrap();
        for (a, b) in id.schedule.alphas.iter().zip(&red.alphas) {
            prop_assert!((a.value() - b.value()).norm() < 1e-9, "{} vs {}", a, b);
        }
    }

    #[test]
    fn phase_is_negated_integer_lag(m in 0.5f64..5.0, c in 0.1f64..3.0, k in 1.0f64..20.0, lw in -1.0f64..1.5) {
        let w = 10f64.powf(lw);
        let alpha = alpha_isdof(m, c, k, w).unwrap();
        let (_, p) = fsdof_response(w, &FractionalSdof::new(m, k, alpha).unwrap()).unwrap();
        let (_, phi) = analytic_sdof_steady(m, c, k, 1.0, w).unwrap();
        prop_assert!(wrap_phase(p.phase + phi).abs() < 1e-10);
    }
}

#[test]
fn steady_state_equality_for_reference_oscillator() {
    let (m, c, k, w, f0) = (2.0, 1.0, 10.0, 10.0, 1.0);
    let alpha = alpha_isdof(m, c, k, w).unwrap();
    let (_, p) = fsdof_response(w, &FractionalSdof::new(m, k, alpha).unwrap()).unwrap();
    let (x, phi) = analytic_sdof_steady(m, c, k, f0, w).unwrap();
    let period = 2.0 * std::f64::consts::PI / w;
    let dev = (0..=1000)
        .map(|i| {
            let t = period * i as f64 / 1000.0;
            (steady_state(t, w, f0, p) - x * (w * t - phi).sin()).abs()
        })
        .fold(0.0, f64::max);
    assert!(dev < 1e-9 * f0 * p.magnitude, "{dev}");
}

#[test]
fn fsdof_sweep_is_smooth_on_a_fine_grid() {
    let grid = FrequencyGrid::log(0.01, 100.0, 1000).unwrap();
    let r = sweep_fsdof(&reference_chain(), 1, 1, &grid).unwrap();
    assert!(r.all_converged());
    assert!(r.max_alpha_jump() < 0.5, "{}", r.max_alpha_jump());
}

#[test]
fn f2dof_sweep_is_smooth_on_a_fine_grid() {
    let grid = FrequencyGrid::log(0.01, 100.0, 1000).unwrap();
    let part = MassPartition::from_active(&[1, 3], 4).unwrap();
    let r = reduce_to_fndof(&reference_chain(), 1, &[1, 3], &part, &grid, &NewtonConfig::default()).unwrap();
    assert!(r.all_converged(), "{}", r.converged_count());
    assert!(r.max_alpha_jump() < 0.5, "{}", r.max_alpha_jump());
}

#[test]
fn identification_is_idempotent() {
    let model = reference_chain();
    let grid = FrequencyGrid::default_log();
    let part = MassPartition::from_active(&[1, 3], 4).unwrap();
    let red = reduce_to_fndof(&model, 1, &[1, 3], &part, &grid, &NewtonConfig::default()).unwrap();
    let synth = |schedule: &fracred::reduction::ReductionResult| -> Vec<BodeDataset> {
        (0..2)
            .map(|j| {
                let pts = (0..grid.len())
                    .map(|i| {
                        let p = PolarResponse::from_complex(schedule.response_at(i).unwrap()[j]);
                        fracred::sysid::BodePoint { omega: grid.omegas()[i], magnitude: p.magnitude, phase: p.phase }
                    })
                    .collect();
                BodeDataset::new(pts).unwrap()
            })
            .collect()
    };
    let first = identify_fndof(&synth(&red), &red.masses, red.k_bar, 1, &NewtonConfig::default()).unwrap();
    assert!(first.schedule.all_converged());
    let second = identify_fndof(&synth(&first.schedule), &red.masses, red.k_bar, 1, &NewtonConfig::default()).unwrap();
    for i in 0..grid.len() {
        let (a, b) = (first.schedule.alphas[i], second.schedule.alphas[i]);
        assert!((a.a - b.a).abs() < 1e-8 && (a.b - b.b).abs() < 1e-8, "{i}");
        let (x, y) = (first.schedule.betas[i][0], second.schedule.betas[i][0]);
        assert!((x.re - y.re).abs() < 1e-8 && (x.im - y.im).abs() < 1e-8, "{i}");
    }

    // The F-SDOF path is idempotent as well.
    let data = BodeDataset::from_fn(&grid, |w| integer_tf(&model, 1, 1, w)).unwrap();
    let once = identify_fsdof(&data, 6.0, Some(1.0 / 3.0)).unwrap();
    let again_data = BodeDataset::from_fn(&grid, |w| {
        let i = grid.nearest(w);
        let m = FractionalSdof::new(6.0, 1.0 / 3.0, once.schedule.alphas[i])?;
        Ok(fsdof_response(w, &m)?.0)
    })
    .unwrap();
    let twice = identify_fsdof(&again_data, 6.0, Some(1.0 / 3.0)).unwrap();
    for (a, b) in once.schedule.alphas.iter().zip(&twice.schedule.alphas) {
        assert!((a.value() - b.value()).norm() < 1e-8);
    }
}
