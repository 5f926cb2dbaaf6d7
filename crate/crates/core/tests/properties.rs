use std::f64::consts::TAU;

use chiralwg::config_file::ConfigSpec;
use chiralwg::model::{normalize_phase, CouplingConfig, CouplingPoint, PhaseModel};
use chiralwg::oracle::solve_oracle_both;
use chiralwg::scattering::{rates, rates_coherent, rates_pairwise, scatter};
use chiralwg::sweep::{format_value, read_csv, run_sweep, Axis, Observable};
use proptest::prelude::*;

fn config_strategy() -> impl Strategy<Value = CouplingConfig> {
    (
        prop::collection::vec((0.0..3.0f64, 0.0..3.0f64), 1..=8),
        prop_oneof![Just(0.0), 0.0..1.0f64],
        0.0..TAU,
        prop_oneof![Just(None), (0.0..3.0f64).prop_map(Some)],
    )
        .prop_map(|(pts, gamma, phi, tau)| {
            let points = pts
                .into_iter()
                .map(|(x, y)| CouplingPoint::new(x, y).unwrap())
                .collect();
            let phase = match tau {
                None => PhaseModel::markovian(phi).unwrap(),
                Some(t) => PhaseModel::retarded(phi, t).unwrap(),
            };
            CouplingConfig::new(points, gamma, phase).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn probabilities_balance(c in config_strategy(), delta in -50.0..50.0f64) {
        let s = scatter(&c, delta);
        prop_assert!((s.trans_left + s.refl_left + s.loss_left - 1.0).abs() < 1e-12);
        prop_assert!((s.trans_right + s.refl_right + s.loss_right - 1.0).abs() < 1e-12);
        prop_assert!(s.loss_left >= 0.0 && s.loss_right >= 0.0);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&s.contrast));
        prop_assert!((s.refl_left - s.refl_right).abs() < 1e-12);
    }

    #[test]
    fn matches_oracle(c in config_strategy(), delta in -50.0..50.0f64) {
        let s = scatter(&c, delta);
        let (l, r) = solve_oracle_both(&c, delta);
        prop_assert!((s.t_left - l.t).norm() < 1e-12);
        prop_assert!((s.r_left - l.r).norm() < 1e-12);
        prop_assert!((s.t_right - r.t).norm() < 1e-12);
        prop_assert!((s.r_right - r.r).norm() < 1e-12);
    }

    #[test]
    fn rate_routes_agree(c in config_strategy(), delta in -50.0..50.0f64) {
        let a = rates(&c, delta);
        let scale = 1.0 + c.xs().chain(c.ys()).map(|w| w * w).sum::<f64>() * c.len() as f64;
        for b in [rates_coherent(&c, delta), rates_pairwise(&c, delta)] {
            prop_assert!((a.lamb_shift - b.lamb_shift).abs() < 1e-12 * scale);
            prop_assert!((a.gamma_x - b.gamma_x).abs() < 1e-12 * scale);
            prop_assert!((a.gamma_y - b.gamma_y).abs() < 1e-12 * scale);
        }
        prop_assert!((a.gamma_xy.norm_sqr() - 4.0 * a.gamma_x * a.gamma_y).abs() < 1e-12 * scale * scale);
    }

    #[test]
    fn swapping_directions_swaps_spectra(c in config_strategy(), delta in -50.0..50.0f64) {
        let s = scatter(&c, delta);
        let w = scatter(&c.swapped(), delta);
        prop_assert!((s.trans_left - w.trans_right).abs() < 1e-12);
        prop_assert!((s.trans_right - w.trans_left).abs() < 1e-12);
        prop_assert!((s.refl_left - w.refl_right).abs() < 1e-12);
    }

    #[test]
    fn lossless_transmission_is_reciprocal(c in config_strategy(), delta in -50.0..50.0f64) {
        let s = scatter(&c.with_gamma(0.0).unwrap(), delta);
        prop_assert!((s.trans_left - s.trans_right).abs() < 1e-12);
    }

    #[test]
    fn phase_normalisation(phi in -100.0..100.0f64) {
        let p = normalize_phase(phi).unwrap();
        prop_assert!((0.0..TAU).contains(&p));
        let k = ((phi - p) / TAU).round();
        prop_assert!((phi - p - k * TAU).abs() < 1e-12);
    }

    #[test]
    fn csv_values_round_trip(v in prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL | prop::num::f64::ZERO) {
        prop_assert_eq!(format_value(v).parse::<f64>().unwrap().to_bits(), v.to_bits());
    }
}

#[test]
fn sweep_csv_matches_rerun() {
    let spec = ConfigSpec::parse_str(
        "n = 3\nx = 1\ny = 2\nxi = 0.4\nyi = 1.5\ngamma = 0.2\nphi12 = 1.1\n",
    )
    .unwrap();
    let axis: Axis = "delta=-10:10:101".parse().unwrap();
    let obs = Observable::ALL;
    let g = run_sweep(&spec, &axis, None, &obs, Some(3)).unwrap();
    let mut buf = Vec::new();
    g.write_csv(&mut buf).unwrap();
    let (_, rows) = read_csv(buf.as_slice()).unwrap();
    let again = run_sweep(&spec, &axis, None, &obs, Some(1)).unwrap();
    assert_eq!(rows, again.rows);
}
