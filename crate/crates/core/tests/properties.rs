mod common;

use kinwave::config::RunConfig;
use kinwave::kinetics::run_length;
use kinwave::oracles::{macro_speed, macro_upsilon, MacroParams};
use kinwave::{
    critical_speeds, dispersion_roots, green_exponents, solve_weights, stationary_cluster, transfer_matrix, upsilon,
    FieldParams, KineticParams, Sign, VelocityMeasure, WaveProfile,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn instance() -> impl Strategy<Value = common::Instance> {
    any::<u64>().prop_map(|seed| common::random_instance(&mut ChaCha8Rng::seed_from_u64(seed), 8, 1e-3))
}

fn profile(inst: &common::Instance) -> WaveProfile {
    solve_weights(&inst.measure, &inst.params, dispersion_roots(&inst.measure, &inst.params, inst.c).unwrap()).unwrap()
}

fn gaps_to_velocities(gaps: &[f64]) -> Vec<f64> {
    let total: f64 = gaps.iter().sum();
    let mut acc = 0.0;
    let mut v = vec![-1.0];
    for g in &gaps[..gaps.len() - 1] {
        acc += g;
        v.push(-1.0 + 2.0 * acc / total);
    }
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn measures_are_normalized(gaps in prop::collection::vec(0.05f64..1.0, 3..12), seed in any::<u64>()) {
        let v = gaps_to_velocities(&gaps);
        let w: Vec<f64> = (0..v.len()).map(|i| 0.1 + ((seed >> (i % 60)) & 7) as f64).collect();
        let m = VelocityMeasure::new(&v, &w).unwrap();
        prop_assert!((m.weights().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(m.velocities().windows(2).all(|p| p[0] < p[1]));
        prop_assert!(m.weights().iter().all(|&x| x > 0.0));
    }

    #[test]
    fn speed_window_is_ordered_and_exact(inst in instance()) {
        let w = critical_speeds(&inst.measure, &inst.params).unwrap();
        prop_assert!(w.c_lo < w.c_hi);
        prop_assert!(run_length(&inst.measure, &inst.params, Sign::Plus, w.c_lo).abs() < 1e-10);
        prop_assert!(run_length(&inst.measure, &inst.params, Sign::Minus, w.c_hi).abs() < 1e-10);
        let samples: Vec<f64> = (0..100)
            .map(|k| -1.0 + 2.0 * (k as f64 + 0.5) / 100.0)
            .map(|c| run_length(&inst.measure, &inst.params, Sign::Plus, c))
            .collect();
        prop_assert!(samples.windows(2).all(|p| p[1] < p[0]));
    }

    #[test]
    fn mode_normalization(inst in instance()) {
        let (m, p, c) = (&inst.measure, &inst.params, inst.c);
        let basis = dispersion_roots(m, p, c).unwrap();
        prop_assert_eq!(basis.left.len(), m.count_below(c));
        for mode in basis.modes() {
            let z = mode.side.z_sign();
            let tf: f64 = m.velocities().iter().zip(m.weights()).zip(&mode.profile)
                .map(|((v, w), f)| w * p.rates().at(z, v - c) * f).sum();
            prop_assert!((tf - 1.0).abs() < 1e-10, "sum w T F = {}", tf);
            prop_assert!(mode.lambda > 0.0);
        }
        prop_assert!(basis.principal_left().profile.iter().all(|&f| f > 0.0));
        prop_assert!(basis.principal_right().profile.iter().all(|&f| f > 0.0));
    }

    #[test]
    fn exponents_are_monotone_in_speed(inst in instance()) {
        let (m, p, c) = (&inst.measure, &inst.params, inst.c);
        let w = critical_speeds(m, p).unwrap();
        let dc = 1e-5;
        prop_assume!(w.contains(c + dc) && m.count_below(c + dc) == m.count_below(c) && m.nearest(c + dc).1 > 1e-4);
        let a = dispersion_roots(m, p, c).unwrap();
        let b = dispersion_roots(m, p, c + dc).unwrap();
        for (x, y) in a.left.iter().zip(&b.left) {
            prop_assert!(y.lambda < x.lambda);
        }
        for (x, y) in a.right.iter().zip(&b.right) {
            prop_assert!(y.lambda > x.lambda);
        }
    }

    #[test]
    fn left_null_vector_annihilates(inst in instance()) {
        let (m, c) = (&inst.measure, inst.c);
        let basis = dispersion_roots(m, &inst.params, c).unwrap();
        let n = m.len();
        let mat = transfer_matrix(&basis);
        for k in 0..n {
            let s: f64 = (0..n).map(|i| m.weights()[i] * (m.velocities()[i] - c) * mat[i * n + k]).sum();
            let scale: f64 = (0..n).map(|i| (m.weights()[i] * (m.velocities()[i] - c) * mat[i * n + k]).abs()).sum();
            prop_assert!(s.abs() < 1e-11 * scale.max(1.0), "column {} gives {}", k, s);
        }
    }

    #[test]
    fn tumbling_density_splits_by_direction(inst in instance()) {
        let prof = profile(&inst);
        let r = inst.params.rates();
        for z in prof.sample_grid(20).into_iter().filter(|z| *z > 0.0) {
            let lhs = prof.eval_i(z);
            let rhs = r.t_pp * prof.eval_rho_side(z, Sign::Plus) + r.t_pm * prof.eval_rho_side(z, Sign::Minus);
            prop_assert!((lhs - rhs).abs() <= 1e-13 * lhs.abs().max(1e-300) + 1e-300);
        }
    }

    #[test]
    fn backward_runs_are_dominated(inst in instance()) {
        let prof = profile(&inst);
        let t = inst.params.rates().t_pm;
        let slow: Vec<usize> = (0..inst.measure.len()).filter(|&i| inst.measure.velocities()[i] < inst.c).collect();
        for z in prof.sample_grid(50).into_iter().filter(|z| *z > 0.0) {
            let i = prof.eval_i(z);
            for &k in &slow {
                prop_assert!(t * prof.eval_f(z, k) < i, "z = {}, v index {}", z, k);
            }
        }
    }

    #[test]
    fn green_exponent_product(c in -0.9f64..0.9, alpha in 0.1f64..100.0, d_s in 0.05f64..5.0) {
        let g = green_exponents(c, alpha, d_s).unwrap();
        prop_assert!((g.mu_minus * g.mu_plus - alpha / d_s).abs() < 1e-12 * alpha / d_s);
        prop_assert!(g.mu_minus > 0.0 && g.mu_plus > 0.0);
    }

    #[test]
    fn macroscopic_speed_and_signs(chi_s in 0.01f64..0.5, chi_n in 0.001f64..0.5, alpha in 0.1f64..100.0, d_s in 0.05f64..5.0) {
        let m = MacroParams::new(chi_s, chi_n, alpha, d_s, 1.0).unwrap();
        let c = macro_speed(&m).unwrap();
        prop_assert!(0.0 < c && c < chi_n);
        prop_assert!(macro_upsilon(&m, c).unwrap().abs() < 1e-10);
        if m.admissible(0.0) {
            prop_assert!(macro_upsilon(&m, 0.0).unwrap() > 0.0);
        }
        prop_assert!(macro_upsilon(&m, chi_n).unwrap() < 0.0);
    }

    #[test]
    fn symmetric_clusters_have_zero_slope(half in prop::collection::vec(0.05f64..1.0, 1..5), chi_s in 0.05f64..0.49) {
        let mut pos: Vec<f64> = half.iter().scan(0.0, |acc, g| { *acc += g; Some(*acc) }).collect();
        let top = *pos.last().unwrap();
        pos.iter_mut().for_each(|x| *x /= top);
        let mut v: Vec<f64> = pos.iter().rev().map(|x| -x).collect();
        v.extend(&pos);
        let w: Vec<f64> = pos.iter().rev().chain(&pos).map(|x| 1.0 + x).collect();
        let m = VelocityMeasure::new(&v, &w).unwrap();
        let p = KineticParams::new(chi_s, 0.0).unwrap();
        let cluster = stationary_cluster(&m, &p, &FieldParams::new(50.0, 0.5).unwrap()).unwrap();
        prop_assert!(cluster.upsilon.abs() < 1e-10);
        prop_assert!(upsilon(&cluster.profile, 3.0, 2.0).unwrap().abs() < 1e-10);
    }

    #[test]
    fn config_round_trips(chi_s in 0.01f64..0.49, chi_n in 0.0f64..0.49, nz in 10usize..5000) {
        let cfg = RunConfig {
            velocities: Some(vec![-1.0, -0.25, 0.5, 1.0]),
            chi_s: Some(chi_s),
            chi_n: Some(chi_n),
            alpha: Some(50.0),
            d_s: Some(0.5),
            grid: kinwave::config::GridConfig { half_width: Some(30.0), nz: Some(nz) },
            ..RunConfig::default()
        };
        let toml_text = toml::to_string(&cfg).unwrap();
        prop_assert_eq!(RunConfig::from_toml(&toml_text).unwrap(), cfg.clone());
        let json_text = serde_json::to_string(&cfg).unwrap();
        prop_assert_eq!(RunConfig::from_json(&json_text).unwrap(), cfg);
    }
}
