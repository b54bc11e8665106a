use proptest::prelude::*;

use greywalk::frac_fd::gl_coefficients;
use greywalk::frac_walk::TransitionMatrixP;
use greywalk::stats_validate::{chi_square_gof, ks_distance, linear_fit, sorted, HistogramSpec};

proptest! {
    #[test]
    fn coefficients_are_positive_decreasing_and_partition(beta in 0.01f64..0.99, k in 1usize..400) {
        let t = gl_coefficients(beta, k).unwrap();
        let c = t.c_values();
        prop_assert!(c.iter().all(|&v| v > 0.0));
        prop_assert!(c.windows(2).all(|w| w[1] < w[0]));
        let s: f64 = c.iter().sum::<f64>() + t.b(k);
        prop_assert!((s - 1.0).abs() < 1e-14);
    }

    #[test]
    fn transition_rows_are_stochastic(m in 2usize..40, mu in 0.01f64..20.0) {
        let p = TransitionMatrixP::new(m, mu);
        prop_assert!(p.row_sum_defect() < 1e-13);
        for i in 0..m {
            prop_assert!(p.row(i).iter().all(|&v| v >= 0.0));
            prop_assert!(p.row(i)[..i].iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn ks_ignores_sample_order(mut xs in prop::collection::vec(-3.0f64..3.0, 5..200), seed in any::<u64>()) {
        let cdf = |x: f64| ((x + 3.0) / 6.0).clamp(0.0, 1.0);
        let d1 = ks_distance(&sorted(&xs).unwrap(), cdf);
        let n = xs.len();
        xs.rotate_left((seed as usize) % n);
        xs.reverse();
        let d2 = ks_distance(&sorted(&xs).unwrap(), cdf);
        prop_assert_eq!(d1, d2);
        prop_assert!((0.0..=1.0).contains(&d1));
    }

    #[test]
    fn chi_square_ignores_sample_order(mut xs in prop::collection::vec(0.0f64..1.0, 50..300)) {
        let spec = HistogramSpec::new(5, 0.0, 1.0).unwrap();
        let probs = vec![0.0, 0.2, 0.2, 0.2, 0.2, 0.2, 0.0];
        let a = chi_square_gof(&xs, &spec, &probs).unwrap();
        xs.reverse();
        let b = chi_square_gof(&xs, &spec, &probs).unwrap();
        prop_assert_eq!(a.statistic, b.statistic);
        prop_assert!((0.0..=1.0).contains(&a.p_value));
    }

    #[test]
    fn slope_is_invariant_under_rescaling(slope in -3.0f64..3.0, scale in 0.1f64..10.0) {
        let x: Vec<f64> = (1..=20).map(|i| i as f64 / 4.0).collect();
        let y: Vec<f64> = x.iter().map(|v| slope * v + 1.0 + 0.01 * (v * 7.0).sin()).collect();
        let ys: Vec<f64> = y.iter().map(|v| v * scale).collect();
        let a = linear_fit(&x, &y).unwrap();
        let b = linear_fit(&x, &ys).unwrap();
        prop_assert!((b.slope - scale * a.slope).abs() < 1e-9 * (1.0 + b.slope.abs()));
        prop_assert!((a.r_squared - b.r_squared).abs() < 1e-9);
    }
}
