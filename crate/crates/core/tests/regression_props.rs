#![allow(clippy::needless_range_loop)]

mod common;

use mtreg_core::{fit_glm, fit_simple, sample_stats, Design, Error};
use proptest::prelude::*;
use rand::Rng;

fn simple_data() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (3..100usize, any::<u64>()).prop_map(|(n, seed)| common::simple_instance(&mut common::rng(seed), n))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

    #[test]
    fn closed_form_matches_normal_equations((a, x) in simple_data()) {
        let fit = fit_simple(&a, &x).unwrap();
        let rows: Vec<Vec<f64>> = a.iter().map(|&v| vec![v]).collect();
        let (beta, mse) = common::normal_equations(&rows, &x);
        prop_assert!((fit.beta_hat[0] - beta[0]).abs() < 1e-10);
        prop_assert!((fit.beta_hat[1] - beta[1]).abs() < 1e-10);
        prop_assert!((fit.sigma_hat_sq_mle - mse).abs() < 1e-10);
    }

    #[test]
    fn simple_equals_glm((a, x) in simple_data()) {
        let s = fit_simple(&a, &x).unwrap();
        let g = fit_glm(&Design::simple(&a).unwrap(), &x).unwrap();
        for k in 0..2 {
            prop_assert!((s.beta_hat[k] - g.beta_hat[k]).abs() < 1e-12, "k={} {} vs {}", k, s.beta_hat[k], g.beta_hat[k]);
        }
        prop_assert!((s.sigma_hat_sq_mle - g.sigma_hat_sq_mle).abs() < 1e-12);
    }

    #[test]
    fn variance_identity((a, x) in simple_data()) {
        let fit = fit_simple(&a, &x).unwrap();
        let rss_over_n = fit.residuals.iter().map(|e| e * e).sum::<f64>() / fit.n() as f64;
        prop_assert!((fit.sigma_hat_sq_mle - rss_over_n).abs() < 1e-12);
    }

    #[test]
    fn residuals_are_orthogonal_to_the_design(n in 6..60usize, m in 1..5usize, seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let rows: Vec<Vec<f64>> = (0..n).map(|_| (0..m).map(|_| rng.random_range(-10.0..10.0)).collect()).collect();
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(-50.0..50.0)).collect();
        prop_assume!(n >= m + 2);
        let fit = fit_glm(&Design::new(&rows).unwrap(), &x).unwrap();
        let scale = x.iter().fold(1.0f64, |s, v| s.max(v.abs())) * 10.0 * n as f64;
        for j in 0..=m {
            let dot: f64 = (0..n).map(|i| if j == 0 { 1.0 } else { rows[i][j - 1] } * fit.residuals[i]).sum();
            prop_assert!(dot.abs() < 1e-9 * scale, "column {} dot {}", j, dot);
        }
    }

    #[test]
    fn affine_equivariance((a, x) in simple_data(), c in -5.0..5.0f64, d in -5.0..5.0f64) {
        prop_assume!(c.abs() > 1e-3);
        let base = fit_simple(&a, &x).unwrap();
        let y: Vec<f64> = x.iter().map(|v| c * v + d).collect();
        let t = fit_simple(&a, &y).unwrap();
        prop_assert!((t.beta_hat[0] - (c * base.beta_hat[0] + d)).abs() < 1e-10);
        prop_assert!((t.beta_hat[1] - c * base.beta_hat[1]).abs() < 1e-10);
        prop_assert!((t.sigma_hat_sq_mle - c * c * base.sigma_hat_sq_mle).abs() < 1e-10);
    }
}

#[test]
fn glm_matches_elimination_seed_7() {
    let mut rng = common::rng(7);
    let (n, m) = (25, 3);
    let rows: Vec<Vec<f64>> = (0..n).map(|_| (0..m).map(|_| rng.random_range(-3.0..3.0)).collect()).collect();
    let beta = [0.5, -1.0, 2.0, 0.25];
    let x: Vec<f64> = rows
        .iter()
        .map(|r| beta[0] + r.iter().zip(&beta[1..]).map(|(a, b)| a * b).sum::<f64>() + common::standard_normal(&mut rng))
        .collect();
    let fit = fit_glm(&Design::new(&rows).unwrap(), &x).unwrap();
    let (oracle, mse) = common::normal_equations(&rows, &x);
    for k in 0..=m {
        assert!((fit.beta_hat[k] - oracle[k]).abs() < 1e-8, "k={k}");
    }
    assert!((fit.sigma_hat_sq_mle - mse).abs() < 1e-8);
    assert_eq!(fit.df(), n - m - 1);
}

#[test]
fn worked_examples() {
    let s = sample_stats(&[0.0, 1.0, 2.0], &[1.0, 1.0, 3.0]).unwrap();
    assert_eq!(s.a_bar, 1.0);
    assert!((s.x_bar - 5.0 / 3.0).abs() < 1e-15);
    assert!((s.s_aa - 2.0 / 3.0).abs() < 1e-15 && (s.s_ax - 2.0 / 3.0).abs() < 1e-15 && (s.s_xx - 8.0 / 9.0).abs() < 1e-15);
    let c = sample_stats(&[2.0; 4], &[1.0, 2.0, 3.0, 4.0]).unwrap();
    assert_eq!((c.s_aa, c.s_ax), (0.0, 0.0));

    let fit = fit_simple(&[0.0, 1.0, 2.0], &[1.0, 1.0, 3.0]).unwrap();
    assert!((fit.beta_hat[0] - 2.0 / 3.0).abs() < 1e-15 && (fit.beta_hat[1] - 1.0).abs() < 1e-15);
    assert!((fit.sigma_hat_sq_mle - 2.0 / 9.0).abs() < 1e-15);

    let exact = fit_simple(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]).unwrap();
    assert!(exact.beta_hat[0].abs() < 1e-14 && (exact.beta_hat[1] - 2.0).abs() < 1e-14);
    assert!(exact.sigma_hat_sq_mle.abs() < 1e-14);

    assert!(matches!(fit_simple(&[1.0; 3], &[1.0, 5.0, 2.0]), Err(Error::SingularDesign { .. })));

    let rows = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]];
    let g = fit_glm(&Design::new(&rows).unwrap(), &[1.0, 2.0, 3.0, 4.0]).unwrap();
    for (b, want) in g.beta_hat.iter().zip([1.0, 1.0, 2.0]) {
        assert!((b - want).abs() < 1e-14);
    }
    assert!(g.sigma_hat_sq_mle.abs() < 1e-28);

    assert!(Design::simple(&[1.0]).is_err());
}
