mod common;

use mtreg_core::inference::data_search_box;
use mtreg_core::observable::DensityFn;
use mtreg_core::{
    build_regression_system, fit_simple, likelihood_ratio, mle_generic, mle_normal_closed_form, Design,
    LikelihoodProblem, NoiseScale, Observable, State, StateSpace,
};
use rand::Rng;
use std::sync::Arc;

const TOL: f64 = 1e-9;

fn normal_problem(x: &[f64]) -> LikelihoodProblem {
    let obs = Observable::iid(&Observable::normal_unknown_sigma().unwrap(), x.len()).unwrap();
    let bx = data_search_box(x, &[false, true]).unwrap();
    LikelihoodProblem::new(&obs, x.to_vec(), bx).unwrap()
}

#[test]
fn generic_agrees_with_closed_form_on_50_instances() {
    let mut rng = common::rng(50);
    for case in 0..50 {
        let n = rng.random_range(5..=50);
        let (mu, sd) = (rng.random_range(-10.0..10.0), rng.random_range(0.2..5.0));
        let x: Vec<f64> = (0..n).map(|_| mu + sd * common::standard_normal(&mut rng)).collect();
        // closed form written out directly
        let mean = x.iter().sum::<f64>() / n as f64;
        let sig = (x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64).sqrt();
        let (cm, cs) = mle_normal_closed_form(&x).unwrap();
        assert!((cm - mean).abs() < 1e-12 && (cs - sig).abs() < 1e-12);
        let r = mle_generic(&normal_problem(&x), TOL, 40_000).unwrap();
        assert!((r.estimate[0] - mean).abs() < 1e-3, "case {case}: {:?} vs {mean}", r.estimate.coords());
        assert!((r.estimate[1] - sig).abs() < 1e-3, "case {case}: {:?} vs {sig}", r.estimate.coords());
    }
}

#[test]
fn three_point_and_large_samples() {
    let r = mle_generic(&normal_problem(&[1.0, 2.0, 3.0]), TOL, 40_000).unwrap();
    assert!((r.estimate[0] - 2.0).abs() < 1e-4 && (r.estimate[1] - (2.0f64 / 3.0).sqrt()).abs() < 1e-4);

    let mut rng = common::rng(42);
    let x: Vec<f64> = (0..10_000).map(|_| common::standard_normal(&mut rng)).collect();
    let (m, s) = mle_normal_closed_form(&x).unwrap();
    let r = mle_generic(&normal_problem(&x), TOL, 40_000).unwrap();
    assert!((r.estimate[0] - m).abs() < 1e-3 && (r.estimate[1] - s).abs() < 1e-3);
    assert_eq!(mle_normal_closed_form(&[3.25; 5]).unwrap(), (3.25, 0.0));
}

#[test]
fn no_probe_point_beats_the_estimate() {
    let x = [0.3, -1.2, 2.2, 0.9, 1.4, -0.1];
    let p = normal_problem(&x);
    let r = mle_generic(&p, TOL, 40_000).unwrap();
    let best = r.log_density_at_estimate;
    let mut rng = common::rng(1);
    let bx = p.search_box().to_vec();
    let mut worst_gap = f64::NEG_INFINITY;
    for _ in 0..1_000_000 {
        let w = [rng.random_range(bx[0].0..bx[0].1), rng.random_range(bx[1].0..bx[1].1)];
        worst_gap = worst_gap.max(p.log_density_at(&w) - best);
    }
    assert!(worst_gap <= TOL, "probe exceeded estimate by {worst_gap}");
}

#[test]
fn composite_regression_mle_reproduces_least_squares() {
    let a = [0.0, 1.0, 2.0];
    let x = [1.0, 1.0, 3.0];
    let sys = build_regression_system(&Design::simple(&a).unwrap(), NoiseScale::Known(1.0)).unwrap();
    let comp = sys.composite_observable(true).unwrap();
    let p = LikelihoodProblem::new(&comp, x.to_vec(), vec![(-20.0, 20.0); 2]).unwrap();
    let r = mle_generic(&p, TOL, 40_000).unwrap();
    assert!((r.estimate[0] - 2.0 / 3.0).abs() < 1e-4 && (r.estimate[1] - 1.0).abs() < 1e-4);

    let mut rng = common::rng(20);
    for _ in 0..5 {
        let n = rng.random_range(3..=20);
        let (a, x) = common::simple_instance(&mut rng, n);
        let fit = fit_simple(&a, &x).unwrap();
        let sys = build_regression_system(&Design::simple(&a).unwrap(), NoiseScale::Known(1.0)).unwrap();
        let p = LikelihoodProblem::new(&sys.composite_observable(false).unwrap(), x, vec![(-50.0, 50.0); 2]).unwrap();
        let r = mle_generic(&p, TOL, 40_000).unwrap();
        for k in 0..2 {
            assert!((r.estimate[k] - fit.beta_hat[k]).abs() < 1e-4);
        }
    }
}

#[test]
fn likelihood_ratio_ignores_density_scale() {
    let space = StateSpace::real(1).unwrap();
    let scaled = |c: f64| -> Observable {
        let d: DensityFn = Arc::new(move |x: &[f64], w: &State| c * common::gauss_pdf(x[0], w[0], 1.0));
        Observable::custom(&space, d, None)
    };
    let x = [0.7];
    let w = State::new(&space, vec![1.9]).unwrap();
    let at_mle = State::new(&space, vec![0.7]).unwrap();
    let mut ratios = Vec::new();
    for c in [1.0, 1e-3, 42.0] {
        let obs = scaled(c);
        let sup = obs.density(&x, &at_mle).unwrap();
        ratios.push(likelihood_ratio(&obs, &x, &w, sup).unwrap());
        assert!((likelihood_ratio(&obs, &x, &at_mle, sup).unwrap() - 1.0).abs() < 1e-9);
    }
    assert!(ratios.iter().all(|r| (r - ratios[0]).abs() < 1e-14), "{ratios:?}");
    assert!((ratios[0] - (-0.5f64 * 1.2 * 1.2).exp()).abs() < 1e-14);
}
