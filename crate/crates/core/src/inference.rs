//! Fisher maximum-likelihood inference for density observables.
//!
//! For an observable with density `p(x|ω)`, the likelihood of the state `ω`
//! given a measured value `x` is the ratio `L(x, ω) = p(x|ω) / sup_ω' p(x|ω')`
//! and the inferred state is any `ω₀` with `L(x, ω₀) = 1`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::observable::Observable;
use crate::optim::{nelder_mead, shifted_halton, SimplexCoefficients};
use crate::space::State;

/// Number of multi-start legs.
pub const STARTS: usize = 8;
const START_SEED: u64 = 0x6d74_7265_675f_6d6c;

/// A measured value together with the observable that produced it and a
/// finite box in which to search for the maximizing state.
#[derive(Debug, Clone)]
pub struct LikelihoodProblem {
    obs: Observable,
    measured: Vec<f64>,
    search_box: Vec<(f64, f64)>,
}

impl LikelihoodProblem {
    pub fn new(obs: &Observable, measured: Vec<f64>, search_box: Vec<(f64, f64)>) -> Result<Self> {
        let space = obs.state_space();
        if measured.len() != obs.value_dim() {
            return Err(Error::DimensionMismatch { expected: obs.value_dim(), got: measured.len() });
        }
        if search_box.len() != space.dims() {
            return Err(Error::DimensionMismatch { expected: space.dims(), got: search_box.len() });
        }
        for (i, &(lo, hi)) in search_box.iter().enumerate() {
            if !(lo.is_finite() && hi.is_finite()) {
                return Err(Error::Domain(format!("search box dimension {i} is not finite: [{lo}, {hi}]")));
            }
            if lo >= hi {
                return Err(Error::Domain(format!("search box dimension {i} is empty: [{lo}, {hi}]")));
            }
            let (slo, shi) = space.bounds(i);
            if lo < slo || hi > shi {
                return Err(Error::Domain(format!(
                    "search box dimension {i} [{lo}, {hi}] leaves the state space [{slo}, {shi}]"
                )));
            }
            if space.is_positive(i) && lo <= 0.0 {
                return Err(Error::Domain(format!("search box dimension {i} must stay strictly positive")));
            }
        }
        Ok(Self { obs: obs.clone(), measured, search_box })
    }

    pub fn observable(&self) -> &Observable {
        &self.obs
    }

    pub fn measured(&self) -> &[f64] {
        &self.measured
    }

    pub fn search_box(&self) -> &[(f64, f64)] {
        &self.search_box
    }

    /// `log p(x | ω)` at raw coordinates, `-inf` where undefined.
    pub fn log_density_at(&self, coords: &[f64]) -> f64 {
        State::new(self.obs.state_space(), coords.to_vec())
            .and_then(|w| self.obs.log_density(&self.measured, &w))
            .ok()
            .filter(|v| !v.is_nan())
            .unwrap_or(f64::NEG_INFINITY)
    }
}

/// Search box derived from the spread of the measured values: location
/// coordinates in `mean ± 10·spread` and scale coordinates (positivity-masked
/// dimensions) in `[10⁻⁶·spread, 10·spread]`.
pub fn data_search_box(x: &[f64], scale_mask: &[bool]) -> Result<Vec<(f64, f64)>> {
    let (mean, sd) = mle_normal_closed_form(x)?;
    let range = x.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - x.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut spread = sd.max(range);
    if spread <= 0.0 {
        spread = mean.abs().max(1.0);
    }
    Ok(scale_mask
        .iter()
        .map(|&scale| if scale { (1e-6 * spread, 10.0 * spread) } else { (mean - 10.0 * spread, mean + 10.0 * spread) })
        .collect())
}

#[derive(Debug, Clone)]
pub struct MLEResult {
    pub estimate: State,
    pub log_density_at_estimate: f64,
    pub converged: bool,
    pub evaluations: usize,
}

impl MLEResult {
    /// `L(x, ω)` relative to the attained supremum.
    pub fn likelihood_ratio(&self, problem: &LikelihoodProblem, state: &State) -> Result<f64> {
        let ln = problem.obs.log_density(&problem.measured, state)?;
        Ok((ln - self.log_density_at_estimate).exp())
    }
}

/// Maximizes `log p(x|ω)` over the search box with multi-start simplex
/// descent. Legs start on a shifted Halton design; each leg is restarted once
/// from its own optimum to guard against simplex collapse. The best leg wins,
/// ties going to the lowest start index.
pub fn mle_generic(problem: &LikelihoodProblem, tolerance: f64, max_evals: usize) -> Result<MLEResult> {
    if !(tolerance > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tolerance}")));
    }
    let k = problem.search_box.len();
    let lower: Vec<f64> = problem.search_box.iter().map(|b| b.0).collect();
    let upper: Vec<f64> = problem.search_box.iter().map(|b| b.1).collect();
    let width: Vec<f64> = lower.iter().zip(&upper).map(|(l, u)| u - l).collect();
    let starts: Vec<Vec<f64>> = shifted_halton(STARTS, k, START_SEED)
        .into_iter()
        .map(|u| (0..k).map(|i| lower[i] + u[i] * width[i]).collect())
        .collect();
    let budget = (max_evals / (2 * STARTS)).max(k + 2);
    let neg_ll = |p: &[f64]| -problem.log_density_at(p);
    let coef = SimplexCoefficients::default();

    let legs: Vec<_> = starts
        .par_iter()
        .map(|s| {
            let step: Vec<f64> = width.iter().map(|w| 0.1 * w).collect();
            let first = nelder_mead(&neg_ll, s, &step, &lower, &upper, tolerance, budget, coef);
            let step: Vec<f64> = width.iter().map(|w| 0.01 * w).collect();
            let second = nelder_mead(&neg_ll, &first.point, &step, &lower, &upper, tolerance, budget, coef);
            let evaluations = first.evaluations + second.evaluations;
            if second.value <= first.value {
                (second.point, second.value, second.converged, evaluations)
            } else {
                (first.point, first.value, first.converged && second.converged, evaluations)
            }
        })
        .collect();

    let evaluations = legs.iter().map(|l| l.3).sum();
    let mut best = 0;
    for (i, leg) in legs.iter().enumerate() {
        if leg.1 < legs[best].1 {
            best = i;
        }
    }
    let (point, value, converged, _) = &legs[best];
    if !value.is_finite() {
        return Err(Error::NoMaximizer);
    }
    Ok(MLEResult {
        estimate: State::new(problem.obs.state_space(), point.clone())?,
        log_density_at_estimate: -value,
        converged: *converged,
        evaluations,
    })
}

/// Closed-form normal MLE: `μ̂ = Σxᵢ/n`, `σ̂ = √(Σ(xᵢ-μ̂)²/n)`.
pub fn mle_normal_closed_form(x: &[f64]) -> Result<(f64, f64)> {
    if x.is_empty() {
        return Err(Error::Domain("normal MLE of an empty sample".into()));
    }
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let var = x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    Ok((mean, var.sqrt()))
}

/// `p(x|ω) / sup`, where `sup` is a previously computed supremum of the density.
pub fn likelihood_ratio(obs: &Observable, x: &[f64], state: &State, sup: f64) -> Result<f64> {
    if !(sup > 0.0) {
        return Err(Error::Domain(format!("supremum density must be positive, got {sup}")));
    }
    Ok(obs.density(x, state)? / sup)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::observable::SigmaMode;
    use crate::space::StateSpace;

    #[test]
    fn closed_form_small_samples() {
        let (m, s) = mle_normal_closed_form(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(m, 2.0);
        assert!((s - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(mle_normal_closed_form(&[4.5; 7]).unwrap(), (4.5, 0.0));
        assert!(mle_normal_closed_form(&[]).is_err());
    }

    #[test]
    fn generic_matches_closed_form_on_three_points() {
        let n = Observable::normal_unknown_sigma().unwrap();
        let obs = Observable::iid(&n, 3).unwrap();
        let x = vec![1.0, 2.0, 3.0];
        let bx = data_search_box(&x, &[false, true]).unwrap();
        let p = LikelihoodProblem::new(&obs, x, bx).unwrap();
        let r = mle_generic(&p, 1e-9, 20_000).unwrap();
        assert!(r.converged);
        assert!((r.estimate[0] - 2.0).abs() < 1e-4);
        assert!((r.estimate[1] - (2.0f64 / 3.0).sqrt()).abs() < 1e-4);
        assert!((r.likelihood_ratio(&p, &r.estimate).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fixed_sigma_mode_is_the_observation() {
        let obs = Observable::normal_known_sigma(1.0).unwrap();
        let p = LikelihoodProblem::new(&obs, vec![5.0], vec![(-20.0, 20.0)]).unwrap();
        let r = mle_generic(&p, 1e-10, 10_000).unwrap();
        assert!((r.estimate[0] - 5.0).abs() < 1e-6);
    }

    #[test]
    fn problem_validation() {
        let obs = Observable::normal_unknown_sigma().unwrap();
        let bad = |bx: Vec<(f64, f64)>| LikelihoodProblem::new(&obs, vec![0.0], bx).unwrap_err();
        assert!(matches!(bad(vec![(0.0, 1.0), (1.0, 1.0)]), Error::Domain(_)));
        assert!(matches!(bad(vec![(0.0, 1.0), (0.0, 1.0)]), Error::Domain(_)));
        assert!(matches!(bad(vec![(f64::NEG_INFINITY, 1.0), (0.5, 1.0)]), Error::Domain(_)));
        assert!(matches!(bad(vec![(0.0, 1.0)]), Error::DimensionMismatch { .. }));
        assert!(LikelihoodProblem::new(&obs, vec![0.0, 1.0], vec![(0.0, 1.0), (0.5, 1.0)]).is_err());
        let p = LikelihoodProblem::new(&obs, vec![0.0], vec![(0.0, 1.0), (0.5, 1.0)]).unwrap();
        assert!(mle_generic(&p, 0.0, 100).is_err());
    }

    #[test]
    fn zero_density_everywhere_has_no_maximizer() {
        let space = StateSpace::real(1).unwrap();
        let dens: crate::observable::DensityFn = std::sync::Arc::new(|_: &[f64], _: &State| 0.0);
        let obs = Observable::custom(&space, dens, None);
        let p = LikelihoodProblem::new(&obs, vec![0.0], vec![(-1.0, 1.0)]).unwrap();
        assert!(matches!(mle_generic(&p, 1e-6, 1000), Err(Error::NoMaximizer)));
    }

    #[test]
    fn ratio_at_unit_shift() {
        let obs = Observable::normal(&StateSpace::real(1).unwrap(), 0, SigmaMode::Fixed(1.0)).unwrap();
        let space = obs.state_space().clone();
        let sup = obs.density(&[0.0], &State::new(&space, vec![0.0]).unwrap()).unwrap();
        let r = likelihood_ratio(&obs, &[0.0], &State::new(&space, vec![1.0]).unwrap(), sup).unwrap();
        // direct quotient of densities: exp(-1/2)
        assert!((r - 0.606_530_659_712_633_4).abs() < 1e-15);
        assert!(likelihood_ratio(&obs, &[0.0], &State::new(&space, vec![1.0]).unwrap(), 0.0).is_err());
        let mut prev = 1.0;
        for shift in [0.5, 1.0, 2.0, 4.0, 8.0] {
            let r = likelihood_ratio(&obs, &[0.0], &State::new(&space, vec![shift]).unwrap(), sup).unwrap();
            assert!(r < prev);
            prev = r;
        }
    }
}
