//! Monte Carlo validation of interval coverage, test size, estimator
//! variances and the studentized statistic's law.
//!
//! Each replication measures the composite observable of the regression
//! system at the true state `(β, σ)`, fits the model and records interval
//! coverage and estimates. Replication `r` draws from its own generator seeded
//! by a hash of `(master_seed, r)` and results are aggregated in replication
//! order, so reports do not depend on the worker count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyptest::{confidence_interval, studentized, DivisorMode};
use crate::regression::{build_regression_system, fit_glm, Design, NoiseScale};
use crate::space::State;
use crate::tdist::t_cdf;

/// Environment variable capping simulation worker threads (0 or unset: auto).
pub const THREADS_ENV: &str = "MTREG_THREADS";

#[derive(Debug, Clone)]
pub struct SimulationPlan {
    pub design: Design,
    pub beta: Vec<f64>,
    pub sigma: f64,
    pub replications: usize,
    pub alpha: f64,
    pub master_seed: u64,
    pub divisor_modes: Vec<DivisorMode>,
}

impl SimulationPlan {
    pub fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::Domain("replications must be at least 1".into()));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::Domain(format!("sigma must be positive, got {}", self.sigma)));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Domain(format!("alpha must lie in (0, 1), got {}", self.alpha)));
        }
        if self.beta.len() != self.design.m() + 1 {
            return Err(Error::DimensionMismatch { expected: self.design.m() + 1, got: self.beta.len() });
        }
        if self.design.n() < self.design.m() + 2 {
            return Err(Error::InsufficientData { needed: self.design.m() + 2, got: self.design.n() });
        }
        if self.divisor_modes.is_empty() {
            return Err(Error::Domain("no divisor mode requested".into()));
        }
        Ok(())
    }
}

/// SplitMix64 finalizer over `(master_seed, replication)`.
pub fn substream_seed(master_seed: u64, replication: u64) -> u64 {
    let mut z = master_seed.wrapping_add(replication.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Worker count from [`THREADS_ENV`]; `0` means "let rayon decide".
pub fn threads_from_env() -> usize {
    std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeCoverage {
    pub mode: DivisorMode,
    pub empirical_coverage: f64,
    pub empirical_rejection_rate_at_true_null: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientCoverage {
    pub k: usize,
    pub true_value: f64,
    pub mean_beta_hat: f64,
    pub empirical_var_beta: f64,
    /// `σ² [(AᵀA)⁻¹]_kk`; for simple regression `σ²/n·(1+ā²/s_aa)` and `σ²/(n·s_aa)`.
    pub formula_var_beta: f64,
    pub modes: Vec<ModeCoverage>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub replications: usize,
    pub seed: u64,
    pub alpha: f64,
    pub n: usize,
    pub m: usize,
    pub sigma: f64,
    pub coefficients: Vec<CoefficientCoverage>,
}

impl CoverageReport {
    pub fn coefficient(&self, k: usize) -> &CoefficientCoverage {
        &self.coefficients[k]
    }

    pub fn mode(&self, k: usize, mode: DivisorMode) -> Option<&ModeCoverage> {
        self.coefficients[k].modes.iter().find(|c| c.mode == mode)
    }
}

struct Replication {
    beta_hat: Vec<f64>,
    // [k][mode] -> covered
    covered: Vec<Vec<bool>>,
    // [k][mode] -> signed studentized deviation
    t_stats: Vec<Vec<f64>>,
}

fn replicate(plan: &SimulationPlan, modes: &[DivisorMode], threads: usize) -> Result<Vec<Replication>> {
    plan.validate()?;
    let system = build_regression_system(&plan.design, NoiseScale::Unknown)?;
    let composite = system.composite_observable(false)?;
    let mut coords = plan.beta.clone();
    coords.push(plan.sigma);
    let truth = State::new(composite.state_space(), coords)?;
    let p = plan.design.m() + 1;

    let one = |r: usize| -> Result<Replication> {
        let seed = substream_seed(plan.master_seed, r as u64);
        let x = composite.sample(&truth, seed, 1)?.pop().expect("one draw");
        let fit = fit_glm(&plan.design, &x)?;
        let mut covered = Vec::with_capacity(p);
        let mut t_stats = Vec::with_capacity(p);
        for k in 0..p {
            let mut c = Vec::with_capacity(modes.len());
            let mut t = Vec::with_capacity(modes.len());
            for &mode in modes {
                c.push(confidence_interval(&fit, k, plan.alpha, mode)?.contains(plan.beta[k]));
                t.push(studentized(&fit, k, plan.beta[k], mode)?);
            }
            covered.push(c);
            t_stats.push(t);
        }
        Ok(Replication { beta_hat: fit.beta_hat, covered, t_stats })
    };

    let run = || (0..plan.replications).into_par_iter().map(one).collect::<Result<Vec<_>>>();
    if threads == 0 {
        run()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Construction(format!("thread pool: {e}")))?
            .install(run)
    }
}

/// Neumaier-compensated sum.
fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

fn formula_variance(plan: &SimulationPlan, k: usize) -> Result<f64> {
    let s2 = plan.sigma * plan.sigma;
    let n = plan.design.n() as f64;
    if plan.design.m() == 1 {
        let a = plan.design.column(1);
        let a_bar = a.iter().sum::<f64>() / n;
        let s_aa = a.iter().map(|v| (v - a_bar) * (v - a_bar)).sum::<f64>() / n;
        return Ok(if k == 0 { s2 / n * (1.0 + a_bar * a_bar / s_aa) } else { s2 / (n * s_aa) });
    }
    Ok(s2 * plan.design.qr().inverse_gram_diagonal()[k])
}

/// Runs the plan with the worker count from [`THREADS_ENV`].
pub fn run_coverage(plan: &SimulationPlan) -> Result<CoverageReport> {
    run_coverage_with_threads(plan, threads_from_env())
}

pub fn run_coverage_with_threads(plan: &SimulationPlan, threads: usize) -> Result<CoverageReport> {
    let reps = replicate(plan, &plan.divisor_modes, threads)?;
    let r = reps.len() as f64;
    let coefficients = (0..=plan.design.m())
        .map(|k| {
            let mean = compensated_sum(reps.iter().map(|x| x.beta_hat[k])) / r;
            let var = compensated_sum(reps.iter().map(|x| (x.beta_hat[k] - mean).powi(2))) / r;
            let modes = plan
                .divisor_modes
                .iter()
                .enumerate()
                .map(|(j, &mode)| {
                    let hits = reps.iter().filter(|x| x.covered[k][j]).count();
                    ModeCoverage {
                        mode,
                        empirical_coverage: hits as f64 / r,
                        empirical_rejection_rate_at_true_null: (reps.len() - hits) as f64 / r,
                    }
                })
                .collect();
            Ok(CoefficientCoverage {
                k,
                true_value: plan.beta[k],
                mean_beta_hat: mean,
                empirical_var_beta: var,
                formula_var_beta: formula_variance(plan, k)?,
                modes,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CoverageReport {
        replications: plan.replications,
        seed: plan.master_seed,
        alpha: plan.alpha,
        n: plan.design.n(),
        m: plan.design.m(),
        sigma: plan.sigma,
        coefficients,
    })
}

/// Two-sided Kolmogorov–Smirnov distance between a sample and a CDF.
/// `None` for fewer than two points.
pub fn ks_distance<F: Fn(f64) -> f64>(sample: &[f64], cdf: F) -> Option<f64> {
    if sample.len() < 2 {
        return None;
    }
    let mut xs = sample.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let d = xs.iter().enumerate().fold(0.0f64, |d, (i, &x)| {
        let f = cdf(x);
        d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n)
    });
    Some(d)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudentizedSummary {
    pub k: usize,
    pub mode: DivisorMode,
    pub mean: f64,
    pub variance: f64,
    /// `None` when fewer than two replications were run.
    pub ks_distance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudentizationReport {
    pub replications: usize,
    pub seed: u64,
    pub df: u32,
    pub summaries: Vec<StudentizedSummary>,
}

impl StudentizationReport {
    pub fn get(&self, k: usize, mode: DivisorMode) -> Option<&StudentizedSummary> {
        self.summaries.iter().find(|s| s.k == k && s.mode == mode)
    }
}

/// Distribution of `T_{β_k} = (β̂_k − β_k)/se_k` under both divisors,
/// compared with `t_{n−m−1}` by the Kolmogorov–Smirnov distance.
pub fn run_studentization_check(plan: &SimulationPlan) -> Result<StudentizationReport> {
    if !plan.divisor_modes.contains(&DivisorMode::Exact) {
        return Err(Error::Domain("studentization check needs the exact divisor mode".into()));
    }
    let modes = DivisorMode::ALL;
    let reps = replicate(plan, &modes, threads_from_env())?;
    let df = (plan.design.n() - plan.design.m() - 1) as u32;
    let mut summaries = Vec::new();
    for k in 0..=plan.design.m() {
        for (j, &mode) in modes.iter().enumerate() {
            let t: Vec<f64> = reps.iter().map(|x| x.t_stats[k][j]).collect();
            let r = t.len() as f64;
            let mean = compensated_sum(t.iter().copied()) / r;
            let variance = compensated_sum(t.iter().map(|v| (v - mean).powi(2))) / r;
            let ks = ks_distance(&t, |v| t_cdf(v, df).unwrap_or(f64::NAN));
            summaries.push(StudentizedSummary { k, mode, mean, variance, ks_distance: ks });
        }
    }
    Ok(StudentizationReport { replications: plan.replications, seed: plan.master_seed, df, summaries })
}
