//! Studentized confidence intervals and two-sided tests for regression
//! coefficients.
//!
//! For coefficient `k` the semi-distance between two parameter values is
//! `|θ − θ'| / se_k`, where `se_k² = σ̂² [(AᵀA)⁻¹]_kk`; for simple regression
//! this is `σ̂²/n · (1 + ā²/s_aa)` for the intercept and `σ̂²/(n·s_aa)` for the
//! slope. The threshold `η` is the upper `α/2` point of `t_{n−m−1}`. A value
//! is rejected exactly when it lies outside the interval, so intervals and
//! tests share one statistic.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::regression::RegressionFit;
use crate::tdist::t_quantile;

/// Which residual-variance divisor studentizes the statistic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DivisorMode {
    /// σ̂² = RSS/n, the maximum-likelihood estimate.
    PaperVerbatim,
    /// σ̂² = RSS/(n − m − 1); the statistic is then exactly t-distributed.
    Exact,
}

impl DivisorMode {
    pub const ALL: [DivisorMode; 2] = [DivisorMode::Exact, DivisorMode::PaperVerbatim];

    pub fn as_str(self) -> &'static str {
        match self {
            DivisorMode::PaperVerbatim => "paper-verbatim",
            DivisorMode::Exact => "exact",
        }
    }

    pub fn sigma_sq(self, fit: &RegressionFit) -> f64 {
        match self {
            DivisorMode::PaperVerbatim => fit.sigma_hat_sq_mle,
            DivisorMode::Exact => fit.sigma_hat_sq_unbiased,
        }
    }
}

impl std::str::FromStr for DivisorMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper-verbatim" | "paper_verbatim" => Ok(DivisorMode::PaperVerbatim),
            "exact" => Ok(DivisorMode::Exact),
            other => Err(Error::Domain(format!("unknown divisor mode '{other}'"))),
        }
    }
}

impl std::fmt::Display for DivisorMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    Ok(())
}

fn check_coef(fit: &RegressionFit, k: usize) -> Result<()> {
    if k > fit.m() {
        return Err(Error::Domain(format!("coefficient index {k} out of range 0..={}", fit.m())));
    }
    Ok(())
}

/// Scaled absolute difference on the parameter line of one coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SemiDistance {
    pub k: usize,
    /// Estimated standard error of `β̂_k`.
    pub scale: f64,
}

impl SemiDistance {
    pub fn new(fit: &RegressionFit, k: usize, mode: DivisorMode) -> Result<Self> {
        check_coef(fit, k)?;
        let sigma_sq = mode.sigma_sq(fit);
        let n = fit.n() as f64;
        let var = match fit.stats {
            Some(s) if fit.m() == 1 => match k {
                0 => sigma_sq / n * (1.0 + s.a_bar * s.a_bar / s.s_aa),
                _ => sigma_sq / n / s.s_aa,
            },
            _ => sigma_sq * fit.inverse_gram_diag[k],
        };
        Ok(Self { k, scale: var.max(0.0).sqrt() })
    }

    pub fn distance(&self, a: f64, b: f64) -> f64 {
        let diff = (a - b).abs();
        if diff == 0.0 {
            0.0
        } else {
            diff / self.scale
        }
    }
}

/// `η = t_{n−m−1}(α/2)`, the upper `α/2` point.
pub fn eta_threshold(fit: &RegressionFit, k: usize, alpha: f64, _mode: DivisorMode) -> Result<f64> {
    check_alpha(alpha)?;
    check_coef(fit, k)?;
    t_quantile(1.0 - alpha / 2.0, fit.df() as u32)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalReport {
    pub k: usize,
    pub alpha: f64,
    pub center: f64,
    pub half_width: f64,
    pub lo: f64,
    pub hi: f64,
    pub eta: f64,
    pub std_error: f64,
    pub divisor_mode: DivisorMode,
}

impl IntervalReport {
    /// Membership by the same strict inequality the test uses, so that
    /// `contains(v)` is exactly `!rejected` for null value `v`.
    pub fn contains(&self, value: f64) -> bool {
        let d = SemiDistance { k: self.k, scale: self.std_error };
        d.distance(self.center, value) < self.eta
    }
}

pub fn confidence_interval(fit: &RegressionFit, k: usize, alpha: f64, mode: DivisorMode) -> Result<IntervalReport> {
    let eta = eta_threshold(fit, k, alpha, mode)?;
    let d = SemiDistance::new(fit, k, mode)?;
    let center = fit.beta_hat[k];
    let half_width = eta * d.scale;
    Ok(IntervalReport {
        k,
        alpha,
        center,
        half_width,
        lo: center - half_width,
        hi: center + half_width,
        eta,
        std_error: d.scale,
        divisor_mode: mode,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub k: usize,
    pub null_value: f64,
    pub alpha: f64,
    pub statistic: f64,
    pub threshold: f64,
    pub rejected: bool,
    pub divisor_mode: DivisorMode,
}

/// Two-sided test of `H: β_k = null_value`; rejected when the studentized
/// distance reaches `η`.
pub fn hypothesis_test(fit: &RegressionFit, k: usize, null_value: f64, alpha: f64, mode: DivisorMode) -> Result<TestReport> {
    let threshold = eta_threshold(fit, k, alpha, mode)?;
    let d = SemiDistance::new(fit, k, mode)?;
    let statistic = d.distance(fit.beta_hat[k], null_value);
    Ok(TestReport { k, null_value, alpha, statistic, threshold, rejected: statistic >= threshold, divisor_mode: mode })
}

/// Signed studentized deviation `(β̂_k − β_k) / se_k`.
pub fn studentized(fit: &RegressionFit, k: usize, true_value: f64, mode: DivisorMode) -> Result<f64> {
    let d = SemiDistance::new(fit, k, mode)?;
    Ok((fit.beta_hat[k] - true_value) / d.scale)
}
