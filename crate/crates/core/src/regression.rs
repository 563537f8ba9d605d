//! Simple regression and the multiple linear model as inference on the
//! parallel causal system.
//!
//! Observation `i` is the leaf of a star-shaped tree; its causal map sends the
//! coefficient state `β` to the mean `β₀ + Σⱼ βⱼ aᵢⱼ`, and a normal
//! observable with spread σ is measured there. Maximizing the density of the
//! resulting composite observable is least squares.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::causality::{CausalMap, CausalSystem, TreeOrderedSet};
use crate::error::{Error, Result};
use crate::linalg::{Qr, RANK_TOL};
use crate::observable::{Observable, SigmaMode};
use crate::space::StateSpace;

/// Explanatory variables `aᵢⱼ` (n rows, m columns) with an implicit
/// intercept column.
#[derive(Debug, Clone, PartialEq)]
pub struct Design {
    n: usize,
    m: usize,
    // augmented matrix by columns; column 0 is all ones
    columns: Vec<Vec<f64>>,
    qr: Qr,
}

impl Design {
    /// Builds a design from its rows. Requires `m + 1 ≤ n` and a full-rank
    /// augmented matrix.
    pub fn new(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != m) {
            return Err(Error::Domain(format!("design row {i} has {} entries, expected {m}", r.len())));
        }
        if rows.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Domain("design contains a non-finite value".into()));
        }
        if n < m + 1 {
            return Err(Error::InsufficientData { needed: m + 1, got: n });
        }
        let mut columns = vec![vec![1.0; n]];
        columns.extend((0..m).map(|j| rows.iter().map(|r| r[j]).collect()));
        let qr = Qr::new(&columns)?;
        Ok(Self { n, m, columns, qr })
    }

    /// One explanatory variable.
    pub fn simple(a: &[f64]) -> Result<Self> {
        Self::new(&a.iter().map(|&v| vec![v]).collect::<Vec<_>>())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Column `j` of the augmented matrix (`0` is the intercept).
    pub fn column(&self, j: usize) -> &[f64] {
        &self.columns[j]
    }

    /// Row `i` of the explanatory matrix (without the intercept).
    pub fn row(&self, i: usize) -> Vec<f64> {
        self.columns[1..].iter().map(|c| c[i]).collect()
    }

    /// `β₀ + Σⱼ βⱼ aᵢⱼ` for every row.
    pub fn predict(&self, beta: &[f64]) -> Vec<f64> {
        (0..self.n).map(|i| self.columns.iter().zip(beta).map(|(c, b)| c[i] * b).sum()).collect()
    }

    pub(crate) fn qr(&self) -> &Qr {
        &self.qr
    }
}

/// Sample moments with divisor `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleStats {
    pub n: usize,
    pub a_bar: f64,
    pub x_bar: f64,
    pub s_aa: f64,
    pub s_xx: f64,
    pub s_ax: f64,
}

pub fn sample_stats(a: &[f64], x: &[f64]) -> Result<SampleStats> {
    if a.len() != x.len() {
        return Err(Error::Domain(format!("explanatory length {} differs from response length {}", a.len(), x.len())));
    }
    if a.is_empty() {
        return Err(Error::Domain("sample statistics of an empty sample".into()));
    }
    let n = a.len();
    let nf = n as f64;
    let a_bar = a.iter().sum::<f64>() / nf;
    let x_bar = x.iter().sum::<f64>() / nf;
    let (mut s_aa, mut s_xx, mut s_ax) = (0.0, 0.0, 0.0);
    for (&ai, &xi) in a.iter().zip(x) {
        let (da, dx) = (ai - a_bar, xi - x_bar);
        s_aa += da * da;
        s_xx += dx * dx;
        s_ax += da * dx;
    }
    Ok(SampleStats { n, a_bar, x_bar, s_aa: s_aa / nf, s_xx: s_xx / nf, s_ax: s_ax / nf })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegressionFit {
    pub beta_hat: Vec<f64>,
    /// Residual sum of squares over `n`.
    pub sigma_hat_sq_mle: f64,
    /// Residual sum of squares over `n − m − 1`.
    pub sigma_hat_sq_unbiased: f64,
    pub residuals: Vec<f64>,
    pub design: Design,
    /// Diagonal of `(AᵀA)⁻¹` for the augmented design matrix.
    pub inverse_gram_diag: Vec<f64>,
    /// Present for simple regression (`m = 1`).
    pub stats: Option<SampleStats>,
}

impl RegressionFit {
    pub fn n(&self) -> usize {
        self.design.n
    }

    pub fn m(&self) -> usize {
        self.design.m
    }

    /// Residual degrees of freedom `n − m − 1`.
    pub fn df(&self) -> usize {
        self.design.n - self.design.m - 1
    }

    pub fn residual_sum_of_squares(&self) -> f64 {
        self.residuals.iter().map(|r| r * r).sum()
    }
}

/// Closed-form simple regression:
/// `β̂₁ = s_ax/s_aa`, `β̂₀ = x̄ − β̂₁ā`, `σ̂² = s_xx − s_ax²/s_aa`.
pub fn fit_simple(a: &[f64], x: &[f64]) -> Result<RegressionFit> {
    let stats = sample_stats(a, x)?;
    let n = stats.n;
    if n < 3 {
        return Err(Error::InsufficientData { needed: 3, got: n });
    }
    if stats.s_aa <= RANK_TOL * (stats.a_bar * stats.a_bar + stats.s_aa).max(1.0) {
        return Err(Error::SingularDesign { column: 1 });
    }
    let b1 = stats.s_ax / stats.s_aa;
    let b0 = stats.x_bar - b1 * stats.a_bar;
    let sigma_sq = (stats.s_xx - stats.s_ax * stats.s_ax / stats.s_aa).max(0.0);
    let design = Design::simple(a)?;
    let residuals = x.iter().zip(a).map(|(&xi, &ai)| xi - (b0 + b1 * ai)).collect();
    let nf = n as f64;
    // (AᵀA)⁻¹ diagonal for the two-column design
    let inverse_gram_diag = vec![(1.0 + stats.a_bar * stats.a_bar / stats.s_aa) / nf, 1.0 / (nf * stats.s_aa)];
    Ok(RegressionFit {
        beta_hat: vec![b0, b1],
        sigma_hat_sq_mle: sigma_sq,
        sigma_hat_sq_unbiased: sigma_sq * nf / (nf - 2.0),
        residuals,
        design,
        inverse_gram_diag,
        stats: Some(stats),
    })
}

/// Least squares for `x = Aβ + ε` with `A = [1 | a]`, solved by Householder
/// QR of the augmented matrix.
pub fn fit_glm(design: &Design, x: &[f64]) -> Result<RegressionFit> {
    let (n, m) = (design.n, design.m);
    if x.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: x.len() });
    }
    if n < m + 2 {
        return Err(Error::InsufficientData { needed: m + 2, got: n });
    }
    let beta_hat = design.qr.solve(x)?;
    let fitted = design.predict(&beta_hat);
    let residuals: Vec<f64> = x.iter().zip(&fitted).map(|(xi, fi)| xi - fi).collect();
    let rss: f64 = residuals.iter().map(|r| r * r).sum();
    let stats = if m == 1 { Some(sample_stats(&design.columns[1], x)?) } else { None };
    Ok(RegressionFit {
        beta_hat,
        sigma_hat_sq_mle: rss / n as f64,
        sigma_hat_sq_unbiased: rss / (n - m - 1) as f64,
        residuals,
        inverse_gram_diag: design.qr.inverse_gram_diagonal(),
        design: design.clone(),
        stats,
    })
}

/// Noise level of the leaf observables of a regression system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseScale {
    /// σ is known; the root state is `β`.
    Known(f64),
    /// σ is part of the state; the root state is `(β, σ)`.
    Unknown,
}

/// The parallel causal system of a regression design: root `0` carries the
/// coefficient state, leaf `i` the state `β₀ + Σⱼ βⱼ aᵢⱼ` (plus σ when it is
/// unknown) and a normal observable.
pub fn build_regression_system(design: &Design, noise: NoiseScale) -> Result<CausalSystem> {
    let p = design.m + 1;
    let (root, leaf, sigma) = match noise {
        NoiseScale::Known(s) => (StateSpace::real(p)?, StateSpace::real(1)?, SigmaMode::Fixed(s)),
        NoiseScale::Unknown => (StateSpace::real_with_scale(p)?, StateSpace::real_with_scale(1)?, SigmaMode::StateCoordinate(1)),
    };
    let leaf_obs = Observable::normal(&leaf, 0, sigma)?;
    let n = design.n;
    let mut spaces = vec![root.clone()];
    let mut edges = vec![None];
    let mut observables = vec![None];
    for i in 0..n {
        let row = Arc::new(design.row(i));
        let carries_sigma = matches!(noise, NoiseScale::Unknown);
        let f = Arc::new(move |w: &[f64]| {
            let mean = w[0] + row.iter().zip(&w[1..]).map(|(a, b)| a * b).sum::<f64>();
            if carries_sigma {
                vec![mean, w[w.len() - 1]]
            } else {
                vec![mean]
            }
        });
        spaces.push(leaf.clone());
        edges.push(Some(CausalMap::new(&root, &leaf, format!("ψ_a{}", i + 1), f)));
        observables.push(Some(leaf_obs.clone()));
    }
    CausalSystem::new(TreeOrderedSet::parallel(n), spaces, edges, observables)
}
