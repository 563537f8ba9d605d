//! Report model and its two renderings: JSON and aligned text tables.

use std::fmt::Write as _;
use std::io;

use mtreg_core::{CoverageReport, DivisorMode, IntervalReport, RegressionFit, StudentizationReport, TestReport};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommandEcho {
    pub name: String,
    pub args: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualSummary {
    pub min: f64,
    pub max: f64,
    pub max_abs: f64,
    pub sum_of_squares: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitSummary {
    pub n: usize,
    pub m: usize,
    pub df: usize,
    pub response: String,
    pub explanatory: Vec<String>,
    pub beta_hat: Vec<f64>,
    pub sigma_hat_sq_mle: f64,
    pub sigma_hat_sq_unbiased: f64,
    pub residuals: ResidualSummary,
}

impl FitSummary {
    pub fn new(fit: &RegressionFit, response: &str, explanatory: &[String]) -> Self {
        let r = &fit.residuals;
        Self {
            n: fit.n(),
            m: fit.m(),
            df: fit.df(),
            response: response.to_string(),
            explanatory: explanatory.to_vec(),
            beta_hat: fit.beta_hat.clone(),
            sigma_hat_sq_mle: fit.sigma_hat_sq_mle,
            sigma_hat_sq_unbiased: fit.sigma_hat_sq_unbiased,
            residuals: ResidualSummary {
                min: r.iter().copied().fold(f64::INFINITY, f64::min),
                max: r.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                max_abs: r.iter().fold(0.0, |a, v| a.max(v.abs())),
                sum_of_squares: fit.residual_sum_of_squares(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageSection {
    pub report: CoverageReport,
    pub studentization: Option<StudentizationReport>,
    pub threads: usize,
    pub elapsed_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: CommandEcho,
    pub fit: Option<FitSummary>,
    pub intervals: Vec<IntervalReport>,
    pub tests: Vec<TestReport>,
    pub coverage: Option<CoverageSection>,
    pub seed: Option<u64>,
    pub mode: DivisorMode,
}

/// Emits floats in scientific notation with 17 significant digits;
/// non-finite values become `null`.
struct Precise;

impl serde_json::ser::Formatter for Precise {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(w, "{value:.16e}")
        } else {
            w.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut buf = Vec::new();
        let mut ser = serde_json::Serializer::with_formatter(&mut buf, Precise);
        self.serialize(&mut ser).expect("report serialization is infallible");
        buf.push(b'\n');
        String::from_utf8(buf).expect("serde_json emits UTF-8")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command  mtreg {}", self.command.args.join(" "));
        let _ = writeln!(out, "mode     {}", self.mode);
        if let Some(seed) = self.seed {
            let _ = writeln!(out, "seed     {seed}");
        }
        if let Some(fit) = &self.fit {
            out.push('\n');
            write_fit(&mut out, fit);
        }
        if !self.intervals.is_empty() {
            out.push('\n');
            let rows = self
                .intervals
                .iter()
                .map(|ci| {
                    vec![
                        format!("beta{}", ci.k),
                        ci.alpha.to_string(),
                        ci.center.to_string(),
                        ci.lo.to_string(),
                        ci.hi.to_string(),
                        ci.half_width.to_string(),
                        ci.eta.to_string(),
                        ci.std_error.to_string(),
                        ci.divisor_mode.to_string(),
                    ]
                })
                .collect();
            table(&mut out, &["coef", "alpha", "estimate", "lo", "hi", "half_width", "eta", "std_error", "mode"], rows);
        }
        if !self.tests.is_empty() {
            out.push('\n');
            let rows = self
                .tests
                .iter()
                .map(|t| {
                    vec![
                        format!("beta{}", t.k),
                        t.null_value.to_string(),
                        t.alpha.to_string(),
                        t.statistic.to_string(),
                        t.threshold.to_string(),
                        if t.rejected { "rejected" } else { "not rejected" }.to_string(),
                        t.divisor_mode.to_string(),
                    ]
                })
                .collect();
            table(&mut out, &["coef", "null", "alpha", "statistic", "threshold", "decision", "mode"], rows);
        }
        if let Some(cov) = &self.coverage {
            out.push('\n');
            write_coverage(&mut out, cov);
        }
        out
    }
}

fn write_fit(out: &mut String, fit: &FitSummary) {
    let _ = writeln!(out, "fit  n={} m={} df={} response={}", fit.n, fit.m, fit.df, fit.response);
    let rows = fit
        .beta_hat
        .iter()
        .enumerate()
        .map(|(k, b)| {
            let term = if k == 0 { "(intercept)".to_string() } else { fit.explanatory[k - 1].clone() };
            vec![format!("beta{k}"), term, b.to_string()]
        })
        .collect();
    table(out, &["coef", "term", "estimate"], rows);
    let r = &fit.residuals;
    let stats = vec![
        vec!["sigma_hat_sq_mle".to_string(), fit.sigma_hat_sq_mle.to_string()],
        vec!["sigma_hat_sq_unbiased".to_string(), fit.sigma_hat_sq_unbiased.to_string()],
        vec!["residual_min".to_string(), r.min.to_string()],
        vec!["residual_max".to_string(), r.max.to_string()],
        vec!["residual_max_abs".to_string(), r.max_abs.to_string()],
        vec!["residual_sum_of_squares".to_string(), r.sum_of_squares.to_string()],
    ];
    table(out, &["statistic", "value"], stats);
}

fn write_coverage(out: &mut String, cov: &CoverageSection) {
    let c = &cov.report;
    let _ = writeln!(
        out,
        "coverage  replications={} n={} m={} sigma={} alpha={} threads={} elapsed_seconds={}",
        c.replications, c.n, c.m, c.sigma, c.alpha, cov.threads, cov.elapsed_seconds
    );
    let mut rows = Vec::new();
    for coef in &c.coefficients {
        for mode in &coef.modes {
            rows.push(vec![
                format!("beta{}", coef.k),
                coef.true_value.to_string(),
                coef.mean_beta_hat.to_string(),
                coef.empirical_var_beta.to_string(),
                coef.formula_var_beta.to_string(),
                mode.empirical_coverage.to_string(),
                mode.empirical_rejection_rate_at_true_null.to_string(),
                mode.mode.to_string(),
            ]);
        }
    }
    table(
        out,
        &["coef", "true", "mean_beta_hat", "var_empirical", "var_formula", "coverage", "size", "mode"],
        rows,
    );
    if let Some(st) = &cov.studentization {
        let _ = writeln!(out, "studentization  df={}", st.df);
        let rows = st
            .summaries
            .iter()
            .map(|s| {
                vec![
                    format!("beta{}", s.k),
                    s.mean.to_string(),
                    s.variance.to_string(),
                    s.ks_distance.map_or_else(|| "-".to_string(), |d| d.to_string()),
                    s.mode.to_string(),
                ]
            })
            .collect();
        table(out, &["coef", "mean", "variance", "ks_distance", "mode"], rows);
    }
}

fn table(out: &mut String, header: &[&str], rows: Vec<Vec<String>>) {
    let mut width: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in &rows {
        for (w, cell) in width.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |out: &mut String, cells: Vec<&str>| {
        let joined: Vec<String> = cells.iter().zip(&width).map(|(c, w)| format!("{c:<w$}")).collect();
        let _ = writeln!(out, "{}", joined.join("  ").trim_end());
    };
    line(out, header.to_vec());
    for row in &rows {
        line(out, row.iter().map(String::as_str).collect());
    }
}
