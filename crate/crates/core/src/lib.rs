//! Regression as measurement on a causal system.
//!
//! States live in [`StateSpace`]s, observables assign probabilities to
//! rectangle-union [`Event`]s, and deterministic [`CausalMap`]s on a tree
//! combine node observables into one root-level composite observable. On the
//! parallel tree of a regression design, maximum-likelihood inference on that
//! composite is least squares; studentized intervals and tests, and a Monte
//! Carlo harness for their coverage, sit on top.
//!
//! ```
//! use mtreg_core::{confidence_interval, fit_simple, DivisorMode};
//!
//! let fit = fit_simple(&[0.0, 1.0, 2.0], &[1.0, 1.0, 3.0])?;
//! assert!((fit.beta_hat[1] - 1.0).abs() < 1e-12);
//! let ci = confidence_interval(&fit, 1, 0.05, DivisorMode::Exact)?;
//! assert!(ci.lo < 1.0 && 1.0 < ci.hi);
//! # Ok::<(), mtreg_core::Error>(())
//! ```

#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod causality;
pub mod error;
pub mod event;
pub mod hyptest;
pub mod inference;
pub mod linalg;
pub mod observable;
pub mod optim;
pub mod quadrature;
pub mod regression;
pub mod simulate;
pub mod space;
pub mod special;
pub mod tdist;

pub use causality::{pullback, CausalMap, CausalSystem, TreeOrderedSet};
pub use error::{Error, Result};
pub use event::{Event, Interval, Rect};
pub use hyptest::{
    confidence_interval, eta_threshold, hypothesis_test, DivisorMode, IntervalReport, SemiDistance, TestReport,
};
pub use inference::{likelihood_ratio, mle_generic, mle_normal_closed_form, LikelihoodProblem, MLEResult};
pub use observable::{sample_measurement, ClosedFormTag, ImageLaw, Observable, ProbEstimate, SigmaMode, ValueMap};
pub use regression::{
    build_regression_system, fit_glm, fit_simple, sample_stats, Design, NoiseScale, RegressionFit, SampleStats,
};
pub use simulate::{run_coverage, run_studentization_check, CoverageReport, SimulationPlan, StudentizationReport};
pub use space::{State, StateSpace};
pub use tdist::{t_cdf, t_pdf, t_quantile};
