use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mtreg_core::simulate::{run_coverage_with_threads, threads_from_env};
use mtreg_core::{
    confidence_interval, fit_glm, fit_simple, hypothesis_test, run_studentization_check, Design, DivisorMode,
    RegressionFit, SimulationPlan,
};

use crate::dataset::{ingest_csv, Dataset};
use crate::error::{CliError, Result};
use crate::report::{CommandEcho, CoverageSection, FitSummary, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    PaperVerbatim,
    Exact,
}

impl From<ModeArg> for DivisorMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::PaperVerbatim => DivisorMode::PaperVerbatim,
            ModeArg::Exact => DivisorMode::Exact,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "mtreg", version, about = "Regression fits, studentized intervals and tests, coverage simulation")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Least-squares fit of the response on the explanatory columns.
    Fit(DataArgs),
    /// Confidence intervals for the coefficients.
    Ci(CiArgs),
    /// Two-sided test of H0: beta_k = null.
    Test(TestArgs),
    /// Monte Carlo coverage of the intervals at known parameters.
    Coverage(CoverageArgs),
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// CSV file with a header row.
    #[arg(long)]
    pub data: PathBuf,
    /// Response column name.
    #[arg(long)]
    pub response: String,
    /// Explanatory column names, comma separated, in model order.
    #[arg(long, value_delimiter = ',', required = true)]
    pub explanatory: Vec<String>,
}

#[derive(Debug, Args)]
pub struct InferenceArgs {
    #[arg(long, default_value_t = 0.05, value_parser = parse_alpha)]
    pub alpha: f64,
    /// Coefficient index (0 = intercept); all coefficients when omitted.
    #[arg(long)]
    pub coef: Option<usize>,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    pub mode: ModeArg,
}

#[derive(Debug, Args)]
pub struct CiArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub inference: InferenceArgs,
}

#[derive(Debug, Args)]
pub struct TestArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub inference: InferenceArgs,
    /// Hypothesized coefficient value.
    #[arg(long, allow_hyphen_values = true)]
    pub null: f64,
}

#[derive(Debug, Args)]
pub struct CoverageArgs {
    #[arg(long)]
    pub reps: usize,
    #[arg(long)]
    pub seed: u64,
    /// True coefficients beta0,beta1,...
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub beta: Vec<f64>,
    /// True noise standard deviation.
    #[arg(long)]
    pub sigma: f64,
    #[arg(long, default_value_t = 0.05, value_parser = parse_alpha)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    pub mode: ModeArg,
    /// Design values for simple regression, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "data")]
    pub a: Option<Vec<f64>>,
    /// CSV file holding the design columns.
    #[arg(long, requires = "explanatory")]
    pub data: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', requires = "data")]
    pub explanatory: Option<Vec<String>>,
    /// Also report the distribution of the studentized statistics under both divisors.
    #[arg(long)]
    pub studentization: bool,
}

fn parse_alpha(s: &str) -> std::result::Result<f64, String> {
    let a: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if a > 0.0 && a < 1.0 {
        Ok(a)
    } else {
        Err(format!("alpha must lie strictly between 0 and 1, got {a}"))
    }
}

fn load(args: &DataArgs) -> Result<(Dataset, RegressionFit)> {
    let data = ingest_csv(&args.data, Some(&args.response), &args.explanatory)?;
    let fit = if data.m() == 1 {
        fit_simple(&data.column(0), &data.response)?
    } else {
        fit_glm(&Design::new(&data.explanatory)?, &data.response)?
    };
    Ok((data, fit))
}

fn coefficients(fit: &RegressionFit, coef: Option<usize>) -> Result<Vec<usize>> {
    match coef {
        Some(k) if k > fit.m() => Err(CliError::Usage(format!("--coef {k} out of range 0..={}", fit.m()))),
        Some(k) => Ok(vec![k]),
        None => Ok((0..=fit.m()).collect()),
    }
}

fn empty_report(name: &str, args: &[String], mode: DivisorMode) -> Report {
    Report {
        command: CommandEcho { name: name.to_string(), args: args.to_vec() },
        fit: None,
        intervals: Vec::new(),
        tests: Vec::new(),
        coverage: None,
        seed: None,
        mode,
    }
}

/// Executes a parsed command. `args` is the argument list echoed in the report.
pub fn execute(command: &Command, args: &[String]) -> Result<Report> {
    match command {
        Command::Fit(d) => {
            let (data, fit) = load(d)?;
            let mut r = empty_report("fit", args, DivisorMode::Exact);
            r.fit = Some(FitSummary::new(&fit, &data.response_name, &data.explanatory_names));
            Ok(r)
        }
        Command::Ci(c) => {
            let (data, fit) = load(&c.data)?;
            let mode = c.inference.mode.into();
            let mut r = empty_report("ci", args, mode);
            for k in coefficients(&fit, c.inference.coef)? {
                r.intervals.push(confidence_interval(&fit, k, c.inference.alpha, mode)?);
            }
            r.fit = Some(FitSummary::new(&fit, &data.response_name, &data.explanatory_names));
            Ok(r)
        }
        Command::Test(t) => {
            let (data, fit) = load(&t.data)?;
            let mode = t.inference.mode.into();
            let mut r = empty_report("test", args, mode);
            for k in coefficients(&fit, t.inference.coef)? {
                r.tests.push(hypothesis_test(&fit, k, t.null, t.inference.alpha, mode)?);
            }
            r.fit = Some(FitSummary::new(&fit, &data.response_name, &data.explanatory_names));
            Ok(r)
        }
        Command::Coverage(c) => coverage(c, args),
    }
}

fn coverage(c: &CoverageArgs, args: &[String]) -> Result<Report> {
    let design = match (&c.a, &c.data, &c.explanatory) {
        (Some(a), None, _) => Design::simple(a)?,
        (None, Some(path), Some(cols)) => Design::new(&ingest_csv(path, None, cols)?.explanatory)?,
        _ => return Err(CliError::Usage("coverage needs either --a LIST or --data PATH --explanatory COLS".into())),
    };
    if c.beta.len() != design.m() + 1 {
        return Err(CliError::Usage(format!(
            "--beta has {} values, the design needs {}",
            c.beta.len(),
            design.m() + 1
        )));
    }
    let mode: DivisorMode = c.mode.into();
    let plan = SimulationPlan {
        design,
        beta: c.beta.clone(),
        sigma: c.sigma,
        replications: c.reps,
        alpha: c.alpha,
        master_seed: c.seed,
        divisor_modes: vec![mode],
    };
    let threads = threads_from_env();
    let start = Instant::now();
    let report = run_coverage_with_threads(&plan, threads)?;
    let studentization = if c.studentization {
        let plan = SimulationPlan { divisor_modes: vec![DivisorMode::Exact], ..plan };
        Some(run_studentization_check(&plan)?)
    } else {
        None
    };
    let elapsed_seconds = start.elapsed().as_secs_f64();
    let mut r = empty_report("coverage", args, mode);
    r.seed = Some(c.seed);
    r.coverage = Some(CoverageSection { report, studentization, threads, elapsed_seconds });
    Ok(r)
}

/// Renders a report in the requested format.
pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    }
}
