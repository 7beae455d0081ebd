//! Command-line surface: coefficient tables, point evaluation, figure data and
//! verification runs.
//!
//! Every flag can also come from a TOML file given by `--config`; flags on
//! the command line win. Exit codes: 0 success, 1 verification failure,
//! 2 usage error, 3 numerical-accuracy failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::alphapoly::{integer, parse_rational, Alpha, ExactScalar};
use crate::error::{param, Error, Result};
use crate::gegenbauer::{from_recurrence, GegenbauerSpec};
use crate::parallel::Execution;
use crate::suites::{run_suite, Fault, Suite, SuiteOptions, SuiteRun};
use crate::verify::VerificationReport;
use num_traits::Signed;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_ACCURACY: i32 = 3;

/// Default `α` set for figure data.
pub const DEFAULT_PLOT_ALPHAS: [&str; 4] = ["0.5", "0.7", "0.9", "1.0"];
pub const DEFAULT_SAMPLES: usize = 201;
const DEFAULT_TABLE_N: usize = 5;

#[derive(Parser, Debug)]
#[command(
    name = "conformable-gegenbauer",
    version,
    about = "Conformable Gegenbauer polynomials: tables, evaluation, figure data and verification"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Print exact coefficients of C_0 .. C_n in the basis x^(k a), one per row
    Table,
    /// Evaluate C_n at a point (one line per alpha)
    Eval,
    /// Write figure data as CSV (x,alpha,value)
    PlotData,
    /// Run verification suites; exit 1 if an asserted identity fails
    Verify,
    /// Run the audit suites and write the normalisation table as CSV
    Audit,
}

#[derive(Args, Debug, Default, Clone)]
pub struct Flags {
    /// TOML file with defaults for any flag below
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Degree (table: largest degree; verify: largest grid degree)
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Weight parameter; "p/q", integers and decimals are accepted
    #[arg(long, global = true)]
    pub lambda: Option<String>,
    /// Conformable order in (0, 1]; repeatable
    #[arg(long, global = true)]
    pub alpha: Vec<String>,
    /// Evaluation point
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub x: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub x_min: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub x_max: Option<f64>,
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Output file (plot-data, audit: CSV; verify: JSON report)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// One of: all, constructors, ode, gf, identities, special, orthogonality,
    /// normalization, audit, normalization-audit
    #[arg(long, global = true)]
    pub suite: Option<String>,
    /// Replaces every numeric tolerance of the selected suites
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub tolerance: Option<f64>,
    /// Use [-1, 1] with the signed power sign(x)|x|^a instead of [0, 1]
    #[arg(long, global = true)]
    pub signed_domain: bool,
    /// Run grid sweeps on one thread
    #[arg(long, global = true)]
    pub sequential: bool,
    #[arg(long, global = true, hide = true)]
    pub inject_fault: Option<String>,
}

/// A number or a string in the config file.
#[derive(Deserialize, Debug, Clone)]
#[serde(untagged)]
enum Scalar {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Scalar {
    fn text(&self) -> String {
        match self {
            Scalar::Int(i) => i.to_string(),
            Scalar::Float(f) => f.to_string(),
            Scalar::Text(s) => s.clone(),
        }
    }
}

#[derive(Deserialize, Debug, Default)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct FileConfig {
    n: Option<usize>,
    lambda: Option<Scalar>,
    #[serde(default)]
    alpha: Vec<Scalar>,
    x: Option<f64>,
    x_min: Option<f64>,
    x_max: Option<f64>,
    samples: Option<usize>,
    out: Option<PathBuf>,
    suite: Option<String>,
    tolerance: Option<f64>,
    #[serde(default)]
    signed_domain: bool,
    #[serde(default)]
    sequential: bool,
}

/// Flags merged with the config file, before per-command defaults.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub n: Option<usize>,
    pub lambda: Option<ExactScalar>,
    pub alphas: Vec<Alpha>,
    pub x: Option<f64>,
    pub x_min: Option<f64>,
    pub x_max: Option<f64>,
    pub samples: Option<usize>,
    pub out: Option<PathBuf>,
    pub suite: Option<Suite>,
    pub tolerance: Option<f64>,
    pub signed_domain: bool,
    pub exec: Execution,
    pub fault: Option<Fault>,
}

impl RunConfig {
    pub fn resolve(flags: &Flags) -> Result<Self> {
        let file = match &flags.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| param(format!("cannot read config {}: {e}", path.display())))?;
                toml::from_str::<FileConfig>(&text)
                    .map_err(|e| param(format!("invalid config {}: {e}", path.display())))?
            }
            None => FileConfig::default(),
        };
        let lambda = flags.lambda.clone().or_else(|| file.lambda.as_ref().map(Scalar::text));
        let alpha_text: Vec<String> = if flags.alpha.is_empty() {
            file.alpha.iter().map(Scalar::text).collect()
        } else {
            flags.alpha.clone()
        };
        let tolerance = flags.tolerance.or(file.tolerance);
        if let Some(t) = tolerance {
            if t.is_nan() || t <= 0.0 {
                return Err(param(format!("tolerance must be positive, got {t}")));
            }
        }
        let fault = match flags.inject_fault.as_deref() {
            None => None,
            Some("ode") => Some(Fault::OdeExtraTerm),
            Some(other) => return Err(param(format!("unknown fault {other:?}"))),
        };
        Ok(Self {
            n: flags.n.or(file.n),
            lambda: lambda.as_deref().map(parse_rational).transpose()?,
            alphas: alpha_text.iter().map(|a| Alpha::parse(a)).collect::<Result<_>>()?,
            x: flags.x.or(file.x),
            x_min: flags.x_min.or(file.x_min),
            x_max: flags.x_max.or(file.x_max),
            samples: flags.samples.or(file.samples),
            out: flags.out.clone().or(file.out),
            suite: flags.suite.clone().or(file.suite).map(|s| s.parse()).transpose()?,
            tolerance,
            signed_domain: flags.signed_domain || file.signed_domain,
            exec: if flags.sequential || file.sequential {
                Execution::Sequential
            } else {
                Execution::Parallel
            },
            fault,
        })
    }

    /// `λ`, defaulting to 3 (the value used for the figures).
    fn lambda(&self) -> Result<ExactScalar> {
        let l = self.lambda.clone().unwrap_or_else(|| integer(3));
        if !l.is_positive() {
            return Err(param(format!("lambda must be positive, got {l}")));
        }
        Ok(l)
    }

    fn domain(&self) -> (f64, f64) {
        if self.signed_domain {
            (-1.0, 1.0)
        } else {
            (0.0, 1.0)
        }
    }

    fn require_n(&self) -> Result<usize> {
        self.n.ok_or_else(|| param("--n is required"))
    }
}

/// One curve of figure data.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlotSeries {
    pub label: String,
    #[serde(serialize_with = "alpha_value")]
    pub alpha: Alpha,
    pub abscissas: Vec<f64>,
    pub ordinates: Vec<f64>,
}

fn alpha_value<S: serde::Serializer>(a: &Alpha, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(a.value())
}

/// Drops the sign of a zero so output never shows `-0`.
fn unsigned_zero(v: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v
    }
}

/// `samples` equally spaced points from `x_min` to exactly `x_max`.
pub fn sample_points(x_min: f64, x_max: f64, samples: usize) -> Result<Vec<f64>> {
    if samples < 2 {
        return Err(param(format!("need at least 2 samples, got {samples}")));
    }
    if x_min.is_nan() || x_max.is_nan() || x_min >= x_max {
        return Err(param(format!("empty x-range [{x_min}, {x_max}]")));
    }
    let last = (samples - 1) as f64;
    let mut xs: Vec<f64> = (0..samples)
        .map(|i| x_min + (x_max - x_min) * (i as f64) / last)
        .collect();
    xs[samples - 1] = x_max;
    Ok(xs)
}

/// Curves of `C_n^{(λ)}` for each `α`, sorted by ascending `α`.
pub fn plot_series(n: usize, lambda: &ExactScalar, alphas: &[Alpha], xs: &[f64]) -> Result<Vec<PlotSeries>> {
    let mut alphas = alphas.to_vec();
    alphas.sort_by(|a, b| a.value().total_cmp(&b.value()));
    alphas.dedup_by(|a, b| a.value() == b.value());
    alphas
        .into_iter()
        .map(|a| {
            let p = from_recurrence(&GegenbauerSpec::new(n, lambda.clone(), a.clone()))?;
            Ok(PlotSeries {
                label: format!("n={n} lambda={lambda} alpha={}", a.value()),
                ordinates: xs.iter().map(|&x| unsigned_zero(p.evaluate(x))).collect(),
                abscissas: xs.to_vec(),
                alpha: a,
            })
        })
        .collect()
}

pub fn plot_csv(series: &[PlotSeries]) -> String {
    let mut out = String::from("x,alpha,value\n");
    for s in series {
        for (x, y) in s.abscissas.iter().zip(&s.ordinates) {
            writeln!(out, "{x},{},{y}", s.alpha.value()).unwrap();
        }
    }
    out
}

/// Rows of the coefficient table for degrees `0..=n_max`.
pub fn table_rows(n_max: usize, lambda: &ExactScalar, alpha: &Alpha) -> Result<Vec<String>> {
    (0..=n_max)
        .map(|n| Ok(from_recurrence(&GegenbauerSpec::new(n, lambda.clone(), alpha.clone()))?.to_string()))
        .collect()
}

#[derive(Serialize)]
struct ReportDocument<'a> {
    command: &'a str,
    suite: String,
    passed: bool,
    reports: &'a [VerificationReport],
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Accuracy { .. } => EXIT_ACCURACY,
        _ => EXIT_USAGE,
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| param(format!("cannot write {}: {e}", path.display())))
}

fn suite_options(cfg: &RunConfig) -> Result<SuiteOptions> {
    let mut opts = SuiteOptions {
        tolerance: cfg.tolerance,
        exec: cfg.exec,
        fault: cfg.fault,
        ..SuiteOptions::default()
    };
    if let Some(n) = cfg.n {
        opts.grid.n_max = n;
        for g in [&mut opts.orthogonality_grid, &mut opts.normalization_grid, &mut opts.audit_grid] {
            g.n_max = n;
        }
    }
    if cfg.lambda.is_some() {
        let l = cfg.lambda()?;
        opts.grid.lambdas = vec![l.clone()];
        for g in [&mut opts.orthogonality_grid, &mut opts.normalization_grid, &mut opts.audit_grid] {
            g.lambdas = vec![l.clone()];
        }
    }
    if !cfg.alphas.is_empty() {
        opts.grid.alphas = cfg.alphas.clone();
        for g in [&mut opts.orthogonality_grid, &mut opts.normalization_grid, &mut opts.audit_grid] {
            g.alphas = cfg.alphas.clone();
        }
    }
    Ok(opts)
}

fn print_run(run: &SuiteRun, out: &mut dyn Write) -> std::io::Result<()> {
    for r in &run.reports {
        write!(out, "{r}")?;
    }
    let flagged = run.reports.iter().filter(|r| r.audit && !r.passed()).count();
    writeln!(
        out,
        "{} reports, {} failed, {} audit flags",
        run.reports.len(),
        run.blocking_failures(),
        flagged
    )
}

fn execute(command: Command, cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let io = |e: std::io::Error| param(format!("cannot write output: {e}"));
    match command {
        Command::Table => {
            let lambda = cfg.lambda()?;
            let alpha = cfg.alphas.first().cloned().unwrap_or_else(Alpha::one);
            for row in table_rows(cfg.n.unwrap_or(DEFAULT_TABLE_N), &lambda, &alpha)? {
                writeln!(out, "{row}").map_err(io)?;
            }
            Ok(EXIT_OK)
        }
        Command::Eval => {
            let n = cfg.require_n()?;
            let lambda = cfg.lambda()?;
            let x = cfg.x.ok_or_else(|| param("--x is required"))?;
            let (lo, hi) = cfg.domain();
            if !(lo..=hi).contains(&x) {
                return Err(param(format!("x = {x} outside [{lo}, {hi}]; --signed-domain allows negative x")));
            }
            if cfg.alphas.is_empty() {
                return Err(param("--alpha is required"));
            }
            for a in &cfg.alphas {
                let p = from_recurrence(&GegenbauerSpec::new(n, lambda.clone(), a.clone()))?;
                writeln!(out, "{}", unsigned_zero(p.evaluate(x))).map_err(io)?;
            }
            Ok(EXIT_OK)
        }
        Command::PlotData => {
            let n = cfg.require_n()?;
            let lambda = cfg.lambda()?;
            let (lo, hi) = cfg.domain();
            let (x_min, x_max) = (cfg.x_min.unwrap_or(lo), cfg.x_max.unwrap_or(hi));
            if x_min < lo || x_max > hi {
                return Err(param(format!(
                    "x-range [{x_min}, {x_max}] outside [{lo}, {hi}]; --signed-domain allows [-1, 1]"
                )));
            }
            let xs = sample_points(x_min, x_max, cfg.samples.unwrap_or(DEFAULT_SAMPLES))?;
            let alphas = if cfg.alphas.is_empty() {
                DEFAULT_PLOT_ALPHAS.iter().map(|a| Alpha::parse(a)).collect::<Result<Vec<_>>>()?
            } else {
                cfg.alphas.clone()
            };
            let csv = plot_csv(&plot_series(n, &lambda, &alphas, &xs)?);
            match &cfg.out {
                Some(path) => write_file(path, &csv)?,
                None => out.write_all(csv.as_bytes()).map_err(io)?,
            }
            Ok(EXIT_OK)
        }
        Command::Verify => {
            let suite = cfg.suite.unwrap_or(Suite::All);
            let run = run_suite(suite, &suite_options(cfg)?)?;
            print_run(&run, out).map_err(io)?;
            if let Some(path) = &cfg.out {
                let doc = ReportDocument {
                    command: "verify",
                    suite: suite.to_string(),
                    passed: run.passed(),
                    reports: &run.reports,
                };
                write_file(path, &serde_json::to_string_pretty(&doc).expect("reports serialize"))?;
            }
            Ok(if run.passed() { EXIT_OK } else { EXIT_VERIFICATION })
        }
        Command::Audit => {
            let opts = suite_options(cfg)?;
            let mut run = run_suite(Suite::Audit, &opts)?;
            let norm = run_suite(Suite::NormalizationAudit, &opts)?;
            run.reports.extend(norm.reports);
            print_run(&run, out).map_err(io)?;
            if let (Some(path), Some(table)) = (&cfg.out, &norm.audit_table) {
                write_file(path, &table.to_csv())?;
            }
            Ok(if run.passed() { EXIT_OK } else { EXIT_VERIFICATION })
        }
    }
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render();
            if code == 0 {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return code;
        }
    };
    let result = RunConfig::resolve(&cli.flags).and_then(|cfg| execute(cli.command, &cfg, out));
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code_for(&e)
        }
    }
}
