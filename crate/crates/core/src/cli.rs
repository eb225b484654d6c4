//! Command-line front end: `eval`, `grid` and `verify`.
//!
//! Exit status: 0 on success, 2 when the command line cannot be parsed,
//! 3 when an input violates a precondition, 4 on a numerical failure or a
//! failed verification check.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{Map, Number, Value};

use crate::error::Error;
use crate::hyper::{evaluate, EvalRequest, EvalResult, Target};
use crate::roots::{ChamberPoint, MultiplicityBC, SpectralParam};
use crate::verify::{run_suite, Suite, SuiteOptions, SuiteReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "bcn-hyper", version, about = "Hypergeometric functions of type BC_n")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Evaluate one point.
    Eval(EvalArgs),
    /// Evaluate a tensor grid of t (and optionally real λ) values.
    Grid(GridArgs),
    /// Run a named verification suite, or `all`.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "verbatim")]
pub enum TargetArg {
    F,
    Phi,
    FTheta,
    BesselBC,
}

impl From<TargetArg> for Target {
    fn from(t: TargetArg) -> Self {
        match t {
            TargetArg::F => Target::F,
            TargetArg::Phi => Target::PhiSeries,
            TargetArg::FTheta => Target::FTheta,
            TargetArg::BesselBC => Target::BesselBC,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ModelArgs {
    #[arg(long, value_enum, ignore_case = true)]
    target: TargetArg,
    #[arg(long)]
    n: usize,
    /// Multiplicities k_s,k_m,k_l.
    #[arg(long, allow_hyphen_values = true)]
    k: String,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Comma-separated λ_j, each `re`, `re+im i`, `re-im i` or `im i`.
    #[arg(long, allow_hyphen_values = true)]
    lambda: String,
    /// Comma-separated t_1 > … > t_n > 0.
    #[arg(long)]
    t: String,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct GridArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Fixed λ, as for `eval`.
    #[arg(
        long,
        allow_hyphen_values = true,
        conflicts_with = "lambda_grid",
        required_unless_present = "lambda_grid"
    )]
    lambda: Option<String>,
    /// Real λ ranges `start:stop:count`, one per axis, comma-separated.
    #[arg(long, allow_hyphen_values = true)]
    lambda_grid: Option<String>,
    /// t ranges `start:stop:count`, one per axis, comma-separated.
    #[arg(long)]
    t_grid: String,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    suite: String,
    /// Restrict rank-dependent suites to this n.
    #[arg(long)]
    n: Option<usize>,
    #[command(flatten)]
    out: OutputArgs,
}

/// A fully parsed and validated job.
#[derive(Debug, Clone, PartialEq)]
pub struct JobSpec {
    pub command: Command,
    pub format: Format,
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Eval(PointSet),
    Grid(PointSet),
    Verify { suites: Vec<Suite>, options: SuiteOptions },
}

/// Evaluation inputs; records are the product `lambdas × ts`, λ outermost and
/// t in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    pub target: TargetArg,
    pub k_input: [f64; 3],
    pub k: MultiplicityBC,
    pub lambdas: Vec<SpectralParam>,
    pub ts: Vec<ChamberPoint>,
}

/// Why a command line was rejected before evaluation.
#[derive(Debug, Clone, PartialEq)]
pub enum JobError {
    /// `--help` or `--version`: the rendered text, printed with status 0.
    Info(String),
    Parse(String),
    Precondition(String),
}

impl JobError {
    pub fn exit_code(&self) -> i32 {
        match self {
            JobError::Info(_) => EXIT_OK,
            JobError::Parse(_) => EXIT_PARSE,
            JobError::Precondition(_) => EXIT_PRECONDITION,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            JobError::Info(m) | JobError::Parse(m) | JobError::Precondition(m) => m,
        }
    }
}

impl From<Error> for JobError {
    fn from(e: Error) -> Self {
        JobError::Precondition(e.to_string())
    }
}

fn parse_real(s: &str, what: &str) -> Result<f64, JobError> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| JobError::Parse(format!("{what}: '{s}' is not a number")))?;
    if !v.is_finite() {
        return Err(JobError::Parse(format!("{what}: '{s}' is not finite")));
    }
    Ok(v)
}

fn parse_reals(s: &str, what: &str) -> Result<Vec<f64>, JobError> {
    s.split(',').map(|x| parse_real(x, what)).collect()
}

/// Parses `re`, `re+im i`, `re-im i`, `im i` or `i`.
pub fn parse_complex(s: &str) -> Result<Complex64, JobError> {
    let s = s.trim();
    let bad = || JobError::Parse(format!("lambda: '{s}' is not of the form re[+im i]"));
    let Some(body) = s.strip_suffix('i') else {
        return Ok(Complex64::new(parse_real(s, "lambda")?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&p| matches!(bytes[p], b'+' | b'-') && !matches!(bytes[p - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(p) => (&body[..p], &body[p..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => parse_real(x, "lambda").map_err(|_| bad())?,
    };
    Ok(Complex64::new(parse_real(re, "lambda").map_err(|_| bad())?, im))
}

fn parse_ranges(s: &str, what: &str) -> Result<Vec<Vec<f64>>, JobError> {
    s.split(',')
        .map(|axis| {
            let parts: Vec<&str> = axis.split(':').collect();
            let [a, b, m] = parts[..] else {
                return Err(JobError::Parse(format!("{what}: '{axis}' is not start:stop:count")));
            };
            let (a, b) = (parse_real(a, what)?, parse_real(b, what)?);
            let m: usize = m
                .trim()
                .parse()
                .map_err(|_| JobError::Parse(format!("{what}: count '{m}' is not a positive integer")))?;
            Ok(match m {
                0 => return Err(JobError::Parse(format!("{what}: count must be positive"))),
                1 => vec![a],
                _ => (0..m).map(|i| a + (b - a) * i as f64 / (m - 1) as f64).collect(),
            })
        })
        .collect()
}

fn cartesian(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    axes.iter().fold(vec![Vec::new()], |acc, axis| {
        acc.iter()
            .flat_map(|prefix| {
                axis.iter().map(move |&x| {
                    let mut p = prefix.clone();
                    p.push(x);
                    p
                })
            })
            .collect()
    })
}

fn check_len(what: &str, got: usize, n: usize) -> Result<(), JobError> {
    if got != n {
        return Err(JobError::Precondition(format!(
            "{what} has {got} entries, expected n = {n}"
        )));
    }
    Ok(())
}

fn model(m: &ModelArgs) -> Result<([f64; 3], MultiplicityBC), JobError> {
    let k = parse_reals(&m.k, "k")?;
    let [ks, km, kl] = k[..] else {
        return Err(JobError::Parse(format!("k: expected k_s,k_m,k_l, got '{}'", m.k)));
    };
    if km != 0.0 && km != 1.0 {
        return Err(JobError::Precondition(format!("k_m = {km} must be 0 or 1")));
    }
    Ok(([ks, km, kl], MultiplicityBC::new(m.n, ks, km as u8, kl)?))
}

fn lambda_list(s: &str, n: usize) -> Result<SpectralParam, JobError> {
    let l: Vec<Complex64> = s.split(',').map(parse_complex).collect::<Result<_, _>>()?;
    check_len("lambda", l.len(), n)?;
    Ok(SpectralParam::new(l)?)
}

fn chamber(t: Vec<f64>, n: usize) -> Result<ChamberPoint, JobError> {
    check_len("t", t.len(), n)?;
    Ok(ChamberPoint::new(t)?)
}

impl JobSpec {
    /// Parses a full argument list, program name first.
    pub fn parse_from<I, T>(args: I) -> Result<JobSpec, JobError>
    where
        I: IntoIterator<Item = T>,
        T: Into<OsString> + Clone,
    {
        let cli = Cli::try_parse_from(args).map_err(|e| match e.kind() {
            clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                JobError::Info(e.to_string())
            }
            _ => JobError::Parse(e.to_string()),
        })?;
        match cli.command {
            Cmd::Eval(a) => {
                let (k_input, k) = model(&a.model)?;
                let n = a.model.n;
                let points = PointSet {
                    target: a.model.target,
                    k_input,
                    k,
                    lambdas: vec![lambda_list(&a.lambda, n)?],
                    ts: vec![chamber(parse_reals(&a.t, "t")?, n)?],
                };
                Ok(JobSpec {
                    command: Command::Eval(points),
                    format: a.out.format,
                    output: a.out.output,
                })
            }
            Cmd::Grid(a) => {
                let (k_input, k) = model(&a.model)?;
                let n = a.model.n;
                let lambdas = match (&a.lambda, &a.lambda_grid) {
                    (Some(l), _) => vec![lambda_list(l, n)?],
                    (None, Some(g)) => {
                        let axes = parse_ranges(g, "lambda-grid")?;
                        check_len("lambda-grid", axes.len(), n)?;
                        cartesian(&axes)
                            .into_iter()
                            .map(|l| SpectralParam::from_real(&l).map_err(JobError::from))
                            .collect::<Result<_, _>>()?
                    }
                    (None, None) => return Err(JobError::Parse("grid needs --lambda or --lambda-grid".into())),
                };
                let axes = parse_ranges(&a.t_grid, "t-grid")?;
                check_len("t-grid", axes.len(), n)?;
                let ts = cartesian(&axes)
                    .into_iter()
                    .enumerate()
                    .map(|(i, t)| {
                        chamber(t, n).map_err(|e| JobError::Precondition(format!("t-grid point {i}: {}", e.message())))
                    })
                    .collect::<Result<_, _>>()?;
                Ok(JobSpec {
                    command: Command::Grid(PointSet {
                        target: a.model.target,
                        k_input,
                        k,
                        lambdas,
                        ts,
                    }),
                    format: a.out.format,
                    output: a.out.output,
                })
            }
            Cmd::Verify(a) => {
                let suites = if a.suite == "all" {
                    Suite::ALL.to_vec()
                } else {
                    vec![a.suite.parse::<Suite>().map_err(|e| JobError::Parse(e.to_string()))?]
                };
                if let Some(n) = a.n {
                    if !(1..=8).contains(&n) {
                        return Err(JobError::Precondition(format!("n = {n} outside 1..=8")));
                    }
                }
                Ok(JobSpec {
                    command: Command::Verify {
                        suites,
                        options: SuiteOptions { n: a.n },
                    },
                    format: a.out.format,
                    output: a.out.output,
                })
            }
        }
    }
}

/// Seventeen significant digits.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

fn number(x: f64) -> Value {
    // Non-finite values never reach here: evaluators reject them.
    Value::Number(fmt17(x).parse::<Number>().expect("formatted float is a JSON number"))
}

fn target_name(t: TargetArg) -> &'static str {
    match t {
        TargetArg::F => "F",
        TargetArg::Phi => "Phi",
        TargetArg::FTheta => "FTheta",
        TargetArg::BesselBC => "BesselBC",
    }
}

fn record_header(n: usize) -> Vec<String> {
    let mut h: Vec<String> = (1..=n).map(|j| format!("t_{j}")).collect();
    for j in 1..=n {
        h.push(format!("re_lambda_{j}"));
        h.push(format!("im_lambda_{j}"));
    }
    h.extend(["re_value", "im_value", "condition_estimate", "degenerate_path"].map(String::from));
    h
}

fn record_fields(t: &ChamberPoint, l: &SpectralParam, r: &EvalResult) -> Vec<String> {
    let mut f: Vec<String> = t.as_slice().iter().map(|&x| fmt17(x)).collect();
    for z in l.as_slice() {
        f.push(fmt17(z.re));
        f.push(fmt17(z.im));
    }
    f.push(fmt17(r.value.re));
    f.push(fmt17(r.value.im));
    f.push(fmt17(r.condition_estimate));
    f.push(r.degenerate_path.to_string());
    f
}

fn record_json(p: &PointSet, t: &ChamberPoint, l: &SpectralParam, r: &EvalResult) -> Value {
    let mut m = Map::new();
    m.insert("target".into(), Value::String(target_name(p.target).into()));
    m.insert("n".into(), Value::from(p.k.n()));
    m.insert("k_s".into(), number(p.k_input[0]));
    m.insert("k_m".into(), number(p.k_input[1]));
    m.insert("k_l".into(), number(p.k_input[2]));
    let header = record_header(t.len());
    let fields = record_fields(t, l, r);
    for (h, f) in header.iter().zip(&fields) {
        let v = if h == "degenerate_path" {
            Value::Bool(r.degenerate_path)
        } else {
            Value::Number(f.parse().expect("formatted float is a JSON number"))
        };
        m.insert(h.clone(), v);
    }
    Value::Object(m)
}

enum Failure {
    Precondition(String),
    Numerical(String),
}

fn describe(i: usize, t: &ChamberPoint, l: &SpectralParam, e: &Error) -> String {
    let lam: Vec<String> = l.as_slice().iter().map(|z| format!("{z}")).collect();
    format!(
        "record {i} (t = {:?}, lambda = [{}]): {e}",
        t.as_slice(),
        lam.join(", ")
    )
}

fn write_points(p: &PointSet, format: Format, out: &mut dyn Write) -> io::Result<Option<Failure>> {
    let jobs: Vec<(&SpectralParam, &ChamberPoint)> = p
        .lambdas
        .iter()
        .flat_map(|l| p.ts.iter().map(move |t| (l, t)))
        .collect();
    let target: Target = p.target.into();
    let results: Vec<_> = jobs
        .par_iter()
        .map(|(l, t)| {
            evaluate(&EvalRequest {
                k: p.k,
                lambda: (*l).clone(),
                t: (*t).clone(),
                target,
            })
        })
        .collect();
    let mut done = Vec::new();
    let mut failure = None;
    for (i, ((l, t), r)) in jobs.iter().zip(&results).enumerate() {
        match r {
            Ok(r) => done.push((*l, *t, r)),
            Err(e) => {
                let msg = describe(i, t, l, e);
                failure = Some(if e.is_precondition() {
                    Failure::Precondition(msg)
                } else {
                    Failure::Numerical(msg)
                });
                break;
            }
        }
    }
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(record_header(p.k.n()))?;
            for (l, t, r) in done {
                w.write_record(record_fields(t, l, r))?;
            }
            w.flush()?;
        }
        Format::Json => {
            for (l, t, r) in done {
                let line = serde_json::to_string(&record_json(p, t, l, r)).map_err(io::Error::other)?;
                writeln!(out, "{line}")?;
            }
        }
    }
    Ok(failure)
}

fn write_verify(reports: &[SuiteReport], format: Format, out: &mut dyn Write) -> io::Result<()> {
    let header = ["suite", "check", "measured", "tolerance", "passed", "detail"];
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(header)?;
            for r in reports {
                for c in &r.checks {
                    w.write_record([
                        r.suite.name().to_string(),
                        c.name.clone(),
                        fmt17(c.measured),
                        fmt17(c.tolerance),
                        c.passed.to_string(),
                        c.detail.clone().unwrap_or_default(),
                    ])?;
                }
            }
            w.flush()
        }
        Format::Json => {
            for r in reports {
                for c in &r.checks {
                    let mut m = Map::new();
                    m.insert("suite".into(), Value::String(r.suite.name().into()));
                    m.insert("check".into(), Value::String(c.name.clone()));
                    let num = |x: f64| if x.is_finite() { number(x) } else { Value::Null };
                    m.insert("measured".into(), num(c.measured));
                    m.insert("tolerance".into(), num(c.tolerance));
                    m.insert("passed".into(), Value::Bool(c.passed));
                    m.insert("detail".into(), c.detail.clone().map_or(Value::Null, Value::String));
                    writeln!(
                        out,
                        "{}",
                        serde_json::to_string(&Value::Object(m)).map_err(io::Error::other)?
                    )?;
                }
            }
            Ok(())
        }
    }
}

/// Executes a parsed job, writing records to `out` and diagnostics to `err`.
pub fn run(job: &JobSpec, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &job.command {
        Command::Eval(p) | Command::Grid(p) => write_points(p, job.format, out).map(|f| match f {
            None => EXIT_OK,
            Some(Failure::Precondition(m)) => {
                let _ = writeln!(err, "error: {m}");
                EXIT_PRECONDITION
            }
            Some(Failure::Numerical(m)) => {
                let _ = writeln!(err, "error: {m}");
                EXIT_NUMERICAL
            }
        }),
        Command::Verify { suites, options } => {
            let reports: Vec<SuiteReport> = suites.iter().map(|&s| run_suite(s, options)).collect();
            write_verify(&reports, job.format, out).map(|_| {
                let failed: Vec<&str> = reports.iter().filter(|r| !r.passed()).map(|r| r.suite.name()).collect();
                if failed.is_empty() {
                    EXIT_OK
                } else {
                    let _ = writeln!(err, "failed suites: {}", failed.join(", "));
                    EXIT_NUMERICAL
                }
            })
        }
    };
    result.unwrap_or_else(|e| {
        let _ = writeln!(err, "error: output: {e}");
        EXIT_NUMERICAL
    })
}

/// Entry point shared by the binary and tests: parse, open the output, run.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let job = match JobSpec::parse_from(args) {
        Ok(j) => j,
        Err(JobError::Info(m)) => {
            let _ = write!(stdout, "{m}");
            return EXIT_OK;
        }
        Err(e) => {
            let _ = writeln!(stderr, "{}", e.message().trim_end());
            return e.exit_code();
        }
    };
    match &job.output {
        None => run(&job, stdout, stderr),
        Some(path) => match File::create(path) {
            Ok(f) => {
                let mut w = BufWriter::new(f);
                let code = run(&job, &mut w, stderr);
                if let Err(e) = w.flush() {
                    let _ = writeln!(stderr, "error: {}: {e}", path.display());
                    return EXIT_NUMERICAL;
                }
                code
            }
            Err(e) => {
                let _ = writeln!(stderr, "error: cannot create {}: {e}", path.display());
                EXIT_PRECONDITION
            }
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_syntax() {
        let c = |re, im| Complex64::new(re, im);
        assert_eq!(parse_complex("3").unwrap(), c(3.0, 0.0));
        assert_eq!(parse_complex("2.5+0.3i").unwrap(), c(2.5, 0.3));
        assert_eq!(parse_complex("-2.5-0.3i").unwrap(), c(-2.5, -0.3));
        assert_eq!(parse_complex("1e-3+2e+1i").unwrap(), c(1e-3, 20.0));
        assert_eq!(parse_complex("0.4i").unwrap(), c(0.0, 0.4));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert!(parse_complex("2+xi").is_err());
        assert!(parse_complex("abc").is_err());
    }

    #[test]
    fn ranges_and_products() {
        let axes = parse_ranges("0:1:3,5:5:1", "t").unwrap();
        assert_eq!(axes, vec![vec![0.0, 0.5, 1.0], vec![5.0]]);
        assert_eq!(cartesian(&axes).len(), 3);
        assert!(parse_ranges("0:1", "t").is_err());
        assert!(parse_ranges("0:1:0", "t").is_err());
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt17(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt17(-2.0), "-2.0000000000000000e0");
    }
}
