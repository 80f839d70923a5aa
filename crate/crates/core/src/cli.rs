//! Command-line front end. [`run`] does all the work and returns the exit
//! code with the captured output, so the binary stays a thin shim.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, LN_2};
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::ensembles::{make_em, make_mixed_em, Ensemble};
use crate::error::{invalid, Error, Result};
use crate::matcore::DEFAULT_TOL;
use crate::measures::{check_pe_optimal, error_probability, i_theta_mixed, mutual_information};
use crate::naimark::{build_plan, simulate, simulated_information, verify_dilation};
use crate::oracle::{fmt_sig17, scan3, theta_sweep_mixed};
use crate::povm::{to_rank1_real, validate, Povm};
use crate::strategies::{
    covariant_am, covariant_from_w, mu4_povm, state_direction_povm, subgroup_povm, theorem2_w,
};

/// Seed used by the detection sampler when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Parser)]
#[command(
    name = "accinfo",
    version,
    about = "Accessible information of symmetric qubit sources"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Information of a source under a measurement (default: the optimal one)
    Info(InfoArgs),
    /// Sample I(θ) over [0, π)
    Sweep(SweepArgs),
    /// Brute-force scan over all three-outcome real rank-1 measurements
    Scan(ScanArgs),
    /// Build one of the named measurements
    Construct(ConstructArgs),
    /// Build and check the optical dilation of W(M, m, m)
    Naimark(NaimarkArgs),
    /// Minimum-error certificate for a measurement
    PeCheck(PeCheckArgs),
    /// Check that a JSON file holds a valid POVM
    Validate(ValidateArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Unit {
    #[default]
    Nats,
    Bits,
}

impl Unit {
    fn apply(self, nats: f64) -> f64 {
        match self {
            Unit::Nats => nats,
            Unit::Bits => nats / LN_2,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Unit::Nats => "nats",
            Unit::Bits => "bits",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long, value_enum, default_value_t = Unit::Nats)]
    pub unit: Unit,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the result here instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InfoArgs {
    #[arg(long = "M")]
    pub big_m: usize,
    /// Weight of the maximally mixed admixture
    #[arg(long, default_value_t = 0.0)]
    pub eps: f64,
    /// Evaluate the closed-form curve at this angle instead of π/2
    #[arg(long)]
    pub theta: Option<f64>,
    /// Measurement to evaluate (JSON)
    #[arg(long)]
    pub povm: Option<PathBuf>,
    /// Source to use instead of the symmetric one (JSON)
    #[arg(long)]
    pub ensemble: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long = "M")]
    pub big_m: usize,
    #[arg(long, default_value_t = 1000)]
    pub points: usize,
    #[arg(long, default_value_t = 0.0)]
    pub eps: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long = "M")]
    pub big_m: usize,
    #[arg(long, default_value_t = 48)]
    pub grid: usize,
    /// Coordinate refinement rounds after the lattice pass
    #[arg(long, default_value_t = 2000)]
    pub refine: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Strategy {
    /// The M-outcome covariant measurement
    Covariant,
    /// Three-outcome W(M, m, n)
    W,
    /// Covariant measurement of the order-k subgroup, shifted by l
    Subgroup,
    /// Four-outcome family for M = 5
    Mu4,
    /// Covariant measurement generated from W(M, m, n)
    CovariantFromW,
    /// Projections onto the source states, scaled by 2/M
    State,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(value_enum)]
    pub strategy: Strategy,
    #[arg(long = "M", default_value_t = 3)]
    pub big_m: usize,
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, default_value_t = 0)]
    pub l: usize,
    #[arg(long, default_value_t = 0.5)]
    pub lambda: f64,
    /// Write full matrices instead of weights and angles
    #[arg(long)]
    pub full: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct NaimarkArgs {
    #[arg(long = "M")]
    pub big_m: usize,
    #[arg(long)]
    pub m: usize,
    /// Input polarization angle for the port statistics
    #[arg(long, default_value_t = 0.0)]
    pub theta: f64,
    /// Also draw this many detection events
    #[arg(long, default_value_t = 0)]
    pub shots: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct PeCheckArgs {
    #[arg(long = "M")]
    pub big_m: usize,
    #[arg(long, default_value_t = 0.0)]
    pub eps: f64,
    /// Measurement to check (default: projections onto the source states)
    #[arg(long)]
    pub povm: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    pub file: PathBuf,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
}

/// Exit status and captured streams of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, stderr: String) -> Self {
        Self {
            code,
            stdout: String::new(),
            stderr,
        }
    }
}

/// Parses `args` (program name first) and runs the command.
///
/// Exit codes: 0 success, 1 bad usage or violated precondition, 2 I/O failure.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome::fail(1, text)
            } else {
                Outcome::ok(text)
            };
        }
    };
    match execute(&cli.command) {
        Ok(Some(out)) => Outcome::ok(out),
        Ok(None) => Outcome::ok(String::new()),
        Err(Failure::Rejected(text)) => Outcome {
            code: 1,
            stdout: text,
            stderr: String::new(),
        },
        Err(Failure::Lib(e)) => {
            let code = if matches!(e, Error::Io(_)) { 2 } else { 1 };
            Outcome::fail(code, format!("error: {e}\n"))
        }
    }
}

enum Failure {
    Lib(Error),
    /// A check ran but did not pass; the report goes to stdout.
    Rejected(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

/// Returns the text for stdout, or `None` when it went to a file.
fn execute(cmd: &Command) -> std::result::Result<Option<String>, Failure> {
    let (text, common) = match cmd {
        Command::Info(a) => (info(a)?, &a.common),
        Command::Sweep(a) => (sweep(a)?, &a.common),
        Command::Scan(a) => (scan(a)?, &a.common),
        Command::Construct(a) => (construct(a)?, &a.common),
        Command::Naimark(a) => (naimark(a)?, &a.common),
        Command::PeCheck(a) => (pe_check(a)?, &a.common),
        Command::Validate(a) => {
            let p = Povm::load(&a.file)?;
            let report = validate(&p, a.tol);
            return if report.is_valid() {
                Ok(Some(format!(
                    "valid POVM: {} elements, dim {}\n",
                    p.len(),
                    p.dim()
                )))
            } else {
                Err(Failure::Rejected(format!("{report}\n")))
            };
        }
    };
    match &common.output {
        Some(path) => {
            std::fs::write(path, text).map_err(Error::from)?;
            Ok(None)
        }
        None => Ok(Some(text)),
    }
}

fn source(big_m: usize, eps: f64) -> Result<Ensemble> {
    if eps == 0.0 {
        make_em(big_m)
    } else {
        make_mixed_em(big_m, eps)
    }
}

/// Renders a flat record as pretty JSON or `key,value` CSV.
fn render(fields: &BTreeMap<&str, Value>, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(fields)? + "\n"),
        Format::Csv => {
            let mut out = String::from("key,value\n");
            for (k, v) in fields {
                let cell = match v {
                    Value::Number(n) => n.as_f64().map(fmt_sig17).unwrap_or_else(|| n.to_string()),
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                let _ = writeln!(out, "{k},{cell}");
            }
            Ok(out)
        }
    }
}

fn info(a: &InfoArgs) -> Result<String> {
    let unit = a.common.unit;
    let mut fields = BTreeMap::new();
    fields.insert("unit", json!(unit.name()));
    let value = if let Some(path) = &a.povm {
        let e = match &a.ensemble {
            Some(p) => Ensemble::load(p)?,
            None => source(a.big_m, a.eps)?,
        };
        let p = Povm::load(path)?;
        fields.insert("outcomes", json!(p.len()));
        mutual_information(&e, &p)?
    } else {
        if a.ensemble.is_some() {
            return Err(invalid!("--ensemble needs --povm"));
        }
        let theta = a.theta.unwrap_or(FRAC_PI_2);
        fields.insert("theta", json!(theta));
        i_theta_mixed(a.big_m, theta, a.eps)?
    };
    fields.insert("M", json!(a.big_m));
    fields.insert("eps", json!(a.eps));
    fields.insert("info", json!(unit.apply(value)));
    render(&fields, a.common.format)
}

fn sweep(a: &SweepArgs) -> Result<String> {
    let curve = theta_sweep_mixed(a.big_m, a.points, a.eps)?;
    let unit = a.common.unit;
    match a.common.format {
        Format::Csv => Ok(match unit {
            Unit::Nats => curve.to_csv(),
            Unit::Bits => curve.to_csv_scaled("info_bits", 1.0 / LN_2),
        }),
        Format::Json => {
            let values: Vec<f64> = curve.values.iter().map(|v| unit.apply(*v)).collect();
            let doc = json!({
                "M": curve.m,
                "eps": a.eps,
                "unit": unit.name(),
                "thetas": curve.thetas,
                "values": values,
            });
            Ok(serde_json::to_string_pretty(&doc)? + "\n")
        }
    }
}

fn scan(a: &ScanArgs) -> Result<String> {
    let r = scan3(a.big_m, a.grid, a.refine)?;
    let unit = a.common.unit;
    let mut fields = BTreeMap::new();
    fields.insert("M", json!(a.big_m));
    fields.insert("grid", json!(a.grid));
    fields.insert("unit", json!(unit.name()));
    fields.insert("best_theta", json!(r.best_theta));
    fields.insert("best_phi_a", json!(r.best_phi_a));
    fields.insert("best_phi_b", json!(r.best_phi_b));
    fields.insert("best_value", json!(unit.apply(r.best_value)));
    fields.insert("grid_points_evaluated", json!(r.grid_points_evaluated));
    fields.insert("grid_points_skipped", json!(r.grid_points_skipped));
    fields.insert("refined", json!(r.refined));
    render(&fields, a.common.format)
}

/// The measurement named by a `construct` invocation.
pub fn build_strategy(a: &ConstructArgs) -> Result<Povm> {
    match a.strategy {
        Strategy::Covariant => covariant_am(a.big_m),
        Strategy::W => theorem2_w(a.big_m, a.m, a.n),
        Strategy::Subgroup => subgroup_povm(a.big_m, a.k, a.l),
        Strategy::Mu4 => mu4_povm(a.lambda),
        Strategy::CovariantFromW => covariant_from_w(a.big_m, a.m, a.n),
        Strategy::State => state_direction_povm(a.big_m),
    }
}

fn construct(a: &ConstructArgs) -> Result<String> {
    let p = build_strategy(a)?;
    if a.common.format == Format::Csv {
        let r = to_rank1_real(&p, DEFAULT_TOL)?;
        let mut out = String::from("weight,angle_rad\n");
        for (w, t) in r.weights().iter().zip(r.angles()) {
            let _ = writeln!(out, "{},{}", fmt_sig17(*w), fmt_sig17(*t));
        }
        return Ok(out);
    }
    let doc = if a.full {
        p.to_json()
    } else {
        to_rank1_real(&p, DEFAULT_TOL)?.to_json()
    };
    Ok(serde_json::to_string_pretty(&doc)? + "\n")
}

#[derive(Serialize)]
struct NaimarkDoc {
    plan: crate::naimark::PlanJson,
    checks: crate::naimark::DilationReport,
    passed: bool,
    information: f64,
    unit: &'static str,
    input_theta: f64,
    port_probabilities: [f64; 4],
    #[serde(skip_serializing_if = "Option::is_none")]
    counts: Option<[u64; 4]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

fn naimark(a: &NaimarkArgs) -> Result<String> {
    let plan = build_plan(a.big_m, a.m)?;
    let stats = simulate(&plan, a.theta);
    if a.common.format == Format::Csv {
        return Ok(stats.to_csv());
    }
    let report = verify_dilation(&plan, a.tol);
    let counts = (a.shots > 0).then(|| stats.sample_counts(a.shots, a.seed));
    let doc = NaimarkDoc {
        plan: plan.to_json(),
        passed: report.passed(),
        checks: report,
        information: a.common.unit.apply(simulated_information(&plan)?),
        unit: a.common.unit.name(),
        input_theta: a.theta,
        port_probabilities: stats.probs,
        counts,
        seed: counts.map(|_| a.seed),
    };
    Ok(serde_json::to_string_pretty(&doc)? + "\n")
}

fn pe_check(a: &PeCheckArgs) -> Result<String> {
    let e = source(a.big_m, a.eps)?;
    let p = match &a.povm {
        Some(path) => Povm::load(path)?,
        None => state_direction_povm(a.big_m)?,
    };
    let report = check_pe_optimal(&e, &p, a.tol)?;
    let mut fields = BTreeMap::new();
    fields.insert("M", json!(a.big_m));
    fields.insert("eps", json!(a.eps));
    fields.insert("error_probability", json!(error_probability(&e, &p)?));
    fields.insert("gamma_hermiticity", json!(report.gamma_hermiticity));
    fields.insert(
        "min_eigenvalue",
        json!(report
            .min_eigenvalues
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min)),
    );
    fields.insert("failing_inputs", json!(report.failing_inputs()));
    fields.insert("passed", json!(report.passed()));
    render(&fields, a.common.format)
}
