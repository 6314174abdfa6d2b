//! Command-line front end for the `contextprob` library.
//!
//! Every subcommand reads a JSON document (from `--input` or stdin), runs one
//! library operation and writes JSON, or CSV where a table makes sense.
//!
//! Exit codes: 0 success, 1 golden mismatch, 2 usage or parse error,
//! 3 domain error, 4 degenerate simulation.

pub mod golden;
pub mod schema;

use std::fmt;
use std::io::Read;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use contextprob::complex_rep::{
    amplitudes_from_context, born, compose, is_unitary, matrix_from_probabilities,
    normalization_defect, phase_differences, solve_phase_constraint,
};
use contextprob::hyperbolic_rep::{
    g_amplitudes_from_context, g_born, g_compose, g_is_unitary, g_matrix_from_probabilities,
    g_solve_phase_constraint, g_unitary_characterization, CHARACTERIZATION_TOL,
};
use contextprob::probability::{
    check_orthogonality, coupling_coefficient, forward_transform, interference_coefficients,
    lambda_admissible_interval, multi_valued_decomposition,
};
use contextprob::simulator::{convergence_study, ConvergenceTrace, EnsembleScenario};
use contextprob::{
    ContextDistribution, Error, InterferenceProfile, OutcomeDistribution, Tolerances,
    TransitionMatrix,
};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::golden::{run_golden, Expected, GoldenReport};
use crate::schema::*;

/// Tolerance used by the complex unitarity test.
const UNITARY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "contextprob",
    version,
    about = "Contextual probability toolkit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Input document; stdin when omitted.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,

    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Overrides the scenario seed.
    #[arg(long, global = true, env = "CONTEXTPROB_SEED")]
    pub seed: Option<u64>,

    /// Overrides the scenario replication count.
    #[arg(long, global = true)]
    pub replications: Option<u32>,

    /// Comma-separated ensemble sizes, strictly increasing.
    #[arg(long, global = true, value_delimiter = ',')]
    pub schedule: Option<Vec<u64>>,

    /// Tolerance override, e.g. `--tol lambda_zero=1e-6`. Repeatable.
    #[arg(long = "tol", global = true, value_name = "NAME=VALUE", value_parser = parse_tol)]
    pub tol: Vec<(String, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Interference coefficients, behaviour class and phases of `(p, P, q)`.
    Classify,
    /// Outcome distribution from `(p, P)` and coefficients or phases.
    Transform,
    /// Relative-frequency convergence study of a scenario.
    Simulate,
    /// Complex amplitude representation diagnostics.
    RepC,
    /// Hyperbolic amplitude representation diagnostics.
    RepG,
    /// Recompute the worked examples and compare with their known values.
    Examples,
}

fn parse_tol(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected NAME=VALUE, got {s:?}"))?;
    let value: f64 = value
        .trim()
        .parse()
        .map_err(|e| format!("bad tolerance value {value:?}: {e}"))?;
    Ok((name.trim().to_string(), value))
}

#[derive(Debug)]
pub enum CliError {
    /// Malformed input, unreadable file or unsupported option.
    Usage(String),
    /// The library rejected the input.
    Domain(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(Error::EmptyContext(_) | Error::UndefinedCoefficient(_)) => 4,
            CliError::Domain(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Domain(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e)
    }
}

/// What a successful run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub body: String,
    /// One-line summary for stderr.
    pub note: Option<String>,
    pub exit_code: i32,
}

impl Outcome {
    fn ok(body: String) -> Self {
        Self {
            body,
            note: None,
            exit_code: 0,
        }
    }
}

pub fn tolerances(overrides: &[(String, f64)]) -> Result<Tolerances, CliError> {
    let mut tol = Tolerances::default();
    for (name, value) in overrides {
        tol.set(name, *value)
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    Ok(tol)
}

fn read_input(path: Option<&PathBuf>) -> Result<String, CliError> {
    match path {
        Some(p) => std::fs::read_to_string(p)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", p.display()))),
        None => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| CliError::Usage(format!("cannot read stdin: {e}")))?;
            Ok(s)
        }
    }
}

/// Parses a versioned input document.
pub fn parse_document<T: DeserializeOwned>(text: &str) -> Result<T, CliError> {
    let raw: serde_json::Value =
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("invalid JSON: {e}")))?;
    if let Some(v) = raw.get("schema_version") {
        if v.as_u64() != Some(SCHEMA_VERSION as u64) {
            return Err(CliError::Usage(format!(
                "unsupported schema_version {v}, expected {SCHEMA_VERSION}"
            )));
        }
    }
    serde_json::from_value(raw).map_err(|e| CliError::Usage(format!("invalid document: {e}")))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn json_only(format: Format, what: &str) -> Result<(), CliError> {
    match format {
        Format::Json => Ok(()),
        Format::Csv => Err(CliError::Usage(format!("{what} output is JSON only"))),
    }
}

fn dichotomic(p: &ContextDistribution, what: &str) -> Result<(), CliError> {
    if p.dim() != 2 {
        return Err(Error::DimensionMismatch(format!("{what} needs two contexts")).into());
    }
    Ok(())
}

pub fn classify(doc: &ProblemFile, tol: &Tolerances) -> Result<ClassifyReport, CliError> {
    let p = ContextDistribution::new(doc.p.clone())?;
    let pm = TransitionMatrix::new(doc.transition.clone())?;
    let q = doc
        .q
        .clone()
        .ok_or_else(|| CliError::Usage("classify needs \"q\"".into()))?;
    let q = OutcomeDistribution::new(q)?;
    let double_stochastic = pm.is_double_stochastic(tol.double_stochastic);
    if pm.dim() == 2 {
        let profile = interference_coefficients(&p, &pm, &q, tol)?;
        let k = coupling_coefficient(&pm)?;
        let orthogonal = check_orthogonality(&profile, k, tol.orthogonality);
        Ok(ClassifyReport {
            schema_version: SCHEMA_VERSION,
            admissible_lambda1: Some(lambda_admissible_interval(&p, &pm)?),
            profile,
            k: Some(k),
            orthogonal: Some(orthogonal),
            double_stochastic,
        })
    } else {
        Ok(ClassifyReport {
            schema_version: SCHEMA_VERSION,
            profile: multi_valued_decomposition(&p, &pm, &q, tol)?,
            k: None,
            orthogonal: None,
            double_stochastic,
            admissible_lambda1: None,
        })
    }
}

pub fn transform(doc: &ProblemFile, tol: &Tolerances) -> Result<TransformReport, CliError> {
    let p = ContextDistribution::new(doc.p.clone())?;
    let pm = TransitionMatrix::new(doc.transition.clone())?;
    dichotomic(&p, "transform")?;
    let profile = match (doc.lambdas, doc.phases) {
        (Some(l), None) => InterferenceProfile::dichotomic(&p, &pm, l, tol)?,
        (None, Some(ph)) => InterferenceProfile::from_phases(&p, &pm, ph, tol)?,
        _ => {
            return Err(CliError::Usage(
                "transform needs exactly one of \"lambdas\" or \"phases\"".into(),
            ))
        }
    };
    let q = forward_transform(&p, &pm, &profile, tol)?;
    Ok(TransformReport {
        schema_version: SCHEMA_VERSION,
        q: q.probs().to_vec(),
        k: coupling_coefficient(&pm)?,
        admissible_lambda1: lambda_admissible_interval(&p, &pm)?,
        profile,
    })
}

/// Decades from 10³ below `n`, followed by `n` itself.
pub fn default_schedule(n: u64) -> Vec<u64> {
    let mut s: Vec<u64> = std::iter::successors(Some(1_000u64), |d| d.checked_mul(10))
        .take_while(|&d| d < n)
        .collect();
    s.push(n);
    s
}

pub fn scenario(
    doc: &ScenarioFile,
    seed: Option<u64>,
    reps: Option<u32>,
) -> Result<EnsembleScenario, CliError> {
    let disturbed = TransitionMatrix::new(doc.disturbed.clone())?;
    let mut s = EnsembleScenario::new(
        doc.joint,
        disturbed,
        doc.n,
        seed.unwrap_or(doc.seed),
        reps.unwrap_or(doc.replications),
    )?;
    s.pass_through = doc.pass_through;
    Ok(s)
}

pub fn simulate(
    scenario: &EnsembleScenario,
    schedule: &[u64],
    tol: &Tolerances,
) -> Result<(SimulationReport, ConvergenceTrace), CliError> {
    let analytic = scenario.analytic_profile(tol)?;
    let trace = convergence_study(scenario, schedule)?;
    let report = SimulationReport {
        schema_version: SCHEMA_VERSION,
        analytic_lambdas: analytic.lambdas,
        points: trace.points.clone(),
        shrinkage_consistent: trace.shrinkage_consistent,
        rows: trace.rows.clone(),
    };
    Ok((report, trace))
}

/// Trace rows as CSV with a header line.
pub fn trace_csv(trace: &ConvergenceTrace) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in &trace.rows {
        w.serialize(row)
            .map_err(|e| CliError::Usage(format!("csv: {e}")))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Usage(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn simulation_note(report: &SimulationReport) -> String {
    match report.points.last() {
        Some(pt) => format!(
            "N={} replications={} mean lambda=({:.6}, {:.6}) analytic=({:.6}, {:.6})",
            pt.n,
            pt.valid_replications,
            pt.lambda_mean[0],
            pt.lambda_mean[1],
            report.analytic_lambdas[0],
            report.analytic_lambdas[1],
        ),
        None => "empty trace".into(),
    }
}

pub fn rep_c(doc: &ComplexRepFile) -> Result<ComplexRepReport, CliError> {
    let p = ContextDistribution::new(doc.p.clone())?;
    let pm = TransitionMatrix::new(doc.transition.clone())?;
    dichotomic(&p, "rep-c")?;
    let alpha = amplitudes_from_context(&p, doc.xi)?;
    let u = matrix_from_probabilities(&pm, doc.gamma)?;
    let beta = compose(&alpha, &u);
    let eta = doc.xi[0] - doc.xi[1];
    let (g1, g2) = phase_differences(&doc.gamma);
    let (born, born_error) = match born(&beta) {
        Ok(q) => (Some(q.probs().to_vec()), None),
        Err(e) => (None, Some(e.to_string())),
    };
    Ok(ComplexRepReport {
        schema_version: SCHEMA_VERSION,
        sq_norms: beta.sq_norms(),
        defect: normalization_defect(&alpha, &u),
        unitary: is_unitary(&u, UNITARY_TOL),
        eta,
        gamma_differences: [g1, g2],
        families: solve_phase_constraint(&pm, eta)?,
        alpha,
        u,
        beta,
        born,
        born_error,
    })
}

pub fn rep_g(doc: &HyperbolicRepFile) -> Result<HyperbolicRepReport, CliError> {
    let p = ContextDistribution::new(doc.p.clone())?;
    let pm = TransitionMatrix::new(doc.transition.clone())?;
    dichotomic(&p, "rep-g")?;
    let alpha = g_amplitudes_from_context(&p, doc.alpha_signs, doc.xi)?;
    let u = g_matrix_from_probabilities(&pm, doc.signs, doc.gamma)?;
    let beta = g_compose(&alpha, &u);
    let eta = doc.xi[0] - doc.xi[1];
    let (g1, g2) = u.phase_differences();
    let sigma = u.sigma();
    let (born, born_error) = match g_born(&beta) {
        Ok(q) => (Some(q.probs().to_vec()), None),
        Err(e) => (None, Some(e.to_string())),
    };
    Ok(HyperbolicRepReport {
        schema_version: SCHEMA_VERSION,
        sq_norms: beta.sq_norms(),
        unitary: g_is_unitary(&u, CHARACTERIZATION_TOL),
        characterization: g_unitary_characterization(&u),
        eta,
        gamma_differences: [g1, g2],
        families: g_solve_phase_constraint(&pm, sigma, eta).ok(),
        sigma,
        alpha,
        u,
        beta,
        born,
        born_error,
    })
}

fn golden_csv(report: &GoldenReport) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["example", "quantity", "expected", "computed", "pass"])
        .map_err(|e| CliError::Usage(format!("csv: {e}")))?;
    for c in &report.checks {
        w.write_record([
            c.example.clone(),
            c.quantity.clone(),
            c.expected.to_string(),
            c.computed.to_string(),
            c.pass.to_string(),
        ])
        .map_err(|e| CliError::Usage(format!("csv: {e}")))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Usage(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Runs the golden comparison against `want`; exit code 1 on any mismatch.
pub fn run_examples(want: &Expected, format: Format) -> Result<Outcome, CliError> {
    let report = run_golden(want)?;
    let body = match format {
        Format::Json => to_json(&report),
        Format::Csv => golden_csv(&report)?,
    };
    let failed = report.checks.iter().filter(|c| !c.pass).count();
    Ok(Outcome {
        body,
        note: Some(format!(
            "{} of {} checks passed",
            report.checks.len() - failed,
            report.checks.len()
        )),
        exit_code: if report.all_pass { 0 } else { 1 },
    })
}

/// Executes one subcommand without touching stdout or the output file.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let tol = tolerances(&cli.tol)?;
    match cli.command {
        Command::Examples => run_examples(&Expected::default(), cli.format),
        Command::Classify => {
            json_only(cli.format, "classify")?;
            let doc: ProblemFile = parse_document(&read_input(cli.input.as_ref())?)?;
            Ok(Outcome::ok(to_json(&classify(&doc, &tol)?)))
        }
        Command::Transform => {
            json_only(cli.format, "transform")?;
            let doc: ProblemFile = parse_document(&read_input(cli.input.as_ref())?)?;
            Ok(Outcome::ok(to_json(&transform(&doc, &tol)?)))
        }
        Command::RepC => {
            json_only(cli.format, "rep-c")?;
            let doc: ComplexRepFile = parse_document(&read_input(cli.input.as_ref())?)?;
            Ok(Outcome::ok(to_json(&rep_c(&doc)?)))
        }
        Command::RepG => {
            json_only(cli.format, "rep-g")?;
            let doc: HyperbolicRepFile = parse_document(&read_input(cli.input.as_ref())?)?;
            Ok(Outcome::ok(to_json(&rep_g(&doc)?)))
        }
        Command::Simulate => {
            let doc: ScenarioFile = parse_document(&read_input(cli.input.as_ref())?)?;
            let s = scenario(&doc, cli.seed, cli.replications)?;
            let schedule = cli
                .schedule
                .clone()
                .unwrap_or_else(|| default_schedule(s.n));
            let (report, trace) = simulate(&s, &schedule, &tol)?;
            let body = match cli.format {
                Format::Json => to_json(&report),
                Format::Csv => trace_csv(&trace)?,
            };
            Ok(Outcome {
                body,
                note: Some(simulation_note(&report)),
                exit_code: 0,
            })
        }
    }
}
