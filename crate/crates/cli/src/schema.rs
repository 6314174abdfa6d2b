//! Input and output file formats. Every document carries `"schema_version": 1`.

use contextprob::complex_rep::{AmplitudeVector, TransitionAmplitudeMatrix};
use contextprob::hyperbolic_rep::{GAmplitudeVector, GTransitionMatrix, UnitarityReport};
use contextprob::probability::{Interval, Phase};
use contextprob::simulator::{TracePoint, TraceRow};
use contextprob::{InterferenceProfile, PhaseFamily, Sign};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

fn schema_version() -> u32 {
    SCHEMA_VERSION
}

/// `(p, P, q)` triple with optional coefficients or phases for `transform`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    pub p: Vec<f64>,
    #[serde(rename = "P")]
    pub transition: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambdas: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phases: Option<[Phase; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    pub joint: [[f64; 2]; 2],
    pub disturbed: Vec<Vec<f64>>,
    pub n: u64,
    pub seed: u64,
    pub replications: u32,
    #[serde(default)]
    pub pass_through: bool,
}

/// Parameters of the complex representation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexRepFile {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    pub p: Vec<f64>,
    #[serde(default)]
    pub xi: [f64; 2],
    #[serde(rename = "P")]
    pub transition: Vec<Vec<f64>>,
    #[serde(default)]
    pub gamma: [[f64; 2]; 2],
}

fn plus_signs() -> [Sign; 2] {
    [Sign::Plus; 2]
}

/// Parameters of the hyperbolic representation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HyperbolicRepFile {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    pub p: Vec<f64>,
    #[serde(default = "plus_signs")]
    pub alpha_signs: [Sign; 2],
    #[serde(default)]
    pub xi: [f64; 2],
    #[serde(rename = "P")]
    pub transition: Vec<Vec<f64>>,
    pub signs: [[Sign; 2]; 2],
    #[serde(default)]
    pub gamma: [[f64; 2]; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub schema_version: u32,
    pub profile: InterferenceProfile,
    #[serde(rename = "K")]
    pub k: Option<f64>,
    pub orthogonal: Option<bool>,
    pub double_stochastic: bool,
    pub admissible_lambda1: Option<Interval>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformReport {
    pub schema_version: u32,
    pub q: Vec<f64>,
    pub profile: InterferenceProfile,
    #[serde(rename = "K")]
    pub k: f64,
    pub admissible_lambda1: Interval,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub schema_version: u32,
    pub analytic_lambdas: Vec<f64>,
    pub points: Vec<TracePoint>,
    pub shrinkage_consistent: bool,
    pub rows: Vec<TraceRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexRepReport {
    pub schema_version: u32,
    pub alpha: AmplitudeVector,
    #[serde(rename = "U")]
    pub u: TransitionAmplitudeMatrix,
    pub beta: AmplitudeVector,
    pub sq_norms: [f64; 2],
    pub defect: f64,
    pub unitary: bool,
    pub eta: f64,
    pub gamma_differences: [f64; 2],
    pub families: Vec<PhaseFamily>,
    pub born: Option<Vec<f64>>,
    pub born_error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicRepReport {
    pub schema_version: u32,
    pub alpha: GAmplitudeVector,
    #[serde(rename = "U")]
    pub u: GTransitionMatrix,
    pub sigma: Sign,
    pub beta: GAmplitudeVector,
    pub sq_norms: [f64; 2],
    pub unitary: bool,
    pub characterization: UnitarityReport,
    pub eta: f64,
    pub gamma_differences: [f64; 2],
    pub families: Option<Vec<PhaseFamily>>,
    pub born: Option<Vec<f64>>,
    pub born_error: Option<String>,
}
