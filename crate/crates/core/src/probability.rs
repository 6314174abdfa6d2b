//! Interference calculus for transitions between preparation contexts.
//!
//! A parent context prepares an ensemble with context distribution `p` over the
//! values of `C`. Selecting by `C` yields sub-ensembles in which `A` follows the
//! rows of the transition matrix `P`. The observed distribution `q` of `A` on the
//! parent ensemble differs from the Bayes prediction `Σ_i p_i P_ij` by
//!
//! ```text
//! δ_j = q_j − (p_1 P_1j + p_2 P_2j) = 2 √(p_1 P_1j p_2 P_2j) · λ_j
//! ```
//!
//! and the normalized coefficients `λ_j` decide the behaviour class:
//! trigonometric (`|λ| ≤ 1`, `λ = cos θ`), hyperbolic (`|λ| > 1`, `λ = ±cosh θ`)
//! or mixed. Normalization of `q` forces `λ_1 = −K λ_2` with
//! `K = √(P_12 P_22 / (P_11 P_21))`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperbolic::Sign;

/// Tolerance on `Σ p_i = 1` for validated distributions.
pub const SUM_TOL: f64 = 1e-12;
/// Probabilities at or below this floor are rejected as degenerate.
pub const POSITIVITY_FLOOR: f64 = 1e-300;

/// Numerical tolerances used by classification and the forward transform.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// All `|λ| ≤ lambda_zero` labels the profile Classical.
    pub lambda_zero: f64,
    /// `|λ| ≤ 1 + lambda_boundary` still counts as trigonometric.
    pub lambda_boundary: f64,
    /// Allowed `|λ_1 + K λ_2|` in the forward transform.
    pub orthogonality: f64,
    /// Outputs in `[−clamp, 1 + clamp]` are clamped into `[0, 1]`.
    pub clamp: f64,
    /// Allowed deviation of column sums from 1 when testing double stochasticity.
    pub double_stochastic: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            lambda_zero: 1e-9,
            lambda_boundary: 1e-9,
            orthogonality: 1e-9,
            clamp: 1e-12,
            double_stochastic: 1e-10,
        }
    }
}

impl Tolerances {
    /// Overrides a tolerance by field name.
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        if !(value.is_finite() && value >= 0.0) {
            return Err(Error::InvalidDistribution(format!(
                "tolerance {name} must be a nonnegative finite number, got {value}"
            )));
        }
        let slot = match name {
            "lambda_zero" => &mut self.lambda_zero,
            "lambda_boundary" => &mut self.lambda_boundary,
            "orthogonality" => &mut self.orthogonality,
            "clamp" => &mut self.clamp,
            "double_stochastic" => &mut self.double_stochastic,
            other => {
                return Err(Error::InvalidDistribution(format!(
                    "unknown tolerance '{other}'"
                )))
            }
        };
        *slot = value;
        Ok(())
    }
}

fn check_positive(what: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > POSITIVITY_FLOOR {
        Ok(())
    } else {
        Err(Error::DegenerateProbability(format!(
            "{what} = {v} is not strictly positive"
        )))
    }
}

fn check_unit_sum(what: &str, v: &[f64]) -> Result<()> {
    let s: f64 = v.iter().sum();
    if (s - 1.0).abs() <= SUM_TOL {
        Ok(())
    } else {
        Err(Error::InvalidDistribution(format!(
            "{what} sums to {s}, expected 1"
        )))
    }
}

/// Distribution `p_i = P(C = c_i)` on the parent ensemble. Strictly positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ContextDistribution(Vec<f64>);

impl ContextDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.len() < 2 {
            return Err(Error::DimensionMismatch(format!(
                "context distribution needs at least 2 entries, got {}",
                probs.len()
            )));
        }
        for (i, &v) in probs.iter().enumerate() {
            check_positive(&format!("p[{i}]"), v)?;
        }
        check_unit_sum("context distribution", &probs)?;
        Ok(Self(probs))
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

impl TryFrom<Vec<f64>> for ContextDistribution {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<ContextDistribution> for Vec<f64> {
    fn from(d: ContextDistribution) -> Self {
        d.0
    }
}

/// Row-stochastic matrix `P_ij = P(A = a_j | context i)`, all entries strictly positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct TransitionMatrix(Vec<Vec<f64>>);

impl TransitionMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let m = rows.len();
        if m < 2 {
            return Err(Error::DimensionMismatch(format!(
                "transition matrix needs at least 2 rows, got {m}"
            )));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != m {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {m}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                check_positive(&format!("P[{i}][{j}]"), v)?;
            }
            check_unit_sum(&format!("row {i}"), row)?;
        }
        Ok(Self(rows))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[i][j]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.0
    }

    /// Column sums all within `tol` of 1.
    pub fn is_double_stochastic(&self, tol: f64) -> bool {
        let m = self.dim();
        (0..m).all(|j| {
            let s: f64 = (0..m).map(|i| self.0[i][j]).sum();
            (s - 1.0).abs() <= tol
        })
    }
}

impl TryFrom<Vec<Vec<f64>>> for TransitionMatrix {
    type Error = Error;

    fn try_from(v: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<TransitionMatrix> for Vec<Vec<f64>> {
    fn from(m: TransitionMatrix) -> Self {
        m.0
    }
}

/// Distribution `q_j = P(A = a_j)` on the parent ensemble. Entries may be zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct OutcomeDistribution(Vec<f64>);

impl OutcomeDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.len() < 2 {
            return Err(Error::DimensionMismatch(format!(
                "outcome distribution needs at least 2 entries, got {}",
                probs.len()
            )));
        }
        if let Some(v) = probs
            .iter()
            .find(|v| !(v.is_finite() && (0.0..=1.0).contains(*v)))
        {
            return Err(Error::InvalidDistribution(format!(
                "outcome probability {v} outside [0, 1]"
            )));
        }
        check_unit_sum("outcome distribution", &probs)?;
        Ok(Self(probs))
    }

    /// Entries already known to lie in `[0, 1]` whose sum is fixed by an
    /// algebraic identity rather than checked here.
    pub(crate) fn from_identity(probs: Vec<f64>) -> Self {
        Self(probs)
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

impl TryFrom<Vec<f64>> for OutcomeDistribution {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<OutcomeDistribution> for Vec<f64> {
    fn from(d: OutcomeDistribution) -> Self {
        d.0
    }
}

/// Behaviour class of an interference profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Behaviour {
    #[serde(rename = "C")]
    Classical,
    #[serde(rename = "T")]
    Trigonometric,
    #[serde(rename = "H")]
    Hyperbolic,
    #[serde(rename = "HT")]
    HyperTrigonometric,
}

impl Behaviour {
    pub fn code(self) -> &'static str {
        match self {
            Behaviour::Classical => "C",
            Behaviour::Trigonometric => "T",
            Behaviour::Hyperbolic => "H",
            Behaviour::HyperTrigonometric => "HT",
        }
    }
}

/// Classifies a family of coefficients. `|λ| = 1` (up to `lambda_boundary`) is trigonometric.
pub fn classify(lambdas: &[f64], tol: &Tolerances) -> Behaviour {
    let bound = 1.0 + tol.lambda_boundary;
    if lambdas.iter().all(|l| l.abs() <= tol.lambda_zero) {
        Behaviour::Classical
    } else if lambdas.iter().all(|l| l.abs() <= bound) {
        Behaviour::Trigonometric
    } else if lambdas.iter().all(|l| l.abs() > bound) {
        Behaviour::Hyperbolic
    } else {
        Behaviour::HyperTrigonometric
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PhaseKind {
    Cos,
    Cosh,
}

/// Phase representation of one coefficient: `λ = cos θ` or `λ = sign · cosh θ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Phase {
    pub kind: PhaseKind,
    pub theta: f64,
    pub sign: Sign,
}

impl Phase {
    pub fn cos(theta: f64) -> Self {
        Self {
            kind: PhaseKind::Cos,
            theta,
            sign: Sign::Plus,
        }
    }

    pub fn cosh(sign: Sign, theta: f64) -> Self {
        Self {
            kind: PhaseKind::Cosh,
            theta,
            sign,
        }
    }

    /// The coefficient this phase represents.
    pub fn lambda(&self) -> f64 {
        let base = match self.kind {
            PhaseKind::Cos => self.theta.cos(),
            PhaseKind::Cosh => self.theta.cosh(),
        };
        self.sign.value() * base
    }
}

/// Principal phase of a coefficient.
///
/// `|λ| ≤ 1` gives `θ = arccos λ ∈ [0, π]`; otherwise `θ = ln(|λ| + √(λ² − 1)) ≥ 0`
/// with the sign of `λ`. Values within `boundary_tol` above 1 are treated as `±1`.
pub fn phase_from_lambda(lambda: f64, boundary_tol: f64) -> Phase {
    let a = lambda.abs();
    if a <= 1.0 + boundary_tol {
        Phase::cos(lambda.clamp(-1.0, 1.0).acos())
    } else {
        Phase::cosh(Sign::of(lambda), (a + (a * a - 1.0).sqrt()).ln())
    }
}

/// Which outcome and context pair a coefficient belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub outcome: usize,
    pub contexts: (usize, usize),
}

/// Interference coefficients with their deviations, class and phases.
///
/// For two contexts and two outcomes there is one term per outcome and phases
/// are populated. For larger `M` the family `λ_kl^(i)` is listed in
/// outcome-major order with pairs `k < l` in lexicographic order, and `phases`
/// is empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterferenceProfile {
    pub lambdas: Vec<f64>,
    pub deltas: Vec<f64>,
    pub behaviour: Behaviour,
    pub phases: Vec<Phase>,
    pub terms: Vec<Term>,
}

fn require_dichotomic(p: &ContextDistribution, pm: &TransitionMatrix) -> Result<()> {
    if p.dim() != 2 || pm.dim() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "dichotomic operation needs M = 2, got p of length {} and P of size {}",
            p.dim(),
            pm.dim()
        )));
    }
    Ok(())
}

fn require_same_dim(
    p: &ContextDistribution,
    pm: &TransitionMatrix,
    q: &OutcomeDistribution,
) -> Result<()> {
    if p.dim() != pm.dim() || q.dim() != pm.dim() {
        return Err(Error::DimensionMismatch(format!(
            "p has {} entries, P is {}x{}, q has {} entries",
            p.dim(),
            pm.dim(),
            pm.dim(),
            q.dim()
        )));
    }
    Ok(())
}

/// Classical total-probability prediction `Σ_i p_i P_ij`.
pub fn bayes(p: &ContextDistribution, pm: &TransitionMatrix) -> Vec<f64> {
    let m = pm.dim();
    (0..m)
        .map(|j| (0..m).map(|i| p.probs()[i] * pm.get(i, j)).sum())
        .collect()
}

/// Scale `2 √(p_1 P_1j p_2 P_2j)` linking `δ_j` and `λ_j`.
fn interference_scale(p: &ContextDistribution, pm: &TransitionMatrix, j: usize) -> f64 {
    let pr = p.probs();
    2.0 * (pr[0] * pm.get(0, j) * pr[1] * pm.get(1, j)).sqrt()
}

fn dichotomic_terms() -> Vec<Term> {
    (0..2)
        .map(|outcome| Term {
            outcome,
            contexts: (0, 1),
        })
        .collect()
}

impl InterferenceProfile {
    /// Builds a dichotomic profile from given coefficients.
    pub fn dichotomic(
        p: &ContextDistribution,
        pm: &TransitionMatrix,
        lambdas: [f64; 2],
        tol: &Tolerances,
    ) -> Result<Self> {
        require_dichotomic(p, pm)?;
        let deltas = (0..2)
            .map(|j| interference_scale(p, pm, j) * lambdas[j])
            .collect();
        Ok(Self::assemble(lambdas.to_vec(), deltas, tol))
    }

    /// Builds a dichotomic profile from phase representations.
    pub fn from_phases(
        p: &ContextDistribution,
        pm: &TransitionMatrix,
        phases: [Phase; 2],
        tol: &Tolerances,
    ) -> Result<Self> {
        Self::dichotomic(p, pm, [phases[0].lambda(), phases[1].lambda()], tol)
    }

    pub(crate) fn assemble(lambdas: Vec<f64>, deltas: Vec<f64>, tol: &Tolerances) -> Self {
        let phases = lambdas
            .iter()
            .map(|&l| phase_from_lambda(l, tol.lambda_boundary))
            .collect();
        Self {
            behaviour: classify(&lambdas, tol),
            lambdas,
            deltas,
            phases,
            terms: dichotomic_terms(),
        }
    }
}

/// Computes `δ_j`, `λ_j`, the behaviour class and phases for `M = 2`.
pub fn interference_coefficients(
    p: &ContextDistribution,
    pm: &TransitionMatrix,
    q: &OutcomeDistribution,
    tol: &Tolerances,
) -> Result<InterferenceProfile> {
    require_dichotomic(p, pm)?;
    require_same_dim(p, pm, q)?;
    let classical = bayes(p, pm);
    let deltas: Vec<f64> = (0..2).map(|j| q.probs()[j] - classical[j]).collect();
    let lambdas = (0..2)
        .map(|j| deltas[j] / interference_scale(p, pm, j))
        .collect();
    Ok(InterferenceProfile::assemble(lambdas, deltas, tol))
}

/// `K = √(P_12 P_22 / (P_11 P_21))`; equals 1 exactly when `P` is double stochastic.
pub fn coupling_coefficient(pm: &TransitionMatrix) -> Result<f64> {
    if pm.dim() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "coupling coefficient needs a 2x2 matrix, got {}x{}",
            pm.dim(),
            pm.dim()
        )));
    }
    Ok((pm.get(0, 1) * pm.get(1, 1) / (pm.get(0, 0) * pm.get(1, 0))).sqrt())
}

/// Whether `|λ_1 + K λ_2| ≤ tol`.
pub fn check_orthogonality(profile: &InterferenceProfile, k: f64, tol: f64) -> bool {
    orthogonality_residual(profile, k).is_some_and(|r| r <= tol)
}

fn orthogonality_residual(profile: &InterferenceProfile, k: f64) -> Option<f64> {
    match profile.lambdas.as_slice() {
        [l1, l2] => Some((l1 + k * l2).abs()),
        _ => None,
    }
}

/// Applies `q_j = Σ_i p_i P_ij + 2 √(p_1 P_1j p_2 P_2j) λ_j`.
///
/// Results within `tol.clamp` of `[0, 1]` are clamped; anything further out is
/// rejected. The output sums to 1 up to `2 √(p_1 P_11 p_2 P_21) · |λ_1 + K λ_2|`.
pub fn forward_transform(
    p: &ContextDistribution,
    pm: &TransitionMatrix,
    profile: &InterferenceProfile,
    tol: &Tolerances,
) -> Result<OutcomeDistribution> {
    require_dichotomic(p, pm)?;
    let k = coupling_coefficient(pm)?;
    let residual = orthogonality_residual(profile, k).ok_or_else(|| {
        Error::DimensionMismatch(format!(
            "profile has {} coefficients, expected 2",
            profile.lambdas.len()
        ))
    })?;
    if residual > tol.orthogonality {
        return Err(Error::OrthogonalityViolated {
            residual,
            tol: tol.orthogonality,
        });
    }
    let classical = bayes(p, pm);
    let raw: Vec<f64> = (0..2)
        .map(|j| classical[j] + interference_scale(p, pm, j) * profile.lambdas[j])
        .collect();
    if raw
        .iter()
        .any(|&v| !v.is_finite() || v < -tol.clamp || v > 1.0 + tol.clamp)
    {
        return Err(Error::NonphysicalResult(raw));
    }
    Ok(OutcomeDistribution::from_identity(
        raw.into_iter().map(|v| v.clamp(0.0, 1.0)).collect(),
    ))
}

/// Closed interval of real numbers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }
}

/// Values of `λ_1` (with `λ_2 = −λ_1 / K`) for which the forward transform stays in `[0, 1]`.
///
/// `q_1 ≥ 0` bounds `λ_1` from below and `q_2 ≥ 0` from above; the upper
/// bounds `q_j ≤ 1` follow from normalization.
pub fn lambda_admissible_interval(
    p: &ContextDistribution,
    pm: &TransitionMatrix,
) -> Result<Interval> {
    require_dichotomic(p, pm)?;
    let classical = bayes(p, pm);
    // 2 √(p_1 P_12 p_2 P_22) / K reduces to the outcome-1 scale
    let s1 = interference_scale(p, pm, 0);
    Ok(Interval {
        lo: -classical[0] / s1,
        hi: classical[1] / s1,
    })
}

/// General-`M` decomposition into pairwise coefficients `λ_kl^(i)`.
///
/// The deviation assigned to the context pair `k < l` for outcome `i` is
///
/// ```text
/// δ_kl^(i) = [p_k (q_i − P_ki) + p_l (q_i − P_li)] / (M − 1)
/// ```
///
/// and summing over all pairs recovers `q_i − Σ_k p_k P_ki`.
pub fn multi_valued_decomposition(
    p: &ContextDistribution,
    pm: &TransitionMatrix,
    q: &OutcomeDistribution,
    tol: &Tolerances,
) -> Result<InterferenceProfile> {
    require_same_dim(p, pm, q)?;
    let m = pm.dim();
    let pr = p.probs();
    let norm = (m - 1) as f64;
    let mut lambdas = Vec::with_capacity(m * m * (m - 1) / 2);
    let mut deltas = Vec::with_capacity(lambdas.capacity());
    let mut terms = Vec::with_capacity(lambdas.capacity());
    for (i, &qi) in q.probs().iter().enumerate() {
        for k in 0..m {
            for l in (k + 1)..m {
                let delta = (pr[k] * (qi - pm.get(k, i)) + pr[l] * (qi - pm.get(l, i))) / norm;
                let scale = 2.0 * (pr[k] * pr[l] * pm.get(k, i) * pm.get(l, i)).sqrt();
                deltas.push(delta);
                lambdas.push(delta / scale);
                terms.push(Term {
                    outcome: i,
                    contexts: (k, l),
                });
            }
        }
    }
    let behaviour = classify(&lambdas, tol);
    let phases = if m == 2 {
        lambdas
            .iter()
            .map(|&l| phase_from_lambda(l, tol.lambda_boundary))
            .collect()
    } else {
        Vec::new()
    };
    Ok(InterferenceProfile {
        lambdas,
        deltas,
        behaviour,
        phases,
        terms,
    })
}

/// Reassembles `q_i = Σ_j p_j P_ji + 2 Σ_{k<l} √(p_k p_l P_ki P_li) λ_kl^(i)`.
pub fn reconstruct_multi_valued(
    p: &ContextDistribution,
    pm: &TransitionMatrix,
    profile: &InterferenceProfile,
) -> Vec<f64> {
    let pr = p.probs();
    let mut q = bayes(p, pm);
    for (term, &lambda) in profile.terms.iter().zip(&profile.lambdas) {
        let (k, l) = term.contexts;
        let i = term.outcome;
        q[i] += 2.0 * (pr[k] * pr[l] * pm.get(k, i) * pm.get(l, i)).sqrt() * lambda;
    }
    q
}
