//! Counting simulation of the frequency origin of the interference term.
//!
//! A parent ensemble of `N` elements is drawn from the joint distribution
//! `π_ij = P(C = c_i, A = a_j)`, giving counts `n_ij`. Selecting by `C` produces
//! sub-ensembles of sizes `N_i`; inside each one `A` is redrawn from the
//! disturbed row `D_i·`, giving counts `m_ij`. The empirical coefficient
//!
//! ```text
//! λ_j^(N) = [(n_1j − m_1j) + (n_2j − m_2j)] / (2 √(m_1j m_2j))
//! ```
//!
//! converges to the analytic `λ_j` computed from `p_i = Σ_j π_ij`,
//! `q_j = Σ_i π_ij` and `P = D`.
//!
//! # Random streams
//!
//! All sampling uses ChaCha8 seeded with `seed_from_u64(seed)`. Schedule entry `s`
//! and replication `r` draw from stream `(s << 32) | r`, so every point of a
//! study is reproducible on its own and independent of thread scheduling.
//! [`simulate_counts`] uses stream 0.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::probability::{
    interference_coefficients, ContextDistribution, InterferenceProfile, OutcomeDistribution,
    Tolerances, TransitionMatrix, SUM_TOL,
};

/// Classification tolerances suited to empirical coefficients at `N ≈ 10⁶`.
pub fn empirical_tolerances() -> Tolerances {
    Tolerances {
        lambda_zero: 0.02,
        lambda_boundary: 0.02,
        ..Tolerances::default()
    }
}

/// Parent ensemble distribution, disturbance and sampling parameters.
///
/// With `pass_through` set the sub-ensembles keep their original `A` values,
/// so `m_ij = n_ij`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleScenario {
    pub joint: [[f64; 2]; 2],
    pub disturbed: TransitionMatrix,
    pub n: u64,
    pub seed: u64,
    pub replications: u32,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub pass_through: bool,
}

impl EnsembleScenario {
    pub fn new(
        joint: [[f64; 2]; 2],
        disturbed: TransitionMatrix,
        n: u64,
        seed: u64,
        replications: u32,
    ) -> Result<Self> {
        let s = Self {
            joint,
            disturbed,
            n,
            seed,
            replications,
            pass_through: false,
        };
        s.validate()?;
        Ok(s)
    }

    /// Scenario without disturbance; `disturbed` holds the conditional rows `π_ij / p_i`.
    pub fn pass_through(
        joint: [[f64; 2]; 2],
        n: u64,
        seed: u64,
        replications: u32,
    ) -> Result<Self> {
        let rows = conditional_rows(&joint)?;
        let mut s = Self::new(joint, TransitionMatrix::new(rows)?, n, seed, replications)?;
        s.pass_through = true;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self
            .joint
            .iter()
            .flatten()
            .any(|v| !(v.is_finite() && *v >= 0.0))
        {
            return Err(Error::InvalidDistribution(
                "joint probabilities must be finite and nonnegative".into(),
            ));
        }
        let total: f64 = self.joint.iter().flatten().sum();
        if (total - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidDistribution(format!(
                "joint distribution sums to {total}"
            )));
        }
        self.context_distribution()?;
        if self.disturbed.dim() != 2 {
            return Err(Error::DimensionMismatch(
                "disturbed matrix must be 2x2".into(),
            ));
        }
        if self.n == 0 {
            return Err(Error::InvalidDistribution(
                "ensemble size must be positive".into(),
            ));
        }
        if self.replications == 0 {
            return Err(Error::InvalidDistribution(
                "replications must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Marginal `p_i = Σ_j π_ij`.
    pub fn context_distribution(&self) -> Result<ContextDistribution> {
        ContextDistribution::new(self.joint.iter().map(|r| r[0] + r[1]).collect())
    }

    /// Marginal `q_j = Σ_i π_ij`.
    pub fn outcome_distribution(&self) -> Result<OutcomeDistribution> {
        OutcomeDistribution::new(vec![
            self.joint[0][0] + self.joint[1][0],
            self.joint[0][1] + self.joint[1][1],
        ])
    }

    /// Analytic profile the empirical coefficients converge to.
    pub fn analytic_profile(&self, tol: &Tolerances) -> Result<InterferenceProfile> {
        interference_coefficients(
            &self.context_distribution()?,
            &self.disturbed,
            &self.outcome_distribution()?,
            tol,
        )
    }
}

fn conditional_rows(joint: &[[f64; 2]; 2]) -> Result<Vec<Vec<f64>>> {
    joint
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let p = r[0] + r[1];
            if p <= 0.0 {
                return Err(Error::DegenerateProbability(format!(
                    "context {i} has zero marginal"
                )));
            }
            Ok(vec![r[0] / p, r[1] / p])
        })
        .collect()
}

/// Counts on the parent ensemble (`n_ij`) and on the disturbed sub-ensembles (`m_ij`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountTable {
    pub n: [[u64; 2]; 2],
    pub m: [[u64; 2]; 2],
    pub total: u64,
    pub context_totals: [u64; 2],
}

impl CountTable {
    /// `Δ_ij / N = (n_ij − m_ij) / N`.
    pub fn deviation_rates(&self) -> [[f64; 2]; 2] {
        let total = self.total as f64;
        std::array::from_fn(|i| {
            std::array::from_fn(|j| (self.n[i][j] as f64 - self.m[i][j] as f64) / total)
        })
    }

    pub fn max_abs_deviation_rate(&self) -> f64 {
        self.deviation_rates()
            .iter()
            .flatten()
            .fold(0.0, |a, v| a.max(v.abs()))
    }
}

/// Draws multinomial counts by sequential conditional binomials.
fn multinomial<R: rand::Rng>(rng: &mut R, n: u64, probs: &[f64]) -> Vec<u64> {
    let mut out = Vec::with_capacity(probs.len());
    let mut remaining = n;
    let mut mass: f64 = probs.iter().sum();
    for (idx, &p) in probs.iter().enumerate() {
        if idx + 1 == probs.len() {
            out.push(remaining);
            break;
        }
        let k = if remaining == 0 || p <= 0.0 {
            0
        } else {
            let ratio = (p / mass).clamp(0.0, 1.0);
            Binomial::new(remaining, ratio)
                .expect("ratio clamped into [0, 1]")
                .sample(rng)
        };
        out.push(k);
        remaining -= k;
        mass -= p;
    }
    out
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn stream_id(schedule_index: usize, replication: u32) -> u64 {
    ((schedule_index as u64) << 32) | u64::from(replication)
}

fn sample_counts(scenario: &EnsembleScenario, n: u64, rng: &mut ChaCha8Rng) -> Result<CountTable> {
    let flat: Vec<f64> = scenario.joint.iter().flatten().copied().collect();
    let cells = multinomial(rng, n, &flat);
    let counts = [[cells[0], cells[1]], [cells[2], cells[3]]];
    let context_totals = [counts[0][0] + counts[0][1], counts[1][0] + counts[1][1]];
    if let Some(i) = context_totals.iter().position(|&c| c == 0) {
        return Err(Error::EmptyContext(i));
    }
    let m = if scenario.pass_through {
        counts
    } else {
        let mut m = [[0u64; 2]; 2];
        for i in 0..2 {
            let row = multinomial(rng, context_totals[i], &scenario.disturbed.rows()[i]);
            m[i] = [row[0], row[1]];
        }
        m
    };
    Ok(CountTable {
        n: counts,
        m,
        total: n,
        context_totals,
    })
}

/// One draw of the count table for `scenario.n` elements from stream 0.
pub fn simulate_counts(scenario: &EnsembleScenario) -> Result<CountTable> {
    scenario.validate()?;
    sample_counts(scenario, scenario.n, &mut rng_for(scenario.seed, 0))
}

/// Empirical `δ_j^(N)` and `λ_j^(N)` from a count table.
pub fn empirical_profile(counts: &CountTable, tol: &Tolerances) -> Result<InterferenceProfile> {
    let total = counts.total as f64;
    let mut deltas = Vec::with_capacity(2);
    let mut lambdas = Vec::with_capacity(2);
    for j in 0..2 {
        let (m1, m2) = (counts.m[0][j], counts.m[1][j]);
        if m1 == 0 || m2 == 0 {
            return Err(Error::UndefinedCoefficient(j));
        }
        let diff = (counts.n[0][j] as f64 - m1 as f64) + (counts.n[1][j] as f64 - m2 as f64);
        deltas.push(diff / total);
        lambdas.push(diff / (2.0 * ((m1 as f64) * (m2 as f64)).sqrt()));
    }
    Ok(InterferenceProfile::assemble(lambdas, deltas, tol))
}

/// One CSV row of a convergence trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    #[serde(rename = "N")]
    pub n: u64,
    pub replication: u32,
    pub p1: f64,
    pub p11: f64,
    pub p12: f64,
    pub p21: f64,
    pub p22: f64,
    pub q1: f64,
    pub q2: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub lambda1: Option<f64>,
    pub lambda2: Option<f64>,
    pub valid: bool,
}

impl TraceRow {
    fn from_counts(replication: u32, c: &CountTable) -> Self {
        let total = c.total as f64;
        let cond = |i: usize, j: usize| c.m[i][j] as f64 / c.context_totals[i] as f64;
        let prof = empirical_profile(c, &Tolerances::default());
        let deltas: [f64; 2] = std::array::from_fn(|j| {
            ((c.n[0][j] as f64 - c.m[0][j] as f64) + (c.n[1][j] as f64 - c.m[1][j] as f64)) / total
        });
        let (lambda1, lambda2) = match &prof {
            Ok(p) => (Some(p.lambdas[0]), Some(p.lambdas[1])),
            Err(_) => (None, None),
        };
        Self {
            n: c.total,
            replication,
            p1: c.context_totals[0] as f64 / total,
            p11: cond(0, 0),
            p12: cond(0, 1),
            p21: cond(1, 0),
            p22: cond(1, 1),
            q1: (c.n[0][0] + c.n[1][0]) as f64 / total,
            q2: (c.n[0][1] + c.n[1][1]) as f64 / total,
            delta1: deltas[0],
            delta2: deltas[1],
            lambda1,
            lambda2,
            valid: prof.is_ok(),
        }
    }
}

/// Replication statistics at one ensemble size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub n: u64,
    pub valid_replications: u32,
    pub lambda_mean: [f64; 2],
    pub lambda_stddev: [f64; 2],
    pub delta_mean: [f64; 2],
    pub delta_stddev: [f64; 2],
    /// Mean over replications of `max_ij |Δ_ij| / N`.
    pub max_deviation_rate_mean: f64,
}

/// Empirical quantities for every `(N, replication)` plus per-`N` statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTrace {
    pub schedule: Vec<u64>,
    pub rows: Vec<TraceRow>,
    pub points: Vec<TracePoint>,
    /// Soft check: λ standard deviations shrink roughly like `1/√N` along the schedule.
    pub shrinkage_consistent: bool,
}

impl ConvergenceTrace {
    pub fn last(&self) -> Option<&TracePoint> {
        self.points.last()
    }
}

/// Sum by recursive halving; the fixed split order keeps results bitwise stable.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    match v.len() {
        0 => 0.0,
        1 => v[0],
        n => pairwise_sum(&v[..n / 2]) + pairwise_sum(&v[n / 2..]),
    }
}

/// Mean and sample standard deviation (zero for fewer than two values).
pub fn mean_stddev(v: &[f64]) -> (f64, f64) {
    if v.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = v.len() as f64;
    let mean = pairwise_sum(v) / n;
    if v.len() < 2 {
        return (mean, 0.0);
    }
    let sq: Vec<f64> = v.iter().map(|x| (x - mean) * (x - mean)).collect();
    (mean, (pairwise_sum(&sq) / (n - 1.0)).sqrt())
}

fn validate_schedule(schedule: &[u64]) -> Result<()> {
    if schedule.is_empty() {
        return Err(Error::InvalidSchedule("schedule is empty".into()));
    }
    if schedule[0] == 0 {
        return Err(Error::InvalidSchedule(
            "ensemble sizes must be positive".into(),
        ));
    }
    if schedule.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidSchedule(
            "ensemble sizes must be strictly increasing".into(),
        ));
    }
    Ok(())
}

fn summarize(n: u64, counts: &[CountTable], rows: &[TraceRow]) -> TracePoint {
    let valid: Vec<&TraceRow> = rows.iter().filter(|r| r.valid).collect();
    let stat = |f: &dyn Fn(&TraceRow) -> f64, only_valid: bool| {
        let v: Vec<f64> = if only_valid {
            valid.iter().map(|r| f(r)).collect()
        } else {
            rows.iter().map(f).collect()
        };
        mean_stddev(&v)
    };
    let l1 = stat(&|r| r.lambda1.unwrap_or(f64::NAN), true);
    let l2 = stat(&|r| r.lambda2.unwrap_or(f64::NAN), true);
    let d1 = stat(&|r| r.delta1, false);
    let d2 = stat(&|r| r.delta2, false);
    let dev: Vec<f64> = counts
        .iter()
        .map(CountTable::max_abs_deviation_rate)
        .collect();
    TracePoint {
        n,
        valid_replications: valid.len() as u32,
        lambda_mean: [l1.0, l2.0],
        lambda_stddev: [l1.1, l2.1],
        delta_mean: [d1.0, d2.0],
        delta_stddev: [d1.1, d2.1],
        max_deviation_rate_mean: pairwise_sum(&dev) / dev.len() as f64,
    }
}

/// Stddev at the larger size may exceed the `1/√N` prediction by at most this factor.
const SHRINKAGE_SLACK: f64 = 2.0;

fn shrinkage_consistent(points: &[TracePoint]) -> bool {
    points.windows(2).all(|w| {
        let ratio = (w[0].n as f64 / w[1].n as f64).sqrt();
        (0..2).all(|j| {
            let (a, b) = (w[0].lambda_stddev[j], w[1].lambda_stddev[j]);
            !(a.is_finite() && b.is_finite()) || b <= SHRINKAGE_SLACK * ratio * a + 1e-15
        })
    })
}

/// Runs `scenario.replications` independent count draws at each ensemble size.
pub fn convergence_study(
    scenario: &EnsembleScenario,
    schedule: &[u64],
) -> Result<ConvergenceTrace> {
    scenario.validate()?;
    validate_schedule(schedule)?;
    let mut rows = Vec::with_capacity(schedule.len() * scenario.replications as usize);
    let mut points = Vec::with_capacity(schedule.len());
    for (s, &n) in schedule.iter().enumerate() {
        let counts: Vec<CountTable> = (0..scenario.replications)
            .into_par_iter()
            .map(|r| sample_counts(scenario, n, &mut rng_for(scenario.seed, stream_id(s, r))))
            .collect::<Result<_>>()?;
        let point_rows: Vec<TraceRow> = counts
            .iter()
            .enumerate()
            .map(|(r, c)| TraceRow::from_counts(r as u32, c))
            .collect();
        points.push(summarize(n, &counts, &point_rows));
        rows.extend(point_rows);
    }
    let shrinkage_consistent = shrinkage_consistent(&points);
    Ok(ConvergenceTrace {
        schedule: schedule.to_vec(),
        rows,
        points,
        shrinkage_consistent,
    })
}

/// Scenario whose context deviations cancel: row 1 is shifted by `(shift, −shift)`
/// and row 2 by `(−shift p_1/p_2, shift p_1/p_2)`, so `λ = 0` while `Δ_ij / N` stays finite.
///
/// The result uses `N = 10⁶`, seed 0 and 32 replications; adjust the public
/// fields as needed. `shift = 0` gives the pass-through scenario.
pub fn make_decoherence_scenario(
    p: &ContextDistribution,
    base: &TransitionMatrix,
    shift: f64,
) -> Result<EnsembleScenario> {
    if p.dim() != 2 || base.dim() != 2 {
        return Err(Error::DimensionMismatch(
            "decoherence scenarios are dichotomic".into(),
        ));
    }
    let pr = p.probs();
    let joint = std::array::from_fn(|i| std::array::from_fn(|j| pr[i] * base.get(i, j)));
    if shift == 0.0 {
        return EnsembleScenario::pass_through(joint, 1_000_000, 0, 32);
    }
    let offset2 = shift * pr[0] / pr[1];
    let rows = vec![
        vec![base.get(0, 0) + shift, base.get(0, 1) - shift],
        vec![base.get(1, 0) - offset2, base.get(1, 1) + offset2],
    ];
    if rows.iter().flatten().any(|v| !(*v > 0.0 && *v < 1.0)) {
        return Err(Error::InvalidShift(shift));
    }
    EnsembleScenario::new(joint, TransitionMatrix::new(rows)?, 1_000_000, 0, 32)
}
