//! End-to-end recomputation of the three worked examples with expected values.

use std::f64::consts::{FRAC_PI_3, PI};

use contextprob::complex_rep::{
    amplitudes_from_context, born, compose, is_unitary, matrix_from_probabilities,
    normalization_defect,
};
use contextprob::hyperbolic_rep::{
    admissible_h_phase_bound, g_amplitudes_from_context, g_born, g_compose,
    g_matrix_from_probabilities,
};
use contextprob::probability::{
    coupling_coefficient, forward_transform, interference_coefficients, lambda_admissible_interval,
    Phase,
};
use contextprob::{
    ContextDistribution, Error, InterferenceProfile, OutcomeDistribution, Result, Sign, Tolerances,
    TransitionMatrix,
};
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Numeric checks pass at this absolute tolerance.
pub const GOLDEN_TOL: f64 = 1e-9;

/// Expected values, kept separate from the computation so a corrupted constant is detectable.
#[derive(Debug, Clone, PartialEq)]
pub struct Expected {
    pub trig_k: f64,
    pub trig_q: [f64; 2],
    pub trig_theta: [f64; 2],
    pub trig_behaviour: &'static str,
    pub bound_e: f64,
    pub bound_theta_max: f64,
    pub bound_q_at_max: [f64; 2],
    pub mixed_k: f64,
    pub mixed_lambda: [f64; 2],
    pub mixed_q: [f64; 2],
    pub mixed_interval: [f64; 2],
    pub mixed_cosh_phase: f64,
    pub mixed_cos_phase: f64,
    pub mixed_behaviour: &'static str,
}

impl Default for Expected {
    fn default() -> Self {
        let sqrt3 = 3f64.sqrt();
        Self {
            trig_k: 2f64.sqrt(),
            trig_q: [
                5.0 / 12.0 + (3.0 * PI / 4.0).cos() / 6f64.sqrt(),
                7.0 / 12.0 + FRAC_PI_3.cos() / sqrt3,
            ],
            trig_theta: [3.0 * PI / 4.0, FRAC_PI_3],
            trig_behaviour: "T",
            bound_e: 2.0 / sqrt3,
            bound_theta_max: (2.0 / sqrt3).acosh(),
            bound_q_at_max: [0.0, 1.0],
            mixed_k: 0.25,
            mixed_lambda: [-0.5, 2.0],
            mixed_q: [0.4, 0.6],
            mixed_interval: [-1.0, 0.25],
            mixed_cosh_phase: (2.0 + sqrt3).ln(),
            mixed_cos_phase: 2.0 * PI / 3.0,
            mixed_behaviour: "HT",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenCheck {
    pub example: String,
    pub quantity: String,
    pub expected: Value,
    pub computed: Value,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenReport {
    pub schema_version: u32,
    pub tolerance: f64,
    pub checks: Vec<GoldenCheck>,
    pub all_pass: bool,
}

#[derive(Default)]
struct Collector {
    checks: Vec<GoldenCheck>,
}

impl Collector {
    fn num(&mut self, example: &str, quantity: &str, expected: f64, computed: f64) {
        self.checks.push(GoldenCheck {
            example: example.into(),
            quantity: quantity.into(),
            expected: Value::from(expected),
            computed: Value::from(computed),
            pass: (expected - computed).abs() <= GOLDEN_TOL,
        });
    }

    fn label(&mut self, example: &str, quantity: &str, expected: &str, computed: &str) {
        self.checks.push(GoldenCheck {
            example: example.into(),
            quantity: quantity.into(),
            expected: Value::from(expected),
            computed: Value::from(computed),
            pass: expected == computed,
        });
    }

    fn flag(&mut self, example: &str, quantity: &str, expected: bool, computed: bool) {
        self.checks.push(GoldenCheck {
            example: example.into(),
            quantity: quantity.into(),
            expected: Value::from(expected),
            computed: Value::from(computed),
            pass: expected == computed,
        });
    }
}

fn ctx(v: [f64; 2]) -> Result<ContextDistribution> {
    ContextDistribution::new(v.to_vec())
}

fn mat(r: [[f64; 2]; 2]) -> Result<TransitionMatrix> {
    TransitionMatrix::new(r.iter().map(|r| r.to_vec()).collect())
}

fn trigonometric(c: &mut Collector, want: &Expected, tol: &Tolerances) -> Result<()> {
    const EX: &str = "trigonometric";
    let p = ctx([0.5, 0.5])?;
    let pm = mat([[0.5, 0.5], [1.0 / 3.0, 2.0 / 3.0]])?;
    let (t1, t2) = (3.0 * PI / 4.0, FRAC_PI_3);
    c.num(EX, "K", want.trig_k, coupling_coefficient(&pm)?);

    let prof = InterferenceProfile::from_phases(&p, &pm, [Phase::cos(t1), Phase::cos(t2)], tol)?;
    let q = forward_transform(&p, &pm, &prof, tol)?;
    c.num(EX, "q1", want.trig_q[0], q.probs()[0]);
    c.num(EX, "q2", want.trig_q[1], q.probs()[1]);

    let classified = interference_coefficients(&p, &pm, &q, tol)?;
    c.label(
        EX,
        "behaviour",
        want.trig_behaviour,
        classified.behaviour.code(),
    );
    c.num(EX, "theta1", want.trig_theta[0], classified.phases[0].theta);
    c.num(EX, "theta2", want.trig_theta[1], classified.phases[1].theta);

    let alpha = amplitudes_from_context(&p, [0.0, 0.0])?;
    let u = matrix_from_probabilities(&pm, [[t1, t2], [0.0, 0.0]])?;
    let born_q = born(&compose(&alpha, &u))?;
    c.num(EX, "complex born q1", want.trig_q[0], born_q.probs()[0]);
    c.num(EX, "complex born q2", want.trig_q[1], born_q.probs()[1]);
    c.num(
        EX,
        "normalization defect",
        0.0,
        normalization_defect(&alpha, &u),
    );
    c.flag(EX, "unitary", false, is_unitary(&u, 1e-10));
    Ok(())
}

fn hyperbolic_bound(c: &mut Collector, want: &Expected, tol: &Tolerances) -> Result<()> {
    const EX: &str = "hyperbolic-bound";
    let p = ctx([0.25, 0.75])?;
    let pm = mat([[0.5, 0.5], [0.5, 0.5]])?;
    let e = admissible_h_phase_bound(0.25, 0.5)?;
    c.num(EX, "e(1/4)", want.bound_e, e);
    c.num(
        EX,
        "lambda1 upper bound",
        want.bound_e,
        lambda_admissible_interval(&p, &pm)?.hi,
    );
    let theta_max = e.acosh();
    c.num(EX, "theta_max", want.bound_theta_max, theta_max);

    let at_max = InterferenceProfile::from_phases(
        &p,
        &pm,
        [
            Phase::cosh(Sign::Minus, theta_max),
            Phase::cosh(Sign::Plus, theta_max),
        ],
        tol,
    )?;
    let q = forward_transform(&p, &pm, &at_max, tol)?;
    c.num(EX, "q1 at theta_max", want.bound_q_at_max[0], q.probs()[0]);
    c.num(EX, "q2 at theta_max", want.bound_q_at_max[1], q.probs()[1]);

    let beyond = InterferenceProfile::from_phases(
        &p,
        &pm,
        [
            Phase::cosh(Sign::Minus, theta_max + 0.01),
            Phase::cosh(Sign::Plus, theta_max + 0.01),
        ],
        tol,
    )?;
    let rejected = matches!(
        forward_transform(&p, &pm, &beyond, tol),
        Err(Error::NonphysicalResult(_))
    );
    c.flag(EX, "theta > theta_max rejected", true, rejected);

    let u = g_matrix_from_probabilities(
        &pm,
        [[Sign::Plus, Sign::Plus], [Sign::Plus, Sign::Minus]],
        [[0.0; 2]; 2],
    )?;
    let alpha = g_amplitudes_from_context(&p, [Sign::Plus; 2], [0.0, theta_max])?;
    let gq = g_born(&g_compose(&alpha, &u))?;
    c.num(
        EX,
        "G-born q1 at theta_max",
        want.bound_q_at_max[1],
        gq.probs()[0],
    );
    c.num(
        EX,
        "G-born q2 at theta_max",
        want.bound_q_at_max[0],
        gq.probs()[1],
    );
    Ok(())
}

fn mixed(c: &mut Collector, want: &Expected, tol: &Tolerances) -> Result<()> {
    const EX: &str = "mixed";
    let p = ctx([0.5, 0.5])?;
    let pm = mat([[0.8, 0.2], [0.8, 0.2]])?;
    c.num(EX, "K", want.mixed_k, coupling_coefficient(&pm)?);
    let iv = lambda_admissible_interval(&p, &pm)?;
    c.num(EX, "lambda1 lower bound", want.mixed_interval[0], iv.lo);
    c.num(EX, "lambda1 upper bound", want.mixed_interval[1], iv.hi);

    let q = OutcomeDistribution::new(vec![0.4, 0.6])?;
    let prof = interference_coefficients(&p, &pm, &q, tol)?;
    c.num(EX, "lambda1", want.mixed_lambda[0], prof.lambdas[0]);
    c.num(EX, "lambda2", want.mixed_lambda[1], prof.lambdas[1]);
    c.label(EX, "behaviour", want.mixed_behaviour, prof.behaviour.code());
    c.num(EX, "cos phase", want.mixed_cos_phase, prof.phases[0].theta);
    c.num(
        EX,
        "cosh phase",
        want.mixed_cosh_phase,
        prof.phases[1].theta,
    );

    let back = forward_transform(&p, &pm, &prof, tol)?;
    c.num(EX, "q1", want.mixed_q[0], back.probs()[0]);
    c.num(EX, "q2", want.mixed_q[1], back.probs()[1]);
    Ok(())
}

/// Recomputes every example against `want`.
pub fn run_golden(want: &Expected) -> Result<GoldenReport> {
    let tol = Tolerances::default();
    let mut c = Collector::default();
    trigonometric(&mut c, want, &tol)?;
    hyperbolic_bound(&mut c, want, &tol)?;
    mixed(&mut c, want, &tol)?;
    let all_pass = c.checks.iter().all(|k| k.pass);
    Ok(GoldenReport {
        schema_version: crate::schema::SCHEMA_VERSION,
        tolerance: GOLDEN_TOL,
        checks: c.checks,
        all_pass,
    })
}
