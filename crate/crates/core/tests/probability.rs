//! Properties of the interference calculus.

mod common;

use std::f64::consts::PI;

use common::*;
use contextprob::probability::{
    bayes, classify, coupling_coefficient, forward_transform, interference_coefficients,
    lambda_admissible_interval, multi_valued_decomposition, phase_from_lambda,
    reconstruct_multi_valued, PhaseKind,
};
use contextprob::{Behaviour, Error, InterferenceProfile, Sign, Tolerances, TransitionMatrix};
use proptest::prelude::*;

fn tol() -> Tolerances {
    Tolerances::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn round_trip(p in dichotomy(), pm in stochastic2(), q in dichotomy()) {
        let (p, pm, q) = (ctx(&p), mat(&pm), out(&q));
        let prof = interference_coefficients(&p, &pm, &q, &tol()).unwrap();
        let back = forward_transform(&p, &pm, &prof, &tol()).unwrap();
        for j in 0..2 {
            prop_assert!((back.probs()[j] - q.probs()[j]).abs() <= 1e-12);
        }
    }

    #[test]
    fn coefficients_match_the_direct_formula(p in dichotomy(), pm in stochastic2(), q in dichotomy()) {
        let prof = interference_coefficients(&ctx(&p), &mat(&pm), &out(&q), &tol()).unwrap();
        for j in 0..2 {
            let delta = q[j] - (p[0] * pm[0][j] + p[1] * pm[1][j]);
            let lambda = delta / (2.0 * (p[0] * pm[0][j] * p[1] * pm[1][j]).sqrt());
            prop_assert!((prof.deltas[j] - delta).abs() <= 1e-15);
            prop_assert!((prof.lambdas[j] - lambda).abs() <= 1e-12 * lambda.abs().max(1.0));
        }
    }

    #[test]
    fn orthogonal_coefficients_are_normalized(p in dichotomy(), pm in stochastic2(), l2 in -3f64..3.0) {
        let (p, pm) = (ctx(&p), mat(&pm));
        let k = coupling_coefficient(&pm).unwrap();
        let prof = InterferenceProfile::dichotomic(&p, &pm, [-k * l2, l2], &tol()).unwrap();
        match forward_transform(&p, &pm, &prof, &tol()) {
            Ok(q) => prop_assert!((q.probs()[0] + q.probs()[1] - 1.0).abs() <= 1e-12),
            Err(Error::NonphysicalResult(raw)) => {
                prop_assert!((raw[0] + raw[1] - 1.0).abs() <= 1e-12);
                prop_assert!(!lambda_admissible_interval(&p, &pm).unwrap().contains(-k * l2));
            }
            Err(e) => prop_assert!(false, "unexpected {e}"),
        }
    }

    #[test]
    fn admissible_interval_is_exact(p in dichotomy(), pm in stochastic2(), t in -0.2f64..1.2) {
        let (p, pm) = (ctx(&p), mat(&pm));
        let k = coupling_coefficient(&pm).unwrap();
        let iv = lambda_admissible_interval(&p, &pm).unwrap();
        let l1 = iv.lo + t * (iv.hi - iv.lo);
        let prof = InterferenceProfile::dichotomic(&p, &pm, [l1, -l1 / k], &tol()).unwrap();
        let inside = (0.0..=1.0).contains(&t);
        let margin = 1e-9 * (iv.hi - iv.lo);
        if inside {
            prop_assert!(forward_transform(&p, &pm, &prof, &tol()).is_ok());
        } else if (l1 - iv.lo).abs() > margin && (l1 - iv.hi).abs() > margin {
            let rejected = matches!(
                forward_transform(&p, &pm, &prof, &tol()),
                Err(Error::NonphysicalResult(_))
            );
            prop_assert!(rejected);
        }
    }

    #[test]
    fn non_orthogonal_coefficients_are_rejected(p in dichotomy(), pm in stochastic2(), l in -1f64..1.0, e in 1e-6f64..1.0) {
        let (p, pm) = (ctx(&p), mat(&pm));
        let k = coupling_coefficient(&pm).unwrap();
        let prof = InterferenceProfile::dichotomic(&p, &pm, [-k * l + e, l], &tol()).unwrap();
        let rejected = matches!(
            forward_transform(&p, &pm, &prof, &tol()),
            Err(Error::OrthogonalityViolated { .. })
        );
        prop_assert!(rejected);
    }

    #[test]
    fn classification_is_a_partition(l in prop::collection::vec(-3f64..3.0, 1..6)) {
        let t = tol();
        let zero = l.iter().all(|x| x.abs() <= t.lambda_zero);
        let trig = l.iter().all(|x| x.abs() <= 1.0 + t.lambda_boundary);
        let hyp = l.iter().all(|x| x.abs() > 1.0 + t.lambda_boundary);
        let expected = if zero {
            Behaviour::Classical
        } else if trig {
            Behaviour::Trigonometric
        } else if hyp {
            Behaviour::Hyperbolic
        } else {
            Behaviour::HyperTrigonometric
        };
        prop_assert_eq!(classify(&l, &t), expected);
    }

    #[test]
    fn double_stochastic_symmetry(p in dichotomy(), pm in double_stochastic2(), q in dichotomy()) {
        let prof = interference_coefficients(&ctx(&p), &mat(&pm), &out(&q), &tol()).unwrap();
        let (a, b) = (prof.lambdas[0].abs(), prof.lambdas[1].abs());
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0), "{a} vs {b}");
        prop_assert!((coupling_coefficient(&mat(&pm)).unwrap() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn multi_valued_consistency(
        (p, pm, q) in (2usize..=6).prop_flat_map(|m| (prob_vec(m), stochastic(m), prob_vec(m)))
    ) {
        let m = p.len();
        let cp = ctx(&p);
        let tm = TransitionMatrix::new(pm.clone()).unwrap();
        let prof = multi_valued_decomposition(&cp, &tm, &out(&q), &tol()).unwrap();
        prop_assert_eq!(prof.lambdas.len(), m * m * (m - 1) / 2);
        for i in 0..m {
            // brute-force oracle straight from the definition
            let mut sum = 0.0;
            for k in 0..m {
                for l in (k + 1)..m {
                    sum += (p[k] * (q[i] - pm[k][i]) + p[l] * (q[i] - pm[l][i])) / (m - 1) as f64;
                }
            }
            let from_profile: f64 = prof
                .terms
                .iter()
                .zip(&prof.deltas)
                .filter(|(t, _)| t.outcome == i)
                .map(|(_, d)| d)
                .sum();
            let classical: f64 = (0..m).map(|k| p[k] * pm[k][i]).sum();
            prop_assert!((from_profile - (q[i] - classical)).abs() <= 1e-12);
            prop_assert!((sum - (q[i] - classical)).abs() <= 1e-12);
        }
        let rebuilt = reconstruct_multi_valued(&cp, &tm, &prof);
        for i in 0..m {
            prop_assert!((rebuilt[i] - q[i]).abs() <= 1e-12);
        }
    }

    #[test]
    fn cos_phase_round_trip(theta in 1e-5f64..(PI - 1e-5)) {
        let ph = phase_from_lambda(theta.cos(), 1e-9);
        prop_assert_eq!(ph.kind, PhaseKind::Cos);
        // acos amplifies the rounding of cos θ by 1/sin θ
        let tol = 1e-10f64.max(4.0 * f64::EPSILON / theta.sin());
        prop_assert!((ph.theta - theta).abs() <= tol, "{} vs {theta}", ph.theta);
    }

    #[test]
    fn cosh_phase_round_trip(theta in 1e-3f64..30.0, neg in any::<bool>()) {
        let sign = if neg { Sign::Minus } else { Sign::Plus };
        let lambda = sign.value() * theta.cosh();
        prop_assume!(lambda.abs() > 1.0 + 1e-9);
        let ph = phase_from_lambda(lambda, 1e-9);
        prop_assert_eq!(ph.kind, PhaseKind::Cosh);
        prop_assert_eq!(ph.sign, sign);
        let tol = 1e-10f64.max(4.0 * f64::EPSILON * theta.cosh() / theta.sinh());
        prop_assert!((ph.theta - theta).abs() <= tol, "{} vs {theta}", ph.theta);
    }

    #[test]
    fn phase_reproduces_lambda(lambda in -50f64..50.0) {
        let ph = phase_from_lambda(lambda, 1e-9);
        prop_assert!((ph.lambda() - lambda).abs() <= 1e-12 * lambda.abs().max(1.0));
    }
}

#[test]
fn phase_boundary_is_trigonometric() {
    let t = tol();
    for l in [1.0, -1.0, 1.0 + 5e-10] {
        assert_eq!(classify(&[l, 0.5], &t), Behaviour::Trigonometric);
        assert_eq!(phase_from_lambda(l, t.lambda_boundary).kind, PhaseKind::Cos);
    }
    assert_eq!(
        classify(&[1.0 + 1e-8, 0.5], &t),
        Behaviour::HyperTrigonometric
    );
    assert_eq!(phase_from_lambda(1.0, 1e-9).theta, 0.0);
    assert_eq!(phase_from_lambda(-1.0, 1e-9).theta, PI);
}

#[test]
fn classical_q_is_classical() {
    let p = ctx(&[0.3, 0.7]);
    let pm = mat(&[[0.6, 0.4], [0.2, 0.8]]);
    let q = out(&bayes(&p, &pm));
    let prof = interference_coefficients(&p, &pm, &q, &tol()).unwrap();
    assert_eq!(prof.behaviour, Behaviour::Classical);
}

#[test]
fn zero_probabilities_are_degenerate() {
    assert!(matches!(
        contextprob::ContextDistribution::new(vec![0.0, 1.0]),
        Err(Error::DegenerateProbability(_))
    ));
    assert!(matches!(
        TransitionMatrix::new(vec![vec![1.0, 0.0], vec![0.5, 0.5]]),
        Err(Error::DegenerateProbability(_))
    ));
}
