//! Generators shared by the integration tests.
#![allow(dead_code)]

use contextprob::{ContextDistribution, OutcomeDistribution, TransitionMatrix};
use proptest::prelude::*;
use rand::Rng;

/// Normalizes positive weights into a probability vector.
pub fn normalize(w: &[f64]) -> Vec<f64> {
    let s: f64 = w.iter().sum();
    w.iter().map(|x| x / s).collect()
}

pub fn ctx(v: &[f64]) -> ContextDistribution {
    ContextDistribution::new(v.to_vec()).unwrap()
}

pub fn out(v: &[f64]) -> OutcomeDistribution {
    OutcomeDistribution::new(v.to_vec()).unwrap()
}

pub fn mat(rows: &[[f64; 2]; 2]) -> TransitionMatrix {
    TransitionMatrix::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
}

/// Probability vector of length `m` with entries bounded away from zero.
pub fn prob_vec(m: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.02f64..1.0, m).prop_map(|w| normalize(&w))
}

/// Row-stochastic `m × m` matrix with strictly positive entries.
pub fn stochastic(m: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prob_vec(m), m)
}

/// 2×2 stochastic matrix `[[a, 1 − a], [b, 1 − b]]`.
pub fn stochastic2() -> impl Strategy<Value = [[f64; 2]; 2]> {
    (0.02f64..0.98, 0.02f64..0.98).prop_map(|(a, b)| [[a, 1.0 - a], [b, 1.0 - b]])
}

/// 2×2 double stochastic matrix `[[t, 1 − t], [1 − t, t]]`.
pub fn double_stochastic2() -> impl Strategy<Value = [[f64; 2]; 2]> {
    (0.02f64..0.98).prop_map(|t| [[t, 1.0 - t], [1.0 - t, t]])
}

pub fn dichotomy() -> impl Strategy<Value = [f64; 2]> {
    (0.02f64..0.98).prop_map(|a| [a, 1.0 - a])
}

pub fn rand_dichotomy<R: Rng>(rng: &mut R) -> [f64; 2] {
    let a = rng.random_range(0.02..0.98);
    [a, 1.0 - a]
}

pub fn rand_stochastic2<R: Rng>(rng: &mut R) -> [[f64; 2]; 2] {
    [rand_dichotomy(rng), rand_dichotomy(rng)]
}

pub fn rand_double_stochastic2<R: Rng>(rng: &mut R) -> [[f64; 2]; 2] {
    let t: f64 = rng.random_range(0.02..0.98);
    [[t, 1.0 - t], [1.0 - t, t]]
}

pub fn rand_prob_vec<R: Rng>(rng: &mut R, m: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..m).map(|_| rng.random_range(0.02..1.0)).collect();
    normalize(&w)
}
