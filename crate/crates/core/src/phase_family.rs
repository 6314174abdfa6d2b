//! One-parameter solution families for the phase constraints of the
//! complex and hyperbolic representations.
//!
//! Phase differences follow the row-difference convention
//! `γ_1 = γ_11 − γ_21`, `γ_2 = γ_12 − γ_22` and `η = ξ_1 − ξ_2`.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Maps an angle to `(−π, π]`.
pub fn wrap_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// A set of admissible `(γ_1, γ_2)` described by the free parameter `γ_2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum PhaseFamily {
    /// `γ_1 − γ_2 = offset`.
    Difference { offset: f64 },
    /// `γ_1 + γ_2 = offset`.
    Sum { offset: f64 },
    /// `cos(η + γ_1) = −K cos(η + γ_2)`.
    Trigonometric { k: f64, eta: f64 },
    /// `cosh(η + γ_1) = K cosh(η + γ_2)`.
    Hyperbolic { k: f64, eta: f64 },
}

impl PhaseFamily {
    /// Angular families wrap their output to `(−π, π]`; hyperbolic phases are not periodic.
    pub fn gamma1_for(&self, gamma2: f64) -> Result<Vec<f64>> {
        match *self {
            PhaseFamily::Difference { offset } => Ok(vec![wrap_angle(gamma2 + offset)]),
            PhaseFamily::Sum { offset } => Ok(vec![wrap_angle(offset - gamma2)]),
            PhaseFamily::Trigonometric { k, eta } => {
                let c = -k * (eta + gamma2).cos();
                if c.abs() > 1.0 {
                    return Err(Error::NoSolution(format!(
                        "|K cos(eta + gamma_2)| = {} > 1",
                        c.abs()
                    )));
                }
                let a = c.acos();
                Ok(dedup(vec![wrap_angle(a - eta), wrap_angle(-a - eta)]))
            }
            PhaseFamily::Hyperbolic { k, eta } => {
                let c = k * (eta + gamma2).cosh();
                if c < 1.0 {
                    return Err(Error::NoSolution(format!(
                        "K cosh(eta + gamma_2) = {c} < 1"
                    )));
                }
                let a = c.acosh();
                Ok(dedup(vec![a - eta, -a - eta]))
            }
        }
    }
}

fn dedup(mut v: Vec<f64>) -> Vec<f64> {
    v.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrapping() {
        assert_eq!(wrap_angle(PI), PI);
        assert!((wrap_angle(-PI) - PI).abs() < 1e-15);
        assert!((wrap_angle(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
        assert_eq!(wrap_angle(0.0), 0.0);
    }

    #[test]
    fn families() {
        let d = PhaseFamily::Difference { offset: PI };
        assert!((d.gamma1_for(0.5).unwrap()[0] - wrap_angle(0.5 + PI)).abs() < 1e-15);
        let s = PhaseFamily::Sum { offset: PI / 2.0 };
        assert!((s.gamma1_for(PI / 4.0).unwrap()[0] - PI / 4.0).abs() < 1e-15);
        let t = PhaseFamily::Trigonometric { k: 1.0, eta: 0.0 };
        assert_eq!(t.gamma1_for(PI / 2.0).unwrap().len(), 2);
        let h = PhaseFamily::Hyperbolic { k: 1.0, eta: 0.0 };
        assert_eq!(h.gamma1_for(0.0).unwrap(), vec![0.0]);
    }
}
