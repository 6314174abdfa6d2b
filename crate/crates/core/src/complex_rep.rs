//! Complex linear-space representation of trigonometric transformations.
//!
//! The parent state is `φ = α_1 φ_1 + α_2 φ_2` with `α_i = √p_i e^{iξ_i}` and the
//! context basis is expanded in the outcome basis through `U = (β_ij)`,
//! `β_ij = √P_ij e^{iγ_ij}`. Composition gives `β_j = α_1 β_1j + α_2 β_2j` and
//! the outcome probabilities are `|β_j|²`.
//!
//! `U` only has to be invertible with unit-norm rows. Normalization of the
//! composed state then reduces to
//!
//! ```text
//! cos(η + γ_1) √(P_11 P_21) + cos(η + γ_2) √(P_12 P_22) = 0
//! ```
//!
//! which the unitary matrices solve for every `η`, and the non-unitary
//! "memory" family `2η + γ_1 + γ_2 = π` solves only for one `η`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase_family::{wrap_angle, PhaseFamily};
use crate::probability::{
    coupling_coefficient, ContextDistribution, OutcomeDistribution, Tolerances, TransitionMatrix,
};

/// Tolerance for unit-norm rows of a transition amplitude matrix.
pub const ROW_NORM_TOL: f64 = 1e-12;
/// Tolerance on `|β_1|² + |β_2|² = 1` in [`born`].
pub const DECOMPOSABLE_TOL: f64 = 1e-9;

pub type ComplexAmplitude = Complex64;

/// JSON shape of a complex number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReIm {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ReIm {
    fn from(c: Complex64) -> Self {
        Self { re: c.re, im: c.im }
    }
}

impl From<ReIm> for Complex64 {
    fn from(c: ReIm) -> Self {
        Complex64::new(c.re, c.im)
    }
}

/// Two-component amplitude vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeVector(pub [ComplexAmplitude; 2]);

impl AmplitudeVector {
    pub fn new(c1: ComplexAmplitude, c2: ComplexAmplitude) -> Self {
        Self([c1, c2])
    }

    pub fn sq_norms(&self) -> [f64; 2] {
        [self.0[0].norm_sqr(), self.0[1].norm_sqr()]
    }
}

impl Serialize for AmplitudeVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.map(ReIm::from).serialize(s)
    }
}

impl<'de> Deserialize<'de> for AmplitudeVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(Self(<[ReIm; 2]>::deserialize(d)?.map(Complex64::from)))
    }
}

/// `z_1 w̄_1 + z_2 w̄_2`.
pub fn inner(z: &[ComplexAmplitude; 2], w: &[ComplexAmplitude; 2]) -> ComplexAmplitude {
    z[0] * w[0].conj() + z[1] * w[1].conj()
}

/// Basis-transition matrix `U = (β_ij)`: invertible, rows of unit squared norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionAmplitudeMatrix([[ComplexAmplitude; 2]; 2]);

impl TransitionAmplitudeMatrix {
    pub fn new(entries: [[ComplexAmplitude; 2]; 2]) -> Result<Self> {
        for (i, row) in entries.iter().enumerate() {
            let n = row[0].norm_sqr() + row[1].norm_sqr();
            if (n - 1.0).abs() > ROW_NORM_TOL {
                return Err(Error::InvalidDistribution(format!(
                    "row {i} of the amplitude matrix has squared norm {n}"
                )));
            }
        }
        let det = entries[0][0] * entries[1][1] - entries[0][1] * entries[1][0];
        if det.norm() <= 1e-300 {
            return Err(Error::Singular);
        }
        Ok(Self(entries))
    }

    pub fn entries(&self) -> &[[ComplexAmplitude; 2]; 2] {
        &self.0
    }

    pub fn row(&self, i: usize) -> &[ComplexAmplitude; 2] {
        &self.0[i]
    }

    /// `⟨row 1, row 2⟩ = β_11 β̄_21 + β_12 β̄_22`.
    pub fn row_overlap(&self) -> ComplexAmplitude {
        inner(&self.0[0], &self.0[1])
    }
}

impl Serialize for TransitionAmplitudeMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.map(|r| r.map(ReIm::from)).serialize(s)
    }
}

impl<'de> Deserialize<'de> for TransitionAmplitudeMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = <[[ReIm; 2]; 2]>::deserialize(d)?;
        Self::new(raw.map(|r| r.map(Complex64::from))).map_err(serde::de::Error::custom)
    }
}

fn require_two(n: usize, what: &str) -> Result<()> {
    if n == 2 {
        Ok(())
    } else {
        Err(Error::DimensionMismatch(format!(
            "{what} must be two-dimensional, got {n}"
        )))
    }
}

/// `α_i = √p_i e^{iξ_i}`.
pub fn amplitudes_from_context(p: &ContextDistribution, xi: [f64; 2]) -> Result<AmplitudeVector> {
    require_two(p.dim(), "context distribution")?;
    let pr = p.probs();
    Ok(AmplitudeVector::new(
        Complex64::from_polar(pr[0].sqrt(), xi[0]),
        Complex64::from_polar(pr[1].sqrt(), xi[1]),
    ))
}

/// `β_ij = √P_ij e^{iγ_ij}`.
pub fn matrix_from_probabilities(
    pm: &TransitionMatrix,
    gamma: [[f64; 2]; 2],
) -> Result<TransitionAmplitudeMatrix> {
    require_two(pm.dim(), "transition matrix")?;
    let entries = std::array::from_fn(|i| {
        std::array::from_fn(|j| Complex64::from_polar(pm.get(i, j).sqrt(), gamma[i][j]))
    });
    TransitionAmplitudeMatrix::new(entries)
}

/// `β_j = α_1 β_1j + α_2 β_2j`.
pub fn compose(alpha: &AmplitudeVector, u: &TransitionAmplitudeMatrix) -> AmplitudeVector {
    let [a1, a2] = alpha.0;
    let b = u.entries();
    AmplitudeVector::new(a1 * b[0][0] + a2 * b[1][0], a1 * b[0][1] + a2 * b[1][1])
}

/// Born probabilities `q_j = |β_j|²` of an outcome-decomposable state.
pub fn born(beta: &AmplitudeVector) -> Result<OutcomeDistribution> {
    let q = beta.sq_norms();
    let total = q[0] + q[1];
    if (total - 1.0).abs() > DECOMPOSABLE_TOL {
        return Err(Error::NotDecomposable(total));
    }
    Ok(OutcomeDistribution::from_identity(
        q.iter().map(|v| v.min(1.0)).collect(),
    ))
}

/// `α_1 ᾱ_2 (β_11 β̄_21 + β_12 β̄_22) + c.c.`, which equals `|β_1|² + |β_2|² − 1`
/// for a decomposable `α` and unit-row `U`.
pub fn normalization_defect(alpha: &AmplitudeVector, u: &TransitionAmplitudeMatrix) -> f64 {
    let cross = alpha.0[0] * alpha.0[1].conj() * u.row_overlap();
    2.0 * cross.re
}

/// Row-difference phases `(γ_1, γ_2) = (γ_11 − γ_21, γ_12 − γ_22)`, wrapped to `(−π, π]`.
pub fn phase_differences(gamma: &[[f64; 2]; 2]) -> (f64, f64) {
    (
        wrap_angle(gamma[0][0] - gamma[1][0]),
        wrap_angle(gamma[0][1] - gamma[1][1]),
    )
}

/// Solution families of the normalization constraint for a given memory phase `η`.
///
/// Double stochastic `P` yields the quantum family `γ_1 − γ_2 = π` and the
/// memory family `γ_1 + γ_2 = π − 2η`. Otherwise the single family
/// `cos(η + γ_1) = −K cos(η + γ_2)` is returned.
pub fn solve_phase_constraint(pm: &TransitionMatrix, eta: f64) -> Result<Vec<PhaseFamily>> {
    let k = coupling_coefficient(pm)?;
    if pm.is_double_stochastic(Tolerances::default().double_stochastic) {
        Ok(vec![
            PhaseFamily::Difference {
                offset: std::f64::consts::PI,
            },
            PhaseFamily::Sum {
                offset: wrap_angle(std::f64::consts::PI - 2.0 * eta),
            },
        ])
    } else {
        Ok(vec![PhaseFamily::Trigonometric {
            k,
            eta: wrap_angle(eta),
        }])
    }
}

/// Rows orthonormal under `⟨z, w⟩ = z_1 w̄_1 + z_2 w̄_2` within `tol`.
pub fn is_unitary(u: &TransitionAmplitudeMatrix, tol: f64) -> bool {
    let e = u.entries();
    let n1 = inner(&e[0], &e[0]);
    let n2 = inner(&e[1], &e[1]);
    (n1 - 1.0).norm() <= tol && (n2 - 1.0).norm() <= tol && u.row_overlap().norm() <= tol
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI};

    use super::*;

    fn ctx(v: [f64; 2]) -> ContextDistribution {
        ContextDistribution::new(v.to_vec()).unwrap()
    }

    fn mat(r: [[f64; 2]; 2]) -> TransitionMatrix {
        TransitionMatrix::new(r.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    fn trig_matrix() -> TransitionAmplitudeMatrix {
        matrix_from_probabilities(
            &mat([[0.5, 0.5], [1.0 / 3.0, 2.0 / 3.0]]),
            [[3.0 * PI / 4.0, FRAC_PI_3], [0.0, 0.0]],
        )
        .unwrap()
    }

    #[test]
    fn context_amplitudes() {
        let a = amplitudes_from_context(&ctx([0.5, 0.5]), [0.0, 0.0]).unwrap();
        assert!(close(a.0[0], Complex64::new(FRAC_1_SQRT_2, 0.0)));
        assert!(close(a.0[1], Complex64::new(FRAC_1_SQRT_2, 0.0)));
        let a = amplitudes_from_context(&ctx([0.25, 0.75]), [0.0, FRAC_PI_2]).unwrap();
        assert!(close(a.0[0], Complex64::new(0.5, 0.0)));
        assert!(close(a.0[1], Complex64::new(0.0, 0.75f64.sqrt())));
        let n = a.sq_norms();
        assert!((n[0] + n[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn hadamard_type() {
        let u = matrix_from_probabilities(&mat([[0.5; 2]; 2]), [[0.0, 0.0], [0.0, PI]]).unwrap();
        assert!(u.row_overlap().norm() < 1e-15);
        assert!(is_unitary(&u, 1e-12));
        let u0 = matrix_from_probabilities(&mat([[0.2, 0.8], [0.6, 0.4]]), [[0.0; 2]; 2]).unwrap();
        assert!(u0
            .entries()
            .iter()
            .flatten()
            .all(|c| c.im == 0.0 && c.re > 0.0));
        assert!(!is_unitary(&u0, 1e-12));
    }

    #[test]
    fn singular_matrix_rejected() {
        let r = FRAC_1_SQRT_2;
        let c = Complex64::new(r, 0.0);
        assert_eq!(
            TransitionAmplitudeMatrix::new([[c, c], [c, c]]),
            Err(Error::Singular)
        );
    }

    #[test]
    fn compose_basics() {
        let u = trig_matrix();
        let e1 = AmplitudeVector::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        assert_eq!(compose(&e1, &u).0, *u.row(0));
    }

    #[test]
    fn trig_composition() {
        let u = trig_matrix();
        let alpha = amplitudes_from_context(&ctx([0.5, 0.5]), [0.0, 0.0]).unwrap();
        let q = born(&compose(&alpha, &u)).unwrap();
        let q1 = 5.0 / 12.0 + (3.0 * PI / 4.0).cos() / 6f64.sqrt();
        let q2 = 7.0 / 12.0 + FRAC_PI_3.cos() / 3f64.sqrt();
        assert!((q.probs()[0] - q1).abs() < 1e-12);
        assert!((q.probs()[1] - q2).abs() < 1e-12);
        assert!(normalization_defect(&alpha, &u).abs() < 1e-12);
        assert!(!is_unitary(&u, 1e-10));

        let shifted = amplitudes_from_context(&ctx([0.5, 0.5]), [FRAC_PI_2, 0.0]).unwrap();
        let d = normalization_defect(&shifted, &u);
        assert!(d.abs() > 1e-3);
        assert!(matches!(
            born(&compose(&shifted, &u)),
            Err(Error::NotDecomposable(_))
        ));
    }

    #[test]
    fn born_examples() {
        let q = born(&AmplitudeVector::new(
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
        ))
        .unwrap();
        assert_eq!(q.probs(), &[1.0, 0.0]);
        let b = AmplitudeVector::new(
            Complex64::new(FRAC_1_SQRT_2, 0.0),
            Complex64::from_polar(FRAC_1_SQRT_2, 1.234),
        );
        let q = born(&b).unwrap();
        assert!((q.probs()[0] - 0.5).abs() < 1e-15 && (q.probs()[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn phase_constraint_families() {
        let ds = mat([[0.3, 0.7], [0.7, 0.3]]);
        let fams = solve_phase_constraint(&ds, FRAC_PI_4).unwrap();
        assert_eq!(fams.len(), 2);
        assert_eq!(fams[1], PhaseFamily::Sum { offset: FRAC_PI_2 });
        let g1 = fams[1].gamma1_for(FRAC_PI_4).unwrap();
        assert!((g1[0] - FRAC_PI_4).abs() < 1e-15);

        // memory solution: gamma_1 = gamma_2 = pi/4 with eta = pi/4
        let u = matrix_from_probabilities(&ds, [[FRAC_PI_4, FRAC_PI_4], [0.0, 0.0]]).unwrap();
        let alpha = amplitudes_from_context(&ctx([0.4, 0.6]), [FRAC_PI_4, 0.0]).unwrap();
        assert!(normalization_defect(&alpha, &u).abs() < 1e-12);
        assert!(!is_unitary(&u, 1e-10));

        let p = mat([[0.5, 0.5], [1.0 / 3.0, 2.0 / 3.0]]);
        let fams = solve_phase_constraint(&p, 0.0).unwrap();
        assert_eq!(fams.len(), 1);
        let g1 = fams[0].gamma1_for(FRAC_PI_3).unwrap();
        assert!(g1.iter().any(|g| (g - 3.0 * PI / 4.0).abs() < 1e-12));
        assert!(matches!(fams[0].gamma1_for(0.0), Err(Error::NoSolution(_))));
    }

    #[test]
    fn defect_matches_norm_excess() {
        let u = matrix_from_probabilities(
            &mat([[0.15, 0.85], [0.45, 0.55]]),
            [[0.3, -1.2], [2.2, 0.4]],
        )
        .unwrap();
        let alpha = amplitudes_from_context(&ctx([0.35, 0.65]), [0.9, -0.1]).unwrap();
        let n = compose(&alpha, &u).sq_norms();
        assert!((normalization_defect(&alpha, &u) - (n[0] + n[1] - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn differences_are_wrapped() {
        let (g1, g2) = phase_differences(&[[3.0, -3.0], [-3.0, 3.0]]);
        assert!((g1 - wrap_angle(6.0)).abs() < 1e-15);
        assert!((g2 - wrap_angle(-6.0)).abs() < 1e-15);
    }
}
