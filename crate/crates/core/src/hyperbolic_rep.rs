//! Linear representation of hyperbolic transformations over the algebra **G**.
//!
//! Amplitudes take the standard form `±√p e^{jγ}`. Composition is the same as
//! in the complex case, but a composed state is physical only if both
//! `|β_j|² ≥ 0` (positivity) and `|β_1|² + |β_2|² = 1` (normalization).
//!
//! With `σ = Π_ij sign β_ij` normalization reduces to
//!
//! ```text
//! cosh(η + γ_1) + σ K cosh(η + γ_2) = 0
//! ```
//!
//! which requires `σ = −1`. A matrix is **G**-unitary exactly when `P` is double
//! stochastic, `σ = −1` and `γ_1 = γ_2`. **G**-unitary matrices keep the state
//! normalized but do not keep it positive, so the phase of the parent state is
//! bounded by [`admissible_h_phase_bound`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperbolic::{Hyperbolic, Sign};
use crate::phase_family::PhaseFamily;
use crate::probability::{
    coupling_coefficient, ContextDistribution, OutcomeDistribution, TransitionMatrix,
    POSITIVITY_FLOOR,
};

/// Tolerance on `|β_1|² + |β_2|² = 1` in [`g_born`].
pub const NORMALIZATION_TOL: f64 = 1e-9;
/// Squared moduli in `[−POSITIVITY_TOL, 0)` are treated as rounding noise and set to zero.
pub const POSITIVITY_TOL: f64 = 1e-12;
/// Tolerance used by [`g_unitary_characterization`] for `K = 1` and `γ_1 = γ_2`.
pub const CHARACTERIZATION_TOL: f64 = 1e-10;

/// Two-component vector over **G**.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GAmplitudeVector(pub [Hyperbolic; 2]);

impl GAmplitudeVector {
    pub fn new(a: Hyperbolic, b: Hyperbolic) -> Self {
        Self([a, b])
    }

    pub fn sq_norms(&self) -> [f64; 2] {
        [self.0[0].sq_norm(), self.0[1].sq_norm()]
    }

    pub fn scale(&self, a: Hyperbolic) -> Self {
        Self([a * self.0[0], a * self.0[1]])
    }
}

impl std::ops::Add for GAmplitudeVector {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self([self.0[0] + rhs.0[0], self.0[1] + rhs.0[1]])
    }
}

/// `⟨z, w⟩ = z_1 w̄_1 + z_2 w̄_2`.
pub fn g_inner_product(z: &GAmplitudeVector, w: &GAmplitudeVector) -> Hyperbolic {
    z.0[0] * w.0[0].conj() + z.0[1] * w.0[1].conj()
}

/// Entry `sign · √p · e^{jγ}` stored by its parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StandardEntry {
    pub sign: Sign,
    pub p: f64,
    pub gamma: f64,
}

impl StandardEntry {
    pub fn value(&self) -> Result<Hyperbolic> {
        Ok(Hyperbolic::exp_j(self.gamma)?.scale(self.sign.value() * self.p.sqrt()))
    }
}

/// 2×2 matrix over **G** with entries in standard form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GTransitionMatrix {
    entries: [[StandardEntry; 2]; 2],
    #[serde(skip)]
    values: [[Hyperbolic; 2]; 2],
}

impl GTransitionMatrix {
    /// Rows must satisfy `P_i1 + P_i2 = 1` with strictly positive entries.
    pub fn new(entries: [[StandardEntry; 2]; 2]) -> Result<Self> {
        let rows = entries
            .iter()
            .map(|r| r.iter().map(|e| e.p).collect())
            .collect();
        TransitionMatrix::new(rows)?;
        let mut values = [[Hyperbolic::ZERO; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                values[i][j] = entries[i][j].value()?;
            }
        }
        Ok(Self { entries, values })
    }

    pub fn entries(&self) -> &[[StandardEntry; 2]; 2] {
        &self.entries
    }

    pub fn value(&self, i: usize, j: usize) -> Hyperbolic {
        self.values[i][j]
    }

    pub fn row(&self, i: usize) -> GAmplitudeVector {
        GAmplitudeVector(self.values[i])
    }

    /// `σ = Π_ij sign β_ij`.
    pub fn sigma(&self) -> Sign {
        self.entries
            .iter()
            .flatten()
            .fold(Sign::Plus, |acc, e| acc * e.sign)
    }

    pub fn probabilities(&self) -> TransitionMatrix {
        TransitionMatrix::new(
            self.entries
                .iter()
                .map(|r| r.iter().map(|e| e.p).collect())
                .collect(),
        )
        .expect("validated at construction")
    }

    /// `(γ_1, γ_2) = (γ_11 − γ_21, γ_12 − γ_22)`; hyperbolic phases are not wrapped.
    pub fn phase_differences(&self) -> (f64, f64) {
        let e = &self.entries;
        (e[0][0].gamma - e[1][0].gamma, e[0][1].gamma - e[1][1].gamma)
    }

    /// Applies `v ↦ v U` (row vector convention of composition).
    pub fn apply(&self, v: &GAmplitudeVector) -> GAmplitudeVector {
        let [a1, a2] = v.0;
        GAmplitudeVector::new(
            a1 * self.values[0][0] + a2 * self.values[1][0],
            a1 * self.values[0][1] + a2 * self.values[1][1],
        )
    }
}

impl<'de> Deserialize<'de> for GTransitionMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            entries: [[StandardEntry; 2]; 2],
        }
        let raw = Raw::deserialize(d)?;
        Self::new(raw.entries).map_err(serde::de::Error::custom)
    }
}

fn check_prob(what: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > POSITIVITY_FLOOR && v < 1.0 {
        Ok(())
    } else {
        Err(Error::DegenerateProbability(format!(
            "{what} = {v} must lie strictly inside (0, 1)"
        )))
    }
}

/// `α_i = sign_i √p_i e^{jξ_i}`.
pub fn g_amplitudes_from_context(
    p: &ContextDistribution,
    signs: [Sign; 2],
    xi: [f64; 2],
) -> Result<GAmplitudeVector> {
    if p.dim() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "context distribution must be two-dimensional, got {}",
            p.dim()
        )));
    }
    let pr = p.probs();
    let mut out = [Hyperbolic::ZERO; 2];
    for i in 0..2 {
        out[i] = StandardEntry {
            sign: signs[i],
            p: pr[i],
            gamma: xi[i],
        }
        .value()?;
    }
    Ok(GAmplitudeVector(out))
}

/// `β_ij = sign_ij √P_ij e^{jγ_ij}`.
pub fn g_matrix_from_probabilities(
    pm: &TransitionMatrix,
    signs: [[Sign; 2]; 2],
    gamma: [[f64; 2]; 2],
) -> Result<GTransitionMatrix> {
    if pm.dim() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "transition matrix must be 2x2, got {}x{}",
            pm.dim(),
            pm.dim()
        )));
    }
    GTransitionMatrix::new(std::array::from_fn(|i| {
        std::array::from_fn(|j| StandardEntry {
            sign: signs[i][j],
            p: pm.get(i, j),
            gamma: gamma[i][j],
        })
    }))
}

/// `β_j = α_1 β_1j + α_2 β_2j` over **G**.
pub fn g_compose(alpha: &GAmplitudeVector, u: &GTransitionMatrix) -> GAmplitudeVector {
    u.apply(alpha)
}

/// Outcome probabilities `|β_j|²` of a physical state.
///
/// Fails with `NonphysicalState` if a squared modulus is negative and with
/// `NotDecomposable` if they do not sum to 1.
pub fn g_born(beta: &GAmplitudeVector) -> Result<OutcomeDistribution> {
    let raw = beta.sq_norms();
    if raw.iter().any(|&v| v < -POSITIVITY_TOL) {
        return Err(Error::NonphysicalState(raw));
    }
    let total = raw[0] + raw[1];
    if (total - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::NotDecomposable(total));
    }
    Ok(OutcomeDistribution::from_identity(
        raw.iter().map(|v| v.clamp(0.0, 1.0)).collect(),
    ))
}

/// Rows orthonormal under the **G**-inner product within `tol` (both components).
pub fn g_is_unitary(u: &GTransitionMatrix, tol: f64) -> bool {
    let (r1, r2) = (u.row(0), u.row(1));
    let close = |z: Hyperbolic, want: f64| (z.x - want).abs() <= tol && z.y.abs() <= tol;
    close(g_inner_product(&r1, &r1), 1.0)
        && close(g_inner_product(&r2, &r2), 1.0)
        && close(g_inner_product(&r1, &r2), 0.0)
}

/// The three conditions that together characterize **G**-unitarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitarityReport {
    pub double_stochastic: bool,
    pub sigma_ok: bool,
    pub phase_ok: bool,
    pub unitary: bool,
}

/// Evaluates double stochasticity (`K = 1`), `σ = −1` and `γ_1 = γ_2` from the standard form.
pub fn g_unitary_characterization(u: &GTransitionMatrix) -> UnitarityReport {
    let k = coupling_coefficient(&u.probabilities()).expect("2x2 by construction");
    let double_stochastic = (k - 1.0).abs() <= CHARACTERIZATION_TOL;
    let sigma_ok = u.sigma() == Sign::Minus;
    let (g1, g2) = u.phase_differences();
    let phase_ok = (g1 - g2).abs() <= CHARACTERIZATION_TOL;
    UnitarityReport {
        double_stochastic,
        sigma_ok,
        phase_ok,
        unitary: double_stochastic && sigma_ok && phase_ok,
    }
}

/// Upper bound `e(s, t)` on `cosh θ` for physical hyperbolic interference with
/// `p = (s, 1 − s)` and the double stochastic matrix with diagonal `t`.
///
/// `e(s, t) ≥ 1`, with equality when `s + t = 1`.
pub fn admissible_h_phase_bound(s: f64, t: f64) -> Result<f64> {
    check_prob("s", s)?;
    check_prob("t", t)?;
    Ok((s * t + (1.0 - s) * (1.0 - t)) / (2.0 * (s * (1.0 - s) * t * (1.0 - t)).sqrt()))
}

/// Solution families of the hyperbolic normalization constraint.
///
/// Returns `NoSolution` for `σ = +1`. For `K = 1` yields the **G**-quantum family
/// `γ_1 = γ_2` and the memory family `γ_1 + γ_2 = −2η`; otherwise the family
/// `cosh(η + γ_1) = K cosh(η + γ_2)`.
pub fn g_solve_phase_constraint(
    pm: &TransitionMatrix,
    sigma: Sign,
    eta: f64,
) -> Result<Vec<PhaseFamily>> {
    if sigma == Sign::Plus {
        return Err(Error::NoSolution(
            "the normalization constraint has no solution for sigma = +1".into(),
        ));
    }
    let k = coupling_coefficient(pm)?;
    if (k - 1.0).abs() <= CHARACTERIZATION_TOL {
        Ok(vec![
            PhaseFamily::Difference { offset: 0.0 },
            PhaseFamily::Sum { offset: -2.0 * eta },
        ])
    } else {
        Ok(vec![PhaseFamily::Hyperbolic { k, eta }])
    }
}
