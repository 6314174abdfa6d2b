//! The algebra **G** of hyperbolic (split-complex) numbers `x + j y` with `j² = 1`.
//!
//! **G** is a commutative ring but not a field: every element on the light cone
//! `|x| = |y|` is a zero divisor. The squared modulus `|z|² = x² − y²` is
//! multiplicative and can be negative, so it is returned as a signed real.
//!
//! Subsets that matter here:
//!
//! - `G₊  = { z : |z|² ≥ 0 }`, closed under multiplication;
//! - `G₊* = { z : |z|² > 0 }`, the multiplicative group of elements with a polar form
//!   `z = sign(x) · |z| · e^{jθ}`;
//! - the unit circle `S₁ = { ±e^{jθ} }`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest hyperbolic phase accepted by [`Hyperbolic::exp_j`].
pub const MAX_PHASE: f64 = 700.0;

/// Default absolute tolerance for [`Hyperbolic::approx_eq`].
pub const DEFAULT_ABS_TOL: f64 = 1e-12;
/// Default relative tolerance for [`Hyperbolic::approx_eq`].
pub const DEFAULT_REL_TOL: f64 = 1e-10;

/// A sign factor `±1`, serialized as the integer `1` or `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "i8", into = "i8")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// Sign of a real number; zero maps to `Plus`.
    pub fn of(v: f64) -> Self {
        if v < 0.0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        match s {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl TryFrom<i8> for Sign {
    type Error = String;

    fn try_from(v: i8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(format!("sign must be 1 or -1, got {other}")),
        }
    }
}

/// An element `x + j y` of **G**.
///
/// `PartialEq` is exact componentwise equality; use [`Hyperbolic::approx_eq`]
/// for tolerance-based comparison.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Hyperbolic {
    pub x: f64,
    pub y: f64,
}

/// Polar decomposition `sign · modulus · e^{jθ}` of an element of `G₊*`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarForm {
    pub sign: Sign,
    pub modulus: f64,
    pub phase: f64,
}

impl PolarForm {
    pub fn to_hyperbolic(&self) -> Hyperbolic {
        let s = self.sign.value() * self.modulus;
        Hyperbolic::new(s * self.phase.cosh(), s * self.phase.sinh())
    }
}

impl Hyperbolic {
    pub const ZERO: Self = Self { x: 0.0, y: 0.0 };
    pub const ONE: Self = Self { x: 1.0, y: 0.0 };
    pub const J: Self = Self { x: 0.0, y: 1.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub const fn real(x: f64) -> Self {
        Self { x, y: 0.0 }
    }

    /// `e^{jθ} = cosh θ + j sinh θ`, a point on the unit circle.
    ///
    /// Phases with `|θ| > 700` are rejected instead of overflowing to infinity.
    pub fn exp_j(theta: f64) -> Result<Self> {
        if !theta.is_finite() || theta.abs() > MAX_PHASE {
            return Err(Error::PhaseOverflow(theta));
        }
        Ok(Self::new(theta.cosh(), theta.sinh()))
    }

    pub fn conj(self) -> Self {
        Self::new(self.x, -self.y)
    }

    /// `z · conj(z) = x² − y²`; negative outside `G₊`.
    pub fn sq_norm(self) -> f64 {
        self.x * self.x - self.y * self.y
    }

    pub fn scale(self, k: f64) -> Self {
        Self::new(k * self.x, k * self.y)
    }

    pub fn in_g_plus(self) -> bool {
        self.sq_norm() >= 0.0
    }

    pub fn in_g_plus_star(self) -> bool {
        self.sq_norm() > 0.0
    }

    /// Multiplicative inverse, defined on `G₊*` only.
    pub fn inverse(self) -> Result<Self> {
        let n = self.sq_norm();
        if n <= 0.0 {
            return Err(Error::NotInvertible(self.to_string(), n));
        }
        Ok(self.conj().scale(1.0 / n))
    }

    /// Polar decomposition on `G₊*`, principal branch `θ = artanh(y / x)`.
    ///
    /// For `x < 0` the phase is measured relative to the `−1` branch, so
    /// `−e^{jθ}` decomposes to `(Minus, 1, θ)`.
    pub fn polar(self) -> Result<PolarForm> {
        let n = self.sq_norm();
        if n <= 0.0 {
            return Err(Error::NoPolarForm(self.to_string(), n));
        }
        Ok(PolarForm {
            sign: Sign::of(self.x),
            modulus: n.sqrt(),
            phase: (self.y / self.x).atanh(),
        })
    }

    /// Componentwise comparison with `|a − b| ≤ abs_tol + rel_tol · max(|a|, |b|)`.
    pub fn approx_eq_with(self, other: Self, abs_tol: f64, rel_tol: f64) -> bool {
        let close = |a: f64, b: f64| (a - b).abs() <= abs_tol + rel_tol * a.abs().max(b.abs());
        close(self.x, other.x) && close(self.y, other.y)
    }

    pub fn approx_eq(self, other: Self) -> bool {
        self.approx_eq_with(other, DEFAULT_ABS_TOL, DEFAULT_REL_TOL)
    }
}

impl fmt::Display for Hyperbolic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.y < 0.0 {
            write!(f, "{} - j{}", self.x, -self.y)
        } else {
            write!(f, "{} + j{}", self.x, self.y)
        }
    }
}

impl From<f64> for Hyperbolic {
    fn from(x: f64) -> Self {
        Self::real(x)
    }
}

impl Add for Hyperbolic {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Hyperbolic {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Neg for Hyperbolic {
    type Output = Self;

    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

impl Mul for Hyperbolic {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        Self::new(
            self.x * rhs.x + self.y * rhs.y,
            self.x * rhs.y + rhs.x * self.y,
        )
    }
}

impl Mul<f64> for Hyperbolic {
    type Output = Self;

    fn mul(self, rhs: f64) -> Self {
        self.scale(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQRT3: f64 = 1.732_050_807_568_877_2;

    fn h(x: f64, y: f64) -> Hyperbolic {
        Hyperbolic::new(x, y)
    }

    #[test]
    fn addition() {
        assert_eq!(h(1.0, 2.0) + h(3.0, 4.0), h(4.0, 6.0));
        let z = h(-0.25, 7.5);
        assert_eq!(z + Hyperbolic::ZERO, z);
        assert_eq!(h(2.0, SQRT3) + h(2.0, -SQRT3), h(4.0, 0.0));
    }

    #[test]
    fn multiplication_and_zero_divisors() {
        assert_eq!(h(1.0, 1.0) * h(1.0, -1.0), Hyperbolic::ZERO);
        let z = h(3.5, -1.25);
        assert_eq!(z * Hyperbolic::ONE, z);
        assert_eq!(Hyperbolic::J * Hyperbolic::J, Hyperbolic::ONE);

        let a = Hyperbolic::exp_j(0.3).unwrap();
        let b = Hyperbolic::exp_j(-1.1).unwrap();
        assert!((a * b).approx_eq(Hyperbolic::exp_j(0.3 - 1.1).unwrap()));
    }

    #[test]
    fn conjugation() {
        assert_eq!(h(2.0, SQRT3).conj(), h(2.0, -SQRT3));
        let z = h(0.1, -9.0);
        assert_eq!(z.conj().conj(), z);
        let t = 0.77;
        assert!(Hyperbolic::exp_j(t)
            .unwrap()
            .conj()
            .approx_eq(Hyperbolic::exp_j(-t).unwrap()));
    }

    #[test]
    fn squared_norm() {
        for t in [-3.0, -0.5, 0.0, 1.0, 4.2] {
            assert!((Hyperbolic::exp_j(t).unwrap().sq_norm() - 1.0).abs() < 1e-10);
        }
        assert_eq!(h(1.0, 1.0).sq_norm(), 0.0);
        assert!((h(2.0, SQRT3).sq_norm() - 1.0).abs() < 1e-15);
        assert!(h(1.0, 2.0).sq_norm() < 0.0);
    }

    #[test]
    fn exponential() {
        assert_eq!(Hyperbolic::exp_j(0.0).unwrap(), Hyperbolic::ONE);
        let theta = (2.0 + SQRT3).ln();
        assert!(Hyperbolic::exp_j(theta).unwrap().approx_eq(h(2.0, SQRT3)));
        assert!(matches!(
            Hyperbolic::exp_j(701.0),
            Err(Error::PhaseOverflow(_))
        ));
        assert!(Hyperbolic::exp_j(-700.0).is_ok());
    }

    #[test]
    fn inverse() {
        assert!(h(2.0, SQRT3).inverse().unwrap().approx_eq(h(2.0, -SQRT3)));
        assert!(matches!(
            h(1.0, 1.0).inverse(),
            Err(Error::NotInvertible(_, _))
        ));
        assert!(h(-3.0, 0.0)
            .inverse()
            .unwrap()
            .approx_eq(h(-1.0 / 3.0, 0.0)));
        // x^2 - y^2 < 0 is outside G+* even though the element is nonzero
        assert!(h(0.0, 1.0).inverse().is_err());
    }

    #[test]
    fn polar() {
        let p = h(2.0, SQRT3).polar().unwrap();
        assert_eq!(p.sign, Sign::Plus);
        assert!((p.modulus - 1.0).abs() < 1e-12);
        assert!((p.phase - (2.0 + SQRT3).ln()).abs() < 1e-12);

        let p = h(5.0, 0.0).polar().unwrap();
        assert_eq!((p.sign, p.modulus, p.phase), (Sign::Plus, 5.0, 0.0));

        assert!(matches!(h(1.0, 1.0).polar(), Err(Error::NoPolarForm(_, _))));

        let neg = -Hyperbolic::exp_j(0.4).unwrap();
        let p = neg.polar().unwrap();
        assert_eq!(p.sign, Sign::Minus);
        assert!((p.phase - 0.4).abs() < 1e-12);
        assert!(p.to_hyperbolic().approx_eq(neg));
    }

    #[test]
    fn sign_serde() {
        assert_eq!(Sign::Minus * Sign::Minus, Sign::Plus);
        assert_eq!(i8::from(Sign::Minus), -1);
        assert!(Sign::try_from(0).is_err());
    }
}
