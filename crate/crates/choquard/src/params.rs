//! Problem parameters and their validated domain.
//!
//! A parameter point is (n, α, λ, σ): the space dimension, the Riesz kernel
//! exponent in |x|^{−α}, the convolution power λ, and the multiplier power σ
//! from the inequality 0 ≤ −Δu ≤ (|x|^{−α} ∗ u^λ) u^σ.
//!
//! Validated domain:
//!
//! * n ≥ 3 (the Newtonian kernel |x|^{2−n} must decay at infinity);
//! * 0 < α < n + 2 (α ≥ n makes the kernel non-locally-integrable, which the
//!   quadrature engine handles as certified divergence, but α ≥ n + 2 puts
//!   every threshold branch below zero and no statement here says anything);
//! * λ > 0 and σ ≥ 0, finite.
//!
//! [`Params`] carries floats for the numerical paths; [`ExactParams`] carries
//! arbitrary-precision rationals for the classifier and the bootstrap, where
//! comparisons must be exact. Parsing text into [`ExactParams`] never rounds.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ratio::{parse_rat, rat_int, to_f64, Rat};

/// Floating-point parameter point (n, α, λ, σ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    /// Space dimension, n ≥ 3.
    pub n: u32,
    /// Riesz exponent α in the kernel |x|^{−α}, 0 < α < n + 2.
    pub alpha: f64,
    /// Convolution power λ > 0.
    pub lambda: f64,
    /// Multiplier power σ ≥ 0.
    pub sigma: f64,
}

impl Params {
    /// Validated constructor.
    pub fn new(n: u32, alpha: f64, lambda: f64, sigma: f64) -> Result<Self> {
        let p = Params { n, alpha, lambda, sigma };
        p.validate()?;
        Ok(p)
    }

    /// Check the domain constraints; called by every entry point that can
    /// receive deserialized (hence unvalidated) values.
    pub fn validate(&self) -> Result<()> {
        if self.n < 3 {
            return Err(Error::Parameter(format!(
                "dimension n = {} is below 3; the construction needs a decaying Newtonian kernel",
                self.n
            )));
        }
        for (name, v) in [("alpha", self.alpha), ("lambda", self.lambda), ("sigma", self.sigma)] {
            if !v.is_finite() {
                return Err(Error::Parameter(format!("{name} = {v} is not finite")));
            }
        }
        let cap = self.n as f64 + 2.0;
        if !(self.alpha > 0.0 && self.alpha < cap) {
            return Err(Error::Parameter(format!(
                "alpha = {} is outside (0, n+2) = (0, {})",
                self.alpha, cap
            )));
        }
        if self.lambda <= 0.0 {
            return Err(Error::Parameter(format!("lambda = {} must be positive", self.lambda)));
        }
        if self.sigma < 0.0 {
            return Err(Error::Parameter(format!("sigma = {} must be nonnegative", self.sigma)));
        }
        Ok(())
    }

    /// n as f64, used constantly in exponent arithmetic.
    pub fn nf(&self) -> f64 {
        self.n as f64
    }
}

/// Exact-rational parameter point for threshold logic and the bootstrap.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactParams {
    /// Space dimension, n ≥ 3.
    pub n: u32,
    /// Riesz exponent α, 0 < α < n + 2.
    pub alpha: Rat,
    /// Convolution power λ > 0.
    pub lambda: Rat,
    /// Multiplier power σ ≥ 0.
    pub sigma: Rat,
}

impl ExactParams {
    /// Validated constructor.
    pub fn new(n: u32, alpha: Rat, lambda: Rat, sigma: Rat) -> Result<Self> {
        if n < 3 {
            return Err(Error::Parameter(format!(
                "dimension n = {n} is below 3; the construction needs a decaying Newtonian kernel"
            )));
        }
        let zero = rat_int(0);
        let cap = rat_int(n as i64 + 2);
        if !(alpha > zero && alpha < cap) {
            return Err(Error::Parameter(format!(
                "alpha = {alpha} is outside (0, n+2) = (0, {cap})"
            )));
        }
        if lambda <= zero {
            return Err(Error::Parameter(format!("lambda = {lambda} must be positive")));
        }
        if sigma < zero {
            return Err(Error::Parameter(format!("sigma = {sigma} must be nonnegative")));
        }
        Ok(ExactParams { n, alpha, lambda, sigma })
    }

    /// Parse from text fields, exactly (decimals and fractions accepted).
    pub fn parse(n: u32, alpha: &str, lambda: &str, sigma: &str) -> Result<Self> {
        ExactParams::new(n, parse_rat(alpha)?, parse_rat(lambda)?, parse_rat(sigma)?)
    }

    /// Nearest floating-point parameter point.
    pub fn to_float(&self) -> Params {
        Params {
            n: self.n,
            alpha: to_f64(&self.alpha),
            lambda: to_f64(&self.lambda),
            sigma: to_f64(&self.sigma),
        }
    }

    /// n as an exact rational.
    pub fn n_rat(&self) -> Rat {
        rat_int(self.n as i64)
    }
}

/// Volume ω_n of the unit ball in ℝⁿ: π^{n/2} / Γ(n/2 + 1).
///
/// Computed by the Γ recursion from Γ(1) = 1 and Γ(1/2) = √π, so the only
/// rounding is in a handful of multiplications (n is a small integer).
pub fn unit_ball_volume(n: u32) -> f64 {
    // Γ(n/2 + 1): walk up from Γ(1) (n even) or Γ(1/2) (n odd).
    let mut gamma = if n % 2 == 0 { 1.0 } else { std::f64::consts::PI.sqrt() };
    let mut x = if n % 2 == 0 { 1.0 } else { 0.5 };
    while x < n as f64 / 2.0 + 1.0 - 0.25 {
        gamma *= x;
        x += 1.0;
    }
    std::f64::consts::PI.powf(n as f64 / 2.0) / gamma
}

/// Surface area of the unit sphere S^{n−1} ⊂ ℝⁿ: n ω_n.
pub fn unit_sphere_area(n: u32) -> f64 {
    n as f64 * unit_ball_volume(n)
}

/// The Newtonian normalization c_n = 1 / (n (n − 2) ω_n), the constant for
/// which −Δ(c_n |x|^{2−n}) = δ₀ in ℝⁿ.
pub fn newton_constant(n: u32) -> f64 {
    1.0 / (n as f64 * (n as f64 - 2.0) * unit_ball_volume(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn accepts_interior_points_and_rejects_boundary() {
        assert!(Params::new(3, 1.0, 1.0, 4.0).is_ok());
        assert!(Params::new(3, 4.0, 4.0, 1.0).is_ok()); // α > n is allowed (α < n + 2)
        assert!(Params::new(3, 5.0, 1.0, 1.0).is_err()); // α = n + 2
        assert!(Params::new(3, 0.0, 1.0, 1.0).is_err());
        assert!(Params::new(2, 1.0, 1.0, 1.0).is_err());
        assert!(Params::new(3, 1.0, 0.0, 1.0).is_err());
        assert!(Params::new(3, 1.0, 1.0, -0.1).is_err());
        assert!(Params::new(3, f64::NAN, 1.0, 1.0).is_err());
    }

    #[test]
    fn exact_params_parse_and_match_float_view() {
        let p = ExactParams::parse(3, "1", "21/10", "1.56").unwrap();
        assert_eq!(p.lambda, crate::ratio::rat(21, 10));
        assert_eq!(p.sigma, crate::ratio::rat(39, 25));
        let f = p.to_float();
        assert_eq!(f.n, 3);
        assert_relative_eq!(f.lambda, 2.1, max_relative = 1e-15);
    }

    /// ω₃ = 4π/3, ω₄ = π²/2, ω₅ = 8π²/15; sphere areas 4π, 2π², 8π²/3.
    #[test]
    fn ball_volumes_match_closed_forms() {
        use std::f64::consts::PI;
        assert_relative_eq!(unit_ball_volume(3), 4.0 * PI / 3.0, max_relative = 1e-14);
        assert_relative_eq!(unit_ball_volume(4), PI * PI / 2.0, max_relative = 1e-14);
        assert_relative_eq!(unit_ball_volume(5), 8.0 * PI * PI / 15.0, max_relative = 1e-14);
        assert_relative_eq!(unit_sphere_area(3), 4.0 * PI, max_relative = 1e-14);
        assert_relative_eq!(unit_sphere_area(4), 2.0 * PI * PI, max_relative = 1e-14);
        assert_relative_eq!(unit_sphere_area(6), PI.powi(3), max_relative = 1e-14);
    }

    /// In ℝ³, c₃ = 1/(4π): the classical Newtonian potential constant.
    #[test]
    fn newton_constant_in_three_dimensions() {
        assert_relative_eq!(newton_constant(3), 1.0 / (4.0 * std::f64::consts::PI), max_relative = 1e-14);
    }
}
