//! The mollifier bump profile ψ and the outer cutoff χ.
//!
//! ψ is the standard smooth bump
//!
//! ```text
//!   ψ(t) = exp(1 − 1/(1 − t²))   for |t| < 1,      ψ(t) = 0 for |t| ≥ 1,
//! ```
//!
//! a C∞ radial profile with ψ(0) = 1, values in [0, 1], and support exactly
//! the closed unit ball. Scaled copies M·ψ((x − c)/r) are the smooth sources
//! whose Newtonian potentials build the blow-up solutions.
//!
//! χ is the outer cutoff: identically 1 on the ball of radius 2, identically
//! 0 outside radius 3, with a quintic smoothstep in between. The smoothstep
//! has vanishing first and second derivatives at both ends, so χ (and hence
//! the cut-off solution) is C²; all inequality checks happen inside B₂ where
//! χ ≡ 1 and the cutoff is invisible.

use serde::{Deserialize, Serialize};

/// Available bump profiles (a single kind; kept as an enum so descriptors
/// name their profile explicitly and future profiles stay decodable).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum BumpProfile {
    /// ψ(t) = exp(1 − 1/(1 − t²)) on |t| < 1, zero outside.
    #[serde(rename = "smooth_standard")]
    #[default]
    SmoothStandard,
}

/// Radial profile value ψ(t). Even in t; exactly zero for |t| ≥ 1.
pub fn psi(t: f64) -> f64 {
    let t2 = t * t;
    if t2 >= 1.0 {
        return 0.0;
    }
    (1.0 - 1.0 / (1.0 - t2)).exp()
}

/// ψ at a point of ℝⁿ (radial evaluation).
pub fn psi_point(x: &[f64]) -> f64 {
    psi(norm(x))
}

/// Euclidean norm, fixed summation order.
pub fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Total mass ∫_{ℝⁿ} ψ(|x|) dx = n ω_n ∫₀¹ ψ(t) t^{n−1} dt.
///
/// The integrand is C∞ with all derivatives vanishing at t = 1; a modest
/// graded panel set reaches machine accuracy.
pub fn psi_mass(n: u32) -> f64 {
    let gl = crate::quad::GaussLegendre::new(16).expect("order 16 valid");
    let breaks = crate::quad::breaks_geometric(0.0, 1.0, false, 20);
    let radial = gl.integrate_panels(&breaks, |t| psi(t) * t.powi(n as i32 - 1));
    crate::params::unit_sphere_area(n) * radial
}

/// Quintic smoothstep: 0 → 1 over [0, 1] with S′ = S″ = 0 at both ends.
fn smoothstep5(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        t * t * t * (t * (6.0 * t - 15.0) + 10.0)
    }
}

/// Inner radius of the cutoff transition: χ ≡ 1 on |x| ≤ 2.
pub const CUTOFF_INNER: f64 = 2.0;
/// Outer radius of the cutoff transition: χ ≡ 0 on |x| ≥ 3.
pub const CUTOFF_OUTER: f64 = 3.0;

/// The outer cutoff χ(r): 1 on [0, 2], quintic smoothstep down to 0 at 3.
pub fn cutoff_chi(r: f64) -> f64 {
    1.0 - smoothstep5((r - CUTOFF_INNER) / (CUTOFF_OUTER - CUTOFF_INNER))
}
