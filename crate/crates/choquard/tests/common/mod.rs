//! Independent quadrature oracles shared by the integration tests.
//!
//! The library evaluates the angular kernel ∫_{S²} |ξe − sω|^{−α} dω through
//! closed forms; these helpers evaluate the same integral by reducing it to
//! the polar angle,
//!
//!   K(ξ, s, α) = 2π ∫₀^π (ξ² + s² − 2ξs·cos θ)^{−α/2} sin θ dθ,
//!
//! and integrating with a classic adaptive Simpson rule. Nothing here shares
//! code with the library's quadrature stack, so agreement is evidence, not
//! tautology.

#![allow(dead_code)] // each test binary uses its own subset of the oracles

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// One level of Simpson halving with the standard 15× Richardson acceptance.
#[allow(clippy::too_many_arguments)]
fn simpson_refine(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    fa: f64,
    m: f64,
    fm: f64,
    b: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        simpson_refine(f, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth - 1)
            + simpson_refine(f, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth - 1)
    }
}

/// Adaptive Simpson quadrature of `f` over [a, b] to absolute tolerance `tol`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_refine(f, a, fa, m, fm, b, fb, whole, tol, 48)
}

/// Run the quadrature twice: once at a loose tolerance to learn the scale of
/// the answer, then at `rel` times that scale.
fn adaptive_simpson_rel(f: &dyn Fn(f64) -> f64, a: f64, b: f64, rel: f64) -> f64 {
    let coarse = adaptive_simpson(f, a, b, 1e-6);
    adaptive_simpson(f, a, b, rel * coarse.abs().max(f64::MIN_POSITIVE))
}

/// Polar-angle oracle for the n = 3 angular kernel (unnormalized surface
/// measure), accurate to ≈ 1e−12 relative for separated ξ ≠ s.
pub fn angular_kernel_oracle(xi: f64, s: f64, alpha: f64) -> f64 {
    let f = move |theta: f64| {
        let d2 = xi * xi + s * s - 2.0 * xi * s * theta.cos();
        d2.powf(-0.5 * alpha) * theta.sin()
    };
    2.0 * std::f64::consts::PI * adaptive_simpson_rel(&f, 0.0, std::f64::consts::PI, 1e-12)
}

/// Same reduction with the distance floored at ρ₀ (the core-truncated kernel).
/// The integrand has a kink where |ξe − sω| crosses ρ₀; the adaptive rule
/// resolves it, at a slightly looser achievable tolerance.
pub fn truncated_kernel_oracle(xi: f64, s: f64, alpha: f64, rho0: f64) -> f64 {
    let f = move |theta: f64| {
        let d = (xi * xi + s * s - 2.0 * xi * s * theta.cos()).sqrt();
        d.max(rho0).powf(-alpha) * theta.sin()
    };
    2.0 * std::f64::consts::PI * adaptive_simpson_rel(&f, 0.0, std::f64::consts::PI, 1e-12)
}

/// Deterministic (ξ, s, α) triples with ξ, s ∈ [0.05, 2.5], α ∈ [0.3, 2.7],
/// re-drawn until |ξ − s| ≥ 2% of max(ξ, s) so the closed form and the oracle
/// both operate away from the touching singularity.
pub fn separated_triples(seed: u64, count: usize) -> Vec<(f64, f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let xi: f64 = rng.gen_range(0.05..2.5);
        let s: f64 = rng.gen_range(0.05..2.5);
        let alpha: f64 = rng.gen_range(0.3..2.7);
        if (xi - s).abs() >= 0.02 * xi.max(s) {
            out.push((xi, s, alpha));
        }
    }
    out
}

/// Relative error of `got` against a nonzero reference.
pub fn rel_err(got: f64, reference: f64) -> f64 {
    (got - reference).abs() / reference.abs().max(f64::MIN_POSITIVE)
}
