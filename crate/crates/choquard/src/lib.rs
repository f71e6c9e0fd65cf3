//! Numerical toolkit for the Choquard–Pekar differential inequality
//!
//! ```text
//!     0 ≤ −Δu ≤ (|x|^{−α} ∗ u^λ) u^σ   in B₂(0) ∖ {0},   u ≥ 0,  u ∈ L^λ(ℝⁿ),
//! ```
//!
//! near an isolated singularity, in dimensions n ≥ 3 with 0 < α, λ > 0, σ ≥ 0.
//!
//! The crate answers one question from several independent directions: for which
//! exponent pairs (λ, σ) does every C² solution admit a pointwise bound near the
//! origin, and for which pairs can solutions blow up arbitrarily fast?
//!
//! * [`classifier`] — evaluates the piecewise-linear threshold curve σ = g_α(λ)
//!   and classifies parameter points into bounded / unbounded / critical regions,
//!   in exact rational arithmetic or floats.
//! * [`potential`] — radial Newtonian potentials of mollifier bumps, closed-form
//!   angular Riesz kernels, scaled reference integrals, and the safe lower-bound
//!   constants A and B used by the construction.
//! * [`family`] — builds explicit unbounded solution families: trains of shrinking
//!   mollifier bumps with centers |x_j| = ½·5^{−j}, amplitudes chosen so the
//!   inequality holds while u(x_j) outruns any prescribed growth target.
//! * [`convolution`] / [`laplacian`] — singularity-aware quadrature of the Riesz
//!   convolution over the unit ball, and finite-difference Laplacian probes with
//!   Richardson refinement.
//! * [`verifier`] — certificate checks (pure arithmetic), direct numerical
//!   inequality checks, potential lower-bound checks, harmonicity and singular-limit
//!   diagnostics, and JSON verification reports.
//! * [`bootstrap`] — the integrability bootstrap in exact rational arithmetic:
//!   iterating a Sobolev/Riesz exponent ladder until L^∞ is reached, with a full
//!   machine-checkable trace.
//!
//! Everything that feeds a report is deterministic: sampling uses a seeded
//! ChaCha8 generator (default seed 42, overridable via `CHOQUARD_SEED`), and all
//! floating-point reductions use fixed summation orders.

pub mod bootstrap;
pub mod bump;
pub mod classifier;
pub mod config;
pub mod convolution;
pub mod error;
pub mod family;
pub mod field;
pub mod laplacian;
pub mod params;
pub mod potential;
pub mod quad;
pub mod ratio;
pub mod verifier;

pub use error::{Error, Result};
pub use params::{ExactParams, Params};
