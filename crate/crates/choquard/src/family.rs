//! Construction of unbounded solution families: trains of shrinking bumps.
//!
//! Given admissible parameters (n, α, λ, σ) strictly above the threshold
//! curve (or on one of its resolved-unbounded segments) and a growth target
//! φ(t) → ∞ as t → 0⁺, the builder produces an explicit nonnegative C²
//! function
//!
//! ```text
//!   u(x) = χ(|x|) · c_n Σ_j M_j r_j² Ψ(|x − x_j| / r_j),
//! ```
//!
//! the cut-off Newtonian potential of a train of mollifier bumps
//! f = Σ_j M_j ψ(|x − x_j|/r_j) placed at x_j = (½·5^{−j}, 0, …, 0). Here Ψ
//! is the radial potential profile of ψ and c_n the Newtonian normalization,
//! so −Δu = f exactly inside B₂ (where χ ≡ 1). The amplitudes follow the
//! regime normalization
//!
//! ```text
//!   M_j = ε_j / (r_j^n δ_j)            for λ ≤ n/(n−2)
//!   M_j = ε_j / r_j^{2+n/λ}            for λ > n/(n−2),
//! ```
//!
//! with ε_j = 2^{−j} and δ_j = 1 except exactly at λ = n/(n−2), where
//! δ_j = (log 1/r_j)^{(n−2)/n}. The radii r_j are chosen by halving from
//! |x_j|/8 until two certified constraints hold with 10% slack:
//!
//! * **growth** — the guaranteed ball value A·M_j r_j² exceeds j·φ(|x_j|),
//!   so u(x_j) outruns the target along the train;
//! * **inequality** — the source peak M_j is at most the certified product
//!   lower bound (B·ε_j^λ·regime factor)·(ball value)^σ, so
//!   0 ≤ −Δu ≤ (|x|^{−α} ∗ u^λ)·u^σ holds pointwise.
//!
//! Both constraints tighten monotonically as r_j decreases (their exponents
//! are positive in every buildable regime), so the halving loop terminates
//! or honestly reports infeasibility — including the exact-critical
//! configurations whose radii would have to shrink below what f64
//! represents. All constraint arithmetic runs in log space.

use serde::{Deserialize, Serialize};

use crate::bump::{cutoff_chi, psi, psi_mass, BumpProfile, CUTOFF_INNER, CUTOFF_OUTER};
use crate::classifier::{classify, regime_tag, RegimeTag, Verdict};
use crate::error::{Error, Result};
use crate::field::{Field, Point, Symmetry, Zone};
use crate::params::{newton_constant, Params};
use crate::potential::{
    constant_a, constant_b, radial_newtonian_potential, RadialPotentialTable, RefCase,
};

// ---------------------------------------------------------------------------
// Growth targets
// ---------------------------------------------------------------------------

/// Prescribed blow-up rate φ(t), evaluated for t ∈ (0, 1); the construction
/// guarantees u(x_j) > j·φ(|x_j|) along the bump train, hence
/// u(x)/φ(|x|) → ∞ along x_j → 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GrowthTarget {
    /// φ(t) = log(1/t).
    LogReciprocal,
    /// φ(t) = t^{−exponent}, exponent > 0.
    PowerReciprocal { exponent: f64 },
    /// φ given by positive samples (t_i, φ_i) with t ascending, interpolated
    /// linearly in log t and clamped to the end values outside the range.
    Tabulated { points: Vec<(f64, f64)> },
}

impl GrowthTarget {
    /// Validate the target's own invariants.
    pub fn validate(&self) -> Result<()> {
        match self {
            GrowthTarget::LogReciprocal => Ok(()),
            GrowthTarget::PowerReciprocal { exponent } => {
                if !(exponent.is_finite() && *exponent > 0.0) {
                    return Err(Error::Parameter(format!(
                        "power growth target needs a positive finite exponent, got {exponent}"
                    )));
                }
                Ok(())
            }
            GrowthTarget::Tabulated { points } => {
                if points.len() < 2 {
                    return Err(Error::Parameter(
                        "tabulated growth target needs at least two points".into(),
                    ));
                }
                for w in points.windows(2) {
                    if !(w[0].0 < w[1].0) {
                        return Err(Error::Parameter(
                            "tabulated growth target abscissae must be strictly ascending".into(),
                        ));
                    }
                }
                for &(t, v) in points {
                    if !(t > 0.0 && t.is_finite() && v > 0.0 && v.is_finite()) {
                        return Err(Error::Parameter(format!(
                            "tabulated growth target point ({t}, {v}) must be positive and finite"
                        )));
                    }
                }
                Ok(())
            }
        }
    }

    /// φ(t) for t ∈ (0, 1).
    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::Parameter(format!("growth target evaluated at t = {t} ∉ (0,1)")));
        }
        Ok(match self {
            GrowthTarget::LogReciprocal => -t.ln(),
            GrowthTarget::PowerReciprocal { exponent } => t.powf(-exponent),
            GrowthTarget::Tabulated { points } => {
                let first = points[0];
                let last = points[points.len() - 1];
                if t <= first.0 {
                    first.1
                } else if t >= last.0 {
                    last.1
                } else {
                    let i = points.partition_point(|&(ti, _)| ti < t);
                    let (t0, v0) = points[i - 1];
                    let (t1, v1) = points[i];
                    let w = (t.ln() - t0.ln()) / (t1.ln() - t0.ln());
                    v0 + w * (v1 - v0)
                }
            }
        })
    }
}

// ---------------------------------------------------------------------------
// Descriptor types (the exact serialized shape)
// ---------------------------------------------------------------------------

/// One bump of the train.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BumpSpec {
    /// Center in global coordinates (on the first axis).
    pub center: Vec<f64>,
    /// Bump radius r_j.
    pub r: f64,
    /// Decay weight ε_j = 2^{−j}.
    pub eps: f64,
    /// Source amplitude M_j.
    #[serde(rename = "M")]
    pub m: f64,
    /// Normalization δ_j (1 except at λ = n/(n−2)).
    pub delta: f64,
}

/// The cutoff radii, recorded so descriptors are self-describing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutoffSpec {
    pub inner: f64,
    pub outer: f64,
}

/// The certified potential-theoretic constants of the construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyConstants {
    /// Ball lower-bound constant: u ≥ A·M_j r_j² on each bump ball, and
    /// u ≥ A·(M_j r_j^n)/c_n-normalized monopole beyond it.
    #[serde(rename = "A")]
    pub a: f64,
    /// Convolution lower-bound constant of the regime's reference integral.
    #[serde(rename = "B")]
    pub b: f64,
}

/// A fully specified bump-train family — everything needed to re-evaluate
/// and re-verify the construction. This struct *is* the descriptor JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BumpFamily {
    pub params: Params,
    pub tag: RegimeTag,
    pub psi: BumpProfile,
    pub cutoff: CutoffSpec,
    pub constants: FamilyConstants,
    pub bumps: Vec<BumpSpec>,
    pub phi: GrowthTarget,
}

/// Reference-integral regime used for the constant B of a growth regime.
pub fn ref_case(tag: RegimeTag) -> RefCase {
    match tag {
        RegimeTag::SubLow => RefCase::GrowingPower,
        RegimeTag::MidCritLow => RefCase::GrowingLog,
        RegimeTag::MidSloped | RegimeTag::MidTop => RefCase::Saturating,
        RegimeTag::High => RefCase::UnitBall,
    }
}

// ---------------------------------------------------------------------------
// Regime constraint rows (log-space)
// ---------------------------------------------------------------------------

/// The two per-bump constraint rows, evaluated in log space.
///
/// `growth`: log(j·φ(|x_j|)) ≤ log(slack·A·M_j·r_j²) — the certified ball
/// value beats the target.
/// `inequality`: log M_j ≤ log(slack · conv_lower(r_j) · ball^σ) with
/// conv_lower the regime's certified convolution bound on the bump ball.
#[derive(Debug, Clone, Copy)]
pub struct ConstraintRow {
    /// Left-hand side, log scale.
    pub lhs_log: f64,
    /// Right-hand side including slack, log scale.
    pub rhs_log: f64,
}

impl ConstraintRow {
    pub fn holds(&self) -> bool {
        self.lhs_log <= self.rhs_log
    }
    /// Slack margin in log units (≥ 0 when the row holds).
    pub fn margin(&self) -> f64 {
        self.rhs_log - self.lhs_log
    }
}

/// Normalization δ(r) of the regime on a candidate radius (log scale input).
fn delta_log(tag: RegimeTag, n: u32, ln_r: f64) -> f64 {
    match tag {
        RegimeTag::MidTop => {
            let nf = n as f64;
            ((nf - 2.0) / nf) * (-ln_r).ln()
        }
        _ => 0.0,
    }
}

/// log M(r) for the regime normalization.
fn amplitude_log(tag: RegimeTag, p: &Params, ln_eps: f64, ln_r: f64) -> f64 {
    let nf = p.nf();
    match tag {
        RegimeTag::High => ln_eps - (2.0 + nf / p.lambda) * ln_r,
        _ => ln_eps - nf * ln_r - delta_log(tag, p.n, ln_r),
    }
}

/// log of the certified convolution lower bound on the bump ball:
/// conv ≥ B · ε^λ · δ^{−λ} · factor(r), with the regime factor
///
/// ```text
///   SubLow      1
///   MidCritLow  log(1/r)
///   MidSloped   r^{n−α−(n−2)λ}        (negative exponent: grows as r ↓ 0)
///   MidTop      r^{−α}·δ-free power   (same formula, λ = n/(n−2))
///   High        r^{−α}
/// ```
fn conv_lower_log(tag: RegimeTag, p: &Params, ln_b: f64, ln_eps: f64, ln_r: f64) -> f64 {
    let nf = p.nf();
    let base = ln_b + p.lambda * (ln_eps - delta_log(tag, p.n, ln_r));
    match tag {
        RegimeTag::SubLow => base,
        RegimeTag::MidCritLow => base + (-ln_r).ln(),
        RegimeTag::MidSloped | RegimeTag::MidTop => {
            base + (nf - p.alpha - (nf - 2.0) * p.lambda) * ln_r
        }
        RegimeTag::High => base - p.alpha * ln_r,
    }
}

/// log of the certified ball lower bound u ≥ A·M·r² on the bump ball.
fn ball_lower_log(ln_a: f64, ln_m: f64, ln_r: f64) -> f64 {
    ln_a + ln_m + 2.0 * ln_r
}

/// Evaluate both constraint rows for bump j at a candidate log-radius.
#[allow(clippy::too_many_arguments)]
fn constraint_rows(
    tag: RegimeTag,
    p: &Params,
    ln_a: f64,
    ln_b: f64,
    j: u32,
    phi_j: f64,
    ln_eps: f64,
    ln_r: f64,
    slack: f64,
) -> (ConstraintRow, ConstraintRow) {
    let ln_m = amplitude_log(tag, p, ln_eps, ln_r);
    let ball = ball_lower_log(ln_a, ln_m, ln_r);
    let growth = ConstraintRow {
        lhs_log: (j as f64 * phi_j).ln(),
        rhs_log: slack.ln() + ball,
    };
    let inequality = ConstraintRow {
        lhs_log: ln_m,
        rhs_log: slack.ln() + conv_lower_log(tag, p, ln_b, ln_eps, ln_r) + p.sigma * ball,
    };
    (growth, inequality)
}

/// The inequality row's leading coefficient of ln r in (lhs − rhs): the row
/// reads E·ln r + (lower-order log-log terms) ≤ const, which shrinking r
/// (ln r → −∞) eventually satisfies only when E > 0 — equivalently when the
/// classical form r^E ≤ A^σ B ε^{λ+σ−1} has positive exponent E.
fn inequality_lnr_coefficient(tag: RegimeTag, p: &Params) -> f64 {
    let nf = p.nf();
    let nm2 = nf - 2.0;
    match tag {
        // lhs ε/r^n vs rhs (Aε/r^{n−2})^σ: coefficient of ln r in lhs−rhs.
        RegimeTag::SubLow | RegimeTag::MidCritLow => -nf + nm2 * p.sigma,
        RegimeTag::MidSloped | RegimeTag::MidTop => {
            -nf - (nf - p.alpha - nm2 * p.lambda) + nm2 * p.sigma
        }
        RegimeTag::High => {
            let nl = nf / p.lambda;
            -(2.0 + nl) + p.alpha + nl * p.sigma
        }
    }
}

// ---------------------------------------------------------------------------
// Sequence selection
// ---------------------------------------------------------------------------

/// Relative slack applied to every certified constraint (10%).
pub const CONSTRAINT_SLACK: f64 = 0.9;
/// Halving-iteration cap per bump.
pub const MAX_HALVINGS: usize = 10_000;
/// Smallest representable-by-policy bump radius; below this the construction
/// is declared float-infeasible.
pub const MIN_RADIUS: f64 = 1e-60;

/// Choose centers, weights, radii, and amplitudes for a `j_count`-bump train.
///
/// Fails with a parameter error for invalid inputs, and with a regime
/// infeasibility (carrying the reason) when classification says the point
/// admits a pointwise bound, when the inequality row's exponent is not
/// positive (exact-critical configurations), or when satisfying the
/// constraints would push a radius below [`MIN_RADIUS`].
pub fn choose_sequences(p: &Params, phi: &GrowthTarget, j_count: u32) -> Result<BumpFamily> {
    p.validate()?;
    phi.validate()?;
    if j_count == 0 {
        return Err(Error::Parameter("a family needs at least one bump".into()));
    }
    let verdict = classify(p)?;
    match verdict.verdict {
        Verdict::NoPointwiseBound | Verdict::CriticalNoBound => {}
        v => {
            return Err(Error::RegimeInfeasible(format!(
                "no blow-up family exists at (n, α, λ, σ) = ({}, {}, {}, {}): \
                 classification is {v} (σ vs g_α(λ) = {})",
                p.n, p.alpha, p.lambda, p.sigma, verdict.g_value
            )));
        }
    }
    let tag = regime_tag(p.n, p.alpha, p.lambda)?;
    let lnr_coeff = inequality_lnr_coefficient(tag, p);
    if lnr_coeff <= 0.0 {
        return Err(Error::RegimeInfeasible(format!(
            "the {tag} inequality constraint has ln r coefficient {lnr_coeff} ≤ 0: \
             shrinking the bump radius never satisfies it. This happens exactly on \
             the critical line of this regime (e.g. σ = n/(n−2) at λ = (n−α)/(n−2)), \
             where the required radii decay like exp(−c·2^{{cj}}) and leave the \
             representable floating-point range immediately"
        )));
    }

    let table = RadialPotentialTable::build(BumpProfile::SmoothStandard, p.n)?;
    let a = constant_a(&table);
    let b = constant_b(&table, p.lambda, p.alpha, ref_case(tag))?;
    let (ln_a, ln_b) = (a.ln(), b.ln());

    let mut bumps = Vec::with_capacity(j_count as usize);
    for j in 1..=j_count {
        let center = 0.5 * 5f64.powi(-(j as i32));
        let phi_j = phi.eval(center)?;
        let eps = 2f64.powi(-(j as i32));
        let ln_eps = eps.ln();
        let mut ln_r = (center / 8.0).ln();
        let mut halvings = 0usize;
        loop {
            let (growth, inequality) =
                constraint_rows(tag, p, ln_a, ln_b, j, phi_j, ln_eps, ln_r, CONSTRAINT_SLACK);
            if growth.holds() && inequality.holds() {
                break;
            }
            ln_r -= std::f64::consts::LN_2;
            halvings += 1;
            if ln_r < MIN_RADIUS.ln() {
                return Err(Error::RegimeInfeasible(format!(
                    "bump {j}: satisfying the {tag} constraints needs r < {MIN_RADIUS:e}, \
                     outside the supported floating-point range (growth margin {:.3e}, \
                     inequality margin {:.3e} at the cut-off radius)",
                    growth.margin(),
                    inequality.margin()
                )));
            }
            if halvings > MAX_HALVINGS {
                return Err(Error::RegimeInfeasible(format!(
                    "bump {j}: constraint halving did not converge in {MAX_HALVINGS} steps"
                )));
            }
        }
        let r = ln_r.exp();
        let delta = delta_log(tag, p.n, ln_r).exp();
        let m = amplitude_log(tag, p, ln_eps, ln_r).exp();
        if !(r.is_finite() && r > 0.0 && m.is_finite() && m > 0.0 && delta.is_finite()) {
            return Err(Error::RegimeInfeasible(format!(
                "bump {j}: non-representable construction data (r = {r:e}, M = {m:e})"
            )));
        }
        let mut c = vec![0.0; p.n as usize];
        c[0] = center;
        bumps.push(BumpSpec { center: c, r, eps, m, delta });
    }

    let family = BumpFamily {
        params: *p,
        tag,
        psi: BumpProfile::SmoothStandard,
        cutoff: CutoffSpec { inner: CUTOFF_INNER, outer: CUTOFF_OUTER },
        constants: FamilyConstants { a, b },
        bumps,
        phi: phi.clone(),
    };
    family.check_invariants()?;
    Ok(family)
}

impl BumpFamily {
    /// Structural invariants every family must satisfy; called after
    /// construction and after deserializing a descriptor.
    pub fn check_invariants(&self) -> Result<()> {
        self.params.validate()?;
        self.phi.validate()?;
        if self.bumps.is_empty() {
            return Err(Error::Parameter("family has no bumps".into()));
        }
        if !(self.constants.a > 0.0 && self.constants.b > 0.0) {
            return Err(Error::Parameter("family constants A, B must be positive".into()));
        }
        let n = self.params.n as usize;
        for (i, bs) in self.bumps.iter().enumerate() {
            if bs.center.len() != n {
                return Err(Error::Parameter(format!(
                    "bump {i}: center has dimension {}, expected {n}",
                    bs.center.len()
                )));
            }
            if bs.center[1..].iter().any(|&c| c != 0.0) {
                return Err(Error::Parameter(format!("bump {i}: center is off the first axis")));
            }
            let cj = bs.center[0];
            if !(cj > 0.0 && cj < 0.5 + 1e-12) {
                return Err(Error::Parameter(format!(
                    "bump {i}: center {cj} outside (0, 1/2]"
                )));
            }
            if !(bs.r > 0.0 && 4.0 * bs.r < cj) {
                return Err(Error::Parameter(format!(
                    "bump {i}: radius {} violates 0 < 4r < |center| = {cj}",
                    bs.r
                )));
            }
            if !(bs.eps > 0.0 && bs.eps <= 0.5 && bs.m > 0.0 && bs.delta >= 1.0) {
                return Err(Error::Parameter(format!(
                    "bump {i}: weights out of range (eps = {}, M = {}, delta = {})",
                    bs.eps, bs.m, bs.delta
                )));
            }
            // Support inside B_{3/4}, with room to spare.
            if cj + bs.r > 0.75 {
                return Err(Error::Parameter(format!("bump {i}: support leaves B_3/4")));
            }
        }
        for w in self.bumps.windows(2) {
            let (outer, inner) = (&w[0], &w[1]);
            if !(4.0 * inner.center[0] < outer.center[0]) {
                return Err(Error::Parameter(
                    "bump centers must shrink by more than 4× per step".into(),
                ));
            }
            // Geometric separation: the supports (and their zones) are
            // pairwise disjoint, ordered outward.
            if !(outer.center[0] - outer.r > inner.center[0] + inner.r) {
                return Err(Error::Parameter("bump supports overlap".into()));
            }
        }
        Ok(())
    }

    /// Canonical descriptor JSON (pretty, stable field order).
    pub fn to_descriptor_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Parse and validate a descriptor.
    pub fn from_descriptor_json(text: &str) -> Result<Self> {
        let fam: BumpFamily =
            serde_json::from_str(text).map_err(|e| Error::Parameter(format!("descriptor: {e}")))?;
        fam.check_invariants()?;
        Ok(fam)
    }

    /// The two certified constraint rows of bump `j0` (0-based index),
    /// evaluated exactly as the builder saw them (10% slack included).
    pub fn constraint_rows_for(&self, j0: usize) -> Result<(ConstraintRow, ConstraintRow)> {
        let bs = self
            .bumps
            .get(j0)
            .ok_or_else(|| Error::Parameter(format!("bump index {j0} out of range")))?;
        let j = j0 as u32 + 1;
        let phi_j = self.phi.eval(bs.center[0])?;
        Ok(constraint_rows(
            self.tag,
            &self.params,
            self.constants.a.ln(),
            self.constants.b.ln(),
            j,
            phi_j,
            bs.eps.ln(),
            bs.r.ln(),
            CONSTRAINT_SLACK,
        ))
    }

    /// Certified convolution lower bound (|x|^{−α} ∗ u^λ) ≥ this value,
    /// valid everywhere on the bump-`j0` ball.
    pub fn conv_lower_bound(&self, j0: usize) -> Result<f64> {
        let bs = self
            .bumps
            .get(j0)
            .ok_or_else(|| Error::Parameter(format!("bump index {j0} out of range")))?;
        Ok(conv_lower_log(
            self.tag,
            &self.params,
            self.constants.b.ln(),
            bs.eps.ln(),
            bs.r.ln(),
        )
        .exp())
    }

    /// Certified pointwise lower bound on u at distance `dist_in_cores`·r_j
    /// from the center of bump `j0`: the ball bound A·M r² inside the ball,
    /// and the monopole bound A·(M r^n)·d^{2−n} (normalized by c_n already
    /// folded into A) out to distance 1.
    pub fn u_lower_bound(&self, j0: usize, dist_in_cores: f64) -> Result<f64> {
        let bs = self
            .bumps
            .get(j0)
            .ok_or_else(|| Error::Parameter(format!("bump index {j0} out of range")))?;
        if dist_in_cores < 0.0 {
            return Err(Error::Parameter("negative distance".into()));
        }
        let (ln_m, ln_r) = (bs.m.ln(), bs.r.ln());
        let ln_a = self.constants.a.ln();
        if dist_in_cores <= 1.0 {
            Ok(ball_lower_log(ln_a, ln_m, ln_r).exp())
        } else {
            let d_log = ln_r + dist_in_cores.ln();
            if d_log > 0.0 {
                return Err(Error::Parameter(
                    "monopole lower bound only certified out to distance 1".into(),
                ));
            }
            let nf = self.params.nf();
            Ok((ln_a + ln_m + nf * ln_r + (2.0 - nf) * d_log).exp())
        }
    }
}

// ---------------------------------------------------------------------------
// The evaluated solution field
// ---------------------------------------------------------------------------

/// A bump-train family together with everything needed to evaluate it:
/// the radial potential table (fast path), the potential mass, and
/// precomputed per-bump coefficients.
pub struct SolutionField {
    pub family: BumpFamily,
    table: RadialPotentialTable,
    /// c_n · M_j · r_j² — coefficient of Ψ(t) inside bump j.
    amp: Vec<f64>,
    /// c_n · mass · M_j · r_j^n — monopole coefficient beyond bump j.
    monopole: Vec<f64>,
    zones: Vec<Zone>,
}

impl SolutionField {
    pub fn new(family: BumpFamily) -> Result<Self> {
        family.check_invariants()?;
        let n = family.params.n;
        let table = RadialPotentialTable::build(BumpProfile::SmoothStandard, n)?;
        let cn = newton_constant(n);
        let mass = psi_mass(n);
        let mut amp = Vec::with_capacity(family.bumps.len());
        let mut monopole = Vec::with_capacity(family.bumps.len());
        let mut zones = Vec::with_capacity(family.bumps.len());
        for bs in &family.bumps {
            // ln-assembled to survive extreme radii: M·r² and M·r^n both
            // stay well inside f64 range whenever M and r do.
            let a = (bs.m.ln() + 2.0 * bs.r.ln()).exp() * cn;
            let mo = (bs.m.ln() + n as f64 * bs.r.ln()).exp() * cn * mass;
            if !(a.is_finite() && mo.is_finite()) {
                return Err(Error::RegimeInfeasible(format!(
                    "bump coefficients overflow f64 (amp = {a:e}, monopole = {mo:e})"
                )));
            }
            amp.push(a);
            monopole.push(mo);
            zones.push(Zone { center: bs.center[0], radius: bs.center[0] / 4.0, core: bs.r });
        }
        Ok(SolutionField { family, table, amp, monopole, zones })
    }

    fn nf(&self) -> f64 {
        self.family.params.n as f64
    }

    /// Potential profile Ψ(t), fast (tabulated) path.
    fn psi_potential_fast(&self, t: f64) -> f64 {
        self.table.eval(t)
    }

    /// Potential profile Ψ(t), exact quadrature path.
    fn psi_potential_exact(&self, t: f64) -> f64 {
        radial_newtonian_potential(BumpProfile::SmoothStandard, t, self.family.params.n)
            .expect("radial potential of the standard profile is defined for all t ≥ 0")
    }

    /// Contribution of bump `k` at scaled distance t = |y − x_k|/r_k, with
    /// the self-ball profile evaluated through `profile`.
    fn bump_term(&self, k: usize, t: f64, exact: bool) -> f64 {
        if t >= 1.0 {
            // Beyond its own ball every bump is exactly a monopole:
            // Ψ(t) = mass·t^{2−n}. Evaluate via the monopole coefficient,
            // in a form that survives r_k^{2−n} overflow for tiny cores.
            let d_log = self.family.bumps[k].r.ln() + t.ln();
            self.monopole[k] * ((2.0 - self.nf()) * d_log).exp()
        } else if exact {
            self.amp[k] * self.psi_potential_exact(t)
        } else {
            self.amp[k] * self.psi_potential_fast(t)
        }
    }

    fn eval_global_impl(&self, y: &[f64], exact: bool) -> f64 {
        let rho2: f64 = y.iter().map(|v| v * v).sum();
        let rho = rho2.sqrt();
        if rho >= CUTOFF_OUTER {
            return 0.0;
        }
        let chi = if rho <= CUTOFF_INNER { 1.0 } else { cutoff_chi(rho) };
        let mut sum = 0.0;
        for (k, bs) in self.family.bumps.iter().enumerate() {
            let mut d2 = (y[0] - bs.center[0]) * (y[0] - bs.center[0]);
            for v in &y[1..] {
                d2 += v * v;
            }
            let d = d2.sqrt();
            let t = d / bs.r;
            sum += self.bump_term(k, t, exact);
        }
        chi * sum
    }

    fn eval_zone_local_impl(&self, zone: usize, eta: &[f64], exact: bool) -> f64 {
        let z = self.zones[zone];
        // Inside a zone |y| ≤ 1.25·|x_k| ≤ 1/8 < 2: the cutoff is invisible.
        let mut sum = 0.0;
        let t_self: f64 = eta.iter().map(|v| v * v).sum::<f64>().sqrt();
        sum += self.bump_term(zone, t_self, exact);
        for (k, bs) in self.family.bumps.iter().enumerate() {
            if k == zone {
                continue;
            }
            // |x_zone + r·η − x_k|, assembled without forming the absorbed
            // global point: the axis gap is O(center scales) ≫ r·|η| error.
            let dx = (z.center - bs.center[0]) + z.core * eta[0];
            let mut d2 = dx * dx;
            for v in &eta[1..] {
                let w = z.core * v;
                d2 += w * w;
            }
            let t = d2.sqrt() / bs.r;
            sum += self.bump_term(k, t, exact);
        }
        sum
    }

    /// The smooth source f = −Δu (valid inside B₂ where χ ≡ 1):
    /// f(y) = Σ_k M_k ψ(|y − x_k|/r_k).
    pub fn source_at(&self, p: &Point) -> f64 {
        match p {
            Point::Global(y) => {
                let mut sum = 0.0;
                for bs in &self.family.bumps {
                    let mut d2 = (y[0] - bs.center[0]) * (y[0] - bs.center[0]);
                    for v in &y[1..] {
                        d2 += v * v;
                    }
                    let t = d2.sqrt() / bs.r;
                    if t < 1.0 {
                        sum += bs.m * psi(t);
                    }
                }
                sum
            }
            Point::ZoneLocal { zone, eta } => {
                // Disjoint supports: only the own bump can contribute.
                let t: f64 = eta.iter().map(|v| v * v).sum::<f64>().sqrt();
                if t < 1.0 {
                    self.family.bumps[*zone].m * psi(t)
                } else {
                    0.0
                }
            }
        }
    }

    /// u at the center of bump `j0` (exact path) — the blow-up witness.
    pub fn center_value(&self, j0: usize) -> f64 {
        let n = self.family.params.n as usize;
        self.eval_zone_local_impl(j0, &vec![0.0; n], true)
    }

    /// The blow-up certificate: (j, u(x_j), j·φ(|x_j|)) for every bump,
    /// u evaluated on the exact path. The family promises strict `>`.
    pub fn blowup_certificate(&self) -> Result<Vec<(u32, f64, f64)>> {
        let mut rows = Vec::with_capacity(self.family.bumps.len());
        for (j0, bs) in self.family.bumps.iter().enumerate() {
            let j = j0 as u32 + 1;
            let target = j as f64 * self.family.phi.eval(bs.center[0])?;
            rows.push((j, self.center_value(j0), target));
        }
        Ok(rows)
    }
}

impl Field for SolutionField {
    fn n(&self) -> u32 {
        self.family.params.n
    }
    fn symmetry(&self) -> Symmetry {
        Symmetry::AxialFirstAxis
    }
    fn eval_global(&self, y: &[f64]) -> f64 {
        self.eval_global_impl(y, false)
    }
    fn eval_global_exact(&self, y: &[f64]) -> f64 {
        self.eval_global_impl(y, true)
    }
    fn zones(&self) -> &[Zone] {
        &self.zones
    }
    fn eval_zone_local(&self, zone: usize, eta: &[f64]) -> f64 {
        self.eval_zone_local_impl(zone, eta, false)
    }
    fn eval_zone_local_exact(&self, zone: usize, eta: &[f64]) -> f64 {
        self.eval_zone_local_impl(zone, eta, true)
    }
    /// u is C∞ everywhere except the two cutoff seams (χ is C² there);
    /// global points are also kept away from zones, where the *fast* path
    /// switches between table and monopole representations.
    fn clearance(&self, p: &Point) -> f64 {
        match p {
            Point::Global(y) => {
                let rho: f64 = y.iter().map(|v| v * v).sum::<f64>().sqrt();
                let mut c = (rho - CUTOFF_INNER).abs().min((rho - CUTOFF_OUTER).abs());
                for z in &self.zones {
                    let mut d2 = (y[0] - z.center) * (y[0] - z.center);
                    for v in &y[1..] {
                        d2 += v * v;
                    }
                    c = c.min((d2.sqrt() - z.radius).abs());
                }
                c
            }
            // In core units: stay inside the zone (radius/core from the
            // center); the field is smooth across the support edge |η| = 1,
            // so only the zone boundary limits the stencil.
            Point::ZoneLocal { zone, eta } => {
                let z = self.zones[*zone];
                let t: f64 = eta.iter().map(|v| v * v).sum::<f64>().sqrt();
                z.radius / z.core - t
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params(n: u32, alpha: f64, lambda: f64, sigma: f64) -> Params {
        Params::new(n, alpha, lambda, sigma).unwrap()
    }

    /// Growth targets: φ(0.1) values for all three kinds.
    #[test]
    fn growth_target_values() {
        assert_relative_eq!(
            GrowthTarget::LogReciprocal.eval(0.1).unwrap(),
            std::f64::consts::LN_10,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            GrowthTarget::PowerReciprocal { exponent: 0.5 }.eval(0.04).unwrap(),
            5.0,
            max_relative = 1e-12
        );
        let tab = GrowthTarget::Tabulated { points: vec![(1e-4, 8.0), (1e-2, 4.0), (0.5, 2.0)] };
        tab.validate().unwrap();
        // Midpoint in log scale between 1e−4 and 1e−2 is 1e−3: value 6.
        assert_relative_eq!(tab.eval(1e-3).unwrap(), 6.0, max_relative = 1e-12);
        // Clamped below the table.
        assert_eq!(tab.eval(1e-6).unwrap(), 8.0);
    }

    #[test]
    fn growth_target_rejects_bad_tables() {
        assert!(GrowthTarget::PowerReciprocal { exponent: 0.0 }.validate().is_err());
        assert!(GrowthTarget::Tabulated { points: vec![(0.1, 1.0)] }.validate().is_err());
        assert!(GrowthTarget::Tabulated { points: vec![(0.2, 1.0), (0.1, 2.0)] }
            .validate()
            .is_err());
        assert!(GrowthTarget::Tabulated { points: vec![(0.1, -1.0), (0.2, 1.0)] }
            .validate()
            .is_err());
    }

    /// The standard 3-bump log-growth family in the power-growth regime
    /// (n, α, λ, σ) = (3, 1, 1, 4): builds, and every structural invariant
    /// plus both constraint rows hold with slack.
    #[test]
    fn sublow_family_builds_with_certified_margins() {
        let fam = choose_sequences(&params(3, 1.0, 1.0, 4.0), &GrowthTarget::LogReciprocal, 3)
            .expect("(3,1,1,4) is strictly above the curve");
        assert_eq!(fam.tag, RegimeTag::SubLow);
        assert_eq!(fam.bumps.len(), 3);
        for (j0, bs) in fam.bumps.iter().enumerate() {
            assert_relative_eq!(bs.center[0], 0.5 * 5f64.powi(-(j0 as i32 + 1)));
            assert_eq!(bs.delta, 1.0, "SubLow normalization is δ = 1");
            let (growth, ineq) = fam.constraint_rows_for(j0).unwrap();
            assert!(growth.holds() && ineq.holds(), "bump {j0} rows must hold");
        }
        // Certified inequality chain in classical form:
        // M_j ≤ 0.9·B ε^λ · (0.9-free ball)^σ — margin already includes slack.
        let (_, ineq) = fam.constraint_rows_for(2).unwrap();
        assert!(ineq.margin() >= 0.0);
    }

    /// Regimes across the λ range at n = 3: each picks its tag and builds.
    #[test]
    fn all_five_regimes_build_or_report() {
        // MidCritLow: λ = (n−α)/(n−2) = 2 at α = 1; σ = 4 > g = 3.
        let fam =
            choose_sequences(&params(3, 1.0, 2.0, 4.0), &GrowthTarget::LogReciprocal, 2).unwrap();
        assert_eq!(fam.tag, RegimeTag::MidCritLow);
        // MidSloped: λ = 2.5 ∈ (2, 3), g = (2n−α)/(n−2) − λ = 5 − 2.5 = 2.5; σ = 3.
        let fam =
            choose_sequences(&params(3, 1.0, 2.5, 3.0), &GrowthTarget::LogReciprocal, 2).unwrap();
        assert_eq!(fam.tag, RegimeTag::MidSloped);
        // MidTop: λ = 3 = n/(n−2); σ = 3 > g = 2.
        let fam =
            choose_sequences(&params(3, 1.0, 3.0, 3.0), &GrowthTarget::LogReciprocal, 2).unwrap();
        assert_eq!(fam.tag, RegimeTag::MidTop);
        for bs in &fam.bumps {
            assert!(bs.delta > 1.0, "MidTop carries a log normalization");
        }
        // High: λ = 4, α = 4: g = 0; σ = 1.
        let fam =
            choose_sequences(&params(3, 4.0, 4.0, 1.0), &GrowthTarget::LogReciprocal, 2).unwrap();
        assert_eq!(fam.tag, RegimeTag::High);
    }

    /// Below or on the bounded side of the curve: an explanatory regime
    /// error, not a family.
    #[test]
    fn bounded_region_is_infeasible() {
        let err = choose_sequences(&params(3, 1.0, 1.0, 2.0), &GrowthTarget::LogReciprocal, 3)
            .unwrap_err();
        assert_eq!(err.exit_code(), 3, "bounded region must map to exit 3: {err}");
        // Critical flat interior (σ = g = 3, λ = 1): still bounded.
        let err = choose_sequences(&params(3, 1.0, 1.0, 3.0), &GrowthTarget::LogReciprocal, 3)
            .unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }

    /// The exact-critical corner λ = (n−α)/(n−2), σ = n/(n−2) is a genuine
    /// blow-up point but its radii decay beyond f64: reported as regime
    /// infeasibility with the ln r coefficient explanation.
    #[test]
    fn exact_critical_corner_is_float_infeasible() {
        let err = choose_sequences(&params(3, 1.0, 2.0, 3.0), &GrowthTarget::LogReciprocal, 3)
            .unwrap_err();
        match &err {
            Error::RegimeInfeasible(msg) => {
                assert!(msg.contains("ln r coefficient"), "unexpected message: {msg}")
            }
            other => panic!("expected regime infeasibility, got {other}"),
        }
    }

    /// The deep-tail critical point (3, 4, 4, 0) — σ = g = 0 with
    /// λ(α−2) > n — is resolved-unbounded and must build.
    #[test]
    fn deep_tail_critical_point_builds() {
        let fam =
            choose_sequences(&params(3, 4.0, 4.0, 0.0), &GrowthTarget::LogReciprocal, 2).unwrap();
        assert_eq!(fam.tag, RegimeTag::High);
        assert!(fam.bumps[0].r > 0.0);
    }

    /// Descriptor JSON: exact field names, and a parse → serialize round
    /// trip is byte-identical (stable key order, shortest-roundtrip floats).
    #[test]
    fn descriptor_field_names_and_roundtrip() {
        let fam = choose_sequences(&params(3, 1.0, 1.0, 4.0), &GrowthTarget::LogReciprocal, 2)
            .unwrap();
        let json = fam.to_descriptor_json().unwrap();
        for key in
            ["\"params\"", "\"tag\"", "\"psi\"", "\"cutoff\"", "\"constants\"", "\"A\"", "\"B\"",
             "\"bumps\"", "\"center\"", "\"r\"", "\"eps\"", "\"M\"", "\"delta\"", "\"phi\"",
             "\"kind\"", "\"smooth_standard\"", "\"log_reciprocal\""]
        {
            assert!(json.contains(key), "descriptor must contain {key}:\n{json}");
        }
        let back = BumpFamily::from_descriptor_json(&json).unwrap();
        assert_eq!(back, fam);
        assert_eq!(back.to_descriptor_json().unwrap(), json);
    }

    /// Tampered descriptors fail validation: overlapping supports, off-axis
    /// centers, oversized radii.
    #[test]
    fn descriptor_validation_rejects_tampering() {
        let fam = choose_sequences(&params(3, 1.0, 1.0, 4.0), &GrowthTarget::LogReciprocal, 2)
            .unwrap();
        let mut bad = fam.clone();
        bad.bumps[0].r = bad.bumps[0].center[0]; // violates 4r < |center|
        assert!(bad.check_invariants().is_err());
        let mut bad = fam.clone();
        bad.bumps[1].center[1] = 1e-3;
        assert!(bad.check_invariants().is_err());
        let mut bad = fam;
        bad.bumps[1].center[0] = bad.bumps[0].center[0] / 2.0; // 4× shrink violated
        assert!(bad.check_invariants().is_err());
    }

    /// Zone-local and global evaluation agree where both are representable
    /// (moderate radii), on both fidelity paths.
    #[test]
    fn zone_local_matches_global_at_moderate_scale() {
        let fam = choose_sequences(&params(3, 1.0, 1.0, 4.0), &GrowthTarget::LogReciprocal, 2)
            .unwrap();
        let f = SolutionField::new(fam).unwrap();
        assert!(f.zones()[0].core > 1e-8, "bump 1 of this family has a representable core");
        for eta in [[0.0, 0.0, 0.0], [0.5, 0.25, -0.25], [3.0, -2.0, 1.0]] {
            let local = f.eval_zone_local(0, &eta);
            let z = f.zones()[0];
            let y = [z.center + z.core * eta[0], z.core * eta[1], z.core * eta[2]];
            let global = f.eval_global(&y);
            assert_relative_eq!(local, global, max_relative = 1e-9);
            let local_e = f.eval_zone_local_exact(0, &eta);
            let global_e = f.eval_global_exact(&y);
            assert_relative_eq!(local_e, global_e, max_relative = 1e-9);
        }
    }

    /// The solution is the potential of its source: u > 0, decays outside
    /// the cutoff, and the source vanishes outside the bump supports.
    #[test]
    fn field_support_and_source() {
        let fam = choose_sequences(&params(3, 1.0, 1.0, 4.0), &GrowthTarget::LogReciprocal, 2)
            .unwrap();
        let f = SolutionField::new(fam).unwrap();
        assert!(f.eval_global(&[0.3, 0.1, 0.0]) > 0.0);
        assert_eq!(f.eval_global(&[3.0, 0.1, 0.0]), 0.0);
        // Source at a bump center is M_j; between bumps it is 0.
        let m0 = f.family.bumps[0].m;
        let at_center = f.source_at(&Point::ZoneLocal { zone: 0, eta: vec![0.0; 3] });
        assert_relative_eq!(at_center, m0, max_relative = 1e-15);
        assert_eq!(f.source_at(&Point::Global(vec![0.05, 0.0, 0.0])), 0.0);
        // Clearance at a zone-local point counts in core units.
        let c = f.clearance(&Point::ZoneLocal { zone: 0, eta: vec![0.0; 3] });
        let z = f.zones()[0];
        assert_relative_eq!(c, z.radius / z.core, max_relative = 1e-12);
    }

    /// Blow-up certificate: u(x_j) > j·φ(|x_j|) strictly for every bump,
    /// and the witness values increase along the train.
    #[test]
    fn blowup_certificate_beats_target() {
        let fam = choose_sequences(&params(3, 1.0, 1.0, 4.0), &GrowthTarget::LogReciprocal, 3)
            .unwrap();
        let f = SolutionField::new(fam).unwrap();
        let rows = f.blowup_certificate().unwrap();
        assert_eq!(rows.len(), 3);
        let mut prev = 0.0;
        for (j, value, target) in rows {
            assert!(value > target, "bump {j}: u = {value} must beat target {target}");
            assert!(value > prev, "bump {j}: center values must increase");
            prev = value;
        }
    }

    /// Certified pointwise lower bounds hold against exact evaluation: the
    /// ball bound inside the bump and the monopole bound out to distance 1.
    #[test]
    fn u_lower_bounds_hold_pointwise() {
        let fam = choose_sequences(&params(3, 1.0, 1.0, 4.0), &GrowthTarget::LogReciprocal, 2)
            .unwrap();
        let f = SolutionField::new(fam).unwrap();
        for j0 in 0..2 {
            for t in [0.0, 0.3, 0.9, 1.0] {
                let bound = f.family.u_lower_bound(j0, t).unwrap();
                let eta = vec![t, 0.0, 0.0];
                let u = f.eval_zone_local_exact(j0, &eta);
                assert!(
                    u >= bound,
                    "bump {j0}, |η| = {t}: u = {u:e} below certified bound {bound:e}"
                );
            }
            for t in [2.0, 10.0] {
                let bound = f.family.u_lower_bound(j0, t).unwrap();
                let u = f.eval_zone_local_exact(j0, &vec![t, 0.0, 0.0]);
                assert!(u >= bound, "bump {j0}, annulus |η| = {t}: {u:e} < {bound:e}");
            }
        }
    }

    /// Longer trains reach higher: the maximal witness value strictly
    /// increases with the number of bumps.
    #[test]
    fn longer_trains_blow_up_higher() {
        let mut prev_max = 0.0;
        for j_count in [2u32, 4] {
            let fam =
                choose_sequences(&params(3, 1.0, 1.0, 4.0), &GrowthTarget::LogReciprocal, j_count)
                    .unwrap();
            let f = SolutionField::new(fam).unwrap();
            let max = f
                .blowup_certificate()
                .unwrap()
                .iter()
                .map(|r| r.1)
                .fold(0.0f64, f64::max);
            assert!(max > prev_max, "train of {j_count} must top {prev_max}");
            prev_max = max;
        }
    }
}
