//! Verification reports for constructed blow-up families and reference fixtures.
//!
//! A solution candidate is interrogated from several independent directions —
//! exact algebra on the stored certificate, singularity-aware quadrature of the
//! convolution term, finite-difference Laplacian probes, and singular-limit
//! diagnostics at the origin — and every verdict lands in a deterministic JSON
//! report keyed by a hash of the candidate's descriptor.
//!
//! The five checks:
//!
//! * [`certificate_check`] — replays the construction certificate by pure
//!   arithmetic: the region classification gate (an unbounded family may only
//!   exist above the threshold curve), the geometric invariants, per-bump
//!   amplitude/normalization consistency (M_j and δ_j re-derived from ε_j and
//!   r_j by an independent evaluation of the same closed forms), and both
//!   certified constraint rows with their stored safe constants A and B.
//!   No quadrature is involved, so a tampered descriptor fails loudly.
//! * [`direct_inequality_check`] — samples the differential inequality
//!   0 ≤ −Δu ≤ (|x|^{−α} ∗ u^λ)(x)·u(x)^σ at stratified points: bump interiors,
//!   the harmonic region between the bumps, and near-origin shells. The left
//!   side comes from the exact source expression, the right side from
//!   error-bounded quadrature *and*, on bump balls, from the certified
//!   algebraic lower bound — a sample must clear both.
//! * [`potential_lower_bounds_check`] — the certified pointwise lower bounds
//!   for u (ball and monopole form) and for the convolution on every bump
//!   ball, against sampled values. Zero violations are tolerated.
//! * [`harmonicity_and_singularity_check`] — Richardson-probed
//!   finite-difference Laplacians: ≈ 0 between the bumps, matching the exact
//!   source inside them with second-order convergence; and the rescaled trace
//!   m̂(x) = |x|^{n−2} u(x) across shrinking shells, separating vanishing-trace
//!   fields, the unit-trace singular fixture, and flat bounded cores.
//! * [`shifted_inequality_lift`] — for the shifted field v = u + 1 restricted
//!   to the unit ball, fits the smallest constant C with
//!   −Δv ≤ C·(∫_{|y|<1} v(y)^λ |x−y|^{−α} dy)·v(x)^σ over the sampled sources,
//!   requires the fit to be stable under sample refinement, and checks the
//!   exterior-tail bound: the part of the convolution sourced outside the unit
//!   ball is dominated by a crude sup-based constant, hence by a multiple of
//!   the minimal unit-ball potential. Only defined for kernel exponent α < n.
//!
//! Sampling is seeded (ChaCha8, default seed 42) and every reduction uses a
//! fixed order, so identical inputs produce byte-identical reports.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::classifier::{classify, regime_tag, RegimeTag, Verdict};
use crate::convolution::{riesz_convolution, QuadSpec, ScalarSample};
use crate::error::{Error, Result};
use crate::family::{BumpFamily, SolutionField};
use crate::field::{ConstField, Field, FixtureCore, Point, ReferenceFixture};
use crate::laplacian::richardson_probe;
use crate::params::{unit_ball_volume, Params};

// ---------------------------------------------------------------------------
// Specification of a verification run
// ---------------------------------------------------------------------------

/// Fraction of direct-inequality samples that must pass for the check to pass.
pub const DIRECT_PASS_FRACTION: f64 = 0.95;

/// Relative tolerance of the pure-arithmetic certificate replay. The
/// re-derivation exponentiates log-scale quantities of magnitude up to a few
/// hundred, so it may differ from the stored values by accumulated rounding
/// up to ~1e-12 relative; 1e-9 clears that with three orders of headroom
/// while sitting seven orders below any meaningful tampering.
pub const CERTIFICATE_REL_TOL: f64 = 1e-9;

/// Sampling budget and tolerances for a verification run. All tolerances are
/// strictly positive; the seed defaults to 42 and is what `CHOQUARD_SEED`
/// overrides at the command line.
#[derive(Debug, Clone, Serialize)]
pub struct VerifySpec {
    /// ChaCha8 seed for every sampler in the run.
    pub seed: u64,
    /// Inequality samples inside each bump ball (a mix of on-axis and, in
    /// dimension 3, off-axis points).
    pub samples_per_bump: usize,
    /// Inequality samples in the harmonic region between the bumps.
    pub harmonic_samples: usize,
    /// Finite-difference probes inside each bump ball.
    pub fd_points_per_bump: usize,
    /// Finite-difference probes in the harmonic region.
    pub fd_harmonic_points: usize,
    /// Source samples per bump for the shifted-inequality constant fit.
    pub lift_points_per_bump: usize,
    /// Near-origin shell radii, strictly decreasing, all ≤ 0.1.
    pub shell_radii: Vec<f64>,
    /// Relative tolerance on each direct-inequality sample margin.
    pub direct_rel_tol: f64,
    /// A harmonic-region Laplacian must be below this fraction of the local
    /// per-axis curvature scale.
    pub harmonic_curvature_tol: f64,
    /// Allowed relative growth of the fitted lift constant under refinement.
    pub lift_stability_rel: f64,
    /// Quadrature parameters for every convolution in the run.
    pub quad: QuadSpec,
}

impl Default for VerifySpec {
    fn default() -> Self {
        VerifySpec {
            seed: 42,
            samples_per_bump: 20,
            harmonic_samples: 50,
            fd_points_per_bump: 6,
            fd_harmonic_points: 30,
            lift_points_per_bump: 6,
            shell_radii: vec![1e-2, 1e-3, 1e-4],
            direct_rel_tol: 0.05,
            harmonic_curvature_tol: 1e-3,
            lift_stability_rel: 0.10,
            // The run compares against 5%-scale tolerances: 1e-4 relative
            // quadrature is invisible in the margins and much faster than the
            // engine's default 1e-6.
            quad: QuadSpec { target_rel: 1e-4, ..QuadSpec::default() },
        }
    }
}

impl VerifySpec {
    pub fn validate(&self) -> Result<()> {
        if self.samples_per_bump == 0
            || self.harmonic_samples == 0
            || self.fd_points_per_bump == 0
            || self.fd_harmonic_points == 0
            || self.lift_points_per_bump == 0
        {
            return Err(Error::Parameter("every sampling budget must be ≥ 1".into()));
        }
        if self.shell_radii.is_empty() {
            return Err(Error::Parameter("at least one near-origin shell is required".into()));
        }
        for w in self.shell_radii.windows(2) {
            if !(w[1] < w[0]) {
                return Err(Error::Parameter("shell radii must be strictly decreasing".into()));
            }
        }
        for &s in &self.shell_radii {
            if !(s > 0.0 && s <= 0.1) {
                return Err(Error::Parameter(format!("shell radius {s} outside (0, 0.1]")));
            }
        }
        if !(self.direct_rel_tol > 0.0 && self.direct_rel_tol < 1.0) {
            return Err(Error::Parameter("direct tolerance must lie in (0, 1)".into()));
        }
        if !(self.harmonic_curvature_tol > 0.0) || !(self.lift_stability_rel > 0.0) {
            return Err(Error::Parameter("tolerances must be positive".into()));
        }
        self.quad.validate()
    }

    /// The tolerance block embedded in every report.
    fn tolerances_json(&self) -> Value {
        json!({
            "direct_rel_tol": self.direct_rel_tol,
            "direct_pass_fraction": DIRECT_PASS_FRACTION,
            "certificate_rel_tol": CERTIFICATE_REL_TOL,
            "harmonic_curvature_tol": self.harmonic_curvature_tol,
            "lift_stability_rel": self.lift_stability_rel,
            "quad_target_rel": self.quad.target_rel,
        })
    }
}

// ---------------------------------------------------------------------------
// Report types
// ---------------------------------------------------------------------------

/// One sampled comparison of the two sides of the differential inequality.
#[derive(Debug, Clone, Serialize)]
pub struct SampleReport {
    /// Global coordinates of the sample (reporting only; evaluation keeps the
    /// structured point).
    pub point: Vec<f64>,
    /// −Δu from the exact source expression (0 in the harmonic region).
    pub neg_laplacian: f64,
    /// Certified algebraic lower bound for the right side where one exists
    /// (bump balls only).
    pub rhs_lower: Option<f64>,
    /// Quadrature value of the right side (convolution × u^σ) with error bar.
    pub rhs_quadrature: ScalarSample,
    pub pass: bool,
    /// Signed relative margin of the binding right side over the left side,
    /// clamped to [−1, 1]; a sample passes when margin ≥ −tolerance.
    pub margin: f64,
}

/// Outcome of one named check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub pass: bool,
    /// Worst normalized margin over the check's comparisons, clamped to
    /// [−1, 1]; the check-specific meaning is documented in `details`.
    pub worst_margin: f64,
    pub details: Value,
}

/// A full verification run: candidate hash, seed, tolerances, check verdicts.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    /// SHA-256 of the candidate's canonical descriptor.
    pub family_hash: String,
    pub seed: u64,
    pub tolerances: Value,
    pub checks: Vec<CheckReport>,
}

impl VerificationReport {
    /// True when every check passed — the process exit contract.
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "family_hash": self.family_hash,
            "seed": self.seed,
            "tolerances": self.tolerances,
            "checks": self.checks,
        })
    }

    /// Pretty JSON with a trailing newline — the on-disk report format.
    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("report serializes");
        s.push('\n');
        s
    }
}

// ---------------------------------------------------------------------------
// Small shared helpers
// ---------------------------------------------------------------------------

fn sha256_hex(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    format!("{:x}", h.finalize())
}

/// Signed relative margin (rhs − lhs)/scale with a safe scale, clamped to
/// [−1, 1]. An infinite right side (certified divergent convolution) gives the
/// maximal margin.
fn rel_margin(lhs: f64, rhs: f64) -> f64 {
    if rhs.is_infinite() && rhs > 0.0 {
        return 1.0;
    }
    let scale = rhs.abs().max(lhs.abs()).max(f64::MIN_POSITIVE);
    ((rhs - lhs) / scale).clamp(-1.0, 1.0)
}

fn fold_min(worst: &mut f64, m: f64) {
    *worst = worst.min(m.clamp(-1.0, 1.0));
}

/// Decorrelated per-check generator: one seed, distinct salted streams.
fn salted_rng(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    let (a, b) = (lo.ln(), hi.ln());
    (a + rng.gen::<f64>() * (b - a)).exp()
}

/// A point on the first axis at coordinate t.
fn axis_point(n: usize, t: f64) -> Point {
    let mut x = vec![0.0; n];
    x[0] = t;
    Point::Global(x)
}

// ---------------------------------------------------------------------------
// Samplers
// ---------------------------------------------------------------------------

/// Points inside bump `j`'s ball, |η| ≤ max_t in core units: the first point
/// is the exact center, the rest jittered on the axis with alternating signs;
/// in dimension 3 roughly 40% move off the axis (where zone-local quadrature
/// is exact); higher dimensions stay on the axis.
fn bump_interior_points(
    sol: &SolutionField,
    j: usize,
    count: usize,
    max_t: f64,
    rng: &mut ChaCha8Rng,
) -> Vec<Point> {
    let n = sol.n() as usize;
    let off_axis = if sol.n() == 3 { (2 * count) / 5 } else { 0 };
    let on_axis = count - off_axis;
    let mut pts = Vec::with_capacity(count);
    for i in 0..on_axis {
        let t = if i == 0 { 0.0 } else { max_t * rng.gen::<f64>() };
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        let mut eta = vec![0.0; n];
        eta[0] = sign * t;
        pts.push(Point::ZoneLocal { zone: j, eta });
    }
    for _ in 0..off_axis {
        loop {
            let eta: Vec<f64> = (0..n).map(|_| max_t * (2.0 * rng.gen::<f64>() - 1.0)).collect();
            let r = eta.iter().map(|v| v * v).sum::<f64>().sqrt();
            if r > 0.05 && r < max_t && eta[1..].iter().any(|&v| v != 0.0) {
                pts.push(Point::ZoneLocal { zone: j, eta });
                break;
            }
        }
    }
    pts
}

/// First-axis bands of the harmonic region: above the bump train, in each gap
/// between consecutive zones, and below the train. Every band keeps at least
/// 1.5 zone radii of distance from each zone center.
fn harmonic_bands(sol: &SolutionField) -> Vec<(f64, f64)> {
    let cs: Vec<f64> = sol.family.bumps.iter().map(|b| b.center[0]).collect();
    let mut bands = vec![(1.375 * cs[0], 1.9)];
    for w in cs.windows(2) {
        bands.push((1.375 * w[1], 0.6 * w[0]));
    }
    let c_last = *cs.last().expect("families have at least one bump");
    bands.push((0.05 * c_last, 0.6 * c_last));
    bands
}

/// On-axis harmonic-region points cycling through the bands, log-uniform
/// within each, with alternating sign (the negative half-axis carries no
/// bumps and is harmonic throughout).
fn harmonic_axis_points(sol: &SolutionField, count: usize, rng: &mut ChaCha8Rng) -> Vec<Point> {
    let n = sol.n() as usize;
    let bands = harmonic_bands(sol);
    (0..count)
        .map(|i| {
            let (lo, hi) = bands[i % bands.len()];
            let t = log_uniform(rng, lo, hi);
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            axis_point(n, sign * t)
        })
        .collect()
}

/// Nudge a shell radius outward until it clears every concentration zone by
/// 1.35 zone radii, so quadrature never straddles a zone boundary.
fn shell_radius_clear_of_zones(sol: &SolutionField, t: f64) -> f64 {
    let mut t = t;
    for z in sol.zones() {
        if (t - z.center).abs() < 1.35 * z.radius {
            t = z.center + 1.35 * z.radius;
        }
    }
    t
}

// ---------------------------------------------------------------------------
// certificate_check — pure arithmetic replay of the construction certificate
// ---------------------------------------------------------------------------

/// Independent re-derivation of the regime normalization δ(r) (second route;
/// the builder carries its own copy of the same closed form).
fn expected_normalization(tag: RegimeTag, n: u32, r: f64) -> f64 {
    match tag {
        RegimeTag::MidTop => {
            let nf = n as f64;
            (((nf - 2.0) / nf) * (-r.ln()).ln()).exp()
        }
        _ => 1.0,
    }
}

/// Independent re-derivation of the bump amplitude M(ε, r) of a regime.
fn expected_amplitude(tag: RegimeTag, pr: &Params, eps: f64, r: f64) -> f64 {
    let nf = pr.nf();
    let ln_r = r.ln();
    match tag {
        RegimeTag::High => (eps.ln() - (2.0 + nf / pr.lambda) * ln_r).exp(),
        _ => (eps.ln() - nf * ln_r - expected_normalization(tag, pr.n, r).ln()).exp(),
    }
}

/// Replay the stored construction certificate with pure arithmetic: the
/// classification gate, the geometric invariants, per-bump amplitude and
/// normalization consistency, and both constraint rows (growth and
/// inequality) with the stored safe constants. `worst_margin` is the worst
/// normalized link margin; raw log-unit row margins live in the details.
pub fn certificate_check(family: &BumpFamily) -> Result<CheckReport> {
    let pr = &family.params;
    let mut pass = true;
    let mut worst = 1.0f64;
    let mut failures: Vec<Value> = Vec::new();

    // Link: geometry invariants (centers, radii, disjoint supports).
    if let Err(e) = family.check_invariants() {
        pass = false;
        fold_min(&mut worst, -1.0);
        failures.push(json!({"link": "geometry", "error": e.to_string()}));
    }

    // Link: classification gate — an unbounded family may only exist where
    // classification says no pointwise bound holds.
    let verdict = classify(pr)?;
    let gate_ok =
        matches!(verdict.verdict, Verdict::NoPointwiseBound | Verdict::CriticalNoBound);
    if !gate_ok {
        pass = false;
        fold_min(&mut worst, -1.0);
        failures.push(json!({
            "link": "classification_gate",
            "verdict": format!("{}", verdict.verdict),
            "g_value": verdict.g_value,
            "sigma": pr.sigma,
        }));
    }

    // Link: the stored regime tag matches the parameters.
    let tag = regime_tag(pr.n, pr.alpha, pr.lambda)?;
    if tag != family.tag {
        pass = false;
        fold_min(&mut worst, -1.0);
        failures.push(json!({
            "link": "regime_tag",
            "stored": format!("{:?}", family.tag),
            "derived": format!("{tag:?}"),
        }));
    }

    // Per-bump links: amplitude/normalization consistency and both rows.
    let mut worst_growth = f64::INFINITY;
    let mut worst_inequality = f64::INFINITY;
    let mut worst_amp_rel = 0.0f64;
    for (j0, bs) in family.bumps.iter().enumerate() {
        let m_hat = expected_amplitude(family.tag, pr, bs.eps, bs.r);
        let d_hat = expected_normalization(family.tag, pr.n, bs.r);
        let m_rel = (bs.m - m_hat).abs() / m_hat.abs().max(f64::MIN_POSITIVE);
        let d_rel = (bs.delta - d_hat).abs() / d_hat.abs().max(f64::MIN_POSITIVE);
        let amp_rel = m_rel.max(d_rel);
        worst_amp_rel = worst_amp_rel.max(amp_rel);
        fold_min(&mut worst, (CERTIFICATE_REL_TOL - amp_rel) / CERTIFICATE_REL_TOL);
        if amp_rel > CERTIFICATE_REL_TOL {
            pass = false;
            failures.push(json!({
                "link": "amplitude_consistency",
                "bump": j0,
                "stored_m": bs.m, "derived_m": m_hat,
                "stored_delta": bs.delta, "derived_delta": d_hat,
                "rel_err": amp_rel,
            }));
        }

        let (growth, inequality) = family.constraint_rows_for(j0)?;
        worst_growth = worst_growth.min(growth.margin());
        worst_inequality = worst_inequality.min(inequality.margin());
        for (label, row) in [("growth_row", &growth), ("inequality_row", &inequality)] {
            fold_min(&mut worst, row.margin());
            if !row.holds() {
                pass = false;
                failures.push(json!({
                    "link": label,
                    "bump": j0,
                    "lhs_log": row.lhs_log,
                    "rhs_log": row.rhs_log,
                    "margin_log": row.margin(),
                }));
            }
        }
    }

    Ok(CheckReport {
        name: "certificate_check".into(),
        pass,
        worst_margin: worst,
        details: json!({
            "margin_meaning": "worst normalized link margin: log-unit row slack and \
                               scaled amplitude agreement, clamped to [-1, 1]",
            "classification": format!("{}", verdict.verdict),
            "g_value": verdict.g_value,
            "bumps": family.bumps.len(),
            "worst_growth_row_margin_log": worst_growth,
            "worst_inequality_row_margin_log": worst_inequality,
            "worst_amplitude_rel_err": worst_amp_rel,
            "failures": failures,
        }),
    })
}

// ---------------------------------------------------------------------------
// direct_inequality_check — sampled two-sided inequality
// ---------------------------------------------------------------------------

/// Evaluate one inequality sample: exact left side supplied by the caller,
/// right side from quadrature times u(x)^σ, gated by the certified lower
/// bound where one exists. The sample passes when −Δu ≥ 0, u ≥ 0, and the
/// margin against the *binding* right side (the smaller of certificate and
/// quadrature-plus-error) clears −tolerance.
fn inequality_sample(
    field: &dyn Field,
    lhs: f64,
    rhs_lower: Option<f64>,
    p: &Point,
    pr: &Params,
    spec: &VerifySpec,
) -> Result<SampleReport> {
    let ux = field.eval_exact(p);
    let conv = riesz_convolution(field, p, pr.alpha, pr.lambda, &spec.quad)?;
    let u_sigma = ux.powf(pr.sigma);
    let rhs_q = ScalarSample {
        value: conv.value * u_sigma,
        error: conv.error * u_sigma,
        divergent: conv.divergent,
    };
    let quad_upper = if rhs_q.divergent { f64::INFINITY } else { rhs_q.value + rhs_q.error };
    let rhs_eff = match rhs_lower {
        Some(cert) => quad_upper.min(cert),
        None => quad_upper,
    };
    let margin = rel_margin(lhs, rhs_eff);
    let pass = lhs >= 0.0 && ux >= 0.0 && margin >= -spec.direct_rel_tol;
    Ok(SampleReport {
        point: p.global_approx(field),
        neg_laplacian: lhs,
        rhs_lower,
        rhs_quadrature: rhs_q,
        pass,
        margin,
    })
}

fn direct_report(samples: Vec<SampleReport>, spec: &VerifySpec) -> CheckReport {
    let total = samples.len();
    let passing = samples.iter().filter(|s| s.pass).count();
    let divergent = samples.iter().filter(|s| s.rhs_quadrature.divergent).count();
    let nonneg_ok = samples.iter().all(|s| s.neg_laplacian >= 0.0);
    let pass_fraction = passing as f64 / total.max(1) as f64;
    let mut worst = 1.0f64;
    for s in &samples {
        fold_min(&mut worst, s.margin);
    }
    CheckReport {
        name: "direct_inequality_check".into(),
        pass: pass_fraction >= DIRECT_PASS_FRACTION && nonneg_ok,
        worst_margin: worst,
        details: json!({
            "margin_meaning": "worst signed relative margin (rhs - lhs)/max(|rhs|, |lhs|) \
                               over all samples",
            "total": total,
            "passing": passing,
            "pass_fraction": pass_fraction,
            "required_fraction": DIRECT_PASS_FRACTION,
            "rel_tol": spec.direct_rel_tol,
            "nonnegativity_ok": nonneg_ok,
            "certified_divergent_samples": divergent,
            "samples": samples,
        }),
    }
}

/// Sample the two-sided inequality for a constructed family: bump interiors
/// (left side > 0, certificate bound active), the harmonic region (left side
/// exactly 0), and near-origin shells. Passes when at least
/// [`DIRECT_PASS_FRACTION`] of the samples pass and no sample shows a negative
/// left side or a negative field value.
pub fn direct_inequality_check(sol: &SolutionField, spec: &VerifySpec) -> Result<CheckReport> {
    spec.validate()?;
    let pr = &sol.family.params;
    let n = sol.n() as usize;
    let mut rng = salted_rng(spec.seed, 1);
    let mut samples = Vec::new();

    for j in 0..sol.family.bumps.len() {
        // The ball lower bound is constant over the ball, so one certified
        // right-side floor serves every interior sample of this bump.
        let ball = sol.family.u_lower_bound(j, 0.5)?;
        let conv_lo = sol.family.conv_lower_bound(j)?;
        let cert = conv_lo * ball.powf(pr.sigma);
        let rhs_lower = cert.is_finite().then_some(cert);
        for p in bump_interior_points(sol, j, spec.samples_per_bump, 0.95, &mut rng) {
            let lhs = sol.source_at(&p);
            samples.push(inequality_sample(sol, lhs, rhs_lower, &p, pr, spec)?);
        }
    }
    for p in harmonic_axis_points(sol, spec.harmonic_samples, &mut rng) {
        let lhs = sol.source_at(&p);
        samples.push(inequality_sample(sol, lhs, None, &p, pr, spec)?);
    }
    for &shell in &spec.shell_radii {
        let t = shell_radius_clear_of_zones(sol, shell);
        for sign in [1.0, -1.0] {
            let p = axis_point(n, sign * t);
            let lhs = sol.source_at(&p);
            samples.push(inequality_sample(sol, lhs, None, &p, pr, spec)?);
        }
    }
    Ok(direct_report(samples, spec))
}

// ---------------------------------------------------------------------------
// potential_lower_bounds_check — certified floors for u and the convolution
// ---------------------------------------------------------------------------

/// Check the certified lower bounds on every bump: u against the ball bound
/// inside the ball and the monopole bound out to distance min(1, 0.4·|x_j|),
/// and the convolution against its certified floor on the ball. The check
/// passes only with zero violations; `worst_margin` is the worst ratio − 1.
pub fn potential_lower_bounds_check(sol: &SolutionField, spec: &VerifySpec) -> Result<CheckReport> {
    spec.validate()?;
    let pr = &sol.family.params;
    let n = sol.n() as usize;
    let mut rng = salted_rng(spec.seed, 2);
    let mut violations = 0usize;
    let mut worst_u_ratio = f64::INFINITY;
    let mut worst_conv_ratio = f64::INFINITY;
    let mut checked_u = 0usize;
    let mut checked_conv = 0usize;
    let mut rows: Vec<Value> = Vec::new();

    let per_bump = spec.samples_per_bump.max(5);
    // 60% of the budget inside the ball, the rest in the monopole range;
    // the first few ball points double as convolution samples.
    let ball_count = (3 * per_bump + 4) / 5;
    let mono_count = per_bump - ball_count;
    let conv_count = ball_count.min(4);

    for (j, bs) in sol.family.bumps.iter().enumerate() {
        let cj = bs.center[0];
        let conv_floor = sol.family.conv_lower_bound(j)?;
        let mut ball_pts: Vec<(f64, Point)> = Vec::with_capacity(ball_count);
        for i in 0..ball_count {
            let d = log_uniform(&mut rng, 1e-3, 0.999);
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            let mut eta = vec![0.0; n];
            eta[0] = sign * d;
            ball_pts.push((d, Point::ZoneLocal { zone: j, eta }));
        }
        for (d, p) in &ball_pts {
            let bound = sol.family.u_lower_bound(j, *d)?;
            let u = sol.eval_exact(p);
            let ratio = u / bound;
            worst_u_ratio = worst_u_ratio.min(ratio);
            checked_u += 1;
            if ratio < 1.0 - 1e-9 {
                violations += 1;
                rows.push(json!({"kind": "u_ball", "bump": j, "dist_in_cores": d,
                                 "u": u, "bound": bound}));
            }
        }
        for i in 0..mono_count {
            // Physical distance between one core radius and 0.4·|x_j| ≤ 1.
            let d_max = 0.4 * cj / bs.r;
            let d = log_uniform(&mut rng, 1.0 + 1e-9, d_max);
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            let mut eta = vec![0.0; n];
            eta[0] = sign * d;
            let p = Point::ZoneLocal { zone: j, eta };
            let bound = sol.family.u_lower_bound(j, d)?;
            let u = sol.eval_exact(&p);
            let ratio = u / bound;
            worst_u_ratio = worst_u_ratio.min(ratio);
            checked_u += 1;
            if ratio < 1.0 - 1e-9 {
                violations += 1;
                rows.push(json!({"kind": "u_monopole", "bump": j, "dist_in_cores": d,
                                 "u": u, "bound": bound}));
            }
        }
        for (_, p) in ball_pts.iter().take(conv_count) {
            let conv = riesz_convolution(sol, p, pr.alpha, pr.lambda, &spec.quad)?;
            let ratio = if conv.divergent {
                f64::INFINITY
            } else {
                (conv.value - conv.error) / conv_floor
            };
            worst_conv_ratio = worst_conv_ratio.min(ratio);
            checked_conv += 1;
            if ratio < 1.0 - 1e-9 {
                violations += 1;
                rows.push(json!({"kind": "convolution", "bump": j,
                                 "value": conv.value, "error": conv.error,
                                 "bound": conv_floor}));
            }
        }
    }

    let worst = (worst_u_ratio - 1.0).min(if checked_conv > 0 {
        worst_conv_ratio - 1.0
    } else {
        f64::INFINITY
    });
    Ok(CheckReport {
        name: "potential_lower_bounds_check".into(),
        pass: violations == 0,
        worst_margin: worst.clamp(-1.0, 1.0),
        details: json!({
            "margin_meaning": "worst (sampled value / certified bound) - 1 over all \
                               comparisons, clamped to [-1, 1]",
            "u_points_checked": checked_u,
            "convolution_points_checked": checked_conv,
            "violations": violations,
            "worst_u_ratio": worst_u_ratio,
            "worst_convolution_ratio": if worst_conv_ratio.is_finite() {
                json!(worst_conv_ratio)
            } else {
                json!("infinite")
            },
            "violation_rows": rows,
        }),
    })
}

// ---------------------------------------------------------------------------
// harmonicity_and_singularity_check — probes and singular-limit diagnostics
// ---------------------------------------------------------------------------

/// What the rescaled trace m̂(x) = |x|^{n−2} u(x) must do as x → 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingularityExpectation {
    /// Constructed families: bounded near the origin, so m̂ → 0.
    VanishingTrace,
    /// The singular reference fixture u = |x|^{2−n}: m̂ ≡ 1.
    UnitTrace,
    /// The flat reference fixture u ≡ 1: m̂ → 0 *and* the gradient stays
    /// negligible — a bounded core that is genuinely flat, not oscillating.
    FlatCore,
}

impl SingularityExpectation {
    fn as_str(self) -> &'static str {
        match self {
            SingularityExpectation::VanishingTrace => "vanishing_trace",
            SingularityExpectation::UnitTrace => "unit_trace",
            SingularityExpectation::FlatCore => "flat_core",
        }
    }
}

/// Evaluate m̂ on the shells and compare against the expectation. Returns
/// (pass, margin, details).
fn singular_trace_check(
    field: &dyn Field,
    n: u32,
    shells: &[f64],
    expectation: SingularityExpectation,
) -> (bool, f64, Value) {
    let nd = n as usize;
    let mhat: Vec<f64> = shells
        .iter()
        .map(|&t| {
            let u = field.eval_global_exact(&{
                let mut x = vec![0.0; nd];
                x[0] = t;
                x
            });
            t.powi(n as i32 - 2) * u
        })
        .collect();
    let first = mhat[0];
    let last = *mhat.last().expect("shells nonempty");
    let mut details = json!({
        "expectation": expectation.as_str(),
        "shells": shells,
        "mhat": mhat,
    });
    match expectation {
        SingularityExpectation::VanishingTrace | SingularityExpectation::FlatCore => {
            let decay_ok = last <= 0.05 && last <= 0.5 * first.max(f64::MIN_POSITIVE);
            let mut margin = ((0.05 - last) / 0.05).min((0.5 * first - last) / (0.5 * first));
            let mut ok = decay_ok;
            if expectation == SingularityExpectation::FlatCore {
                let r = *shells.last().expect("shells nonempty");
                let h = 0.1 * r;
                let up = field.eval_global_exact(&{
                    let mut x = vec![0.0; nd];
                    x[0] = r + h;
                    x
                });
                let dn = field.eval_global_exact(&{
                    let mut x = vec![0.0; nd];
                    x[0] = r - h;
                    x
                });
                let mid = field.eval_global_exact(&{
                    let mut x = vec![0.0; nd];
                    x[0] = r;
                    x
                });
                let grad = (up - dn).abs() / (2.0 * h);
                let grad_tol = 1e-6 * (1.0 + mid.abs());
                details["gradient"] = json!(grad);
                details["gradient_tol"] = json!(grad_tol);
                ok = ok && grad <= grad_tol;
                margin = margin.min((grad_tol - grad) / grad_tol);
            }
            (ok, margin, details)
        }
        SingularityExpectation::UnitTrace => {
            let dev = mhat.iter().map(|m| (m - 1.0).abs()).fold(0.0f64, f64::max);
            details["max_deviation_from_one"] = json!(dev);
            (dev <= 1e-6, (1e-6 - dev) / 1e-6, details)
        }
    }
}

/// Shared body of the finite-difference part: probes at source points (where
/// the probe must reproduce the exact source to 1% with second-order
/// convergence) and at harmonic points (where the Laplacian must vanish
/// relative to the local curvature scale).
struct ProbeOutcome {
    pass: bool,
    worst: f64,
    slopes: Vec<Value>,
    worst_source_rel_err: f64,
    worst_harmonic_ratio: f64,
    failures: Vec<Value>,
}

fn run_probes(
    field: &dyn Field,
    source: &dyn Fn(&Point) -> f64,
    source_pts: &[(Point, f64)],
    harmonic_pts: &[(Point, f64)],
    spec: &VerifySpec,
) -> Result<ProbeOutcome> {
    let mut pass = true;
    let mut worst = 1.0f64;
    let mut slopes = Vec::new();
    let mut worst_src = 0.0f64;
    let mut worst_harm = 0.0f64;
    let mut failures = Vec::new();

    for (p, h0) in source_pts {
        let probe = richardson_probe(field, p, *h0)?;
        let src = source(p);
        let rel_err = (probe.neg_laplacian - src).abs() / src.abs().max(f64::MIN_POSITIVE);
        worst_src = worst_src.max(rel_err);
        // Slope ≈ 2 confirms genuine O(h²) convergence; a missing slope means
        // the refinements already agree to rounding, which only passes
        // together with a tiny residual error.
        let slope_ok = match probe.slope {
            Some(s) => (s - 2.0).abs() <= 0.3 || rel_err <= 1e-6,
            None => rel_err <= 1e-6,
        };
        slopes.push(json!(probe.slope));
        fold_min(&mut worst, (0.01 - rel_err) / 0.01);
        if rel_err > 0.01 || !slope_ok {
            pass = false;
            failures.push(json!({
                "kind": "source_probe",
                "point": p.global_approx(field),
                "fd": probe.neg_laplacian,
                "source": src,
                "rel_err": rel_err,
                "slope": probe.slope,
            }));
        }
    }

    for (p, h0) in harmonic_pts {
        let probe = richardson_probe(field, p, *h0)?;
        let scale = spec.harmonic_curvature_tol * probe.curvature_scale + f64::MIN_POSITIVE;
        let ratio = probe.neg_laplacian.abs() / scale;
        worst_harm = worst_harm.max(ratio);
        fold_min(&mut worst, 1.0 - ratio);
        if ratio > 1.0 {
            pass = false;
            failures.push(json!({
                "kind": "harmonic_probe",
                "point": p.global_approx(field),
                "fd": probe.neg_laplacian,
                "curvature_scale": probe.curvature_scale,
            }));
        }
    }

    Ok(ProbeOutcome {
        pass,
        worst,
        slopes,
        worst_source_rel_err: worst_src,
        worst_harmonic_ratio: worst_harm,
        failures,
    })
}

fn harmonicity_report(outcome: ProbeOutcome, trace: (bool, f64, Value)) -> CheckReport {
    let (trace_ok, trace_margin, trace_details) = trace;
    let mut worst = outcome.worst;
    fold_min(&mut worst, trace_margin);
    CheckReport {
        name: "harmonicity_and_singularity_check".into(),
        pass: outcome.pass && trace_ok,
        worst_margin: worst,
        details: json!({
            "margin_meaning": "worst of: scaled source-probe agreement, harmonic-probe \
                               smallness, and singular-trace margins, clamped to [-1, 1]",
            "source_probe_slopes": outcome.slopes,
            "worst_source_rel_err": outcome.worst_source_rel_err,
            "worst_harmonic_ratio": outcome.worst_harmonic_ratio,
            "singular_trace": trace_details,
            "failures": outcome.failures,
        }),
    }
}

/// Probe −Δu by finite differences — inside the bumps it must match the exact
/// source to 1% with second-order Richardson slope, between them it must
/// vanish relative to the local curvature scale — and track the rescaled
/// trace m̂ across the near-origin shells (families must show m̂ → 0: the
/// construction carries no point mass at the origin).
pub fn harmonicity_and_singularity_check(
    sol: &SolutionField,
    spec: &VerifySpec,
) -> Result<CheckReport> {
    spec.validate()?;
    let n = sol.n() as usize;
    let mut rng = salted_rng(spec.seed, 3);

    let mut source_pts = Vec::new();
    for j in 0..sol.family.bumps.len() {
        let fixed = [0.0, 0.35, -0.65];
        for i in 0..spec.fd_points_per_bump {
            let t = if i < fixed.len() {
                fixed[i]
            } else {
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                sign * (0.2 + 0.5 * rng.gen::<f64>())
            };
            let mut eta = vec![0.0; n];
            eta[0] = t;
            source_pts.push((Point::ZoneLocal { zone: j, eta }, 0.05));
        }
    }

    let mut harmonic_pts = Vec::new();
    for (i, p) in harmonic_axis_points(sol, spec.fd_harmonic_points, &mut rng)
        .into_iter()
        .enumerate()
    {
        // Every third point moves off the axis (finite differences need only
        // field values, which are defined everywhere).
        let p = match p {
            Point::Global(x) if n == 3 && i % 3 == 2 => {
                let t = x[0];
                let theta = 0.3 + 1.0 * rng.gen::<f64>();
                Point::Global(vec![t * theta.cos(), t.abs() * theta.sin(), 0.0])
            }
            other => other,
        };
        // 4% of the clearance: small enough that the O(h²) truncation of a
        // monopole-type background sits well below the curvature threshold,
        // large enough that rounding noise stays orders of magnitude smaller.
        let h0 = 0.04 * sol.clearance(&p);
        harmonic_pts.push((p, h0));
    }

    let outcome =
        run_probes(sol, &|p: &Point| sol.source_at(p), &source_pts, &harmonic_pts, spec)?;
    let trace = singular_trace_check(
        sol,
        sol.n(),
        &spec.shell_radii,
        SingularityExpectation::VanishingTrace,
    );
    Ok(harmonicity_report(outcome, trace))
}

// ---------------------------------------------------------------------------
// shifted_inequality_lift — fitted constant for the shifted field u + 1
// ---------------------------------------------------------------------------

/// The field, plus a constant shift, hard-restricted to the open unit ball:
/// shift 1 gives the integrand of the unit-ball potential of v = u + 1,
/// shift 0 the plain ball restriction of u itself. The ball boundary is the
/// wrapper's support radius, which the quadrature engine clips exactly — the
/// jump at |y| = 1 never crosses a panel, so every evaluation happens in the
/// smooth region. Zones are forwarded (they sit deep inside the ball).
struct UnitBallWindow<'a> {
    inner: &'a dyn Field,
    shift: f64,
}

impl<'a> UnitBallWindow<'a> {
    fn new(inner: &'a dyn Field, shift: f64) -> Result<Self> {
        for z in inner.zones() {
            if z.center + z.radius >= 1.0 {
                return Err(Error::Parameter(
                    "ball restriction requires all concentration zones inside the unit ball"
                        .into(),
                ));
            }
        }
        Ok(UnitBallWindow { inner, shift })
    }
}

impl Field for UnitBallWindow<'_> {
    fn n(&self) -> u32 {
        self.inner.n()
    }
    fn symmetry(&self) -> crate::field::Symmetry {
        self.inner.symmetry()
    }
    fn eval_global(&self, y: &[f64]) -> f64 {
        let r: f64 = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        if r < 1.0 {
            self.inner.eval_global(y) + self.shift
        } else {
            0.0
        }
    }
    fn eval_global_exact(&self, y: &[f64]) -> f64 {
        let r: f64 = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        if r < 1.0 {
            self.inner.eval_global_exact(y) + self.shift
        } else {
            0.0
        }
    }
    fn zones(&self) -> &[crate::field::Zone] {
        self.inner.zones()
    }
    fn eval_zone_local(&self, zone: usize, eta: &[f64]) -> f64 {
        self.inner.eval_zone_local(zone, eta) + self.shift
    }
    fn eval_zone_local_exact(&self, zone: usize, eta: &[f64]) -> f64 {
        self.inner.eval_zone_local_exact(zone, eta) + self.shift
    }
    fn clearance(&self, p: &Point) -> f64 {
        let c = self.inner.clearance(p);
        match p {
            Point::Global(y) => {
                let r: f64 = y.iter().map(|v| v * v).sum::<f64>().sqrt();
                c.min((1.0 - r).abs())
            }
            Point::ZoneLocal { zone, .. } => {
                let z = self.inner.zones()[*zone];
                let seam = (1.0 - (z.center + z.radius)) / z.core;
                c.min(seam.max(0.0))
            }
        }
    }
    fn support_radius(&self) -> f64 {
        1.0
    }
}

/// Core of the lift check, shared by families and fixtures. `pts_base` is a
/// deterministic grid, `pts_extra` a refinement; the fitted constant over the
/// refined set may exceed the base fit by at most the stability tolerance.
/// `tail_xs` are first-axis coordinates (|x| < 1) for the exterior-tail
/// bound.
fn lift_core(
    base: &dyn Field,
    source: &dyn Fn(&Point) -> f64,
    pts_base: &[Point],
    pts_extra: &[Point],
    tail_xs: &[f64],
    pr: &Params,
    spec: &VerifySpec,
) -> Result<CheckReport> {
    let n = base.n() as usize;
    let mut pass = true;
    let mut worst = 1.0f64;
    let mut failures: Vec<Value> = Vec::new();

    let shifted = UnitBallWindow::new(base, 1.0)?;

    // One fitted row per sampled source point with a positive left side:
    // C_row = (−Δv) / (I_lower · v(x)^σ), conservative in the quadrature.
    let mut fit_rows = 0usize;
    let mut fit = |pts: &[Point], c_so_far: f64| -> Result<f64> {
        let mut c = c_so_far;
        for p in pts {
            let lhs = source(p);
            if lhs == 0.0 {
                continue;
            }
            fit_rows += 1;
            let v = base.eval_exact(p) + 1.0;
            let pot = riesz_convolution(&shifted, p, pr.alpha, pr.lambda, &spec.quad)?;
            let pot_lower = (pot.value - pot.error).max(f64::MIN_POSITIVE);
            c = c.max(lhs / (pot_lower * v.powf(pr.sigma)));
        }
        Ok(c)
    };
    let c_base = fit(pts_base, 0.0)?;
    let c_refined = fit(pts_extra, c_base)?;
    let growth = if c_refined > 0.0 { (c_refined - c_base) / c_refined } else { 0.0 };
    fold_min(&mut worst, (spec.lift_stability_rel - growth) / spec.lift_stability_rel);
    if !(c_refined.is_finite()) || growth > spec.lift_stability_rel {
        pass = false;
        failures.push(json!({
            "kind": "fit_stability",
            "c_base": c_base,
            "c_refined": c_refined,
            "relative_growth": growth,
        }));
    }

    // Exterior tail ∫_{|y|>1} u^λ |x−y|^{−α} dy, computed as the difference
    // between the full convolution and its unit-ball part (both integrals
    // have their only jump on a support boundary, where the engine clips
    // exactly). The tail is dominated, for |x| < 1, by
    // sup(u)^λ · vol(1 < |y| < 3) · (1 − |x|)^{−α} — u vanishes beyond 3, and
    // the sup over the shell is attained on its inner sphere toward the bump
    // train, i.e. at +e₁ — and hence by a constant multiple of the minimal
    // unit-ball potential min_{|z|≤2} ∫_{|y|<1} |z−y|^{−α} dy.
    let plain_ball = UnitBallWindow::new(base, 0.0)?;
    let max_u_shell = base.eval_global_exact(&{
        let mut x = vec![0.0; n];
        x[0] = 1.0;
        x
    });
    let shell_vol = unit_ball_volume(pr.n) * ((3.0f64).powi(pr.n as i32) - 1.0);
    let unit_ball = ConstField { n: pr.n, value: 1.0, radius: 1.0 };
    let min_potential = riesz_convolution(
        &unit_ball,
        &axis_point(n, 2.0),
        pr.alpha,
        1.0,
        &spec.quad,
    )?;
    let min_potential_lower = (min_potential.value - min_potential.error).max(f64::MIN_POSITIVE);
    let mut tails: Vec<Value> = Vec::new();
    let mut c_prime = 0.0f64;
    for &x0 in tail_xs {
        let p = axis_point(n, x0);
        let full = riesz_convolution(base, &p, pr.alpha, pr.lambda, &spec.quad)?;
        let inside = riesz_convolution(&plain_ball, &p, pr.alpha, pr.lambda, &spec.quad)?;
        let tail_value = (full.value - inside.value).max(0.0);
        let tail_error = full.error + inside.error;
        let crude = max_u_shell.powf(pr.lambda) * shell_vol * (1.0 - x0.abs()).powf(-pr.alpha);
        let tail_lower = tail_value - tail_error;
        let tail_upper = tail_value + tail_error;
        c_prime = c_prime.max(tail_upper / min_potential_lower);
        let ok =
            !full.divergent && !inside.divergent && tail_lower <= crude && tail_upper.is_finite();
        fold_min(&mut worst, rel_margin(tail_lower, crude));
        if !ok {
            pass = false;
            failures.push(json!({
                "kind": "exterior_tail",
                "x0": x0,
                "tail_value": tail_value,
                "tail_error": tail_error,
                "crude_bound": crude,
            }));
        }
        tails.push(json!({
            "x0": x0,
            "tail_value": tail_value,
            "tail_error": tail_error,
            "crude_bound": crude,
        }));
    }

    Ok(CheckReport {
        name: "shifted_inequality_lift".into(),
        pass,
        worst_margin: worst,
        details: json!({
            "margin_meaning": "worst of: scaled fit-stability slack and exterior-tail \
                               domination margins, clamped to [-1, 1]",
            "applicable": true,
            "fitted_constant": c_base,
            "refined_constant": c_refined,
            "relative_growth": growth,
            "fit_rows": fit_rows,
            "exterior_tail_constant": c_prime,
            "min_unit_ball_potential": min_potential_lower,
            "max_u_on_exterior_shell": max_u_shell,
            "tails": tails,
            "failures": failures,
        }),
    })
}

fn lift_inapplicable(pr: &Params) -> CheckReport {
    CheckReport {
        name: "shifted_inequality_lift".into(),
        pass: true,
        worst_margin: 1.0,
        details: json!({
            "applicable": false,
            "reason": format!(
                "kernel exponent α = {} is at or above the dimension n = {}: the unit-ball \
                 potential of the shifted field diverges at every interior point, so no \
                 finite lift constant exists to fit; divergence itself is certified by \
                 the quadrature engine in the direct check",
                pr.alpha, pr.n
            ),
        }),
    }
}

/// Fit the smallest constant C with −Δv ≤ C·(unit-ball potential of v^λ)·v^σ
/// for the shifted field v = u + 1, over deterministic per-bump grids plus a
/// seeded refinement; require the fit stable under refinement and the
/// exterior tail dominated by its crude sup-based bound. For α ≥ n the lift
/// is inapplicable (the unit-ball potential diverges) and the check records
/// that instead.
pub fn shifted_inequality_lift(sol: &SolutionField, spec: &VerifySpec) -> Result<CheckReport> {
    spec.validate()?;
    let pr = &sol.family.params;
    if pr.alpha >= pr.nf() {
        return Ok(lift_inapplicable(pr));
    }
    let n = sol.n() as usize;
    let mut rng = salted_rng(spec.seed, 4);

    // Base grid: fixed offsets in every bump (the fit maximum is resolved
    // deterministically); refinement: the same count again, seeded.
    let grid = [0.0, 0.15, 0.3, 0.45, 0.6, 0.75];
    let mut pts_base = Vec::new();
    let mut pts_extra = Vec::new();
    for j in 0..sol.family.bumps.len() {
        for i in 0..spec.lift_points_per_bump {
            let t = grid[i % grid.len()];
            let mut eta = vec![0.0; n];
            eta[0] = if i % 2 == 0 { t } else { -t };
            pts_base.push(Point::ZoneLocal { zone: j, eta });
        }
        for i in 0..spec.lift_points_per_bump {
            let t = 0.9 * rng.gen::<f64>();
            let mut eta = vec![0.0; n];
            eta[0] = if i % 2 == 0 { t } else { -t };
            pts_extra.push(Point::ZoneLocal { zone: j, eta });
        }
    }
    lift_core(
        sol,
        &|p: &Point| sol.source_at(p),
        &pts_base,
        &pts_extra,
        &[0.3, -0.3, 0.05, -0.05],
        pr,
        spec,
    )
}

// ---------------------------------------------------------------------------
// Full verification runs
// ---------------------------------------------------------------------------

/// Run all five checks on a constructed family and assemble the report. The
/// report hash is the SHA-256 of the canonical descriptor, so any tampering
/// shows up as a different identity even before the checks fail.
pub fn verify_family(family: &BumpFamily, spec: &VerifySpec) -> Result<VerificationReport> {
    spec.validate()?;
    let descriptor = family.to_descriptor_json()?;
    let family_hash = sha256_hex(descriptor.as_bytes());
    let certificate = certificate_check(family)?;
    let sol = SolutionField::new(family.clone())?;
    let checks = vec![
        certificate,
        direct_inequality_check(&sol, spec)?,
        potential_lower_bounds_check(&sol, spec)?,
        harmonicity_and_singularity_check(&sol, spec)?,
        shifted_inequality_lift(&sol, spec)?,
    ];
    Ok(VerificationReport {
        family_hash,
        seed: spec.seed,
        tolerances: spec.tolerances_json(),
        checks,
    })
}

/// Verify a closed-form reference fixture (the solutions behind the
/// `--fixture remark1` command-line path): the singular core |x|^{2−n} for
/// λ < n/(n−2), the flat core u ≡ 1 otherwise. Both solve the inequality
/// with left side exactly 0, so the applicable checks are the direct
/// inequality, the probes with the matching singular-trace expectation, and
/// the lift (whose fitted constant is 0 for a source-free field).
pub fn verify_fixture(
    n: u32,
    alpha: f64,
    lambda: f64,
    sigma: f64,
    spec: &VerifySpec,
) -> Result<VerificationReport> {
    spec.validate()?;
    let pr = Params::new(n, alpha, lambda, sigma)?;
    let fix = ReferenceFixture::for_lambda(n, lambda)?;
    let core_name = match fix.core {
        FixtureCore::HarmonicSpike => "harmonic_spike",
        FixtureCore::Plateau => "plateau",
    };
    let descriptor = json!({
        "fixture": "remark1",
        "core": core_name,
        "n": n, "alpha": alpha, "lambda": lambda, "sigma": sigma,
    })
    .to_string();
    let family_hash = sha256_hex(descriptor.as_bytes());
    let nd = n as usize;
    let mut rng = salted_rng(spec.seed, 5);

    // Direct inequality: radial samples plus the near-origin shells; the
    // left side is exactly 0 (harmonic or constant core inside the cutoff).
    let mut samples = Vec::new();
    for i in 0..spec.samples_per_bump {
        let t = log_uniform(&mut rng, 0.05, 1.9);
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        let p = axis_point(nd, sign * t);
        samples.push(inequality_sample(&fix, 0.0, None, &p, &pr, spec)?);
    }
    for &shell in &spec.shell_radii {
        let p = axis_point(nd, shell);
        samples.push(inequality_sample(&fix, 0.0, None, &p, &pr, spec)?);
    }
    let direct = direct_report(samples, spec);

    // Probes: the whole domain is source-free; expectation depends on the core.
    let mut harmonic_pts = Vec::new();
    for i in 0..spec.fd_harmonic_points {
        let t = log_uniform(&mut rng, 0.05, 1.8);
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        let p = axis_point(nd, sign * t);
        let h0 = 0.04 * fix.clearance(&p);
        harmonic_pts.push((p, h0));
    }
    let outcome = run_probes(&fix, &|_: &Point| 0.0, &[], &harmonic_pts, spec)?;
    let expectation = match fix.core {
        FixtureCore::HarmonicSpike => SingularityExpectation::UnitTrace,
        FixtureCore::Plateau => SingularityExpectation::FlatCore,
    };
    let trace = singular_trace_check(&fix, n, &spec.shell_radii, expectation);
    let harmonicity = harmonicity_report(outcome, trace);

    // Lift: a source-free field fits C = 0; the exterior tail still runs.
    let lift = if pr.alpha >= pr.nf() {
        lift_inapplicable(&pr)
    } else {
        let pts: Vec<Point> =
            [0.1, 0.4, 0.7].iter().map(|&t| axis_point(nd, t)).collect();
        lift_core(&fix, &|_: &Point| 0.0, &pts, &pts, &[0.3, 0.05], &pr, spec)?
    };

    Ok(VerificationReport {
        family_hash,
        seed: spec.seed,
        tolerances: spec.tolerances_json(),
        checks: vec![direct, harmonicity, lift],
    })
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
