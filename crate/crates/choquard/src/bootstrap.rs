//! Exact-rational regularity bootstrap for the integrability exponent of a
//! solution near its singular point.
//!
//! The pointwise-bound proofs in the two non-trivial regions of the (λ, σ)
//! parameter plane both run on the same engine: knowing the solution lies in
//! L^p near the origin, feed that through the convolution term (a Riesz
//! potential of u^λ), multiply by the u^σ factor, and read the Newtonian
//! representation backwards to land in L^q with q strictly better than p.
//! Each rung of the ladder improves 1/p by at least a fixed positive gain C₀
//! that depends only on (n, α, λ, σ, ε), so finitely many rungs — at most
//! ⌈1/C₀⌉ + 1 — reach the exit condition.
//!
//! Two ladders, matching the two classifier bands they certify:
//!
//! * **Sloped mid band** (n−α)/(n−2) < λ < n/(n−2): start from L¹ knowledge of
//!   the rescaled source −Δv and climb until p > n/2, at which point the
//!   Newtonian kernel estimate turns the source into an L^∞ bound
//!   ([`Stage::DoneLInfinity`]). A step computes p₂ from
//!   1/p − 1/p₂ = (2−ε)/n, then splits:
//!   - **Case I** (p₂/λ < n/(n−α)): the kernel map lands in a finite L^{p₃}
//!     with λ/p₂ − 1/p₃ = (n−α)/n, and 1/q = 1/p₃ + σ/p₂.
//!   - **Case II** (p₂/λ ≥ n/(n−α)): the convolution factor is already in
//!     every L^γ, so only the σ-power limits the step; q is the harmonic
//!     midpoint of p and q̂ = p₂/σ.
//!
//! * **High band** λ ≥ n/(n−2): start from the L^λ membership the problem
//!   itself provides and climb toward the capped target exponent
//!   nλ/(n−α−ε) ([`Stage::DoneTarget`]); a step computes p₂ from
//!   λ/p − 1/p₂ = (n−α−ε)/n and p₃ from 1/p₃ = 1/p₂ + σ/p, finishing
//!   immediately when p₃ ≥ n/2 and otherwise gaining two derivatives through
//!   1/p₃ − 1/q = 2/n. Past the target, the convolution term is uniformly
//!   bounded, and a separate **tail** iteration (1/q = σ/p − (2−ε)/n, with
//!   q = ∞ once p/σ ≥ n/(2−ε)) finishes in L^∞.
//!
//! Everything here is exact `BigRational` arithmetic — traces carry no float
//! error, rerunning a trace is byte-identical, and every step's gain is
//! *checked* against its closed-form floor, turning the termination argument
//! into a runtime certificate. The small ε > 0 is fixed once per ladder as
//! the midpoint of its admissible open interval (determinism plus maximal
//! slack); the interval being empty is precisely the parameter regime where
//! the ladder does not apply, reported as [`Error::RegimeInfeasible`].

use crate::error::{Error, Result};
use crate::params::ExactParams;
use crate::ratio::{format_rat, rat_ceil_i64, rat_int, rat_min, Rat};
use serde_json::{json, Value};

// --------------------------------------------------------------------------
// Stages, case tags, states, traces
// --------------------------------------------------------------------------

/// Which ladder a state sits on, or which terminal certificate it carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    /// Sloped-mid-band ladder, climbing from L¹ toward p > n/2.
    MidLadder,
    /// High-band ladder, climbing from L^λ toward the target nλ/(n−α−ε).
    HighLadder,
    /// High-band tail: from beyond nλ/(n−α) to L^∞ via the σ-power step.
    HighTail,
    /// Terminal: an L^∞ bound near the singularity is certified.
    DoneLInfinity,
    /// Terminal for the high ladder: the capped target exponent is reached
    /// (the tail iteration takes over from here).
    DoneTarget,
}

impl Stage {
    /// Stable lowercase name used in trace JSON.
    pub fn as_str(self) -> &'static str {
        match self {
            Stage::MidLadder => "mid_ladder",
            Stage::HighLadder => "high_ladder",
            Stage::HighTail => "high_tail",
            Stage::DoneLInfinity => "done_l_infinity",
            Stage::DoneTarget => "done_target",
        }
    }

    /// `true` for the two `Done*` markers.
    pub fn is_terminal(self) -> bool {
        matches!(self, Stage::DoneLInfinity | Stage::DoneTarget)
    }
}

/// Which branch of a ladder step produced a state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseTag {
    /// Mid ladder: kernel map lands in a finite L^{p₃}. High ladder: p₃ ≥ n/2
    /// finishes at the target in one jump.
    CaseI,
    /// Mid ladder: harmonic-midpoint step against q̂ = p₂/σ. High ladder: the
    /// two-derivative step 1/p₃ − 1/q = 2/n.
    CaseII,
    /// Seeds, terminal detections, and tail rungs (which have no case split).
    NoCase,
}

impl CaseTag {
    /// Stable lowercase name used in trace JSON (`NoCase` serializes as null).
    pub fn as_str(self) -> Option<&'static str> {
        match self {
            CaseTag::CaseI => Some("case_i"),
            CaseTag::CaseII => Some("case_ii"),
            CaseTag::NoCase => None,
        }
    }
}

/// One rung of an exponent ladder: the current exponent, the intermediates of
/// the step that produced it, and the achieved improvement.
///
/// All exponents are exact rationals. On terminal L^∞ states, `p` keeps the
/// last finite exponent (the certificate is the stage tag, not `p`), `q` is
/// `None`, and `gain` records 1/p_prev − 1/q of the producing step — zero for
/// pure detections, 1/p_prev for the tail's jump to q = ∞.
#[derive(Clone, Debug)]
pub struct ExponentState {
    /// Current integrability exponent: the field is certified to lie in L^p.
    pub p: Rat,
    /// Ladder this state sits on, or a terminal marker.
    pub stage: Stage,
    /// The fixed ε of the ladder, chosen once by the midpoint rule.
    pub epsilon: Rat,
    /// Branch of the producing step.
    pub case: CaseTag,
    /// Intermediate exponent p₂ of the producing step, when computed.
    pub p2: Option<Rat>,
    /// Intermediate exponent p₃ of the producing step, when computed.
    pub p3: Option<Rat>,
    /// Auxiliary exponent q̂ = p₂/σ of a mid-band Case II step.
    pub q_hat: Option<Rat>,
    /// New exponent produced by the step (`None` on seeds and L^∞ states).
    pub q: Option<Rat>,
    /// Achieved improvement 1/p_prev − 1/q of the producing step.
    pub gain: Rat,
}

impl ExponentState {
    /// Fresh ladder seed: no producing step, zero gain.
    fn seed(p: Rat, stage: Stage, epsilon: Rat) -> Self {
        ExponentState {
            p,
            stage,
            epsilon,
            case: CaseTag::NoCase,
            p2: None,
            p3: None,
            q_hat: None,
            q: None,
            gain: rat_int(0),
        }
    }

    /// JSON object with every rational in canonical `"num/den"` form.
    pub fn to_json(&self) -> Value {
        fn opt(r: &Option<Rat>) -> Value {
            match r {
                Some(v) => Value::String(format_rat(v)),
                None => Value::Null,
            }
        }
        json!({
            "p": format_rat(&self.p),
            "stage": self.stage.as_str(),
            "epsilon": format_rat(&self.epsilon),
            "case": self.case.as_str(),
            "p2": opt(&self.p2),
            "p3": opt(&self.p3),
            "q_hat": opt(&self.q_hat),
            "q": opt(&self.q),
            "gain": format_rat(&self.gain),
        })
    }
}

/// A complete ladder run: the seed state followed by one state per step.
#[derive(Clone, Debug)]
pub struct ExponentTrace {
    /// States in order; `states[0]` is the seed.
    pub states: Vec<ExponentState>,
    /// Number of steps taken (`states.len() − 1`).
    pub step_count: usize,
    /// Stage of the last state.
    pub verdict: Stage,
}

impl ExponentTrace {
    fn new(seed: ExponentState) -> Self {
        let verdict = seed.stage;
        ExponentTrace { states: vec![seed], step_count: 0, verdict }
    }

    fn push(&mut self, state: ExponentState) {
        self.verdict = state.stage;
        self.states.push(state);
        self.step_count = self.states.len() - 1;
    }

    /// Most recent state (the trace is never empty).
    pub fn last(&self) -> &ExponentState {
        self.states.last().expect("a trace always holds at least its seed")
    }

    /// JSON document with ordered states, step count, and terminal verdict.
    pub fn to_json(&self) -> Value {
        json!({
            "states": self.states.iter().map(|s| s.to_json()).collect::<Vec<_>>(),
            "step_count": self.step_count,
            "verdict": self.verdict.as_str(),
        })
    }
}

// --------------------------------------------------------------------------
// Regime gates and ε selection
// --------------------------------------------------------------------------

/// 1/r for a nonzero rational.
fn inv(r: &Rat) -> Rat {
    rat_int(1) / r
}

/// Gate for the sloped mid band in its strict interior form:
/// (n−α)/(n−2) < λ < n/(n−2), σ > 0, 1 < λ+σ < (2n−α)/(n−2), and α < n so the
/// kernel genuinely smooths.
///
/// (Boundary parameter points — λ at the left junction or σ = 0 — are handled
/// upstream by nudging into the interior, which only strengthens the
/// inequality being bootstrapped; the ladder itself works strictly inside.)
fn require_mid_regime(pr: &ExactParams) -> Result<()> {
    let n = pr.n_rat();
    let n2 = rat_int(i64::from(pr.n) - 2);
    if pr.alpha >= n {
        return Err(Error::RegimeInfeasible(format!(
            "the mid-band exponent ladder needs α < n so |x|^(−α) is a smoothing kernel; \
             got α = {} at n = {}",
            format_rat(&pr.alpha),
            pr.n
        )));
    }
    let low = (&n - &pr.alpha) / &n2;
    let high = &n / &n2;
    if !(pr.lambda > low && pr.lambda < high) {
        return Err(Error::RegimeInfeasible(format!(
            "the mid-band exponent ladder needs (n−α)/(n−2) < λ < n/(n−2), i.e. {} < λ < {}; \
             got λ = {}",
            format_rat(&low),
            format_rat(&high),
            format_rat(&pr.lambda)
        )));
    }
    if pr.sigma <= rat_int(0) {
        return Err(Error::RegimeInfeasible(format!(
            "the mid-band exponent ladder needs σ > 0 (the σ = 0 boundary is absorbed by a \
             strict-interior nudge upstream); got σ = {}",
            format_rat(&pr.sigma)
        )));
    }
    let total = &pr.lambda + &pr.sigma;
    let cap = (rat_int(2) * &n - &pr.alpha) / &n2;
    if !(total > rat_int(1) && total < cap) {
        return Err(Error::RegimeInfeasible(format!(
            "the mid-band exponent ladder needs 1 < λ+σ < (2n−α)/(n−2) = {}; got λ+σ = {}",
            format_rat(&cap),
            format_rat(&total)
        )));
    }
    Ok(())
}

/// Gate for the high band: λ ≥ n/(n−2), 0 < σ < 1 − (α−2)λ/n, α < n.
fn require_high_regime(pr: &ExactParams) -> Result<()> {
    let n = pr.n_rat();
    let n2 = rat_int(i64::from(pr.n) - 2);
    if pr.alpha >= n {
        return Err(Error::RegimeInfeasible(format!(
            "the high-band exponent ladder needs α < n so |x|^(−α) is a smoothing kernel; \
             got α = {} at n = {}",
            format_rat(&pr.alpha),
            pr.n
        )));
    }
    let lam_floor = &n / &n2;
    if pr.lambda < lam_floor {
        return Err(Error::RegimeInfeasible(format!(
            "the high-band exponent ladder needs λ ≥ n/(n−2) = {}; got λ = {}",
            format_rat(&lam_floor),
            format_rat(&pr.lambda)
        )));
    }
    if pr.sigma <= rat_int(0) {
        return Err(Error::RegimeInfeasible(format!(
            "the high-band exponent ladder needs σ > 0 (σ = 0 is absorbed by a strict-interior \
             nudge upstream); got σ = {}",
            format_rat(&pr.sigma)
        )));
    }
    let sigma_cap = rat_int(1) - (&pr.alpha - rat_int(2)) * &pr.lambda / &n;
    if pr.sigma >= sigma_cap {
        return Err(Error::RegimeInfeasible(format!(
            "the high-band exponent ladder needs σ < 1 − (α−2)λ/n = {}; got σ = {} — outside \
             the band where an L^∞ bound holds",
            format_rat(&sigma_cap),
            format_rat(&pr.sigma)
        )));
    }
    Ok(())
}

/// Midpoint ε for the sloped mid band.
///
/// The ladder needs a single ε ∈ (0, 1) with
///
/// * ((n+2−α)/(n+2−α−ε))·(n−α)/(n−2) < λ  — keeps the Case II gain floor
///   positive,
/// * λ < n/(n−2+ε)                         — keeps p₂/λ > 1,
/// * λ+σ < (2n−α)/(n−2+ε)                  — keeps the Case I gain floor
///   positive.
///
/// Solving each for ε gives an open interval (0, min(1, b₁, b₂, b₃)); the
/// regime gate is exactly the statement that the interval is nonempty, and
/// the returned value is its midpoint. Every bound is re-verified on the
/// returned ε before it is handed out.
pub fn epsilon_select_mid(pr: &ExactParams) -> Result<Rat> {
    require_mid_regime(pr)?;
    let n = pr.n_rat();
    let n2 = rat_int(i64::from(pr.n) - 2);
    let two = rat_int(2);

    let npa = &n + &two - &pr.alpha; // n+2−α > 0 since α < n+2
    let b1 = &npa * (&pr.lambda * &n2 - (&n - &pr.alpha)) / (&pr.lambda * &n2);
    let b2 = &n / &pr.lambda - &n2;
    let b3 = (&two * &n - &pr.alpha) / (&pr.lambda + &pr.sigma) - &n2;
    let eps = rat_min(&[rat_int(1), b1, b2, b3]) / &two;

    // Re-verify the three strict inequalities (and the σ consequence) on the
    // value actually returned; a failure here is a logic error, not a caller
    // error.
    let lhs1 = (&npa / (&npa - &eps)) * (&n - &pr.alpha) / &n2;
    let rhs2 = &n / (&n2 + &eps);
    let rhs3 = (&two * &n - &pr.alpha) / (&n2 + &eps);
    if !(eps > rat_int(0)
        && eps < rat_int(1)
        && lhs1 < pr.lambda
        && pr.lambda < rhs2
        && &pr.lambda + &pr.sigma < rhs3
        && pr.sigma < rhs2)
    {
        return Err(Error::Internal(format!(
            "midpoint ε = {} failed re-verification of its defining inequalities; \
             the admissible interval was computed incorrectly",
            format_rat(&eps)
        )));
    }
    Ok(eps)
}

/// Midpoint ε for the high band: ε ∈ (0, 1) with α + ε < n and
/// σ < 1 − (α+ε−2)λ/n, i.e. ε < min(1, n−α, n(1−σ)/λ + 2 − α).
///
/// Both bounds are positive exactly on the regime gate, and the returned
/// midpoint is re-verified.
pub fn epsilon_select_high(pr: &ExactParams) -> Result<Rat> {
    require_high_regime(pr)?;
    let n = pr.n_rat();
    let two = rat_int(2);

    let b1 = &n - &pr.alpha;
    let b2 = &n * (rat_int(1) - &pr.sigma) / &pr.lambda + &two - &pr.alpha;
    let eps = rat_min(&[rat_int(1), b1, b2]) / &two;

    let sigma_cap = rat_int(1) - (&pr.alpha + &eps - &two) * &pr.lambda / &n;
    if !(eps > rat_int(0)
        && eps < rat_int(1)
        && &pr.alpha + &eps < n
        && pr.sigma < sigma_cap)
    {
        return Err(Error::Internal(format!(
            "midpoint ε = {} failed re-verification of its defining inequalities; \
             the admissible interval was computed incorrectly",
            format_rat(&eps)
        )));
    }
    Ok(eps)
}

/// Check that a caller-supplied ε is admissible for the mid ladder (used by
/// the public step function so a stale or foreign ε cannot silently produce
/// an uncertified trace).
fn require_mid_epsilon(pr: &ExactParams, eps: &Rat) -> Result<()> {
    let n = pr.n_rat();
    let n2 = rat_int(i64::from(pr.n) - 2);
    let two = rat_int(2);
    let npa = &n + &two - &pr.alpha;
    let ok = *eps > rat_int(0)
        && *eps < rat_int(1)
        && (&npa / (&npa - eps)) * (&n - &pr.alpha) / &n2 < pr.lambda
        && pr.lambda < &n / (&n2 + eps)
        && &pr.lambda + &pr.sigma < (&two * &n - &pr.alpha) / (&n2 + eps);
    if ok {
        Ok(())
    } else {
        Err(Error::Parameter(format!(
            "ε = {} is not admissible for the mid-band ladder at these parameters; \
             use the midpoint selector",
            format_rat(eps)
        )))
    }
}

/// Check that a caller-supplied ε is admissible for the high ladder/tail.
fn require_high_epsilon(pr: &ExactParams, eps: &Rat) -> Result<()> {
    let n = pr.n_rat();
    let two = rat_int(2);
    let ok = *eps > rat_int(0)
        && *eps < rat_int(1)
        && &pr.alpha + eps < n
        && pr.sigma < rat_int(1) - (&pr.alpha + eps - &two) * &pr.lambda / &n;
    if ok {
        Ok(())
    } else {
        Err(Error::Parameter(format!(
            "ε = {} is not admissible for the high-band ladder at these parameters; \
             use the midpoint selector",
            format_rat(eps)
        )))
    }
}

// --------------------------------------------------------------------------
// Gain floors (the closed-form C₀ of each ladder)
// --------------------------------------------------------------------------

/// Mid-band Case I floor: (2n − α − (n−2+ε)(λ+σ))/n, positive by the ε bound
/// b₃. Equality holds exactly at the seed p = 1.
pub fn mid_gain_floor_case_i(pr: &ExactParams, eps: &Rat) -> Rat {
    let n = pr.n_rat();
    let n2 = rat_int(i64::from(pr.n) - 2);
    (rat_int(2) * &n - &pr.alpha - (&n2 + eps) * (&pr.lambda + &pr.sigma)) / &n
}

/// Mid-band Case II floor: half the lower bound on 1/p − 1/q̂, which is
/// (2−ε)/n for σ ≤ 1 and
/// ((n+2−α−ε)/(nλ))·(λ − ((n+2−α)/(n+2−α−ε))·(n−α)/(n−2)) for σ > 1
/// (positive by the ε bound b₁). The halving reflects q being the harmonic
/// midpoint of p and q̂.
pub fn mid_gain_floor_case_ii(pr: &ExactParams, eps: &Rat) -> Rat {
    let n = pr.n_rat();
    let n2 = rat_int(i64::from(pr.n) - 2);
    let two = rat_int(2);
    let raw = if pr.sigma <= rat_int(1) {
        (&two - eps) / &n
    } else {
        let npa = &n + &two - &pr.alpha;
        let lead = (&npa - eps) / (&n * &pr.lambda);
        let inner = &pr.lambda - (&npa / (&npa - eps)) * (&n - &pr.alpha) / &n2;
        lead * inner
    };
    raw / two
}

/// Combined mid-band floor: the minimum over both cases (a step may take
/// either branch, so the a-priori budget must cover both).
pub fn mid_gain_floor(pr: &ExactParams, eps: &Rat) -> Rat {
    rat_min(&[mid_gain_floor_case_i(pr, eps), mid_gain_floor_case_ii(pr, eps)])
}

/// High-band ladder floor: (1−(λ+σ))/λ + 1 + (2−α−ε)/n, which simplifies to
/// (1−σ)/λ + (2−α−ε)/n — positive exactly by the ε bound b₂. Equality holds
/// at the seed p = λ.
pub fn high_gain_floor(pr: &ExactParams, eps: &Rat) -> Rat {
    let n = pr.n_rat();
    (rat_int(1) - (&pr.lambda + &pr.sigma)) / &pr.lambda
        + rat_int(1)
        + (rat_int(2) - &pr.alpha - eps) / &n
}

/// High-band tail floor: every finite tail rung gains strictly more than 1/n
/// when σ ≤ 1 and strictly more than α/n when σ > 1.
pub fn tail_gain_floor(pr: &ExactParams) -> Rat {
    if pr.sigma <= rat_int(1) {
        inv(&pr.n_rat())
    } else {
        &pr.alpha / pr.n_rat()
    }
}

/// Target exponent of the high-band ladder: nλ/(n−α−ε).
pub fn high_target(pr: &ExactParams, eps: &Rat) -> Rat {
    let n = pr.n_rat();
    &n * &pr.lambda / (&n - &pr.alpha - eps)
}

// --------------------------------------------------------------------------
// Ladder steps
// --------------------------------------------------------------------------

/// One rung of the sloped-mid-band ladder.
///
/// Requires a [`Stage::MidLadder`] state with p ≥ 1. If p > n/2 the ladder is
/// finished: the source −Δv lies in L^{p > n/2}, so the Newtonian kernel map
/// bounds v, and the returned state is [`Stage::DoneLInfinity`] (a pure
/// detection, gain 0). Otherwise the rung computes p₂ from
/// 1/p₂ = 1/p − (2−ε)/n, splits on p₂/λ against n/(n−α), and certifies the
/// achieved gain against the matching closed-form floor — a shortfall is an
/// internal contradiction, never silently accepted.
pub fn step_mid(pr: &ExactParams, state: &ExponentState) -> Result<ExponentState> {
    if state.stage != Stage::MidLadder {
        return Err(Error::Parameter(format!(
            "step_mid needs a mid-ladder state; got stage {}",
            state.stage.as_str()
        )));
    }
    require_mid_regime(pr)?;
    require_mid_epsilon(pr, &state.epsilon)?;

    let n = pr.n_rat();
    let eps = &state.epsilon;
    let half_n = &n / rat_int(2);
    if state.p > half_n {
        // Detection: p > n/2 turns the Newtonian representation into an L^∞
        // bound. No arithmetic, no gain.
        let mut done = ExponentState::seed(state.p.clone(), Stage::DoneLInfinity, eps.clone());
        done.case = CaseTag::NoCase;
        return Ok(done);
    }
    if state.p < rat_int(1) {
        return Err(Error::Parameter(format!(
            "mid-ladder exponent p = {} is below 1; the ladder starts from L¹",
            format_rat(&state.p)
        )));
    }

    // 1/p₂ = 1/p − (2−ε)/n; positive because p ≤ n/2 gives 1/p ≥ 2/n.
    let inv_p2 = inv(&state.p) - (rat_int(2) - eps) / &n;
    if inv_p2 <= rat_int(0) {
        return Err(Error::Internal(format!(
            "mid-ladder step lost positivity of 1/p₂ at p = {} — the p ≤ n/2 gate is broken",
            format_rat(&state.p)
        )));
    }
    let p2 = inv(&inv_p2);

    let kernel_cap = &n / (&n - &pr.alpha); // n/(n−α) > 0 since α < n
    let (case, p3, q_hat, q, floor) = if &p2 / &pr.lambda < kernel_cap {
        // Case I: the kernel map lands in a finite L^{p₃}.
        let inv_p3 = &pr.lambda * &inv_p2 - (&n - &pr.alpha) / &n;
        let p3 = inv(&inv_p3); // positive exactly because p₂/λ < n/(n−α)
        let inv_q = &inv_p3 + &pr.sigma * &inv_p2;
        let q = inv(&inv_q);
        (CaseTag::CaseI, Some(p3), None, q, mid_gain_floor_case_i(pr, eps))
    } else {
        // Case II: convolution already in every L^γ; q is the harmonic
        // midpoint of p and q̂ = p₂/σ.
        let q_hat = &p2 / &pr.sigma;
        let inv_q = (inv(&state.p) + inv(&q_hat)) / rat_int(2);
        let q = inv(&inv_q);
        (CaseTag::CaseII, None, Some(q_hat), q, mid_gain_floor_case_ii(pr, eps))
    };

    let gain = inv(&state.p) - inv(&q);
    if gain < floor {
        return Err(Error::Internal(format!(
            "mid-ladder step gained {} < certified floor {} (case {:?}) — internal contradiction",
            format_rat(&gain),
            format_rat(&floor),
            case
        )));
    }
    if q <= state.p {
        return Err(Error::Internal(format!(
            "mid-ladder step failed strict monotonicity: q = {} does not exceed p = {}",
            format_rat(&q),
            format_rat(&state.p)
        )));
    }

    Ok(ExponentState {
        p: q.clone(),
        stage: Stage::MidLadder,
        epsilon: eps.clone(),
        case,
        p2: Some(p2),
        p3,
        q_hat,
        q: Some(q),
        gain,
    })
}

/// One rung of the high-band ladder.
///
/// Requires a [`Stage::HighLadder`] state with p ∈ [λ, nλ/(n−α−ε)). Computes
/// p₂ from λ/p − 1/p₂ = (n−α−ε)/n and p₃ from 1/p₃ = 1/p₂ + σ/p (p₃ > 1 is
/// asserted — its failure is an internal contradiction). If p₃ ≥ n/2 the
/// source is strong enough to jump straight to the target exponent (Case I,
/// [`Stage::DoneTarget`]); otherwise the two-derivative step
/// 1/p₃ − 1/q = 2/n applies (Case II), with the uncapped gain certified
/// against its floor and q capped at the target so the tail's entry condition
/// is preserved.
pub fn step_high(pr: &ExactParams, state: &ExponentState) -> Result<ExponentState> {
    if state.stage != Stage::HighLadder {
        return Err(Error::Parameter(format!(
            "step_high needs a high-ladder state; got stage {}",
            state.stage.as_str()
        )));
    }
    require_high_regime(pr)?;
    require_high_epsilon(pr, &state.epsilon)?;

    let n = pr.n_rat();
    let eps = &state.epsilon;
    let target = high_target(pr, eps);
    if state.p < pr.lambda {
        return Err(Error::Parameter(format!(
            "high-ladder exponent p = {} is below its seed λ = {}",
            format_rat(&state.p),
            format_rat(&pr.lambda)
        )));
    }
    if state.p >= target {
        return Err(Error::Parameter(format!(
            "high-ladder exponent p = {} already reached the target {}; the tail iteration \
             takes over from here",
            format_rat(&state.p),
            format_rat(&target)
        )));
    }

    // λ/p − 1/p₂ = (n−α−ε)/n; 1/p₂ > 0 is exactly p < target.
    let inv_p2 = &pr.lambda / &state.p - (&n - &pr.alpha - eps) / &n;
    let p2 = inv(&inv_p2);
    // 1/p₃ = 1/p₂ + σ/p.
    let inv_p3 = &inv_p2 + &pr.sigma / &state.p;
    let p3 = inv(&inv_p3);
    if p3 <= rat_int(1) {
        return Err(Error::Internal(format!(
            "high-ladder intermediate p₃ = {} must exceed 1 (it is bounded by \
             1/λ + 2/n < 1 territory) — internal contradiction",
            format_rat(&p3)
        )));
    }

    let half_n = &n / rat_int(2);
    if p3 >= half_n {
        // Case I: source already in L^{p₃ ≥ n/2}; the representation bounds v
        // in every finite L^q, so the target itself is reached in one jump.
        let gain = inv(&state.p) - inv(&target);
        return Ok(ExponentState {
            p: target.clone(),
            stage: Stage::DoneTarget,
            epsilon: eps.clone(),
            case: CaseTag::CaseI,
            p2: Some(p2),
            p3: Some(p3),
            q_hat: None,
            q: Some(target),
            gain,
        });
    }

    // Case II: 1/q = 1/p₃ − 2/n, positive because p₃ < n/2.
    let inv_q = &inv_p3 - rat_int(2) / &n;
    let q_uncapped = inv(&inv_q);
    let floor = high_gain_floor(pr, eps);
    let gain_uncapped = inv(&state.p) - &inv_q;
    if gain_uncapped < floor {
        return Err(Error::Internal(format!(
            "high-ladder step gained {} < certified floor {} — internal contradiction",
            format_rat(&gain_uncapped),
            format_rat(&floor)
        )));
    }
    let (q, stage) = if q_uncapped >= target {
        (target, Stage::DoneTarget)
    } else {
        (q_uncapped, Stage::HighLadder)
    };
    let gain = inv(&state.p) - inv(&q);
    if q <= state.p {
        return Err(Error::Internal(format!(
            "high-ladder step failed strict monotonicity: q = {} does not exceed p = {}",
            format_rat(&q),
            format_rat(&state.p)
        )));
    }

    Ok(ExponentState {
        p: q.clone(),
        stage,
        epsilon: eps.clone(),
        case: CaseTag::CaseII,
        p2: Some(p2),
        p3: Some(p3),
        q_hat: None,
        q: Some(q),
        gain,
    })
}

/// High-band tail: from p > nλ/(n−α) — where the convolution factor is
/// uniformly bounded and 0 ≤ −Δv ≤ C v^σ — iterate 1/q = σ/p − (2−ε)/n,
/// jumping to q = ∞ (hence [`Stage::DoneLInfinity`]) as soon as
/// p/σ ≥ n/(2−ε). Every finite rung's gain is certified strictly above the
/// tail floor, and the whole run is capped by its certified step budget.
pub fn tail_iteration_high(pr: &ExactParams, epsilon: &Rat, p: &Rat) -> Result<ExponentTrace> {
    require_high_regime(pr)?;
    require_high_epsilon(pr, epsilon)?;

    let n = pr.n_rat();
    let entry_min = &n * &pr.lambda / (&n - &pr.alpha);
    if *p <= entry_min {
        return Err(Error::Parameter(format!(
            "tail iteration needs p > nλ/(n−α) = {} (uniform boundedness of the convolution \
             factor); got p = {}",
            format_rat(&entry_min),
            format_rat(p)
        )));
    }

    let floor = tail_gain_floor(pr);
    let budget = rat_ceil_i64(&inv(&floor)) + 1;
    let clearance = &n / (rat_int(2) - epsilon); // q = ∞ once p/σ ≥ this
    let mut trace = ExponentTrace::new(ExponentState::seed(
        p.clone(),
        Stage::HighTail,
        epsilon.clone(),
    ));

    loop {
        let cur = trace.last().p.clone();
        if &cur / &pr.sigma >= clearance {
            // q = ∞: the σ-power of an L^p function with p/σ ≥ n/(2−ε) feeds
            // the kernel map straight into L^∞.
            let mut done = ExponentState::seed(cur.clone(), Stage::DoneLInfinity, epsilon.clone());
            done.gain = inv(&cur);
            trace.push(done);
            return Ok(trace);
        }
        // 1/q = σ/p − (2−ε)/n, positive in this branch by the clearance test.
        let inv_q = &pr.sigma / &cur - (rat_int(2) - epsilon) / &n;
        let q = inv(&inv_q);
        let gain = inv(&cur) - &inv_q;
        if gain <= floor {
            return Err(Error::Internal(format!(
                "tail rung gained {} ≤ certified floor {} — internal contradiction",
                format_rat(&gain),
                format_rat(&floor)
            )));
        }
        if q <= cur {
            return Err(Error::Internal(format!(
                "tail rung failed strict monotonicity: q = {} does not exceed p = {}",
                format_rat(&q),
                format_rat(&cur)
            )));
        }
        let mut next = ExponentState::seed(q.clone(), Stage::HighTail, epsilon.clone());
        next.q = Some(q);
        next.gain = gain;
        trace.push(next);
        if trace.step_count > budget as usize {
            return Err(Error::Internal(format!(
                "tail iteration exceeded its certified budget of {budget} steps"
            )));
        }
    }
}

// --------------------------------------------------------------------------
// Full runs
// --------------------------------------------------------------------------

/// Which ladder a full run starts on, and from which seed exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LadderStart {
    /// Sloped mid band, seeded at p = 1 (the source is a priori in L¹).
    MidFromOne,
    /// High band, seeded at p = λ (the L^λ membership the problem provides).
    HighFromLambda,
}

/// Run a ladder to its terminal L^∞ certificate.
///
/// * [`LadderStart::MidFromOne`]: selects ε, climbs the mid ladder from p = 1
///   until the p > n/2 detection fires.
/// * [`LadderStart::HighFromLambda`]: selects ε, climbs the high ladder from
///   p = λ to [`Stage::DoneTarget`], then hands the target exponent to the
///   tail iteration; the merged trace ends in [`Stage::DoneLInfinity`].
///
/// Each stage is hard-capped at its certified budget ⌈1/C₀⌉ + 1 where C₀ is
/// that stage's closed-form gain floor; exceeding the cap is an internal
/// contradiction (the per-step gain certificates make it unreachable).
pub fn run_to_termination(pr: &ExactParams, start: LadderStart) -> Result<ExponentTrace> {
    match start {
        LadderStart::MidFromOne => {
            let eps = epsilon_select_mid(pr)?;
            let budget = rat_ceil_i64(&inv(&mid_gain_floor(pr, &eps))) + 1;
            let mut trace =
                ExponentTrace::new(ExponentState::seed(rat_int(1), Stage::MidLadder, eps));
            while trace.last().stage == Stage::MidLadder {
                let next = step_mid(pr, trace.last())?;
                trace.push(next);
                if trace.step_count > budget as usize {
                    return Err(Error::Internal(format!(
                        "mid ladder exceeded its certified budget of {budget} steps"
                    )));
                }
            }
            Ok(trace)
        }
        LadderStart::HighFromLambda => {
            let eps = epsilon_select_high(pr)?;
            let budget = rat_ceil_i64(&inv(&high_gain_floor(pr, &eps))) + 1;
            let mut trace = ExponentTrace::new(ExponentState::seed(
                pr.lambda.clone(),
                Stage::HighLadder,
                eps.clone(),
            ));
            while trace.last().stage == Stage::HighLadder {
                let next = step_high(pr, trace.last())?;
                trace.push(next);
                if trace.step_count > budget as usize {
                    return Err(Error::Internal(format!(
                        "high ladder exceeded its certified budget of {budget} steps"
                    )));
                }
            }
            // The high ladder can only terminate at the target; the tail
            // finishes the job from there.
            let tail = tail_iteration_high(pr, &eps, &trace.last().p)?;
            for state in tail.states.into_iter().skip(1) {
                trace.push(state);
            }
            Ok(trace)
        }
    }
}

// --------------------------------------------------------------------------
// Tests
// --------------------------------------------------------------------------
