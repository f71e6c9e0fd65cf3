//! Threshold curve g_α and pointwise-bound region classification.
//!
//! The (λ, σ) quadrant splits along a continuous piecewise-linear threshold
//!
//! ```text
//!            ⎧ n/(n−2)                      0 < λ < (n−α)/(n−2)      (Flat)
//!   g_α(λ) = ⎨ (2n−α)/(n−2) − λ            (n−α)/(n−2) ≤ λ < n/(n−2) (Sloped)
//!            ⎩ max{0, 1 − (α−2)λ/n}        λ ≥ n/(n−2)               (Tail)
//! ```
//!
//! Below the curve every nonnegative solution is a-priori bounded near the
//! origin (harmonically bounded for subcritical λ, continuously extendable
//! for λ ≥ n/(n−2)); above it, solutions can blow up faster than any
//! prescribed rate. On the curve itself the answer depends on the segment:
//! two segments are resolved (one bounded, one unbounded), the rest are
//! genuinely open and reported as such — never guessed.
//!
//! Two arithmetic paths are provided. The exact path works on rationals and
//! decides σ = g_α(λ) with no tolerance at all; the float path declares
//! criticality inside the band |σ − g| ≤ 1e−12·max(1, |g|). Branch selection
//! uses the half-open intervals exactly as written above.

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};
use crate::params::{ExactParams, Params};
use crate::ratio::{rat_int, Rat};

/// Relative half-width of the float-path criticality band.
pub const CRITICAL_BAND: f64 = 1e-12;

/// Which piece of the threshold curve g_α applied at a given λ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// 0 < λ < (n−α)/(n−2): g constant at n/(n−2).
    Flat,
    /// (n−α)/(n−2) ≤ λ < n/(n−2): g = (2n−α)/(n−2) − λ, slope −1.
    Sloped,
    /// λ ≥ n/(n−2): g = max{0, 1 − (α−2)λ/n}.
    Tail,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Branch::Flat => "Flat",
            Branch::Sloped => "Sloped",
            Branch::Tail => "Tail",
        };
        f.write_str(s)
    }
}

/// Pointwise-bound verdict at a parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// σ < g, λ < n/(n−2): every solution is O(|x|^{2−n}) at the origin.
    HarmonicallyBounded,
    /// σ < g, λ ≥ n/(n−2): every solution is bounded with a C¹ extension.
    BoundedC1,
    /// σ > g: solutions exist that outgrow any prescribed rate.
    NoPointwiseBound,
    /// σ = g on the flat segment interior: still harmonically bounded.
    CriticalHarmonicallyBounded,
    /// σ = g at λ = (n−α)/(n−2), or on the tail with α > 2 and λ > n/(α−2):
    /// no pointwise bound exists even on the threshold.
    CriticalNoBound,
    /// σ = g on a segment where neither direction is known.
    CriticalOpen,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::HarmonicallyBounded => "HarmonicallyBounded",
            Verdict::BoundedC1 => "BoundedC1",
            Verdict::NoPointwiseBound => "NoPointwiseBound",
            Verdict::CriticalHarmonicallyBounded => "CriticalHarmonicallyBounded",
            Verdict::CriticalNoBound => "CriticalNoBound",
            Verdict::CriticalOpen => "CriticalOpen",
        };
        f.write_str(s)
    }
}

impl Verdict {
    /// `true` for the three verdicts that sit exactly on the curve.
    pub fn is_critical(&self) -> bool {
        matches!(
            self,
            Verdict::CriticalHarmonicallyBounded | Verdict::CriticalNoBound | Verdict::CriticalOpen
        )
    }
}

/// Float-path classification result.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionVerdict {
    pub verdict: Verdict,
    pub g_value: f64,
    pub branch: Branch,
}

/// Exact-path classification result.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactRegionVerdict {
    pub verdict: Verdict,
    pub g_value: Rat,
    pub branch: Branch,
}

fn check_g_domain(n: u32, alpha_ok: bool, lambda_ok: bool) -> Result<()> {
    if n < 3 {
        return Err(Error::Parameter(format!("dimension n = {n} is below 3")));
    }
    if !alpha_ok {
        return Err(Error::Parameter("alpha outside (0, n+2)".into()));
    }
    if !lambda_ok {
        return Err(Error::Parameter("lambda must be positive".into()));
    }
    Ok(())
}

/// Threshold value g_α(λ) and its branch, in exact rationals.
pub fn g_alpha_exact(n: u32, alpha: &Rat, lambda: &Rat) -> Result<(Rat, Branch)> {
    check_g_domain(
        n,
        alpha.is_positive() && *alpha < rat_int(n as i64 + 2),
        lambda.is_positive(),
    )?;
    let n_r = rat_int(n as i64);
    let nm2 = rat_int(n as i64 - 2);
    let junction_flat = (&n_r - alpha) / &nm2; // (n−α)/(n−2)
    let junction_tail = &n_r / &nm2; // n/(n−2)
    if *lambda < junction_flat {
        Ok((junction_tail, Branch::Flat))
    } else if *lambda < junction_tail {
        let g = (rat_int(2 * n as i64) - alpha) / &nm2 - lambda;
        Ok((g, Branch::Sloped))
    } else {
        let t = Rat::one() - (alpha - rat_int(2)) * lambda / &n_r;
        Ok((if t.is_negative() { Rat::zero() } else { t }, Branch::Tail))
    }
}

/// Threshold value g_α(λ) and its branch, in floats.
pub fn g_alpha(n: u32, alpha: f64, lambda: f64) -> Result<(f64, Branch)> {
    check_g_domain(
        n,
        alpha > 0.0 && alpha < n as f64 + 2.0,
        lambda > 0.0 && lambda.is_finite(),
    )?;
    let nf = n as f64;
    let junction_flat = (nf - alpha) / (nf - 2.0);
    let junction_tail = nf / (nf - 2.0);
    if lambda < junction_flat {
        Ok((junction_tail, Branch::Flat))
    } else if lambda < junction_tail {
        Ok(((2.0 * nf - alpha) / (nf - 2.0) - lambda, Branch::Sloped))
    } else {
        Ok(((1.0 - (alpha - 2.0) * lambda / nf).max(0.0), Branch::Tail))
    }
}

/// Shared verdict dispatch, given the exact trichotomy σ vs. g.
///
/// `cmp` is the ordering of σ against g; the remaining arguments reproduce
/// the critical-line case split: the flat-segment interior stays bounded,
/// the flat/sloped junction λ = (n−α)/(n−2) blows up, the deep tail
/// (α > 2, λ > n/(α−2)) blows up, and everything else on the curve is open.
fn dispatch(
    cmp: std::cmp::Ordering,
    lambda_below_tail_junction: bool,
    lambda_vs_flat_junction: std::cmp::Ordering,
    deep_tail: bool,
) -> Verdict {
    use std::cmp::Ordering::*;
    match cmp {
        Less => {
            if lambda_below_tail_junction {
                Verdict::HarmonicallyBounded
            } else {
                Verdict::BoundedC1
            }
        }
        Greater => Verdict::NoPointwiseBound,
        Equal => match lambda_vs_flat_junction {
            Less => Verdict::CriticalHarmonicallyBounded,
            Equal => Verdict::CriticalNoBound,
            Greater => {
                if deep_tail {
                    Verdict::CriticalNoBound
                } else {
                    Verdict::CriticalOpen
                }
            }
        },
    }
}

/// Classify a parameter point with exact rational comparisons.
pub fn classify_exact(p: &ExactParams) -> Result<ExactRegionVerdict> {
    let (g, branch) = g_alpha_exact(p.n, &p.alpha, &p.lambda)?;
    let n_r = p.n_rat();
    let nm2 = rat_int(p.n as i64 - 2);
    let junction_flat = (&n_r - &p.alpha) / &nm2;
    let junction_tail = &n_r / &nm2;
    let two = rat_int(2);
    // λ > n/(α−2) rearranged as λ(α−2) > n to stay division-free.
    let deep_tail = p.alpha > two && (&p.lambda * (&p.alpha - &two)) > n_r;
    let verdict = dispatch(
        p.sigma.cmp(&g),
        p.lambda < junction_tail,
        p.lambda.cmp(&junction_flat),
        deep_tail,
    );
    Ok(ExactRegionVerdict { verdict, g_value: g, branch })
}

/// Classify a parameter point in floats.
///
/// σ = g is declared inside the band |σ − g| ≤ 1e−12·max(1, |g|); all other
/// comparisons are plain float comparisons. Knife-edge inputs that float
/// rounding moves across a branch junction are decided by the rounded values;
/// the exact path is the reference semantics.
pub fn classify(p: &Params) -> Result<RegionVerdict> {
    p.validate()?;
    let (g, branch) = g_alpha(p.n, p.alpha, p.lambda)?;
    let nf = p.n as f64;
    let junction_flat = (nf - p.alpha) / (nf - 2.0);
    let junction_tail = nf / (nf - 2.0);
    let critical = (p.sigma - g).abs() <= CRITICAL_BAND * g.abs().max(1.0);
    let cmp = if critical {
        std::cmp::Ordering::Equal
    } else if p.sigma < g {
        std::cmp::Ordering::Less
    } else {
        std::cmp::Ordering::Greater
    };
    let deep_tail = p.alpha > 2.0 && p.lambda > nf / (p.alpha - 2.0);
    let verdict = dispatch(
        cmp,
        p.lambda < junction_tail,
        p.lambda
            .partial_cmp(&junction_flat)
            .expect("validated params are never NaN"),
        deep_tail,
    );
    Ok(RegionVerdict { verdict, g_value: g, branch })
}

/// One row of a region-diagram scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridPoint {
    pub lambda: f64,
    pub sigma: f64,
    pub g_alpha: f64,
    pub verdict: Verdict,
    pub branch: Branch,
}

/// Scan a rectangle of the (λ, σ) quadrant at fixed (n, α).
///
/// λ samples are the right endpoints of `res_lambda` equal subintervals of
/// `(lambda_range.0, lambda_range.1]` (so a range starting at 0 never
/// evaluates λ = 0); σ samples run inclusively from `sigma_range.0` to
/// `sigma_range.1` in `res_sigma` steps. Rows are emitted in row-major order:
/// λ outer, σ inner. Every row's verdict equals `classify` at that point.
pub fn grid_scan(
    n: u32,
    alpha: f64,
    lambda_range: (f64, f64),
    sigma_range: (f64, f64),
    res_lambda: u32,
    res_sigma: u32,
) -> Result<Vec<GridPoint>> {
    if res_lambda == 0 || res_sigma == 0 {
        return Err(Error::Parameter("grid resolution must be positive".into()));
    }
    let (l0, l1) = lambda_range;
    let (s0, s1) = sigma_range;
    if !(l0 >= 0.0 && l1 >= l0 && l1 > 0.0) {
        return Err(Error::Parameter(format!("lambda range [{l0}, {l1}] not inside (0, inf)")));
    }
    if !(s0 >= 0.0 && s1 >= s0) {
        return Err(Error::Parameter(format!("sigma range [{s0}, {s1}] not inside [0, inf)")));
    }
    let mut rows = Vec::with_capacity(res_lambda as usize * res_sigma as usize);
    for i in 0..res_lambda {
        let lambda = l0 + (i as f64 + 1.0) * (l1 - l0) / res_lambda as f64;
        for k in 0..res_sigma {
            let sigma = if res_sigma == 1 {
                s0
            } else {
                s0 + k as f64 * (s1 - s0) / (res_sigma as f64 - 1.0)
            };
            let rv = classify(&Params { n, alpha, lambda, sigma })?;
            rows.push(GridPoint {
                lambda,
                sigma,
                g_alpha: rv.g_value,
                verdict: rv.verdict,
                branch: rv.branch,
            });
        }
    }
    Ok(rows)
}

// ---------------------------------------------------------------------------
// Growth-regime tags for the counterexample builder
// ---------------------------------------------------------------------------

/// Position of λ relative to the two branch junctions, which decides the
/// shape of the blow-up construction (normalisation δ_j, constraint pair,
/// and reference-integral regime).
///
/// The five tags partition λ > 0 at fixed (n, α):
///
/// ```text
///   SubLow      0 < λ < (n−α)/(n−2)          (needs α < n)
///   MidCritLow  λ = (n−α)/(n−2)              (needs α < n)
///   MidSloped   (n−α)/(n−2) < λ < n/(n−2)
///   MidTop      λ = n/(n−2)
///   High        λ > n/(n−2)
/// ```
///
/// When α ≥ n the lower junction is ≤ 0 and the first two tags are empty.
/// Serialized by variant name (the descriptor `tag` field).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegimeTag {
    SubLow,
    MidCritLow,
    MidSloped,
    MidTop,
    High,
}

impl fmt::Display for RegimeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RegimeTag::SubLow => "SubLow",
            RegimeTag::MidCritLow => "MidCritLow",
            RegimeTag::MidSloped => "MidSloped",
            RegimeTag::MidTop => "MidTop",
            RegimeTag::High => "High",
        };
        f.write_str(s)
    }
}

/// Growth-regime tag of λ, float path.
///
/// Junction equality is declared inside the same relative band as
/// [`classify`]: |λ − j| ≤ 1e−12·max(1, j). The lower junction only
/// participates when it is positive (α < n).
pub fn regime_tag(n: u32, alpha: f64, lambda: f64) -> Result<RegimeTag> {
    check_g_domain(
        n,
        alpha > 0.0 && alpha < n as f64 + 2.0,
        lambda > 0.0 && lambda.is_finite(),
    )?;
    let nf = n as f64;
    let junction_flat = (nf - alpha) / (nf - 2.0);
    let junction_tail = nf / (nf - 2.0);
    let near = |x: f64, j: f64| (x - j).abs() <= CRITICAL_BAND * j.abs().max(1.0);
    if junction_flat > 0.0 && near(lambda, junction_flat) {
        return Ok(RegimeTag::MidCritLow);
    }
    if near(lambda, junction_tail) {
        return Ok(RegimeTag::MidTop);
    }
    Ok(if lambda < junction_flat {
        RegimeTag::SubLow
    } else if lambda < junction_tail {
        RegimeTag::MidSloped
    } else {
        RegimeTag::High
    })
}

/// Growth-regime tag of λ, exact-rational path (no tolerance band).
pub fn regime_tag_exact(n: u32, alpha: &Rat, lambda: &Rat) -> Result<RegimeTag> {
    check_g_domain(
        n,
        alpha.is_positive() && *alpha < rat_int(n as i64 + 2),
        lambda.is_positive(),
    )?;
    let n_r = rat_int(n as i64);
    let nm2 = rat_int(n as i64 - 2);
    let junction_flat = (&n_r - alpha) / &nm2;
    let junction_tail = &n_r / &nm2;
    Ok(if junction_flat.is_positive() && *lambda == junction_flat {
        RegimeTag::MidCritLow
    } else if *lambda == junction_tail {
        RegimeTag::MidTop
    } else if *lambda < junction_flat {
        RegimeTag::SubLow
    } else if *lambda < junction_tail {
        RegimeTag::MidSloped
    } else {
        RegimeTag::High
    })
}

/// Render scan rows as CSV with the fixed header
/// `lambda,sigma,g_alpha,verdict,branch`.
pub fn grid_to_csv(rows: &[GridPoint]) -> String {
    let mut out = String::with_capacity(rows.len() * 40 + 40);
    out.push_str("lambda,sigma,g_alpha,verdict,branch\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.lambda, r.sigma, r.g_alpha, r.verdict, r.branch
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::rat;

    fn exact(n: u32, alpha: (i64, i64), lambda: (i64, i64), sigma: (i64, i64)) -> ExactParams {
        ExactParams::new(n, rat(alpha.0, alpha.1), rat(lambda.0, lambda.1), rat(sigma.0, sigma.1))
            .unwrap()
    }

    /// g at (3,1,1) lies on the flat branch: n/(n−2) = 3.
    #[test]
    fn g_flat_branch_value() {
        let (g, b) = g_alpha_exact(3, &rat(1, 1), &rat(1, 1)).unwrap();
        assert_eq!(g, rat_int(3));
        assert_eq!(b, Branch::Flat);
        let (gf, bf) = g_alpha(3, 1.0, 1.0).unwrap();
        assert_eq!(gf, 3.0);
        assert_eq!(bf, Branch::Flat);
    }

    /// λ = 3 = n/(n−2) is the sloped/tail junction: the sloped formula gives
    /// 5 − 3 = 2 and the tail formula 1 + 3/3 = 2; the half-open convention
    /// selects Tail.
    #[test]
    fn g_junction_value_agrees_from_both_sides() {
        let (g, b) = g_alpha_exact(3, &rat(1, 1), &rat(3, 1)).unwrap();
        assert_eq!(g, rat_int(2));
        assert_eq!(b, Branch::Tail);
        let sloped_formula = rat(2 * 3, 1) - rat(1, 1); // (2n−α)/(n−2) − λ at n=3
        let sloped_at_3 = (&sloped_formula - rat_int(3)) / rat_int(1);
        assert_eq!(sloped_at_3, rat_int(2));
    }

    /// (3, 4, 4): tail value 1 − (2/3)·4 < 0 is clamped to 0.
    #[test]
    fn g_tail_clamps_at_zero() {
        let (g, b) = g_alpha_exact(3, &rat(4, 1), &rat(4, 1)).unwrap();
        assert_eq!(g, Rat::zero());
        assert_eq!(b, Branch::Tail);
    }

    /// Junction continuity in exact rationals for every 0 < α ≤ n: the flat
    /// value meets the sloped formula at λ = (n−α)/(n−2), and the sloped
    /// formula meets the (unclamped) tail formula at λ = n/(n−2), where both
    /// equal (n−α)/(n−2) ≥ 0.
    #[test]
    fn junctions_are_exactly_continuous() {
        for n in [3u32, 4, 5, 6] {
            let n_r = rat_int(n as i64);
            let nm2 = rat_int(n as i64 - 2);
            for num in 1..=(4 * n as i64) {
                let alpha = rat(num, 4); // α ∈ {1/4, 1/2, ..., n}
                if alpha > n_r {
                    continue;
                }
                let j_flat = (&n_r - &alpha) / &nm2;
                let j_tail = &n_r / &nm2;
                if j_flat.is_positive() {
                    let (g_at, _) = g_alpha_exact(n, &alpha, &j_flat).unwrap();
                    assert_eq!(g_at, j_tail, "flat/sloped junction n={n} α={alpha}");
                }
                let (g_tail_at, _) = g_alpha_exact(n, &alpha, &j_tail).unwrap();
                let sloped_value = (rat_int(2 * n as i64) - &alpha) / &nm2 - &j_tail;
                assert_eq!(g_tail_at, sloped_value, "sloped/tail junction n={n} α={alpha}");
                assert_eq!(sloped_value, (&n_r - &alpha) / &nm2);
            }
        }
    }

    /// The five worked classification examples, exact path.
    #[test]
    fn classify_worked_examples() {
        let cases = [
            (exact(3, (1, 1), (1, 1), (5, 2)), Verdict::HarmonicallyBounded),
            (exact(3, (1, 1), (2, 1), (3, 1)), Verdict::CriticalNoBound),
            (exact(3, (4, 1), (4, 1), (0, 1)), Verdict::CriticalNoBound),
            (exact(3, (1, 1), (5, 2), (5, 2)), Verdict::CriticalOpen),
            (exact(3, (2, 1), (4, 1), (1, 2)), Verdict::BoundedC1),
        ];
        for (p, want) in cases {
            let got = classify_exact(&p).unwrap();
            assert_eq!(got.verdict, want, "at {p:?}");
            let gotf = classify(&p.to_float()).unwrap();
            assert_eq!(gotf.verdict, want, "float path at {p:?}");
        }
    }

    /// σ = g on the flat interior is critical-but-bounded; past the curve on
    /// the flat branch is plain blow-up.
    #[test]
    fn flat_interior_critical_and_supercritical() {
        let p = exact(3, (1, 1), (1, 1), (3, 1)); // σ = g = 3, λ < (n−α)/(n−2) = 2
        assert_eq!(classify_exact(&p).unwrap().verdict, Verdict::CriticalHarmonicallyBounded);
        let p = exact(3, (1, 1), (1, 1), (4, 1)); // σ = 4 > 3
        assert_eq!(classify_exact(&p).unwrap().verdict, Verdict::NoPointwiseBound);
    }

    /// λ = n/(α−2) exactly is NOT deep tail (strict inequality): stays open.
    #[test]
    fn tail_boundary_of_theorem_is_exclusive() {
        // n=3, α=4: n/(α−2) = 3/2; g(3/2) on the tail? junction_tail = 3, so
        // λ = 3/2 < 3 is on the sloped branch: g = (6−4)/1 − 3/2 = 1/2.
        // Pick λ = 3/2 with σ = 1/2: critical, sloped interior → Open.
        let p = exact(3, (4, 1), (3, 2), (1, 2));
        assert_eq!(classify_exact(&p).unwrap().verdict, Verdict::CriticalOpen);
        // Deep tail at λ = 4 > 3/2 with σ = g = 0: resolved unbounded.
        let p = exact(3, (4, 1), (4, 1), (0, 1));
        assert_eq!(classify_exact(&p).unwrap().verdict, Verdict::CriticalNoBound);
        // On the tail but with λ(α−2) = n exactly: σ = g still open.
        // n=4, α=4: n/(α−2) = 2 = n/(n−2): λ = 2, g = 1 − (2/4)·2 = 0.
        let p = exact(4, (4, 1), (2, 1), (0, 1));
        assert_eq!(classify_exact(&p).unwrap().verdict, Verdict::CriticalOpen);
    }

    /// Float band: a σ within 1e−13 of g classifies as critical; 1e−10 away
    /// does not.
    #[test]
    fn float_band_detects_near_criticality() {
        let g = 2.0; // (3,1,3): tail value 2
        let p = Params::new(3, 1.0, 3.0, g + 1e-13).unwrap();
        assert!(classify(&p).unwrap().verdict.is_critical());
        let p = Params::new(3, 1.0, 3.0, g + 1e-10).unwrap();
        assert_eq!(classify(&p).unwrap().verdict, Verdict::NoPointwiseBound);
    }

    /// 4×4 grid over λ ∈ (0,6], σ ∈ [0,5] at α = 2: 16 rows, and every row
    /// with λ ≥ 3 has g = 1 (the α = 2 tail is horizontal).
    #[test]
    fn grid_scan_alpha_two_horizontal_tail() {
        let rows = grid_scan(3, 2.0, (0.0, 6.0), (0.0, 5.0), 4, 4).unwrap();
        assert_eq!(rows.len(), 16);
        for r in &rows {
            if r.lambda >= 3.0 {
                assert_eq!(r.g_alpha, 1.0, "λ = {}", r.lambda);
            }
            let rv = classify(&Params::new(3, 2.0, r.lambda, r.sigma).unwrap()).unwrap();
            assert_eq!(rv.verdict, r.verdict);
        }
    }

    /// Degenerate 1×1 grid at (3,1) over a single point.
    #[test]
    fn grid_scan_single_point() {
        let rows = grid_scan(3, 1.0, (1.0, 1.0), (0.0, 0.0), 1, 1).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].verdict, Verdict::HarmonicallyBounded);
        assert_eq!(rows[0].lambda, 1.0);
    }

    #[test]
    fn grid_scan_rejects_empty_ranges() {
        assert!(grid_scan(3, 1.0, (2.0, 1.0), (0.0, 1.0), 4, 4).is_err());
        assert!(grid_scan(3, 1.0, (0.0, 1.0), (0.0, 1.0), 0, 4).is_err());
        assert!(grid_scan(3, 1.0, (0.0, 0.0), (0.0, 1.0), 4, 4).is_err());
    }

    #[test]
    fn csv_header_and_rows() {
        let rows = grid_scan(3, 1.0, (1.0, 1.0), (0.0, 0.0), 1, 1).unwrap();
        let csv = grid_to_csv(&rows);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "lambda,sigma,g_alpha,verdict,branch");
        assert_eq!(lines.next().unwrap(), "1,0,3,HarmonicallyBounded,Flat");
    }

    /// Regime tags at n = 3, α = 1: junctions at λ = 2 and λ = 3.
    #[test]
    fn regime_tags_partition_lambda() {
        let cases = [
            (1.0, RegimeTag::SubLow),
            (2.0, RegimeTag::MidCritLow),
            (2.5, RegimeTag::MidSloped),
            (3.0, RegimeTag::MidTop),
            (4.0, RegimeTag::High),
        ];
        for (lambda, want) in cases {
            assert_eq!(regime_tag(3, 1.0, lambda).unwrap(), want, "λ = {lambda}");
        }
        // Exact path agrees everywhere, including the junctions.
        for (num, want) in
            [(8, RegimeTag::SubLow), (16, RegimeTag::MidCritLow), (24, RegimeTag::MidTop)]
        {
            assert_eq!(regime_tag_exact(3, &rat(1, 1), &rat(num, 8)).unwrap(), want);
        }
    }

    /// With α ≥ n the lower junction is gone: small λ is already MidSloped,
    /// and MidCritLow is unreachable.
    #[test]
    fn regime_tags_with_large_alpha_skip_low_regimes() {
        assert_eq!(regime_tag(3, 4.0, 0.5).unwrap(), RegimeTag::MidSloped);
        assert_eq!(regime_tag(3, 3.0, 1e-3).unwrap(), RegimeTag::MidSloped);
        assert_eq!(regime_tag(3, 4.0, 4.0).unwrap(), RegimeTag::High);
        // α = n: junction_flat = 0 exactly; λ may not equal it (λ > 0).
        assert_eq!(regime_tag_exact(3, &rat(3, 1), &rat(1, 10)).unwrap(), RegimeTag::MidSloped);
    }

    /// Float junction band: within 1e−13 of a junction snaps to the junction
    /// tag; 1e−10 away stays in the open interval.
    #[test]
    fn regime_tag_band_snaps_to_junctions() {
        assert_eq!(regime_tag(3, 1.0, 2.0 + 1e-13).unwrap(), RegimeTag::MidCritLow);
        assert_eq!(regime_tag(3, 1.0, 2.0 + 1e-10).unwrap(), RegimeTag::MidSloped);
        assert_eq!(regime_tag(3, 1.0, 3.0 - 1e-13).unwrap(), RegimeTag::MidTop);
        assert_eq!(regime_tag(3, 1.0, 3.0 - 1e-10).unwrap(), RegimeTag::MidSloped);
    }
}

#[cfg(test)]
mod properties {
    use super::*;
    use proptest::prelude::*;

    /// Strategy for admissible (n, α, λ) with α ∈ (0, n) as small rationals.
    fn param_strategy() -> impl Strategy<Value = (u32, Rat, Rat)> {
        (3u32..7, 1i64..40, 1i64..100).prop_map(|(n, a_num, l_num)| {
            // α = a_num/8 capped strictly below n; λ = l_num/8 ≤ 12.5.
            let alpha = crate::ratio::rat(a_num.min(8 * n as i64 - 1), 8);
            (n, alpha, crate::ratio::rat(l_num, 8))
        })
    }

    proptest! {
        /// Monotonicity: g_α non-increasing in λ for α ≥ 2; for α < 2 the
        /// tail branch strictly increases.
        #[test]
        fn monotonicity_in_lambda((n, alpha, l1) in param_strategy(), step in 1i64..50) {
            let l2 = &l1 + crate::ratio::rat(step, 8);
            let (g1, _) = g_alpha_exact(n, &alpha, &l1).unwrap();
            let (g2, _) = g_alpha_exact(n, &alpha, &l2).unwrap();
            if alpha >= crate::ratio::rat_int(2) {
                prop_assert!(g2 <= g1, "g must not increase: g({l1})={g1}, g({l2})={g2}");
            } else {
                let junction_tail = crate::ratio::rat(n as i64, n as i64 - 2);
                if l1 >= junction_tail {
                    prop_assert!(g2 > g1, "tail must strictly increase for α<2");
                }
            }
        }

        /// Verdict consistency: the σ-vs-g trichotomy is faithfully encoded.
        #[test]
        fn verdict_consistency((n, alpha, lambda) in param_strategy(), s_num in 0i64..80) {
            let sigma = crate::ratio::rat(s_num, 8);
            let p = ExactParams::new(n, alpha, lambda, sigma.clone()).unwrap();
            let rv = classify_exact(&p).unwrap();
            match rv.verdict {
                Verdict::NoPointwiseBound => prop_assert!(sigma > rv.g_value),
                Verdict::HarmonicallyBounded | Verdict::BoundedC1 => prop_assert!(sigma < rv.g_value),
                _ => prop_assert!(sigma == rv.g_value),
            }
        }
    }
}
