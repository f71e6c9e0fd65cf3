//! Scalar fields on ℝⁿ and structured evaluation points.
//!
//! Everything the quadrature and finite-difference engines consume is a
//! [`Field`]: a scalar function that also *declares its structure* —
//! its symmetry and the balls where it concentrates at scales far below
//! machine resolution of global coordinates.
//!
//! The structure declarations exist because the solution families place
//! mollifier bumps of radius r_j as small as 1e−60 at centers ~1e−6 from the
//! origin. A point "x_j + r_j·η" simply does not exist in global f64
//! coordinates (the offset is absorbed), so bump interiors are addressed in
//! *local coordinates*: [`Point::ZoneLocal`] carries the zone index and the
//! rescaled offset η, and fields evaluate such points without ever forming
//! the absorbed sum. Quadrature likewise integrates each concentration zone
//! in its own rescaled frame.
//!
//! Two evaluation fidelities are exposed. The fast path may interpolate
//! (bump potentials from a cubic table, relative accuracy ~1e−5) and feeds
//! bulk quadrature; the exact path evaluates potentials by full quadrature
//! and feeds finite differences, which would otherwise differentiate the
//! interpolation error instead of the field.

use crate::bump::{cutoff_chi, norm, CUTOFF_INNER, CUTOFF_OUTER};
use crate::error::{Error, Result};

// ---------------------------------------------------------------------------
// Structure declarations
// ---------------------------------------------------------------------------

/// Symmetry a field guarantees; the convolution engine picks its coordinate
/// reduction from this (radial → 1D, axial → 2D on the axis).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    /// Invariant under all rotations about the origin.
    Radial,
    /// Invariant under rotations about the first coordinate axis.
    AxialFirstAxis,
    /// No symmetry guarantee.
    General,
}

/// A ball (centered on the first axis) where the field concentrates.
///
/// `radius` is the zone radius: outside every zone the field must be given
/// by its smooth background expression at scale comparable to the distance
/// to the origin. `core` is the inner structure scale (the bump radius);
/// quadrature rescales the whole zone by `core` so that sub-resolution
/// structure becomes O(1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Zone {
    /// First-axis coordinate of the zone center.
    pub center: f64,
    /// Zone radius (well above f64 absorption scale relative to `center`).
    pub radius: f64,
    /// Inner structure scale; may be far below absorption scale.
    pub core: f64,
}

/// An evaluation point: either plain global coordinates, or a point inside
/// concentration zone `zone` expressed as center + core·η.
#[derive(Debug, Clone, PartialEq)]
pub enum Point {
    Global(Vec<f64>),
    ZoneLocal { zone: usize, eta: Vec<f64> },
}

impl Point {
    /// Global coordinates, exact for `Global` and rounded (center + core·η,
    /// possibly with full absorption of the offset) for `ZoneLocal`. Only
    /// for display and reporting — never for evaluation.
    pub fn global_approx(&self, field: &dyn Field) -> Vec<f64> {
        match self {
            Point::Global(x) => x.clone(),
            Point::ZoneLocal { zone, eta } => {
                let z = field.zones()[*zone];
                let mut y: Vec<f64> = eta.iter().map(|e| z.core * e).collect();
                y[0] += z.center;
                y
            }
        }
    }

    /// Dimension of the underlying coordinate vector.
    pub fn dim(&self) -> usize {
        match self {
            Point::Global(x) => x.len(),
            Point::ZoneLocal { eta, .. } => eta.len(),
        }
    }

    /// Does the point lie on the first coordinate axis?
    pub fn on_first_axis(&self) -> bool {
        let coords = match self {
            Point::Global(x) => &x[1..],
            Point::ZoneLocal { eta, .. } => &eta[1..],
        };
        coords.iter().all(|&c| c == 0.0)
    }

    /// The same point kind with replaced coordinates: moving a global point
    /// stays global, moving a zone-local point stays in the same zone's
    /// η-coordinates. This is how stencils and samplers step around a point
    /// without leaving its coordinate system.
    pub fn with_coords(&self, coords: Vec<f64>) -> Point {
        match self {
            Point::Global(_) => Point::Global(coords),
            Point::ZoneLocal { zone, .. } => Point::ZoneLocal { zone: *zone, eta: coords },
        }
    }
}

// ---------------------------------------------------------------------------
// The field trait
// ---------------------------------------------------------------------------

/// A scalar field with declared structure.
///
/// Implementations must keep the three coordinate views consistent: for a
/// zone z with core scale large enough to be representable,
/// `eval_zone_local(k, η) == eval_global(center + core·η)` up to rounding.
pub trait Field: Sync {
    /// Space dimension n ≥ 3.
    fn n(&self) -> u32;

    /// Declared symmetry.
    fn symmetry(&self) -> Symmetry;

    /// Value at global coordinates, fast path.
    fn eval_global(&self, y: &[f64]) -> f64;

    /// Value at global coordinates, high-fidelity path (defaults to fast).
    fn eval_global_exact(&self, y: &[f64]) -> f64 {
        self.eval_global(y)
    }

    /// Concentration zones (possibly empty). Zones must be pairwise disjoint
    /// and, together with their centers, lie on the first axis.
    fn zones(&self) -> &[Zone] {
        &[]
    }

    /// Value at zone-local coordinates (center + core·η), fast path.
    ///
    /// The default reassembles global coordinates, which is only correct
    /// when `core` is not below absorption scale; fields with genuinely
    /// tiny cores must override.
    fn eval_zone_local(&self, zone: usize, eta: &[f64]) -> f64 {
        let z = self.zones()[zone];
        let mut y: Vec<f64> = eta.iter().map(|e| z.core * e).collect();
        y[0] += z.center;
        self.eval_global(&y)
    }

    /// Value at zone-local coordinates, high-fidelity path.
    fn eval_zone_local_exact(&self, zone: usize, eta: &[f64]) -> f64 {
        self.eval_zone_local(zone, eta)
    }

    /// Evaluate at a structured point, fast path.
    fn eval(&self, p: &Point) -> f64 {
        match p {
            Point::Global(x) => self.eval_global(x),
            Point::ZoneLocal { zone, eta } => self.eval_zone_local(*zone, eta),
        }
    }

    /// Evaluate at a structured point, high-fidelity path.
    fn eval_exact(&self, p: &Point) -> f64 {
        match p {
            Point::Global(x) => self.eval_global_exact(x),
            Point::ZoneLocal { zone, eta } => self.eval_zone_local_exact(*zone, eta),
        }
    }

    /// Distance (in the point's own coordinate units: global units for
    /// `Global`, core units for `ZoneLocal`) from `p` to the nearest point
    /// where the field is not C∞ — the origin, a cutoff seam, a zone
    /// boundary. Finite-difference stencils must stay strictly inside this
    /// radius. The default claims smoothness everywhere.
    fn clearance(&self, _p: &Point) -> f64 {
        f64::INFINITY
    }

    /// Radius of a ball containing the field's support. Convolution engines
    /// integrate over this ball, so it must be honest: the field vanishes
    /// outside it. Defaults to the outer cutoff seam shared by the
    /// constructed families and fixtures.
    fn support_radius(&self) -> f64 {
        crate::bump::CUTOFF_OUTER
    }
}

/// Check that a point's dimension matches the field's; shared by engines.
pub fn check_dim(field: &dyn Field, p: &Point) -> Result<()> {
    if p.dim() != field.n() as usize {
        return Err(Error::Parameter(format!(
            "point has dimension {}, field has dimension {}",
            p.dim(),
            field.n()
        )));
    }
    if let Point::ZoneLocal { zone, .. } = p {
        if *zone >= field.zones().len() {
            return Err(Error::Parameter(format!(
                "zone index {zone} out of range ({} zones)",
                field.zones().len()
            )));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Simple concrete fields
// ---------------------------------------------------------------------------

/// The constant field u ≡ c on all of ℝⁿ (quadrature oracle fixture).
#[derive(Debug, Clone, Copy)]
pub struct ConstField {
    pub n: u32,
    pub value: f64,
    /// The constant lives on the ball B_radius and vanishes outside; a
    /// globally constant positive field has no finite Riesz convolution.
    pub radius: f64,
}

impl Field for ConstField {
    fn n(&self) -> u32 {
        self.n
    }
    fn symmetry(&self) -> Symmetry {
        Symmetry::Radial
    }
    fn eval_global(&self, y: &[f64]) -> f64 {
        let r2: f64 = y.iter().map(|v| v * v).sum();
        if r2 <= self.radius * self.radius {
            self.value
        } else {
            0.0
        }
    }
    fn clearance(&self, p: &Point) -> f64 {
        let y = p.global_approx(self);
        let r: f64 = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        (r - self.radius).abs()
    }
    fn support_radius(&self) -> f64 {
        self.radius
    }
}

/// A radial field u(x) = profile(|x|) given by an arbitrary profile closure
/// (test oracles and cross-checks).
pub struct RadialField<F: Fn(f64) -> f64 + Sync> {
    pub n: u32,
    pub profile: F,
}

impl<F: Fn(f64) -> f64 + Sync> Field for RadialField<F> {
    fn n(&self) -> u32 {
        self.n
    }
    fn symmetry(&self) -> Symmetry {
        Symmetry::Radial
    }
    fn eval_global(&self, y: &[f64]) -> f64 {
        (self.profile)(norm(y))
    }
}

// ---------------------------------------------------------------------------
// Reference fixtures: cut-off harmonic spike and cut-off plateau
// ---------------------------------------------------------------------------

/// Core profile of a reference fixture.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixtureCore {
    /// u = |x|^{2−n} inside the cutoff: the fundamental singularity.
    /// Solves the inequality with left side 0 whenever λ < n/(n−2)
    /// (so that u ∈ L^λ near the origin).
    HarmonicSpike,
    /// u = 1 inside the cutoff: bounded, used for λ ≥ n/(n−2).
    Plateau,
}

/// The built-in reference fixture: u(x) = χ(|x|)·core(|x|), where χ is the
/// outer cutoff (≡1 on B₂, ≡0 outside B₃). Harmonic in B₂ ∖ {0}, compactly
/// supported, nonnegative — a solution of the inequality with −Δu = 0 for
/// *every* admissible (α, λ, σ) with u ∈ L^λ(ℝⁿ).
///
/// These are the fixtures behind the command-line flag `--fixture remark1`.
#[derive(Debug, Clone, Copy)]
pub struct ReferenceFixture {
    pub n: u32,
    pub core: FixtureCore,
}

impl ReferenceFixture {
    /// Select the fixture core the way the construction does: the spike for
    /// λ < n/(n−2) (where it is λ-integrable), the plateau at and above.
    pub fn for_lambda(n: u32, lambda: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::Parameter(format!("dimension n = {n} is below 3")));
        }
        if !(lambda > 0.0) {
            return Err(Error::Parameter(format!("lambda = {lambda} must be positive")));
        }
        let core = if lambda < n as f64 / (n as f64 - 2.0) {
            FixtureCore::HarmonicSpike
        } else {
            FixtureCore::Plateau
        };
        Ok(ReferenceFixture { n, core })
    }

    /// Radial profile value (χ·core at radius r). +∞ at r = 0 for the spike.
    pub fn profile(&self, r: f64) -> f64 {
        if r >= CUTOFF_OUTER {
            return 0.0;
        }
        let core = match self.core {
            FixtureCore::HarmonicSpike => {
                if r == 0.0 {
                    return f64::INFINITY;
                }
                r.powi(2 - self.n as i32)
            }
            FixtureCore::Plateau => 1.0,
        };
        if r <= CUTOFF_INNER {
            core
        } else {
            cutoff_chi(r) * core
        }
    }
}

impl Field for ReferenceFixture {
    fn n(&self) -> u32 {
        self.n
    }
    fn symmetry(&self) -> Symmetry {
        Symmetry::Radial
    }
    fn eval_global(&self, y: &[f64]) -> f64 {
        self.profile(norm(y))
    }
    /// The fixture is C∞ away from the origin and the two cutoff seams
    /// (where χ is only C²).
    fn clearance(&self, p: &Point) -> f64 {
        let r = norm(match p {
            Point::Global(x) => x,
            Point::ZoneLocal { eta, .. } => eta,
        });
        let to_origin = r;
        let to_seams = (r - CUTOFF_INNER).abs().min((r - CUTOFF_OUTER).abs());
        to_origin.min(to_seams)
    }
}
