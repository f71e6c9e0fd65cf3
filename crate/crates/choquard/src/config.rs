//! Run configuration: built-in defaults, flat key=value configuration files,
//! and the `CHOQUARD_SEED` environment override.
//!
//! A configuration file is plain text, one `key = value` pair per line
//! (spaces around `=` optional), with `#` comments and blank lines ignored.
//! Later occurrences of a key override earlier ones, and a file overrides the
//! built-in defaults. The command line sits above everything, and the seed
//! has one extra rung: `CHOQUARD_SEED` beats both defaults and file, while an
//! explicit `--seed` flag beats the environment.
//!
//! Keys split into two groups:
//!
//! * run keys, consumed here into [`RunConfig`] — the sampling seed,
//!   quadrature parameters, verification budgets, and tolerances;
//! * command keys (`n`, `alpha`, `resolution`, `out`, …), consumed by the
//!   command layer; [`KvConfig::check_keys`] rejects anything neither layer
//!   recognizes, so a typo never silently falls back to a default.

use std::path::Path;

use crate::error::{Error, Result};
use crate::verifier::VerifySpec;

// ---------------------------------------------------------------------------
// Flat key=value files
// ---------------------------------------------------------------------------

/// Parsed key=value configuration text, order-preserving.
#[derive(Debug, Clone, Default)]
pub struct KvConfig {
    entries: Vec<(String, String)>,
}

/// Run keys consumed by [`RunConfig::assemble`]. Everything else must be
/// claimed by the command layer via [`KvConfig::check_keys`].
pub const RUN_KEYS: &[&str] = &[
    "seed",
    "gl_order",
    "grade_depth",
    "ring_ratio",
    "target_rel",
    "samples_per_bump",
    "harmonic_samples",
    "fd_points_per_bump",
    "fd_harmonic_points",
    "lift_points_per_bump",
    "shell_radii",
    "direct_rel_tol",
    "harmonic_curvature_tol",
    "lift_stability_rel",
];

impl KvConfig {
    /// Parse configuration text. Duplicate keys are allowed; the last
    /// occurrence wins on lookup.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Parameter(format!(
                    "config line {}: expected `key = value`, got {line:?}",
                    lineno + 1
                ))
            })?;
            let key = key.trim();
            let value = value.trim();
            if key.is_empty() {
                return Err(Error::Parameter(format!("config line {}: empty key", lineno + 1)));
            }
            entries.push((key.to_string(), value.to_string()));
        }
        Ok(KvConfig { entries })
    }

    /// Read and parse a configuration file. A missing or unreadable file is a
    /// parameter error: the caller asked for it by path.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::Parameter(format!("cannot read config {}: {e}", path.display()))
        })?;
        Self::parse(&text)
    }

    /// Last value stored for `key`, if any.
    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().rev().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    /// Reject keys that neither the run layer nor the calling command
    /// recognizes.
    pub fn check_keys(&self, command_keys: &[&str]) -> Result<()> {
        for (k, _) in &self.entries {
            if !RUN_KEYS.contains(&k.as_str()) && !command_keys.contains(&k.as_str()) {
                return Err(Error::Parameter(format!(
                    "unknown config key {k:?} (run keys: {}; command keys: {})",
                    RUN_KEYS.join(", "),
                    command_keys.join(", ")
                )));
            }
        }
        Ok(())
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str, what: &str) -> Result<Option<T>> {
        match self.get(key) {
            None => Ok(None),
            Some(s) => s.parse::<T>().map(Some).map_err(|_| {
                Error::Parameter(format!("config key {key}: {s:?} is not {what}"))
            }),
        }
    }

    /// Typed lookups; a present-but-malformed value is a parameter error.
    pub fn f64(&self, key: &str) -> Result<Option<f64>> {
        self.parsed(key, "a number")
    }
    pub fn u32(&self, key: &str) -> Result<Option<u32>> {
        self.parsed(key, "a nonnegative integer")
    }
    pub fn u64(&self, key: &str) -> Result<Option<u64>> {
        self.parsed(key, "a nonnegative integer")
    }
    pub fn usize(&self, key: &str) -> Result<Option<usize>> {
        self.parsed(key, "a nonnegative integer")
    }
    pub fn string(&self, key: &str) -> Option<String> {
        self.get(key).map(str::to_string)
    }

    /// Comma-separated list of numbers (for `shell_radii`).
    pub fn f64_list(&self, key: &str) -> Result<Option<Vec<f64>>> {
        match self.get(key) {
            None => Ok(None),
            Some(s) => s
                .split(',')
                .map(|part| {
                    part.trim().parse::<f64>().map_err(|_| {
                        Error::Parameter(format!(
                            "config key {key}: {part:?} is not a number in a comma list"
                        ))
                    })
                })
                .collect::<Result<Vec<f64>>>()
                .map(Some),
        }
    }
}

// ---------------------------------------------------------------------------
// Assembled run configuration
// ---------------------------------------------------------------------------

/// Everything a command run shares: the seed and the verification/quadrature
/// settings (which embed the seed again for the samplers). Command-specific
/// parameters stay in the [`KvConfig`] for the command layer to merge with
/// its flags.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub seed: u64,
    pub verify: VerifySpec,
}

impl Default for RunConfig {
    fn default() -> Self {
        let verify = VerifySpec::default();
        RunConfig { seed: verify.seed, verify }
    }
}

impl RunConfig {
    /// Build from a parsed file, the environment, and an optional explicit
    /// seed, in that precedence order (defaults < file < `CHOQUARD_SEED` <
    /// explicit). `env_seed` is the raw value of `CHOQUARD_SEED` if set.
    pub fn assemble(
        kv: &KvConfig,
        env_seed: Option<&str>,
        explicit_seed: Option<u64>,
    ) -> Result<Self> {
        let mut cfg = RunConfig::default();
        if let Some(seed) = kv.u64("seed")? {
            cfg.seed = seed;
        }
        if let Some(v) = kv.usize("gl_order")? {
            cfg.verify.quad.gl_order = v;
        }
        if let Some(v) = kv.u32("grade_depth")? {
            cfg.verify.quad.grade_depth = v;
        }
        if let Some(v) = kv.f64("ring_ratio")? {
            cfg.verify.quad.ring_ratio = v;
        }
        if let Some(v) = kv.f64("target_rel")? {
            cfg.verify.quad.target_rel = v;
        }
        if let Some(v) = kv.usize("samples_per_bump")? {
            cfg.verify.samples_per_bump = v;
        }
        if let Some(v) = kv.usize("harmonic_samples")? {
            cfg.verify.harmonic_samples = v;
        }
        if let Some(v) = kv.usize("fd_points_per_bump")? {
            cfg.verify.fd_points_per_bump = v;
        }
        if let Some(v) = kv.usize("fd_harmonic_points")? {
            cfg.verify.fd_harmonic_points = v;
        }
        if let Some(v) = kv.usize("lift_points_per_bump")? {
            cfg.verify.lift_points_per_bump = v;
        }
        if let Some(v) = kv.f64_list("shell_radii")? {
            cfg.verify.shell_radii = v;
        }
        if let Some(v) = kv.f64("direct_rel_tol")? {
            cfg.verify.direct_rel_tol = v;
        }
        if let Some(v) = kv.f64("harmonic_curvature_tol")? {
            cfg.verify.harmonic_curvature_tol = v;
        }
        if let Some(v) = kv.f64("lift_stability_rel")? {
            cfg.verify.lift_stability_rel = v;
        }
        if let Some(raw) = env_seed {
            cfg.seed = raw.parse::<u64>().map_err(|_| {
                Error::Parameter(format!(
                    "CHOQUARD_SEED = {raw:?} is not a nonnegative integer"
                ))
            })?;
        }
        if let Some(seed) = explicit_seed {
            cfg.seed = seed;
        }
        cfg.verify.seed = cfg.seed;
        cfg.verify.validate()?;
        Ok(cfg)
    }

    /// Assemble reading `CHOQUARD_SEED` from the real environment.
    pub fn from_env(kv: &KvConfig, explicit_seed: Option<u64>) -> Result<Self> {
        let env_seed = std::env::var("CHOQUARD_SEED").ok();
        Self::assemble(kv, env_seed.as_deref(), explicit_seed)
    }
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
