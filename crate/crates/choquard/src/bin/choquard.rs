//! Command-line front end: classification, region scans, construction of
//! unbounded solution families, verification reports, and integrability
//! ladder traces — every run reproducible byte for byte from its
//! configuration and seed.
//!
//! Outputs are JSON (CSV for region scans). With `--out` the artifact goes to
//! the file and a short confirmation to stdout; without it the artifact
//! itself is printed, ready for piping. Exit codes are stable: 0 pass,
//! 1 verification failure (or internal error), 2 parameter error,
//! 3 regime infeasibility.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use choquard::bootstrap::{run_to_termination, LadderStart};
use choquard::classifier::{classify, grid_scan, grid_to_csv};
use choquard::config::{KvConfig, RunConfig};
use choquard::error::{Error, Result};
use choquard::family::{choose_sequences, BumpFamily, GrowthTarget};
use choquard::params::{ExactParams, Params};
use choquard::ratio::parse_rat;
use choquard::verifier::{verify_family, verify_fixture, VerificationReport};

// ---------------------------------------------------------------------------
// Command line shape
// ---------------------------------------------------------------------------

/// Pointwise bounds and blow-up families for a convolution-driven elliptic
/// inequality at an isolated singularity.
#[derive(Debug, Parser)]
#[command(name = "choquard", version, about, max_term_width = 100)]
struct Cli {
    /// Flat key=value configuration file overriding built-in defaults.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Sampling seed (beats both the config file and CHOQUARD_SEED).
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether a pointwise bound holds at (n, α, λ, σ).
    Classify(ClassifyArgs),
    /// Scan a (λ, σ) rectangle at fixed (n, α) into a CSV region diagram.
    RegionGrid(RegionGridArgs),
    /// Construct an arbitrarily-fast-growing solution family descriptor.
    Construct(ConstructArgs),
    /// Check a descriptor (or the built-in reference fixture) and write a
    /// verification report.
    Verify(VerifyArgs),
    /// Run the integrability ladder to its L^∞ certificate and dump the trace.
    Bootstrap(BootstrapArgs),
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    /// Space dimension (n ≥ 3).
    #[arg(long)]
    n: Option<u32>,
    /// Kernel exponent α ∈ (0, n+2).
    #[arg(long)]
    alpha: Option<f64>,
    /// Convolution power λ > 0.
    #[arg(long)]
    lambda: Option<f64>,
    /// Multiplier power σ ≥ 0.
    #[arg(long)]
    sigma: Option<f64>,
    /// Also write the JSON verdict to this file.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RegionGridArgs {
    /// Space dimension (n ≥ 3).
    #[arg(long)]
    n: Option<u32>,
    /// Kernel exponent α ∈ (0, n+2).
    #[arg(long)]
    alpha: Option<f64>,
    /// Lower end of the λ range (samples start strictly above it).
    #[arg(long, value_name = "λ")]
    lambda_min: Option<f64>,
    /// Upper end of the λ range.
    #[arg(long, value_name = "λ")]
    lambda_max: Option<f64>,
    /// Lower end of the σ range.
    #[arg(long, value_name = "σ")]
    sigma_min: Option<f64>,
    /// Upper end of the σ range.
    #[arg(long, value_name = "σ")]
    sigma_max: Option<f64>,
    /// Samples per axis.
    #[arg(long, value_name = "N")]
    resolution: Option<u32>,
    /// CSV output path.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ConstructArgs {
    /// Space dimension (n ≥ 3).
    #[arg(long)]
    n: Option<u32>,
    /// Kernel exponent α ∈ (0, n+2).
    #[arg(long)]
    alpha: Option<f64>,
    /// Convolution power λ > 0.
    #[arg(long)]
    lambda: Option<f64>,
    /// Multiplier power σ ≥ 0 (must exceed the threshold curve).
    #[arg(long)]
    sigma: Option<f64>,
    /// Growth target the family must outrun: `log` for log(1/t), or
    /// `pow:E` for t^{-E}.
    #[arg(long, value_name = "SPEC")]
    phi: Option<String>,
    /// Number of bumps in the family.
    #[arg(long, value_name = "J")]
    bumps: Option<u32>,
    /// Descriptor output path (stdout if omitted).
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Descriptor JSON produced by `construct`.
    #[arg(long, value_name = "PATH", conflicts_with = "fixture")]
    descriptor: Option<PathBuf>,
    /// Verify a built-in closed-form fixture instead (`remark1`).
    #[arg(long, value_name = "NAME")]
    fixture: Option<String>,
    /// Space dimension for the fixture (default 3).
    #[arg(long)]
    n: Option<u32>,
    /// Kernel exponent for the fixture (default 1).
    #[arg(long)]
    alpha: Option<f64>,
    /// Convolution power for the fixture (selects its core).
    #[arg(long)]
    lambda: Option<f64>,
    /// Multiplier power for the fixture (default 0).
    #[arg(long)]
    sigma: Option<f64>,
    /// Override the per-bump sample budget.
    #[arg(long, value_name = "N")]
    samples: Option<usize>,
    /// Override the relative tolerance of the direct inequality check.
    #[arg(long, value_name = "TOL")]
    tol: Option<f64>,
    /// Report output path (stdout if omitted).
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BootstrapArgs {
    /// Space dimension (n ≥ 3).
    #[arg(long)]
    n: Option<u32>,
    /// Kernel exponent α as an exact rational (`1`, `5/2`, `0.4`).
    #[arg(long, value_name = "RAT")]
    alpha: Option<String>,
    /// Convolution power λ as an exact rational.
    #[arg(long, value_name = "RAT")]
    lambda: Option<String>,
    /// Multiplier power σ as an exact rational.
    #[arg(long, value_name = "RAT")]
    sigma: Option<String>,
    /// Which ladder to run: `mid` (from p = 1) or `high` (from p = λ).
    #[arg(long, value_name = "LADDER")]
    start: Option<String>,
    /// Trace output path (stdout if omitted).
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

// ---------------------------------------------------------------------------
// Merge helpers (flag beats config key beats default)
// ---------------------------------------------------------------------------

fn require<T>(v: Option<T>, name: &str) -> Result<T> {
    v.ok_or_else(|| {
        Error::Parameter(format!("missing required parameter `{name}` (flag or config key)"))
    })
}

/// Write `text` to `path`, mapping failures to internal errors (exit 1).
fn write_artifact(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text)
        .map_err(|e| Error::Internal(format!("cannot write {}: {e}", path.display())))
}

/// Deliver an artifact: to the file with a confirmation line, or to stdout.
fn deliver(out: Option<&Path>, text: &str, what: &str) -> Result<()> {
    match out {
        Some(path) => {
            write_artifact(path, text)?;
            println!("wrote {what} to {}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn parse_phi(spec: &str) -> Result<GrowthTarget> {
    if spec == "log" {
        return Ok(GrowthTarget::LogReciprocal);
    }
    if let Some(exp) = spec.strip_prefix("pow:") {
        let exponent = exp
            .parse::<f64>()
            .map_err(|_| Error::Parameter(format!("bad exponent in --phi {spec:?}")))?;
        return Ok(GrowthTarget::PowerReciprocal { exponent });
    }
    Err(Error::Parameter(format!(
        "unknown growth target {spec:?}: expected `log` or `pow:E`"
    )))
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

fn cmd_classify(a: ClassifyArgs, kv: &KvConfig) -> Result<i32> {
    kv.check_keys(&["n", "alpha", "lambda", "sigma", "out"])?;
    let n = require(a.n.or(kv.u32("n")?), "n")?;
    let alpha = require(a.alpha.or(kv.f64("alpha")?), "alpha")?;
    let lambda = require(a.lambda.or(kv.f64("lambda")?), "lambda")?;
    let sigma = require(a.sigma.or(kv.f64("sigma")?), "sigma")?;
    let out = a.out.or_else(|| kv.string("out").map(PathBuf::from));
    let pr = Params::new(n, alpha, lambda, sigma)?;
    let rv = classify(&pr)?;
    println!("{} (g_alpha = {}, branch = {})", rv.verdict, rv.g_value, rv.branch);
    let mut text = serde_json::to_string_pretty(&json!({
        "n": n, "alpha": alpha, "lambda": lambda, "sigma": sigma,
        "verdict": rv.verdict, "g_alpha": rv.g_value, "branch": rv.branch,
    }))?;
    text.push('\n');
    deliver(out.as_deref(), &text, "verdict")?;
    Ok(0)
}

fn cmd_region_grid(a: RegionGridArgs, kv: &KvConfig) -> Result<i32> {
    kv.check_keys(&[
        "n",
        "alpha",
        "lambda_min",
        "lambda_max",
        "sigma_min",
        "sigma_max",
        "resolution",
        "out",
    ])?;
    let n = require(a.n.or(kv.u32("n")?), "n")?;
    let alpha = require(a.alpha.or(kv.f64("alpha")?), "alpha")?;
    let lambda_min = a.lambda_min.or(kv.f64("lambda_min")?).unwrap_or(0.0);
    let lambda_max = require(a.lambda_max.or(kv.f64("lambda_max")?), "lambda_max")?;
    let sigma_min = a.sigma_min.or(kv.f64("sigma_min")?).unwrap_or(0.0);
    let sigma_max = require(a.sigma_max.or(kv.f64("sigma_max")?), "sigma_max")?;
    let resolution = a.resolution.or(kv.u32("resolution")?).unwrap_or(200);
    let out = require(a.out.or(kv.string("out").map(PathBuf::from)), "out")?;

    let rows = grid_scan(
        n,
        alpha,
        (lambda_min, lambda_max),
        (sigma_min, sigma_max),
        resolution,
        resolution,
    )?;
    write_artifact(&out, &grid_to_csv(&rows))?;
    println!(
        "wrote {} rows ({resolution}×{resolution} at n = {n}, alpha = {alpha}) to {}",
        rows.len(),
        out.display()
    );
    Ok(0)
}

fn cmd_construct(a: ConstructArgs, kv: &KvConfig) -> Result<i32> {
    kv.check_keys(&["n", "alpha", "lambda", "sigma", "phi", "bumps", "out"])?;
    let n = require(a.n.or(kv.u32("n")?), "n")?;
    let alpha = require(a.alpha.or(kv.f64("alpha")?), "alpha")?;
    let lambda = require(a.lambda.or(kv.f64("lambda")?), "lambda")?;
    let sigma = require(a.sigma.or(kv.f64("sigma")?), "sigma")?;
    let phi = parse_phi(&a.phi.or_else(|| kv.string("phi")).unwrap_or_else(|| "log".into()))?;
    let bumps = a.bumps.or(kv.u32("bumps")?).unwrap_or(5);
    let out = a.out.or_else(|| kv.string("out").map(PathBuf::from));
    let pr = Params::new(n, alpha, lambda, sigma)?;
    let family = choose_sequences(&pr, &phi, bumps)?;
    let descriptor = family.to_descriptor_json()?;
    deliver(out.as_deref(), &descriptor, &format!("{bumps}-bump descriptor"))?;
    Ok(0)
}

fn cmd_verify(a: VerifyArgs, kv: &KvConfig, cfg: &RunConfig) -> Result<i32> {
    kv.check_keys(&[
        "descriptor",
        "fixture",
        "n",
        "alpha",
        "lambda",
        "sigma",
        "samples",
        "tol",
        "out",
    ])?;
    let mut spec = cfg.verify.clone();
    if let Some(samples) = a.samples.or(kv.usize("samples")?) {
        spec.samples_per_bump = samples;
    }
    if let Some(tol) = a.tol.or(kv.f64("tol")?) {
        spec.direct_rel_tol = tol;
    }
    spec.validate()?;

    let descriptor = a.descriptor.or_else(|| kv.string("descriptor").map(PathBuf::from));
    let fixture = a.fixture.or_else(|| kv.string("fixture"));
    let report: VerificationReport = match (descriptor, fixture) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(&path).map_err(|e| {
                Error::Parameter(format!("cannot read descriptor {}: {e}", path.display()))
            })?;
            let family = BumpFamily::from_descriptor_json(&text)?;
            verify_family(&family, &spec)?
        }
        (None, Some(name)) => {
            if name != "remark1" {
                return Err(Error::Parameter(format!(
                    "unknown fixture {name:?}: the built-in fixture is `remark1`"
                )));
            }
            let n = a.n.or(kv.u32("n")?).unwrap_or(3);
            let alpha = a.alpha.or(kv.f64("alpha")?).unwrap_or(1.0);
            let lambda = require(a.lambda.or(kv.f64("lambda")?), "lambda")?;
            let sigma = a.sigma.or(kv.f64("sigma")?).unwrap_or(0.0);
            verify_fixture(n, alpha, lambda, sigma, &spec)?
        }
        (None, None) => {
            return Err(Error::Parameter(
                "nothing to verify: pass --descriptor PATH or --fixture remark1".into(),
            ))
        }
        (Some(_), Some(_)) => {
            return Err(Error::Parameter(
                "--descriptor and --fixture are mutually exclusive".into(),
            ))
        }
    };

    for check in &report.checks {
        println!(
            "{}: {} (worst margin {:+.3e})",
            check.name,
            if check.pass { "pass" } else { "FAIL" },
            check.worst_margin
        );
    }
    let out = a.out.or_else(|| kv.string("out").map(PathBuf::from));
    deliver(out.as_deref(), &report.to_json_string(), "verification report")?;
    Ok(if report.all_pass() { 0 } else { 1 })
}

fn cmd_bootstrap(a: BootstrapArgs, kv: &KvConfig) -> Result<i32> {
    kv.check_keys(&["n", "alpha", "lambda", "sigma", "start", "out"])?;
    let n = require(a.n.or(kv.u32("n")?), "n")?;
    let alpha = parse_rat(&require(a.alpha.or_else(|| kv.string("alpha")), "alpha")?)?;
    let lambda = parse_rat(&require(a.lambda.or_else(|| kv.string("lambda")), "lambda")?)?;
    let sigma = parse_rat(&require(a.sigma.or_else(|| kv.string("sigma")), "sigma")?)?;
    let start = match require(a.start.or_else(|| kv.string("start")), "start")?.as_str() {
        "mid" => LadderStart::MidFromOne,
        "high" => LadderStart::HighFromLambda,
        other => {
            return Err(Error::Parameter(format!(
                "unknown ladder {other:?}: expected `mid` or `high`"
            )))
        }
    };
    let out = a.out.or_else(|| kv.string("out").map(PathBuf::from));
    let pr = ExactParams::new(n, alpha, lambda, sigma)?;
    let trace = run_to_termination(&pr, start)?;
    let mut text = serde_json::to_string_pretty(&trace.to_json())?;
    text.push('\n');
    deliver(out.as_deref(), &text, "ladder trace")?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

fn run(cli: Cli) -> Result<i32> {
    let kv = match &cli.config {
        Some(path) => KvConfig::load(path)?,
        None => KvConfig::default(),
    };
    let cfg = RunConfig::from_env(&kv, cli.seed)?;
    match cli.command {
        Command::Classify(a) => cmd_classify(a, &kv),
        Command::RegionGrid(a) => cmd_region_grid(a, &kv),
        Command::Construct(a) => cmd_construct(a, &kv),
        Command::Verify(a) => cmd_verify(a, &kv, &cfg),
        Command::Bootstrap(a) => cmd_bootstrap(a, &kv),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
