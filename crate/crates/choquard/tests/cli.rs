//! Black-box tests of the command-line interface: argument merging between
//! flags and config files, artifact delivery, the stable exit-code contract
//! (0 pass, 1 verification failure, 2 parameter error, 3 regime
//! infeasibility), and byte-for-byte reproducibility of report files.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

/// The compiled binary, isolated from any ambient seed in the environment.
fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_choquard"));
    c.env_remove("CHOQUARD_SEED");
    c
}

/// A per-test scratch directory under the target tmpdir.
fn work_dir(test: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli").join(test);
    fs::create_dir_all(&dir).expect("test directory is writable");
    dir
}

/// Run to completion and capture (exit code, stdout, stderr).
fn run(cmd: &mut Command) -> (i32, String, String) {
    let Output { status, stdout, stderr } = cmd.output().expect("binary launches");
    (
        status.code().expect("process exits normally"),
        String::from_utf8_lossy(&stdout).into_owned(),
        String::from_utf8_lossy(&stderr).into_owned(),
    )
}

/// Construct a small two-bump descriptor for the round-trip tests.
fn construct_two_bump_descriptor(dir: &Path) -> PathBuf {
    let out = dir.join("descriptor.json");
    let (code, stdout, stderr) = run(bin().args([
        "construct",
        "--n",
        "3",
        "--alpha",
        "1",
        "--lambda",
        "1",
        "--sigma",
        "4",
        "--bumps",
        "2",
        "--out",
        out.to_str().expect("utf-8 path"),
    ]));
    assert_eq!(code, 0, "construct must succeed: {stderr}");
    assert!(
        stdout.contains("wrote 2-bump descriptor"),
        "construct must confirm its artifact, got: {stdout}"
    );
    out
}

/// A reduced verification budget so the round-trip tests stay quick while
/// still running every check.
fn trimmed_budget_config(dir: &Path) -> PathBuf {
    let path = dir.join("trim.conf");
    fs::write(
        &path,
        "harmonic_samples = 4\nfd_points_per_bump = 2\nfd_harmonic_points = 6\nlift_points_per_bump = 2\n",
    )
    .expect("config is writable");
    path
}

/// `classify` prints the human verdict line first and the JSON verdict after.
#[test]
fn classify_reports_the_flat_regime_verdict_on_stdout() {
    let (code, stdout, stderr) = run(bin().args([
        "classify", "--n", "3", "--alpha", "1", "--lambda", "1", "--sigma", "2.5",
    ]));
    assert_eq!(code, 0, "classify must succeed: {stderr}");
    let first = stdout.lines().next().expect("classify prints a verdict line");
    assert_eq!(
        first, "HarmonicallyBounded (g_alpha = 3, branch = Flat)",
        "verdict line must name the verdict, the curve value and the branch"
    );
    assert!(
        stdout.contains("\"verdict\": \"HarmonicallyBounded\""),
        "the JSON verdict must follow on stdout, got: {stdout}"
    );
}

/// Parameter errors exit with code 2 and a single `error:` line on stderr.
#[test]
fn classify_rejects_an_out_of_range_kernel_exponent() {
    let (code, _, stderr) = run(bin().args([
        "classify", "--n", "3", "--alpha", "9", "--lambda", "1", "--sigma", "1",
    ]));
    assert_eq!(code, 2, "an inadmissible α is a parameter error");
    assert!(stderr.starts_with("error:"), "stderr must carry the error line, got: {stderr}");
}

/// Points outside the ladder's entry regime exit with code 3.
#[test]
fn bootstrap_refuses_a_point_outside_the_ladder_regime() {
    let (code, _, stderr) = run(bin().args([
        "bootstrap", "--n", "3", "--alpha", "1", "--lambda", "3/2", "--sigma", "1", "--start",
        "mid",
    ]));
    assert_eq!(code, 3, "λ = 3/2 sits below the sloped band at α = 1: {stderr}");
    assert!(stderr.starts_with("error:"), "stderr must carry the error line, got: {stderr}");
}

/// A constructed descriptor verifies cleanly when read back — every check
/// passes and the exit code is 0.
#[test]
fn construct_then_verify_round_trips_at_a_reduced_budget() {
    let dir = work_dir("round_trip");
    let descriptor = construct_two_bump_descriptor(&dir);
    let config = trimmed_budget_config(&dir);
    let report_path = dir.join("report.json");
    let (code, stdout, stderr) = run(bin().args([
        "verify",
        "--descriptor",
        descriptor.to_str().expect("utf-8 path"),
        "--config",
        config.to_str().expect("utf-8 path"),
        "--samples",
        "3",
        "--out",
        report_path.to_str().expect("utf-8 path"),
    ]));
    assert_eq!(code, 0, "the round-trip must verify cleanly: {stderr}\n{stdout}");
    for check in [
        "certificate_check",
        "direct_inequality_check",
        "potential_lower_bounds_check",
        "harmonicity_and_singularity_check",
        "shifted_inequality_lift",
    ] {
        assert!(
            stdout.contains(&format!("{check}: pass")),
            "check `{check}` must pass on the round-trip, got: {stdout}"
        );
    }
    let report: Value = serde_json::from_str(&fs::read_to_string(&report_path).expect("report written"))
        .expect("report is valid JSON");
    assert_eq!(report["seed"], Value::from(42), "the default seed feeds the report");
}

/// Tampering with a stored amplitude invalidates the construction
/// certificate: exit code 1 and a FAIL line.
#[test]
fn verify_rejects_a_tampered_descriptor() {
    let dir = work_dir("tamper");
    let descriptor = construct_two_bump_descriptor(&dir);
    let mut v: Value = serde_json::from_str(&fs::read_to_string(&descriptor).expect("descriptor written"))
        .expect("descriptor is valid JSON");
    let amplitude = v["bumps"][0]["M"].as_f64().expect("descriptor stores amplitudes");
    v["bumps"][0]["M"] = Value::from(amplitude * 1.01);
    let tampered = dir.join("tampered.json");
    fs::write(&tampered, serde_json::to_string_pretty(&v).expect("descriptor re-serializes"))
        .expect("tampered descriptor is writable");

    let config = trimmed_budget_config(&dir);
    let (code, stdout, _) = run(bin().args([
        "verify",
        "--descriptor",
        tampered.to_str().expect("utf-8 path"),
        "--config",
        config.to_str().expect("utf-8 path"),
        "--samples",
        "3",
    ]));
    assert_eq!(code, 1, "a tampered descriptor is a verification failure, not a crash");
    assert!(
        stdout.contains("certificate_check: FAIL"),
        "the certificate must catch the tampered amplitude, got: {stdout}"
    );
}

/// The built-in fixture verifies cleanly from a single flag.
#[test]
fn verify_runs_the_builtin_fixture() {
    let (code, stdout, stderr) =
        run(bin().args(["verify", "--fixture", "remark1", "--lambda", "1"]));
    assert_eq!(code, 0, "the fixture must verify cleanly: {stderr}");
    for check in
        ["direct_inequality_check", "harmonicity_and_singularity_check", "shifted_inequality_lift"]
    {
        assert!(
            stdout.contains(&format!("{check}: pass")),
            "fixture check `{check}` must pass, got: {stdout}"
        );
    }
}

/// Two runs with the same inputs write byte-identical report files.
#[test]
fn verify_report_files_are_byte_identical_across_reruns() {
    let dir = work_dir("rerun");
    let mut reports = Vec::new();
    for name in ["first.json", "second.json"] {
        let path = dir.join(name);
        let (code, _, stderr) = run(bin().args([
            "verify",
            "--fixture",
            "remark1",
            "--lambda",
            "1",
            "--out",
            path.to_str().expect("utf-8 path"),
        ]));
        assert_eq!(code, 0, "fixture verification must succeed: {stderr}");
        reports.push(fs::read(&path).expect("report written"));
    }
    assert_eq!(reports[0], reports[1], "rerun report files must be byte-identical");
}

/// CHOQUARD_SEED feeds the report seed; the --seed flag beats it.
#[test]
fn seed_env_var_feeds_the_report_and_the_flag_wins() {
    let dir = work_dir("seed");
    let from_env = dir.join("from_env.json");
    let (code, _, stderr) = run(bin()
        .env("CHOQUARD_SEED", "7")
        .args([
            "verify",
            "--fixture",
            "remark1",
            "--lambda",
            "1",
            "--out",
            from_env.to_str().expect("utf-8 path"),
        ]));
    assert_eq!(code, 0, "fixture verification must succeed: {stderr}");
    let report: Value = serde_json::from_str(&fs::read_to_string(&from_env).expect("report written"))
        .expect("report is valid JSON");
    assert_eq!(report["seed"], Value::from(7), "the environment seed must reach the report");

    let from_flag = dir.join("from_flag.json");
    let (code, _, stderr) = run(bin()
        .env("CHOQUARD_SEED", "7")
        .args([
            "verify",
            "--seed",
            "9",
            "--fixture",
            "remark1",
            "--lambda",
            "1",
            "--out",
            from_flag.to_str().expect("utf-8 path"),
        ]));
    assert_eq!(code, 0, "fixture verification must succeed: {stderr}");
    let report: Value = serde_json::from_str(&fs::read_to_string(&from_flag).expect("report written"))
        .expect("report is valid JSON");
    assert_eq!(report["seed"], Value::from(9), "the --seed flag must beat the environment");
}

/// Only the documented fixture name is accepted.
#[test]
fn verify_rejects_an_unknown_fixture() {
    let (code, _, stderr) =
        run(bin().args(["verify", "--fixture", "bogus", "--lambda", "1"]));
    assert_eq!(code, 2, "an unknown fixture name is a parameter error");
    assert!(stderr.contains("unknown fixture"), "stderr must name the problem, got: {stderr}");
}

/// A descriptor and a fixture cannot be verified in the same run — neither
/// when both arrive as flags nor when one hides in the config file.
#[test]
fn verify_rejects_descriptor_and_fixture_together() {
    let (code, _, stderr) = run(bin().args([
        "verify", "--descriptor", "d.json", "--fixture", "remark1", "--lambda", "1",
    ]));
    assert_eq!(code, 2, "conflicting flags are a usage error");
    assert!(
        stderr.contains("cannot be used with"),
        "the flag conflict must be reported, got: {stderr}"
    );

    let dir = work_dir("conflict");
    let config = dir.join("with_descriptor.conf");
    fs::write(&config, "descriptor = d.json\n").expect("config is writable");
    let (code, _, stderr) = run(bin().args([
        "verify",
        "--config",
        config.to_str().expect("utf-8 path"),
        "--fixture",
        "remark1",
        "--lambda",
        "1",
    ]));
    assert_eq!(code, 2, "a config descriptor plus a fixture flag is a parameter error");
    assert!(
        stderr.contains("mutually exclusive"),
        "the merged conflict must be reported, got: {stderr}"
    );
}

/// The fixture needs its convolution power: λ has no default.
#[test]
fn verify_requires_lambda_for_the_fixture() {
    let (code, _, stderr) = run(bin().args(["verify", "--fixture", "remark1"]));
    assert_eq!(code, 2, "a fixture without λ is a parameter error");
    assert!(
        stderr.contains("missing required parameter `lambda`"),
        "stderr must name the missing parameter, got: {stderr}"
    );
}

/// A full region scan driven by a checked-in config file, with the --out
/// flag overriding the config's output path.
#[test]
fn region_grid_runs_from_a_checked_in_config() {
    let dir = work_dir("region_grid");
    let config = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/region_alpha_2.conf");
    let out = dir.join("region.csv");
    let (code, stdout, stderr) = run(bin().args([
        "region-grid",
        "--config",
        config.to_str().expect("utf-8 path"),
        "--out",
        out.to_str().expect("utf-8 path"),
    ]));
    assert_eq!(code, 0, "the region scan must succeed: {stderr}");
    assert_eq!(
        stdout.trim(),
        format!("wrote 40000 rows (200×200 at n = 3, alpha = 2) to {}", out.display()),
        "the confirmation line must report the full scan"
    );
    let csv = fs::read_to_string(&out).expect("CSV written");
    assert_eq!(
        csv.lines().next(),
        Some("lambda,sigma,g_alpha,verdict,branch"),
        "the CSV must open with its header"
    );
    assert_eq!(csv.lines().count(), 40_001, "header plus one row per grid point");
}
