//! Exit-code contract of the binary: 1 for config errors (with a message
//! naming the violated constraint), 3 for invariant violations with a
//! witness file.

use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_homfrac")
}

fn tempdir(name: &str) -> std::path::PathBuf {
    let d = std::env::temp_dir().join(format!("homfrac_cli_errors_{name}"));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn bar1d_evolve_exits_0_with_crack_past_one() {
    let dir = tempdir("bar1d");
    let cfg = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/bar1d.toml");
    let out_dir = dir.join("out");
    let out = Command::new(bin())
        .args([
            "evolve",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out_dir.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    // the crack log holds one item at step 101 (t = 1.01, one step past t_c)
    let log = std::fs::read_to_string(out_dir.join("crack_log.csv")).unwrap();
    let lines: Vec<&str> = log.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[1].starts_with("101,"), "crack log: {log}");
}

#[test]
fn missing_config_exits_1() {
    let dir = tempdir("missing");
    let out = Command::new(bin())
        .args([
            "evolve",
            "--config",
            dir.join("nope.toml").to_str().unwrap(),
            "--out",
            dir.join("out").to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn under_resolved_probe_radius_exits_1_naming_the_constraint() {
    let dir = tempdir("radius");
    let cfg = dir.join("sigma.toml");
    // h = 2/16, so 4h = 0.5 > 0.3
    std::fs::write(
        &cfg,
        r#"
[sigma]
generator = "fixed-line"
resolution = 17
centers = [[0.0, 0.0]]
radii = [0.3]
n_list = [4]
normal = "y"
"#,
    )
    .unwrap();
    let out = Command::new(bin())
        .args([
            "sigma-probe",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            dir.join("out").to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.contains("4h"),
        "stderr should name the rho >= 4h constraint: {stderr}"
    );
}

#[test]
fn verify_violation_exits_3_with_witness() {
    let dir = tempdir("verify");
    let cfg = dir.join("evolve.toml");
    // a family with only one far-from-optimal candidate edge cannot certify
    // the post-crack-time state it is asked to re-verify against all edges;
    // instead, force a violation by restricting the backend family so the
    // evolution under-cracks, then verifying against every edge.
    std::fs::write(
        &cfg,
        r#"
[grid]
dimension = 2
extent = [1.0, 1.0]
nodes = [3, 3]
dirichlet = "bottom-top"

[medium]
p = 2.0
bulk = { kind = "constant", value = 1.0 }
toughness = { kind = "constant", value = 1.0 }

[datum]
kind = "ramp"
profile = "pull-y"
magnitude = 3.0

[time]
t_end = 3.0
delta = 0.5

[evolution]
backend = "exhaustive-2d"
candidate_edges = [0]
"#,
    )
    .unwrap();
    let out_dir = dir.join("out");
    let out = Command::new(bin())
        .args([
            "verify",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out_dir.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(3),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(out_dir.join("witness.txt").exists());
}
