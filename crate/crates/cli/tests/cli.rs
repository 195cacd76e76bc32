mod common;

use std::fs;

use common::{code, hardreg, p, profile, stdout};

fn build_small(dir: &std::path::Path, seed: &str) -> std::process::Output {
    hardreg(&["build-core", "--profile", p(&profile("small-core.toml")), "--seed", seed, "--out", p(dir)])
}

fn artifacts(dir: &std::path::Path) -> serde_json::Value {
    let m: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap();
    m["artifacts"].clone()
}

#[test]
fn same_seed_gives_identical_hashes() {
    let t = tempfile::tempdir().unwrap();
    let (a, b) = (t.path().join("a"), t.path().join("b"));
    assert_eq!(code(&build_small(&a, "9")), 0);
    assert_eq!(code(&build_small(&b, "9")), 0);
    assert_eq!(artifacts(&a), artifacts(&b));
    let c = t.path().join("c");
    build_small(&c, "10");
    assert_ne!(artifacts(&a), artifacts(&c));
}

#[test]
fn malformed_profile_is_a_usage_error() {
    let t = tempfile::tempdir().unwrap();
    let bad = t.path().join("bad.toml");
    fs::write(&bad, "r_sizes = [4, 16\n").unwrap();
    let o = hardreg(&["build-core", "--profile", p(&bad), "--out", p(&t.path().join("x"))]);
    assert_eq!(code(&o), 2);
}

#[test]
fn clean_core_passes_and_planted_corruption_is_located() {
    let t = tempfile::tempdir().unwrap();
    let d = t.path().join("core");
    build_small(&d, "3");
    let o = hardreg(&["verify", "--dir", p(&d)]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    fs::copy(d.join("quotient_2_1.txt"), d.join("quotient_2_0.txt")).unwrap();
    let o = hardreg(&["verify", "--dir", p(&d), "--suite", "structure"]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    assert!(out.contains("FAIL      artifacts.hashes") && out.contains("quotient_2_0.txt"), "{out}");
}

#[test]
fn unknown_suite_is_a_usage_error() {
    let t = tempfile::tempdir().unwrap();
    let d = t.path().join("core");
    build_small(&d, "3");
    assert_eq!(code(&hardreg(&["verify", "--dir", p(&d), "--suite", "nonesuch"])), 2);
}

#[test]
fn certificate_round_trip_and_tampering() {
    let t = tempfile::tempdir().unwrap();
    let d = t.path().join("core");
    build_small(&d, "21");
    let cert = t.path().join("cert.txt");
    let args = |pfile: &str, out: &std::path::Path| {
        hardreg(&[
            "certify", "--dir", p(&d), "--p", p(&d.join(pfile)), "--q", p(&d.join("R2.txt")), "--delta", "1/1048576",
            "--level", "2", "--member", "1", "--t", "2", "--out", p(out),
        ])
    };
    let o = args("L1.txt", &cert);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert_eq!(code(&hardreg(&["verify-cert", "--dir", p(&d), "--cert", p(&cert)])), 0);
    let text = fs::read_to_string(&cert).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    lines[3].push('7');
    fs::write(&cert, lines.join("\n") + "\n").unwrap();
    assert_eq!(code(&hardreg(&["verify-cert", "--dir", p(&d), "--cert", p(&cert)])), 1);
    assert_eq!(code(&args("L2.txt", &t.path().join("c2.txt"))), 2);
}

#[test]
fn hypergraph_build_verifies() {
    let t = tempfile::tempdir().unwrap();
    let sched = profile("desk-schedule.toml");
    for k in ["2", "3"] {
        let d = t.path().join(k);
        let o = hardreg(&["build-hypergraph", "--k", k, "--s", "2", "--schedule", p(&sched), "--seed", "5", "--out", p(&d)]);
        assert_eq!(code(&o), 0);
        let o = hardreg(&["verify", "--dir", p(&d)]);
        assert_eq!(code(&o), 0, "{}", stdout(&o));
    }
    let o = hardreg(&["build-hypergraph", "--k", "1", "--s", "2", "--schedule", p(&sched), "--out", p(&t.path().join("1"))]);
    assert_eq!(code(&o), 2);
}

#[test]
fn counterexample_modes() {
    let t = tempfile::tempdir().unwrap();
    let params = profile("desk-counterexample.toml");
    let d = t.path().join("c");
    assert_eq!(code(&hardreg(&["counterexample", "--params", p(&params), "--seed", "2", "--out", p(&d)])), 0);
    let o = hardreg(&["verify", "--dir", p(&d)]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("MEASURED"));
    let o = hardreg(&["counterexample", "--params", p(&params), "--strict", "--out", p(&t.path().join("s"))]);
    assert_eq!(code(&o), 2);
    let o = hardreg(&["replay", "--manifest", p(&d.join("manifest.json")), "--out", p(&t.path().join("r"))]);
    assert_eq!(code(&o), 0);
}

#[test]
fn cap_from_the_environment_is_a_resource_error() {
    let t = tempfile::tempdir().unwrap();
    let d = t.path().join("c");
    hardreg(&["counterexample", "--params", p(&profile("desk-counterexample.toml")), "--out", p(&d)]);
    let o = std::process::Command::new(env!("CARGO_BIN_EXE_hardreg"))
        .args(["verify", "--dir", p(&d), "--suite", "counterexample"])
        .env("HARDREG_CAP", "1")
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);
}
