use std::path::Path;
use std::process::{Command, Output};

fn attend(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_attend")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn lists_all_presets() {
    let o = attend(&["list-presets"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for name in ["exp01", "exp02", "exp03", "exp04", "exp05"] {
        assert!(text.contains(name), "{text}");
    }
}

#[test]
fn runs_a_preset_into_the_requested_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let o = attend(&["run", "--preset", "exp01", "--no-noise", "--out-dir", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("exp01: 100 ticks"), "{}", stdout(&o));
    for f in ["winners.csv", "saliency.csv", "plot_data.csv", "feature_motion.csv"] {
        assert!(out.join(f).is_file(), "{f} missing");
    }
}

#[test]
fn seed_override_changes_noise_only() {
    let dir = tempfile::tempdir().unwrap();
    let path = |tag: &str| dir.path().join(tag);
    for (tag, seed) in [("a", "7"), ("b", "7"), ("c", "8")] {
        let o = attend(&["run", "--preset", "exp01", "--seed", seed, "--out-dir", path(tag).to_str().unwrap()]);
        assert!(o.status.success());
    }
    let sonar = |tag: &str| std::fs::read(path(tag).join("observations_sonar.csv")).unwrap();
    assert_eq!(sonar("a"), sonar("b"));
    assert_ne!(sonar("a"), sonar("c"));
}

#[test]
fn threshold_override_is_applied() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("high");
    let o = attend(&[
        "run", "--preset", "exp01", "--no-noise", "--threshold", "1.5", "--out-dir", out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("0 winner(s)"), "{}", stdout(&o));
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn validate_accepts_a_minimal_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        dir.path(),
        "ok.json",
        r#"{"schema_version": 1, "name": "tiny", "seed": 3, "duration": 2.0,
            "world": {"entities": [{"id": "a", "shape": {"circle": {"center": {"x": 0.0, "y": 2.0}, "radius": 0.3}}}]}}"#,
    );
    let o = attend(&["validate", "--scenario", &p]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("tiny: ok (20 ticks)"));
}

#[test]
fn invalid_scenario_exits_with_code_2() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        dir.path(),
        "bad.json",
        r#"{"schema_version": 1, "name": "bad", "seed": 1, "duration": -1.0, "world": {"entities": []}}"#,
    );
    let o = attend(&["validate", "--scenario", &p]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("duration"), "{}", stderr(&o));

    let p = write(dir.path(), "broken.json", "{ not json");
    assert_eq!(attend(&["run", "--scenario", &p]).status.code(), Some(2));
}

#[test]
fn unknown_preset_exits_with_code_2() {
    let o = attend(&["run", "--preset", "exp99"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("exp01"), "{}", stderr(&o));
}

#[test]
fn missing_file_exits_with_code_1() {
    let o = attend(&["validate", "--scenario", "/nonexistent/scenario.json"]);
    assert_eq!(o.status.code(), Some(1));
}
