use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn tfred(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tfred")).args(args).output().expect("binary runs")
}

fn fx(name: &str) -> String {
    fixture(name).to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

#[test]
fn analyze_reports_structure() {
    let o = tfred(&["analyze", &fx("two_component.tfr")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["structural"]["deficiency_fast"], 0);
    assert_eq!(v["structural"]["r"], 3);
    assert_eq!(v["structural"]["s"], 3);
    assert_eq!(v["structural"]["weakly_reversible_fast"], true);
    let o = tfred(&["analyze", &fx("dual_phosphorylation.tfr")]);
    assert_eq!(json(&o)["structural"]["deficiency_fast"], 1);
}

#[test]
fn analyze_is_deterministic_and_writes_out() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let a = tfred(&["analyze", &fx("example1.tfr"), "--out", out.to_str().unwrap()]);
    let b = tfred(&["analyze", &fx("example1.tfr")]);
    assert_eq!(a.stdout, b.stdout);
    let written: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(written, json(&a));
}

#[test]
fn reduce_prints_the_reduced_system() {
    let o = tfred(&["reduce", &fx("example1.tfr"), "--param", "noninteracting:X3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("x3 = v1*v2"), "{text}");
    assert!(text.contains("v1' = "), "{text}");
    assert!(text.contains("first integral"), "{text}");
    let o = tfred(&["reduce", &fx("oscillator.tfr"), "--param", "user", "--latex"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("\\frac"), "{}", stdout(&o));
}

#[test]
fn reduce_json_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = tfred(&["reduce", &fx("two_component_trivial.tfr"), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["reduction"]["trivial"], true);
    assert!(v["reduction"]["rhs"].as_array().unwrap().iter().all(|e| e == "0"));
}

#[test]
fn input_errors_exit_2() {
    let o = tfred(&["analyze", "/nonexistent/model.tfr"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error:"));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.tfr");
    std::fs::write(&bad, "@species A\n@fast\nA -> B : 1\n").unwrap();
    let o = tfred(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
    assert_eq!(tfred(&["bogus"]).status.code(), Some(2));
    assert_eq!(tfred(&["reduce", &fx("example1.tfr"), "--param", "sideways"]).status.code(), Some(2));
    assert_eq!(tfred(&["simulate", &fx("example1.tfr"), "--eps-ladder", "0.01,-1"]).status.code(), Some(2));
}

#[test]
fn missing_parameterization_exits_4() {
    let o = tfred(&["reduce", &fx("example1.tfr"), "--param", "user"]);
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
    let o = tfred(&["reduce", &fx("dual_phosphorylation.tfr"), "--param", "complexbalanced"]);
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
}

#[test]
fn verify_passes_on_fixtures_and_fails_on_corrupt_phi() {
    for name in ["example1.tfr", "example3.tfr", "oscillator.tfr", "two_component.tfr", "dual_phosphorylation.tfr"] {
        let o = tfred(&["verify", &fx(name)]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}{}", stdout(&o), stderr(&o));
        assert!(!stdout(&o).contains("FAIL"), "{name}");
    }
    let o = tfred(&["verify", &fx("corrupt_phi.tfr")]);
    assert_eq!(o.status.code(), Some(6));
    assert!(stdout(&o).contains("FAIL"));
    assert!(stderr(&o).contains("failed invariants"), "{}", stderr(&o));
}

#[test]
fn simulate_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let o = tfred(&["simulate", &fx("example1.tfr"), "--eps-ladder", "0.02,0.01", "--csv-out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    let errors = v["convergence"]["errors"].as_array().unwrap();
    assert_eq!(errors.len(), 2);
    assert_eq!(v["convergence"]["monotone"], true);
    assert_eq!(v["csv"].as_array().unwrap().len(), 2);
    assert!(errors[1].as_f64().unwrap() < errors[0].as_f64().unwrap());
    let mut files: Vec<String> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect();
    files.sort();
    assert_eq!(files, vec!["eps_0.01.csv", "eps_0.02.csv"]);
    let csv = std::fs::read_to_string(dir.path().join("eps_0.01.csv")).unwrap();
    let header = csv.lines().next().unwrap();
    assert!(header.starts_with("tau,"), "{header}");
    assert!(csv.lines().count() > 10);
}

#[test]
fn help_and_version_exit_0() {
    assert_eq!(tfred(&["--help"]).status.code(), Some(0));
    assert_eq!(tfred(&["--version"]).status.code(), Some(0));
}

#[test]
fn strict_mode_exits_3_on_repelling_manifold() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("repelling.tfr");
    std::fs::write(&model, "@generic\n@vars x y\n@P\n1\n0\n@mu\nx\n@h1\n0\n-y\n@phi\n0\nv1\n").unwrap();
    let path = model.to_str().unwrap();
    assert_eq!(tfred(&["analyze", path]).status.code(), Some(0));
    let o = tfred(&["analyze", path, "--strict"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("attractivity"), "{}", stderr(&o));
}
