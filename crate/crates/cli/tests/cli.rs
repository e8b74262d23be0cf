use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

fn ralt(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ralt"))
        .args(args)
        .current_dir(cwd)
        .env_remove("RALT_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn exit_code_contract() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    std::fs::write(dir.join("no_echo.toml"), "[echo]\nterrain_reflectivity_loss_db = inf\n").unwrap();
    let tone = scenario("coherent_tone.toml");
    let interfered = scenario("compare_interfered.toml");
    let no_ev = scenario("cia_no_evidence.toml");
    let cases: [(&[&str], i32); 8] = [
        (&["simulate", "--altitude-ft", "100"], 0),
        (&["simulate", "--scenario", "no_echo.toml", "--altitude-ft", "100"], 2),
        (&["sweep", "--scenario", s(&tone)], 0),
        (&["sweep", "--scenario", s(&tone), "--no-filter"], 3),
        (&["compare", "--scenario", s(&interfered)], 3),
        (&["cia", "--inputs", s(&no_ev)], 1),
        (&["sweep", "--trials", "many"], 1),
        (&["frobnicate"], 1),
    ];
    for (args, want) in cases {
        let o = ralt(args, dir);
        assert_eq!(code(&o), want, "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn clean_simulation_at_100_ft_is_within_3_ft() {
    let tmp = tempfile::tempdir().unwrap();
    let o = ralt(&["simulate", "--altitude-ft", "100"], tmp.path());
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let err = v["error_ft"].as_f64().unwrap();
    assert!(err.abs() <= 3.0, "{err}");
    assert_eq!(v["classification"], "within_tolerance");
}

#[test]
fn malformed_file_names_key_and_line() {
    let tmp = tempfile::tempdir().unwrap();
    let p = tmp.path().join("bad.toml");
    std::fs::write(&p, "[receiver]\nnoise_figure_db = 5.0\nnoise_figur_db = 4.0\n").unwrap();
    let o = ralt(&["sweep", "--scenario", s(&p)], tmp.path());
    assert_eq!(code(&o), 1);
    let e = stderr(&o);
    assert!(e.contains("bad.toml:3:1") && e.contains("noise_figur_db"), "{e}");

    std::fs::write(&p, "[chirp]\nsweep_period_s = 1e-3\n\n[receiver]\nnoise_figure_db = -2.0\n").unwrap();
    let o = ralt(&["simulate", "--scenario", s(&p), "--altitude-ft", "50"], tmp.path());
    assert_eq!(code(&o), 1);
    let e = stderr(&o);
    assert!(e.contains("bad.toml:5:1") && e.contains("receiver.noise_figure_db"), "{e}");
}

#[test]
fn sweep_writes_report_and_trials_csv() {
    let tmp = tempfile::tempdir().unwrap();
    let o = ralt(&["sweep", "--scenario", s(&scenario("blocker.toml")), "--trials", "3", "--out", "o"], tmp.path());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let csv = std::fs::read_to_string(tmp.path().join("o/trials.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("altitude_ft,trial,estimate_ft,error_ft,snr_db,classification"));
    assert_eq!(lines.count(), 7 * 3);
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(tmp.path().join("o/report.json")).unwrap()).unwrap();
    assert_eq!(report["verdict"], "pass");

    let o = ralt(&["sweep", "--trials", "2", "--format", "csv", "--out", "c"], tmp.path());
    assert_eq!(code(&o), 0);
    assert!(tmp.path().join("c/trials.csv").exists());
    assert!(!tmp.path().join("c/report.json").exists());
}

#[test]
fn seed_changes_fingerprint() {
    let tmp = tempfile::tempdir().unwrap();
    let fp = |seed: &str, out: &str| {
        let o = ralt(&["sweep", "--trials", "1", "--seed", seed, "--out", out], tmp.path());
        assert_eq!(code(&o), 0);
        let v: serde_json::Value =
            serde_json::from_slice(&std::fs::read(tmp.path().join(out).join("report.json")).unwrap()).unwrap();
        v["scenario_fingerprint"].as_str().unwrap().to_string()
    };
    assert_ne!(fp("1", "a"), fp("2", "b"));
    assert_eq!(fp("1", "a"), fp("1", "c"));
}

#[test]
fn output_dir_falls_back_to_environment() {
    let tmp = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_ralt"))
        .args(["simulate", "--altitude-ft", "20", "--raw-csv"])
        .current_dir(tmp.path())
        .env("RALT_OUT_DIR", "from-env")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    let raw = std::fs::read_to_string(tmp.path().join("from-env/samples.csv")).unwrap();
    assert_eq!(raw.lines().count(), 1 + 2000);
}

#[test]
fn classify_any_predicate_is_major() {
    let tmp = tempfile::tempdir().unwrap();
    let o = ralt(&["classify", "--change", s(&scenario("filter_change.toml"))], tmp.path());
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["level"], "minor");

    let p = tmp.path().join("change.toml");
    std::fs::write(&p, "description = \"new antenna\"\nhardware_change = true\naffects_fit = true\n\n[[affected_part_numbers]]\nold = \"A\"\nnew = \"B\"\n").unwrap();
    let o = ralt(&["classify", "--change", s(&p)], tmp.path());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["level"], "major");
    assert_eq!(v["triggered_predicates"], serde_json::json!(["affects_fit"]));
}

#[test]
fn cia_without_evidence_names_rows() {
    let tmp = tempfile::tempdir().unwrap();
    let o = ralt(&["cia", "--inputs", s(&scenario("cia_no_evidence.toml"))], tmp.path());
    assert_eq!(code(&o), 1);
    let e = stderr(&o);
    assert!(e.contains("`TSO-C87` has no verification evidence"), "{e}");
    assert!(e.contains("`Non-Regulatory` has no verification evidence"), "{e}");
}

#[test]
fn cia_text_matches_golden() {
    let tmp = tempfile::tempdir().unwrap();
    let o = ralt(&["cia", "--inputs", s(&scenario("cia.toml")), "--format", "text", "--out", "d"], tmp.path());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let got = std::fs::read_to_string(tmp.path().join("d/cia.txt")).unwrap();
    assert_eq!(got, include_str!("golden/cia.txt"));
    assert!(!tmp.path().join("d/cia.json").exists());
}

#[test]
fn compare_clean_units_agree() {
    let tmp = tempfile::tempdir().unwrap();
    let o = ralt(&["compare", "--scenario", s(&scenario("compare_clean.toml")), "--out", "d"], tmp.path());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let csv = std::fs::read_to_string(tmp.path().join("d/comparison.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 200);

    let o = ralt(&["compare", "--scenario", s(&scenario("clean.toml"))], tmp.path());
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("[compare]"));
}
