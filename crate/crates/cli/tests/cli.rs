use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_autoqml"));
    c.env_remove("AUTOQML_STORE");
    c
}

fn repo() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn text(o: &[u8]) -> String {
    String::from_utf8_lossy(o).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

/// Deterministic two-cluster sample without pulling in a RNG.
fn write_data(root: &Path) {
    let mut csv = String::from("value\n");
    let mut s: u64 = 12345;
    for i in 0..3000 {
        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let u = (s >> 11) as f64 / (1u64 << 53) as f64;
        let centre = if i % 3 == 0 { 70.0 } else { 30.0 };
        csv.push_str(&format!("{}\n", centre + 20.0 * (u - 0.5)));
    }
    std::fs::create_dir_all(root.join("data")).unwrap();
    std::fs::write(root.join("data/synthetic.csv"), csv).unwrap();
}

const TINY: &str = r#"{
  "n_containers": 2,
  "visualizations": ["entropy_curve", "distribution_overlay"],
  "distributions": [{"data_path": "data/synthetic.csv"}],
  "ansaetze": [{"type": "zoufal", "repetitions": [1]}],
  "initializations": [{"type": "uniform"}, {"type": "normal"}],
  "num_qubits": [2],
  "batch_size": 32,
  "num_epochs": 10,
  "num_training_runs": 1,
  "discriminator": {"type": "custom_classical_1", "hparams": {"lr": [1e-2]}},
  "optimizer": {"lr": [1e-3]}
}"#;

#[test]
fn validate_search_grid() {
    let out = bin()
        .args(["validate", "--config"])
        .arg(repo().join("configs/search_grid.json"))
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", text(&out.stderr));
    let stdout = text(&out.stdout);
    assert!(stdout.contains("540 experiment specifications"), "{stdout}");
    assert!(stdout.contains("5400 training runs"));
    assert!(stdout.contains("10 workers, 54..=54 specs each"));
}

#[test]
fn validate_singular() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("one.json");
    std::fs::write(&path, TINY.replace(r#", {"type": "normal"}"#, "")).unwrap();
    let out = bin().args(["validate", "--config"]).arg(&path).output().unwrap();
    assert_eq!(code(&out), 0);
    assert!(text(&out.stdout).starts_with("1 experiment specification\n"));
}

#[test]
fn bad_config_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\n  \"n_containers\": ,\n}").unwrap();
    let out = bin().args(["validate", "--config"]).arg(&path).output().unwrap();
    assert_eq!(code(&out), 1);
    assert!(text(&out.stderr).contains("line 2"), "{}", text(&out.stderr));

    let missing = TINY.replace(r#""ansaetze": [{"type": "zoufal", "repetitions": [1]}],"#, "");
    std::fs::write(&path, missing).unwrap();
    let store = dir.path().join("store");
    let out = bin().args(["run", "--config"]).arg(&path).arg("--store").arg(&store).output().unwrap();
    assert_eq!(code(&out), 1);
    assert!(text(&out.stderr).contains("missing field `ansaetze`"));

    let out = bin().args(["run", "--config"]).arg(dir.path().join("nope.json")).arg("--store").arg(&store).output().unwrap();
    assert_eq!(code(&out), 1);
}

#[test]
fn missing_data_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tiny.json");
    std::fs::write(&path, TINY).unwrap();
    let out = bin()
        .args(["run", "--config"])
        .arg(&path)
        .arg("--store")
        .arg(dir.path().join("empty"))
        .output()
        .unwrap();
    assert_eq!(code(&out), 2, "{}", text(&out.stderr));
}

#[test]
fn run_report_inspect() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tiny.json");
    std::fs::write(&path, TINY).unwrap();
    let store = dir.path().join("store");
    write_data(&store);

    let out = bin()
        .args(["--log-level", "warn", "run", "--config"])
        .arg(&path)
        .env("AUTOQML_STORE", &store)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", text(&out.stderr));
    assert!(text(&out.stdout).contains("2 specs, 2 runs ok, 0 failed"));

    let out = bin().arg("report").arg("--store").arg(&store).output().unwrap();
    assert_eq!(code(&out), 0);
    let report = text(&out.stdout);
    assert!(report.contains("winner:") && report.contains("zoufal"), "{report}");
    assert!(report.contains("best for N=2"));

    let out = bin().arg("inspect").arg("--store").arg(&store).output().unwrap();
    let listing = text(&out.stdout);
    for key in ["config/tiny.json", "raw/node-0.json", "raw/node-1.json", "processed/aggregate.csv", "plots/entropy_curve.svg"] {
        assert!(listing.contains(key), "{key} missing from {listing}");
    }

    let out = bin().args(["inspect", "models/best.qmodel", "--store"]).arg(&store).output().unwrap();
    assert_eq!(code(&out), 0);
    let model = text(&out.stdout);
    assert!(model.contains("ansatz zoufal k=1 on 2 qubits"), "{model}");
    assert_eq!(model.lines().filter(|l| l.trim_start().starts_with(char::is_numeric)).count(), 4);

    // a second run into the same store is refused
    let out = bin().args(["run", "--config"]).arg(&path).arg("--store").arg(&store).output().unwrap();
    assert_eq!(code(&out), 2);
    assert!(text(&out.stderr).contains("already holds"));
}

#[test]
fn report_before_run_fails() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin().arg("report").arg("--store").arg(dir.path()).output().unwrap();
    assert_eq!(code(&out), 2);
}
