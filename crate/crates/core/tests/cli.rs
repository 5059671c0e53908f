use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use kdtl::commands::check_csv_schema;
use tempfile::TempDir;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

/// The bundled config with a smaller beam run, copied next to its data.
fn workspace(edit: impl Fn(String) -> String) -> (TempDir, PathBuf) {
    let dir = TempDir::new().unwrap();
    for f in ["library.toml", "maldi_peaks.csv"] {
        fs::copy(data(f), dir.path().join(f)).unwrap();
    }
    let text = fs::read_to_string(data("reference.toml"))
        .unwrap()
        .replace("n_samples = 1000000", "n_samples = 50000")
        .replace("points = 201", "points = 41");
    let path = dir.path().join("experiment.toml");
    fs::write(&path, edit(text)).unwrap();
    (dir, path)
}

fn kdtl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kdtl")).args(args).output().unwrap()
}

fn run(command: &str, config: &Path, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec![command, "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    kdtl(&args)
}

const EXPECTED: [(&str, &[&str]); 4] = [
    ("visibility", &["visibility.csv", "visibility_summary.toml"]),
    ("scan", &["scan.csv", "fit.toml"]),
    ("library", &["library.csv", "peaks.csv"]),
    ("beam", &["velocity_histogram.csv", "beam_summary.toml"]),
];

#[test]
fn every_command_is_deterministic_and_schema_clean() {
    let (dir, config) = workspace(|t| t);
    for (command, files) in EXPECTED {
        let a = dir.path().join(format!("{command}-a"));
        let b = dir.path().join(format!("{command}-b"));
        for out in [&a, &b] {
            let o = run(command, &config, out, &[]);
            assert!(o.status.success(), "{command}: {}", String::from_utf8_lossy(&o.stderr));
        }
        let manifest = format!("{command}_manifest.json");
        for f in files.iter().copied().chain([manifest.as_str()]) {
            let x = fs::read(a.join(f)).unwrap();
            let y = fs::read(b.join(f)).unwrap();
            assert_eq!(x, y, "{command}: {f} differs between runs");
            if f.ends_with(".csv") {
                check_csv_schema(std::str::from_utf8(&x).unwrap()).unwrap();
            }
        }
    }
}

#[test]
fn manifest_lists_output_hashes() {
    let (dir, config) = workspace(|t| t);
    let out = dir.path().join("o");
    assert!(run("library", &config, &out, &["--seed", "7"]).status.success());
    let m: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("library_manifest.json")).unwrap()).unwrap();
    assert_eq!(m["seed"], 7);
    assert_eq!(m["constants"], "CODATA 2018");
    let outputs = m["outputs"].as_array().unwrap();
    assert_eq!(outputs.len(), 2);
    for o in outputs {
        let bytes = fs::read(out.join(o["file"].as_str().unwrap())).unwrap();
        assert_eq!(o["sha256"], kdtl::io::sha256_hex(&bytes));
    }
}

#[test]
fn seed_and_model_flags_override_the_file() {
    let (dir, config) = workspace(|t| t);
    let read = |name: &str, extra: &[&str]| {
        let out = dir.path().join(name);
        assert!(run("scan", &config, &out, extra).status.success());
        fs::read_to_string(out.join("fit.toml")).unwrap()
    };
    let base = read("base", &[]);
    assert_ne!(base, read("seed", &["--seed", "99"]));
    let classical = read("classical", &["--model", "classical"]);
    assert!(classical.starts_with("model = \"classical\""), "{classical}");
}

#[test]
fn config_errors_exit_2() {
    let (dir, config) = workspace(|t| t.replace("fwhm = 30.0", "fwhm = -30.0"));
    let o = run("visibility", &config, &dir.path().join("o"), &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("velocity.fwhm"));

    let o = run("scan", &dir.path().join("missing.toml"), &dir.path().join("o"), &[]);
    assert_eq!(o.status.code(), Some(2));

    let (dir, config) = workspace(|t| t.replace("n_samples = 50000", "n_samples = 10"));
    let o = run("beam", &config, &dir.path().join("o"), &[]);
    assert_eq!(o.status.code(), Some(2));

    assert_eq!(kdtl(&["visibility"]).status.code(), Some(2));
    assert_eq!(kdtl(&["bogus", "--config", "x"]).status.code(), Some(2));
    assert_eq!(kdtl(&["--help"]).status.code(), Some(0));
}

#[test]
fn blocked_geometry_exits_3() {
    // Third slot far above every trajectory.
    let (dir, config) = workspace(|t| t.replace("center_height = 1.35e-3", "center_height = 0.5"));
    let o = run("beam", &config, &dir.path().join("o"), &[]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("geometry blocks beam"));
}

#[test]
fn single_core_library() {
    let (dir, config) = workspace(|t| t.replace("tolerance = 15.0", "tolerance = 15.0\nn_min = 0\nn_max = 0"));
    let out = dir.path().join("o");
    assert!(run("library", &config, &out, &[]).status.success());
    let csv = fs::read_to_string(out.join("library.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 1);
    assert!(rows[0].starts_with("0,C44H10F20N4,"), "{}", rows[0]);
}
