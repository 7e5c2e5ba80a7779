use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn wva(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wva"))
        .args(args)
        .current_dir(cwd)
        .env("RUST_LOG", "error")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str], cwd: &Path) -> Vec<u8> {
    let out = wva(args, cwd);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out.stdout
}

fn read_csv(bytes: &[u8]) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_reader(bytes);
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

fn column(header: &[String], rows: &[Vec<String>], name: &str) -> Vec<String> {
    let k = header.iter().position(|h| h == name).unwrap();
    rows.iter().map(|r| r[k].clone()).collect()
}

fn floats(cells: Vec<String>) -> Vec<f64> {
    cells.iter().map(|c| c.parse().unwrap()).collect()
}

#[test]
fn eval_reports_every_observable_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let a = ok(&["eval"], dir.path());
    let b = ok(&["eval"], dir.path());
    assert_eq!(a, b);
    let doc: Value = serde_json::from_slice(&a).unwrap();
    let obs = doc["observables"].as_object().unwrap();
    assert_eq!(obs.len(), 17);
    assert!(obs.values().all(Value::is_number));
    assert_eq!(doc["status"], "ok");
}

#[test]
fn eval_matched_cavity_gives_null_with_reason() {
    let dir = tempfile::tempdir().unwrap();
    let r = 0.2f64.cos().to_string();
    let out = ok(
        &[
            "eval", "--n", "2", "--phi", "0.1", "--gamma", "0", "--r", &r,
        ],
        dir.path(),
    );
    let doc: Value = serde_json::from_slice(&out).unwrap();
    assert_eq!(doc["observables"]["pointer_shift_discarded"], Value::Null);
    assert_eq!(
        doc["reasons"]["pointer_shift_discarded"],
        "impedance matched"
    );
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("s.cfg"), "# scenario\nn = 4\nr = 0.5\n").unwrap();
    let out = ok(&["--config", "s.cfg", "eval", "--r", "0.7"], dir.path());
    let doc: Value = serde_json::from_slice(&out).unwrap();
    assert_eq!(doc["config"]["n"], 4);
    assert_eq!(doc["config"]["r"], 0.7);

    std::fs::write(dir.path().join("bad.cfg"), "theta = 1\n").unwrap();
    assert_eq!(
        wva(&["--config", "bad.cfg", "eval"], dir.path())
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        wva(&["--config", "missing.cfg", "eval"], dir.path())
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        wva(&["eval", "--r", "1.5"], dir.path()).status.code(),
        Some(2)
    );
    assert_eq!(wva(&["eval", "--bogus"], dir.path()).status.code(), Some(1));
    assert_eq!(wva(&[], dir.path()).status.code(), Some(1));
}

#[test]
fn sweep_rows_spacing_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let out = ok(&["sweep", "--axis", "r:0:0.8:5"], dir.path());
    let (header, rows) = read_csv(&out);
    assert_eq!(rows.len(), 5);
    assert_eq!(header.last().unwrap(), "status");
    assert!(rows.iter().all(|r| r.len() == header.len()));

    let a = ok(
        &["sweep", "--axis", "g:1e-5:1e-3:3:log", "--jobs", "1"],
        dir.path(),
    );
    let b = ok(
        &["sweep", "--axis", "g:1e-5:1e-3:3:log", "--jobs", "4"],
        dir.path(),
    );
    assert_eq!(a, b);
    let (header, rows) = read_csv(&a);
    assert_eq!(floats(column(&header, &rows, "g")), vec![1e-5, 1e-4, 1e-3]);

    ok(
        &[
            "sweep",
            "--axis",
            "n:1:4:4",
            "--axis",
            "r:0:0.9:4",
            "--out",
            "s.csv",
        ],
        dir.path(),
    );
    let first = std::fs::read(dir.path().join("s.csv")).unwrap();
    ok(
        &[
            "sweep",
            "--axis",
            "n:1:4:4",
            "--axis",
            "r:0:0.9:4",
            "--out",
            "s.csv",
        ],
        dir.path(),
    );
    assert_eq!(first, std::fs::read(dir.path().join("s.csv")).unwrap());
    let (header, rows) = read_csv(&first);
    let n = floats(column(&header, &rows, "n"));
    assert_eq!(
        n,
        [1.0, 1.0, 1.0, 1.0, 2.0, 2.0, 2.0, 2.0, 3.0, 3.0, 3.0, 3.0, 4.0, 4.0, 4.0, 4.0]
    );

    assert_eq!(
        wva(&["sweep", "--axis", "theta:0:1:3"], dir.path())
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn sweep_skips_invalid_points() {
    let dir = tempfile::tempdir().unwrap();
    let out = ok(&["sweep", "--axis", "r:0.5:1.5:3"], dir.path());
    assert_eq!(read_csv(&out).1.len(), 1);
}

#[test]
fn figure_files_show_expected_shapes() {
    let dir = tempfile::tempdir().unwrap();
    ok(
        &["figure", "2", "5", "6", "--out", "figs", "--plot-script"],
        dir.path(),
    );
    let figs = dir.path().join("figs");
    assert!(figs.join("fig2.py").exists());

    let (h, rows) = read_csv(&std::fs::read(figs.join("fig2.csv")).unwrap());
    for n in ["1", "2", "4"] {
        let peak = rows
            .iter()
            .filter(|r| r[0] == n && r[3] == "0.0")
            .map(|r| {
                r[h.iter().position(|c| c == "detected_power").unwrap()]
                    .parse::<f64>()
                    .unwrap()
            })
            .fold(f64::MIN, f64::max);
        assert!((peak - 1.0).abs() < 1e-9, "n={n}: {peak}");
    }

    let (h, rows) = read_csv(&std::fs::read(figs.join("fig5.csv")).unwrap());
    let k = h.iter().position(|c| c == "qfi_recycled").unwrap();
    let peaks: Vec<f64> = (1..=8)
        .map(|n| {
            rows.iter()
                .filter(|r| r[0] == "0.01" && r[1] == n.to_string())
                .map(|r| r[k].parse::<f64>().unwrap())
                .fold(f64::MIN, f64::max)
        })
        .collect();
    let (lo, hi) = peaks
        .iter()
        .fold((f64::MAX, f64::MIN), |(a, b), &p| (a.min(p), b.max(p)));
    assert!((hi - lo) / lo < 0.02, "{peaks:?}");

    let (h, rows) = read_csv(&std::fs::read(figs.join("fig6.csv")).unwrap());
    let ratio = floats(column(&h, &rows, "walk_off_ratio"));
    let r = floats(column(&h, &rows, "r"));
    for (x, r) in ratio.iter().zip(&r) {
        // O((ng)^2) above 1 at r = 0, from the leading-order recycled shift.
        assert!(*x <= 1.0 + 1e-6, "{x}");
        if *r == 0.0 {
            assert!((x - 1.0).abs() < 1e-6);
        }
    }
    assert_eq!(
        column(&h, &rows, "qfi_peak")
            .iter()
            .filter(|m| *m == "1")
            .count(),
        9
    );

    assert_eq!(wva(&["figure", "9"], dir.path()).status.code(), Some(2));
}

#[test]
fn figure_output_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    ok(
        &["figure", "all", "--points", "40", "--out", "a"],
        dir.path(),
    );
    ok(
        &["figure", "all", "--points", "40", "--out", "b"],
        dir.path(),
    );
    for id in ["2", "3a", "3b", "4", "5", "6", "7", "8"] {
        let name = format!("fig{id}.csv");
        let a = std::fs::read(dir.path().join("a").join(&name)).unwrap();
        let b = std::fs::read(dir.path().join("b").join(&name)).unwrap();
        assert_eq!(a, b, "{name}");
    }
}

#[test]
fn selftest_passes_and_detects_perturbation() {
    let dir = tempfile::tempdir().unwrap();
    let text = String::from_utf8(ok(&["selftest", "--profile", "quick"], dir.path())).unwrap();
    assert!(text.contains("as_printed"));
    assert!(!text.contains("FAIL"));

    let out = wva(
        &[
            "selftest",
            "--profile",
            "quick",
            "--json",
            "--out",
            "r.json",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["arbitration"].as_array().unwrap().len(), 4);
    assert!(dir.path().join("r.json").exists());

    let out = wva(
        &[
            "selftest",
            "--profile",
            "quick",
            "--inject-perturbation",
            "1e-6",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn mc_is_reproducible_for_fixed_seed() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &'static str, seed: &'static str| {
        vec![
            "mc",
            "--n",
            "2",
            "--phi",
            "0.1",
            "--g",
            "1e-3",
            "--r",
            "0.9",
            "--gamma",
            "0",
            "--q-keep-to-discard",
            "0",
            "--q-discard-to-keep",
            "0",
            "--shots",
            "100000",
            "--replicas",
            "10",
            "--seed",
            seed,
            "--out",
            out,
        ]
    };
    ok(&args("a", "7"), dir.path());
    ok(&args("b", "7"), dir.path());
    ok(&args("c", "8"), dir.path());
    let read = |d: &str, f: &str| std::fs::read(dir.path().join(d).join(f)).unwrap();
    assert_eq!(read("a", "mc.csv"), read("b", "mc.csv"));
    assert_eq!(read("a", "mc_summary.json"), read("b", "mc_summary.json"));
    assert_ne!(read("a", "mc.csv"), read("c", "mc.csv"));

    let (h, rows) = read_csv(&read("a", "mc.csv"));
    assert_eq!(rows.len(), 10);
    assert!(column(&h, &rows, "status").iter().all(|s| s == "ok"));
    let summary: Value = serde_json::from_slice(&read("a", "mc_summary.json")).unwrap();
    assert_eq!(summary["summary"]["fitted"], 10);
}
