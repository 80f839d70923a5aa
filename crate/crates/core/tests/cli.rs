use std::f64::consts::LN_2;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn accinfo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_accinfo"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&stdout(&accinfo(args))).unwrap()
}

#[test]
fn sweep_csv_has_one_row_per_point() {
    let text = stdout(&accinfo(&[
        "sweep", "--M", "3", "--points", "1000", "--format", "csv",
    ]));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("theta_rad,info_nats"));
    let rows: Vec<(f64, f64)> = lines
        .map(|l| {
            let (t, v) = l.split_once(',').unwrap();
            (t.parse().unwrap(), v.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 1000);
    let best = rows.iter().map(|r| r.1).fold(f64::MIN, f64::max);
    assert!((best - 1.5f64.ln()).abs() < 1e-12);
}

#[test]
fn construct_w_weights() {
    let v = json(&[
        "construct",
        "w",
        "--M",
        "5",
        "--m",
        "2",
        "--n",
        "2",
        "--format",
        "json",
    ]);
    let w: Vec<f64> = v["weights"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    assert_eq!(w.len(), 3);
    for (got, want) in w.iter().zip([0.894427, 0.552786, 0.552786]) {
        assert!((got - want).abs() < 1e-6, "{got}");
    }
}

#[test]
fn scan_reports_bits() {
    let v = json(&["scan", "--M", "3", "--grid", "48", "--unit", "bits"]);
    let best = v["best_value"].as_f64().unwrap();
    assert!((best - 1.5f64.log2()).abs() < 1e-6, "{best}");
    assert!((best - 0.584963).abs() < 1e-6);
    assert_eq!(v["unit"], "bits");
}

#[test]
fn bits_flag_divides_by_ln2() {
    for args in [["info", "--M", "7"], ["info", "--M", "4"]] {
        let nats = json(&args)["info"].as_f64().unwrap();
        let mut with_bits = args.to_vec();
        with_bits.extend(["--unit", "bits"]);
        let bits = json(&with_bits)["info"].as_f64().unwrap();
        assert!((bits - nats / LN_2).abs() < 1e-12);
    }
}

#[test]
fn constructions_validate() {
    let dir = tempfile::tempdir().unwrap();
    let cases: &[&[&str]] = &[
        &["covariant", "--M", "7"],
        &["w", "--M", "7", "--m", "3", "--n", "2"],
        &["w", "--M", "6", "--m", "1", "--n", "3"],
        &["subgroup", "--M", "15", "--k", "3", "--l", "4"],
        &["mu4", "--lambda", "0.3"],
        &["covariant-from-w", "--M", "5", "--m", "2", "--n", "2"],
        &["state", "--M", "4"],
    ];
    for (i, case) in cases.iter().enumerate() {
        for full in [false, true] {
            let path = dir.path().join(format!("p{i}{full}.json"));
            let mut args = vec!["construct"];
            args.extend_from_slice(case);
            args.extend(["--output", path.to_str().unwrap()]);
            if full {
                args.push("--full");
            }
            let out = accinfo(&args);
            assert!(out.status.success(), "{case:?}");
            assert!(out.stdout.is_empty());
            let check = accinfo(&["validate", path.to_str().unwrap()]);
            assert!(
                check.status.success(),
                "{case:?}: {}",
                String::from_utf8_lossy(&check.stdout)
            );
        }
    }
}

#[test]
fn info_with_files_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let povm = dir.path().join("w.json");
    stdout(&accinfo(&[
        "construct",
        "w",
        "--M",
        "5",
        "--m",
        "2",
        "--n",
        "2",
        "--output",
        povm.to_str().unwrap(),
    ]));
    let v = json(&["info", "--M", "5", "--povm", povm.to_str().unwrap()]);
    let closed = json(&["info", "--M", "5"]);
    assert!((v["info"].as_f64().unwrap() - closed["info"].as_f64().unwrap()).abs() < 1e-10);
}

#[test]
fn identical_runs_give_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, extra: &[&str]| -> Vec<u8> {
        let path = dir.path().join(name);
        let mut args = extra.to_vec();
        args.extend(["--output", path.to_str().unwrap()]);
        stdout(&accinfo(&args));
        std::fs::read(path).unwrap()
    };
    for extra in [
        &["scan", "--M", "5", "--grid", "16"][..],
        &["sweep", "--M", "4", "--points", "50", "--format", "csv"][..],
        &[
            "naimark", "--M", "5", "--m", "2", "--theta", "0.4", "--shots", "500",
        ][..],
    ] {
        assert_eq!(run("a", extra), run("b", extra), "{extra:?}");
    }
}

#[test]
fn naimark_outputs() {
    let v = json(&["naimark", "--M", "7", "--m", "3"]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["plan"]["outcome_map"][3], Value::Null);
    let info = v["information"].as_f64().unwrap();
    assert!(
        (info - accessible_info::measures::i_theta(7, std::f64::consts::FRAC_PI_2)).abs() < 1e-10
    );

    let csv = stdout(&accinfo(&[
        "naimark", "--M", "5", "--m", "2", "--format", "csv",
    ]));
    assert!(csv.starts_with("port,probability\n"));
    assert_eq!(csv.lines().count(), 5);

    let bad = accinfo(&["naimark", "--M", "5", "--m", "1"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("M/4 < m < M/2"));
}

#[test]
fn pe_check_outputs() {
    let v = json(&["pe-check", "--M", "5"]);
    assert_eq!(v["passed"], true);
    assert!((v["error_probability"].as_f64().unwrap() - 0.6).abs() < 1e-12);

    let dir = tempfile::tempdir().unwrap();
    let cov = dir.path().join("cov.json");
    stdout(&accinfo(&[
        "construct",
        "covariant",
        "--M",
        "3",
        "--output",
        cov.to_str().unwrap(),
    ]));
    let v = json(&["pe-check", "--M", "3", "--povm", cov.to_str().unwrap()]);
    assert_eq!(v["passed"], false);
}

#[test]
fn exit_codes() {
    assert_eq!(accinfo(&["bogus"]).status.code(), Some(1));
    assert_eq!(
        accinfo(&["sweep", "--M", "3", "--nope"]).status.code(),
        Some(1)
    );
    assert_eq!(
        accinfo(&["scan", "--M", "3", "--grid", "4"]).status.code(),
        Some(1)
    );
    assert_eq!(accinfo(&["--help"]).status.code(), Some(0));
    assert_eq!(
        accinfo(&["validate", "/no/such/file.json"]).status.code(),
        Some(2)
    );

    let dir = tempfile::tempdir().unwrap();
    let unwritable = dir.path().join("missing").join("out.csv");
    let out = accinfo(&[
        "sweep",
        "--M",
        "3",
        "--output",
        unwritable.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));

    let broken = dir.path().join("broken.json");
    std::fs::write(
        &broken,
        r#"{"weights": [1.0, 0.5], "angles_rad": [0.0, 1.5707963267948966]}"#,
    )
    .unwrap();
    let out = accinfo(&["validate", broken.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!Path::new(&unwritable).exists());
}
