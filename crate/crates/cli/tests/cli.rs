use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn voi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_voi"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn curve_starts_at_maxent() {
    let out = voi(&[
        "curve",
        "--model",
        "circle-linear",
        "--n",
        "8",
        "--beta-count",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "beta,Z,Gamma,expected_cost,info_nats,info_base,value"
    );
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first, ["0", "1", "0", "2", "0", "0", "0"]);
    assert_eq!(text.lines().count(), 7);
}

#[test]
fn curve_writes_file_and_reports_io_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.csv");
    let out = voi(&[
        "curve",
        "--model",
        "unit-circle-linear",
        "--n",
        "16",
        "--out",
        path_str(&path),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).is_empty());
    assert_eq!(fs::read_to_string(&path).unwrap().lines().count(), 202);

    let missing = dir.path().join("no/such/dir.csv");
    let out = voi(&[
        "curve",
        "--model",
        "unit-circle-linear",
        "--n",
        "16",
        "--out",
        path_str(&missing),
    ]);
    assert_eq!(out.status.code(), Some(3));
    let out = voi(&["curve", "--cost", path_str(&dir.path().join("absent.csv"))]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn validation_errors_exit_one() {
    for args in [
        &["curve", "--model", "circle-linear", "--n", "7"][..],
        &["curve", "--model", "circle-linear"],
        &["curve", "--model", "hexagon", "--n", "8"],
        &[
            "curve",
            "--model",
            "circle-linear",
            "--n",
            "8",
            "--beta-min",
            "-1",
        ],
        &["limit", "--beta", "0"],
        &["plot"],
        &["nonsense"],
    ] {
        let out = voi(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}: {}", stderr(&out));
        assert!(!stderr(&out).is_empty());
    }
    assert_eq!(voi(&["--help"]).status.code(), Some(0));
    assert_eq!(voi(&["--version"]).status.code(), Some(0));
}

#[test]
fn hartley_rows_and_size_error() {
    let out = voi(&["hartley", "--model", "circle-linear", "--n", "8"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "bits,info,value\n1,1,1\n2,2,1.5\n3,3,2\n");

    let nats = voi(&[
        "hartley",
        "--model",
        "circle-linear",
        "--n",
        "8",
        "--base",
        "nats",
    ]);
    assert!(stdout(&nats).contains("1,0.69314718056,1\n"));

    let out = voi(&["hartley", "--model", "circle-linear", "--n", "6"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(
        stderr(&out).contains("n must be a power-of-two multiple of cells"),
        "{}",
        stderr(&out)
    );
}

#[test]
fn maxent_report() {
    let out = voi(&["maxent", "--model", "unit-circle-linear", "--n", "8"]);
    let text = stdout(&out);
    assert!(text.contains("maxent_cost: 1.57079632679\n"), "{text}");
    assert!(text.contains("limit: 1.57079632679\n"));
    let root = stdout(&voi(&["maxent", "--model", "unit-circle-root", "--n", "8"]));
    assert!(root.contains("limit: undefined"), "{root}");
}

#[test]
fn limit_table() {
    let out = voi(&["limit", "--beta", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "beta,limit_z_unit_linear,limit_gamma_prime_circle\n1,0.30455446878,-0.850918128239\n"
    );
}

#[test]
fn verify_bundled_models_pass() {
    let out = voi(&["verify", "--n", "8", "--beta-count", "40"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("checks passed"));
}

#[test]
fn verify_perturbed_cost_reports_marginal_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cost.csv");
    let mut text = String::from("# perturbed circle\n4\n");
    for x in 0..4usize {
        let row: Vec<String> = (0..4usize)
            .map(|u| {
                let d = (x as i64 - u as i64).unsigned_abs() as usize;
                let base = d.min(4 - d) as f64;
                (if x == 0 && u == 1 { base + 0.5 } else { base }).to_string()
            })
            .collect();
        text.push_str(&row.join(","));
        text.push('\n');
    }
    fs::write(&path, text).unwrap();
    let out = voi(&["verify", "--cost", path_str(&path), "--beta-count", "30"]);
    let report = stdout(&out);
    assert_eq!(out.status.code(), Some(0), "{report}");
    assert!(report.contains("u_ok=false, expected false"), "{report}");
    assert!(report.contains("oracle_lagrangian"));
}

#[test]
fn verify_with_impossible_tolerance_exits_two() {
    let out = voi(&[
        "verify",
        "--model",
        "unit-circle-log",
        "--n",
        "8",
        "--beta-count",
        "20",
        "--tol",
        "1e-18",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("FAIL"));
}

#[test]
fn plot_with_hartley_dots() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("fig.svg");
    let out = voi(&[
        "plot",
        "--model",
        "circle-linear",
        "--n",
        "8,16",
        "--hartley",
        "--beta-count",
        "60",
        "--out",
        path_str(&svg),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = fs::read_to_string(&svg).unwrap();
    assert_eq!(text.matches("<polyline").count(), 2);
    assert_eq!(text.matches("<circle").count(), 7);
    assert!(text.contains("information I (bits)"));
}

#[test]
fn plot_from_files_rejects_mixed_bases() {
    let dir = tempfile::tempdir().unwrap();
    let bits = dir.path().join("bits.csv");
    let nats = dir.path().join("nats.csv");
    let common = [
        "--model",
        "unit-circle-linear",
        "--n",
        "8",
        "--beta-count",
        "20",
    ];
    let mut a = vec!["curve"];
    a.extend(common);
    a.extend(["--out", path_str(&bits)]);
    assert!(voi(&a).status.success());
    let mut b = vec!["curve"];
    b.extend(common);
    b.extend(["--base", "nats", "--out", path_str(&nats)]);
    assert!(voi(&b).status.success());

    let ok = voi(&[
        "plot",
        "--curve",
        path_str(&bits),
        "--curve",
        path_str(&bits),
    ]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(stdout(&ok).matches("<polyline").count(), 2);

    let mixed = voi(&[
        "plot",
        "--curve",
        path_str(&bits),
        "--curve",
        path_str(&nats),
    ]);
    assert_eq!(mixed.status.code(), Some(1));
    assert!(stderr(&mixed).contains("mixed information bases"));
}

#[test]
fn custom_prior_and_cost_files() {
    let dir = tempfile::tempdir().unwrap();
    let prior = dir.path().join("prior.csv");
    fs::write(&prior, "0.125 0.125 0.25 0.5\n").unwrap();
    let out = voi(&[
        "curve",
        "--model",
        "unit-circle-linear",
        "--n",
        "4",
        "--prior",
        path_str(&prior),
        "--beta-count",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let wrong = voi(&[
        "curve",
        "--model",
        "unit-circle-linear",
        "--n",
        "8",
        "--prior",
        path_str(&prior),
    ]);
    assert_eq!(wrong.status.code(), Some(1));
}

#[test]
fn identical_runs_are_byte_identical() {
    let a = voi(&["curve", "--model", "one-way-line-linear", "--n", "32"]);
    let b = voi(&["curve", "--model", "one-way-line-linear", "--n", "32"]);
    assert_eq!(a.stdout, b.stdout);
}
