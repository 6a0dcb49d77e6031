mod common;

use common::*;
use tempfile::TempDir;

const HEADER: &str = "t,distance,abs_A1,abs_A2,r,s,phi";

fn gain_config(dir: &TempDir) -> std::path::PathBuf {
    write(dir.path(), "gain.cfg", GAIN)
}

fn assert_one_line_error(out: &std::process::Output, expected: i32) {
    assert_eq!(code(out), expected, "stderr: {}", stderr(out));
    let err = stderr(out);
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.starts_with("error: "), "{err}");
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&run(["--help"])), 0);
    assert_eq!(code(&run(["evolve", "--help"])), 0);
    assert_eq!(code(&run(["--version"])), 0);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&run::<[&str; 0], &str>([])), 2);
    assert_eq!(code(&run(["bogus"])), 2);
    assert_eq!(code(&run(["evolve"])), 2);
    assert_eq!(code(&run(["validate", "--samples", "many"])), 2);
}

#[test]
fn evolve_default_grid() {
    let dir = TempDir::new().unwrap();
    let cfg = gain_config(&dir);
    let out = run(["evolve", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some(HEADER));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 400);
    assert!(rows
        .iter()
        .all(|r| r.len() == 7 && r.iter().all(|v| v.is_finite())));
    assert!(rows.windows(2).all(|w| w[1][0] > w[0][0]));
    // 17 significant digits in every field
    let first = text.lines().nth(1).unwrap();
    for field in first.split(',') {
        let mantissa = field.split('e').next().unwrap().replace(['-', '.'], "");
        assert_eq!(mantissa.len(), 17, "{field}");
    }
}

#[test]
fn evolve_matches_golden_and_is_byte_stable() {
    let dir = TempDir::new().unwrap();
    let cfg = gain_config(&dir);
    let args = |out: &str| {
        vec![
            "evolve".to_string(),
            "--config".into(),
            cfg.to_str().unwrap().into(),
            "--grid".into(),
            "linear".into(),
            "--t-max".into(),
            "20".into(),
            "--points".into(),
            "21".into(),
            "--out".into(),
            out.into(),
        ]
    };
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    assert_eq!(code(&run(args(a.to_str().unwrap()))), 0);
    assert_eq!(code(&run(args(b.to_str().unwrap()))), 0);
    let a = std::fs::read(&a).unwrap();
    assert_eq!(a, std::fs::read(&b).unwrap());

    let golden = include_str!("golden/evolve_gain_linear.csv");
    let text = String::from_utf8(a).unwrap();
    assert_eq!(text.lines().next(), golden.lines().next());
    let (got, want) = (csv_rows(&text), csv_rows(golden));
    assert_eq!(got.len(), want.len());
    for (g, w) in got.iter().flatten().zip(want.iter().flatten()) {
        assert!((g - w).abs() <= 1e-12 * w.abs().max(1e-300), "{g} vs {w}");
    }
}

#[test]
fn evolve_equal_correlations_give_zero_distance() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "eq.cfg",
        &GAIN
            .replace("lambda1 = 0.25", "lambda1 = 0.3")
            .replace("lambda2 = 0", "lambda2 = 0.3"),
    );
    let out = run([
        "evolve",
        "--config",
        cfg.to_str().unwrap(),
        "--points",
        "50",
    ]);
    assert_eq!(code(&out), 0);
    assert!(csv_rows(&stdout(&out)).iter().all(|r| r[1] == 0.0));
}

#[test]
fn evolve_backends_agree() {
    let dir = TempDir::new().unwrap();
    let cfg = gain_config(&dir);
    let series = |backend: &str| {
        let out = run([
            "evolve",
            "--config",
            cfg.to_str().unwrap(),
            "--points",
            "40",
            "--t-max",
            "1000",
            "--backend",
            backend,
        ]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
        csv_rows(&stdout(&out))
    };
    let (closed, quad) = (series("closed"), series("quad"));
    for (c, q) in closed.iter().zip(&quad) {
        assert_eq!(c[0], q[0]);
        assert!(
            (c[1] - q[1]).abs() <= 1e-6 * c[1].abs(),
            "t={}: {} vs {}",
            c[0],
            c[1],
            q[1]
        );
    }
}

#[test]
fn evolve_normalized_rescales_distance() {
    let dir = TempDir::new().unwrap();
    let cfg = gain_config(&dir);
    let base = [
        "evolve",
        "--config",
        cfg.to_str().unwrap(),
        "--points",
        "30",
    ];
    let raw = csv_rows(&stdout(&run(base)));
    let mut args = base.to_vec();
    args.push("--normalized");
    let norm = csv_rows(&stdout(&run(args)));
    for (r, n) in raw.iter().zip(&norm) {
        // balanced amplitudes: |b₊b₋*| = 1/2
        assert!((n[1] - 2.0 * r[1]).abs() <= 1e-15 * n[1]);
    }
}

#[test]
fn evolve_config_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let bad = [
        format!("{GAIN}colour = blue\n"),
        format!("{GAIN}lambda1 = 0.5\n"),
        GAIN.replace("mu = 0.01", "mu = -0.5"),
        GAIN.replace("gamma = 0.05\n", ""),
        format!("{GAIN}b_plus = 0\n"),
        format!("{GAIN}points = 1\n"),
    ];
    for (i, body) in bad.iter().enumerate() {
        let cfg = write(dir.path(), &format!("bad{i}.cfg"), body);
        let out = run(["evolve", "--config", cfg.to_str().unwrap()]);
        assert_one_line_error(&out, 2);
    }
    let missing = dir.path().join("missing.cfg");
    assert_one_line_error(&run(["evolve", "--config", missing.to_str().unwrap()]), 2);
    let cfg = gain_config(&dir);
    for (flag, value) in [
        ("--grid", "cubic"),
        ("--backend", "fast"),
        ("--t-max", "-1"),
    ] {
        let out = run(["evolve", "--config", cfg.to_str().unwrap(), flag, value]);
        assert_eq!(code(&out), 2, "{flag} {value}");
    }
}

#[test]
fn evolve_non_convergence_exits_one() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "tight.cfg",
        &format!("{GAIN}backend = quad\nmax_subdivisions = 1\nrel_tol = 1e-14\nabs_tol = 1e-300\n"),
    );
    let out = run(["evolve", "--config", cfg.to_str().unwrap(), "--points", "5"]);
    assert_one_line_error(&out, 1);
}

#[test]
fn region_alpha_lambda_plane_has_both_labels() {
    let dir = TempDir::new().unwrap();
    let cfg = gain_config(&dir);
    let path = dir.path().join("region.json");
    let out = run([
        "region",
        "--config",
        cfg.to_str().unwrap(),
        "--plane",
        "alpha,lambda1",
        "--x-range",
        "1e-5:0.02:9",
        "--y-range",
        "0.02:0.98:9",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let doc = json(&std::fs::read_to_string(&path).unwrap());
    assert_eq!(doc["axes"]["x"]["param"], "alpha");
    assert_eq!(doc["axes"]["y"]["param"], "lambda1");
    assert_eq!(doc["axes"]["x"]["values"].as_array().unwrap().len(), 9);
    let labels = doc["labels"].as_array().unwrap();
    assert_eq!(labels.len(), 9);
    let flat: Vec<&str> = labels
        .iter()
        .flat_map(|row| row.as_array().unwrap().iter().map(|v| v.as_str().unwrap()))
        .collect();
    assert!(flat.contains(&"+") && flat.contains(&"-"));
    let ratios = doc["gain_ratio"].as_array().unwrap();
    for (lrow, rrow) in labels.iter().zip(ratios) {
        for (l, r) in lrow
            .as_array()
            .unwrap()
            .iter()
            .zip(rrow.as_array().unwrap())
        {
            match (l.as_str().unwrap(), r.as_f64()) {
                ("+", Some(v)) => assert!(v > 1.0),
                ("-", Some(v)) => assert!(v < 1.0),
                ("0", _) => {}
                other => panic!("inconsistent cell {other:?}"),
            }
        }
    }
}

#[test]
fn region_refined_boundary() {
    let dir = TempDir::new().unwrap();
    let cfg = gain_config(&dir);
    let out = run([
        "region",
        "--config",
        cfg.to_str().unwrap(),
        "--plane",
        "alpha,lambda1",
        "--x-range",
        "0.0025:0.0025:1",
        "--y-range",
        "0.05:0.95:4",
        "--refine-boundary",
        "1e-8",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let doc = json(&stdout(&out));
    let boundary = doc["boundary"].as_array().unwrap();
    assert_eq!(boundary.len(), 1);
    let y = boundary[0]["y"].as_f64().unwrap();
    assert!((y - 0.4929101787186176).abs() < 1e-7, "{y}");
}

#[test]
fn region_zero_width_range_gives_single_column() {
    let dir = TempDir::new().unwrap();
    let cfg = gain_config(&dir);
    let out = run([
        "region",
        "--config",
        cfg.to_str().unwrap(),
        "--plane",
        "alpha,lambda1",
        "--x-range",
        "0.004:0.004:5",
        "--y-range",
        "0.1:0.9:3",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let doc = json(&stdout(&out));
    assert_eq!(doc["axes"]["x"]["values"].as_array().unwrap().len(), 1);
    for row in doc["labels"].as_array().unwrap() {
        assert_eq!(row.as_array().unwrap().len(), 1);
    }
}

#[test]
fn region_without_displacement_has_no_gain() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "g0.cfg",
        &GAIN.replace("gamma = 0.05", "gamma = 0"),
    );
    let out = run([
        "region",
        "--config",
        cfg.to_str().unwrap(),
        "--plane",
        "alpha,lambda1",
        "--x-range",
        "1e-5:0.02:5",
        "--y-range",
        "0.02:0.98:5",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(!stdout(&out).contains("\"+\""));
}

#[test]
fn region_bad_flags_exit_two() {
    let dir = TempDir::new().unwrap();
    let cfg = gain_config(&dir);
    let c = cfg.to_str().unwrap();
    for (plane, x, y) in [
        ("alpha,beta", "0:1:2", "0:1:2"),
        ("alpha,alpha", "0.001:0.01:2", "0.001:0.01:2"),
        ("alpha", "0.001:0.01:2", "0:1:2"),
        ("alpha,lambda1", "0.01:0.001:2", "0:1:2"),
        ("alpha,lambda1", "0.001:0.01", "0:1:2"),
        ("alpha,lambda1", "0.001:0.01:0", "0:1:2"),
        ("alpha,lambda1", "0.001:0.01:2", "0:1.5:2"),
    ] {
        let out = run([
            "region",
            "--config",
            c,
            "--plane",
            plane,
            "--x-range",
            x,
            "--y-range",
            y,
        ]);
        assert_one_line_error(&out, 2);
    }
}

#[test]
fn critical_finds_lambda_c() {
    let dir = TempDir::new().unwrap();
    let cfg = gain_config(&dir);
    let out = run([
        "critical",
        "--config",
        cfg.to_str().unwrap(),
        "--vary",
        "lambda1",
        "--bracket",
        "0.05:0.95",
        "--tol",
        "1e-9",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let doc = json(&stdout(&out));
    assert_eq!(doc["status"], "ok");
    let lc = doc["lambda_c"].as_f64().unwrap();
    assert!((lc - 0.4929101787186176).abs() < 1e-8, "{lc}");
    assert!(doc["ratio_lo"].as_f64().unwrap() > 1.0);
    assert!(doc["ratio_hi"].as_f64().unwrap() < 1.0);
}

#[test]
fn critical_without_gain_exits_three() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "loss.cfg", &config_with(0.05));
    let out = run([
        "critical",
        "--config",
        cfg.to_str().unwrap(),
        "--bracket",
        "0.05:0.95",
    ]);
    assert_eq!(code(&out), 3);
    let doc = json(&stdout(&out));
    assert_eq!(doc["status"], "no-bracket");
    assert!(doc["ratio_lo"].as_f64().unwrap() < 1.0);
    assert_eq!(stderr(&out).lines().count(), 1);
}

#[test]
fn critical_bad_flags_exit_two() {
    let dir = TempDir::new().unwrap();
    let cfg = gain_config(&dir);
    let c = cfg.to_str().unwrap();
    for extra in [
        ["--bracket", "0.95:0.05"],
        ["--bracket", "-0.1:0.5"],
        ["--bracket", "0.1"],
        ["--vary", "alpha"],
        ["--tol", "0"],
    ] {
        let mut args = vec!["critical", "--config", c];
        args.extend(extra);
        assert_one_line_error(&run(args), 2);
    }
}

#[test]
fn validate_passes_and_is_deterministic() {
    let args = [
        "validate",
        "--samples",
        "100",
        "--tol",
        "1e-6",
        "--seed",
        "42",
    ];
    let a = run(args);
    assert_eq!(code(&a), 0, "{}", stdout(&a));
    let text = stdout(&a);
    assert_eq!(text.lines().count(), 6);
    assert!(text.lines().all(|l| l.contains("PASS")));
    assert_eq!(a.stdout, run(args).stdout);
}

#[test]
fn validate_failures() {
    assert_one_line_error(&run(["validate", "--samples", "0"]), 2);
    assert_one_line_error(&run(["validate", "--tol=-1"]), 2);
    let out = run(["validate", "--samples", "20", "--doubled-s-constant"]);
    assert_eq!(code(&out), 1);
    let line = stdout(&out)
        .lines()
        .find(|l| l.starts_with("overlap_consistency"))
        .unwrap()
        .to_string();
    assert!(line.contains("FAIL"), "{line}");
}
