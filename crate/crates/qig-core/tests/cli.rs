//! End-to-end tests of the `qig` binary: flag grammar, output formats, and
//! the exit-code contract (0 pass, 1 usage, 2 violation, 3 inconclusive,
//! 4 numerical failure).

use std::process::{Command, Output};

use serde_json::Value;

fn qig(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qig"))
        .args(args)
        .env_remove("QIG_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines
        .next()
        .expect("header row")
        .split(',')
        .map(str::to_string)
        .collect();
    let rows = lines
        .map(|l| {
            l.split(',')
                .map(|x| x.parse::<f64>().expect("numeric cell"))
                .collect()
        })
        .collect();
    (header, rows)
}

#[test]
fn tomogram_of_the_mixed_state() {
    let out = qig(&["tomogram", "--bloch", "0,0,0"]);
    assert_eq!(exit_code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).expect("valid JSON");
    for pair in v["probs"].as_array().unwrap() {
        assert!((pair[0].as_f64().unwrap() - 0.5).abs() < 1e-14);
        assert!((pair[1].as_f64().unwrap() - 0.5).abs() < 1e-14);
    }
}

#[test]
fn tomogram_reads_the_axis_component() {
    let out = qig(&["tomogram", "--bloch", "0,0,0.6"]);
    assert_eq!(exit_code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let probs = v["probs"].as_array().unwrap();
    assert!((probs[2][0].as_f64().unwrap() - 0.8).abs() < 1e-14);
    assert!((probs[2][1].as_f64().unwrap() - 0.2).abs() < 1e-14);
}

#[test]
fn tomogram_with_exponential_scheme() {
    let out = qig(&["tomogram", "--bloch", "0,0,0.5", "--scheme", "exp:2"]);
    assert_eq!(exit_code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let probs = v["probs"].as_array().unwrap();
    let expect_plus = (1.0 - 0.5f64.tanh()) / 2.0;
    assert!((probs[2][0].as_f64().unwrap() - expect_plus).abs() < 1e-14);
    assert!((probs[2][1].as_f64().unwrap() - (1.0 - expect_plus)).abs() < 1e-14);
}

#[test]
fn metric_grid_has_the_universal_radial_coefficient() {
    let out = qig(&["metric", "--f", "vn", "--grid", "5"]);
    assert_eq!(exit_code(&out), 0);
    let (header, rows) = parse_csv(&stdout(&out));
    assert_eq!(header, vec!["w", "g_w", "g_perp"]);
    assert_eq!(rows.len(), 5);
    for row in &rows {
        let (w, g_w) = (row[0], row[1]);
        assert!((g_w - 1.0 / (1.0 - w * w)).abs() < 1e-12);
    }
}

#[test]
fn tsallis_routes_agree_to_1e10() {
    let dir = std::env::temp_dir();
    let a_path = dir.join("qig_cli_tsallis_direct.csv");
    let b_path = dir.join("qig_cli_tsallis_petz.csv");
    let out = qig(&[
        "metric",
        "--f",
        "tsallis:0.5",
        "--grid",
        "101",
        "--output",
        a_path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    let out = qig(&[
        "metric",
        "--f",
        "petz-tsallis:0.5",
        "--grid",
        "101",
        "--output",
        b_path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    let (_, rows_a) = parse_csv(&std::fs::read_to_string(&a_path).unwrap());
    let (_, rows_b) = parse_csv(&std::fs::read_to_string(&b_path).unwrap());
    assert_eq!(rows_a.len(), rows_b.len());
    for (ra, rb) in rows_a.iter().zip(&rows_b) {
        for (x, y) in ra.iter().zip(rb) {
            assert!((x - y).abs() < 1e-10);
        }
    }
}

#[test]
fn pullback_appends_conformal_factor_and_extracted_function() {
    let out = qig(&[
        "metric",
        "--f",
        "vn",
        "--pullback",
        "exp:1",
        "--grid",
        "9",
        "--w-min",
        "0.1",
        "--w-max",
        "0.9",
    ]);
    assert_eq!(exit_code(&out), 0);
    let (header, rows) = parse_csv(&stdout(&out));
    assert_eq!(
        header,
        vec!["w", "g_w", "g_perp", "conformal", "h_extracted"]
    );
    for row in &rows {
        let w = row[0];
        let expect = w * (1.0 - w) / w.sinh();
        assert!((row[4] - expect).abs() < 1e-9, "w = {w}");
    }
}

#[test]
fn petz_csv_export() {
    let out = qig(&[
        "petz",
        "--f",
        "tsallis:0.5",
        "--grid",
        "5",
        "--t-min",
        "1",
        "--t-max",
        "16",
    ]);
    assert_eq!(exit_code(&out), 0);
    let (header, rows) = parse_csv(&stdout(&out));
    assert_eq!(header, vec!["t", "f"]);
    assert_eq!(rows.len(), 5);
    // log-spaced grid hits t = 4 in the middle; f there is 9/4
    assert!((rows[2][0] - 4.0).abs() < 1e-12);
    assert!((rows[2][1] - 2.25).abs() < 1e-12);
}

#[test]
fn loewner_pass_and_violation_exit_codes() {
    let out = qig(&[
        "monotone",
        "--f",
        "vn",
        "--test",
        "loewner",
        "--resolution",
        "100x50",
    ]);
    assert_eq!(exit_code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["verdict"], "pass");

    let out = qig(&[
        "monotone",
        "--f",
        "exp-scheme:2",
        "--test",
        "loewner",
        "--region",
        "-1.2,-0.8,0,0.2",
        "--resolution",
        "81x80",
    ]);
    assert_eq!(exit_code(&out), 2);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["verdict"], "violation");
    assert!(!v["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn matrix_control_finds_the_classic_violation() {
    let out = qig(&[
        "monotone",
        "--f",
        "square-control",
        "--test",
        "matrix",
        "--samples",
        "1000",
        "--seed",
        "7",
    ]);
    assert_eq!(exit_code(&out), 2);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["verdict"], "violation");
    assert_eq!(v["seed"], 7);
}

#[test]
fn randomized_search_without_witness_is_inconclusive_for_known_failures() {
    // the exponential-scheme function fails the half-plane criterion, so a
    // clean randomized search must not claim a pass; results are
    // deterministic run to run
    let args = [
        "monotone",
        "--f",
        "exp-scheme:5",
        "--test",
        "matrix",
        "--samples",
        "25",
        "--seed",
        "1",
    ];
    let out1 = qig(&args);
    let out2 = qig(&args);
    assert_eq!(stdout(&out1), stdout(&out2));
    assert_eq!(exit_code(&out1), exit_code(&out2));
    let v: Value = serde_json::from_str(&stdout(&out1)).unwrap();
    match exit_code(&out1) {
        2 => assert_eq!(v["verdict"], "violation"),
        3 => assert_eq!(v["verdict"], "inconclusive"),
        other => panic!("unexpected exit {other}"),
    }
}

#[test]
fn scheme_ode_negation_case() {
    let dir = std::env::temp_dir();
    let sol_path = dir.join("qig_cli_negation.csv");
    let rec_path = dir.join("qig_cli_negation_verify.json");
    let out = qig(&[
        "scheme-ode",
        "--f",
        "power:0.5",
        "--h",
        "power:0",
        "--w0",
        "0.05",
        "--wt0",
        "-0.05",
        "--branch",
        "-1",
        "--output",
        sol_path.to_str().unwrap(),
        "--verify-output",
        rec_path.to_str().unwrap(),
    ]);
    assert_eq!(
        exit_code(&out),
        0,
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let (header, rows) = parse_csv(&std::fs::read_to_string(&sol_path).unwrap());
    assert_eq!(header, vec!["w", "wt", "dwt_dw", "residual"]);
    for row in &rows {
        assert!(
            (row[1] + row[0]).abs() < 1e-8,
            "w~ = -w violated at {}",
            row[0]
        );
    }
    let rec: Value = serde_json::from_str(&std::fs::read_to_string(&rec_path).unwrap()).unwrap();
    assert!(rec["ode_residual_max"].as_f64().unwrap() < 1e-8);
    assert!(rec["factorization_residual_max"].as_f64().unwrap() < 1e-8);
}

#[test]
fn scheme_ode_auto_seed_recovers_the_exponential_map() {
    let out = qig(&[
        "scheme-ode",
        "--f",
        "vn",
        "--h",
        "exp-scheme:2",
        "--w0",
        "0.1",
        "--wt0",
        "auto",
        "--branch",
        "-1",
        "--range",
        "0.1,0.9",
    ]);
    assert_eq!(
        exit_code(&out),
        0,
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let (_, rows) = parse_csv(&stdout(&out));
    for row in &rows {
        let (w, wt) = (row[0], row[1]);
        assert!((wt + w.tanh()).abs() < 1e-7, "deviation at w = {w}");
    }
}

#[test]
fn scheme_ode_identity_curve() {
    let out = qig(&[
        "scheme-ode",
        "--f",
        "vn",
        "--h",
        "vn",
        "--w0",
        "0.1",
        "--wt0",
        "0.1",
        "--branch",
        "+1",
        "--range",
        "0.1,0.9",
    ]);
    assert_eq!(exit_code(&out), 0);
    let (_, rows) = parse_csv(&stdout(&out));
    for row in &rows {
        assert!((row[1] - row[0]).abs() < 1e-9);
    }
}

#[test]
fn verify_all_single_criterion_and_full_suite() {
    let out = qig(&["verify-all", "--only", "petz-consistency"]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("petz-consistency"));
    assert!(stdout(&out).contains("1/1 criteria passed"));

    let out = qig(&["verify-all", "--seed", "43"]);
    assert_eq!(exit_code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("15/15 criteria passed"));
}

#[test]
fn usage_errors_exit_1() {
    let out = qig(&["metric"]); // missing --f
    assert_eq!(exit_code(&out), 1);
    let out = qig(&["monotone", "--f", "nonsense", "--test", "loewner"]);
    assert_eq!(exit_code(&out), 1);
    let out = qig(&["verify-all", "--only", "not-a-criterion"]);
    assert_eq!(exit_code(&out), 1);
}

#[test]
fn csv_cells_carry_full_precision() {
    let out = qig(&[
        "metric", "--f", "vn", "--grid", "3", "--w-min", "0.1", "--w-max", "0.3",
    ]);
    let text = stdout(&out);
    // 17 significant digits in scientific notation
    for line in text.lines().skip(1) {
        for cell in line.split(',') {
            assert!(cell.contains('e'), "cell '{cell}' not scientific");
            let mantissa = cell.split('e').next().unwrap().replace(['-', '.'], "");
            assert!(mantissa.len() >= 17, "cell '{cell}' too short");
        }
    }
}

#[test]
fn seed_env_var_is_honored() {
    let out = Command::new(env!("CARGO_BIN_EXE_qig"))
        .args(["monotone", "--f", "vn", "--test", "cptp", "--samples", "50"])
        .env("QIG_SEED", "777")
        .output()
        .expect("binary runs");
    assert_eq!(exit_code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["seed"], 777);
}
