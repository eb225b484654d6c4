use std::f64::consts::PI;
use std::process::Command;

use bcn_hyper::cli::{main_with, EXIT_NUMERICAL, EXIT_OK, EXIT_PARSE, EXIT_PRECONDITION};
use bcn_hyper::hyper::{phi_product, weyl_sum};
use bcn_hyper::roots::{ChamberPoint, MultiplicityBC, SpectralParam};
use num_complex::Complex64;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("bcn-hyper").chain(args.iter().copied());
    let code = main_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json_value(line: &str) -> Complex64 {
    let v: serde_json::Value = serde_json::from_str(line).unwrap();
    let get = |key: &str| v[key].to_string().parse::<f64>().unwrap();
    Complex64::new(get("re_value"), get("im_value"))
}

/// Σ_w c(wλ)Φ(wλ) averaged over a circle around λ = (3, 1), where single
/// terms have poles but the sum is entire.
fn weyl_oracle_at_integer_point() -> Complex64 {
    let k = MultiplicityBC::new(2, 1.0, 1, 0.5).unwrap();
    let t = ChamberPoint::new(vec![1.0, 0.4]).unwrap();
    let nodes = 32;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..nodes {
        let z = Complex64::from_polar(0.1, 2.0 * PI * (j as f64 + 0.5) / nodes as f64);
        let lam = SpectralParam::new(vec![3.0 + z, 1.0 + 0.5 * z]).unwrap();
        acc += weyl_sum(&k, &lam, |wl| phi_product(&k, wl, &t)).unwrap();
    }
    acc / nodes as f64
}

#[test]
fn eval_json_matches_weyl_sum_oracle() {
    let (code, out, err) = run(&[
        "eval", "--target", "F", "--n", "2", "--k", "1,1,0.5", "--lambda", "3,1", "--t", "1.0,0.4", "--format", "json",
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 1);
    let v: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
    for key in [
        "target",
        "n",
        "k_s",
        "k_m",
        "k_l",
        "t_1",
        "re_lambda_2",
        "condition_estimate",
        "degenerate_path",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    let value = json_value(lines[0]);
    let oracle = weyl_oracle_at_integer_point();
    assert!((value - oracle).norm() <= 1e-8 * oracle.norm(), "{value} vs {oracle}");
}

#[test]
fn csv_header_and_seventeen_digits() {
    let (code, out, _) = run(&[
        "eval",
        "--target",
        "F",
        "--n",
        "2",
        "--k",
        "0.8,0,0.35",
        "--lambda",
        "2.3+0.4i,1.1",
        "--t",
        "1,0.5",
    ]);
    assert_eq!(code, EXIT_OK);
    let mut lines = out.lines();
    assert_eq!(
        lines.next().unwrap(),
        "t_1,t_2,re_lambda_1,im_lambda_1,re_lambda_2,im_lambda_2,re_value,im_value,condition_estimate,degenerate_path"
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row.len(), 10);
    assert_eq!(row[3], "4.0000000000000002e-1");
    let mantissa = row[6].split('e').next().unwrap().trim_start_matches('-');
    assert_eq!(mantissa.replace('.', "").len(), 17);
}

#[test]
fn grid_is_row_major_and_deterministic() {
    let args = [
        "grid",
        "--target",
        "F",
        "--n",
        "2",
        "--k",
        "1,1,0.5",
        "--lambda-grid",
        "1.5:2.5:2,0.7:0.7:1",
        "--t-grid",
        "1:2:3,0.2:0.6:2",
    ];
    let (code, first, err) = run(&args);
    assert_eq!(code, EXIT_OK, "{err}");
    let (_, second, _) = run(&args);
    assert_eq!(first, second);
    let rows: Vec<Vec<f64>> = first
        .lines()
        .skip(1)
        .map(|l| l.split(',').take(4).map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 12);
    // λ outermost, then t_1, then t_2 fastest.
    assert_eq!(&rows[0][..3], &[1.0, 0.2, 1.5]);
    assert_eq!(&rows[1][..3], &[1.0, 0.6, 1.5]);
    assert_eq!(&rows[2][..3], &[1.5, 0.2, 1.5]);
    assert_eq!(&rows[6][..3], &[1.0, 0.2, 2.5]);
}

#[test]
fn output_file() {
    let path = std::env::temp_dir().join(format!("bcn-hyper-cli-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let (code, out, _) = run(&[
        "eval", "--target", "Phi", "--n", "2", "--k", "1,1,0.5", "--lambda", "2.3,1.1", "--t", "2,1", "--format",
        "json", "--output", p,
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(written.lines().count(), 1);
    assert!(written.contains("\"target\":\"Phi\""));
}

#[test]
fn parse_errors_exit_2() {
    for args in [
        vec![
            "eval", "--target", "F", "--n", "2", "--k", "1,1,0.5", "--lambda", "3,x", "--t", "1,0.4",
        ],
        vec![
            "eval", "--target", "G", "--n", "2", "--k", "1,1,0.5", "--lambda", "3,1", "--t", "1,0.4",
        ],
        vec![
            "eval", "--target", "F", "--n", "2", "--k", "1,1", "--lambda", "3,1", "--t", "1,0.4",
        ],
        vec!["eval", "--target", "F", "--n", "2", "--lambda", "3,1", "--t", "1,0.4"],
        vec![
            "grid",
            "--target",
            "F",
            "--n",
            "2",
            "--k",
            "1,1,0.5",
            "--lambda",
            "3,1",
            "--t-grid",
            "1:2,0.1:0.2:2",
        ],
        vec!["verify", "--suite", "no-such-suite"],
        vec!["frobnicate"],
    ] {
        let (code, _, err) = run(&args);
        assert_eq!(code, EXIT_PARSE, "{args:?}: {err}");
        assert!(!err.is_empty());
    }
}

#[test]
fn precondition_errors_exit_3() {
    for args in [
        vec![
            "eval", "--target", "F", "--n", "2", "--k", "1,1,0.5", "--lambda", "3,1", "--t", "0.4,1",
        ],
        vec![
            "eval", "--target", "F", "--n", "2", "--k", "1,2,0.5", "--lambda", "3,1", "--t", "1,0.4",
        ],
        vec![
            "eval",
            "--target",
            "F",
            "--n",
            "3",
            "--k",
            "1,1,0.5",
            "--lambda",
            "3,1",
            "--t",
            "1,0.4,0.1",
        ],
        vec![
            "eval",
            "--target",
            "F",
            "--n",
            "9",
            "--k",
            "1,1,0.5",
            "--lambda",
            "1,2,3,4,5,6,7,8,9",
            "--t",
            "9,8,7,6,5,4,3,2,1",
        ],
        vec![
            "eval", "--target", "FTheta", "--n", "2", "--k", "1,1,0.5", "--lambda", "-3,1", "--t", "1,0.4",
        ],
        vec![
            "eval", "--target", "F", "--n", "2", "--k", "0.5,1,0", "--lambda", "3,1", "--t", "1,0.4",
        ],
        vec![
            "grid",
            "--target",
            "F",
            "--n",
            "2",
            "--k",
            "1,1,0.5",
            "--lambda",
            "3,1",
            "--t-grid",
            "0.5:1.5:3,0.2:1:2",
        ],
    ] {
        let (code, _, err) = run(&args);
        assert_eq!(code, EXIT_PRECONDITION, "{args:?}: {err}");
    }
}

#[test]
fn failing_record_is_identified() {
    let (code, out, err) = run(&[
        "eval", "--target", "FTheta", "--n", "2", "--k", "1,1,0.5", "--lambda", "-3,1", "--t", "1,0.4",
    ]);
    assert_eq!(code, EXIT_PRECONDITION);
    assert_eq!(out.lines().count(), 1, "header only");
    assert!(err.contains("record 0") && err.contains("lambda"), "{err}");
}

#[test]
fn verify_suites() {
    let (code, out, err) = run(&["verify", "--suite", "rank1-reduction"]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(out.starts_with("suite,check,measured,tolerance,passed,detail"));
    assert!(out.lines().skip(1).all(|l| l.contains(",true,")));
    let (code, out, _) = run(&["verify", "--suite", "B-constant", "--n", "3", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().count(), 1);
    assert!(out.contains("\"passed\":true"));
}

#[test]
fn help_and_version_exit_0() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("verify"));
    let (code, out, _) = run(&["--version"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("bcn-hyper"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_bcn-hyper");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code().unwrap();
    assert_eq!(
        status(&["eval", "--target", "BesselBC", "--n", "2", "--k", "1,1,0.5", "--lambda", "2,1", "--t", "1,0.5"]),
        EXIT_OK
    );
    assert_eq!(status(&["eval", "--target", "F"]), EXIT_PARSE);
    assert_eq!(
        status(&["eval", "--target", "F", "--n", "2", "--k", "1,1,0.5", "--lambda", "3,1", "--t", "1,1"]),
        EXIT_PRECONDITION
    );
    assert_ne!(EXIT_NUMERICAL, EXIT_PRECONDITION);
}
