use std::path::Path;
use std::process::{Command, Output};

use fldma::config::Config;
use fldma::output::fmt_num;

fn fldma(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fldma"))
        .args(args)
        .env_remove("FLDMA_WORKERS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

const SMALL: &[&str] = &[
    "--set",
    "array.num_antennas=16",
    "--set",
    "scenario.num_ues=4",
    "--set",
    "scenario.r_max_m=2000",
    "--trials",
    "12",
];

#[test]
fn exit_code_contract() {
    assert_eq!(fldma(&["ici-check"]).status.code(), Some(0));
    let o = fldma(&["simulate", "--set", "scenario.num_uez=3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("num_uez"));
    assert_eq!(fldma(&["preset", "fig99"]).status.code(), Some(1));
    assert_eq!(fldma(&["--config", "/definitely/missing.toml", "bounds"]).status.code(), Some(3));
    let o = fldma(&["simulate", "--set", "scenario.r_max_m=6000"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
    let mut args = SMALL.to_vec();
    args.extend(["simulate", "--output", "/no/such/dir/out.csv"]);
    assert_eq!(fldma(&args).status.code(), Some(3));
}

#[test]
fn csv_has_versioned_header_and_config_echo() {
    let o = fldma(&["ici-check", "--set", "ici.rho_values=[0.02, 0.05]"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# fldma schema=ici-check version=1"));
    let echo: String = text
        .lines()
        .filter_map(|l| l.strip_prefix("# "))
        .skip(1)
        .map(|l| format!("{l}\n"))
        .collect();
    let cfg = Config::resolve_str(Some(&echo), &[]).unwrap();
    assert_eq!(cfg.ici.rho_values, vec![0.02, 0.05]);
}

#[test]
fn emitted_numbers_round_trip() {
    let o = fldma(&["ici-check"]);
    let (header, rows) = parse_csv(&stdout(&o));
    assert_eq!(header, ["rho_max", "frobenius_error", "max_alpha_dev", "max_beta"]);
    assert_eq!(rows.len(), 3);
    for row in &rows {
        for cell in row {
            assert!(!cell.contains('e') && !cell.contains(','), "{cell}");
            let v: f64 = cell.parse().unwrap();
            assert_eq!(&fmt_num(v), cell, "re-formatting changes {cell}");
        }
    }
    // strictly increasing error with the offset ratio
    let err: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    assert!(err[0] < err[1] && err[1] < err[2]);
}

#[test]
fn results_do_not_depend_on_worker_count() {
    let run = |workers: &str| {
        let mut args = SMALL.to_vec();
        args.extend(["simulate", "--workers", workers]);
        let o = fldma(&args);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        stdout(&o)
    };
    let one = run("1");
    assert_eq!(one, run("4"));
    let (header, rows) = parse_csv(&one);
    assert_eq!(&header[..6], ["sweep_value", "scheme", "mean_se", "stderr", "ci95", "bound"]);
    assert_eq!(rows.len(), 4);
}

#[test]
fn worker_count_from_environment() {
    let mut args = SMALL.to_vec();
    args.push("simulate");
    let env = Command::new(env!("CARGO_BIN_EXE_fldma"))
        .args(&args)
        .env("FLDMA_WORKERS", "3")
        .output()
        .unwrap();
    assert!(env.status.success());
    assert_eq!(stdout(&env), stdout(&fldma(&args)));
    let bad = Command::new(env!("CARGO_BIN_EXE_fldma"))
        .args(&args)
        .env("FLDMA_WORKERS", "many")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn single_trial_is_deterministic() {
    let mut args = SMALL.to_vec();
    args.extend(["simulate", "--trials", "1"]);
    assert_eq!(stdout(&fldma(&args)), stdout(&fldma(&args)));
}

#[test]
fn bounds_match_core_functions() {
    let o = fldma(&[
        "bounds",
        "--set",
        "sweep.parameter=\"snr_db\"",
        "--set",
        "sweep.values=[0, 30]",
        "--set",
        "scenario.num_ues=2",
        "--set",
        "offsets.rho_max=10",
    ]);
    let (_, rows) = parse_csv(&stdout(&o));
    let expect = fldma_core::experiments::two_ue_bound(1000.0, 128, 512, 10.0).unwrap();
    let got: f64 = rows[1][5].parse().unwrap();
    assert!((got - expect).abs() <= 1e-11 * expect);
}

#[test]
fn config_file_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        "[array]\nnum_antennas = 8\n\n[beampattern]\ndistance_points = 3\nangle_points = 5\n",
    )
    .unwrap();
    let out = dir.path().join("bp.csv");
    let o = fldma(&[
        "beampattern",
        "--config",
        cfg.to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(Path::new(&out).exists());
    let (header, rows) = parse_csv(&std::fs::read_to_string(&out).unwrap());
    assert_eq!(header, ["distance_m", "angle_deg", "magnitude"]);
    assert_eq!(rows.len(), 15);
    // the focus (1500 m, 0°) is on the grid and has unit correlation
    let focus = rows.iter().find(|r| r[0] == "1500" && r[1] == "0").unwrap();
    assert_eq!(focus[2], "1");
}

#[test]
fn zero_plan_beampattern_is_distance_blind() {
    let o = fldma(&[
        "beampattern",
        "--set",
        "offsets.scheme=\"zero\"",
        "--set",
        "beampattern.distance_points=4",
        "--set",
        "beampattern.angle_points=7",
    ]);
    let (_, rows) = parse_csv(&stdout(&o));
    for j in 0..7 {
        let col: Vec<&String> = rows.iter().filter(|r| r[1] == rows[j][1]).map(|r| &r[2]).collect();
        assert!(col.windows(2).all(|w| w[0] == w[1]));
    }
}

#[test]
fn pretty_format_is_a_table() {
    let o = fldma(&["ici-check", "--format", "pretty"]);
    let text = stdout(&o);
    assert!(!text.starts_with('#'));
    assert_eq!(text.lines().count(), 4);
}
