use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::path::Path;
use std::process::Command;

use geophase_cli::run;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn geophase(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("geophase").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Run {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn fields(stdout: &str) -> HashMap<String, String> {
    stdout
        .lines()
        .filter_map(|l| l.split_once(" = "))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

fn num(map: &HashMap<String, String>, key: &str) -> f64 {
    map[key].parse().unwrap_or_else(|_| panic!("{key} = {}", map[key]))
}

fn read_csv(path: &Path) -> Vec<Vec<String>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn s(x: f64) -> String {
    x.to_string()
}

#[test]
fn single_examples() {
    let r = geophase(&["single", "--rho", "1", "--phi", "0", "--omega", "1", "--tau", "6.283185307179586"]);
    assert_eq!(r.code, 0);
    let f = fields(&r.stdout);
    assert_eq!(f["gamma"], "6.28318530718");
    assert_eq!(f["gamma_mod_2pi"], "0");
    assert_eq!(f["overlap_abs"], "1");

    let f = fields(&geophase(&["single", "--rho", "0", "--omega", "1", "--tau", "5"]).stdout);
    assert_eq!(f["gamma"], "0");

    let f = fields(&geophase(&["single", "--rho", "1", "--omega", "1", "--tau", "3.141592653589793"]).stdout);
    assert_eq!(f["gamma"], "3.14159265359");
    assert_eq!(f["chi"], "-1.57079632679");
    assert_eq!(f["delta"], "-4.71238898038");
}

#[test]
fn pair_at_zero_time_is_trivial() {
    let r = geophase(&[
        "pair", "--rho-alpha", "0.8", "--phi-alpha", "0.3", "--rho-beta", "0.6", "--phi-beta", "1.7",
        "--rho-mu", "0.7", "--rho-nu", "0.9", "--theta", "1.1", "--varphi", "0.6",
        "--omega1", "1.3", "--omega2", "0.7", "--tau", "0",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let f = fields(&r.stdout);
    for key in ["chi", "delta", "gamma", "gamma_mod_2pi"] {
        assert_eq!(f[key], "0", "{key}");
    }
    assert_eq!(f["overlap_abs"], "1");
}

#[test]
fn product_pair_adds_single_modes() {
    let pair = fields(
        &geophase(&[
            "pair", "--rho-alpha", "1.2", "--phi-alpha", "0.4", "--rho-mu", "0.5", "--phi-mu", "-1",
            "--rho-beta", "0.3", "--theta", "0", "--omega1", "1.1", "--omega2", "2.3", "--tau", "1.7",
        ])
        .stdout,
    );
    let one = fields(&geophase(&["single", "--rho", "1.2", "--phi", "0.4", "--omega", "1.1", "--tau", "1.7"]).stdout);
    let two = fields(&geophase(&["single", "--rho", "0.5", "--phi", "-1", "--omega", "2.3", "--tau", "1.7"]).stdout);
    let sum = num(&one, "gamma") + num(&two, "gamma");
    let d = geophase::circle_distance(num(&pair, "gamma"), sum).unwrap();
    assert!(d < 1e-10, "{d}");
}

#[test]
fn antipodal_pair_reports_both_forms() {
    let r = geophase(&[
        "pair", "--antipodal", "--rho-alpha", "0.5", "--rho-mu", "0.5", "--theta", &s(FRAC_PI_2),
        "--omega1", &s(FRAC_PI_2), "--omega2", &s(PI / 3.0), "--tau", "1",
    ]);
    assert_eq!(r.code, 0);
    let f = fields(&r.stdout);
    assert_eq!(f["gamma"], "0.239915131255");
    assert_eq!(f["gamma_antipodal"], "0.239915131255");
    assert!(num(&f, "circle_distance") < 1e-10);
    assert_eq!(f["norm_squared"], "1.36787944117");

    // a general spec prints neither
    let r = geophase(&["pair", "--rho-alpha", "0.5", "--omega1", "1", "--omega2", "1", "--tau", "1"]);
    assert!(!fields(&r.stdout).contains_key("gamma_antipodal"));
}

#[test]
fn exit_codes() {
    // usage
    assert_eq!(geophase(&["single", "--rho", "1", "--omega", "1"]).code, 2);
    assert_eq!(geophase(&["single", "--rho", "x", "--omega", "1", "--tau", "1"]).code, 2);
    assert_eq!(geophase(&["single", "--rho", "-1", "--omega", "1", "--tau", "1"]).code, 2);
    assert_eq!(geophase(&["single", "--rho", "1", "--omega", "0", "--tau", "1"]).code, 2);
    assert_eq!(geophase(&["pair", "--theta", "4", "--omega1", "1", "--omega2", "1", "--tau", "1"]).code, 2);
    assert_eq!(geophase(&["frobnicate"]).code, 2);
    assert_eq!(geophase(&[]).code, 2);
    assert_eq!(geophase(&["verify", "--samples", "0"]).code, 2);

    // help and version
    let r = geophase(&["--help"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("sweep"));
    let r = geophase(&["--version"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.starts_with("geophase "));

    // degenerate: identical branches with opposite phase cancel
    let r = geophase(&[
        "pair", "--rho-alpha", "1", "--rho-beta", "1", "--theta", &s(FRAC_PI_2), "--varphi", &s(PI),
        "--omega1", "1", "--omega2", "1", "--tau", "1",
    ]);
    assert_eq!(r.code, 3);
    assert!(r.stderr.contains("degenerate"));

    // orthogonal endpoints: |⟨α|−α⟩| = e^{−2ρ²}
    let r = geophase(&["pair", "--rho-alpha", "5", "--omega1", "1", "--omega2", "1", "--tau", &s(PI)]);
    assert_eq!(r.code, 4);
    assert!(r.stderr.contains("total phase undefined"));
    let f = fields(&r.stdout);
    assert!(f.contains_key("delta") && !f.contains_key("gamma"));
}

#[test]
fn verify_failure_path_prints_reproduction() {
    let r = geophase(&["verify", "--samples", "1", "--seed", "7", "--tolerance", "1e-16"]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("result = FAIL"));
    let line = r.stdout.lines().find(|l| l.starts_with("reproduce: ")).unwrap();
    let args: Vec<&str> = line.trim_start_matches("reproduce: geophase ").split(' ').collect();
    assert_eq!(geophase(&args).code, 0);
}

#[test]
fn verify_is_deterministic() {
    let a = geophase(&["verify", "--samples", "1", "--seed", "7"]);
    let b = geophase(&["verify", "--samples", "1", "--seed", "7"]);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    assert!(a.stdout.starts_with("generator = splitmix64\nseed = 7\n"));
}

#[test]
fn sweep_tau_single_target() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tau.csv");
    let r = geophase(&[
        "sweep", "--target", "single", "--param", "tau", "--start", "0", "--end", &s(TAU), "--steps", "3",
        "--rho-alpha", "1", "--omega1", "1", "--unwrap", "--output", path.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let rows = read_csv(&path);
    assert_eq!(rows[0].join(","), "swept_value,chi,delta,gamma,gamma_mod_2pi,overlap_abs,gamma_unwrapped");
    let gamma: Vec<&str> = rows[1..].iter().map(|r| r[3].as_str()).collect();
    assert_eq!(gamma, ["0", "3.14159265359", "6.28318530718"]);
    let unwrapped: Vec<&str> = rows[1..].iter().map(|r| r[6].as_str()).collect();
    assert_eq!(unwrapped, gamma);
}

#[test]
fn sweep_theta_endpoints_coincide() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("theta.csv");
    let r = geophase(&[
        "sweep", "--target", "antipodal", "--param", "theta", "--start", "0", "--end", &s(PI), "--steps", "2",
        "--rho-alpha", "0.9", "--phi-alpha", "0.2", "--rho-mu", "0.6", "--omega1", "1.3", "--omega2", "0.4",
        "--tau", "2", "--output", path.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0);
    let rows = read_csv(&path);
    assert_eq!(rows.len(), 3);
    let (g0, g1): (f64, f64) = (rows[1][3].parse().unwrap(), rows[2][3].parse().unwrap());
    assert!(geophase::circle_distance(g0, g1).unwrap() < 1e-10);
}

#[test]
fn sweep_varphi_is_symmetric_about_pi() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("varphi.csv");
    let r = geophase(&[
        "sweep", "--target", "antipodal", "--param", "varphi", "--start", "0", "--end", &s(TAU), "--steps", "9",
        "--theta", &s(FRAC_PI_2), "--rho-alpha", "0.7", "--rho-mu", "0.4", "--omega1", "1", "--omega2", "2",
        "--tau", "1.5", "--output", path.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0);
    let g: Vec<f64> = read_csv(&path)[1..].iter().map(|r| r[3].parse().unwrap()).collect();
    for i in 0..g.len() {
        assert!((g[i] - g[g.len() - 1 - i]).abs() < 1e-10, "{i}: {} vs {}", g[i], g[g.len() - 1 - i]);
    }
}

#[test]
fn sweep_rows_match_point_commands() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pair.csv");
    let state = [
        "--rho-alpha", "0.8", "--phi-alpha", "0.3", "--rho-beta", "0.6", "--phi-beta", "1.7", "--rho-mu", "0.7",
        "--phi-mu", "-0.4", "--rho-nu", "0.9", "--phi-nu", "2.2", "--theta", "1.1", "--varphi", "0.6",
        "--omega1", "1.3", "--omega2", "0.7",
    ];
    let mut args = vec!["sweep", "--target", "pair", "--param", "tau", "--start", "0", "--end", "4", "--steps", "7"];
    args.extend(state);
    args.extend(["--output", path.to_str().unwrap()]);
    assert_eq!(geophase(&args).code, 0);
    let rows = read_csv(&path);
    let header = rows[0].clone();
    for (i, row) in rows[1..].iter().enumerate() {
        let tau = s(4.0 * i as f64 / 6.0);
        let tau = if i == 6 { "4".to_string() } else { tau };
        let mut point = vec!["pair"];
        point.extend(state);
        point.extend(["--tau", &tau]);
        let f = fields(&geophase(&point).stdout);
        for (key, value) in header.iter().zip(row).skip(1) {
            assert_eq!(&f[key], value, "row {i}, {key}");
        }
    }

    let path = dir.path().join("single.csv");
    let r = geophase(&[
        "sweep", "--target", "single", "--param", "rho_alpha", "--start", "0", "--end", "1.5", "--steps", "4",
        "--phi-alpha", "0.3", "--omega1", "1.7", "--tau", "2.1", "--output", path.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0);
    let rows = read_csv(&path);
    for row in &rows[1..] {
        let f = fields(&geophase(&["single", "--rho", &row[0], "--phi", "0.3", "--omega", "1.7", "--tau", "2.1"]).stdout);
        for (key, value) in rows[0].iter().zip(row).skip(1) {
            assert_eq!(&f[key], value);
        }
    }
}

#[test]
fn sweep_undefined_points_leave_gaps() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gap.csv");
    let r = geophase(&[
        "sweep", "--target", "pair", "--param", "tau", "--start", "0", "--end", &s(TAU), "--steps", "3",
        "--rho-alpha", "5", "--omega1", "1", "--omega2", "1", "--unwrap", "--output", path.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0);
    assert!(r.stderr.contains("warning") && r.stderr.contains("total phase undefined"));
    let rows = read_csv(&path);
    let mid = &rows[2];
    assert_eq!(mid.len(), 7);
    assert_eq!((mid[1].as_str(), mid[3].as_str(), mid[4].as_str(), mid[6].as_str()), ("", "", "", ""));
    assert!(!mid[2].is_empty() && !mid[5].is_empty());
    assert!(!rows[3][6].is_empty());
}

#[test]
fn sweep_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let out = out.to_str().unwrap();
    let base = ["sweep", "--target", "single", "--param", "tau", "--rho-alpha", "1"];
    let with = |extra: &[&str]| {
        let mut a = base.to_vec();
        a.extend_from_slice(extra);
        geophase(&a).code
    };
    assert_eq!(with(&["--start", "0", "--end", "1", "--steps", "1", "--output", out]), 2);
    assert_eq!(with(&["--start", "2", "--end", "1", "--steps", "3", "--output", out]), 2);
    assert_eq!(with(&["--start", "-1", "--end", "1", "--steps", "3", "--output", out]), 2);
    let missing = dir.path().join("no/such/dir.csv");
    assert_eq!(with(&["--start", "0", "--end", "1", "--steps", "3", "--output", missing.to_str().unwrap()]), 2);
    let r = geophase(&[
        "sweep", "--target", "single", "--param", "theta", "--start", "0", "--end", "1", "--steps", "2",
        "--output", out,
    ]);
    assert_eq!(r.code, 2);
}

#[test]
fn output_is_independent_of_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_geophase");
    let mut csv = Vec::new();
    for threads in ["1", "4"] {
        let path = dir.path().join(format!("t{threads}.csv"));
        let status = Command::new(bin)
            .env("RAYON_NUM_THREADS", threads)
            .args(["sweep", "--target", "antipodal", "--param", "tau", "--start", "0", "--end", "12", "--steps", "101"])
            .args(["--rho-alpha", "1.1", "--rho-mu", "0.3", "--theta", "1", "--varphi", "0.2", "--unwrap"])
            .args(["--output", path.to_str().unwrap()])
            .output()
            .unwrap()
            .status;
        assert!(status.success());
        csv.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(csv[0], csv[1]);

    let reports: Vec<Vec<u8>> = ["1", "3"]
        .iter()
        .map(|t| {
            Command::new(bin)
                .env("RAYON_NUM_THREADS", t)
                .args(["verify", "--samples", "3", "--seed", "11"])
                .output()
                .unwrap()
                .stdout
        })
        .collect();
    assert_eq!(reports[0], reports[1]);
}
