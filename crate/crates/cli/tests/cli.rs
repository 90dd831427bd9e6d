use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cosmoqsim"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap()
}

#[test]
fn default_sweep_columns() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    stdout(&run(&["sweep", "--out", path.to_str().unwrap()]));
    let (header, rows) = parse_csv(&fs::read_to_string(&path).unwrap());
    assert_eq!(header.join(","), cosmoqsim_cli::HEADER);
    assert_eq!(rows.len(), 41);
    let c = |n| column(&header, n);
    for r in &rows {
        // 12 significant digits: half an ulp of the printed mantissa
        assert!((r[c("rho")] - 10f64.powf(r[c("x")])).abs() <= 5e-12 * r[c("rho")]);
        assert!(r[c("n_trunc")] - 1e-9 <= r[c("n_ideal")] && r[c("n_ideal")] <= r[c("n_full")] + 1e-9);
        for n in ["n_full", "n_trunc", "n_ideal", "n_noisy", "n_zne"] {
            assert!(r[c(n)] >= -1e-9, "{n}");
        }
        for f in ["f_ideal", "f_noisy", "f_zne", "f_first_order"] {
            assert!((-1e-9..=1.0 + 1e-9).contains(&r[c(f)]), "{f} = {}", r[c(f)]);
        }
    }
    let mid = &rows[20];
    assert_eq!(mid[c("x")], 0.0);
    let last = &rows[40];
    assert!((last[c("n_trunc")] - 0.103).abs() < 2e-3);
    assert!((last[c("n_full")] - 0.130).abs() < 2e-3);
}

#[test]
fn in_memory_rows_hold_exact_rho() {
    let settings = cosmoqsim_cli::Settings {
        points: 9,
        ..Default::default()
    };
    let rows = cosmoqsim_cli::commands::sweep_rows(&settings).unwrap();
    for r in rows {
        assert!((r.rho - 10f64.powf(r.x)).abs() <= 1e-12 * r.rho);
    }
}

#[test]
fn frozen_time_creates_nothing() {
    let out = stdout(&run(&["sweep", "--time", "0", "--points", "5"]));
    let (header, rows) = parse_csv(&out);
    for r in &rows {
        for n in ["n_full", "n_trunc", "n_ideal"] {
            assert!(r[column(&header, n)].abs() < 1e-10);
        }
        assert!((r[column(&header, "f_ideal")] - 1.0).abs() < 1e-9);
    }
    let out = stdout(&run(&["sweep", "--time", "0", "--points", "5", "--eps1", "0", "--eps2", "0"]));
    let (header, rows) = parse_csv(&out);
    for r in &rows {
        for n in ["n_full", "n_trunc", "n_ideal", "n_noisy", "n_zne"] {
            assert!(r[column(&header, n)].abs() < 1e-10, "{n}");
        }
        for f in ["f_ideal", "f_noisy", "f_zne", "f_first_order"] {
            assert!((r[column(&header, f)] - 1.0).abs() < 1e-9, "{f}");
        }
    }
}

#[test]
fn invalid_metric_exits_nonzero_without_output() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["sweep", "--A", "0.5", "--B", "0.5"],
        vec!["sweep", "--B", "-2"],
        vec!["scale-factor", "--rhos", "1,-1"],
        vec!["export-qasm", "--A", "0.1"],
    ] {
        let path = dir.path().join("never.txt");
        let mut full = args.clone();
        full.extend(["--out", path.to_str().unwrap()]);
        let out = run(&full);
        assert!(!out.status.success(), "{args:?}");
        assert!(!path.exists(), "{args:?}");
    }
}

#[test]
fn scale_factor_table() {
    let out = stdout(&run(&["scale-factor"]));
    let (header, rows) = parse_csv(&out);
    assert_eq!(header, ["eta", "C_rho=0.5", "C_rho=1", "C_rho=2"]);
    assert_eq!(rows.len(), 201);
    assert_eq!(rows[0][0], -10.0);
    assert!((rows[0][3] - 1.0).abs() < 1e-8);
    let origin = rows.iter().find(|r| r[0] == 0.0).unwrap();
    assert!(origin[1..].iter().all(|&c| c == 1.5));
    let half = rows.iter().find(|r| (r[0] - 0.5).abs() < 1e-12).unwrap();
    assert!(half[1] < half[2] && half[2] < half[3]);
}

#[test]
fn export_qasm_summary_and_zero_coupling() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.qasm");
    let summary = stdout(&run(&["export-qasm", "--out", path.to_str().unwrap()]));
    assert!(summary.contains("two-qubit gates: 96"), "{summary}");
    let qasm = fs::read_to_string(&path).unwrap();
    assert!(qasm.starts_with("OPENQASM 2.0;"));

    let out = run(&["export-qasm", "--B", "0"]);
    let qasm = stdout(&out);
    assert!(String::from_utf8_lossy(&out.stderr).contains("two-qubit gates: 96"));
    let rotations: Vec<&str> = qasm.lines().filter(|l| l.starts_with("rx(")).collect();
    assert_eq!(rotations.len(), 16);
    for line in rotations {
        let angle: f64 = line[3..line.find(')').unwrap()].parse().unwrap();
        assert_eq!(angle, 0.0, "{line}");
    }
}

#[test]
fn error_estimate_report() {
    let text = stdout(&run(&["error-estimate"]));
    assert!(text.contains("two-qubit gates: 96"));
    assert!(text.contains("one-qubit gates: 146"));
    assert!(text.contains("error: 0.507"), "{text}");
    assert!(text.contains("error 0.524"), "{text}");
    let zero = stdout(&run(&["error-estimate", "--eps1", "0", "--eps2", "0"]));
    assert!(zero.contains("survival factor: 1.000000"));
    assert!(zero.contains("error: 0.000000"));
}

fn write_config(dir: &Path, body: &str) -> String {
    let p = dir.join("run.conf");
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "# short grid\npoints = 3\nx-min = -1\nx-max = 1\nA = 0.2\n");
    // A = 0.2 in the file is invalid; the flag fixes it
    assert!(!run(&["sweep", "--config", &cfg]).status.success());
    let out = stdout(&run(&["sweep", "--config", &cfg, "--A", "1.5"]));
    let (_, rows) = parse_csv(&out);
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0][0], -1.0);
    assert_eq!(rows[2][0], 1.0);

    let bad = write_config(dir.path(), "warp = 9\n");
    assert!(!run(&["sweep", "--config", &bad]).status.success());
}

#[test]
fn sampled_sweep_is_seeded() {
    let args = ["sweep", "--points", "4", "--shots", "2000", "--seed", "11"];
    let a = stdout(&run(&args));
    let b = stdout(&run(&args));
    assert_eq!(a, b);
    let c = stdout(&run(&["sweep", "--points", "4", "--shots", "2000", "--seed", "12"]));
    assert_ne!(a, c);
    let exact = stdout(&run(&["sweep", "--points", "4"]));
    let (h, sampled) = parse_csv(&a);
    let (_, exact) = parse_csv(&exact);
    let n = column(&h, "n_noisy");
    for (s, e) in sampled.iter().zip(&exact) {
        assert!((s[n] - e[n]).abs() < 0.05);
        assert_eq!(s[column(&h, "n_ideal")], e[column(&h, "n_ideal")]);
    }
}

#[test]
fn zne_method_flag() {
    let out = stdout(&run(&["sweep", "--points", "2", "--zne-method", "exponential"]));
    let rich = stdout(&run(&["sweep", "--points", "2"]));
    assert_ne!(out, rich);
    assert!(!run(&["sweep", "--zne-method", "cubic"]).status.success());
    assert!(!run(&["sweep", "--zne-scales", "1,2,5"]).status.success());
}
