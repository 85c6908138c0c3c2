use std::fs;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stickslip")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

/// Data rows (manifest comments and header stripped) split into fields.
fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn column(text: &str, name: &str) -> usize {
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    header.split(',').position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"))
}

#[test]
fn classify_prints_region() {
    let o = run(&["classify", "--a-minus", "1", "--a-plus", "-1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "attracting-sliding");
    assert_eq!(stdout(&run(&["classify", "--a-minus", "1", "--a-plus", "1"])).trim(), "crossing");
    assert_eq!(run(&["classify", "--a-minus", "x", "--a-plus", "1"]).status.code(), Some(2));
}

#[test]
fn escape_rows_report_the_stokes_multiplier() {
    let base = ["escape", "--preset", "cubic-friction", "--mu", "3", "--eps", "0.01", "--r", "0.1", "--kappa", "0.05"];
    let o = run(&[&base[..], &["--z0", "-1"]].concat());
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(rows(&text)[0][column(&text, "S")], "0");
    let o = run(&[&base[..], &["--z0", "-0.5"]].concat());
    let text = stdout(&o);
    assert_eq!(rows(&text)[0][column(&text, "S")], "1");
    assert_eq!(run(&[&base[..], &["--z0", "0.5"]].concat()).status.code(), Some(3));
}

#[test]
fn escape_column_selection() {
    let base = ["escape", "--a-minus", "2", "--a-plus", "1", "--kappa", "0.1"];
    let exact = stdout(&run(&[&base[..], &["--exact-only"]].concat()));
    assert!(exact.contains("T_exact") && !exact.contains("T_asym"));
    let asym = stdout(&run(&[&base[..], &["--asym-only"]].concat()));
    assert!(asym.contains("T_asym") && !asym.contains("T_exact"));
    let both = stdout(&run(&base));
    let t: f64 = rows(&both)[0][column(&both, "T_exact")].parse().unwrap();
    assert!(t > 0.0);
    // numbers carry 17 significant digits
    assert!(rows(&both)[0][column(&both, "T_exact")].split('e').next().unwrap().len() >= 18);
}

#[test]
fn polynomial_interior_is_accepted() {
    let o = run(&["escape", "--A-poly", "1.5,-4,0,3", "--kappa", "0.05"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert_eq!(rows(&text)[0][column(&text, "S")], "1");
    let bad = run(&["escape", "--A-poly", "1,1", "--a-minus", "5", "--a-plus", "2"]);
    assert_eq!(bad.status.code(), Some(3));
}

#[test]
fn occupancy_summary_and_density() {
    let o = run(&["occupancy", "--a-minus", "1", "--a-plus", "-1", "--kappa", "1", "--eps", "0.01", "--r", "0.1"]);
    let text = stdout(&o);
    let p: f64 = rows(&text)[0][column(&text, "P_exact")].parse().unwrap();
    assert!((p - 0.02).abs() < 0.002);
    let d = run(&["occupancy", "--a-minus", "1", "--a-plus", "-1", "--kappa", "0.1", "--density"]);
    assert_eq!(rows(&stdout(&d)).len(), 401);
    assert_eq!(run(&["occupancy", "--a-minus", "1", "--a-plus", "1"]).status.code(), Some(3));
}

#[test]
fn mc_is_deterministic_and_checks_mode() {
    let args = ["mc", "--mode", "escape", "--a-minus", "1", "--a-plus", "1", "--kappa", "0.1", "--paths", "2000", "--seed", "5"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert_eq!(rows(&text)[0][column(&text, "within_ci")], "true");
    let bad = run(&["mc", "--mode", "occupancy", "--a-minus", "1", "--a-plus", "1", "--paths", "10"]);
    assert_eq!(bad.status.code(), Some(3));
}

#[test]
fn friction_scan_orders_rows_and_flags_empty_results() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scan.csv");
    let o = run(&["friction-scan", "--n", "20", "--kappa", "0.01,0.02,0.05,0.1", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.lines().any(|l| l == "z0,kappa,mu,S,T_exact,T_asym,log10_T_exact,log10_T_asym,well_depth,status"));
    let body = rows(&text);
    assert_eq!(body.len(), 80);
    // inside the well, less noise means a longer escape
    let te = column(&text, "T_exact");
    for chunk in body.chunks(4) {
        if chunk[0][column(&text, "S")] == "1" {
            let t: Vec<f64> = chunk.iter().map(|r| r[te].parse().unwrap()).collect();
            assert!(t.windows(2).all(|w| w[0] > w[1]), "{t:?}");
        }
    }
    let manifest = fs::read_to_string(dir.path().join("scan.csv.manifest")).unwrap();
    assert!(manifest.contains("wall_clock_s"));

    let o = run(&["friction-scan", "--z0-min", "0.1", "--z0-max", "0.5", "--n", "3"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn scan_output_is_reproducible() {
    let args = ["friction-scan", "--mu", "0.5", "--n", "15", "--kappa", "0.02,0.1"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let ta = column(&text, "T_asym");
    for chunk in rows(&text).chunks(2) {
        assert_eq!(chunk[0][ta], chunk[1][ta]);
    }
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# friction preset\npreset = cubic-friction\nz0 = -0.5\nkappa = 0.05\nexact-only = true\n").unwrap();
    let o = run(&["--config", cfg.to_str().unwrap(), "escape"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert_eq!(rows(&text)[0][column(&text, "S")], "1");
    assert!(!text.contains("T_asym"));
    let o = run(&["--config", cfg.to_str().unwrap(), "escape", "--z0", "-1"]);
    let text = stdout(&o);
    assert_eq!(rows(&text)[0][column(&text, "S")], "0");
}

#[test]
fn version_prints() {
    let o = run(&["version"]);
    assert!(stdout(&o).starts_with("stickslip "));
}
