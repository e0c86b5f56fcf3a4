use std::fs;
use std::process::{Command, Output};

fn owpn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_owpn"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field(csv: &str, row: usize, name: &str) -> String {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = header.iter().position(|h| *h == name).unwrap();
    lines.nth(row).unwrap().split(',').nth(col).unwrap().to_string()
}

#[test]
fn eval_new_bound_in_nats() {
    let o = owpn(&["bound", "eval", "--bound", "owpn_new_th4", "--power", "2", "--sigma2", "1", "--oversampling", "1", "--units", "nats"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let v: f64 = field(&out, 0, "value").parse().unwrap();
    let expect = 0.5 * 2f64.ln() + std::f64::consts::TAU.ln() + 0.5 * (2.0 * (3f64.sqrt() - 1.0)).ln();
    assert!((v - expect).abs() < 1e-12);
    assert!((v - 2.37504).abs() < 1e-4);
    assert_eq!(field(&out, 0, "units"), "nats");
}

#[test]
fn eval_small_noise_regime() {
    let o = owpn(&["bound", "eval", "--bound", "wpn_th1", "--power", "100", "--sigma2", "1e-4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(field(&stdout(&o), 0, "regime"), "small_noise");
}

#[test]
fn pretty_output_is_one_line() {
    let o = owpn(&["bound", "eval", "--bound", "phase", "-P", "2", "--sigma2", "1", "--pretty"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 1);
    assert!(out.starts_with("phase:"));
}

#[test]
fn usage_errors_exit_one() {
    let missing = owpn(&["bound", "eval", "--bound", "phase", "--sigma2", "1"]);
    assert_eq!(missing.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("--power"));
    assert_eq!(owpn(&["bound", "eval", "--bound", "nope", "-P", "1", "--sigma2", "1"]).status.code(), Some(1));
    assert_eq!(owpn(&["bound", "eval", "--bound", "phase", "-P", "-1", "--sigma2", "1"]).status.code(), Some(1));
    assert_eq!(owpn(&["bound", "eval", "--bound", "phase", "-P", "1", "--sigma2", "nan"]).status.code(), Some(1));
    assert_eq!(owpn(&["bound", "eval", "--bound", "wpn_th1", "-P", "0", "--sigma2", "1"]).status.code(), Some(1));
    assert_eq!(owpn(&["bound", "eval", "--bound", "wpn_th1", "-P", "1", "--sigma2", "1", "-L", "4"]).status.code(), Some(1));
    assert_eq!(owpn(&["gdof", "--alpha", "-1"]).status.code(), Some(1));
    assert_eq!(owpn(&["immse", "verify", "--a", "1", "--b", "0"]).status.code(), Some(1));
    assert_eq!(owpn(&["simulate", "rate", "-P", "10", "--sigma2", "1", "--bins", "4"]).status.code(), Some(1));
    assert_eq!(owpn(&["simulate", "rate", "-P", "10", "--sigma2", "1", "--scale", "20"]).status.code(), Some(1));
    assert_eq!(owpn(&[]).status.code(), Some(1));
    assert_eq!(owpn(&["--help"]).status.code(), Some(0));
}

#[test]
fn sweep_cardinality_and_order() {
    let o = owpn(&["bound", "sweep", "--p-start", "10", "--p-stop", "1000", "--p-points", "3", "--sigma2", "1", "-L", "1", "4", "--bound", "owpn_new_th4", "phase"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 12);
    assert_eq!(out.lines().next().unwrap(), "P,sigma2,L,alpha,bound,units,value,regime,flags");
    let keys: Vec<(f64, u32, String)> = rows
        .iter()
        .map(|r| {
            let f: Vec<&str> = r.split(',').collect();
            (f[0].parse().unwrap(), f[2].parse().unwrap(), f[4].to_string())
        })
        .collect();
    assert_eq!(keys[0], (10.0, 1, "owpn_new_th4".into()));
    assert_eq!(keys[1], (10.0, 1, "phase".into()));
    assert_eq!(keys[2], (10.0, 4, "owpn_new_th4".into()));
    assert!((keys[4].0 - 100.0).abs() < 1e-9);
    assert!(out.ends_with('\n') && !out.contains('\r'));
}

#[test]
fn sweep_over_alpha_records_floor_rule() {
    let o = owpn(&["bound", "sweep", "-P", "1000", "--sigma2", "1", "--alpha", "0.5", "1", "--bound", "owpn_old_th3"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(field(&out, 0, "L"), "31");
    assert_eq!(field(&out, 1, "L"), "1000");
    assert_eq!(field(&out, 0, "alpha").parse::<f64>().unwrap(), 0.5);
}

#[test]
fn sweep_rejects_both_axes() {
    let o = owpn(&["bound", "sweep", "-P", "10", "--sigma2", "1", "-L", "2", "--alpha", "0.5", "--bound", "phase"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn failed_sweep_leaves_no_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let o = owpn(&["bound", "sweep", "-P", "10", "--sigma2", "1", "0", "--bound", "owpn_old_th3", "wpn_th1", "--alpha", "1", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(fs::read_dir(dir.path()).unwrap().next().is_none());
}

#[test]
fn sweep_to_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let args = ["bound", "sweep", "-P", "5", "50", "--sigma2", "0.5", "--bound", "amplitude", "owpn_old_th3"];
    let direct = stdout(&owpn(&args));
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    let o = owpn(&with_out);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(fs::read_to_string(&path).unwrap(), direct);
}

#[test]
fn gdof_summary_targets() {
    let o = owpn(&["gdof", "--alpha", "0.25", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let summary = out.split("\n\n").nth(1).unwrap();
    assert!(summary.starts_with("alpha,slope,target,abs_error"));
    assert_eq!(field(summary, 0, "target").parse::<f64>().unwrap(), 0.625);
    assert_eq!(field(summary, 1, "target").parse::<f64>().unwrap(), 0.75);
    assert!(field(summary, 0, "abs_error").parse::<f64>().unwrap() < 0.02);
}

#[test]
fn gdof_summary_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("summary.csv");
    let o = owpn(&["gdof", "--alpha", "0.5", "--summary-out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 6);
    assert_eq!(fs::read_to_string(&path).unwrap().lines().count(), 2);
}

#[test]
fn immse_default_grid_passes() {
    let o = owpn(&["immse", "verify"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 50);
    for r in 0..49 {
        assert!(field(&out, r, "max_abs_error").parse::<f64>().unwrap() < 1e-6);
    }
}

#[test]
fn immse_single_point_and_perturbation() {
    let o = owpn(&["immse", "verify", "--a", "1", "--b", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for col in ["j_star_iter", "j_star_closed"] {
        let j: f64 = field(&out, 0, col).parse().unwrap();
        assert!((j - 1.618034).abs() < 1e-6);
    }
    let bad = owpn(&["immse", "verify", "--perturb", "1e-3"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn immse_from_channel_parameters() {
    let o = owpn(&["immse", "verify", "-P", "8", "--sigma2", "0.5", "-L", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(field(&out, 0, "a").parse::<f64>().unwrap(), 8.0);
    assert_eq!(field(&out, 0, "b").parse::<f64>().unwrap(), 2.0);
}

#[test]
fn immse_integrand_dump() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.csv");
    let o = owpn(&["immse", "verify", "--a", "2", "--b", "3", "--dump-integrand", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next().unwrap(), "rho,integrand,J_rho");
    assert!(text.lines().count() > 10);
}

#[test]
fn simulate_stats_noise_only() {
    let o = owpn(&["simulate", "stats", "--power", "0", "--sigma2", "1", "--oversampling", "4", "--blocks", "100000"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.lines().skip(1).all(|l| l.ends_with(",true")));
    assert_eq!(field(&out, 0, "quantity"), "noise_power");
}

#[test]
fn simulate_rate_within_bound() {
    let o = owpn(&["simulate", "rate", "--power", "1000", "--sigma2", "1", "--alpha", "0.5", "--blocks", "100000"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let est: f64 = field(&out, 0, "rate_total_est").parse().unwrap();
    let bound: f64 = field(&out, 0, "outer_bound").parse().unwrap();
    assert!(est <= bound);
    assert_eq!(field(&out, 0, "L"), "31");
}

#[test]
fn simulate_is_deterministic() {
    let args = ["simulate", "rate", "-P", "50", "--sigma2", "0.5", "-L", "3", "--blocks", "20000", "--seed", "42"];
    let a = owpn(&args);
    let b = owpn(&args);
    assert_eq!(a.stdout, b.stdout);
    let mut other = args.to_vec();
    *other.last_mut().unwrap() = "43";
    assert_ne!(owpn(&other).stdout, a.stdout);
}

#[test]
fn trajectory_dump() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("traj.csv");
    let o = owpn(&["simulate", "stats", "-P", "4", "--sigma2", "1", "-L", "2", "--blocks", "20000", "--dump-trajectory", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "k,theta,re_y,im_y");
    assert!(lines.next().unwrap().starts_with("2,"));
    assert_eq!(text.lines().count(), 1 + 2 * 20000);
}

#[test]
fn config_file_and_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    fs::write(&cfg, "# operating point\nbound = owpn_new_th4\npower = 2\nsigma2 = 1\nunits = nats\n").unwrap();
    let c = cfg.to_str().unwrap();
    let from_file = stdout(&owpn(&["bound", "eval", "--config", c]));
    let v: f64 = field(&from_file, 0, "value").parse().unwrap();
    assert!((v - 2.37507).abs() < 1e-5);
    let overridden = stdout(&owpn(&["bound", "eval", "--config", c, "-P", "8"]));
    assert_eq!(field(&overridden, 0, "P").parse::<f64>().unwrap(), 8.0);
    assert_eq!(field(&overridden, 0, "units"), "nats");

    fs::write(&cfg, "power = 2\nsigma2 = 1\nbound = phase\nbogus = 3\n").unwrap();
    assert_eq!(owpn(&["bound", "eval", "--config", c]).status.code(), Some(1));
    assert_eq!(owpn(&["bound", "eval", "--config", "/nonexistent/x.conf"]).status.code(), Some(1));
}

#[test]
fn config_boolean_flag() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("p.conf");
    fs::write(&cfg, "pretty = true\nbound = amplitude\npower = 1\nsigma2 = 1\n").unwrap();
    let out = stdout(&owpn(&["bound", "eval", "--config", cfg.to_str().unwrap()]));
    assert!(out.starts_with("amplitude:"));
}
