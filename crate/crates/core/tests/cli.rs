use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lattice-exciton"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write_config(dir: &Path, text: &str) -> String {
    let p = dir.join("lattice.conf");
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn gamma_at_normal_incidence() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "theta_rad = 1.5707963267948966\n");
    let o = run(&["gamma", "--e0", "0", "--e-ex", "1", "--config", &cfg]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], "swept_var,value,gamma_ev,ratio,regime");
    let cols: Vec<_> = lines[1].split(',').collect();
    let ratio: f64 = cols[3].parse().unwrap();
    assert!((ratio - 18.349_070_615_088_94).abs() < 1e-9);
    assert_eq!(cols[4], "superradiant");
}

#[test]
fn gamma_beyond_light_cone_is_metastable() {
    for e0 in ["1", "1.5"] {
        let o = run(&["gamma", "--e0", e0, "--e-ex", "1"]);
        assert!(o.status.success());
        assert!(stdout(&o).lines().nth(1).unwrap().ends_with(",0.0,0.0,metastable"));
    }
}

#[test]
fn gamma_just_inside_light_cone_is_divergent() {
    let o = run(&["gamma", "--e0", "0.9999999999", "--e-ex", "1"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("DIVERGENT,DIVERGENT,superradiant"));
}

#[test]
fn negative_energy_is_rejected() {
    let o = run(&["gamma", "--e0=-0.5", "--e-ex", "1"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("e_0"));
}

#[test]
fn critical_wavevector() {
    let o = run(&["kc"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let cols: Vec<f64> = text.lines().nth(1).unwrap().split(',').map(|c| c.parse().unwrap()).collect();
    assert!((cols[2] * 1973.269804 - 1.0).abs() < 1e-9);
    assert!((cols[3] - 1.0).abs() < 1e-9);
}

#[test]
fn figure_sweep_to_file_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let o = run(&["sweep", "--figure", "5a", "--out", p.to_str().unwrap()]);
        assert!(o.status.success(), "{}", stderr(&o));
        assert!(o.stdout.is_empty());
    }
    let (ta, tb) = (fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let text = String::from_utf8(ta).unwrap();
    assert_eq!(text.lines().count(), 362);
    assert!(text.lines().skip(1).all(|l| l.starts_with("phi,")));
}

#[test]
fn figure_id_forms() {
    for id in ["2", "fig2", "7b"] {
        let o = run(&["sweep", "--figure", id, "--samples", "3"]);
        assert!(o.status.success(), "{id}: {}", stderr(&o));
        assert_eq!(stdout(&o).lines().count(), 4);
    }
    let o = run(&["sweep", "--figure", "9z"]);
    assert!(!o.status.success());
}

#[test]
fn custom_sweep_requires_fixed_parameters() {
    let o = run(&["sweep", "--custom", "--var", "phi", "--theta", "1.0"]);
    assert!(!o.status.success());

    let o = run(&[
        "sweep", "--custom", "--var", "phi", "--theta", "1.0", "--e0", "0.5", "--start", "0", "--stop", "3",
        "--samples", "4",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let values: Vec<f64> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(values, vec![0.0, 1.0, 2.0, 3.0]);
}

#[test]
fn preset_rejects_overrides() {
    let o = run(&["sweep", "--figure", "2", "--theta", "0.3"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("error"));
}

#[test]
fn sweep_with_oracle_columns() {
    let o = run(&["sweep", "--figure", "2", "--start", "0.2", "--stop", "0.6", "--samples", "3", "--oracle"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.starts_with("swept_var,value,gamma_ev,ratio,regime,oracle_ev,rel_err\n"));
    for line in text.lines().skip(1) {
        let rel: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!(rel < 1e-2, "{line}");
    }
}

#[test]
fn config_file_changes_the_result() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "# denser lattice\na_angstrom = 500\ntheta_rad = 1.5707963267948966\nphi_rad = 0\n");
    let o = run(&["gamma", "--e0", "0", "--e-ex", "1", "--config", &cfg]);
    assert!(o.status.success(), "{}", stderr(&o));
    let ratio: f64 = stdout(&o).lines().nth(1).unwrap().split(',').nth(3).unwrap().parse().unwrap();
    // ratio scales as 1/a²
    assert!((ratio / 18.349_070_615_088_94 - 4.0).abs() < 1e-9);
}

#[test]
fn bad_config_reports_line() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "a_angstrom = 1000\nn_x = 0\n");
    let o = run(&["gamma", "--e0", "0.2", "--config", &cfg]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));

    let cfg = write_config(dir.path(), "spacing = 3\n");
    let o = run(&["gamma", "--e0", "0.2", "--config", &cfg]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("spacing"));
}

#[test]
fn missing_config_file() {
    let o = run(&["kc", "--config", "/nonexistent/lattice.conf"]);
    assert!(!o.status.success());
    assert!(stderr(&o).starts_with("error:"));
}

#[test]
fn emission_trace_decays() {
    let o = run(&["emission", "--e0", "0.05", "--e-ex", "1", "--samples", "11"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().next().unwrap(), "t_s,population,intensity");
    let pops: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(pops.len(), 11);
    assert_eq!(pops[0], 1.0);
    assert!(pops.windows(2).all(|w| w[1] < w[0]));
    // five lifetimes
    assert!((pops[10] - (-5.0f64).exp()).abs() < 1e-12);
}

#[test]
fn emission_on_light_cone_fails() {
    let o = run(&["emission", "--e0", "0.9999999999", "--e-ex", "1"]);
    assert!(!o.status.success());
}

#[test]
fn oracle_check_small_grid() {
    let o = run(&["oracle-check", "--n-theta", "2", "--n-phi", "2", "--n-e0", "2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), 9);
    assert!(stderr(&o).contains("max relative error"));
}
