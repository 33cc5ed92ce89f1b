use std::fs;
use std::path::Path;
use std::process::Command;

use kinwave::cli::{run, EXIT_CONFIG, EXIT_NO_WAVE, EXIT_OK};
use serde_json::Value;
use tempfile::TempDir;

fn kinwave(args: &[&str]) -> i32 {
    run(std::iter::once("kinwave").chain(args.iter().copied()))
}

fn with_out(dir: &Path, args: &[&str]) -> i32 {
    let mut all = args.to_vec();
    let out = dir.to_str().unwrap();
    all.extend(["--out", out]);
    kinwave(&all)
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn rates_of_stationary_preset() {
    let d = TempDir::new().unwrap();
    assert_eq!(with_out(d.path(), &["rates", "--preset", "fig3"]), EXIT_OK);
    let rates: Vec<f64> = csv_rows(&d.path().join("rates.csv")).iter().map(|r| r[2].parse().unwrap()).collect();
    for (got, want) in rates.iter().zip([1.48, 0.52, 0.52, 1.48]) {
        assert!((got - want).abs() < 1e-14, "{rates:?}");
    }
}

#[test]
fn critical_speeds_and_modes() {
    let d = TempDir::new().unwrap();
    assert_eq!(with_out(d.path(), &["critical-speeds", "--preset", "fig8"]), EXIT_OK);
    let w = &csv_rows(&d.path().join("critical_speeds.csv"))[0];
    let (lo, hi): (f64, f64) = (w[0].parse().unwrap(), w[1].parse().unwrap());
    assert!(lo < 0.2 && 0.2 < hi);

    assert_eq!(with_out(d.path(), &["modes", "--preset", "fig8", "--c", "0.2"]), EXIT_OK);
    let rows = csv_rows(&d.path().join("modes.csv"));
    assert_eq!(rows.iter().filter(|r| r[0] == "left").count(), 2);
    assert_eq!(rows.iter().filter(|r| r[0] == "right").count(), 2);
    assert!(rows.iter().all(|r| r.len() == 7 && r[2].parse::<f64>().unwrap() > 0.0));
}

#[test]
fn config_errors_exit_two() {
    let d = TempDir::new().unwrap();
    let bad = write(d.path(), "bad.toml", "chi_s = \n");
    let unknown = write(d.path(), "unknown.toml", "chi = 0.4\n");
    for args in [
        vec!["rates", "--preset", "fig4"],
        vec!["rates"],
        vec!["rates", "--config", &bad],
        vec!["rates", "--config", &unknown],
        vec!["rates", "--config", "/nonexistent/run.toml"],
        vec!["modes", "--preset", "fig8"],
        vec!["modes", "--preset", "fig8", "--c", "0.5"],
        vec!["modes", "--preset", "fig8", "--c", "0.99"],
        vec!["scan", "--preset", "fig8", "--dc=-1"],
        vec!["rates", "--preset", "fig8", "--threads", "0"],
        vec!["no-such-command"],
    ] {
        assert_eq!(kinwave(&args), EXIT_CONFIG, "{args:?}");
    }
}

#[test]
fn fig8_has_two_waves() {
    let d = TempDir::new().unwrap();
    assert_eq!(with_out(d.path(), &["wave", "--preset", "fig8"]), EXIT_OK);
    let waves = json(&d.path().join("waves.json"));
    let cs: Vec<f64> = waves.as_array().unwrap().iter().map(|w| w["c"].as_f64().unwrap()).collect();
    assert_eq!(cs.len(), 2);
    assert!((cs[0] - 0.2110).abs() < 1e-3 && (cs[1] - 0.5789).abs() < 1e-3, "{cs:?}");
    for name in ["scan.csv", "jumps.json", "wave_0_profile.csv", "wave_1_signal.csv", "wave_1_nutrient.csv"] {
        assert!(d.path().join(name).is_file(), "{name}");
    }
    let jumps = json(&d.path().join("jumps.json"));
    assert!(jumps.to_string().contains("0.5"));
}

#[test]
fn wave_without_valid_root_exits_three() {
    let d = TempDir::new().unwrap();
    let cfg = write(
        d.path(),
        "run.toml",
        "preset = \"fig10\"\nn = 40\ndc = 0.01\n",
    );
    assert_eq!(kinwave(&["wave", "--config", &cfg]), EXIT_NO_WAVE);
}

#[test]
fn cluster_writes_report() {
    let d = TempDir::new().unwrap();
    assert_eq!(with_out(d.path(), &["cluster", "--preset", "fig3"]), EXIT_OK);
    let r = json(&d.path().join("cluster.json"));
    assert!(r["upsilon"].as_f64().unwrap().abs() < 1e-10);
    assert!(r["symmetry_residual"].as_f64().unwrap() < 1e-10);
    assert_eq!(r["ansatz_valid"], Value::Bool(true));
    assert!(d.path().join("cluster_profile.csv").is_file());
}

#[test]
fn outputs_are_reproducible() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    for d in [&a, &b] {
        assert_eq!(with_out(d.path(), &["scan", "--preset", "fig9", "--threads", "1"]), EXIT_OK);
    }
    let c = TempDir::new().unwrap();
    assert_eq!(with_out(c.path(), &["scan", "--preset", "fig9", "--threads", "2"]), EXIT_OK);
    let scan = fs::read(a.path().join("scan.csv")).unwrap();
    assert_eq!(scan, fs::read(b.path().join("scan.csv")).unwrap());
    assert_eq!(scan, fs::read(c.path().join("scan.csv")).unwrap());
}

#[test]
fn toml_and_json_configs_agree() {
    let d = TempDir::new().unwrap();
    let t = write(
        d.path(),
        "run.toml",
        "velocities = [-1.0, -0.3, 0.4, 1.0]\nweights = [1.0, 2.0, 2.0, 1.0]\nchi_s = 0.4\nchi_n = 0.3\nalpha = 20.0\nd_s = 1.0\n",
    );
    let j = write(
        d.path(),
        "run.json",
        r#"{"velocities":[-1.0,-0.3,0.4,1.0],"weights":[1.0,2.0,2.0,1.0],"chi_s":0.4,"chi_n":0.3,"alpha":20.0,"d_s":1.0}"#,
    );
    let (ot, oj) = (d.path().join("t"), d.path().join("j"));
    for (cfg, out) in [(&t, &ot), (&j, &oj)] {
        assert_eq!(with_out(out, &["modes", "--config", cfg, "--c", "0.1"]), EXIT_OK);
        assert_eq!(with_out(out, &["scan", "--config", cfg]), EXIT_OK);
    }
    for name in ["modes.csv", "scan.csv", "jumps.json"] {
        assert_eq!(fs::read(ot.join(name)).unwrap(), fs::read(oj.join(name)).unwrap(), "{name}");
    }
}

#[test]
fn flags_override_file() {
    let d = TempDir::new().unwrap();
    let cfg = write(d.path(), "run.toml", "preset = \"fig8\"\nc = 0.9\n");
    assert_eq!(kinwave(&["modes", "--config", &cfg]), EXIT_CONFIG);
    assert_eq!(with_out(d.path(), &["modes", "--config", &cfg, "--c", "0.3"]), EXIT_OK);
}

#[test]
fn macroscopic_limit() {
    let d = TempDir::new().unwrap();
    assert_eq!(with_out(d.path(), &["macro", "--preset", "fig8"]), EXIT_OK);
    let r = json(&d.path().join("macro.json"));
    let c = r["c"].as_f64().unwrap();
    assert!(0.0 < c && c < 0.44);
    assert!(d.path().join("macro_upsilon.csv").is_file());
}

#[test]
fn relax_small_grid() {
    let d = TempDir::new().unwrap();
    let cfg = write(
        d.path(),
        "run.toml",
        "velocities = [-1.0, 1.0]\nchi_s = 0.48\nchi_n = 0.44\nalpha = 50.0\nd_s = 0.5\nc = 0.4\n[grid]\nl = 20.0\nnz = 600\n[relax]\nt_end = 4000.0\ntol = 1e-9\n",
    );
    assert_eq!(with_out(d.path(), &["relax", "--config", &cfg]), EXIT_OK);
    let r = json(&d.path().join("relax.json"));
    assert_eq!(r["converged"], Value::Bool(true));
    assert!(r["l1_distance"].as_f64().unwrap() < 1e-2);
    assert_eq!(csv_rows(&d.path().join("relax_profile.csv")).len(), 600);
}

#[test]
fn reproduce_exponent_sweep() {
    let d = TempDir::new().unwrap();
    assert_eq!(with_out(d.path(), &["reproduce", "--preset", "fig5"]), EXIT_OK);
    let rows = csv_rows(&d.path().join("fig5/exponent_sweep.csv"));
    let last_lo = rows.iter().rev().find(|r| r[0] == "c_lo").unwrap();
    let last_hi = rows.iter().rev().find(|r| r[0] == "c_hi").unwrap();
    assert!(last_lo[3].parse::<f64>().unwrap() < 0.01);
    assert!(last_hi[2].parse::<f64>().unwrap() < 0.01);
}

#[test]
fn reproduce_swaps() {
    let d = TempDir::new().unwrap();
    assert_eq!(with_out(d.path(), &["reproduce", "--preset", "fig7"]), EXIT_OK);
    let swaps = json(&d.path().join("fig7/swaps.json"));
    let swaps = swaps.as_array().unwrap();
    assert!(!swaps.is_empty());
    for s in swaps {
        let (t, bound) = (s["transferred_below"].as_f64().unwrap(), s["transfer_bound"].as_f64().unwrap());
        assert!(t >= bound - 0.01, "{s}");
    }
    assert!(d.path().join("fig7/swap_v3_below.csv").is_file());
}

#[test]
fn reproduce_inner_velocity_sweep() {
    let d = TempDir::new().unwrap();
    assert_eq!(with_out(d.path(), &["reproduce", "--preset", "fig9"]), EXIT_OK);
    for v in ["0.1", "0.5", "0.8"] {
        let waves = json(&d.path().join(format!("fig9/vmin_{v}/waves.json")));
        assert!(!waves.as_array().unwrap().is_empty(), "vmin {v}");
    }
}

#[test]
fn binary_honours_thread_variable() {
    let d = TempDir::new().unwrap();
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_kinwave"))
            .args(["critical-speeds", "--preset", "fig8"])
            .env("KINWAVE_THREADS", threads)
            .current_dir(d.path())
            .output()
            .unwrap()
    };
    let ok = run("1");
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    assert!(String::from_utf8(ok.stdout).unwrap().starts_with("c_lo,c_hi\n"));
    assert_eq!(run("0").status.code(), Some(EXIT_CONFIG));
    let help = Command::new(env!("CARGO_BIN_EXE_kinwave")).arg("--help").output().unwrap();
    assert_eq!(help.status.code(), Some(EXIT_OK));
}
