use std::process::Command;

use xpm_core::BlochConstants;
use xpm_sim::{figure_preset, run_sweep, write_csv, Figure, GridSpec, SweepSpec};

fn csv_of(spec: &SweepSpec) -> String {
    let rows = run_sweep(spec, &BlochConstants::reference()).unwrap();
    let mut buf = Vec::new();
    write_csv(&mut buf, &rows).unwrap();
    String::from_utf8(buf).unwrap()
}

#[test]
fn analytic_csv_layout() {
    let out = csv_of(&figure_preset(Figure::Fig4));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "param,p_even,p_odd,p_success");
    assert_eq!(lines.len(), 51);
    let mut last = f64::NEG_INFINITY;
    for line in &lines[1..] {
        let v: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert_eq!(v.len(), 4);
        assert!(v[0] > last);
        last = v[0];
        assert_eq!(v[3], v[1] + v[2]);
    }
}

#[test]
fn mc_columns_and_determinism() {
    let spec = SweepSpec {
        grid: GridSpec::List(vec![1e-4, 1e-2]),
        mc_samples: 300,
        seed: 9,
        ..figure_preset(Figure::Fig3)
    };
    let a = csv_of(&spec);
    let b = csv_of(&spec);
    assert_eq!(a, b);
    let lines: Vec<&str> = a.lines().collect();
    assert_eq!(
        lines[0],
        "param,p_even,p_odd,p_success,mc_p_even,mc_se_even,mc_p_odd,mc_se_odd"
    );
    assert_eq!(lines[1].split(',').count(), 8);
    let other = csv_of(&SweepSpec { seed: 10, ..spec });
    assert_ne!(a, other);
}

#[test]
fn two_pole_sweep_uses_theta_as_variance() {
    let spec = SweepSpec {
        grid: GridSpec::List(vec![2.0, 20.0]),
        ..figure_preset(Figure::Fig5)
    };
    let (p, _) = spec.point(20.0).unwrap();
    assert!((p.theta - 0.1).abs() < 1e-15);
    assert!((p.sigma2_probe - 0.1).abs() < 1e-6, "{}", p.sigma2_probe);
}

#[test]
fn cli_output_is_byte_identical() {
    let bin = env!("CARGO_BIN_EXE_xpm");
    let dir = std::env::temp_dir().join(format!("xpm-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("f3.cfg");
    let emitted = Command::new(bin).args(["figure", "3", "--emit-config"]).output().unwrap();
    assert!(emitted.status.success());
    std::fs::write(&cfg, &emitted.stdout).unwrap();

    let run = |out: &str, threads: &str| {
        let path = dir.join(out);
        let done = Command::new(bin)
            .args(["sweep", "--config"])
            .arg(&cfg)
            .args(["--samples", "50", "--seed", "3", "--threads", threads, "--out"])
            .arg(&path)
            .output()
            .unwrap();
        assert!(done.status.success());
        std::fs::read(path).unwrap()
    };
    let one = run("a.csv", "1");
    let two = run("b.csv", "3");
    assert_eq!(one, two);

    let direct = Command::new(bin).args(["figure", "3", "--samples", "50", "--seed", "3"]).output().unwrap();
    assert_eq!(direct.stdout, one);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn cli_rejects_bad_config_with_location() {
    let bin = env!("CARGO_BIN_EXE_xpm");
    let path = std::env::temp_dir().join(format!("xpm-bad-{}.cfg", std::process::id()));
    std::fs::write(&path, "sweep.parameter = sigma2_probe\nsweep.values = 1e-3\ngate.alpha_p = ten\n").unwrap();
    let out = Command::new(bin).arg("sweep").arg("--config").arg(&path).output().unwrap();
    std::fs::remove_file(&path).ok();
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3") && err.contains("gate.alpha_p"), "{err}");
}

#[test]
fn cli_verify_summary_line() {
    let out = Command::new(env!("CARGO_BIN_EXE_xpm")).args(["verify", "analytics"]).output().unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success());
    assert_eq!(text.lines().last(), Some("VERIFY analytics PASS 6/6"));
}
