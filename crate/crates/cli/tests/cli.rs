use std::fs;
use std::path::PathBuf;
use std::process::Command;

use ssekit::Functional;
use ssekit_cli::{
    convergence, convergence_csv, ensemble_csv, parse_dt_list, reference_csv, trajectory_csv, ExperimentConfig,
    ModelId, Settings,
};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ssekit"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ssekit-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn data_rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn header_row(csv: &str) -> &str {
    csv.lines().find(|l| !l.starts_with('#')).unwrap()
}

#[test]
fn model_defaults() {
    let h = ExperimentConfig::from_settings(&Settings::new()).unwrap();
    assert_eq!((h.model, h.dt, h.realizations, h.omega_r, h.gamma), (ModelId::Homodyne, 0.01, 10_000, 1.0, 1.0));
    let mut s = Settings::new();
    s.set("model", "oscillator").unwrap();
    let o = ExperimentConfig::from_settings(&s).unwrap();
    assert_eq!((o.n_max, o.n0, o.realizations, o.functional), (12, 9, 1000, Functional::MeanN));
    s.set("model", "ouqubit").unwrap();
    let q = ExperimentConfig::from_settings(&s).unwrap();
    assert_eq!((q.k, q.realizations), (1.0, 10_000));
    assert!((q.omega0 - 37f64.sqrt() / 2.0).abs() < 1e-15);
}

#[test]
fn config_file_and_flag_precedence() {
    let file = Settings::parse("# sweep\nmodel = ouqubit\nt_final = 2\nk = 2 # faster\n").unwrap();
    let mut flags = Settings::new();
    flags.set("k", "0.5").unwrap();
    let cfg = ExperimentConfig::from_settings(&file.overlay(&flags)).unwrap();
    assert_eq!(cfg.model, ModelId::OuQubit);
    assert_eq!(cfg.t_final, 2.0);
    assert_eq!(cfg.k, 0.5);
    assert!(Settings::parse("bogus = 1").is_err());
    assert!(Settings::parse("no separator").is_err());
}

#[test]
fn validation_names_the_field() {
    let cases = [
        ("dt", "0"),
        ("dt", "nan"),
        ("realizations", "0"),
        ("t-final", "0.001"),
        ("functional", "energy"),
        ("theta", "pi"),
    ];
    for (k, v) in cases {
        let mut s = Settings::new();
        s.set(k, v).unwrap();
        let err = ExperimentConfig::from_settings(&s).unwrap_err();
        assert_eq!(err.exit_code(), 2, "{k}={v}");
        let msg = err.to_string();
        assert!(msg.contains(k.split('-').next().unwrap()), "{msg}");
    }
}

#[test]
fn ensemble_and_reference_share_the_grid() {
    let cfg = ExperimentConfig {
        t_final: 1.0,
        realizations: 50,
        stride: 10,
        ..ExperimentConfig::defaults(ModelId::Homodyne)
    };
    let files = ensemble_csv(&cfg).unwrap();
    let names: Vec<&str> = files.iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(names, ["ensemble.csv", "reference.csv"]);
    let (ens, refc) = (&files[0].1, &files[1].1);
    assert_eq!(header_row(ens), "t,mean,stderr,R_accepted");
    assert_eq!(header_row(refc), "t,value");
    let (er, rr) = (data_rows(ens), data_rows(refc));
    assert_eq!(er.len(), 11);
    for (a, b) in er.iter().zip(&rr) {
        assert_eq!(a[0], b[0]);
        assert_eq!(a[3], "50");
    }
    assert!(er[1..].iter().all(|r| r[2].parse::<f64>().unwrap() > 0.0));
    assert!(ens.contains("# seed = 1\n"));
    assert!(!ens.contains("threads"));
    // 17 significant digits round-trip
    let v: f64 = er[5][1].parse().unwrap();
    assert_eq!(format!("{v:.16e}"), er[5][1]);
}

#[test]
fn every_model_has_a_reference() {
    let homodyne = ExperimentConfig {
        t_final: 20.0,
        ..ExperimentConfig::defaults(ModelId::Homodyne)
    };
    let rows = data_rows(&reference_csv(&homodyne).unwrap()[0].1);
    let last: f64 = rows.last().unwrap()[1].parse().unwrap();
    assert!((last - 1.0 / 3.0).abs() < 1e-6);

    let osc = ExperimentConfig::defaults(ModelId::Oscillator);
    for row in data_rows(&reference_csv(&osc).unwrap()[0].1).iter().step_by(50) {
        let (t, v): (f64, f64) = (row[0].parse().unwrap(), row[1].parse().unwrap());
        assert!((v - 9.0 * (-t).exp()).abs() < 1e-6);
    }

    // the memoryless curve is available even though the simulator needs k > 0
    let mut curves = Vec::new();
    for k in [0.0, 1.0, 2.0] {
        let cfg = ExperimentConfig {
            k,
            t_final: 2.0,
            ..ExperimentConfig::defaults(ModelId::OuQubit)
        };
        let rows = data_rows(&reference_csv(&cfg).unwrap()[0].1);
        curves.push(rows.last().unwrap()[1].parse::<f64>().unwrap());
    }
    assert!(curves[0] < curves[1] && curves[1] < curves[2]);

    let output = ExperimentConfig {
        functional: Functional::OutputB,
        ..homodyne
    };
    assert!(reference_csv(&output).is_ok());
}

#[test]
fn trajectory_files() {
    let cfg = ExperimentConfig {
        t_final: 0.5,
        functional: Functional::Eta11,
        ..ExperimentConfig::defaults(ModelId::Homodyne)
    };
    let files = trajectory_csv(&cfg, &[0, 7]).unwrap();
    assert_eq!(files[0].0, "trajectory_0.csv");
    assert_eq!(files[1].0, "trajectory_7.csv");
    assert_eq!(header_row(&files[0].1), "t,value,B");
    assert_ne!(data_rows(&files[0].1), data_rows(&files[1].1));
    assert_eq!(trajectory_csv(&cfg, &[7]).unwrap()[0], files[1]);

    let osc = ExperimentConfig {
        t_final: 0.5,
        ..ExperimentConfig::defaults(ModelId::Oscillator)
    };
    let files = trajectory_csv(&osc, &[0]).unwrap();
    assert_eq!(header_row(&files[0].1), "t,value");
    assert_eq!(data_rows(&files[0].1).len(), 51);
}

#[test]
fn unsupported_combinations_are_config_errors() {
    let ou_norm = ExperimentConfig {
        functional: Functional::Norm2,
        realizations: 10,
        t_final: 0.1,
        ..ExperimentConfig::defaults(ModelId::OuQubit)
    };
    assert_eq!(ensemble_csv(&ou_norm).unwrap_err().exit_code(), 2);
    let osc_output = ExperimentConfig {
        functional: Functional::OutputB,
        realizations: 10,
        t_final: 0.1,
        ..ExperimentConfig::defaults(ModelId::Oscillator)
    };
    assert_eq!(ensemble_csv(&osc_output).unwrap_err().exit_code(), 2);
    let ou_k0 = ExperimentConfig {
        k: 0.0,
        realizations: 10,
        t_final: 0.1,
        ..ExperimentConfig::defaults(ModelId::OuQubit)
    };
    assert_eq!(ensemble_csv(&ou_k0).unwrap_err().exit_code(), 2);
    let weak = ExperimentConfig {
        gamma: 8.0,
        omega_r: 1.0,
        ..ExperimentConfig::defaults(ModelId::Homodyne)
    };
    assert_eq!(reference_csv(&weak).unwrap_err().exit_code(), 2);
}

#[test]
fn convergence_needs_two_step_sizes() {
    let cfg = ExperimentConfig {
        t_final: 1.0,
        realizations: 200,
        ..ExperimentConfig::defaults(ModelId::Homodyne)
    };
    assert_eq!(convergence(&cfg, &[0.1]).unwrap_err().exit_code(), 2);
    assert_eq!(convergence(&cfg, &[0.1, 0.3]).unwrap_err().exit_code(), 2);
    let csv = &convergence_csv(&cfg, &[0.05, 0.1]).unwrap()[0].1;
    assert_eq!(header_row(csv), "dt,mean_abs_error,stderr,R_accepted");
    assert_eq!(data_rows(csv).len(), 2);
    assert_eq!(parse_dt_list("0.01, 0.05 0.1").unwrap(), vec![0.01, 0.05, 0.1]);
    assert!(parse_dt_list("0.01,x").is_err());
}

#[test]
fn binary_writes_files_and_reports_exit_codes() {
    let dir = scratch("run");
    let status = bin()
        .args(["ensemble", "--model", "oscillator", "--realizations", "20", "--t-final", "0.5", "--threads", "2"])
        .arg("--out")
        .arg(&dir)
        .status()
        .unwrap();
    assert!(status.success());
    let first = fs::read_to_string(dir.join("ensemble.csv")).unwrap();
    assert!(dir.join("reference.csv").exists());

    let cfg = dir.join("run.conf");
    fs::write(&cfg, "model = oscillator\nrealizations = 20\nt-final = 0.5\nthreads = 1\n").unwrap();
    let status = bin().arg("ensemble").arg("--config").arg(&cfg).arg("--out").arg(&dir).output().unwrap().status;
    assert!(status.success());
    assert_eq!(fs::read_to_string(dir.join("ensemble.csv")).unwrap(), first);

    let code = |args: &[&str]| bin().args(args).arg("--out").arg(&dir).output().unwrap().status.code();
    assert_eq!(code(&["ensemble", "--dt", "0.03"]), Some(2));
    assert_eq!(code(&["ensemble", "--model", "photon"]), Some(2));
    assert_eq!(code(&["convergence", "--dt-list", "0.1"]), Some(2));
    assert_eq!(code(&["reference", "--gamma", "8"]), Some(2));
    assert_eq!(code(&["frobnicate"]), Some(2));
    assert_eq!(
        code(&["trajectory", "--t-final", "0.1", "--index", "3", "--functional", "output_B"]),
        Some(0)
    );
    assert!(dir.join("trajectory_3.csv").exists());
    let _ = fs::remove_dir_all(&dir);
}
