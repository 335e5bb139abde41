use std::fs;
use std::path::Path;
use std::process::Command as Process;

use cavity_cascade::cli::{run, Command, ExperimentConfig, RunOptions};

fn bin() -> Process {
    Process::new(env!("CARGO_BIN_EXE_cavity-cascade"))
}

fn options(dir: &Path) -> RunOptions {
    RunOptions {
        out: Some(dir.to_path_buf()),
        svg: false,
        grid_points: Some(401),
    }
}

/// Data rows as `(header, rows)`, skipping `#` comments.
fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let text = fs::read_to_string(path).unwrap();
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let header = reader.headers().unwrap().iter().map(str::to_owned).collect();
    let rows = reader
        .records()
        .map(|r| r.unwrap().iter().map(str::to_owned).collect())
        .collect();
    (header, rows)
}

fn column(header: &[String], rows: &[Vec<String>], name: &str) -> Vec<f64> {
    let i = header.iter().position(|h| h == name).unwrap();
    rows.iter().map(|r| r[i].parse().unwrap()).collect()
}

#[test]
fn spectrum_output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        let status = bin().args(["spectrum", "--quiet", "--out"]).arg(out).status().unwrap();
        assert!(status.success());
    }
    let first = fs::read(a.join("spectrum.csv")).unwrap();
    assert_eq!(first, fs::read(b.join("spectrum.csv")).unwrap());
    let text = String::from_utf8(first).unwrap();
    assert!(text.starts_with("# cavity-cascade 0.1.0\n"));
    assert!(text.contains("# config: [geometry]"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");

    fs::write(&cfg, "[geometry]\nzeta = 5.0\nbogus = 1\n").unwrap();
    let out = bin().args(["match", "--config"]).arg(&cfg).arg("--out").arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bogus"));

    fs::write(&cfg, "[sweep]\npoints = 0\n").unwrap();
    let out = bin().args(["spectrum", "--config"]).arg(&cfg).arg("--out").arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let missing = dir.path().join("missing.toml");
    let out = bin().args(["spectrum", "--config"]).arg(&missing).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    fs::write(&cfg, "[geometry]\ntarget_omega = 1e300\n").unwrap();
    let out = bin().args(["match", "--config"]).arg(&cfg).arg("--out").arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(!dir.path().join("params.json").exists());

    let out = bin().arg("nonsense").output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = bin().args(["match", "--quiet", "--out"]).arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
}

#[test]
fn single_cavity_models_agree_near_resonance() {
    let dir = tempfile::tempdir().unwrap();
    let config = ExperimentConfig::from_toml_str("[geometry]\nlayout = \"single\"\nzeta = 20.0\n").unwrap();
    run(Command::Spectrum, &config, &options(dir.path())).unwrap();
    let (header, rows) = read_csv(&dir.path().join("spectrum.csv"));
    let s = column(&header, &rows, "scattering_value");
    let c = column(&header, &rows, "coupled_value");
    let peak = s.iter().copied().fold(0.0, f64::max);
    assert!((peak - 1.0).abs() < 1e-9);
    let worst = s.iter().zip(&c).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(worst < 2e-3, "{worst}");
}

#[test]
fn coupled_override_with_zero_coupling_gives_lorentzian() {
    let dir = tempfile::tempdir().unwrap();
    let config = ExperimentConfig::from_toml_str("model = \"coupled\"\n[coupled]\ng = 0.0\neta_r = 1.0\n").unwrap();
    run(Command::Spectrum, &config, &options(dir.path())).unwrap();
    let (header, rows) = read_csv(&dir.path().join("spectrum.csv"));
    assert!(rows.iter().all(|r| r[1].is_empty()));
    let w = column(&header, &rows, "omega");
    let c = column(&header, &rows, "coupled_value");
    let m = cavity_cascade::matching::match_cascaded(5.0, 1.0, 5.0, &Default::default()).unwrap();
    let (wc, k) = (m.params.omega_c, m.params.kappa);
    for (w, v) in w.iter().zip(&c) {
        assert!((v - k / ((w - wc).powi(2) + k * k)).abs() < 1e-12 * (1.0 / k));
    }
}

#[test]
fn match_reports_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let report = run(Command::Match, &ExperimentConfig::default(), &options(dir.path())).unwrap();
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report.files[0]).unwrap()).unwrap();
    assert_eq!(json["tool"], "cavity-cascade 0.1.0");
    assert!((json["kappa"].as_f64().unwrap() - 0.019611613513818404).abs() < 1e-16);
    assert!((json["omega_c"].as_f64().unwrap() - 31.21853097604805).abs() < 1e-12);
    let fiber = &json["fiber"];
    let l_f = fiber["l_f"].as_f64().unwrap();
    let literal = cavity_cascade::matching::g_from_geometry(5.0, 1.0, l_f).unwrap();
    assert_eq!(fiber["g_arithmetic_mean"].as_f64(), Some(literal));
    assert!((fiber["g_geometric_mean"].as_f64().unwrap() - fiber["g"].as_f64().unwrap()).abs() < 1e-16);
    assert_eq!(fiber["coupling_rule"], "geometric_mean");
    assert_eq!(json["config"]["geometry"]["zeta"].as_f64(), Some(5.0));
    assert!(json["provenance"]["kappa"].as_str().unwrap().contains("zeta"));
}

#[test]
fn profile_and_darkmode_need_cascaded_layout() {
    let dir = tempfile::tempdir().unwrap();
    let config = ExperimentConfig::from_toml_str("[geometry]\nlayout = \"single\"\n").unwrap();
    for cmd in [Command::Profile, Command::Darkmode, Command::Delta] {
        let err = run(cmd, &config, &options(dir.path())).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
    assert!(fs::read_dir(dir.path()).unwrap().next().is_none());
}

#[test]
fn darkmode_and_profile_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let config = ExperimentConfig::from_toml_str("[phase]\npoints = 37\n").unwrap();
    let opts = RunOptions { svg: true, grid_points: Some(41), ..options(dir.path()) };
    let report = run(Command::Darkmode, &config, &opts).unwrap();
    assert_eq!(report.files.len(), 3);
    let (header, rows) = read_csv(&dir.path().join("darkmode.csv"));
    assert_eq!(rows.len(), 41 * 37);
    assert!(column(&header, &rows, "fiber_intensity").iter().all(|&v| v > 0.0));
    let (header, rows) = read_csv(&dir.path().join("darkmode_fit.csv"));
    assert_eq!(rows.len(), 41);
    let c0 = column(&header, &rows, "c0");
    let res = column(&header, &rows, "residual");
    assert!(c0.iter().zip(&res).all(|(c, r)| r / c < 1e-9));

    let report = run(Command::Profile, &ExperimentConfig::default(), &opts).unwrap();
    assert!(fs::read_to_string(&report.files[1]).unwrap().starts_with("<svg"));
    let (header, rows) = read_csv(&dir.path().join("profile.csv"));
    let l = column(&header, &rows, "scat_left");
    let r = column(&header, &rows, "scat_right");
    // Symmetric stack driven at the middle resonance: equal cavity intensities.
    assert!((l[20] - r[20]).abs() < 1e-9 * l[20]);
}

#[test]
fn delta_table() {
    let dir = tempfile::tempdir().unwrap();
    let config = ExperimentConfig::from_toml_str("[delta]\nzetas = [0.5, 5.0]\n").unwrap();
    run(Command::Delta, &config, &options(dir.path())).unwrap();
    let (header, rows) = read_csv(&dir.path().join("delta.csv"));
    assert_eq!(rows.len(), 2);
    let errors = header.iter().position(|h| h == "errors").unwrap();
    assert!(!rows[0][errors].is_empty());
    assert!(rows[1][errors].is_empty());
    assert!(rows[1][header.len() - 1].parse::<f64>().unwrap() > 0.0);
}
