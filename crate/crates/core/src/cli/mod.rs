//! Configuration-driven experiment runners behind the `cavity-cascade`
//! binary.
//!
//! Each runner computes everything first and writes its files only at the
//! end. Output is byte-identical for identical configurations.
//!
//! | command    | files                                  |
//! |------------|----------------------------------------|
//! | `spectrum` | `spectrum.csv` (+ `spectrum.svg`)      |
//! | `delta`    | `delta.csv` (+ `delta.svg`)            |
//! | `profile`  | `profile.csv` (+ `profile.svg`)        |
//! | `darkmode` | `darkmode.csv`, `darkmode_fit.csv` (+ `darkmode.svg`) |
//! | `match`    | `params.json`                          |

pub mod config;
pub mod output;

use std::f64::consts::{PI, SQRT_2};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::coupled::ModeSystem;
use crate::error::{Error, Result};
use crate::matching::{
    g_from_geometry, g_unequal_lengths, kappa_from_geometry, linspace, match_cascaded,
    nearest_order, omega_c_from_geometry, CascadedMatch, CascadedOptions, CouplingRule,
    FiberLength,
};
use crate::scattering::OpticalStack;
use crate::spectra::{
    coupled_dark_mode_scan, dark_mode_scan, intensity_comparison, peak_separation_delta,
    sweep_coupled_observable, sweep_scattering, CoupledObservable, DriveTemplate,
};

pub use config::{ExperimentConfig, Layout, ModelSelection};
use output::{fmt_f64, line_plot, write_file, CsvTable, Series, TOOL};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Spectrum,
    Delta,
    Profile,
    Darkmode,
    Match,
}

/// Command-line overrides applied on top of the configuration file.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunOptions {
    pub out: Option<PathBuf>,
    pub svg: bool,
    pub grid_points: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunReport {
    pub files: Vec<PathBuf>,
    /// Human-readable result lines.
    pub summary: Vec<String>,
}

/// Applies `options` to `config` and validates the result.
pub fn resolve(config: &ExperimentConfig, command: Command, options: &RunOptions) -> Result<ExperimentConfig> {
    let mut resolved = config.clone();
    if let Some(dir) = &options.out {
        resolved.output.dir = Some(dir.clone());
    }
    if options.svg {
        resolved.output.svg = true;
    }
    if let Some(n) = options.grid_points {
        match command {
            Command::Darkmode => resolved.phase.omega_points = n,
            _ => resolved.sweep.points = n,
        }
    }
    resolved.validate()?;
    Ok(resolved)
}

pub fn run(command: Command, config: &ExperimentConfig, options: &RunOptions) -> Result<RunReport> {
    let config = resolve(config, command, options)?;
    let out = config.output.dir.clone().unwrap_or_else(|| PathBuf::from("."));
    match command {
        Command::Spectrum => run_spectrum(&config, &out),
        Command::Delta => run_delta(&config, &out),
        Command::Profile => run_profile(&config, &out),
        Command::Darkmode => run_darkmode(&config, &out),
        Command::Match => run_match(&config, &out),
    }
}

/// Both models built from one configuration.
struct Setup {
    omega_c: f64,
    kappa: f64,
    n_c: u32,
    stack: OpticalStack,
    sys: ModeSystem,
    observable: CoupledObservable,
    matched: Option<CascadedMatch>,
}

impl Setup {
    fn new(config: &ExperimentConfig) -> Result<Self> {
        let geo = &config.geometry;
        let n_c = match (geo.n_c, geo.target_omega) {
            (Some(n), _) => n,
            (None, Some(target)) => nearest_order(geo.zeta, geo.l_c, target)?,
            (None, None) => CascadedOptions::default().n_c,
        };
        let (stack, mut sys, observable, matched) = match geo.layout {
            Layout::Cascaded => {
                let options = CascadedOptions {
                    n_c,
                    n_f: geo.n_f,
                    fiber: geo.fiber,
                    coupling: geo.coupling,
                };
                let m = match_cascaded(geo.zeta, geo.l_c, geo.l_f, &options)?;
                (m.stack()?, m.mode_system(config.drive.a_in)?, CoupledObservable::Transmitted, Some(m))
            }
            Layout::Single => {
                let kappa = kappa_from_geometry(geo.zeta, geo.l_c)?;
                let omega_c = omega_c_from_geometry(geo.zeta, geo.l_c, n_c)?;
                let sys = ModeSystem {
                    omega_c,
                    omega_f: omega_c,
                    g: 0.0,
                    kappa,
                    eta_l: kappa.sqrt() * config.drive.a_in,
                    eta_r: 0.0,
                    phi: 0.0,
                    omega: omega_c,
                };
                (
                    OpticalStack::single_cavity(geo.zeta, geo.l_c)?,
                    sys,
                    CoupledObservable::LeftOutput,
                    None,
                )
            }
        };
        sys.eta_r = sys.kappa.sqrt() * config.drive.d_in;
        sys.phi = config.drive.d_phase;
        let o = &config.coupled;
        if let Some(k) = o.kappa {
            sys.kappa = k;
            sys.eta_l = k.sqrt() * config.drive.a_in;
            sys.eta_r = k.sqrt() * config.drive.d_in;
        }
        sys.g = o.g.unwrap_or(sys.g);
        sys.omega_f = o.omega_f.unwrap_or(sys.omega_f);
        sys.eta_l = o.eta_l.unwrap_or(sys.eta_l);
        sys.eta_r = o.eta_r.unwrap_or(sys.eta_r);
        sys.phi = o.phi.unwrap_or(sys.phi);
        sys.validate()?;
        Ok(Self {
            omega_c: sys.omega_c,
            kappa: sys.kappa,
            n_c,
            stack,
            sys,
            observable,
            matched,
        })
    }

    fn cascaded(&self, command: &str) -> Result<&CascadedMatch> {
        self.matched
            .as_ref()
            .ok_or_else(|| Error::Config(format!("`{command}` needs geometry.layout = \"cascaded\"")))
    }

    fn grid(&self, config: &ExperimentConfig, points: usize) -> Vec<f64> {
        match (config.sweep.min, config.sweep.max) {
            (Some(lo), Some(hi)) => {
                let scale = if config.sweep.normalized { self.omega_c } else { 1.0 };
                linspace(lo * scale, hi * scale, points)
            }
            _ => {
                let half = if self.sys.g > 0.0 {
                    3.0 * SQRT_2 * self.sys.g
                } else {
                    10.0 * self.kappa
                };
                linspace(self.omega_c - half, self.omega_c + half, points)
            }
        }
    }

    fn describe(&self, table: &mut CsvTable) {
        let s = &self.sys;
        table.comment(format!(
            "coupled model: omega_c={} omega_f={} g={} kappa={} eta_l={} eta_r={} phi={} order_n={}",
            fmt_f64(s.omega_c),
            fmt_f64(s.omega_f),
            fmt_f64(s.g),
            fmt_f64(s.kappa),
            fmt_f64(s.eta_l),
            fmt_f64(s.eta_r),
            fmt_f64(s.phi),
            self.n_c
        ));
        if let Some(m) = &self.matched {
            table.comment(format!(
                "scattering geometry: zeta={} l_c={} l_f={} (nominal {}), fiber order {}",
                fmt_f64(m.zeta),
                fmt_f64(m.l_c),
                fmt_f64(m.l_f),
                fmt_f64(m.l_f_nominal),
                m.n_f
            ));
            let how = match (m.fiber_detuning == 0.0, self.sys.omega_f == m.omega_f) {
                (_, false) => "omega_f overridden by configuration".to_owned(),
                (true, true) => "omega_f = omega_c (fiber length tuned to resonance)".to_owned(),
                (false, true) => format!(
                    "omega_f from the nominal fiber length, detuning {}",
                    fmt_f64(m.fiber_detuning)
                ),
            };
            table.comment(how);
        }
    }
}

/// The resolved configuration without the output directory, so that the same
/// run written to two places produces identical files.
fn embedded_config(config: &ExperimentConfig) -> ExperimentConfig {
    let mut embedded = config.clone();
    embedded.output.dir = None;
    embedded
}

fn header_table(config: &ExperimentConfig, columns: &[&str]) -> CsvTable {
    let mut table = CsvTable::new(columns);
    table.comment_block("config", &embedded_config(config).to_toml_string());
    table
}

fn cell(value: Option<f64>) -> String {
    value.map(fmt_f64).unwrap_or_default()
}

/// Transmitted photocurrent of both models versus drive frequency.
pub fn run_spectrum(config: &ExperimentConfig, out: &Path) -> Result<RunReport> {
    let setup = Setup::new(config)?;
    let grid = setup.grid(config, config.sweep.points);
    let a2 = config.drive.a_in * config.drive.a_in;
    if a2 == 0.0 {
        return Err(Error::Config("drive.a_in must be positive for a transmission spectrum".into()));
    }
    let scattering = if config.model.scattering() {
        let drive = DriveTemplate {
            a_in: config.drive.a_in.into(),
            d_in: num_complex::Complex64::from_polar(config.drive.d_in, -config.drive.d_phase),
        };
        Some(sweep_scattering(&setup.stack, &grid, &drive)?)
    } else {
        None
    };
    let coupled = if config.model.coupled() {
        Some(sweep_coupled_observable(&setup.sys, &grid, setup.observable)?)
    } else {
        None
    };

    let mut table = header_table(config, &["omega", "scattering_value", "coupled_value", "omega_norm"]);
    setup.describe(&mut table);
    table.comment("values normalized to |a_in|^2");
    for (i, &omega) in grid.iter().enumerate() {
        table.row(vec![
            fmt_f64(omega),
            cell(scattering.as_ref().map(|s| s.values[i])),
            cell(coupled.as_ref().map(|s| s.values[i] / a2)),
            fmt_f64(omega / setup.omega_c),
        ]);
    }
    let mut report = RunReport::default();
    report.files.push(table.write(out, "spectrum.csv")?);
    if config.output.svg {
        let norm: Vec<f64> = grid.iter().map(|w| w / setup.omega_c).collect();
        let coupled_norm: Option<Vec<f64>> = coupled
            .as_ref()
            .map(|s| s.values.iter().map(|v| v / a2).collect());
        let mut series = Vec::new();
        if let Some(s) = &scattering {
            series.push(Series { name: "scattering", x: &norm, y: &s.values, color: "black" });
        }
        if let Some(c) = &coupled_norm {
            series.push(Series { name: "coupled", x: &norm, y: c, color: "red" });
        }
        let svg = line_plot("Transmitted photocurrent", "omega / omega_c", "photocurrent", &series, false);
        report.files.push(write_file(out, "spectrum.svg", &svg)?);
    }
    report.summary.push(format!(
        "spectrum: {} points around omega_c = {}",
        grid.len(),
        fmt_f64(setup.omega_c)
    ));
    Ok(report)
}

/// Difference of side-to-middle peak distances (scattering minus coupled)
/// over a polarizability grid.
pub fn run_delta(config: &ExperimentConfig, out: &Path) -> Result<RunReport> {
    if config.geometry.layout != Layout::Cascaded {
        return Err(Error::Config("`delta` needs geometry.layout = \"cascaded\"".into()));
    }
    let geo = &config.geometry;
    let n_c = match (geo.n_c, geo.target_omega) {
        (Some(n), _) => n,
        (None, Some(target)) => nearest_order(geo.zeta, geo.l_c, target)?,
        (None, None) => CascadedOptions::default().n_c,
    };
    let options = CascadedOptions {
        n_c,
        n_f: geo.n_f,
        fiber: geo.fiber,
        coupling: geo.coupling,
    };
    let entries = peak_separation_delta(&config.delta.zetas, geo.l_c, geo.l_f, &options, config.sweep.points);

    let mut table = header_table(
        config,
        &[
            "zeta",
            "delta_left",
            "delta_right",
            "delta_mean",
            "kappa",
            "errors",
            "delta_mean_over_kappa",
        ],
    );
    table.comment("delta = scattering minus coupled side-to-middle peak distance, from Lorentzian-fitted centers");
    let mut report = RunReport::default();
    for e in &entries {
        let d = e.distances.as_ref();
        table.row(vec![
            fmt_f64(e.zeta),
            cell(d.map(|d| d.delta_left)),
            cell(d.map(|d| d.delta_right)),
            cell(d.map(|d| d.delta_mean)),
            cell(e.kappa),
            e.error.clone().unwrap_or_default(),
            cell(e.delta_mean_over_kappa()),
        ]);
        report.summary.push(match (e.delta_mean_over_kappa(), &e.error) {
            (Some(r), _) => format!("zeta {}: delta_mean = {} kappa", fmt_f64(e.zeta), fmt_f64(r)),
            (None, Some(err)) => format!("zeta {}: {err}", fmt_f64(e.zeta)),
            (None, None) => format!("zeta {}: no result", fmt_f64(e.zeta)),
        });
    }
    report.files.push(table.write(out, "delta.csv")?);
    if config.output.svg {
        let (zs, ds): (Vec<f64>, Vec<f64>) = entries
            .iter()
            .filter_map(|e| Some((e.zeta, e.delta_mean_over_kappa()?.abs())))
            .unzip();
        let svg = line_plot(
            "Peak-separation difference",
            "zeta",
            "|delta_mean| / kappa",
            &[Series { name: "scattering - coupled", x: &zs, y: &ds, color: "black" }],
            true,
        );
        report.files.push(write_file(out, "delta.svg", &svg)?);
    }
    Ok(report)
}

/// Left and right cavity intensities of both models.
pub fn run_profile(config: &ExperimentConfig, out: &Path) -> Result<RunReport> {
    let setup = Setup::new(config)?;
    let matched = setup.cascaded("profile")?;
    let grid = setup.grid(config, config.sweep.points);
    let curves = intensity_comparison(matched, &grid)?;
    // Overrides and drive strength apply to the coupled columns.
    let coupled = if config.model.coupled() {
        let left = sweep_coupled_observable(&setup.sys, &grid, CoupledObservable::LeftCavity)?;
        let right = sweep_coupled_observable(&setup.sys, &grid, CoupledObservable::RightCavity)?;
        Some((left.values, right.values))
    } else {
        None
    };
    let a2 = config.drive.a_in * config.drive.a_in;
    let norm = if a2 > 0.0 { a2 } else { 1.0 };

    let mut table = header_table(
        config,
        &["omega", "scat_left", "scat_right", "coupled_left", "coupled_right", "omega_norm"],
    );
    setup.describe(&mut table);
    table.comment("scattering: |A|^2 + |B|^2 per cavity for a_in = 1; coupled: |alpha|^2, |beta|^2 divided by |a_in|^2");
    let scat = config.model.scattering();
    for (i, &omega) in grid.iter().enumerate() {
        table.row(vec![
            fmt_f64(omega),
            cell(scat.then(|| curves.scattering_left[i])),
            cell(scat.then(|| curves.scattering_right[i])),
            cell(coupled.as_ref().map(|c| c.0[i] / norm)),
            cell(coupled.as_ref().map(|c| c.1[i] / norm)),
            fmt_f64(omega / setup.omega_c),
        ]);
    }
    let mut report = RunReport::default();
    report.files.push(table.write(out, "profile.csv")?);
    if config.output.svg {
        let x: Vec<f64> = grid.iter().map(|w| w / setup.omega_c).collect();
        let mut series = Vec::new();
        if scat {
            series.push(Series { name: "scattering left", x: &x, y: &curves.scattering_left, color: "black" });
            series.push(Series { name: "scattering right", x: &x, y: &curves.scattering_right, color: "gray" });
        }
        if let Some((l, r)) = &coupled {
            series.push(Series { name: "coupled left", x: &x, y: l, color: "red" });
            series.push(Series { name: "coupled right", x: &x, y: r, color: "orange" });
        }
        let svg = line_plot("Cavity intensities", "omega / omega_c", "intensity", &series, false);
        report.files.push(write_file(out, "profile.svg", &svg)?);
    }
    report.summary.push(format!("profile: {} points", grid.len()));
    Ok(report)
}

/// Fiber intensity under two-sided drive `A = 1`, `D = exp(-i phi)`, and its
/// sinusoidal fit at every frequency.
pub fn run_darkmode(config: &ExperimentConfig, out: &Path) -> Result<RunReport> {
    let setup = Setup::new(config)?;
    setup.cascaded("darkmode")?;
    let grid = setup.grid(config, config.phase.omega_points);
    let phi = linspace(-PI, PI, config.phase.points);
    let scattering = dark_mode_scan(&setup.stack, &grid, &phi)?;
    let sys = ModeSystem {
        eta_l: setup.sys.kappa.sqrt(),
        ..setup.sys
    };
    let coupled = coupled_dark_mode_scan(&sys, &grid, &phi)?;
    let scat_fits = scattering.fits()?;
    let coupled_fits = coupled.fits()?;
    let use_scat = config.model.scattering();
    let use_coupled = config.model.coupled();

    let mut scan = header_table(
        config,
        &["omega", "phi", "fiber_intensity", "coupled_fiber_intensity", "omega_norm"],
    );
    setup.describe(&mut scan);
    scan.comment("drive A = 1 from the left and D = exp(-i phi) from the right; coupled eta_l = eta_r = sqrt(kappa)");
    for (i, &omega) in grid.iter().enumerate() {
        for (j, &p) in phi.iter().enumerate() {
            scan.row(vec![
                fmt_f64(omega),
                fmt_f64(p),
                cell(use_scat.then(|| scattering.intensity[i][j])),
                cell(use_coupled.then(|| coupled.intensity[i][j])),
                fmt_f64(omega / setup.omega_c),
            ]);
        }
    }
    let mut fits = header_table(
        config,
        &[
            "omega",
            "c0",
            "c1",
            "phi0",
            "residual",
            "coupled_c0",
            "coupled_c1",
            "coupled_phi0",
            "coupled_residual",
            "omega_norm",
        ],
    );
    setup.describe(&mut fits);
    fits.comment("intensity = c0 + c1 cos(phi - phi0); residual is the largest absolute deviation");
    for (i, &omega) in grid.iter().enumerate() {
        let s = use_scat.then(|| scat_fits[i]);
        let c = use_coupled.then(|| coupled_fits[i]);
        fits.row(vec![
            fmt_f64(omega),
            cell(s.map(|f| f.c0)),
            cell(s.map(|f| f.c1)),
            cell(s.map(|f| f.phi0)),
            cell(s.map(|f| f.residual)),
            cell(c.map(|f| f.c0)),
            cell(c.map(|f| f.c1)),
            cell(c.map(|f| f.phi0)),
            cell(c.map(|f| f.residual)),
            fmt_f64(omega / setup.omega_c),
        ]);
    }

    let mut report = RunReport::default();
    report.files.push(scan.write(out, "darkmode.csv")?);
    report.files.push(fits.write(out, "darkmode_fit.csv")?);
    let best = scat_fits
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.contrast_ratio().total_cmp(&b.1.contrast_ratio()))
        .map(|(i, f)| (i, *f))
        .expect("grid has at least three points");
    report.summary.push(format!(
        "scattering: deepest interference at omega/omega_c = {}, min/max = {}, minimum at phi = {}",
        fmt_f64(grid[best.0] / setup.omega_c),
        fmt_f64(best.1.contrast_ratio()),
        fmt_f64(best.1.minimum_phase())
    ));
    report.summary.push(format!(
        "coupled: minimum at phi = {} at the same frequency",
        fmt_f64(coupled_fits[best.0].minimum_phase())
    ));
    if config.output.svg {
        let i = best.0;
        let mut series = Vec::new();
        if use_scat {
            series.push(Series { name: "scattering", x: &phi, y: &scattering.intensity[i], color: "black" });
        }
        if use_coupled {
            series.push(Series { name: "coupled", x: &phi, y: &coupled.intensity[i], color: "red" });
        }
        let title = format!("Fiber intensity at omega/omega_c = {:.6}", grid[i] / setup.omega_c);
        let svg = line_plot(&title, "phi", "fiber intensity", &series, true);
        report.files.push(write_file(out, "darkmode.svg", &svg)?);
    }
    Ok(report)
}

#[derive(Serialize)]
struct MatchFile<'a> {
    tool: &'static str,
    config: &'a ExperimentConfig,
    layout: Layout,
    zeta: f64,
    l_c: f64,
    kappa: f64,
    omega_c: f64,
    omega_c_normalized_order: f64,
    order_n: u32,
    eta_l: f64,
    free_spectral_range: f64,
    mirror_reflectivity: f64,
    fiber: Option<FiberParams>,
    provenance: Provenance,
}

#[derive(Serialize)]
struct FiberParams {
    l_f_nominal: f64,
    l_f: f64,
    fiber_length: FiberLength,
    n_f: u32,
    omega_f: f64,
    fiber_detuning: f64,
    fiber_order_found: bool,
    g: f64,
    coupling_rule: CouplingRule,
    g_arithmetic_mean: f64,
    g_geometric_mean: f64,
}

#[derive(Serialize)]
struct Provenance {
    kappa: &'static str,
    omega_c: &'static str,
    eta_l: &'static str,
    g_arithmetic_mean: &'static str,
    g_geometric_mean: &'static str,
    mirror_reflectivity: &'static str,
}

/// Matched coupled-oscillator parameters as JSON.
pub fn run_match(config: &ExperimentConfig, out: &Path) -> Result<RunReport> {
    let setup = Setup::new(config)?;
    let geo = &config.geometry;
    let fiber = match &setup.matched {
        Some(m) => Some(FiberParams {
            l_f_nominal: m.l_f_nominal,
            l_f: m.l_f,
            fiber_length: geo.fiber,
            n_f: m.n_f,
            omega_f: m.omega_f,
            fiber_detuning: m.fiber_detuning,
            fiber_order_found: m.fiber_order_found,
            g: m.params.g,
            coupling_rule: m.coupling_rule,
            g_arithmetic_mean: g_from_geometry(geo.zeta, m.l_c, m.l_f)?,
            g_geometric_mean: g_unequal_lengths(geo.zeta, m.l_c, m.l_f)?,
        }),
        None => None,
    };
    let r = crate::scattering::reflectivity(geo.zeta)?.norm_sqr();
    let embedded = embedded_config(config);
    let file = MatchFile {
        tool: TOOL,
        config: &embedded,
        layout: geo.layout,
        zeta: geo.zeta,
        l_c: geo.l_c,
        kappa: setup.kappa,
        omega_c: setup.omega_c,
        omega_c_normalized_order: setup.omega_c * geo.l_c / PI,
        order_n: setup.n_c,
        eta_l: setup.sys.eta_l,
        free_spectral_range: PI / geo.l_c,
        mirror_reflectivity: r,
        fiber,
        provenance: Provenance {
            kappa: "kappa = (c/L_C) / (2 zeta sqrt(zeta^2 + 1)); Lorentzian approximation of the single-cavity transmission",
            omega_c: "omega_c = (c/L_C) (n pi - atan(1/zeta)); single-cavity transmission maximum",
            eta_l: "eta_l = sqrt(kappa) |A|; equal resonant photocurrents",
            g_arithmetic_mean: "g = c / ((L_1 + L_2) sqrt(1 + zeta^2)); three-mirror normal-mode splitting 2g",
            g_geometric_mean: "g = c / (2 sqrt(L_1 L_2) sqrt(1 + zeta^2)); splitting of co-resonant cavities of unequal length",
            mirror_reflectivity: "|r|^2 = zeta^2 / (1 + zeta^2)",
        },
    };
    let mut json = serde_json::to_string_pretty(&file).map_err(|e| Error::Config(e.to_string()))?;
    json.push('\n');
    let mut report = RunReport::default();
    report.files.push(write_file(out, "params.json", &json)?);
    report.summary.push(format!(
        "kappa = {}, omega_c = {}{}",
        fmt_f64(setup.kappa),
        fmt_f64(setup.omega_c),
        file.fiber
            .as_ref()
            .map(|f| format!(", g = {}, l_f = {}", fmt_f64(f.g), fmt_f64(f.l_f)))
            .unwrap_or_default()
    ));
    Ok(report)
}
