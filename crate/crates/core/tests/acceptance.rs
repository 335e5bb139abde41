// Acceptance criteria, one PASS/FAIL line each. Run with
// `cargo test --test acceptance`; exits non-zero if any criterion fails.

use std::f64::consts::{PI, SQRT_2};
use std::process::{Command as Process, ExitCode};

use cavity_cascade::coupled::{steady_state, three_mode_eigenfrequencies, ModeSystem};
use cavity_cascade::matching::{
    g_from_geometry, kappa_from_geometry, linspace, match_cascaded, omega_c_from_geometry, CascadedOptions,
};
use cavity_cascade::scattering::{
    compose, reflectivity, solve_boundary, BoundaryDrive, OpticalStack, StackElement,
};
use cavity_cascade::spectra::{
    dark_mode_scan, find_peaks, fit_peaks, peak_separation_delta, sweep_coupled, sweep_coupled_observable,
    sweep_scattering, CoupledObservable, DriveTemplate, DEFAULT_MIN_PROMINENCE,
};
use cavity_cascade::Complex64;
use proptest::strategy::ValueTree;
use proptest::test_runner::TestRunner;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn transmission(stack: &OpticalStack, k: f64) -> f64 {
    solve_boundary(stack, &BoundaryDrive::from_left(k).unwrap()).unwrap().c_out.norm_sqr()
}

/// Golden-section maximum of a unimodal function on `[a, b]`.
fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    while b - a > 1e-13 * b.abs() {
        let c = b - phi * (b - a);
        let d = a + phi * (b - a);
        if f(c) > f(d) {
            b = d;
        } else {
            a = c;
        }
    }
    0.5 * (a + b)
}

fn criterion_1() -> Outcome {
    let r2 = reflectivity(5.0).map_err(|e| e.to_string())?.norm_sqr();
    // Also measured from the transfer-matrix solution of a bare mirror.
    let mirror = OpticalStack::new(vec![StackElement::Mirror { zeta: 5.0 }]).unwrap();
    let solved = solve_boundary(&mirror, &BoundaryDrive::from_left(1.0).unwrap()).unwrap().b_out.norm_sqr();
    check(
        (r2 - 25.0 / 26.0).abs() < 5e-3 && (r2 - 0.96).abs() < 5e-3 && (solved - 25.0 / 26.0).abs() < 5e-3,
        format!("|r|^2 = {r2:.9}, solved {solved:.9}, 25/26 = {:.9} (tol 5e-3)", 25.0 / 26.0),
    )
}

fn criterion_2() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for (zeta, tol) in [(5.0, 0.01), (20.0, 0.001)] {
        let kappa = kappa_from_geometry(zeta, 1.0).unwrap();
        let omega_c = omega_c_from_geometry(zeta, 1.0, 10).unwrap();
        let grid = linspace(omega_c - 8.0 * kappa, omega_c + 8.0 * kappa, 4001);
        let spec = sweep_scattering(&OpticalStack::single_cavity(zeta, 1.0).unwrap(), &grid, &DriveTemplate::from_left())
            .map_err(|e| e.to_string())?;
        let peaks = find_peaks(&spec, DEFAULT_MIN_PROMINENCE).map_err(|e| e.to_string())?;
        let fit = fit_peaks(&spec, &peaks, 0.2).map_err(|e| e.to_string())?;
        let rel = fit.peaks[0].half_width / kappa - 1.0;
        ok &= rel.abs() < tol;
        parts.push(format!("zeta {zeta}: w/kappa - 1 = {rel:+.2e} (tol {tol})"));
    }
    check(ok, parts.join("; "))
}

fn criterion_3() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for zeta in [2.0, 5.0, 20.0] {
        let stack = OpticalStack::single_cavity(zeta, 1.0).unwrap();
        let predicted = omega_c_from_geometry(zeta, 1.0, 10).unwrap();
        // Dense sweep over one full free spectral range, then refine.
        let grid = linspace(10.0 * PI - 0.5 * PI, 10.0 * PI + 0.5 * PI, 20001);
        let spec = sweep_scattering(&stack, &grid, &DriveTemplate::from_left()).map_err(|e| e.to_string())?;
        let i = (0..grid.len()).max_by(|&a, &b| spec.values[a].total_cmp(&spec.values[b])).unwrap();
        let step = grid[1] - grid[0];
        let found = golden_max(|k| transmission(&stack, k), grid[i] - step, grid[i] + step);
        let err = (found - predicted).abs() / PI;
        ok &= err < 1e-4;
        parts.push(format!("zeta {zeta}: |dk|/FSR = {err:.1e}"));
    }
    check(ok, format!("{} (tol 1e-4)", parts.join("; ")))
}

fn criterion_4() -> Outcome {
    let mut worst = 0.0f64;
    for zeta in [0.5, 2.0, 5.0, 20.0, 100.0] {
        for length in [1.0, 2.7] {
            let stack = OpticalStack::single_cavity(zeta, length).unwrap();
            let omega_c = omega_c_from_geometry(zeta, length, 10).unwrap();
            let kappa = kappa_from_geometry(zeta, length).unwrap();
            let peak = golden_max(|k| transmission(&stack, k), omega_c - kappa, omega_c + kappa);
            worst = worst.max((transmission(&stack, peak) - 1.0).abs());
            worst = worst.max((transmission(&stack, omega_c) - 1.0).abs());
        }
    }
    check(worst < 1e-9, format!("max |T_peak - 1| = {worst:.1e} (tol 1e-9)"))
}

fn criterion_5() -> Outcome {
    let zeta = 5.0;
    let g = g_from_geometry(zeta, 1.0, 1.0).unwrap();
    let omega_c = omega_c_from_geometry(zeta, 1.0, 10).unwrap();
    let stack = OpticalStack::three_mirror(zeta, 1.0, 1.0).unwrap();
    let lower = golden_max(|k| transmission(&stack, k), omega_c - 2.0 * g, omega_c);
    let upper = golden_max(|k| transmission(&stack, k), omega_c, omega_c + 2.0 * g);
    let rel = (upper - lower) / (2.0 * g) - 1.0;
    check(
        rel.abs() < 0.01,
        format!("splitting {:.6} vs 2g {:.6}: {rel:+.2e} (tol 1e-2)", upper - lower, 2.0 * g),
    )
}

fn criterion_6() -> Outcome {
    let options = CascadedOptions::default();
    let m = match_cascaded(5.0, 1.0, 5.0, &options).map_err(|e| e.to_string())?;
    // Half the fiber free spectral range on each side of the cavity resonance.
    let half = 0.5 * PI / m.l_f;
    let grid = linspace(m.params.omega_c - half, m.params.omega_c + half, 20001);
    let scattering = sweep_scattering(&m.stack().unwrap(), &grid, &DriveTemplate::from_left()).map_err(|e| e.to_string())?;
    let coupled = sweep_coupled(&m.mode_system(1.0).unwrap(), &grid).map_err(|e| e.to_string())?;
    let ns = find_peaks(&scattering, DEFAULT_MIN_PROMINENCE).map_err(|e| e.to_string())?.len();
    let nc = find_peaks(&coupled, DEFAULT_MIN_PROMINENCE).map_err(|e| e.to_string())?.len();

    let entries = peak_separation_delta(&[3.0, 5.0, 8.0, 12.0, 20.0], 1.0, 5.0, &options, 4001);
    let mut deltas = Vec::new();
    for e in &entries {
        match (&e.distances, e.kappa) {
            (Some(d), Some(k)) => deltas.push((e.zeta, d.delta_mean.abs(), k)),
            _ => return Err(format!("zeta {}: {}", e.zeta, e.error.clone().unwrap_or_default())),
        }
    }
    let monotone = deltas.windows(2).all(|w| w[1].1 < w[0].1);
    let (_, d20, k20) = deltas[deltas.len() - 1];
    let list: Vec<String> = deltas.iter().map(|(z, d, k)| format!("{z}:{:.3}", d / k)).collect();
    check(
        ns == 3 && nc == 3 && monotone && d20 < 0.5 * k20,
        format!(
            "peaks {ns}/{nc} (scattering/coupled); |delta|/kappa by zeta [{}]; monotone {monotone}; zeta 20 bound 0.5",
            list.join(" ")
        ),
    )
}

fn criterion_7() -> Outcome {
    use proptest::prelude::*;
    let element = prop_oneof![
        (0.5f64..50.0).prop_map(|zeta| StackElement::Mirror { zeta }),
        (0.01f64..3.0).prop_map(|length| StackElement::Gap { length }),
    ];
    let amp = || (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| Complex64::new(re, im));
    let case = (
        prop::collection::vec(element, 1..=16),
        0.1f64..50.0,
        amp(),
        amp(),
        amp(),
        amp(),
        amp(),
    );
    let mut runner = TestRunner::deterministic();
    let (mut det, mut flux, mut recip, mut lin) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let cases = 1000;
    for _ in 0..cases {
        let (elements, k, a1, d1, a2, d2, w) = case.new_tree(&mut runner).map_err(|e| e.to_string())?.current();
        let stack = OpticalStack::new(elements).unwrap();
        let m = compose(&stack, k).unwrap();
        // Rounding error of a 2x2 determinant scales with its products.
        let scale = (m.m11 * m.m22).norm() + (m.m12 * m.m21).norm();
        det = det.max((m.determinant() - 1.0).norm() / scale);

        let solve = |a: Complex64, d: Complex64| solve_boundary(&stack, &BoundaryDrive::new(a, d, k).unwrap()).unwrap();
        let s1 = solve(a1, d1);
        let s2 = solve(a2, d2);
        let sum = solve(a1 + w * a2, d1 + w * d2);
        flux = flux.max(s1.flux_imbalance().abs() / (a1.norm_sqr() + d1.norm_sqr()));
        lin = lin
            .max((sum.b_out - s1.b_out - w * s2.b_out).norm())
            .max((sum.c_out - s1.c_out - w * s2.c_out).norm());
        let left = solve(1.0.into(), 0.0.into());
        let right = solve(0.0.into(), 1.0.into());
        recip = recip.max((left.c_out - right.b_out).norm());
    }
    let worst = det.max(flux).max(recip).max(lin);
    check(
        worst < 1e-12,
        format!(
            "{cases} cases: det {det:.1e} (relative), flux {flux:.1e}, reciprocity {recip:.1e}, linearity {lin:.1e} (tol 1e-12)"
        ),
    )
}

fn criterion_8() -> Outcome {
    let sys = ModeSystem {
        omega_c: 3.0,
        omega_f: 3.0,
        g: 0.0,
        kappa: 1.0,
        eta_l: 1.0,
        eta_r: 0.0,
        phi: 0.0,
        omega: 0.0,
    };
    let grid = linspace(-7.0, 13.0, 2001);
    let spec = sweep_coupled_observable(&sys, &grid, CoupledObservable::LeftOutput).map_err(|e| e.to_string())?;
    let lorentz = grid
        .iter()
        .zip(&spec.values)
        .map(|(w, v)| (v - 1.0 / ((w - 3.0) * (w - 3.0) + 1.0)).abs())
        .fold(0.0, f64::max);

    let m = match_cascaded(5.0, 1.0, 5.0, &CascadedOptions::default()).unwrap();
    let base = m.mode_system(1.0).unwrap();
    let mut gamma = 0.0f64;
    for omega in m.default_window(401) {
        let amps = steady_state(&ModeSystem { eta_r: base.eta_l, phi: PI, omega, ..base }).unwrap();
        gamma = gamma.max(amps.gamma.norm());
    }
    let mut middle_exact = true;
    for (wc, wf, g) in [(31.2, 31.2, 0.04), (1.0, 1.3, 0.2), (10.0, 9.0, 1e-3)] {
        let s = ModeSystem { omega_c: wc, omega_f: wf, g, ..base };
        middle_exact &= three_mode_eigenfrequencies(&s).1 == wc;
    }
    check(
        lorentz < 1e-12 && gamma < 1e-14 && middle_exact,
        format!("Lorentzian error {lorentz:.1e} (tol 1e-12); dark |gamma| {gamma:.1e} (tol 1e-14); middle eigenfrequency exact: {middle_exact}"),
    )
}

fn criterion_9() -> Outcome {
    let m = match_cascaded(5.0, 1.0, 5.0, &CascadedOptions::default()).unwrap();
    let half = 3.0 * SQRT_2 * m.params.g;
    let omega = linspace(m.params.omega_c - half, m.params.omega_c + half, 801);
    let phi = linspace(-PI, PI, 73);
    let scan = dark_mode_scan(&m.stack().unwrap(), &omega, &phi).map_err(|e| e.to_string())?;
    let fits = scan.fits().map_err(|e| e.to_string())?;
    let residual = fits.iter().map(|f| f.residual / f.c0).fold(0.0, f64::max);
    let minimum = scan.intensity.iter().flatten().copied().fold(f64::INFINITY, f64::min);
    let (i, best) = fits
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.contrast_ratio().total_cmp(&b.1.contrast_ratio()))
        .unwrap();
    let row = &scan.intensity[i];
    let sampled = row.iter().copied().fold(f64::INFINITY, f64::min) / row.iter().copied().fold(0.0, f64::max);
    check(
        residual < 1e-9 && minimum > 0.0 && best.contrast_ratio() < 1e-3 && sampled < 1e-3,
        format!(
            "max relative residual {residual:.1e} (tol 1e-9); min intensity {minimum:.2e}; at omega/omega_c = {:.6} min/max {:.2e} fitted, {sampled:.2e} sampled (tol 1e-3)",
            omega[i] / m.params.omega_c,
            best.contrast_ratio()
        ),
    )
}

fn criterion_10() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for run in ["first", "second"] {
        let out = dir.path().join(run);
        let status = Process::new(env!("CARGO_BIN_EXE_cavity-cascade"))
            .args(["spectrum", "--quiet", "--out"])
            .arg(&out)
            .status()
            .map_err(|e| e.to_string())?;
        if !status.success() {
            return Err(format!("spectrum exited with {status}"));
        }
        outputs.push(std::fs::read(out.join("spectrum.csv")).map_err(|e| e.to_string())?);
    }
    check(
        outputs[0] == outputs[1],
        format!("two runs, {} bytes each, identical: {}", outputs[0].len(), outputs[0] == outputs[1]),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("mirror reflectivity", criterion_1),
        ("single-cavity line width", criterion_2),
        ("single-cavity resonance position", criterion_3),
        ("full transmission on resonance", criterion_4),
        ("three-mirror splitting", criterion_5),
        ("cascaded three-peak comparison", criterion_6),
        ("exact invariants", criterion_7),
        ("coupled-model analytics", criterion_8),
        ("dark-mode scan", criterion_9),
        ("CLI determinism", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
