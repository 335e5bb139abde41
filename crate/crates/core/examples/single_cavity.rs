// Single two-mirror cavity: brute-force transmission, resonance position and
// Lorentzian line width compared with the analytic cavity parameters.
//
//     cargo run --example single_cavity

use cavity_cascade::matching::{kappa_from_geometry, linspace, omega_c_from_geometry};
use cavity_cascade::scattering::OpticalStack;
use cavity_cascade::spectra::{find_peaks, fit_peaks, sweep_scattering, DriveTemplate, DEFAULT_MIN_PROMINENCE};
use cavity_cascade::Result;

pub struct LineCheck {
    pub zeta: f64,
    pub kappa: f64,
    pub omega_c: f64,
    pub center: f64,
    pub half_width: f64,
    pub peak: f64,
}

pub fn run() -> Result<Vec<LineCheck>> {
    let mut out = Vec::new();
    for zeta in [2.0, 5.0, 20.0] {
        let kappa = kappa_from_geometry(zeta, 1.0)?;
        let omega_c = omega_c_from_geometry(zeta, 1.0, 10)?;
        let grid = linspace(omega_c - 8.0 * kappa, omega_c + 8.0 * kappa, 2001);
        let spec = sweep_scattering(&OpticalStack::single_cavity(zeta, 1.0)?, &grid, &DriveTemplate::from_left())?;
        let found = find_peaks(&spec, DEFAULT_MIN_PROMINENCE)?;
        let fitted = fit_peaks(&spec, &found, 0.2)?;
        let p = &fitted.peaks[0];
        println!(
            "zeta {zeta:>4}: kappa {kappa:.6e}  fitted width/kappa {:.6}  (center - omega_c)/kappa {:+.2e}  peak {:.12}",
            p.half_width / kappa,
            (p.center - omega_c) / kappa,
            spec.max_value()
        );
        out.push(LineCheck {
            zeta,
            kappa,
            omega_c,
            center: p.center,
            half_width: p.half_width,
            peak: spec.max_value(),
        });
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run().map(|_| ())
}
