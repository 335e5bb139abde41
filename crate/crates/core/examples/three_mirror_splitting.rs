// Two cavities sharing a middle mirror: the resonance splits into a doublet
// separated by twice the coupling rate.
//
//     cargo run --example three_mirror_splitting

use cavity_cascade::matching::{g_from_geometry, kappa_from_geometry, linspace, omega_c_from_geometry};
use cavity_cascade::scattering::OpticalStack;
use cavity_cascade::spectra::{find_peaks, fit_peaks, sweep_scattering, DriveTemplate, DEFAULT_MIN_PROMINENCE};
use cavity_cascade::Result;

/// Returns `(measured splitting, 2g)`.
pub fn run() -> Result<(f64, f64)> {
    let zeta = 5.0;
    let g = g_from_geometry(zeta, 1.0, 1.0)?;
    let kappa = kappa_from_geometry(zeta, 1.0)?;
    let omega_c = omega_c_from_geometry(zeta, 1.0, 10)?;
    let grid = linspace(omega_c - 4.0 * g, omega_c + 4.0 * g, 8001);
    let spec = sweep_scattering(&OpticalStack::three_mirror(zeta, 1.0, 1.0)?, &grid, &DriveTemplate::from_left())?;
    let peaks = fit_peaks(&spec, &find_peaks(&spec, DEFAULT_MIN_PROMINENCE)?, 0.2)?;
    let centers = peaks.centers();
    let split = centers[centers.len() - 1] - centers[0];
    println!("kappa = {kappa:.6}, g = {g:.6}");
    println!("{} peaks at {:?}", centers.len(), centers);
    println!("splitting {split:.6} vs 2g {:.6} ({:+.3}%)", 2.0 * g, 100.0 * (split / (2.0 * g) - 1.0));
    Ok((split, 2.0 * g))
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run().map(|_| ())
}
