// Two cavities coupled through a long fiber: the transmitted photocurrent of
// the scattering model and of the matched three-mode model, side by side.
//
//     cargo run --example cascaded_spectrum

use cavity_cascade::coupled::three_mode_eigenfrequencies;
use cavity_cascade::matching::{match_cascaded, CascadedOptions};
use cavity_cascade::spectra::{sweep_coupled, sweep_scattering, three_peaks, DriveTemplate};
use cavity_cascade::Result;

/// Fitted peak centers, `(scattering, coupled)`.
pub fn run() -> Result<([f64; 3], [f64; 3])> {
    let m = match_cascaded(5.0, 1.0, 5.0, &CascadedOptions::default())?;
    println!(
        "kappa {:.6}  omega_c {:.6}  g {:.6}  fiber length {:.6} (nominal {})",
        m.params.kappa, m.params.omega_c, m.params.g, m.l_f, m.l_f_nominal
    );
    let grid = m.default_window(4001);
    let scattering = sweep_scattering(&m.stack()?, &grid, &DriveTemplate::from_left())?;
    let sys = m.mode_system(1.0)?;
    let coupled = sweep_coupled(&sys, &grid)?;

    let s = three_peaks(&scattering)?.map(|p| p.center);
    let c = three_peaks(&coupled)?.map(|p| p.center);
    let (lo, mid, hi) = three_mode_eigenfrequencies(&sys);
    println!("eigenfrequencies  {lo:.6} {mid:.6} {hi:.6}");
    println!("coupled peaks     {:.6} {:.6} {:.6}", c[0], c[1], c[2]);
    println!("scattering peaks  {:.6} {:.6} {:.6}", s[0], s[1], s[2]);

    for i in (0..grid.len()).step_by(400) {
        println!(
            "  omega/omega_c {:.5}  scattering {:.4e}  coupled {:.4e}",
            grid[i] / m.params.omega_c,
            scattering.values[i],
            coupled.values[i]
        );
    }
    Ok((s, c))
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run().map(|_| ())
}
