// Driving the cascaded system from both sides: the fiber intensity follows a
// pure sinusoid in the relative phase and nearly vanishes at one frequency.
//
//     cargo run --release --example dark_modes

use std::f64::consts::PI;

use cavity_cascade::coupled::steady_state;
use cavity_cascade::matching::{linspace, match_cascaded, CascadedOptions};
use cavity_cascade::spectra::{coupled_dark_mode_scan, dark_mode_scan, SinusoidFit};
use cavity_cascade::Result;

/// `(omega / omega_c, fit)` at the frequency of deepest interference.
pub fn run() -> Result<(f64, SinusoidFit)> {
    let m = match_cascaded(5.0, 1.0, 5.0, &CascadedOptions::default())?;
    let omega = m.default_window(801);
    let phi = linspace(-PI, PI, 73);
    let scan = dark_mode_scan(&m.stack()?, &omega, &phi)?;
    let fits = scan.fits()?;
    let (i, best) = fits
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.contrast_ratio().total_cmp(&b.1.contrast_ratio()))
        .map(|(i, f)| (i, *f))
        .expect("non-empty grid");
    let worst = fits.iter().map(|f| f.residual / f.c0).fold(0.0, f64::max);
    println!(
        "scattering: deepest at omega/omega_c = {:.6}, min/max {:.2e}, dark phase {:+.3}, worst relative residual {:.1e}",
        omega[i] / m.params.omega_c,
        best.contrast_ratio(),
        best.minimum_phase(),
        worst
    );

    let sys = m.mode_system(1.0)?;
    let coupled = coupled_dark_mode_scan(&sys, &omega[i..=i], &phi)?.fits()?[0];
    println!(
        "coupled:    dark phase {:+.3}, min/max {:.2e}",
        coupled.minimum_phase(),
        coupled.contrast_ratio()
    );
    let dark = steady_state(&cavity_cascade::coupled::ModeSystem {
        eta_r: sys.eta_l,
        phi: PI,
        omega: sys.omega_c,
        ..sys
    })?;
    println!("coupled fiber amplitude at omega_c, phi = pi: {:.1e}", dark.gamma.norm());
    Ok((omega[i] / m.params.omega_c, best))
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run().map(|_| ())
}
