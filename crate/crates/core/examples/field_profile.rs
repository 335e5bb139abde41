// Standing-wave intensity along the cascaded stack at the three resonances,
// and the per-cavity intensities of both models.
//
//     cargo run --example field_profile

use cavity_cascade::coupled::three_mode_eigenfrequencies;
use cavity_cascade::matching::{linspace, match_cascaded, CascadedOptions};
use cavity_cascade::scattering::{field_profile, BoundaryDrive};
use cavity_cascade::spectra::intensity_comparison;
use cavity_cascade::Result;

/// Largest intensity inside each region, per resonance.
pub fn run() -> Result<Vec<[f64; 5]>> {
    let m = match_cascaded(5.0, 1.0, 5.0, &CascadedOptions::default())?;
    let stack = m.stack()?;
    let (lo, mid, hi) = three_mode_eigenfrequencies(&m.mode_system(1.0)?);
    let mirrors = stack.mirror_positions();
    let xs = linspace(-0.5, stack.length() + 0.5, 2001);
    let mut out = Vec::new();
    for (name, omega) in [("lower", lo), ("middle", mid), ("upper", hi)] {
        let samples = field_profile(&stack, &BoundaryDrive::from_left(omega)?, &xs)?;
        let mut peak = [0.0f64; 5];
        for s in &samples {
            let region = mirrors.iter().filter(|&&p| p <= s.position).count();
            peak[region] = peak[region].max(s.intensity);
        }
        println!(
            "{name:>6} resonance: max intensity by region  {:.3} | {:.1} | {:.1} | {:.1} | {:.3}",
            peak[0], peak[1], peak[2], peak[3], peak[4]
        );
        out.push(peak);
    }

    let grid = m.default_window(9);
    let curves = intensity_comparison(&m, &grid)?;
    for (i, omega) in grid.iter().enumerate() {
        println!(
            "omega/omega_c {:.5}: left {:.2} / {:.2}   right {:.2} / {:.2}   (scattering / coupled)",
            omega / m.params.omega_c,
            curves.scattering_left[i],
            curves.coupled_left[i],
            curves.scattering_right[i],
            curves.coupled_right[i]
        );
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run().map(|_| ())
}
