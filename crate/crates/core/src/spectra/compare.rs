use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    find_peaks, fit_peaks, sweep_coupled, sweep_scattering, DriveTemplate, Peak, Spectrum,
    DEFAULT_MIN_PROMINENCE,
};
use crate::coupled::steady_state;
use crate::error::{Error, Result};
use crate::matching::{match_cascaded, CascadedMatch, CascadedOptions};
use crate::scattering::{solve_boundary, BoundaryDrive};

/// Samples kept around each resonance for the Lorentzian fit, as a fraction
/// of the peak value.
const FIT_FLOOR: f64 = 0.2;

/// The three most prominent resonances, fitted and sorted by center.
pub fn three_peaks(spec: &Spectrum) -> Result<[Peak; 3]> {
    let mut found = find_peaks(spec, DEFAULT_MIN_PROMINENCE)?;
    if found.len() < 3 {
        return Err(Error::InvalidSpectrum(format!(
            "expected three resonances, found {}",
            found.len()
        )));
    }
    found
        .peaks
        .sort_by(|a, b| b.prominence.total_cmp(&a.prominence));
    found.peaks.truncate(3);
    let fitted = fit_peaks(spec, &found, FIT_FLOOR)?;
    Ok([fitted.peaks[0], fitted.peaks[1], fitted.peaks[2]])
}

/// Distances of the outer resonances from the middle one, and their
/// differences between two spectra.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SideDistances {
    /// `middle - left` in the first spectrum.
    pub reference_left: f64,
    /// `right - middle` in the first spectrum.
    pub reference_right: f64,
    pub other_left: f64,
    pub other_right: f64,
    /// `reference_left - other_left`.
    pub delta_left: f64,
    /// `reference_right - other_right`.
    pub delta_right: f64,
    pub delta_mean: f64,
    pub reference_centers: [f64; 3],
    pub other_centers: [f64; 3],
}

pub fn separation_delta(reference: &Spectrum, other: &Spectrum) -> Result<SideDistances> {
    let r = three_peaks(reference)?;
    let o = three_peaks(other)?;
    let reference_left = r[1].center - r[0].center;
    let reference_right = r[2].center - r[1].center;
    let other_left = o[1].center - o[0].center;
    let other_right = o[2].center - o[1].center;
    let delta_left = reference_left - other_left;
    let delta_right = reference_right - other_right;
    Ok(SideDistances {
        reference_left,
        reference_right,
        other_left,
        other_right,
        delta_left,
        delta_right,
        delta_mean: 0.5 * (delta_left + delta_right),
        reference_centers: [r[0].center, r[1].center, r[2].center],
        other_centers: [o[0].center, o[1].center, o[2].center],
    })
}

/// Peak-separation difference (scattering minus coupled) at one
/// polarizability.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaEntry {
    pub zeta: f64,
    pub kappa: Option<f64>,
    pub distances: Option<SideDistances>,
    pub error: Option<String>,
}

impl DeltaEntry {
    pub fn delta_mean_over_kappa(&self) -> Option<f64> {
        Some(self.distances?.delta_mean / self.kappa?)
    }
}

/// For each `zeta`, matches both models to the cascaded geometry, sweeps
/// them over the default window, and compares the side-to-middle peak
/// distances. Failures are recorded per entry and the sweep continues.
pub fn peak_separation_delta(
    zetas: &[f64],
    l_c: f64,
    l_f: f64,
    options: &CascadedOptions,
    points: usize,
) -> Vec<DeltaEntry> {
    zetas
        .par_iter()
        .map(|&zeta| {
            let outcome = (|| -> Result<(f64, SideDistances)> {
                if zeta.is_nan() || zeta <= 1.0 {
                    return Err(Error::Domain {
                        name: "zeta",
                        value: zeta,
                        reason: "peaks are resolvable only for zeta > 1",
                    });
                }
                let m = match_cascaded(zeta, l_c, l_f, options)?;
                let grid = m.default_window(points);
                let scattering = sweep_scattering(&m.stack()?, &grid, &DriveTemplate::from_left())?;
                let coupled = sweep_coupled(&m.mode_system(1.0)?, &grid)?;
                Ok((m.params.kappa, separation_delta(&scattering, &coupled)?))
            })();
            match outcome {
                Ok((kappa, distances)) => DeltaEntry {
                    zeta,
                    kappa: Some(kappa),
                    distances: Some(distances),
                    error: None,
                },
                Err(e) => DeltaEntry {
                    zeta,
                    kappa: None,
                    distances: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect()
}

/// Cavity intensities of both models for a left drive `a_in = 1`, i.e.
/// `eta_l = sqrt(kappa)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntensityCurves {
    pub omega: Vec<f64>,
    /// `|A|^2 + |B|^2` in the left cavity.
    pub scattering_left: Vec<f64>,
    pub scattering_right: Vec<f64>,
    /// `|alpha|^2`.
    pub coupled_left: Vec<f64>,
    /// `|beta|^2`.
    pub coupled_right: Vec<f64>,
}

pub fn intensity_comparison(matched: &CascadedMatch, omega_grid: &[f64]) -> Result<IntensityCurves> {
    super::validate_grid(omega_grid)?;
    let stack = matched.stack()?;
    let sys = matched.mode_system(1.0)?;
    let rows = omega_grid
        .par_iter()
        .map(|&omega| {
            let sol = solve_boundary(&stack, &BoundaryDrive::from_left(omega)?)?;
            let amps = steady_state(&sys.at_frequency(omega))?;
            Ok((
                sol.regions[1].intensity(),
                sol.regions[3].intensity(),
                amps.alpha.norm_sqr(),
                amps.beta.norm_sqr(),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut curves = IntensityCurves {
        omega: omega_grid.to_vec(),
        scattering_left: Vec::with_capacity(rows.len()),
        scattering_right: Vec::with_capacity(rows.len()),
        coupled_left: Vec::with_capacity(rows.len()),
        coupled_right: Vec::with_capacity(rows.len()),
    };
    for (sl, sr, cl, cr) in rows {
        curves.scattering_left.push(sl);
        curves.scattering_right.push(sr);
        curves.coupled_left.push(cl);
        curves.coupled_right.push(cr);
    }
    Ok(curves)
}
