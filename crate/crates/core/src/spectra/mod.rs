//! Frequency sweeps of both models and the analysis built on them: resonance
//! extraction, model-versus-model comparisons, and two-sided phase scans.

mod compare;
mod darkmode;
mod peaks;

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coupled::{steady_state, ModeSystem};
use crate::error::{Error, Result};
use crate::scattering::{solve_boundary, BoundaryDrive, OpticalStack};

pub use compare::{
    intensity_comparison, peak_separation_delta, separation_delta, three_peaks, DeltaEntry,
    IntensityCurves, SideDistances,
};
pub use darkmode::{coupled_dark_mode_scan, dark_mode_scan, sinusoid_fit, PhaseScan, SinusoidFit};
pub use peaks::{find_peaks, fit_peaks, fit_window, lorentzian_fit, Peak, PeakSet};

/// Default relative prominence threshold for [`find_peaks`].
pub const DEFAULT_MIN_PROMINENCE: f64 = 1e-4;
/// Default number of grid points of a frequency sweep.
pub const DEFAULT_GRID_POINTS: usize = 4001;

/// A sampled, non-negative observable as a function of a swept parameter.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub sweep_param: String,
    pub x: Vec<f64>,
    pub values: Vec<f64>,
    pub metadata: BTreeMap<String, f64>,
}

impl Spectrum {
    pub fn new(sweep_param: impl Into<String>, x: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if x.len() != values.len() {
            return Err(Error::InvalidSpectrum(format!(
                "{} abscissae but {} values",
                x.len(),
                values.len()
            )));
        }
        validate_grid(&x)?;
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidSpectrum(format!(
                "value {v} is not finite and non-negative"
            )));
        }
        Ok(Self {
            sweep_param: sweep_param.into(),
            x,
            values,
            metadata: BTreeMap::new(),
        })
    }

    pub fn with_metadata(mut self, key: &str, value: f64) -> Self {
        self.metadata.insert(key.to_owned(), value);
        self
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }
}

/// Checks that a sweep grid is finite and strictly increasing.
pub fn validate_grid(grid: &[f64]) -> Result<()> {
    if let Some(x) = grid.iter().find(|x| !x.is_finite()) {
        return Err(Error::InvalidSpectrum(format!("grid value {x} is not finite")));
    }
    if let Some(w) = grid.windows(2).find(|w| w[1] <= w[0]) {
        return Err(Error::InvalidSpectrum(format!(
            "grid is not strictly increasing at {} -> {}",
            w[0], w[1]
        )));
    }
    Ok(())
}

/// Incoming amplitudes used at every point of a scattering sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DriveTemplate {
    pub a_in: Complex64,
    pub d_in: Complex64,
}

impl DriveTemplate {
    pub fn from_left() -> Self {
        Self {
            a_in: Complex64::new(1.0, 0.0),
            d_in: Complex64::new(0.0, 0.0),
        }
    }

    pub fn at(&self, omega: f64) -> Result<BoundaryDrive> {
        BoundaryDrive::new(self.a_in, self.d_in, omega)
    }
}

/// Transmitted intensity `|c_out|^2 / |a_in|^2` at each frequency (`k = omega`).
pub fn sweep_scattering(
    stack: &OpticalStack,
    omega_grid: &[f64],
    drive: &DriveTemplate,
) -> Result<Spectrum> {
    validate_grid(omega_grid)?;
    let norm = drive.a_in.norm_sqr();
    if norm == 0.0 {
        return Err(Error::InvalidParameter {
            name: "a_in",
            value: 0.0,
            reason: "transmission is normalized to the left drive",
        });
    }
    let values = omega_grid
        .par_iter()
        .map(|&omega| {
            let sol = solve_boundary(stack, &drive.at(omega)?)?;
            Ok(sol.c_out.norm_sqr() / norm)
        })
        .collect::<Result<Vec<_>>>()?;
    Spectrum::new("omega", omega_grid.to_vec(), values)
}

/// Observable evaluated on the coupled-mode steady state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoupledObservable {
    /// `kappa |beta|^2`, leaving the right cavity.
    Transmitted,
    /// `kappa |alpha|^2`, leaving the left cavity through its outer mirror.
    LeftOutput,
    LeftCavity,
    RightCavity,
    Fiber,
}

impl CoupledObservable {
    pub fn evaluate(self, sys: &ModeSystem) -> Result<f64> {
        let amps = steady_state(sys)?;
        Ok(match self {
            CoupledObservable::Transmitted => sys.kappa * amps.beta.norm_sqr(),
            CoupledObservable::LeftOutput => sys.kappa * amps.alpha.norm_sqr(),
            CoupledObservable::LeftCavity => amps.alpha.norm_sqr(),
            CoupledObservable::RightCavity => amps.beta.norm_sqr(),
            CoupledObservable::Fiber => amps.gamma.norm_sqr(),
        })
    }
}

/// Photocurrent `kappa |beta|^2` at each drive frequency.
pub fn sweep_coupled(sys_template: &ModeSystem, omega_grid: &[f64]) -> Result<Spectrum> {
    sweep_coupled_observable(sys_template, omega_grid, CoupledObservable::Transmitted)
}

pub fn sweep_coupled_observable(
    sys_template: &ModeSystem,
    omega_grid: &[f64],
    observable: CoupledObservable,
) -> Result<Spectrum> {
    validate_grid(omega_grid)?;
    sys_template.validate()?;
    let values = omega_grid
        .par_iter()
        .map(|&omega| observable.evaluate(&sys_template.at_frequency(omega)))
        .collect::<Result<Vec<_>>>()?;
    Spectrum::new("omega", omega_grid.to_vec(), values)
}
