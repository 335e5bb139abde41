use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::validate_grid;
use crate::coupled::{steady_state, ModeSystem};
use crate::error::{Error, Result};
use crate::scattering::{solve_boundary, BoundaryDrive, OpticalStack};

/// Fiber intensity on an `(omega, phi)` grid. `intensity[i][j]` belongs to
/// `omega[i]` and `phi[j]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseScan {
    pub omega: Vec<f64>,
    pub phi: Vec<f64>,
    pub intensity: Vec<Vec<f64>>,
}

impl PhaseScan {
    /// Sinusoid fit of every `omega` row.
    pub fn fits(&self) -> Result<Vec<SinusoidFit>> {
        self.intensity
            .par_iter()
            .map(|row| sinusoid_fit(&self.phi, row))
            .collect()
    }
}

fn validate_phase_grid(phi_grid: &[f64]) -> Result<()> {
    if let Some(p) = phi_grid.iter().find(|p| !p.is_finite()) {
        return Err(Error::InvalidSpectrum(format!("phase {p} is not finite")));
    }
    Ok(())
}

/// Intensity `|A|^2 + |B|^2` in the middle region of a four-mirror stack
/// driven with `A = 1` from the left and `D = exp(-i phi)` from the right.
pub fn dark_mode_scan(stack: &OpticalStack, omega_grid: &[f64], phi_grid: &[f64]) -> Result<PhaseScan> {
    if stack.mirror_count() != 4 {
        return Err(Error::InvalidStack(format!(
            "dark-mode scan needs four mirrors, found {}",
            stack.mirror_count()
        )));
    }
    validate_grid(omega_grid)?;
    validate_phase_grid(phi_grid)?;
    let intensity = omega_grid
        .par_iter()
        .map(|&omega| {
            phi_grid
                .iter()
                .map(|&phi| {
                    let sol = solve_boundary(stack, &BoundaryDrive::two_sided(omega, phi)?)?;
                    Ok(sol.regions[2].intensity())
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PhaseScan {
        omega: omega_grid.to_vec(),
        phi: phi_grid.to_vec(),
        intensity,
    })
}

/// Fiber photon number `|gamma|^2` of the coupled model with equal pumps
/// `eta_r = eta_l` and relative phase `phi`. Other fields of `sys` are kept.
pub fn coupled_dark_mode_scan(sys: &ModeSystem, omega_grid: &[f64], phi_grid: &[f64]) -> Result<PhaseScan> {
    validate_grid(omega_grid)?;
    validate_phase_grid(phi_grid)?;
    let template = ModeSystem {
        eta_r: sys.eta_l,
        ..*sys
    };
    let intensity = omega_grid
        .par_iter()
        .map(|&omega| {
            phi_grid
                .iter()
                .map(|&phi| {
                    let amps = steady_state(&ModeSystem { omega, phi, ..template })?;
                    Ok(amps.gamma.norm_sqr())
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PhaseScan {
        omega: omega_grid.to_vec(),
        phi: phi_grid.to_vec(),
        intensity,
    })
}

/// `c0 + c1 cos(phi - phi0)` with `c1 >= 0` and `phi0` in `(-pi, pi]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SinusoidFit {
    pub c0: f64,
    pub c1: f64,
    pub phi0: f64,
    /// Largest absolute residual over the samples.
    pub residual: f64,
}

impl SinusoidFit {
    pub fn eval(&self, phi: f64) -> f64 {
        self.c0 + self.c1 * (phi - self.phi0).cos()
    }

    /// `(c0 - c1) / (c0 + c1)`, the min/max ratio over a full period.
    pub fn contrast_ratio(&self) -> f64 {
        (self.c0 - self.c1) / (self.c0 + self.c1)
    }

    /// Phase of the minimum.
    pub fn minimum_phase(&self) -> f64 {
        wrap_phase(self.phi0 + PI)
    }
}

fn wrap_phase(phi: f64) -> f64 {
    let wrapped = phi.rem_euclid(2.0 * PI);
    if wrapped > PI {
        wrapped - 2.0 * PI
    } else {
        wrapped
    }
}

/// Linear least squares on the basis `{1, cos phi, sin phi}`.
///
/// Needs at least five samples spanning a full period. A vanishing
/// oscillation is reported as `c1 = 0`, `phi0 = 0`.
pub fn sinusoid_fit(phi: &[f64], values: &[f64]) -> Result<SinusoidFit> {
    if phi.len() != values.len() {
        return Err(Error::InvalidSpectrum(format!(
            "{} phases but {} values",
            phi.len(),
            values.len()
        )));
    }
    if phi.len() < 5 {
        return Err(Error::InvalidSpectrum(format!(
            "sinusoid fit needs at least 5 samples, got {}",
            phi.len()
        )));
    }
    let (lo, hi) = phi
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &p| (lo.min(p), hi.max(p)));
    if hi - lo < 2.0 * PI * (1.0 - 1e-9) {
        return Err(Error::InvalidSpectrum(format!(
            "phases span {} rad, less than one period",
            hi - lo
        )));
    }
    let design = DMatrix::from_fn(phi.len(), 3, |i, j| match j {
        0 => 1.0,
        1 => phi[i].cos(),
        _ => phi[i].sin(),
    });
    let rhs = DVector::from_column_slice(values);
    let coeffs = design
        .clone()
        .svd(true, true)
        .solve(&rhs, 1e-14)
        .map_err(|e| Error::InvalidSpectrum(e.to_string()))?;
    let c0 = coeffs[0];
    let (a, b) = (coeffs[1], coeffs[2]);
    let amplitude = a.hypot(b);
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let (c1, phi0) = if amplitude <= 1e-14 * scale {
        (0.0, 0.0)
    } else {
        (amplitude, wrap_phase(Complex64::new(a, b).arg()))
    };
    let fit = SinusoidFit {
        c0,
        c1,
        phi0,
        residual: 0.0,
    };
    let residual = phi
        .iter()
        .zip(values)
        .map(|(&p, &v)| (fit.eval(p) - v).abs())
        .fold(0.0, f64::max);
    Ok(SinusoidFit { residual, ..fit })
}
