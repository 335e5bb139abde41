//! Coupled-oscillator model: two cavity modes `a`, `b` linearly coupled to a
//! single fiber mode `c`, pumped coherently from both sides and damped
//! through the outer mirrors.
//!
//! The master equation is linear with a coherent drive, so its steady state
//! is a coherent state fixed by the mean-field amplitudes. In the frame
//! rotating at the drive frequency `omega`, with `dc = omega_c - omega` and
//! `df = omega_f - omega`:
//!
//! ```text
//! (i dc + kappa) alpha + i g gamma = -i eta_l
//! (i dc + kappa) beta  + i g gamma = -i eta_r exp(-i phi)
//! i df gamma + i g (alpha + beta)  = 0
//! ```
//!
//! The fiber mode is lossless.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, ensure_positive, Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeSystem {
    pub omega_c: f64,
    pub omega_f: f64,
    /// Cavity-fiber coupling.
    pub g: f64,
    /// Amplitude decay rate of each cavity; photons are lost at `2 kappa`.
    pub kappa: f64,
    pub eta_l: f64,
    pub eta_r: f64,
    /// Phase of the right pump relative to the left one.
    pub phi: f64,
    /// Drive frequency.
    pub omega: f64,
}

impl ModeSystem {
    pub fn validate(&self) -> Result<()> {
        ensure_finite("omega_c", self.omega_c)?;
        ensure_finite("omega_f", self.omega_f)?;
        ensure_finite("phi", self.phi)?;
        ensure_finite("omega", self.omega)?;
        ensure_positive("kappa", self.kappa)?;
        for (name, v) in [("g", self.g), ("eta_l", self.eta_l), ("eta_r", self.eta_r)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidParameter {
                    name,
                    value: v,
                    reason: "must be finite and non-negative",
                });
            }
        }
        Ok(())
    }

    pub fn at_frequency(&self, omega: f64) -> Self {
        Self { omega, ..*self }
    }
}

/// Coherent steady-state amplitudes of the cavity modes (`alpha`, `beta`) and
/// the fiber mode (`gamma`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModeAmplitudes {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub gamma: Complex64,
}

impl ModeAmplitudes {
    /// Mean photon numbers `(<a+a>, <b+b>, <c+c>)`.
    pub fn photon_numbers(&self) -> (f64, f64, f64) {
        (
            self.alpha.norm_sqr(),
            self.beta.norm_sqr(),
            self.gamma.norm_sqr(),
        )
    }
}

pub fn steady_state(sys: &ModeSystem) -> Result<ModeAmplitudes> {
    sys.validate()?;
    let cavity = Complex64::new(sys.kappa, sys.omega_c - sys.omega);
    let drive_l = -I * sys.eta_l;
    let drive_r = -I * sys.eta_r * Complex64::from_polar(1.0, -sys.phi);

    if sys.g == 0.0 {
        // Fiber is undriven and decoupled; its amplitude stays zero even when
        // it is resonant with the drive.
        return Ok(ModeAmplitudes {
            alpha: drive_l / cavity,
            beta: drive_r / cavity,
            gamma: Complex64::new(0.0, 0.0),
        });
    }

    let zero = Complex64::new(0.0, 0.0);
    let ig = I * sys.g;
    let fiber = I * (sys.omega_f - sys.omega);
    #[rustfmt::skip]
    let system = Matrix3::new(
        cavity, zero,   ig,
        zero,   cavity, ig,
        ig,     ig,     fiber,
    );
    let rhs = Vector3::new(drive_l, drive_r, zero);
    let x = system
        .lu()
        .solve(&rhs)
        .filter(|x| x.iter().all(|z| z.is_finite()))
        .ok_or(Error::SingularSystem { omega: sys.omega })?;
    Ok(ModeAmplitudes {
        alpha: x[0],
        beta: x[1],
        gamma: x[2],
    })
}

/// Transmitted photocurrent `kappa <b+b>` leaving the right cavity.
pub fn photocurrent(sys: &ModeSystem) -> Result<f64> {
    let amps = steady_state(sys)?;
    Ok(sys.kappa * amps.beta.norm_sqr())
}

/// Normal-mode frequencies of two directly coupled cavities, `omega_c -+ g`.
pub fn two_mode_eigenfrequencies(omega_c: f64, g: f64) -> (f64, f64) {
    (omega_c - g, omega_c + g)
}

/// Normal-mode frequencies of the drive-free three-mode system, ascending.
///
/// The antisymmetric combination `a - b` never couples to the fiber, so
/// `omega_c` is always an eigenvalue. The symmetric combination forms a
/// two-level block `[[omega_c, sqrt(2) g], [sqrt(2) g, omega_f]]` whose
/// eigenvalues bracket `omega_c`.
pub fn three_mode_eigenfrequencies(sys: &ModeSystem) -> (f64, f64, f64) {
    let mean = 0.5 * (sys.omega_c + sys.omega_f);
    let half_detuning = 0.5 * (sys.omega_c - sys.omega_f);
    let root = (half_detuning * half_detuning + 2.0 * sys.g * sys.g).sqrt();
    let lower = (mean - root).min(sys.omega_c);
    let upper = (mean + root).max(sys.omega_c);
    (lower, sys.omega_c, upper)
}
