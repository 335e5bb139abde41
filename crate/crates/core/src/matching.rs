//! Closed-form translation from mirror geometry to coupled-oscillator
//! parameters.
//!
//! All relations assume identical reflective mirrors (`zeta > 0`), `c = 1`,
//! and a transmission line shape that is Lorentzian near resonance.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::coupled::ModeSystem;
use crate::error::{Error, Result};
use crate::scattering::OpticalStack;

fn ensure_reflective(zeta: f64) -> Result<f64> {
    if zeta.is_finite() && zeta > 0.0 {
        Ok(zeta)
    } else {
        Err(Error::Domain {
            name: "zeta",
            value: zeta,
            reason: "matching requires a finite, positive polarizability",
        })
    }
}

fn ensure_length(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::Domain {
            name,
            value,
            reason: "lengths must be finite and positive",
        })
    }
}

/// Cavity amplitude decay rate `1 / (L_C * 2 zeta sqrt(zeta^2 + 1))`.
pub fn kappa_from_geometry(zeta: f64, l_c: f64) -> Result<f64> {
    let zeta = ensure_reflective(zeta)?;
    let l_c = ensure_length("l_c", l_c)?;
    Ok(1.0 / (l_c * 2.0 * zeta * (zeta * zeta + 1.0).sqrt()))
}

/// Round-trip phase correction of a two-mirror resonator, `-atan(1/zeta)`.
///
/// Equal to half of the single-argument `atan(2 zeta / (1 - zeta^2))` for
/// `zeta > 1`, and continued smoothly below `zeta = 1`. Increases toward zero
/// as the mirrors become perfect.
pub fn resonance_phase(zeta: f64) -> Result<f64> {
    let zeta = ensure_reflective(zeta)?;
    Ok(-(1.0 / zeta).atan())
}

/// Resonance frequency of order `n`: `(n pi - atan(1/zeta)) / L_C`.
pub fn omega_c_from_geometry(zeta: f64, l_c: f64, n: u32) -> Result<f64> {
    let phase = resonance_phase(zeta)?;
    let l_c = ensure_length("l_c", l_c)?;
    if n == 0 {
        return Err(Error::Domain {
            name: "n",
            value: 0.0,
            reason: "resonance order starts at 1",
        });
    }
    Ok((f64::from(n) * PI + phase) / l_c)
}

/// Resonance order of a length-`length` resonator whose frequency lies
/// closest to `target`.
pub fn nearest_order(zeta: f64, length: f64, target: f64) -> Result<u32> {
    let phase = resonance_phase(zeta)?;
    let length = ensure_length("length", length)?;
    if !(target.is_finite() && target > 0.0) {
        return Err(Error::Domain {
            name: "target",
            value: target,
            reason: "must be positive",
        });
    }
    let n = ((target * length - phase) / PI).round();
    if n > f64::from(MAX_ORDER) {
        return Err(Error::Domain {
            name: "target",
            value: target,
            reason: "resonance order above 10^6; round-trip phases lose precision",
        });
    }
    Ok(n.max(1.0) as u32)
}

/// Largest resonance order [`nearest_order`] will return.
pub const MAX_ORDER: u32 = 1_000_000;

/// Pump amplitude `sqrt(kappa) |A|` for an incoming field amplitude `A`.
pub fn eta_from_input(kappa: f64, a_in_magnitude: f64) -> Result<f64> {
    if !(kappa.is_finite() && kappa > 0.0) {
        return Err(Error::Domain {
            name: "kappa",
            value: kappa,
            reason: "must be positive",
        });
    }
    if !(a_in_magnitude.is_finite() && a_in_magnitude >= 0.0) {
        return Err(Error::Domain {
            name: "a_in_magnitude",
            value: a_in_magnitude,
            reason: "must be non-negative",
        });
    }
    Ok(kappa.sqrt() * a_in_magnitude)
}

/// Coupling of two resonators sharing a mirror, `1 / ((L1 + L2) sqrt(1 + zeta^2))`.
///
/// Reproduces the normal-mode splitting `2 g` of three mirrors with
/// `L1 = L2`. For unequal lengths see [`g_unequal_lengths`].
pub fn g_from_geometry(zeta: f64, l1: f64, l2: f64) -> Result<f64> {
    let zeta = ensure_reflective(zeta)?;
    let l1 = ensure_length("l1", l1)?;
    let l2 = ensure_length("l2", l2)?;
    Ok(1.0 / ((l1 + l2) * (1.0 + zeta * zeta).sqrt()))
}

/// Coupling of two co-resonant resonators of different lengths sharing a
/// mirror, `1 / (2 sqrt(L1 L2) sqrt(1 + zeta^2))`.
///
/// Identical to [`g_from_geometry`] when `L1 = L2`. Each mode's coupling
/// scales with the square root of its own free spectral range, so the
/// arithmetic mean of the lengths is replaced by the geometric mean.
pub fn g_unequal_lengths(zeta: f64, l1: f64, l2: f64) -> Result<f64> {
    let zeta = ensure_reflective(zeta)?;
    let l1 = ensure_length("l1", l1)?;
    let l2 = ensure_length("l2", l2)?;
    Ok(1.0 / (2.0 * (l1 * l2).sqrt() * (1.0 + zeta * zeta).sqrt()))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplingRule {
    /// [`g_unequal_lengths`].
    #[default]
    GeometricMean,
    /// [`g_from_geometry`] applied with the cavity and fiber lengths.
    ArithmeticMean,
}

impl CouplingRule {
    pub fn coupling(self, zeta: f64, l1: f64, l2: f64) -> Result<f64> {
        match self {
            CouplingRule::GeometricMean => g_unequal_lengths(zeta, l1, l2),
            CouplingRule::ArithmeticMean => g_from_geometry(zeta, l1, l2),
        }
    }
}

/// How the fiber gap of the cascaded geometry is chosen.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FiberLength {
    /// Adjust the nominal fiber length to the nearest length whose resonance
    /// coincides with the cavity resonance.
    #[default]
    Resonant,
    /// Keep the nominal length; the fiber mode is generally detuned.
    Exact,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatchedParams {
    pub kappa: f64,
    pub omega_c: f64,
    pub order_n: u32,
    pub g: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CascadedOptions {
    pub n_c: u32,
    /// Fiber resonance order; nearest to the cavity resonance when `None`.
    pub n_f: Option<u32>,
    pub fiber: FiberLength,
    pub coupling: CouplingRule,
}

impl Default for CascadedOptions {
    fn default() -> Self {
        Self {
            n_c: 10,
            n_f: None,
            fiber: FiberLength::Resonant,
            coupling: CouplingRule::GeometricMean,
        }
    }
}

/// Matched parameter set for two cavities joined by a fiber.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CascadedMatch {
    pub zeta: f64,
    pub l_c: f64,
    pub l_f_nominal: f64,
    /// Fiber length used in the scattering geometry.
    pub l_f: f64,
    pub params: MatchedParams,
    pub omega_f: f64,
    pub n_f: u32,
    /// `omega_f - omega_c`.
    pub fiber_detuning: f64,
    /// False when no fiber order lies within half a fiber free spectral
    /// range of the cavity resonance.
    pub fiber_order_found: bool,
    pub coupling_rule: CouplingRule,
}

impl CascadedMatch {
    pub fn stack(&self) -> Result<OpticalStack> {
        OpticalStack::cascaded(self.zeta, self.l_c, self.l_f)
    }

    /// Coupled-mode system driven from the left by an incoming amplitude
    /// `a_in`, evaluated at `omega_c`.
    pub fn mode_system(&self, a_in: f64) -> Result<ModeSystem> {
        Ok(ModeSystem {
            omega_c: self.params.omega_c,
            omega_f: self.omega_f,
            g: self.params.g,
            kappa: self.params.kappa,
            eta_l: eta_from_input(self.params.kappa, a_in)?,
            eta_r: 0.0,
            phi: 0.0,
            omega: self.params.omega_c,
        })
    }

    /// Sweep window `omega_c -+ 3 sqrt(2) g` sampled at `points` points.
    pub fn default_window(&self, points: usize) -> Vec<f64> {
        let half = 3.0 * std::f64::consts::SQRT_2 * self.params.g;
        linspace(self.params.omega_c - half, self.params.omega_c + half, points)
    }
}

pub fn match_cascaded(
    zeta: f64,
    l_c: f64,
    l_f: f64,
    options: &CascadedOptions,
) -> Result<CascadedMatch> {
    let kappa = kappa_from_geometry(zeta, l_c)?;
    let omega_c = omega_c_from_geometry(zeta, l_c, options.n_c)?;
    let l_f_nominal = ensure_length("l_f", l_f)?;
    let phase = resonance_phase(zeta)?;

    let (l_f, n_f, omega_f) = match options.fiber {
        FiberLength::Resonant => {
            let n_f = match options.n_f {
                Some(n) => n,
                None => nearest_order(zeta, l_f_nominal, omega_c)?,
            };
            let tuned = (f64::from(n_f) * PI + phase) / omega_c;
            (ensure_length("resonant fiber length", tuned)?, n_f, omega_c)
        }
        FiberLength::Exact => {
            let n_f = match options.n_f {
                Some(n) => n,
                None => nearest_order(zeta, l_f_nominal, omega_c)?,
            };
            (l_f_nominal, n_f, omega_c_from_geometry(zeta, l_f_nominal, n_f)?)
        }
    };
    let fiber_detuning = omega_f - omega_c;
    let fiber_fsr = PI / l_f;
    let g = options.coupling.coupling(zeta, l_c, l_f)?;

    Ok(CascadedMatch {
        zeta,
        l_c,
        l_f_nominal,
        l_f,
        params: MatchedParams {
            kappa,
            omega_c,
            order_n: options.n_c,
            g,
        },
        omega_f,
        n_f,
        fiber_detuning,
        fiber_order_found: fiber_detuning.abs() <= 0.5 * fiber_fsr,
        coupling_rule: options.coupling,
    })
}

pub fn linspace(start: f64, end: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (end - start) / (points - 1) as f64;
            (0..points)
                .map(|i| if i + 1 == points { end } else { start + step * i as f64 })
                .collect()
        }
    }
}
