//! Cascaded optical cavities in two descriptions: a one-dimensional
//! transfer-matrix scattering model of identical point mirrors, and a
//! coupled-oscillator model with two cavity modes and one fiber mode.
//!
//! [`matching`] converts mirror geometry into oscillator parameters, and
//! [`spectra`] sweeps both models and compares their resonances, cavity
//! intensities, and two-sided interference. [`cli`] turns a configuration
//! file into CSV, SVG, and JSON artifacts.
//!
//! Units: `c = 1` and cavity length `L_C = 1`, so wavenumbers and
//! frequencies share the scale `c / L_C`.

pub mod cli;
pub mod coupled;
pub mod error;
pub mod matching;
pub mod scattering;
pub mod spectra;

pub use error::{Error, Result};
pub use num_complex::Complex64;
