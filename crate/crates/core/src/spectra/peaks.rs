use std::ops::Range;

use nalgebra::{Matrix4, Vector4};
use serde::{Deserialize, Serialize};

use super::Spectrum;
use crate::error::{Error, Result};

/// A resonance of a sampled spectrum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    pub center: f64,
    /// Half width at half maximum.
    pub half_width: f64,
    /// Height above `baseline`.
    pub height: f64,
    pub baseline: f64,
    /// Root-mean-square fit residual; zero for unfitted estimates.
    pub fit_residual: f64,
    /// Standard error of `center` from the fit covariance; zero when unfitted.
    pub center_uncertainty: f64,
    /// Grid index of the sampled maximum.
    pub index: usize,
    pub prominence: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PeakSet {
    /// Sorted by center.
    pub peaks: Vec<Peak>,
}

impl PeakSet {
    pub fn len(&self) -> usize {
        self.peaks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.peaks.is_empty()
    }

    pub fn centers(&self) -> Vec<f64> {
        self.peaks.iter().map(|p| p.center).collect()
    }
}

/// Local maxima whose topographic prominence is at least
/// `min_prominence` times the global maximum.
///
/// Plateaus count once, at their leftmost sample. Centers and heights of
/// single-sample maxima are refined with a parabola through the logarithm of
/// the three samples around the maximum; the half width is read from the
/// half-maximum crossings.
pub fn find_peaks(spec: &Spectrum, min_prominence: f64) -> Result<PeakSet> {
    let v = &spec.values;
    let n = v.len();
    if n < 3 {
        return Err(Error::InvalidSpectrum(format!(
            "peak search needs at least 3 points, got {n}"
        )));
    }
    let threshold = min_prominence * spec.max_value();
    let mut peaks = Vec::new();
    let mut i = 1;
    while i < n - 1 {
        if v[i] > v[i - 1] {
            let mut j = i;
            while j + 1 < n && v[j + 1] == v[i] {
                j += 1;
            }
            if j + 1 < n && v[j + 1] < v[i] {
                let prominence = prominence(v, i, j);
                if prominence > 0.0 && prominence >= threshold {
                    peaks.push(estimate(spec, i, j, prominence));
                }
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    peaks.sort_by(|a, b| a.center.total_cmp(&b.center));
    Ok(PeakSet { peaks })
}

fn prominence(v: &[f64], first: usize, last: usize) -> f64 {
    let h = v[first];
    let mut left_min = h;
    for &x in v[..first].iter().rev() {
        if x > h {
            break;
        }
        left_min = left_min.min(x);
    }
    let mut right_min = h;
    for &x in &v[last + 1..] {
        if x > h {
            break;
        }
        right_min = right_min.min(x);
    }
    h - left_min.max(right_min)
}

fn estimate(spec: &Spectrum, first: usize, last: usize, prominence: f64) -> Peak {
    let (x, v) = (&spec.x, &spec.values);
    let (mut center, mut height) = (x[first], v[first]);
    if first == last && v[first - 1] > 0.0 && v[first + 1] > 0.0 {
        let (x0, x1, x2) = (x[first - 1], x[first], x[first + 1]);
        let (y0, y1, y2) = (v[first - 1].ln(), v[first].ln(), v[first + 1].ln());
        let d01 = (y1 - y0) / (x1 - x0);
        let d12 = (y2 - y1) / (x2 - x1);
        let curvature = (d12 - d01) / (x2 - x0);
        if curvature < 0.0 {
            let vertex = 0.5 * (x0 + x1) - d01 / (2.0 * curvature);
            if vertex > x0 && vertex < x2 {
                center = vertex;
                let y = y1 + d01 * (vertex - x1) + curvature * (vertex - x0) * (vertex - x1);
                height = y.exp();
            }
        }
    } else if first != last {
        center = 0.5 * (x[first] + x[last]);
    }
    let half = 0.5 * v[first];
    let mut widths = Vec::with_capacity(2);
    if let Some(xl) = half_crossing(x, v, first, half, Direction::Left) {
        widths.push(center - xl);
    }
    if let Some(xr) = half_crossing(x, v, last, half, Direction::Right) {
        widths.push(xr - center);
    }
    let half_width = if widths.is_empty() {
        x[(last + 1).min(x.len() - 1)] - x[first.saturating_sub(1)]
    } else {
        widths.iter().sum::<f64>() / widths.len() as f64
    };
    Peak {
        center,
        half_width,
        height,
        baseline: 0.0,
        fit_residual: 0.0,
        center_uncertainty: 0.0,
        index: first,
        prominence,
    }
}

#[derive(Clone, Copy)]
enum Direction {
    Left,
    Right,
}

/// Linear-interpolated position where the curve falls through `level`,
/// walking away from `start` without crossing a valley.
fn half_crossing(x: &[f64], v: &[f64], start: usize, level: f64, dir: Direction) -> Option<f64> {
    let mut i = start;
    loop {
        let next = match dir {
            Direction::Left => i.checked_sub(1)?,
            Direction::Right => {
                if i + 1 >= v.len() {
                    return None;
                }
                i + 1
            }
        };
        if v[next] > v[i] {
            return None;
        }
        if v[next] <= level {
            let t = (v[i] - level) / (v[i] - v[next]);
            return Some(x[i] + t * (x[next] - x[i]));
        }
        i = next;
    }
}

/// Index range used to fit `peak`: contiguous samples around the maximum
/// that stay above `floor` times the peak value, stopping at valleys, and
/// widened symmetrically to at least 7 samples.
pub fn fit_window(spec: &Spectrum, peak: &Peak, floor: f64) -> Range<usize> {
    let v = &spec.values;
    let n = v.len();
    let level = floor * v[peak.index];
    let mut lo = peak.index;
    while lo > 0 && v[lo - 1] <= v[lo] && v[lo - 1] >= level {
        lo -= 1;
    }
    let mut hi = peak.index;
    while hi + 1 < n && v[hi + 1] <= v[hi] && v[hi + 1] >= level {
        hi += 1;
    }
    while hi + 1 - lo < 7 && (lo > 0 || hi + 1 < n) {
        lo = lo.saturating_sub(1);
        hi = (hi + 1).min(n - 1);
    }
    lo..hi + 1
}

const FIT_TOLERANCE: f64 = 1e-10;
const FIT_MAX_ITERATIONS: usize = 200;

/// Least-squares fit of `h w^2 / ((x - x0)^2 + w^2) + b` to the samples in
/// `window` (Levenberg-Marquardt).
///
/// Starts from the parabolic peak estimate and the half-maximum crossings,
/// and stops when every parameter changes by less than `1e-10` relative, or
/// when no step can lower the cost further.
pub fn lorentzian_fit(spec: &Spectrum, window: Range<usize>) -> Result<Peak> {
    if window.end > spec.len() || window.len() < 7 {
        return Err(Error::InvalidSpectrum(format!(
            "fit window {window:?} must hold at least 7 of {} samples",
            spec.len()
        )));
    }
    let xs = &spec.x[window.clone()];
    let ys = &spec.values[window.clone()];
    let (argmax, &ymax) = ys
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("window is not empty");
    if argmax == 0 || argmax == ys.len() - 1 {
        return Err(Error::InvalidSpectrum(
            "fit window does not enclose the maximum".into(),
        ));
    }
    if ymax <= 0.0 {
        return Err(Error::InvalidSpectrum("no positive samples in fit window".into()));
    }
    let initial = estimate(spec, window.start + argmax, window.start + argmax, 0.0);
    let baseline0 = ys.iter().copied().fold(f64::INFINITY, f64::min).min(0.5 * ymax);

    // Work in units of the initial half width and peak height so that all
    // four parameters are of order one.
    let x_ref = initial.center;
    let x_scale = initial.half_width.max(f64::EPSILON * x_ref.abs().max(1.0));
    let y_scale = ymax;
    let us: Vec<f64> = xs.iter().map(|x| (x - x_ref) / x_scale).collect();
    let vs: Vec<f64> = ys.iter().map(|y| y / y_scale).collect();

    let mut p = Vector4::new((ymax - baseline0) / y_scale, 1.0, 0.0, baseline0 / y_scale);
    let mut cost = cost_of(&us, &vs, &p);
    let mut lambda = 1e-3;
    let mut converged = false;
    let mut iterations = 0;
    while iterations < FIT_MAX_ITERATIONS {
        iterations += 1;
        let (jtj, jtr) = normal_equations(&us, &vs, &p);
        let mut accepted = false;
        while lambda < 1e16 {
            let mut damped = jtj;
            for k in 0..4 {
                damped[(k, k)] += lambda * jtj[(k, k)].max(1e-12);
            }
            let Some(step) = damped.lu().solve(&(-jtr)) else {
                lambda *= 10.0;
                continue;
            };
            let trial = p + step;
            let trial_cost = cost_of(&us, &vs, &trial);
            if trial_cost.is_finite() && trial_cost <= cost {
                let small = (0..4).all(|k| step[k].abs() <= FIT_TOLERANCE * p[k].abs().max(1.0));
                p = trial;
                cost = trial_cost;
                lambda = (lambda * 0.1).max(1e-12);
                accepted = true;
                converged = small;
                break;
            }
            lambda *= 10.0;
        }
        if !accepted {
            // No descent direction left at machine precision.
            converged = true;
        }
        if converged {
            break;
        }
    }

    let n = us.len() as f64;
    let (jtj, _) = normal_equations(&us, &vs, &p);
    let dof = (n - 4.0).max(1.0);
    let variance = 2.0 * cost / dof;
    let center_var = jtj
        .try_inverse()
        .map(|cov| cov[(2, 2)] * variance)
        .unwrap_or(f64::INFINITY);

    let peak = Peak {
        center: x_ref + p[2] * x_scale,
        half_width: p[1].abs() * x_scale,
        height: p[0] * y_scale,
        baseline: p[3] * y_scale,
        fit_residual: (2.0 * cost / n).sqrt() * y_scale,
        center_uncertainty: center_var.max(0.0).sqrt() * x_scale,
        index: initial.index,
        prominence: initial.prominence,
    };
    if !converged {
        return Err(Error::FitFailure {
            iterations,
            best: peak,
        });
    }
    if !(peak.half_width > 0.0 && peak.height > 0.0) {
        return Err(Error::FitFailure {
            iterations,
            best: peak,
        });
    }
    Ok(peak)
}

fn model(u: f64, p: &Vector4<f64>) -> f64 {
    let (h, w, u0, b) = (p[0], p[1], p[2], p[3]);
    let du = u - u0;
    h * w * w / (du * du + w * w) + b
}

fn cost_of(us: &[f64], vs: &[f64], p: &Vector4<f64>) -> f64 {
    0.5 * us
        .iter()
        .zip(vs)
        .map(|(&u, &v)| {
            let r = model(u, p) - v;
            r * r
        })
        .sum::<f64>()
}

fn normal_equations(us: &[f64], vs: &[f64], p: &Vector4<f64>) -> (Matrix4<f64>, Vector4<f64>) {
    let (h, w, u0) = (p[0], p[1], p[2]);
    let mut jtj = Matrix4::zeros();
    let mut jtr = Vector4::zeros();
    for (&u, &v) in us.iter().zip(vs) {
        let du = u - u0;
        let d = du * du + w * w;
        let grad = Vector4::new(
            w * w / d,
            2.0 * h * w * du * du / (d * d),
            2.0 * h * w * w * du / (d * d),
            1.0,
        );
        let r = model(u, p) - v;
        jtj += grad * grad.transpose();
        jtr += grad * r;
    }
    (jtj, jtr)
}

/// Lorentzian fit of every peak in `peaks`, each in its own [`fit_window`].
pub fn fit_peaks(spec: &Spectrum, peaks: &PeakSet, floor: f64) -> Result<PeakSet> {
    let mut fitted = peaks
        .peaks
        .iter()
        .map(|p| lorentzian_fit(spec, fit_window(spec, p, floor)))
        .collect::<Result<Vec<_>>>()?;
    fitted.sort_by(|a, b| a.center.total_cmp(&b.center));
    Ok(PeakSet { peaks: fitted })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::linspace;

    fn lorentzian(x: &[f64], h: f64, w: f64, x0: f64, b: f64) -> Spectrum {
        let v = x.iter().map(|&x| h * w * w / ((x - x0).powi(2) + w * w) + b).collect();
        Spectrum::new("x", x.to_vec(), v).unwrap()
    }

    #[test]
    fn flat_spectrum_has_no_peaks() {
        let s = Spectrum::new("x", linspace(0.0, 1.0, 11), vec![2.0; 11]).unwrap();
        assert!(find_peaks(&s, 1e-4).unwrap().is_empty());
    }

    #[test]
    fn too_short_spectrum_rejected() {
        let s = Spectrum::new("x", vec![0.0, 1.0], vec![0.0, 1.0]).unwrap();
        assert!(find_peaks(&s, 0.0).is_err());
    }

    #[test]
    fn plateau_resolves_to_leftmost_sample() {
        let s = Spectrum::new(
            "x",
            linspace(0.0, 6.0, 7),
            vec![0.0, 1.0, 3.0, 3.0, 3.0, 1.0, 0.0],
        )
        .unwrap();
        let peaks = find_peaks(&s, 0.0).unwrap();
        assert_eq!(peaks.len(), 1);
        assert_eq!(peaks.peaks[0].index, 2);
        assert_eq!(peaks.peaks[0].center, 3.0);
    }

    #[test]
    fn prominence_filter() {
        let x = linspace(0.0, 10.0, 11);
        let v = vec![0.0, 1.0, 0.0, 0.0, 100.0, 0.0, 0.0, 0.5, 0.49, 0.495, 0.0];
        let s = Spectrum::new("x", x, v).unwrap();
        assert_eq!(find_peaks(&s, 0.0).unwrap().len(), 4);
        // 0.495 rises only 0.005 above the 0.49 valley
        assert_eq!(find_peaks(&s, 1e-3).unwrap().len(), 3);
        assert_eq!(find_peaks(&s, 8e-3).unwrap().len(), 2);
        assert_eq!(find_peaks(&s, 0.5).unwrap().centers(), vec![4.0]);
    }

    #[test]
    fn parabolic_center_within_thousandth_of_width() {
        let w = 0.01;
        let x0 = 1.0003217;
        // 25 samples per half width
        let x = linspace(0.8, 1.2, 20001);
        let s = lorentzian(&x, 1.0, w, x0, 0.0);
        let peaks = find_peaks(&s, 1e-4).unwrap();
        assert_eq!(peaks.len(), 1);
        assert!((peaks.peaks[0].center - x0).abs() < 1e-3 * w);
        assert!((peaks.peaks[0].half_width - w).abs() < 1e-3 * w);
    }

    #[test]
    fn exact_lorentzian_recovered() {
        let (h, w, x0, b) = (2.5, 0.03, 4.01, 0.2);
        let x = linspace(3.8, 4.2, 801);
        let s = lorentzian(&x, h, w, x0, b);
        let peaks = find_peaks(&s, 1e-4).unwrap();
        let fit = lorentzian_fit(&s, fit_window(&s, &peaks.peaks[0], 0.0)).unwrap();
        assert!(((fit.height - h) / h).abs() < 1e-8);
        assert!(((fit.half_width - w) / w).abs() < 1e-8);
        assert!(((fit.center - x0) / x0).abs() < 1e-8);
        assert!(((fit.baseline - b) / b).abs() < 1e-8);
        assert!(fit.fit_residual < 1e-10);
    }

    #[test]
    fn window_needs_seven_points() {
        let s = lorentzian(&linspace(0.0, 2.0, 21), 1.0, 0.2, 1.0, 0.0);
        assert!(lorentzian_fit(&s, 8..13).is_err());
        assert!(lorentzian_fit(&s, 0..5).is_err());
        // maximum on the window edge
        assert!(lorentzian_fit(&s, 10..20).is_err());
    }

    #[test]
    fn fit_window_widens_to_minimum() {
        let s = lorentzian(&linspace(0.0, 2.0, 201), 1.0, 0.001, 1.0, 0.0);
        let p = find_peaks(&s, 0.0).unwrap().peaks[0];
        let win = fit_window(&s, &p, 0.5);
        assert_eq!(win.len(), 7);
        assert!(win.contains(&p.index));
    }
}
