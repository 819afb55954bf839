//! Widths, peaks and scaling fits for number and phase distributions.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::distributions::{number_moments, NumberDistribution, PhaseDistribution};
use crate::error::{Error, Result};
use crate::spin::{MLevel, SpinJ};

/// Local maxima below this fraction of the global maximum are treated as noise.
pub const PEAK_FLOOR: f64 = 1e-9;

/// A local maximum of a sampled phase density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub index: usize,
    pub phi: f64,
    pub height: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WidthReport {
    /// `None` when there is no unique, well-resolved global peak.
    pub fwhm: Option<f64>,
    /// `None` when the circular mean is undefined.
    pub circ_stddev: Option<f64>,
    pub peak_locations: Vec<f64>,
    pub peak_heights: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingFit {
    pub exponent: f64,
    pub factor: f64,
    /// RMS residual in log-log space.
    pub residual: f64,
}

fn is_flat(p: &[f64]) -> bool {
    let max = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = p.iter().copied().fold(f64::INFINITY, f64::min);
    max - min <= 1e-12 * max.abs()
}

fn global_argmax(p: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in p.iter().enumerate() {
        if *v > p[best] {
            best = i;
        }
    }
    best
}

/// Local maxima on the circular grid: `p[i-1] < p[i] >= p[i+1]`, so a flat top
/// is reported at its smallest `φ`. Maxima below [`PEAK_FLOOR`] times the global
/// maximum are dropped. Sorted by grid index, i.e. by `φ`.
pub fn local_maxima(dist: &PhaseDistribution) -> Vec<Peak> {
    let p = dist.grid_p();
    let n = p.len();
    if n < 3 || is_flat(p) {
        return Vec::new();
    }
    let floor = PEAK_FLOOR * p[global_argmax(p)];
    (0..n)
        .filter(|&i| {
            let prev = p[(i + n - 1) % n];
            let next = p[(i + 1) % n];
            p[i] > prev && p[i] >= next && p[i] >= floor
        })
        .map(|i| Peak {
            index: i,
            phi: dist.grid_phi()[i],
            height: p[i],
        })
        .collect()
}

/// Distance from the peak at `i0` to the half-height crossing, walking in
/// direction `dir`, with linear interpolation between the bracketing samples.
/// With `monotone`, a rise before the crossing is an error.
fn half_crossing(
    p: &[f64],
    i0: usize,
    half: f64,
    dir: isize,
    monotone: bool,
    h: f64,
) -> Result<f64> {
    let n = p.len() as isize;
    let at = |t: isize| p[((i0 as isize + dir * t).rem_euclid(n)) as usize];
    for t in 1..n {
        let (prev, cur) = (at(t - 1), at(t));
        if cur <= half {
            let frac = (prev - half) / (prev - cur);
            return Ok((t as f64 - 1.0 + frac) * h);
        }
        if monotone && cur > prev {
            return Err(Error::Ambiguous(
                "density rises again before reaching half height".into(),
            ));
        }
    }
    Err(Error::Ambiguous(
        "density never drops below half height".into(),
    ))
}

fn width_at(p: &[f64], i0: usize, monotone: bool, h: f64) -> Result<f64> {
    let n = p.len();
    let half = 0.5 * p[i0];
    if p[(i0 + 1) % n] <= half && p[(i0 + n - 1) % n] <= half {
        return Err(Error::Resolution);
    }
    let right = half_crossing(p, i0, half, 1, monotone, h)?;
    let left = half_crossing(p, i0, half, -1, monotone, h)?;
    Ok(left + right)
}

/// Full width at half maximum around the global peak (smallest `φ` on ties).
pub fn fwhm(dist: &PhaseDistribution) -> Result<f64> {
    let p = dist.grid_p();
    if p.is_empty() || is_flat(p) {
        return Err(Error::NoPeak);
    }
    let i0 = global_argmax(p);
    let half = 0.5 * p[i0];
    let n = p.len();
    // count connected runs of {p > half} around the circle
    let above = |i: usize| p[i % n] > half;
    let runs = (0..n).filter(|&i| above(i) && !above(i + n - 1)).count();
    if runs > 1 {
        return Err(Error::Ambiguous(format!(
            "{runs} disjoint regions above half maximum"
        )));
    }
    width_at(p, i0, false, dist.step())
}

/// FWHM of the highest local maximum within `window` of `center` (circular distance).
pub fn peak_fwhm_at(dist: &PhaseDistribution, center: f64, window: f64) -> Result<f64> {
    if !window.is_finite() || window <= 0.0 || !center.is_finite() {
        return Err(Error::domain("window must be positive and center finite"));
    }
    let near = |phi: f64| {
        let d = (phi - center).rem_euclid(2.0 * PI);
        d.min(2.0 * PI - d) <= window
    };
    let best = local_maxima(dist)
        .into_iter()
        .filter(|pk| near(pk.phi))
        .fold(None::<Peak>, |acc, pk| match acc {
            Some(a) if a.height >= pk.height => Some(a),
            _ => Some(pk),
        })
        .ok_or(Error::NoPeak)?;
    width_at(dist.grid_p(), best.index, true, dist.step())
}

/// Circular mean `arg z` and standard deviation `√(-2 ln |z|)`, `z = ∫ e^{iφ} p dφ`.
pub fn circular_stats(dist: &PhaseDistribution) -> Result<(f64, f64)> {
    let z: Complex64 = dist
        .grid_phi()
        .iter()
        .zip(dist.grid_p())
        .map(|(phi, p)| Complex64::from_polar(*p, *phi))
        .sum::<Complex64>()
        * dist.step();
    let r = z.norm();
    if r < 1e-12 {
        return Err(Error::UndefinedMean(r));
    }
    Ok((z.arg(), (-2.0 * r.min(1.0).ln()).sqrt()))
}

/// Standard deviation of `m` under `p(m)`.
pub fn number_width(dist: &NumberDistribution) -> f64 {
    number_moments(dist).1.max(0.0).sqrt()
}

/// Least-squares fit of `ln w = exponent ln j + ln factor`.
pub fn scaling_fit(js: &[SpinJ], widths: &[f64]) -> Result<ScalingFit> {
    if js.len() != widths.len() {
        return Err(Error::domain("js and widths differ in length"));
    }
    if js.len() < 3 {
        return Err(Error::domain("scaling fit needs at least three points"));
    }
    if js.iter().any(|j| j.twice() == 0) || widths.iter().any(|w| !w.is_finite() || *w <= 0.0) {
        return Err(Error::domain("j and widths must be positive"));
    }
    let x: Vec<f64> = js.iter().map(|j| j.value().ln()).collect();
    let y: Vec<f64> = widths.iter().map(|w| w.ln()).collect();
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("all j values are equal".into()));
    }
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;
    let residual = (x
        .iter()
        .zip(&y)
        .map(|(a, b)| (b - intercept - exponent * a).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(ScalingFit {
        exponent,
        factor: intercept.exp(),
        residual,
    })
}

/// Interior levels where `p(m) <= threshold * max p` and `p(m)` is a local
/// minimum (no larger than either neighbour, strictly below at least one).
pub fn interference_minima(dist: &NumberDistribution, threshold: f64) -> Vec<MLevel> {
    let p = dist.probabilities();
    let cut = threshold * dist.max();
    (1..p.len().saturating_sub(1))
        .filter(|&i| {
            p[i] <= cut
                && p[i] <= p[i - 1]
                && p[i] <= p[i + 1]
                && (p[i] < p[i - 1] || p[i] < p[i + 1])
        })
        .map(|i| dist.j().level_at(i))
        .collect()
}

pub fn width_report(dist: &PhaseDistribution) -> WidthReport {
    let peaks = local_maxima(dist);
    WidthReport {
        fwhm: fwhm(dist).ok(),
        circ_stddev: circular_stats(dist).ok().map(|(_, s)| s),
        peak_locations: peaks.iter().map(|p| p.phi).collect(),
        peak_heights: peaks.iter().map(|p| p.height).collect(),
    }
}
