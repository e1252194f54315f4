//! Error norm, conserved quantities and peak tracking.

use num_complex::Complex64;

use crate::basis::NodalWeights;
use crate::field::{Mesh, WaveState};

/// Fraction of `max |U|` used as the default peak threshold.
pub const DEFAULT_PEAK_FRACTION: f64 = 0.1;

/// Composite Simpson on equally spaced samples when the interval count is
/// even, composite trapezoid otherwise.
pub fn integrate_uniform(values: &[f64], h: f64) -> f64 {
    let n = values.len().saturating_sub(1);
    if n == 0 {
        return 0.0;
    }
    if n.is_multiple_of(2) {
        let mut acc = values[0] + values[n];
        for (i, v) in values.iter().enumerate().take(n).skip(1) {
            acc += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
        }
        acc * h / 3.0
    } else {
        trapezoid(values, h)
    }
}

pub fn trapezoid(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let inner: f64 = values[1..n - 1].iter().sum();
    h * (inner + 0.5 * (values[0] + values[n - 1]))
}

/// `max_i ||U_exact(x_i, t)| - |U_i||` over the knots.
pub fn linf_error<E>(state: &WaveState, exact: E, mesh: &Mesh, w: &NodalWeights) -> f64
where
    E: Fn(f64, f64) -> Complex64,
{
    knot_max(state, mesh, w, |e, u| (e.norm() - u.norm()).abs(), exact)
}

/// `max_i |U_exact(x_i, t) - U_i|`, sensitive to phase errors as well.
pub fn linf_complex_error<E>(state: &WaveState, exact: E, mesh: &Mesh, w: &NodalWeights) -> f64
where
    E: Fn(f64, f64) -> Complex64,
{
    knot_max(state, mesh, w, |e, u| (e - u).norm(), exact)
}

fn knot_max<D, E>(state: &WaveState, mesh: &Mesh, w: &NodalWeights, dist: D, exact: E) -> f64
where
    D: Fn(Complex64, Complex64) -> f64,
    E: Fn(f64, f64) -> Complex64,
{
    state.knot_values(w).iter().enumerate().map(|(i, &u)| dist(exact(mesh.knot(i), state.t), u)).fold(0.0, f64::max)
}

/// `(C1, C2) = (∫|U|², ∫ |U_x|² - q/2 |U|⁴)` from the knot values of `U` and
/// the spline slope at the knots.
pub fn invariants(state: &WaveState, q: f64, mesh: &Mesh, w: &NodalWeights) -> (f64, f64) {
    let vals = state.knot_values(w);
    let slopes = state.knot_slopes(w);
    invariants_from_samples(&vals, &slopes, q, mesh.h)
}

pub fn invariants_from_samples(vals: &[Complex64], slopes: &[Complex64], q: f64, h: f64) -> (f64, f64) {
    let mass: Vec<f64> = vals.iter().map(|u| u.norm_sqr()).collect();
    let energy: Vec<f64> =
        vals.iter().zip(slopes).map(|(u, ux)| ux.norm_sqr() - 0.5 * q * u.norm_sqr() * u.norm_sqr()).collect();
    (integrate_uniform(&mass, h), integrate_uniform(&energy, h))
}

/// A local maximum of `|U|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub position: f64,
    pub height: f64,
}

/// Strict interior local maxima of `|U|` at the knots with height at least
/// `threshold`, each refined by a parabola through `|U|²` at the maximal knot
/// and its two neighbours.
pub fn track_peaks(state: &WaveState, mesh: &Mesh, w: &NodalWeights, threshold: f64) -> Vec<Peak> {
    let modulus: Vec<f64> = state.knot_values(w).iter().map(|u| u.norm()).collect();
    peaks_from_modulus(&modulus, mesh, threshold)
}

pub fn peaks_from_modulus(modulus: &[f64], mesh: &Mesh, threshold: f64) -> Vec<Peak> {
    let mut out = Vec::new();
    for i in 1..modulus.len().saturating_sub(1) {
        let (l, c, r) = (modulus[i - 1], modulus[i], modulus[i + 1]);
        if !(c > l && c > r && c >= threshold) {
            continue;
        }
        let (yl, yc, yr) = (l * l, c * c, r * r);
        let curv = yl - 2.0 * yc + yr;
        let (offset, top) = if curv < 0.0 {
            let off = 0.5 * (yl - yr) / curv;
            (off, yc - 0.25 * (yl - yr) * off)
        } else {
            (0.0, yc)
        };
        out.push(Peak { position: mesh.knot(i) + offset * mesh.h, height: top.max(0.0).sqrt() });
    }
    out
}

/// Peaks above [`DEFAULT_PEAK_FRACTION`] of the current maximum.
pub fn track_peaks_default(state: &WaveState, mesh: &Mesh, w: &NodalWeights) -> Vec<Peak> {
    let max = state.knot_values(w).iter().map(|u| u.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return Vec::new();
    }
    track_peaks(state, mesh, w, DEFAULT_PEAK_FRACTION * max)
}

/// Time series collected during a run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DiagnosticsSeries {
    pub times: Vec<f64>,
    /// Empty when the problem has no exact solution.
    pub linf: Vec<f64>,
    pub c1: Vec<f64>,
    pub c2: Vec<f64>,
    pub peaks: Vec<Vec<Peak>>,
}

impl DiagnosticsSeries {
    pub fn push(&mut self, t: f64, linf: Option<f64>, c1: f64, c2: f64, peaks: Vec<Peak>) {
        self.times.push(t);
        if let Some(e) = linf {
            self.linf.push(e);
        }
        self.c1.push(c1);
        self.c2.push(c2);
        self.peaks.push(peaks);
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Largest `|c(t) - c(0)| / |c(0)|` over the series.
    pub fn max_relative_drift(series: &[f64]) -> f64 {
        match series.first() {
            Some(&c0) if c0 != 0.0 => series.iter().map(|c| ((c - c0) / c0).abs()).fold(0.0, f64::max),
            _ => 0.0,
        }
    }
}
