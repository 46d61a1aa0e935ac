//! Maximal functions over time windows, sequences and translation-time sets,
//! bound predictors and log-log scaling fits.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::sequences::TimeSequence;
use crate::spectral::{dispersion, GridSpec, SpectralFunction1D, Transform};

/// Relative change of the sup norm below which refinement stops.
pub const REFINE_TOL: f64 = 1e-3;
const MAX_LEVELS: usize = 8;
const BLOCK: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeWindow {
    pub t0: f64,
    pub length: f64,
    /// Overrides the automatic initial sample count when set.
    pub initial_samples: Option<usize>,
    pub max_levels: usize,
}

impl TimeWindow {
    pub fn new(t0: f64, length: f64) -> Result<Self> {
        if !(t0 >= 0.0 && length >= 0.0 && t0 + length <= 1.0 + 1e-12) {
            return Err(invalid(format!("window [{t0}, {t0}+{length}] not inside [0, 1]")));
        }
        Ok(TimeWindow { t0, length, initial_samples: None, max_levels: MAX_LEVELS })
    }

    pub fn contains(&self, other: &TimeWindow) -> bool {
        other.t0 >= self.t0 && other.t0 + other.length <= self.t0 + self.length
    }

    /// Seed step: a dyadic `h <= min(|J|/2, 1/(2 rate))`, so nested windows share lattice points.
    fn seed_step(&self, rate: f64) -> f64 {
        if let Some(n) = self.initial_samples {
            return self.length / n.max(1) as f64;
        }
        let hmax = (0.5 * self.length).min(0.5 / rate.max(1e-300));
        2f64.powi(-(hmax.recip().log2().ceil() as i32))
    }

    /// Lattice points `k·h` strictly inside the window with `k ≡ 1 mod stride`.
    fn lattice(&self, h: f64, stride: u64) -> Vec<f64> {
        let end = self.t0 + self.length;
        if self.initial_samples.is_some() {
            let n = (self.length / h).round() as u64;
            return (1..n).filter(|k| stride == 1 || k % stride == 1).map(|k| self.t0 + k as f64 * h).collect();
        }
        let first = (self.t0 / h).floor() as u64 + 1;
        (first..)
            .map(|k| (k, k as f64 * h))
            .take_while(|&(_, t)| t < end)
            .filter(|&(k, _)| stride == 1 || k % stride == 1)
            .map(|(_, t)| t)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TimeSet {
    Points(Vec<f64>),
    Window(TimeWindow),
}

impl TimeSet {
    /// Explicit sample times: points as given, windows as the seed lattice refined `levels` times.
    pub fn sample_times(&self, rate: f64, levels: u32) -> Vec<f64> {
        match self {
            TimeSet::Points(p) => p.clone(),
            TimeSet::Window(w) => window_lattice(w, rate, levels),
        }
    }
}

/// Endpoints plus the dyadic seed lattice of `window` halved `levels` times.
pub fn window_lattice(window: &TimeWindow, rate: f64, levels: u32) -> Vec<f64> {
    if window.length == 0.0 {
        return vec![window.t0];
    }
    let h = window.seed_step(rate) * 0.5f64.powi(levels as i32);
    let mut times = vec![window.t0];
    times.extend(window.lattice(h, 1));
    times.push(window.t0 + window.length);
    times
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProductSet {
    pub ball_radius: f64,
    pub ball_center: f64,
    pub window: TimeWindow,
}

impl ProductSet {
    pub fn new(ball_radius: f64, window: TimeWindow) -> Result<Self> {
        if !(ball_radius >= 0.0) {
            return Err(invalid(format!("ball radius {ball_radius} must be nonnegative")));
        }
        Ok(ProductSet { ball_radius, ball_center: 0.0, window })
    }
}

/// Pointwise supremum sampled on a spatial grid or radial node set.
#[derive(Debug, Clone, PartialEq)]
pub struct SupFunction {
    pub values: Vec<f64>,
    pub weights: Vec<f64>,
    pub samples: usize,
    pub residual: f64,
    /// True when a sequence cutoff selected no times.
    pub empty: bool,
}

impl SupFunction {
    pub fn l2_norm(&self) -> f64 {
        self.values.iter().zip(&self.weights).map(|(v, w)| w * v * v).sum::<f64>().sqrt()
    }
}

/// Evaluator of `|S_t f|` on a fixed node set for batches of times.
pub trait ModulusEvaluator: Sync {
    fn len(&self) -> usize;
    /// Updates `acc` with `max(acc, |S_t f|)` for every time in `times`.
    fn accumulate(&self, times: &[f64], acc: &mut [f64]);
}

fn merge_max(acc: &mut [f64], other: &[f64]) {
    for (a, b) in acc.iter_mut().zip(other) {
        if *b > *a {
            *a = *b;
        }
    }
}

pub(crate) fn accumulate_parallel<E: ModulusEvaluator>(eval: &E, times: &[f64], acc: &mut [f64]) {
    let partial = times
        .par_chunks(BLOCK)
        .map(|chunk| {
            let mut local = vec![0.0; eval.len()];
            eval.accumulate(chunk, &mut local);
            local
        })
        .reduce(
            || vec![0.0; eval.len()],
            |mut a, b| {
                merge_max(&mut a, &b);
                a
            },
        );
    merge_max(acc, &partial);
}

/// Adaptive sup over a window: uniform seed grid, then midpoint doubling until the
/// weighted L² norm changes by less than [`REFINE_TOL`].
pub fn adaptive_sup<E: ModulusEvaluator>(eval: &E, window: &TimeWindow, rate: f64, weights: &[f64]) -> SupFunction {
    let mut acc = vec![0.0; eval.len()];
    let norm = |acc: &[f64]| acc.iter().zip(weights).map(|(v, w)| w * v * v).sum::<f64>().sqrt();
    if window.length == 0.0 {
        eval.accumulate(&[window.t0], &mut acc);
        return SupFunction { values: acc, weights: weights.to_vec(), samples: 1, residual: 0.0, empty: false };
    }
    let mut h = window.seed_step(rate);
    let mut times = vec![window.t0];
    times.extend(window.lattice(h, 1));
    times.push(window.t0 + window.length);
    accumulate_parallel(eval, &times, &mut acc);
    let mut samples = times.len();
    let mut prev = norm(&acc);
    let mut residual = f64::INFINITY;
    for _ in 0..window.max_levels {
        h *= 0.5;
        let mids = window.lattice(h, 2);
        accumulate_parallel(eval, &mids, &mut acc);
        samples += mids.len();
        let cur = norm(&acc);
        residual = if prev > 0.0 { (cur - prev).abs() / prev } else { 0.0 };
        prev = cur;
        if residual < REFINE_TOL {
            break;
        }
    }
    SupFunction { values: acc, weights: weights.to_vec(), samples, residual, empty: false }
}

/// `|S_t f(x_j)|` on the spatial grid via FFT, with phase recurrences inside uniform batches.
pub struct LineEvaluator {
    transform: Transform,
    modes: Vec<usize>,
    signed: Vec<Complex64>,
    symbol: Vec<f64>,
}

impl LineEvaluator {
    pub fn new(f: &SpectralFunction1D, a: f64) -> Self {
        let transform = Transform::new(f.grid);
        let signed_all = transform.signed(f);
        let modes: Vec<usize> = (0..f.grid.point_count()).filter(|&k| signed_all[k].norm_sqr() > 0.0).collect();
        let signed = modes.iter().map(|&k| signed_all[k]).collect();
        let symbol = modes.iter().map(|&k| dispersion(f.grid.xi(k), a)).collect();
        LineEvaluator { transform, modes, signed, symbol }
    }

    pub fn grid(&self) -> GridSpec {
        self.transform.grid()
    }
}

impl ModulusEvaluator for LineEvaluator {
    fn len(&self) -> usize {
        self.grid().point_count()
    }

    fn accumulate(&self, times: &[f64], acc: &mut [f64]) {
        if times.is_empty() {
            return;
        }
        let n = self.len();
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        let mut scratch = self.transform.scratch();
        let mut modulus = vec![0.0; n];
        let uniform = times.len() > 2 && {
            let h = times[1] - times[0];
            times.windows(2).all(|w| ((w[1] - w[0]) - h).abs() <= 1e-12 * h.abs().max(1e-300))
        };
        let mut phase: Vec<Complex64> = self.symbol.iter().map(|&w| Complex64::from_polar(1.0, times[0] * w)).collect();
        let step: Vec<Complex64> = if uniform {
            let h = times[1] - times[0];
            self.symbol.iter().map(|&w| Complex64::from_polar(1.0, h * w)).collect()
        } else {
            Vec::new()
        };
        for (i, &t) in times.iter().enumerate() {
            if i > 0 {
                if uniform {
                    for (p, s) in phase.iter_mut().zip(&step) {
                        *p *= s;
                    }
                } else {
                    for (p, &w) in phase.iter_mut().zip(&self.symbol) {
                        *p = Complex64::from_polar(1.0, t * w);
                    }
                }
            }
            buf.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
            for ((&k, c), p) in self.modes.iter().zip(&self.signed).zip(&phase) {
                buf[k] = c * p;
            }
            self.transform.inverse_modulus_signed(&mut buf, &mut scratch, &mut modulus);
            merge_max(acc, &modulus);
        }
    }
}

fn band_rate(f: &SpectralFunction1D, a: f64) -> Result<f64> {
    let lambda = f.band_limit.ok_or(Error::MissingBandLimit)?;
    Ok(dispersion(lambda, a).max(1.0))
}

fn check_a(a: f64) -> Result<()> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(invalid(format!("dispersion exponent a = {a} must be positive")));
    }
    Ok(())
}

/// Sup over an explicit list of times.
pub fn maximal_over_points(f: &SpectralFunction1D, times: &[f64], a: f64) -> Result<SupFunction> {
    check_a(a)?;
    if times.iter().any(|t| !(*t >= 0.0 && t.is_finite())) {
        return Err(invalid("times must be finite and nonnegative"));
    }
    let eval = LineEvaluator::new(f, a);
    let weights = vec![f.grid.dx(); f.grid.point_count()];
    let mut acc = vec![0.0; eval.len()];
    accumulate_parallel(&eval, times, &mut acc);
    Ok(SupFunction { values: acc, weights, samples: times.len(), residual: 0.0, empty: times.is_empty() })
}

pub fn maximal_over_window(f: &SpectralFunction1D, window: &TimeWindow, a: f64) -> Result<SupFunction> {
    check_a(a)?;
    let rate = band_rate(f, a)?;
    let eval = LineEvaluator::new(f, a);
    let weights = vec![f.grid.dx(); f.grid.point_count()];
    Ok(adaptive_sup(&eval, window, rate, &weights))
}

/// Sup over sequence members `t_m` with `b_low < t_m <= b_high`.
///
/// Members closer together than the Nyquist step `1/(4λ^a)` are replaced by a
/// uniform sampling of the interval they fill.
pub fn maximal_over_sequence(
    f: &SpectralFunction1D,
    seq: &TimeSequence,
    a: f64,
    cutoffs: Option<(f64, f64)>,
) -> Result<SupFunction> {
    check_a(a)?;
    let rate = band_rate(f, a)?;
    let (b_low, b_high) = cutoffs.unwrap_or((0.0, 1.0));
    let eval = LineEvaluator::new(f, a);
    let weights = vec![f.grid.dx(); f.grid.point_count()];
    let dense_step = 0.25 / rate;
    let mut times = Vec::new();
    let mut tail_top = None;
    let mut m = 1usize;
    loop {
        let t = seq.term(m);
        if !(t > b_low) {
            break;
        }
        let next = seq.term(m + 1);
        if t <= b_high {
            if t - next < dense_step && seq.is_infinite() {
                tail_top = Some(t);
                break;
            }
            times.push(t);
        }
        if seq.len().is_some_and(|l| m >= l) {
            break;
        }
        m += 1;
    }
    if let Some(top) = tail_top {
        let count = ((top - b_low) / dense_step).ceil() as usize;
        for i in 0..=count {
            let t = top - (top - b_low) * i as f64 / count as f64;
            if t > b_low || (b_low == 0.0 && t == 0.0) {
                times.push(t);
            }
        }
    }
    if times.is_empty() {
        return Ok(SupFunction { values: vec![0.0; weights.len()], weights, samples: 0, residual: 0.0, empty: true });
    }
    let mut acc = vec![0.0; eval.len()];
    accumulate_parallel(&eval, &times, &mut acc);
    Ok(SupFunction { values: acc, weights, samples: times.len(), residual: 0.0, empty: false })
}

/// Sup over `E = B × J`; translations on the spatial grid are exact index shifts.
pub fn maximal_over_e(f: &SpectralFunction1D, e: &ProductSet, a: f64) -> Result<SupFunction> {
    check_a(a)?;
    let lambda = f.band_limit.ok_or(Error::MissingBandLimit)?;
    let grid = f.grid;
    if e.ball_radius + e.ball_center.abs() > 0.25 * grid.half_length() {
        return Err(invalid(format!("ball radius {} exceeds the domain guard zone", e.ball_radius)));
    }
    let base = maximal_over_window(f, &e.window, a)?;
    if e.ball_radius == 0.0 && e.ball_center == 0.0 {
        return Ok(base);
    }
    let dx = grid.dx();
    let y_step = 0.5 / lambda;
    let n = grid.point_count();
    let mut out = vec![0.0; n];
    if dx <= y_step && (e.ball_center / dx).fract() == 0.0 {
        let c = (e.ball_center / dx) as i64;
        let k = (e.ball_radius / dx).floor() as i64;
        for (j, o) in out.iter_mut().enumerate() {
            let mut m: f64 = 0.0;
            for s in (c - k)..=(c + k) {
                let idx = (j as i64 + s).rem_euclid(n as i64) as usize;
                m = m.max(base.values[idx]);
            }
            *o = m;
        }
        return Ok(SupFunction { values: out, samples: base.samples * (2 * k as usize + 1), ..base });
    }
    let count = ((2.0 * e.ball_radius) / y_step).ceil() as usize;
    let mut samples = 0;
    let mut residual: f64 = 0.0;
    for i in 0..=count {
        let y = e.ball_center - e.ball_radius + 2.0 * e.ball_radius * i as f64 / count.max(1) as f64;
        let shifted = f.translate(y);
        let sup = maximal_over_window(&shifted, &e.window, a)?;
        merge_max(&mut out, &sup.values);
        samples += sup.samples;
        residual = residual.max(sup.residual);
    }
    Ok(SupFunction { values: out, weights: base.weights, samples, residual, empty: false })
}

/// Bound shapes whose normalized ratios are fitted against `λ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundModel {
    /// `1 + |J|^p λ^q`.
    PowerLaw { p: f64, q: f64 },
    /// `|J|^{1/4} λ^{a/2} + r^{1/2} λ^{1/2} + 1`.
    BallWindow,
    /// `(1 + |J| λ^a)(1 + rλ)^n`.
    Product { n: u32 },
    /// `λ^s`.
    Sobolev { s: f64 },
}

impl BoundModel {
    pub fn window_full(a: f64) -> Self {
        BoundModel::PowerLaw { p: 1.0, q: a }
    }

    pub fn window_half(a: f64) -> Self {
        BoundModel::PowerLaw { p: 0.5, q: a / 2.0 }
    }

    pub fn window_quarter(a: f64) -> Self {
        BoundModel::PowerLaw { p: 0.25, q: a / 4.0 }
    }

    /// The growing part, used as the regressor of the raw fit.
    pub fn core(&self, lambda: f64, j_len: f64, r: f64, a: f64) -> f64 {
        match *self {
            BoundModel::PowerLaw { p, q } => j_len.powf(p) * lambda.powf(q),
            _ => self.predictor(lambda, j_len, r, a),
        }
    }

    pub fn predictor(&self, lambda: f64, j_len: f64, r: f64, a: f64) -> f64 {
        match *self {
            BoundModel::PowerLaw { p, q } => 1.0 + j_len.powf(p) * lambda.powf(q),
            BoundModel::BallWindow => j_len.powf(0.25) * lambda.powf(a / 2.0) + (r * lambda).sqrt() + 1.0,
            BoundModel::Product { n } => (1.0 + j_len * lambda.powf(a)) * (1.0 + r * lambda).powi(n as i32),
            BoundModel::Sobolev { s } => lambda.powf(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaximalReport {
    pub lambda: f64,
    pub window_length: f64,
    pub ball_radius: f64,
    pub a: f64,
    pub s: f64,
    pub seed: u64,
    pub ratio: f64,
    pub samples: usize,
    pub residual: f64,
}

impl MaximalReport {
    pub fn from_sup(sup: &SupFunction, f_norm: f64, lambda: f64, window_length: f64, ball_radius: f64, a: f64, s: f64, seed: u64) -> Self {
        MaximalReport {
            lambda,
            window_length,
            ball_radius,
            a,
            s,
            seed,
            ratio: sup.l2_norm() / f_norm,
            samples: sup.samples,
            residual: sup.residual,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub slope: f64,
    pub intercept: f64,
    pub residual: f64,
    pub model: BoundModel,
    /// Slope of `log(ratio / predictor)` against `log λ`.
    pub normalized_slope: f64,
    pub bounded: bool,
}

/// Least squares `y = slope·x + intercept`; returns (slope, intercept, rms residual).
pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<(f64, f64, f64)> {
    let n = x.len() as f64;
    if x.len() < 2 {
        return Err(Error::DegenerateFit("fewer than two points".into()));
    }
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    if sxx <= 1e-300 {
        return Err(Error::DegenerateFit("no spread in abscissa".into()));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = x.iter().zip(y).map(|(a, b)| (b - slope * a - intercept).powi(2)).sum();
    Ok((slope, intercept, (rss / n).sqrt()))
}

/// Slope tolerance for the bounded-shape verdict.
pub const SLOPE_TOL: f64 = 0.05;

pub fn scaling_fit(reports: &[MaximalReport], model: BoundModel) -> Result<ScalingFit> {
    if reports.len() < 4 {
        return Err(Error::DegenerateFit(format!("{} reports, need at least 4", reports.len())));
    }
    let lmin = reports.iter().map(|r| r.lambda).fold(f64::INFINITY, f64::min);
    let lmax = reports.iter().map(|r| r.lambda).fold(0.0, f64::max);
    if lmax / lmin < 4.0 - 1e-9 {
        return Err(Error::DegenerateFit("λ range spans fewer than three dyadic values".into()));
    }
    let x: Vec<f64> = reports.iter().map(|r| model.core(r.lambda, r.window_length, r.ball_radius, r.a).ln()).collect();
    let y: Vec<f64> = reports.iter().map(|r| r.ratio.ln()).collect();
    let (slope, intercept, residual) = linear_fit(&x, &y)?;
    let lx: Vec<f64> = reports.iter().map(|r| r.lambda.ln()).collect();
    let ly: Vec<f64> = reports
        .iter()
        .map(|r| (r.ratio / model.predictor(r.lambda, r.window_length, r.ball_radius, r.a)).ln())
        .collect();
    let (normalized_slope, _, _) = linear_fit(&lx, &ly)?;
    Ok(ScalingFit { slope, intercept, residual, model, normalized_slope, bounded: normalized_slope <= SLOPE_TOL })
}

/// Grid measure of `{x : sup_{m >= tail_start} |S_{t_m} f(x) - f(x)| > delta}`.
pub fn convergence_probe(f: &SpectralFunction1D, seq: &TimeSequence, a: f64, delta: f64, tail_start: usize) -> Result<f64> {
    check_a(a)?;
    if !(delta > 0.0) {
        return Err(invalid("delta must be positive"));
    }
    let grid = f.grid;
    let transform = Transform::new(grid);
    let base = transform.inverse(f);
    // |S_t f - f| <= t Σ|F_k||ξ_k|^a dξ / 2π, so later members cannot cross delta/10.
    let weight: f64 = (0..grid.point_count())
        .map(|k| f.coefficients[k].norm() * dispersion(grid.xi(k), a))
        .sum::<f64>()
        * grid.dxi()
        / (2.0 * std::f64::consts::PI);
    let mut sup = vec![0.0f64; grid.point_count()];
    let mut scratch = transform.scratch();
    let signed = transform.signed(f);
    let mut m = tail_start.max(1);
    loop {
        let t = seq.term(m);
        if t * weight < 0.1 * delta || seq.len().is_some_and(|l| m > l) || m > 100_000 {
            break;
        }
        let mut buf: Vec<Complex64> = signed
            .iter()
            .enumerate()
            .map(|(k, c)| c * Complex64::from_polar(1.0, t * dispersion(grid.xi(k), a)))
            .collect();
        transform.inverse_signed(&mut buf, &mut scratch);
        for ((s, z), b) in sup.iter_mut().zip(&buf).zip(&base.samples) {
            *s = s.max((z - b).norm());
        }
        m += 1;
    }
    Ok(sup.iter().filter(|&&v| v > delta).count() as f64 * grid.dx())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{make_bandlimited_random, BandShape};
    use std::f64::consts::PI;

    fn input(lambda: f64, seed: u64) -> SpectralFunction1D {
        let g = GridSpec::for_band(lambda, PI, 2.0).unwrap();
        make_bandlimited_random(lambda, BandShape::Ball, seed, g).unwrap()
    }

    #[test]
    fn zero_length_window_is_single_slice() {
        let f = input(8.0, 1);
        let w = TimeWindow::new(0.3, 0.0).unwrap();
        let sup = maximal_over_window(&f, &w, 2.0).unwrap();
        let slice = crate::spectral::inverse_transform(&crate::spectral::propagate(&f, 0.3, 2.0).unwrap());
        for (s, z) in sup.values.iter().zip(&slice.samples) {
            assert!((s - z.norm()).abs() < 1e-12);
        }
    }

    #[test]
    fn window_monotone_and_ratio_floor() {
        let f = input(16.0, 2);
        let fixed = |t0, len| TimeWindow { max_levels: 0, ..TimeWindow::new(t0, len).unwrap() };
        let small = maximal_over_window(&f, &fixed(0.25, 0.125), 2.0).unwrap();
        let big = maximal_over_window(&f, &fixed(0.125, 0.5), 2.0).unwrap();
        for (s, b) in small.values.iter().zip(&big.values) {
            assert!(*s <= b + 1e-12);
        }
        let adaptive = maximal_over_window(&f, &TimeWindow::new(0.25, 0.125).unwrap(), 2.0).unwrap();
        assert!(adaptive.l2_norm() / f.l2_norm() >= 1.0 - 1e-9);
        assert!(adaptive.residual < REFINE_TOL);
        for (r, s) in adaptive.values.iter().zip(&small.values) {
            assert!(*r >= *s);
        }
    }

    #[test]
    fn phase_recurrence_matches_direct() {
        let f = input(16.0, 5);
        let eval = LineEvaluator::new(&f, 2.0);
        let times: Vec<f64> = (0..64).map(|i| 0.1 + i as f64 * 0.003).collect();
        let mut a = vec![0.0; eval.len()];
        eval.accumulate(&times, &mut a);
        let mut b = vec![0.0; eval.len()];
        for t in &times {
            eval.accumulate(&[*t], &mut b);
        }
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn missing_band_limit() {
        let mut f = input(8.0, 1);
        f.band_limit = None;
        assert!(matches!(maximal_over_window(&f, &TimeWindow::new(0.0, 0.5).unwrap(), 2.0), Err(Error::MissingBandLimit)));
    }

    #[test]
    fn sequence_edge_cases() {
        let f = input(8.0, 3);
        let one = TimeSequence::explicit(vec![0.4], true).unwrap();
        let sup = maximal_over_sequence(&f, &one, 2.0, None).unwrap();
        let slice = crate::spectral::inverse_transform(&crate::spectral::propagate(&f, 0.4, 2.0).unwrap());
        for (s, z) in sup.values.iter().zip(&slice.samples) {
            assert!((s - z.norm()).abs() < 1e-12);
        }
        let none = maximal_over_sequence(&f, &one, 2.0, Some((0.5, 0.9))).unwrap();
        assert!(none.empty);
        assert!(none.values.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn product_set_reductions() {
        let f = input(8.0, 4);
        let w = TimeWindow::new(0.0, 0.25).unwrap();
        let base = maximal_over_window(&f, &w, 2.0).unwrap();
        let e = maximal_over_e(&f, &ProductSet::new(0.0, w).unwrap(), 2.0).unwrap();
        assert_eq!(base.values, e.values);
        let z = TimeWindow::new(0.4, 0.0).unwrap();
        let e0 = maximal_over_e(&f, &ProductSet::new(0.0, z).unwrap(), 2.0).unwrap();
        let slice = crate::spectral::inverse_transform(&crate::spectral::propagate(&f, 0.4, 2.0).unwrap());
        for (s, v) in e0.values.iter().zip(&slice.samples) {
            assert!((s - v.norm()).abs() < 1e-12);
        }
        let wide = maximal_over_e(&f, &ProductSet::new(0.1, w).unwrap(), 2.0).unwrap();
        for (s, b) in wide.values.iter().zip(&base.values) {
            assert!(*s >= *b);
        }
    }

    #[test]
    fn synthetic_fit() {
        let model = BoundModel::window_half(2.0);
        let reports: Vec<MaximalReport> = [16.0, 32.0, 64.0, 128.0]
            .iter()
            .map(|&l| MaximalReport {
                lambda: l,
                window_length: 1.0,
                ball_radius: 0.0,
                a: 2.0,
                s: 0.0,
                seed: 0,
                ratio: 3.0 * model.core(l, 1.0, 0.0, 2.0),
                samples: 0,
                residual: 0.0,
            })
            .collect();
        let fit = scaling_fit(&reports, model).unwrap();
        assert!((fit.slope - 1.0).abs() < 1e-12);
        assert!((fit.intercept - 3f64.ln()).abs() < 1e-12);
        assert!(fit.residual < 1e-12);
        assert!(scaling_fit(&reports[..3], model).is_err());
    }

    #[test]
    fn convergence_probe_trivial_cases() {
        let g = GridSpec::new(256, 20.0).unwrap();
        let zero = SpectralFunction1D::zeros(g);
        let seq = TimeSequence::geometric(0.5).unwrap();
        assert_eq!(convergence_probe(&zero, &seq, 2.0, 1e-3, 1).unwrap(), 0.0);
        let f = input(8.0, 1);
        assert_eq!(convergence_probe(&f, &seq, 2.0, 1e6, 1).unwrap(), 0.0);
    }
}
