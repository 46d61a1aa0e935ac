//! Uniform 1-D grids, the spectral representation and the propagator `S_t`.

use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::quadrature;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    point_count: usize,
    half_length: f64,
}

impl GridSpec {
    pub fn new(point_count: usize, half_length: f64) -> Result<Self> {
        if point_count < 8 || !point_count.is_power_of_two() {
            return Err(Error::InvalidGrid(format!("point count {point_count} must be a power of two >= 8")));
        }
        if !(half_length > 0.0 && half_length.is_finite()) {
            return Err(Error::InvalidGrid(format!("half length {half_length} must be positive")));
        }
        Ok(GridSpec { point_count, half_length })
    }

    /// Smallest grid on `[-L, L)` whose Nyquist frequency strictly exceeds `factor * lambda`.
    pub fn for_band(lambda: f64, half_length: f64, factor: f64) -> Result<Self> {
        let dxi = PI / half_length;
        let mut n = 8usize;
        while (n / 2) as f64 * dxi <= factor * lambda {
            n *= 2;
        }
        GridSpec::new(n, half_length)
    }

    pub fn point_count(&self) -> usize {
        self.point_count
    }

    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.half_length / self.point_count as f64
    }

    pub fn dxi(&self) -> f64 {
        PI / self.half_length
    }

    /// The Nyquist frequency; `-xi_max` is on the grid, `+xi_max` is not.
    pub fn xi_max(&self) -> f64 {
        (self.point_count / 2) as f64 * self.dxi()
    }

    pub fn x(&self, j: usize) -> f64 {
        -self.half_length + j as f64 * self.dx()
    }

    pub fn xi(&self, k: usize) -> f64 {
        (k as f64 - (self.point_count / 2) as f64) * self.dxi()
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.point_count).map(|j| self.x(j)).collect()
    }

    pub fn xis(&self) -> Vec<f64> {
        (0..self.point_count).map(|k| self.xi(k)).collect()
    }

    /// Index of the frequency `-xi(k)`, if it lies on the grid.
    pub fn mirror(&self, k: usize) -> Option<usize> {
        if k == 0 {
            None
        } else {
            Some(self.point_count - k)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralFunction1D {
    pub grid: GridSpec,
    pub coefficients: Vec<Complex64>,
    pub band_limit: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction1D {
    pub grid: GridSpec,
    pub samples: Vec<Complex64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersionParams {
    pub a: f64,
    pub s: f64,
    pub n: usize,
}

impl DispersionParams {
    pub fn new(a: f64, s: f64, n: usize) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(invalid(format!("dispersion exponent a = {a} must be positive")));
        }
        if !(s >= 0.0 && s.is_finite()) {
            return Err(invalid(format!("Sobolev index s = {s} must be nonnegative")));
        }
        if n == 0 {
            return Err(invalid("dimension must be positive"));
        }
        Ok(DispersionParams { a, s, n })
    }
}

impl SpectralFunction1D {
    pub fn new(grid: GridSpec, coefficients: Vec<Complex64>, band_limit: Option<f64>) -> Result<Self> {
        if coefficients.len() != grid.point_count() {
            return Err(Error::InvalidGrid(format!(
                "{} coefficients for {} grid points",
                coefficients.len(),
                grid.point_count()
            )));
        }
        let mut f = SpectralFunction1D { grid, coefficients, band_limit: None };
        if let Some(lam) = band_limit {
            f = f.truncate(lam);
        }
        Ok(f)
    }

    pub fn zeros(grid: GridSpec) -> Self {
        SpectralFunction1D { grid, coefficients: vec![Complex64::new(0.0, 0.0); grid.point_count()], band_limit: None }
    }

    /// Sample `h(ξ)` at every grid frequency.
    pub fn from_fn(grid: GridSpec, h: impl Fn(f64) -> Complex64) -> Self {
        let coefficients = (0..grid.point_count()).map(|k| h(grid.xi(k))).collect();
        SpectralFunction1D { grid, coefficients, band_limit: None }
    }

    /// Sharp truncation to `|ξ| <= lambda`.
    pub fn truncate(mut self, lambda: f64) -> Self {
        for k in 0..self.grid.point_count() {
            if self.grid.xi(k).abs() > lambda {
                self.coefficients[k] = Complex64::new(0.0, 0.0);
            }
        }
        self.band_limit = Some(lambda);
        self
    }

    /// `‖f̂‖_{L²}` by the rectangle rule.
    pub fn fourier_norm(&self) -> f64 {
        (self.coefficients.iter().map(|c| c.norm_sqr()).sum::<f64>() * self.grid.dxi()).sqrt()
    }

    /// `‖f‖_{L²} = (2π)^{-1/2} ‖f̂‖`.
    pub fn l2_norm(&self) -> f64 {
        self.fourier_norm() / (2.0 * PI).sqrt()
    }

    pub fn scale(mut self, c: f64) -> Self {
        for z in &mut self.coefficients {
            *z *= c;
        }
        self
    }

    /// Translate by `y`: multiply by `e^{iξy}`.
    pub fn translate(&self, y: f64) -> Self {
        let mut out = self.clone();
        for (k, z) in out.coefficients.iter_mut().enumerate() {
            *z *= Complex64::from_polar(1.0, self.grid.xi(k) * y);
        }
        out
    }
}

impl GridFunction1D {
    pub fn new(grid: GridSpec, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != grid.point_count() {
            return Err(Error::InvalidGrid(format!("{} samples for {} grid points", samples.len(), grid.point_count())));
        }
        Ok(GridFunction1D { grid, samples })
    }

    pub fn from_fn(grid: GridSpec, f: impl Fn(f64) -> Complex64) -> Self {
        let samples = (0..grid.point_count()).map(|j| f(grid.x(j))).collect();
        GridFunction1D { grid, samples }
    }

    pub fn l2_norm(&self) -> f64 {
        (self.samples.iter().map(|c| c.norm_sqr()).sum::<f64>() * self.grid.dx()).sqrt()
    }
}

/// Planned FFTs for one grid size.
#[derive(Clone)]
pub struct Transform {
    grid: GridSpec,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Transform {
    pub fn new(grid: GridSpec) -> Self {
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(grid.point_count());
        let inverse = planner.plan_fft_inverse(grid.point_count());
        Transform { grid, forward, inverse }
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn scratch(&self) -> Vec<Complex64> {
        let len = self.forward.get_inplace_scratch_len().max(self.inverse.get_inplace_scratch_len());
        vec![Complex64::new(0.0, 0.0); len]
    }

    /// `(-1)^k` checkerboard; with `N/2` even, `e^{-iξ_k x_j} = (-1)^{k+j} e^{-2πikj/N}`.
    fn sign(i: usize) -> f64 {
        if i % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    pub fn forward(&self, f: &GridFunction1D) -> SpectralFunction1D {
        let mut buf: Vec<Complex64> = f.samples.iter().enumerate().map(|(j, z)| z * Self::sign(j)).collect();
        let mut scratch = self.scratch();
        self.forward.process_with_scratch(&mut buf, &mut scratch);
        let dx = self.grid.dx();
        for (k, z) in buf.iter_mut().enumerate() {
            *z *= dx * Self::sign(k);
        }
        SpectralFunction1D { grid: self.grid, coefficients: buf, band_limit: None }
    }

    pub fn inverse(&self, f: &SpectralFunction1D) -> GridFunction1D {
        let mut buf: Vec<Complex64> = f.coefficients.iter().enumerate().map(|(k, z)| z * Self::sign(k)).collect();
        let mut scratch = self.scratch();
        self.inverse.process_with_scratch(&mut buf, &mut scratch);
        let c = 1.0 / (2.0 * self.grid.half_length());
        for (j, z) in buf.iter_mut().enumerate() {
            *z *= c * Self::sign(j);
        }
        GridFunction1D { grid: self.grid, samples: buf }
    }

    /// Moduli `|f(x_j)|` from checkerboard-signed coefficients, in place.
    ///
    /// `signed[k]` must already carry the `(-1)^k` factor; `buf` is overwritten.
    pub fn inverse_modulus_signed(&self, buf: &mut [Complex64], scratch: &mut [Complex64], out: &mut [f64]) {
        self.inverse.process_with_scratch(buf, scratch);
        let c = 1.0 / (2.0 * self.grid.half_length());
        for (o, z) in out.iter_mut().zip(buf.iter()) {
            *o = c * z.norm();
        }
    }

    /// Like [`Transform::inverse_modulus_signed`] but returns complex samples.
    pub fn inverse_signed(&self, buf: &mut [Complex64], scratch: &mut [Complex64]) {
        self.inverse.process_with_scratch(buf, scratch);
        let c = 1.0 / (2.0 * self.grid.half_length());
        for (j, z) in buf.iter_mut().enumerate() {
            *z *= c * Self::sign(j);
        }
    }

    pub fn signed(&self, f: &SpectralFunction1D) -> Vec<Complex64> {
        f.coefficients.iter().enumerate().map(|(k, z)| z * Self::sign(k)).collect()
    }
}

pub fn forward_transform(f: &GridFunction1D) -> SpectralFunction1D {
    Transform::new(f.grid).forward(f)
}

pub fn inverse_transform(f: &SpectralFunction1D) -> GridFunction1D {
    Transform::new(f.grid).inverse(f)
}

fn check_dispersion(t: f64, a: f64) -> Result<()> {
    if !t.is_finite() || t < 0.0 {
        return Err(invalid(format!("time t = {t} must be finite and nonnegative")));
    }
    if !(a > 0.0 && a.is_finite()) {
        return Err(invalid(format!("dispersion exponent a = {a} must be positive")));
    }
    Ok(())
}

/// `|ξ|^a`, with `0^a = 0`.
pub fn dispersion(xi: f64, a: f64) -> f64 {
    let m = xi.abs();
    if m == 0.0 {
        0.0
    } else if a == 2.0 {
        m * m
    } else {
        m.powf(a)
    }
}

pub fn propagate(f: &SpectralFunction1D, t: f64, a: f64) -> Result<SpectralFunction1D> {
    check_dispersion(t, a)?;
    let mut out = f.clone();
    for (k, z) in out.coefficients.iter_mut().enumerate() {
        *z *= Complex64::from_polar(1.0, t * dispersion(f.grid.xi(k), a));
    }
    Ok(out)
}

/// `‖f‖_{H_s} = (∫ (1+ξ²)^s |f̂|² dξ)^{1/2}`.
pub fn sobolev_norm(f: &SpectralFunction1D, s: f64) -> f64 {
    let g = f.grid;
    let sum: f64 = f
        .coefficients
        .iter()
        .enumerate()
        .map(|(k, z)| (1.0 + g.xi(k).powi(2)).powf(s) * z.norm_sqr())
        .sum();
    (sum * g.dxi()).sqrt()
}

/// Shell index of `|ξ|`: 0 for `|ξ| <= 1`, `j` for `2^{j-1} < |ξ| <= 2^j`.
pub fn shell_index(xi: f64) -> usize {
    let m = xi.abs();
    if m <= 1.0 {
        return 0;
    }
    let mut j = 1;
    while m > (j as f64).exp2() {
        j += 1;
    }
    j
}

pub fn littlewood_paley_split(f: &SpectralFunction1D) -> Vec<SpectralFunction1D> {
    let g = f.grid;
    let top = shell_index(g.xi_max());
    let mut shells: Vec<SpectralFunction1D> = (0..=top).map(|_| SpectralFunction1D::zeros(g)).collect();
    for k in 0..g.point_count() {
        let j = shell_index(g.xi(k));
        shells[j].coefficients[k] = f.coefficients[k];
    }
    for (j, sh) in shells.iter_mut().enumerate() {
        let upper = (j as f64).exp2();
        sh.band_limit = Some(match f.band_limit {
            Some(l) => l.min(upper),
            None => upper,
        });
    }
    shells
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BandShape {
    Ball,
    Annulus,
}

impl BandShape {
    pub fn contains(&self, xi: f64, lambda: f64) -> bool {
        let m = xi.abs();
        match self {
            BandShape::Ball => m <= lambda,
            BandShape::Annulus => m >= 0.5 * lambda && m <= lambda,
        }
    }
}

/// Random coefficients on `{|ξ| <= λ}` or `{λ/2 <= |ξ| <= λ}` with `‖f‖₂ = 1`.
pub fn make_bandlimited_random(lambda: f64, shape: BandShape, seed: u64, grid: GridSpec) -> Result<SpectralFunction1D> {
    if !(lambda >= 1.0) {
        return Err(invalid(format!("band limit {lambda} must be at least 1")));
    }
    if lambda >= grid.xi_max() {
        return Err(Error::BandLimitTooLarge { limit: lambda, nyquist: grid.xi_max() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coefficients: Vec<Complex64> = (0..grid.point_count())
        .map(|k| {
            let re: f64 = rng.gen_range(-1.0..1.0);
            let im: f64 = rng.gen_range(-1.0..1.0);
            if shape.contains(grid.xi(k), lambda) {
                Complex64::new(re, im)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    let f = SpectralFunction1D { grid, coefficients, band_limit: Some(lambda) };
    let norm = f.l2_norm();
    if norm == 0.0 {
        return Err(invalid("band contains no grid frequencies"));
    }
    Ok(f.scale(1.0 / norm))
}

fn bump_raw(x: f64) -> f64 {
    let u = 1.0 - 4.0 * x * x;
    if u <= 0.0 {
        0.0
    } else {
        (-1.0 / u).exp()
    }
}

fn bump_mass() -> f64 {
    static MASS: OnceLock<f64> = OnceLock::new();
    *MASS.get_or_init(|| quadrature::integrate(bump_raw, -0.5, 0.5, 1e-16, 1e-15).expect("bump mass"))
}

/// Even bump supported in `[-1/2, 1/2]` with unit mass.
pub fn bump(x: f64) -> f64 {
    bump_raw(x) / bump_mass()
}

pub fn make_bump(nodes: &[f64]) -> Vec<f64> {
    nodes.iter().map(|&x| bump(x)).collect()
}

/// `∫ g²` for the unit-mass bump.
pub fn bump_energy() -> f64 {
    static ENERGY: OnceLock<f64> = OnceLock::new();
    *ENERGY.get_or_init(|| quadrature::integrate(|x| bump(x).powi(2), -0.5, 0.5, 1e-16, 1e-15).expect("bump energy"))
}
