//! Radial reduction: the Hankel-type evolution `S̃_t`, its remainder against the
//! one-dimensional evolution, symmetrized line functions and the norm identities
//! linking radial data in `ℝⁿ` to `L²(ℝ₊)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::maximal::{accumulate_parallel, adaptive_sup, maximal_over_points, ModulusEvaluator, SupFunction, TimeSet};
use crate::quadrature::gauss_legendre;
use crate::special::{bessel_j_pos, gamma_unit, remainder_kernel_pos, remainder_schur_constant, symmetry_constant, BesselOrder};
use crate::spectral::{dispersion, GridFunction1D, GridSpec, SpectralFunction1D, Transform};

/// `α_n = (2π)^{n/2}`.
pub fn alpha(n: usize) -> f64 {
    (2.0 * PI).powf(n as f64 / 2.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl RadialGrid {
    pub fn new(nodes: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if nodes.len() != weights.len() || nodes.is_empty() {
            return Err(Error::InvalidGrid("node and weight counts differ or are zero".into()));
        }
        if nodes[0] <= 0.0 || nodes.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidGrid("nodes must be positive and strictly increasing".into()));
        }
        if weights.iter().any(|w| !(*w > 0.0)) {
            return Err(Error::InvalidGrid("weights must be positive".into()));
        }
        Ok(RadialGrid { nodes, weights })
    }

    /// Nodes `k·h`, `k = 1..=count`, each with weight `h`.
    pub fn uniform(step: f64, count: usize) -> Result<Self> {
        Self::new((1..=count).map(|k| k as f64 * step).collect(), vec![step; count])
    }

    /// Composite Gauss–Legendre rule on `(0, r_max]`.
    pub fn gauss_panels(r_max: f64, panels: usize, order: usize) -> Result<Self> {
        if panels == 0 || order == 0 || !(r_max > 0.0) {
            return Err(Error::InvalidGrid("panel rule needs panels, order and r_max positive".into()));
        }
        let (x, w) = gauss_legendre(order);
        let h = r_max / panels as f64;
        let mut nodes = Vec::with_capacity(panels * order);
        let mut weights = Vec::with_capacity(panels * order);
        for p in 0..panels {
            let c = (p as f64 + 0.5) * h;
            for (xi, wi) in x.iter().zip(&w) {
                nodes.push(c + 0.5 * h * xi);
                weights.push(0.5 * h * wi);
            }
        }
        Self::new(nodes, weights)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Step `h` when the nodes are exactly `k·h`, `k = 1..`.
    pub fn uniform_step(&self) -> Option<f64> {
        let h = self.nodes[0];
        let ok = self.nodes.iter().enumerate().all(|(i, r)| (r - (i + 1) as f64 * h).abs() <= 1e-12 * r)
            && self.weights.iter().all(|w| (w - h).abs() <= 1e-12 * h);
        ok.then_some(h)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    pub grid: RadialGrid,
    pub values: Vec<Complex64>,
}

impl RadialProfile {
    pub fn new(grid: RadialGrid, values: Vec<Complex64>) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::InvalidGrid("profile values do not match grid".into()));
        }
        Ok(RadialProfile { grid, values })
    }

    pub fn from_fn(grid: RadialGrid, f: impl Fn(f64) -> Complex64) -> Self {
        let values = grid.nodes.iter().map(|&r| f(r)).collect();
        RadialProfile { grid, values }
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().zip(&self.grid.weights).map(|(v, w)| w * v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest node carrying a nonzero value.
    pub fn support_max(&self) -> f64 {
        self.grid.nodes.iter().zip(&self.values).filter(|(_, v)| v.norm_sqr() > 0.0).map(|(r, _)| *r).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HarmonicContext {
    pub n: usize,
    pub k: usize,
}

impl HarmonicContext {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        BesselOrder::from_harmonic(n, k)?;
        Ok(HarmonicContext { n, k })
    }

    pub fn order(&self) -> BesselOrder {
        BesselOrder::from_harmonic(self.n, self.k).expect("validated")
    }

    pub fn alpha(&self) -> f64 {
        alpha(self.n)
    }
}

/// Discretized `S̃_t`: matrix `w_s (rs)^{1/2} J_ν(rs)` from input nodes `s` to output nodes `r`.
pub struct HankelOperator {
    pub order: BesselOrder,
    input: Vec<f64>,
    output: Vec<f64>,
    matrix: Vec<f64>,
}

impl HankelOperator {
    pub fn new(order: BesselOrder, input: &RadialGrid, output: &[f64]) -> Result<Self> {
        if output.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
            return Err(Error::InvalidGrid("output radii must be positive".into()));
        }
        let m = input.len();
        let mut matrix = vec![0.0; output.len() * m];
        matrix.par_chunks_mut(m).zip(output.par_iter()).for_each(|(row, &r)| {
            for ((v, &s), &w) in row.iter_mut().zip(&input.nodes).zip(&input.weights) {
                let z = r * s;
                *v = w * z.sqrt() * bessel_j_pos(order, z);
            }
        });
        Ok(HankelOperator { order, input: input.nodes.clone(), output: output.to_vec(), matrix })
    }

    pub fn output(&self) -> &[f64] {
        &self.output
    }

    fn modulated(&self, values: &[Complex64], t: f64, a: f64) -> Vec<Complex64> {
        values
            .iter()
            .zip(&self.input)
            .map(|(v, &s)| if t == 0.0 { *v } else { v * Complex64::from_polar(1.0, t * dispersion(s, a)) })
            .collect()
    }

    fn apply_modulated(&self, v: &[Complex64], out: &mut [Complex64]) {
        let m = self.input.len();
        for (o, row) in out.iter_mut().zip(self.matrix.chunks(m)) {
            let (mut re, mut im) = (0.0, 0.0);
            for (c, z) in row.iter().zip(v) {
                re += c * z.re;
                im += c * z.im;
            }
            *o = Complex64::new(re, im);
        }
    }

    pub fn apply(&self, values: &[Complex64], t: f64, a: f64) -> Vec<Complex64> {
        let v = self.modulated(values, t, a);
        let mut out = vec![Complex64::new(0.0, 0.0); self.output.len()];
        self.apply_modulated(&v, &mut out);
        out
    }
}

fn check_time(t: f64, a: f64) -> Result<()> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(invalid(format!("dispersion exponent a = {a} must be positive")));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(invalid(format!("time t = {t} must be finite and nonnegative")));
    }
    Ok(())
}

/// `S̃_t f₁` on `output` (defaults to the input grid).
pub fn hankel_propagate(f1: &RadialProfile, t: f64, a: f64, nu: BesselOrder, output: Option<&RadialGrid>) -> Result<RadialProfile> {
    check_time(t, a)?;
    let out = output.unwrap_or(&f1.grid).clone();
    let op = HankelOperator::new(nu, &f1.grid, &out.nodes)?;
    let values = op.apply(&f1.values, t, a);
    RadialProfile::new(out, values)
}

struct HankelEvaluator<'a> {
    op: &'a HankelOperator,
    values: &'a [Complex64],
    a: f64,
}

impl ModulusEvaluator for HankelEvaluator<'_> {
    fn len(&self) -> usize {
        self.op.output.len()
    }

    fn accumulate(&self, times: &[f64], acc: &mut [f64]) {
        let mut out = vec![Complex64::new(0.0, 0.0); self.len()];
        for &t in times {
            let v = self.op.modulated(self.values, t, self.a);
            self.op.apply_modulated(&v, &mut out);
            for (s, z) in acc.iter_mut().zip(&out) {
                *s = s.max(z.norm());
            }
        }
    }
}

/// `sup_{t∈E} |S̃_t f₁|` on `output`.
pub fn hankel_maximal(f1: &RadialProfile, nu: BesselOrder, times: &TimeSet, a: f64, output: &RadialGrid) -> Result<SupFunction> {
    check_time(0.0, a)?;
    let op = HankelOperator::new(nu, &f1.grid, &output.nodes)?;
    let eval = HankelEvaluator { op: &op, values: &f1.values, a };
    match times {
        TimeSet::Window(w) => Ok(adaptive_sup(&eval, w, dispersion(f1.support_max(), a).max(1.0), &output.weights)),
        TimeSet::Points(p) => {
            if p.iter().any(|t| !(*t >= 0.0 && t.is_finite())) {
                return Err(invalid("times must be finite and nonnegative"));
            }
            let mut acc = vec![0.0; output.len()];
            accumulate_parallel(&eval, p, &mut acc);
            Ok(SupFunction { values: acc, weights: output.weights.clone(), samples: p.len(), residual: 0.0, empty: p.is_empty() })
        }
    }
}

/// Output quadratures for the two sides of the lifted norm identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LiftOptions {
    pub r_max: f64,
    /// Trapezoid step of the radial route.
    pub step: f64,
    /// Gauss panel width and order of the polar route.
    pub panel: f64,
    pub order: usize,
}

impl Default for LiftOptions {
    fn default() -> Self {
        LiftOptions { r_max: 40.0, step: 1.0 / 128.0, panel: 1.0 / 16.0, order: 4 }
    }
}

/// Both sides of `α_n ‖S*_E f_P‖_{L²(ℝⁿ)} = ‖S̃*_E f₁‖_{L²(ℝ₊)}` with `‖P‖ = 1`.
///
/// The left side integrates `α_n^{-1} r^{1/2-n/2} sup|S̃_t f₁|` against `r^{n-1} dr` on
/// Gauss panels; the right side is the trapezoid norm of the radial maximal function.
pub fn lift_norm_identity(f1: &RadialProfile, ctx: HarmonicContext, times: &[f64], a: f64, opts: LiftOptions) -> Result<(f64, f64)> {
    let nu = ctx.order();
    let set = TimeSet::Points(times.to_vec());
    let count = (opts.r_max / opts.step).round() as usize;
    let trap = RadialGrid::uniform(opts.step, count)?;
    let rhs = hankel_maximal(f1, nu, &set, a, &trap)?.l2_norm();
    let panels = RadialGrid::gauss_panels(opts.r_max, (opts.r_max / opts.panel).round() as usize, opts.order)?;
    let sup = hankel_maximal(f1, nu, &set, a, &panels)?;
    let an = ctx.alpha();
    let nf = ctx.n as f64;
    let integral: f64 = panels
        .nodes
        .iter()
        .zip(&panels.weights)
        .zip(&sup.values)
        .map(|((&r, &w), &v)| {
            let u = v * r.powf(0.5 - nf / 2.0) / an;
            w * r.powf(nf - 1.0) * u * u
        })
        .sum();
    Ok((an * integral.sqrt(), rhs))
}

/// Two-dimensional samples on a square tensor grid, row-major in `(x1, x2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction2D {
    pub grid: GridSpec,
    pub samples: Vec<Complex64>,
}

impl GridFunction2D {
    pub fn at(&self, j1: usize, j2: usize) -> Complex64 {
        self.samples[j1 * self.grid.point_count() + j2]
    }

    pub fn l2_norm(&self) -> f64 {
        let dx = self.grid.dx();
        (self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>() * dx * dx).sqrt()
    }
}

/// Full two-dimensional evolution of a radial spectrum `f̂(|ξ|)` by tensor FFT.
pub fn oracle_2d_propagate(fhat: impl Fn(f64) -> Complex64 + Sync, band_limit: f64, grid: GridSpec, t: f64, a: f64) -> Result<GridFunction2D> {
    oracle_2d_propagate_field(|x1, x2| fhat(x1.hypot(x2)), band_limit, grid, t, a)
}

/// As [`oracle_2d_propagate`] for a general spectrum `f̂(ξ₁, ξ₂)`, cut at `|ξ| <= band_limit`.
pub fn oracle_2d_propagate_field(
    fhat: impl Fn(f64, f64) -> Complex64 + Sync,
    band_limit: f64,
    grid: GridSpec,
    t: f64,
    a: f64,
) -> Result<GridFunction2D> {
    check_time(t, a)?;
    if band_limit >= grid.xi_max() {
        return Err(Error::BandLimitTooLarge { limit: band_limit, nyquist: grid.xi_max() });
    }
    let n = grid.point_count();
    let sign = |i: usize| if i % 2 == 0 { 1.0 } else { -1.0 };
    let mut buf = vec![Complex64::new(0.0, 0.0); n * n];
    buf.par_chunks_mut(n).enumerate().for_each(|(k1, row)| {
        let x1 = grid.xi(k1);
        for (k2, z) in row.iter_mut().enumerate() {
            let x2 = grid.xi(k2);
            let rho = x1.hypot(x2);
            if rho <= band_limit {
                *z = fhat(x1, x2) * Complex64::from_polar(1.0, t * dispersion(rho, a)) * sign(k1 + k2);
            }
        }
    });
    let fft = FftPlanner::new().plan_fft_inverse(n);
    buf.par_chunks_mut(n).for_each(|row| fft.process(row));
    let mut col = vec![Complex64::new(0.0, 0.0); n];
    for j2 in 0..n {
        for j1 in 0..n {
            col[j1] = buf[j1 * n + j2];
        }
        fft.process(&mut col);
        for j1 in 0..n {
            buf[j1 * n + j2] = col[j1];
        }
    }
    let c = (1.0 / (2.0 * grid.half_length())).powi(2);
    buf.par_chunks_mut(n).enumerate().for_each(|(j1, row)| {
        for (j2, z) in row.iter_mut().enumerate() {
            *z *= c * sign(j1 + j2);
        }
    });
    Ok(GridFunction2D { grid, samples: buf })
}

/// Spectral line matching a uniform profile: `dξ = h`, Nyquist above the profile support.
pub fn line_grid_for(f1: &RadialProfile) -> Result<GridSpec> {
    let h = f1.grid.uniform_step().ok_or_else(|| Error::InvalidGrid("profile grid must be uniform k·h".into()))?;
    let count = f1.grid.len();
    let n = (4 * (count + 1)).next_power_of_two().max(8);
    GridSpec::new(n, PI / h)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Symmetrization {
    /// `γ(ν) f₁(ξ)` for `ξ > 0`, `conj γ(ν) f₁(-ξ)` for `ξ < 0`.
    Phased,
    /// `f₁(ξ)` for `ξ > 0`, zero otherwise.
    HalfLine,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetrizedLine {
    pub line: SpectralFunction1D,
    pub nu: BesselOrder,
}

impl SymmetrizedLine {
    /// `max |γ f̂(-r) - conj(γ) f̂(r)|` over positive grid frequencies.
    pub fn symmetry_residual(&self) -> f64 {
        let g = gamma_unit(self.nu);
        let grid = self.line.grid;
        let half = grid.point_count() / 2;
        (1..half).map(|k| (g * self.line.coefficients[half - k] - g.conj() * self.line.coefficients[half + k]).norm()).fold(0.0, f64::max)
    }
}

/// Line function built from a uniform profile on the matching spectral grid.
pub fn symmetrize(f1: &RadialProfile, nu: BesselOrder, variant: Symmetrization) -> Result<SymmetrizedLine> {
    symmetrize_on(f1, nu, variant, line_grid_for(f1)?)
}

/// As [`symmetrize`] on a caller-chosen grid with `dξ` equal to the profile step.
pub fn symmetrize_on(f1: &RadialProfile, nu: BesselOrder, variant: Symmetrization, grid: GridSpec) -> Result<SymmetrizedLine> {
    let h = f1.grid.uniform_step().ok_or_else(|| Error::InvalidGrid("profile grid must be uniform k·h".into()))?;
    if (grid.dxi() - h).abs() > 1e-12 * h || f1.grid.len() >= grid.point_count() / 2 {
        return Err(Error::InvalidGrid("line grid does not match the profile step or is too short".into()));
    }
    let half = grid.point_count() / 2;
    let g = gamma_unit(nu);
    let mut c = vec![Complex64::new(0.0, 0.0); grid.point_count()];
    for (k, v) in f1.values.iter().enumerate() {
        let k = k + 1;
        match variant {
            Symmetrization::Phased => {
                c[half + k] = g * v;
                c[half - k] = g.conj() * v;
            }
            Symmetrization::HalfLine => c[half + k] = *v,
        }
    }
    let band = f1.grid.nodes[f1.grid.len() - 1];
    Ok(SymmetrizedLine { line: SpectralFunction1D::new(grid, c, Some(band))?, nu })
}

/// `(f̂(ξ), ξ > 0)` as a uniform profile with step `dξ`.
pub fn profile_from_line(f: &SpectralFunction1D) -> Result<RadialProfile> {
    let grid = f.grid;
    let half = grid.point_count() / 2;
    let rg = RadialGrid::uniform(grid.dxi(), half - 1)?;
    RadialProfile::new(rg, (1..half).map(|k| f.coefficients[half + k]).collect())
}

/// `F = F_e + F_o` by `ξ ↔ -ξ` mirroring; the unpaired `-ξ_max` mode counts as even.
pub fn even_odd_split(f: &SpectralFunction1D) -> (SpectralFunction1D, SpectralFunction1D) {
    let grid = f.grid;
    let mut even = f.clone();
    let mut odd = f.clone();
    for k in 0..grid.point_count() {
        match grid.mirror(k) {
            Some(m) => {
                even.coefficients[k] = 0.5 * (f.coefficients[k] + f.coefficients[m]);
                odd.coefficients[k] = 0.5 * (f.coefficients[k] - f.coefficients[m]);
            }
            None => odd.coefficients[k] = Complex64::new(0.0, 0.0),
        }
    }
    (even, odd)
}

/// Radial profiles `f_{P,1} = -conj γ(ν₁) f̂(r) + γ(ν₁) f̂(-r)` and
/// `f_{Q,1} = conj γ(ν) f̂(r) - γ(ν) f̂(-r)` for `r > 0`.
pub fn cross_profiles(f: &SpectralFunction1D, nu: BesselOrder, nu1: BesselOrder) -> Result<(RadialProfile, RadialProfile)> {
    symmetry_constant(nu, nu1)?;
    let grid = f.grid;
    let half = grid.point_count() / 2;
    let (g, g1) = (gamma_unit(nu), gamma_unit(nu1));
    let rg = RadialGrid::uniform(grid.dxi(), half - 1)?;
    let (mut p, mut q) = (Vec::with_capacity(half - 1), Vec::with_capacity(half - 1));
    for k in 1..half {
        let (pos, neg) = (f.coefficients[half + k], f.coefficients[half - k]);
        p.push(-g1.conj() * pos + g1 * neg);
        q.push(g.conj() * pos - g * neg);
    }
    Ok((RadialProfile::new(rg.clone(), p)?, RadialProfile::new(rg, q)?))
}

/// Uniform-grid decomposition `S̃_t f₁ = α_1 S_t f + R_{t,ν} f₁` on the positive line grid.
pub struct RemainderOperator {
    pub order: BesselOrder,
    line: SymmetrizedLine,
    transform: Transform,
    hankel: HankelOperator,
    kernel: Vec<f64>,
    profile: RadialProfile,
    first: usize,
}

impl RemainderOperator {
    pub fn new(f1: &RadialProfile, nu: BesselOrder) -> Result<Self> {
        let line = symmetrize(f1, nu, Symmetrization::Phased)?;
        let grid = line.line.grid;
        let first = grid.point_count() / 2 + 1;
        let xs: Vec<f64> = (first..grid.point_count()).map(|j| grid.x(j)).collect();
        let hankel = HankelOperator::new(nu, &f1.grid, &xs)?;
        let m = f1.grid.len();
        let mut kernel = vec![0.0; xs.len() * m];
        kernel.par_chunks_mut(m).zip(xs.par_iter()).for_each(|(row, &x)| {
            for ((v, &s), &w) in row.iter_mut().zip(&f1.grid.nodes).zip(&f1.grid.weights) {
                *v = w * remainder_kernel_pos(nu, x * s).abs();
            }
        });
        Ok(RemainderOperator { order: nu, transform: Transform::new(grid), line, hankel, kernel, profile: f1.clone(), first })
    }

    /// Positive line nodes and their weights.
    pub fn nodes(&self) -> RadialGrid {
        let dx = self.line.line.grid.dx();
        RadialGrid { nodes: self.hankel.output.clone(), weights: vec![dx; self.hankel.output.len()] }
    }

    pub fn line(&self) -> &SymmetrizedLine {
        &self.line
    }

    /// `(α_1 S_t f, R_{t,ν} f₁)` on the positive nodes.
    pub fn decompose(&self, t: f64, a: f64) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
        check_time(t, a)?;
        let full = self.hankel.apply(&self.profile.values, t, a);
        let evolved = crate::spectral::propagate(&self.line.line, t, a)?;
        let g = self.transform.inverse(&evolved);
        let a1 = alpha(1);
        let main: Vec<Complex64> = g.samples[self.first..].iter().map(|z| a1 * z).collect();
        let rem = full.iter().zip(&main).map(|(s, m)| s - m).collect();
        Ok((main, rem))
    }

    /// `R̃_ν f₁(x) = Σ_s w_s |K_ν(xs)| |f₁(s)|` on the positive nodes.
    pub fn dominating(&self) -> Vec<f64> {
        let m = self.profile.values.len();
        let abs: Vec<f64> = self.profile.values.iter().map(|v| v.norm()).collect();
        self.kernel.chunks(m).map(|row| row.iter().zip(&abs).map(|(k, v)| k * v).sum()).collect()
    }

    /// `sup_t |R_{t,ν} f₁|` over the sample times.
    pub fn sup_remainder(&self, times: &[f64], a: f64) -> Result<Vec<f64>> {
        check_time(0.0, a)?;
        let eval = RemainderEvaluator { op: self, a };
        let mut acc = vec![0.0; self.hankel.output.len()];
        accumulate_parallel(&eval, times, &mut acc);
        Ok(acc)
    }
}

struct RemainderEvaluator<'a> {
    op: &'a RemainderOperator,
    a: f64,
}

impl ModulusEvaluator for RemainderEvaluator<'_> {
    fn len(&self) -> usize {
        self.op.hankel.output.len()
    }

    fn accumulate(&self, times: &[f64], acc: &mut [f64]) {
        for &t in times {
            let (_, rem) = self.op.decompose(t, self.a).expect("validated time");
            for (s, z) in acc.iter_mut().zip(&rem) {
                *s = s.max(z.norm());
            }
        }
    }
}

/// `(main, rem)` for one time: main as a line function on the full grid, rem on the positive nodes.
pub fn remainder_decompose(f1: &RadialProfile, nu: BesselOrder, t: f64, a: f64) -> Result<(GridFunction1D, RadialProfile)> {
    let op = RemainderOperator::new(f1, nu)?;
    let (_, rem) = op.decompose(t, a)?;
    let evolved = crate::spectral::propagate(&op.line.line, t, a)?;
    let mut main = op.transform.inverse(&evolved);
    main.samples.iter_mut().for_each(|z| *z *= alpha(1));
    Ok((main, RadialProfile::new(op.nodes(), rem)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RemainderReport {
    pub nu: f64,
    pub sup_norm: f64,
    pub profile_norm: f64,
    pub schur_constant: f64,
    pub max_abs: f64,
    /// `max (sup_t|R| - R̃)` over the nodes; nonpositive when dominated.
    pub domination_excess: f64,
}

pub fn remainder_report(f1: &RadialProfile, nu: BesselOrder, times: &[f64], a: f64) -> Result<RemainderReport> {
    let op = RemainderOperator::new(f1, nu)?;
    let sup = op.sup_remainder(times, a)?;
    let dom = op.dominating();
    let dx = op.line.line.grid.dx();
    Ok(RemainderReport {
        nu: nu.nu(),
        sup_norm: (sup.iter().map(|v| v * v).sum::<f64>() * dx).sqrt(),
        profile_norm: f1.norm(),
        schur_constant: remainder_schur_constant(nu)?,
        max_abs: sup.iter().cloned().fold(0.0, f64::max),
        domination_excess: sup.iter().zip(&dom).map(|(s, d)| s - d).fold(f64::NEG_INFINITY, f64::max),
    })
}

/// `Tf(s) = ∫ K(rs) f(r) dr` on `output`, by the profile's quadrature.
pub fn schur_apply(kernel: impl Fn(f64) -> f64 + Sync, f: &RadialProfile, output: &[f64]) -> Vec<f64> {
    output
        .par_iter()
        .map(|&s| {
            f.grid.nodes.iter().zip(&f.grid.weights).zip(&f.values).map(|((&r, &w), v)| w * kernel(r * s) * v.norm()).sum()
        })
        .collect()
}

/// `α_1 (∫₀^∞ |S*_E f|²)^{1/2}` on the positive half of the line grid.
pub fn half_line_maximal_norm(f: &SpectralFunction1D, times: &[f64], a: f64) -> Result<f64> {
    let sup = maximal_over_points(f, times, a)?;
    let half = f.grid.point_count() / 2;
    let dx = f.grid.dx();
    let s: f64 = sup.values[half + 1..].iter().map(|v| v * v).sum::<f64>() + 0.5 * sup.values[half].powi(2);
    Ok(alpha(1) * (s * dx).sqrt())
}

/// `α_1 ‖S*_E f‖_{L²(ℝ)}`.
pub fn line_maximal_norm(f: &SpectralFunction1D, times: &[f64], a: f64) -> Result<f64> {
    Ok(alpha(1) * maximal_over_points(f, times, a)?.l2_norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate;

    fn gaussian_profile(h: f64, count: usize) -> RadialProfile {
        RadialProfile::from_fn(RadialGrid::uniform(h, count).unwrap(), |s| Complex64::new((-2.0 * (s - 4.0).powi(2)).exp(), 0.0))
    }

    #[test]
    fn isometry_and_reciprocity() {
        let f = gaussian_profile(1.0 / 16.0, 128);
        let out = RadialGrid::gauss_panels(24.0, 96, 12).unwrap();
        for tn in [-1, 0, 1, 2, 3] {
            let nu = BesselOrder::new(tn).unwrap();
            let g = hankel_propagate(&f, 0.0, 2.0, nu, Some(&out)).unwrap();
            assert!((g.norm() / f.norm() - 1.0).abs() < 1e-6, "nu {tn}: {}", g.norm() / f.norm());
            let back = hankel_propagate(&g, 0.0, 2.0, nu, Some(&f.grid)).unwrap();
            let err = back.values.iter().zip(&f.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            assert!(err < 1e-5, "nu {tn}: {err}");
        }
    }

    #[test]
    fn cosine_oracle() {
        let f = gaussian_profile(1.0 / 16.0, 128);
        let nu = BesselOrder::new(-1).unwrap();
        let radii: Vec<f64> = (1..20).map(|i| 0.37 * i as f64).collect();
        let out = RadialGrid::new(radii.clone(), vec![1.0; radii.len()]).unwrap();
        let g = hankel_propagate(&f, 0.0, 2.0, nu, Some(&out)).unwrap();
        for (r, v) in radii.iter().zip(&g.values) {
            let exact = (2.0 / PI).sqrt()
                * integrate(|s| (r * s).cos() * (-2.0 * (s - 4.0).powi(2)).exp(), 0.0, 12.0, 1e-14, 1e-14).unwrap();
            assert!((v.re - exact).abs() < 1e-8 && v.im.abs() < 1e-15, "r {r}");
        }
    }

    #[test]
    fn remainder_vanishes_for_cosine_order() {
        let f = gaussian_profile(1.0 / 16.0, 128);
        let nu = BesselOrder::new(-1).unwrap();
        let op = RemainderOperator::new(&f, nu).unwrap();
        let rem = op.sup_remainder(&[0.0, 0.3, 0.7, 1.0], 2.0).unwrap();
        assert!(rem.iter().all(|v| *v < 1e-8));
    }

    #[test]
    fn remainder_dominated() {
        let f = gaussian_profile(1.0 / 16.0, 128);
        let nu = BesselOrder::new(2).unwrap();
        let rep = remainder_report(&f, nu, &[0.0, 0.25, 0.5, 1.0], 2.0).unwrap();
        assert!(rep.domination_excess < 1e-10);
        assert!(rep.sup_norm <= rep.schur_constant * rep.profile_norm);
    }

    #[test]
    fn symmetrization_and_split() {
        let f = gaussian_profile(1.0 / 16.0, 128);
        let nu = BesselOrder::new(1).unwrap();
        let line = symmetrize(&f, nu, Symmetrization::Phased).unwrap();
        assert!(line.symmetry_residual() < 1e-12);
        let (e, o) = even_odd_split(&line.line);
        let total = line.line.fourier_norm().powi(2);
        assert!((e.fourier_norm().powi(2) + o.fourier_norm().powi(2) - total).abs() < 1e-12 * total);
        for k in 0..line.line.grid.point_count() {
            assert_eq!(e.coefficients[k] + o.coefficients[k], line.line.coefficients[k]);
        }
        let (_, o2) = even_odd_split(&e);
        assert!(o2.coefficients.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn cross_profiles_combine() {
        let f = gaussian_profile(1.0 / 16.0, 64);
        let base = symmetrize(&f, BesselOrder::new(0).unwrap(), Symmetrization::HalfLine).unwrap().line;
        let mut fhat = base.clone();
        let half = fhat.grid.point_count() / 2;
        for k in 1..half {
            fhat.coefficients[half - k] = Complex64::new(0.3, -0.2) * base.coefficients[half + k];
        }
        for (tn, tn1) in [(0, 1), (0, 2), (3, 1)] {
            let (nu, nu1) = (BesselOrder::new(tn).unwrap(), BesselOrder::new(tn1).unwrap());
            let (p, q) = cross_profiles(&fhat, nu, nu1).unwrap();
            let p2 = symmetrize_on(&p, nu, Symmetrization::Phased, fhat.grid).unwrap().line;
            let q2 = symmetrize_on(&q, nu1, Symmetrization::Phased, fhat.grid).unwrap().line;
            let c = gamma_unit(nu1) * gamma_unit(nu).conj() - gamma_unit(nu) * gamma_unit(nu1).conj();
            assert!((c.norm() - symmetry_constant(nu, nu1).unwrap()).abs() < 1e-12);
            for k in 1..p2.grid.point_count() {
                let lhs = p2.coefficients[k] + q2.coefficients[k];
                assert!((lhs - c * fhat.coefficients[k]).norm() < 1e-12);
            }
        }
        assert!(cross_profiles(&fhat, BesselOrder::new(0).unwrap(), BesselOrder::new(4).unwrap()).is_err());
    }

    #[test]
    fn schur_examples() {
        let grid = RadialGrid::uniform(1e-3, 1000).unwrap();
        let zero = RadialProfile::from_fn(grid.clone(), |_| Complex64::new(0.0, 0.0));
        assert!(schur_apply(|r| (-r).exp(), &zero, &[0.5, 1.0]).iter().all(|v| *v == 0.0));
        let ind = RadialProfile::from_fn(RadialGrid::gauss_panels(1.0, 1, 8).unwrap(), |_| Complex64::new(1.0, 0.0));
        let kernel = |r: f64| if r <= 1.0 { 1.0 } else { 0.0 };
        let s: Vec<f64> = vec![0.5, 1.0 / 3.0, 0.9];
        for (v, s) in schur_apply(kernel, &ind, &s).iter().zip(&s) {
            assert!((v - 1f64.min(1.0 / s)).abs() < 1e-12);
        }
    }

    #[test]
    fn two_dimensional_oracle_matches_hankel() {
        let grid = GridSpec::new(512, 40.0).unwrap();
        let p = (2.0 * PI).powf(-0.5);
        let profile = |s: f64| (-4.0 * (s - 4.0).powi(2)).exp();
        let fhat = |rho: f64| Complex64::new(if rho > 0.0 { p * profile(rho) / rho.sqrt() } else { 0.0 }, 0.0);
        let g = oracle_2d_propagate(fhat, 9.0, grid, 0.1, 2.0).unwrap();
        let half = grid.point_count() / 2;
        let f1 = RadialProfile::from_fn(RadialGrid::uniform(1.0 / 32.0, 320).unwrap(), |s| Complex64::new(profile(s), 0.0));
        let js: Vec<usize> = (half + 13..half + 128).step_by(4).collect();
        let out: Vec<f64> = js.iter().map(|&j| grid.x(j)).collect();
        let h = hankel_propagate(&f1, 0.1, 2.0, BesselOrder::new(0).unwrap(), Some(&RadialGrid::new(out.clone(), vec![1.0; out.len()]).unwrap())).unwrap();
        let scale = h.values.iter().zip(&out).map(|(v, r)| v.norm() / (2.0 * PI * r.sqrt())).fold(0.0, f64::max);
        for ((&j, v), r) in js.iter().zip(&h.values).zip(&out) {
            let via = v * p / (2.0 * PI * r.sqrt());
            assert!((g.at(j, half) - via).norm() < 1e-6 * scale, "r {r}");
        }
    }
}
