//! Blow-up witnesses: annulus bumps at frequency `λ` and width `ρ` whose
//! maximal-to-Sobolev ratio grows along a schedule `(M_j, b_j)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::maximal::linear_fit;
use crate::radial::{alpha, RadialGrid, RadialProfile};
use crate::special::{gamma_nu, gamma_half, remainder_kernel_pos, split_radius, BesselOrder};
use crate::spectral::bump;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlowupParams {
    pub a: f64,
    pub s: f64,
    pub n: usize,
    pub eps: f64,
}

impl BlowupParams {
    pub fn new(a: f64, s: f64, n: usize, eps: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) || (a - 1.0).abs() < 1e-12 {
            return Err(invalid(format!("a = {a} must be positive and different from 1")));
        }
        if !(s > 0.0 && s < a / 4.0) {
            return Err(invalid(format!("s = {s} outside (0, a/4)")));
        }
        if n < 2 {
            return Err(invalid("dimension must be at least 2"));
        }
        if !(eps > 0.0 && eps < 0.1 / (a + 2.0)) {
            return Err(invalid(format!("eps = {eps} outside (0, 1/(10(a+2)))")));
        }
        Ok(BlowupParams { a, s, n, eps })
    }

    pub fn order(&self) -> BesselOrder {
        BesselOrder::from_harmonic(self.n, 0).expect("n >= 2")
    }

    /// `(a-4s)/a`.
    pub fn expected_slope(&self) -> f64 {
        (self.a - 4.0 * self.s) / self.a
    }
}

/// `λ = M^{2/a} b^{-1/(a-4s)}`, `ρ = ε b^{-1/2} λ^{1-a/2}`.
pub fn derive_scales(m: f64, b: f64, p: &BlowupParams) -> Result<(f64, f64)> {
    if !(m >= 1.0 && b > 0.0 && b < 1.0) {
        return Err(invalid(format!("need M >= 1 and 0 < b < 1 (got {m}, {b})")));
    }
    let lambda = m.powf(2.0 / p.a) * b.powf(-1.0 / (p.a - 4.0 * p.s));
    let rho = p.eps * b.powf(-0.5) * lambda.powf(1.0 - p.a / 2.0);
    Ok((lambda, rho))
}

/// `ρ = ε M^{(2-a)/a} b^{-(1-2s)/(a-4s)}`, the closed form without `λ`.
pub fn rho_direct(m: f64, b: f64, p: &BlowupParams) -> f64 {
    p.eps * m.powf((2.0 - p.a) / p.a) * b.powf(-(1.0 - 2.0 * p.s) / (p.a - 4.0 * p.s))
}

/// `ρλ^{a-1}b = εM b^{-2s/(a-4s)}`.
pub fn growth_quantity(m: f64, b: f64, p: &BlowupParams) -> f64 {
    p.eps * m * b.powf(-2.0 * p.s / (p.a - 4.0 * p.s))
}

/// `I = [0, aλ^{a-1}b/2]`, `J = [aλ^{a-1}b/4, aλ^{a-1}b/2]`.
pub fn intervals(lambda: f64, b: f64, a: f64) -> ((f64, f64), (f64, f64)) {
    let top = a * lambda.powf(a - 1.0) * b / 2.0;
    ((0.0, top), (top / 2.0, top))
}

/// `Φ(ξ, x, t) = x(ρξ - λ) + t(λ - ρξ)^a`.
pub fn phase(xi: f64, x: f64, t: f64, lambda: f64, rho: f64, a: f64) -> f64 {
    x * (rho * xi - lambda) + t * (lambda - rho * xi).powf(a)
}

/// `Φ₁(ξ) = |x|(λ - ρξ) + t(λ - ρξ)^a`.
pub fn phase_companion(xi: f64, x: f64, t: f64, lambda: f64, rho: f64, a: f64) -> f64 {
    x.abs() * (lambda - rho * xi) + t * (lambda - rho * xi).powf(a)
}

/// `Φ(ξ) - Φ(0) = xρξ + tλ^a((1 - ρξ/λ)^a - 1)` without cancellation.
pub fn phase_increment(xi: f64, x: f64, t: f64, lambda: f64, rho: f64, a: f64) -> f64 {
    let u = rho * xi / lambda;
    x * rho * xi + t * lambda.powf(a) * (a * (-u).ln_1p()).exp_m1()
}

/// Stationary time `t* = x/(aλ^{a-1})`.
pub fn stationary_time(x: f64, lambda: f64, a: f64) -> f64 {
    x / (a * lambda.powf(a - 1.0))
}

/// Time nearest `t*` with `Φ(0, x, t) ≡ 0 mod 2π`.
pub fn aligned_time(x: f64, lambda: f64, a: f64) -> f64 {
    let la = lambda.powf(a);
    let base = x * lambda;
    let m = ((stationary_time(x, lambda, a) * la - base) / (2.0 * PI)).round();
    (base + 2.0 * PI * m) / la
}

/// `f̂(s) = ρ^{-1} g((s-λ)/ρ)` on `count` interior trapezoid nodes of the support.
pub fn build_witness_profile(lambda: f64, rho: f64, count: usize) -> Result<RadialProfile> {
    if !(lambda >= 1.0 && rho > 0.0 && rho < lambda) {
        return Err(invalid(format!("need λ >= 1 and 0 < ρ < λ (got {lambda}, {rho})")));
    }
    if count < 16 {
        return Err(Error::Resolution(format!("{count} nodes across the support, need at least 16")));
    }
    let h = rho / count as f64;
    let nodes: Vec<f64> = (0..count).map(|i| lambda - rho / 2.0 + (i as f64 + 0.5) * h).collect();
    let grid = RadialGrid::new(nodes, vec![h; count])?;
    Ok(RadialProfile::from_fn(grid, |s| Complex64::new(bump((s - lambda) / rho) / rho, 0.0)))
}

/// Area of the unit sphere in `ℝⁿ`.
pub fn sphere_area(n: usize) -> f64 {
    2.0 * PI.powf(n as f64 / 2.0) / gamma_half(n as i32)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WitnessOptions {
    pub radii: usize,
    pub times: usize,
    /// Multiplier on the automatic node count.
    pub refine: usize,
    pub phase_samples: usize,
    /// Half-width of the t-grid around `t*` in units of `τ = 1/(aρλ^{a-1})`.
    pub window: f64,
}

impl Default for WitnessOptions {
    fn default() -> Self {
        WitnessOptions { radii: 64, times: 129, refine: 1, phase_samples: 201, window: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlowupWitness {
    pub j: usize,
    pub m: f64,
    pub b: f64,
    pub lambda: f64,
    pub rho: f64,
    pub interval_i: (f64, f64),
    pub interval_j: (f64, f64),
    pub nodes: usize,
    pub hs_norm: f64,
    pub max_norm: f64,
    pub ratio: f64,
    /// `min_x sup_t |S_t f(x)| / (λ^{n/2-1/2} |x|^{1/2-n/2})`.
    pub lower_constant: f64,
    /// `max_x max_ξ |e^{iΦ(ξ,x,t̃)} - 1|`.
    pub phase_defect: f64,
    /// `max_x |kernel remainder| / |oscillatory part|` at the aligned time.
    pub remainder_share: f64,
    pub growth_quantity: f64,
}

/// Sums `w f₁ e^{its^a}[γ_ν e^{ixs} + conj γ_ν e^{-ixs}]` and the `K_ν` term separately,
/// both multiplied by the unimodular `e^{-i(tλ^a - xλ)}`.
struct RadiusEvaluator {
    x: f64,
    lambda: f64,
    a: f64,
    g: Complex64,
    offset: Vec<f64>,
    relative: Vec<f64>,
    weights: Vec<f64>,
    kernel: Vec<f64>,
}

impl RadiusEvaluator {
    fn new(f1: &RadialProfile, nu: BesselOrder, x: f64, lambda: f64, a: f64) -> Self {
        let nodes = &f1.grid.nodes;
        RadiusEvaluator {
            x,
            lambda,
            a,
            g: gamma_nu(nu),
            offset: nodes.iter().map(|s| s - lambda).collect(),
            relative: nodes.iter().map(|s| (a * ((s - lambda) / lambda).ln_1p()).exp_m1()).collect(),
            weights: f1.grid.weights.iter().zip(&f1.values).map(|(w, v)| w * v.re).collect(),
            kernel: nodes.iter().map(|s| remainder_kernel_pos(nu, x * s)).collect(),
        }
    }

    /// `(oscillatory, kernel)` parts of `S̃_t f₁(x)` up to a unimodular factor.
    fn eval(&self, t: f64) -> (Complex64, Complex64) {
        let tl = t * self.lambda.powf(self.a);
        let mut osc = Complex64::new(0.0, 0.0);
        let mut ker = Complex64::new(0.0, 0.0);
        for i in 0..self.offset.len() {
            let s = self.lambda + self.offset[i];
            let phi = -self.x * self.offset[i] + tl * self.relative[i];
            let e = Complex64::from_polar(self.weights[i], phi);
            let turn = Complex64::from_polar(1.0, 2.0 * self.x * s);
            osc += e * (self.g.conj() + self.g * turn);
            ker += e * Complex64::from_polar(self.kernel[i], self.x * s);
        }
        (osc, ker)
    }
}

/// One witness of the schedule: scales, norms, lower-bound constant and diagnostics.
pub fn build_witness(j: usize, m: f64, b: f64, p: &BlowupParams, opts: &WitnessOptions) -> Result<BlowupWitness> {
    let (lambda, rho) = derive_scales(m, b, p)?;
    let (ii, jj) = intervals(lambda, b, p.a);
    let nu = p.order();
    let count = (64.0f64.max(8.0 * jj.1 * rho).ceil() as usize) * opts.refine.max(1);
    let fhat = build_witness_profile(lambda, rho, count)?;
    let nf = p.n as f64;
    let area = sphere_area(p.n);
    let hs2: f64 = fhat
        .grid
        .nodes
        .iter()
        .zip(&fhat.grid.weights)
        .zip(&fhat.values)
        .map(|((&s, &w), v)| w * (1.0 + s * s).powf(p.s) * v.norm_sqr() * s.powf(nf - 1.0))
        .sum::<f64>()
        * area;
    let f1 = RadialProfile::new(
        fhat.grid.clone(),
        fhat.grid.nodes.iter().zip(&fhat.values).map(|(&s, v)| v * s.powf((nf - 1.0) / 2.0)).collect(),
    )?;
    let dx = (jj.1 - jj.0) / opts.radii as f64;
    let radii: Vec<f64> = (0..opts.radii).map(|i| jj.0 + (i as f64 + 0.5) * dx).collect();
    let an = alpha(p.n);
    let tau = 1.0 / (p.a * rho * lambda.powf(p.a - 1.0));
    let per_radius: Vec<Result<(f64, f64, f64, f64)>> = radii
        .par_iter()
        .map(|&x| {
            let ev = RadiusEvaluator::new(&f1, nu, x, lambda, p.a);
            let ts = stationary_time(x, lambda, p.a);
            let lo = (ts - opts.window * tau).max(0.0);
            let hi = ts + opts.window * tau;
            if hi > 1.0 {
                return Err(Error::Resolution(format!("t-grid around t* = {ts} leaves [0, 1]")));
            }
            let mut sup: f64 = 0.0;
            for i in 0..opts.times {
                let t = lo + (hi - lo) * i as f64 / (opts.times - 1) as f64;
                let (o, k) = ev.eval(t);
                sup = sup.max((o + k).norm());
            }
            let value = sup * x.powf(0.5 - nf / 2.0) / an;
            let lower = value / (lambda.powf(nf / 2.0 - 0.5) * x.powf(0.5 - nf / 2.0));
            let ta = aligned_time(x, lambda, p.a);
            let defect = (0..opts.phase_samples)
                .map(|i| {
                    let xi = -0.5 + i as f64 / (opts.phase_samples - 1) as f64;
                    (Complex64::from_polar(1.0, phase_increment(xi, x, ta, lambda, rho, p.a)) - 1.0).norm()
                })
                .fold(0.0, f64::max);
            let (o, k) = ev.eval(ta);
            Ok((value, lower, defect, k.norm() / o.norm()))
        })
        .collect();
    let mut max2 = 0.0;
    let (mut lower, mut defect, mut share) = (f64::INFINITY, 0.0f64, 0.0f64);
    for (r, x) in per_radius.into_iter().zip(&radii) {
        let (v, l, d, s) = r?;
        max2 += dx * v * v * x.powf(nf - 1.0);
        lower = lower.min(l);
        defect = defect.max(d);
        share = share.max(s);
    }
    let max_norm = (max2 * area).sqrt();
    let hs_norm = hs2.sqrt();
    Ok(BlowupWitness {
        j,
        m,
        b,
        lambda,
        rho,
        interval_i: ii,
        interval_j: jj,
        nodes: count,
        hs_norm,
        max_norm,
        ratio: max_norm / hs_norm,
        lower_constant: lower,
        phase_defect: defect,
        remainder_share: share,
        growth_quantity: growth_quantity(m, b, p),
    })
}

/// Default schedule `M_j = 2^{j+3}`, `b_j = 1/M_j`.
pub fn default_schedule(count: usize) -> Vec<(usize, f64, f64)> {
    (1..=count).map(|j| {
        let m = 2f64.powi(j as i32 + 3);
        (j, m, 1.0 / m)
    }).collect()
}

pub fn witness_series(schedule: &[(usize, f64, f64)], p: &BlowupParams, opts: &WitnessOptions) -> Result<Vec<BlowupWitness>> {
    schedule.iter().map(|&(j, m, b)| build_witness(j, m, b, p, opts)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    pub slope: f64,
    pub intercept: f64,
    pub residual: f64,
}

/// Slope of `log(ratio²)` against `log M`.
pub fn growth_exponent(series: &[BlowupWitness]) -> Result<GrowthFit> {
    if series.len() < 4 {
        return Err(Error::DegenerateFit(format!("{} witnesses, need at least 4", series.len())));
    }
    let lo = series.iter().map(|w| w.m).fold(f64::INFINITY, f64::min);
    let hi = series.iter().map(|w| w.m).fold(0.0, f64::max);
    if hi / lo < 8.0 {
        return Err(Error::DegenerateFit("M spans fewer than three octaves".into()));
    }
    let x: Vec<f64> = series.iter().map(|w| w.m.ln()).collect();
    let y: Vec<f64> = series.iter().map(|w| 2.0 * w.ratio.ln()).collect();
    let (slope, intercept, residual) = linear_fit(&x, &y)?;
    Ok(GrowthFit { slope, intercept, residual })
}

/// `λ|x| >= 2C₁` on `J` with `C₁` the large-argument cutoff.
pub fn far_field_ok(w: &BlowupWitness, p: &BlowupParams) -> bool {
    w.lambda * w.interval_j.0 >= 2.0 * split_radius(p.order())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::bump_energy;

    fn params() -> BlowupParams {
        BlowupParams::new(2.0, 0.25, 2, 0.02).unwrap()
    }

    #[test]
    fn scales_closed_forms() {
        let p = params();
        let (l, r) = derive_scales(16.0, 1.0 / 16.0, &p).unwrap();
        assert!((l - 256.0).abs() < 1e-9);
        assert!((r - 0.08).abs() < 1e-15);
        assert!((r * l * (1.0 / 16.0) - 1.28).abs() < 1e-12);
        assert!((growth_quantity(16.0, 1.0 / 16.0, &p) - 1.28).abs() < 1e-12);
        assert!((r / l - 3.125e-4).abs() < 1e-15);
        for (a, s, m, b) in [(2.0, 0.25, 16.0, 0.0625), (3.0, 0.5, 100.0, 0.01), (0.5, 0.1, 7.0, 0.3)] {
            let p = BlowupParams::new(a, s, 2, 0.01).unwrap();
            let (l, r) = derive_scales(m, b, &p).unwrap();
            assert!((r - rho_direct(m, b, &p)).abs() <= 1e-12 * r);
            assert!((r * l.powf(a - 1.0) * b - growth_quantity(m, b, &p)).abs() <= 1e-12 * r * l.powf(a - 1.0) * b);
        }
    }

    #[test]
    fn parameter_domain() {
        assert!(BlowupParams::new(1.0, 0.1, 2, 0.01).is_err());
        assert!(BlowupParams::new(2.0, 0.5, 2, 0.01).is_err());
        assert!(BlowupParams::new(2.0, 0.25, 2, 0.03).is_err());
        assert!(BlowupParams::new(2.0, 0.25, 1, 0.01).is_err());
    }

    #[test]
    fn profile_shape() {
        let f = build_witness_profile(256.0, 0.08, 65).unwrap();
        assert!((f.values[32].re - bump(0.0) / 0.08).abs() < 1e-12);
        assert!(f.grid.nodes.iter().all(|s| (s - 256.0).abs() < 0.04));
        assert!(build_witness_profile(256.0, 0.08, 8).is_err());
        for (count, tol) in [(65, 1e-4), (400, 1e-9)] {
            let f = build_witness_profile(256.0, 0.08, count).unwrap();
            let mass: f64 = f.values.iter().zip(&f.grid.weights).map(|(v, w)| v.re * w).sum();
            assert!((mass - 1.0).abs() < tol, "{count}: {mass}");
        }
    }

    #[test]
    fn phase_identities() {
        let (l, r, a) = (256.0, 0.08, 2.0);
        let (x, t) = (3.0, 0.01);
        assert_eq!(phase(0.0, x, t, l, r, a), -x * l + t * l.powf(a));
        let ts = stationary_time(x, l, a);
        let d = 1e-6;
        let deriv = (phase(d, x, ts, l, r, a) - phase(-d, x, ts, l, r, a)) / (2.0 * d);
        assert!(deriv.abs() < 1e-6 * x * r);
        let off = (phase(d, x, 2.0 * ts, l, r, a) - phase(-d, x, 2.0 * ts, l, r, a)) / (2.0 * d);
        assert!(off.abs() > 0.5 * x * r);
        for xi in [-0.5, -0.1, 0.3] {
            let inc = phase_increment(xi, x, t, l, r, a);
            assert!((inc - (phase(xi, x, t, l, r, a) - phase(0.0, x, t, l, r, a))).abs() < 1e-8);
        }
        let ta = aligned_time(x, l, a);
        let p0 = phase(0.0, x, ta, l, r, a);
        assert!((p0 / (2.0 * PI) - (p0 / (2.0 * PI)).round()).abs() < 1e-9);
    }

    #[test]
    fn sobolev_bound_constant() {
        let p = params();
        for (l, r) in [(100.0, 0.5), (256.0, 0.08), (1000.0, 2.0), (50.0, 1.0), (4000.0, 0.3)] {
            let f = build_witness_profile(l, r, 200).unwrap();
            let hs2: f64 = f.grid.nodes.iter().zip(&f.grid.weights).zip(&f.values)
                .map(|((&s, &w), v)| w * (1.0 + s * s).powf(p.s) * v.norm_sqr() * s)
                .sum::<f64>() * sphere_area(2);
            let predicted = sphere_area(2) * bump_energy() * l.powf(2.0 * p.s + 1.0) / r;
            assert!((hs2 / predicted - 1.0).abs() < 0.02, "λ {l} ρ {r}: {}", hs2 / predicted);
        }
    }

    #[test]
    fn small_witness() {
        let p = params();
        let w = build_witness(1, 16.0, 1.0 / 16.0, &p, &WitnessOptions::default()).unwrap();
        assert!(w.rho / w.lambda <= p.eps);
        assert!(w.interval_j.0 >= w.interval_i.0 && w.interval_j.1 <= w.interval_i.1);
        assert!(w.phase_defect <= 0.5);
        assert!(w.remainder_share < 0.1);
        let fine = build_witness(1, 16.0, 1.0 / 16.0, &p, &WitnessOptions { refine: 2, ..Default::default() }).unwrap();
        assert!((fine.lower_constant / w.lower_constant - 1.0).abs() < 0.25);
        let far = build_witness(3, 64.0, 1.0 / 64.0, &p, &WitnessOptions::default()).unwrap();
        let floor = 0.5 * (2.0 * PI).powf(-0.5) / alpha(2);
        assert!(far.lower_constant >= 0.9 * floor, "{} vs {floor}", far.lower_constant);
        assert!(far_field_ok(&far, &p));
    }

    #[test]
    fn synthetic_growth() {
        let p = params();
        let series: Vec<BlowupWitness> = default_schedule(5)
            .into_iter()
            .map(|(j, m, b)| {
                let mut w = build_witness(j, m, b, &p, &WitnessOptions { radii: 2, times: 3, ..Default::default() }).unwrap();
                w.ratio = (p.eps * m.sqrt()).sqrt();
                w
            })
            .collect();
        let fit = growth_exponent(&series).unwrap();
        assert!((fit.slope - 0.5).abs() < 1e-12);
        assert!(growth_exponent(&series[..3]).is_err());
    }
}
