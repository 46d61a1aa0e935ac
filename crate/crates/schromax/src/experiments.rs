//! Typed experiment drivers shared by the harness, the CLI and the examples.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::counterexample::{build_witness, growth_exponent, BlowupParams, BlowupWitness, GrowthFit, WitnessOptions};
use crate::error::{invalid, Result};
use crate::maximal::{
    convergence_probe, maximal_over_e, maximal_over_sequence, maximal_over_window, window_lattice, MaximalReport, ProductSet,
    TimeWindow,
};
use crate::radial::{
    alpha, half_line_maximal_norm, hankel_propagate, lift_norm_identity, line_maximal_norm, oracle_2d_propagate,
    oracle_2d_propagate_field, symmetrize, HarmonicContext, LiftOptions, RadialGrid, RadialProfile, RemainderOperator,
    Symmetrization,
};
use crate::sequences::{lr_partial_sum, weak_lr_classify, TimeSequence};
use crate::special::{remainder_schur_constant, BesselOrder};
use crate::spectral::{make_bandlimited_random, BandShape, GridSpec, SpectralFunction1D};
use crate::Complex64;

/// `λ = 2^e` for each exponent.
pub fn lambdas(exponents: &[i32]) -> Vec<f64> {
    exponents.iter().map(|&e| 2f64.powi(e)).collect()
}

/// Ratios `‖sup_{t∈J}|S_t f|‖/‖f‖` for random `f` band-limited to `[-λ, λ]` on the torus of length `2L`.
pub fn window_scan(exponents: &[i32], seeds: &[u64], a: f64, window: TimeWindow, half_length: f64) -> Result<Vec<MaximalReport>> {
    let mut out = Vec::new();
    for lambda in lambdas(exponents) {
        let grid = GridSpec::for_band(lambda, half_length, 1.0)?;
        for &seed in seeds {
            let f = make_bandlimited_random(lambda, BandShape::Ball, seed, grid)?;
            let sup = maximal_over_window(&f, &window, a)?;
            out.push(MaximalReport::from_sup(&sup, f.l2_norm(), lambda, window.length, 0.0, a, 0.0, seed));
        }
    }
    Ok(out)
}

/// As [`window_scan`] over `E = [-r, r] × J`, on grids fine enough for exact index shifts.
pub fn ball_window_scan(exponents: &[i32], seeds: &[u64], a: f64, window: TimeWindow, radius: f64) -> Result<Vec<MaximalReport>> {
    let mut out = Vec::new();
    for lambda in lambdas(exponents) {
        let grid = GridSpec::for_band(lambda, PI, 2.0 * PI)?;
        let e = ProductSet::new(radius, window)?;
        for &seed in seeds {
            let f = make_bandlimited_random(lambda, BandShape::Ball, seed, grid)?;
            let sup = maximal_over_e(&f, &e, a)?;
            out.push(MaximalReport::from_sup(&sup, f.l2_norm(), lambda, window.length, radius, a, 0.0, seed));
        }
    }
    Ok(out)
}

/// Ratios `‖sup_m|S_{t_m} f|‖/‖f‖` for random `f` on the annulus `λ/2 <= |ξ| <= λ`.
pub fn sequence_scan(exponents: &[i32], seeds: &[u64], a: f64, s: f64, seq: &TimeSequence) -> Result<Vec<MaximalReport>> {
    let mut out = Vec::new();
    for lambda in lambdas(exponents) {
        let grid = GridSpec::for_band(lambda, PI, 1.0)?;
        for &seed in seeds {
            let f = make_bandlimited_random(lambda, BandShape::Annulus, seed, grid)?;
            let sup = maximal_over_sequence(&f, seq, a, None)?;
            out.push(MaximalReport::from_sup(&sup, f.l2_norm(), lambda, 1.0, 0.0, a, s, seed));
        }
    }
    Ok(out)
}

/// A sum of Gaussian bumps `Σ c_i exp(-((s - m_i)/w_i)²)` on `ℝ₊`.
#[derive(Debug, Clone, PartialEq)]
pub struct BumpSum {
    pub terms: Vec<(f64, f64, Complex64)>,
}

impl BumpSum {
    /// Three bumps with centers in `[1.5, 6]`, widths in `[0.3, 0.8]` and complex amplitudes.
    pub fn random(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let terms = (0..3)
            .map(|_| {
                let m = rng.gen_range(1.5..6.0);
                let w = rng.gen_range(0.3..0.8);
                let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                (m, w, c)
            })
            .collect();
        BumpSum { terms }
    }

    pub fn eval(&self, s: f64) -> Complex64 {
        self.terms.iter().map(|&(m, w, c)| c * (-((s - m) / w).powi(2)).exp()).sum()
    }

    pub fn sample(&self, step: f64, count: usize) -> Result<RadialProfile> {
        Ok(RadialProfile::from_fn(RadialGrid::uniform(step, count)?, |s| self.eval(s)))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleRow {
    pub radius: f64,
    pub hankel: f64,
    pub oracle: f64,
    pub abs_diff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoRouteOutcome {
    /// `max_ν |‖S̃_0 f₁‖/‖f₁‖ - 1|` over `2ν ∈ {-1, 0, 1, 2, 3}`.
    pub isometry_error: f64,
    pub rows: Vec<OracleRow>,
    /// `max |hankel - oracle| / max |oracle|` over the radii.
    pub relative_error: f64,
}

/// Isometry at `t = 0` and the two-route comparison in `ℝ²` for radial data.
pub fn two_route_check(t: f64, a: f64, r_lo: f64, r_hi: f64) -> Result<TwoRouteOutcome> {
    let f = RadialProfile::from_fn(RadialGrid::uniform(1.0 / 16.0, 128)?, |s| Complex64::new((-2.0 * (s - 4.0).powi(2)).exp(), 0.0));
    let out = RadialGrid::gauss_panels(24.0, 96, 12)?;
    let mut isometry_error: f64 = 0.0;
    for tn in -1..=3 {
        let g = hankel_propagate(&f, 0.0, a, BesselOrder::new(tn)?, Some(&out))?;
        isometry_error = isometry_error.max((g.norm() / f.norm() - 1.0).abs());
    }
    let grid = GridSpec::new(512, 40.0)?;
    let p = (2.0 * PI).powf(-0.5);
    let profile = |s: f64| (-4.0 * (s - 4.0).powi(2)).exp();
    let fhat = |rho: f64| Complex64::new(if rho > 0.0 { p * profile(rho) / rho.sqrt() } else { 0.0 }, 0.0);
    let g = oracle_2d_propagate(fhat, 9.0, grid, t, a)?;
    let half = grid.point_count() / 2;
    let js: Vec<usize> = (half + 1..grid.point_count()).filter(|&j| grid.x(j) >= r_lo && grid.x(j) <= r_hi).collect();
    let radii: Vec<f64> = js.iter().map(|&j| grid.x(j)).collect();
    let f1 = RadialProfile::from_fn(RadialGrid::uniform(1.0 / 32.0, 320)?, |s| Complex64::new(profile(s), 0.0));
    let nodes = RadialGrid::new(radii.clone(), vec![1.0; radii.len()])?;
    let h = hankel_propagate(&f1, t, a, BesselOrder::new(0)?, Some(&nodes))?;
    let rows: Vec<OracleRow> = js
        .iter()
        .zip(&h.values)
        .zip(&radii)
        .map(|((&j, v), &r)| {
            let via = v * p / (2.0 * PI * r.sqrt());
            let o = g.at(j, half);
            OracleRow { radius: r, hankel: via.norm(), oracle: o.norm(), abs_diff: (via - o).norm() }
        })
        .collect();
    let scale = rows.iter().map(|r| r.oracle).fold(0.0, f64::max);
    let relative_error = rows.iter().map(|r| r.abs_diff).fold(0.0, f64::max) / scale;
    Ok(TwoRouteOutcome { isometry_error, rows, relative_error })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RemainderRow {
    pub profile: u64,
    pub nu: f64,
    pub sup_norm: f64,
    pub profile_norm: f64,
    pub schur_constant: f64,
    pub max_abs: f64,
    pub domination_excess: f64,
}

/// Relative floor below which a remainder counts as roundoff; `K_{±1/2} ≡ 0` gives `A_ν = 0`.
pub const REMAINDER_FLOOR: f64 = 1e-8;

impl RemainderRow {
    pub fn within_bound(&self) -> bool {
        self.sup_norm <= (self.schur_constant + REMAINDER_FLOOR) * self.profile_norm
    }
}

/// `‖sup_t|R_{t,ν} f₁|‖` against `A_ν ‖f₁‖` for random bump profiles; `t` on the seed lattice of `[0, 1]`.
pub fn remainder_bound(profiles: usize, orders: &[BesselOrder], a: f64) -> Result<Vec<RemainderRow>> {
    let window = TimeWindow::new(0.0, 1.0)?;
    let mut rows = Vec::new();
    for &nu in orders {
        let schur = remainder_schur_constant(nu)?;
        for seed in 0..profiles as u64 {
            let f1 = BumpSum::random(seed).sample(1.0 / 16.0, 160)?;
            let times = window_lattice(&window, f1.support_max().powf(a).max(1.0), 0);
            let op = RemainderOperator::new(&f1, nu)?;
            let sup = op.sup_remainder(&times, a)?;
            let dom = op.dominating();
            let w = op.nodes().weights;
            rows.push(RemainderRow {
                profile: seed,
                nu: nu.nu(),
                sup_norm: sup.iter().zip(&w).map(|(v, w)| w * v * v).sum::<f64>().sqrt(),
                profile_norm: f1.norm(),
                schur_constant: schur,
                max_abs: sup.iter().cloned().fold(0.0, f64::max),
                domination_excess: sup.iter().zip(&dom).map(|(s, d)| s - d).fold(f64::NEG_INFINITY, f64::max),
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiftInequalityRow {
    pub profile: u64,
    pub n: usize,
    pub k: usize,
    pub nu: f64,
    /// `α_n ‖S*_E f_P‖` by polar integration of the lifted radial maximal function.
    pub lhs: f64,
    /// `α_1 √2 ‖S*_E f̌₁‖`.
    pub line_term: f64,
    /// `A_ν ‖f₁‖`.
    pub constant_term: f64,
    /// `|lhs - α_1 (∫₀^∞ |S*_E f|²)^{1/2}|` for the symmetrized line function.
    pub phased_residual: f64,
}

impl LiftInequalityRow {
    pub fn slack(&self) -> f64 {
        self.line_term + self.constant_term - self.lhs
    }
}

pub const LIFT_CONTEXTS: [(usize, usize); 4] = [(2, 0), (3, 0), (2, 1), (4, 0)];

/// The inequality `α_n‖S*f_P‖ <= α_1√2‖S*f̌₁‖ + A_ν‖f₁‖` with `E` a uniform set of times in `[0, 1]`.
pub fn lift_inequality(profiles: usize, contexts: &[(usize, usize)], a: f64, time_count: usize) -> Result<Vec<LiftInequalityRow>> {
    let times: Vec<f64> = (0..time_count).map(|i| i as f64 / (time_count - 1).max(1) as f64).collect();
    let mut rows = Vec::new();
    for seed in 0..profiles as u64 {
        let f1 = BumpSum::random(1000 + seed).sample(1.0 / 32.0, 320)?;
        let half = symmetrize(&f1, BesselOrder::new(0)?, Symmetrization::HalfLine)?;
        let line_term = 2f64.sqrt() * line_maximal_norm(&half.line, &times, a)?;
        for &(n, k) in contexts {
            let ctx = HarmonicContext::new(n, k)?;
            let nu = ctx.order();
            let (lhs, _) = lift_norm_identity(&f1, ctx, &times, a, LiftOptions::default())?;
            let sym = symmetrize(&f1, nu, Symmetrization::Phased)?;
            let phased = half_line_maximal_norm(&sym.line, &times, a)?;
            rows.push(LiftInequalityRow {
                profile: seed,
                n,
                k,
                nu: nu.nu(),
                lhs,
                line_term,
                constant_term: remainder_schur_constant(nu)? * f1.norm(),
                phased_residual: (lhs - phased).abs(),
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderIdentityRow {
    pub profile: u64,
    /// `α_4 ‖S*_E f_P‖_{L²(ℝ⁴)}` for `P ≡ const`, by the lifted radial route.
    pub lift_4_0: f64,
    /// `α_2 ‖S*_E f_Q‖_{L²(ℝ²)}` for `Q(ξ) = ξ₁/√π`, by tensor FFT in the plane.
    pub oracle_2_1: f64,
}

impl OrderIdentityRow {
    pub fn relative_diff(&self) -> f64 {
        (self.lift_4_0 - self.oracle_2_1).abs() / self.lift_4_0
    }
}

/// Equality of the `(4, 0)` and `(2, 1)` maximal norms, which share `ν = 1`.
pub fn order_identity(profiles: usize, a: f64, times: &[f64], points: usize) -> Result<Vec<OrderIdentityRow>> {
    let grid = GridSpec::new(points, 40.0)?;
    let n = grid.point_count();
    let y = PI.powf(-0.5);
    let mut rows = Vec::new();
    for seed in 0..profiles as u64 {
        let bumps = BumpSum::random(2000 + seed);
        let f1 = bumps.sample(1.0 / 32.0, 320)?;
        let (lift, _) = lift_norm_identity(&f1, HarmonicContext::new(4, 0)?, times, a, LiftOptions::default())?;
        let fhat = |x1: f64, x2: f64| {
            let r = x1.hypot(x2);
            if r == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                bumps.eval(r) * (y * x1 / r / r.sqrt())
            }
        };
        let mut sup = vec![0.0f64; n * n];
        for &t in times {
            let g = oracle_2d_propagate_field(fhat, 9.5, grid, t, a)?;
            for (s, z) in sup.iter_mut().zip(&g.samples) {
                *s = s.max(z.norm());
            }
        }
        let dx = grid.dx();
        let oracle = alpha(2) * (sup.iter().map(|v| v * v).sum::<f64>() * dx * dx).sqrt();
        rows.push(OrderIdentityRow { profile: seed, lift_4_0: lift, oracle_2_1: oracle });
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthOutcome {
    pub witnesses: Vec<BlowupWitness>,
    pub fit: GrowthFit,
    pub expected_slope: f64,
    /// `ρ/λ <= ε` on every witness.
    pub scale_ok: bool,
    /// `ρλ^{a-1}b` strictly increasing.
    pub monotone: bool,
    /// `max_j |e^{iΦ} - 1|` over witnesses with `j >= 2`.
    pub phase_defect: f64,
}

pub fn counterexample_growth(p: &BlowupParams, octaves: usize, opts: &WitnessOptions) -> Result<GrowthOutcome> {
    if octaves < 4 {
        return Err(invalid(format!("need at least 4 octaves, got {octaves}")));
    }
    let witnesses = crate::counterexample::default_schedule(octaves)
        .into_iter()
        .map(|(j, m, b)| build_witness(j, m, b, p, opts))
        .collect::<Result<Vec<_>>>()?;
    let fit = growth_exponent(&witnesses)?;
    let scale_ok = witnesses.iter().all(|w| w.rho / w.lambda <= p.eps);
    let monotone = witnesses.windows(2).all(|w| w[1].growth_quantity > w[0].growth_quantity);
    let phase_defect = witnesses.iter().filter(|w| w.j >= 2).map(|w| w.phase_defect).fold(0.0, f64::max);
    Ok(GrowthOutcome { witnesses, fit, expected_slope: p.expected_slope(), scale_ok, monotone, phase_defect })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceRow {
    pub label: String,
    pub r: f64,
    pub weak_constant: f64,
    pub weak_stable: bool,
    pub partial_sum: f64,
    pub divergent: bool,
}

/// Weak-ℓ^r constants (dyadic depth up to `max_depth`) and ℓ^r partial-sum tests.
pub fn classify(label: &str, seq: &TimeSequence, r: f64, max_depth: u32, terms: usize) -> Result<SequenceRow> {
    let weak = weak_lr_classify(seq, r, max_depth)?;
    let sum = lr_partial_sum(seq, r, terms);
    Ok(SequenceRow {
        label: label.to_string(),
        r,
        weak_constant: *weak.constants.last().unwrap_or(&f64::NAN),
        weak_stable: weak.stable,
        partial_sum: sum.sum_quadruple,
        divergent: sum.divergent,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeRow {
    pub tail_start: usize,
    pub measure: f64,
}

/// `f(x) = e^{-x²}` on `[-L, L)`, cut at `|ξ| <= 16`.
pub fn gaussian_line(points: usize, half_length: f64) -> Result<SpectralFunction1D> {
    let grid = GridSpec::new(points, half_length)?;
    let f = SpectralFunction1D::from_fn(grid, |xi| Complex64::new(PI.sqrt() * (-xi * xi / 4.0).exp(), 0.0));
    Ok(f.truncate(16.0))
}

pub fn probe_tails(f: &SpectralFunction1D, seq: &TimeSequence, a: f64, delta: f64, tails: &[usize]) -> Result<Vec<ProbeRow>> {
    tails
        .iter()
        .map(|&tail_start| Ok(ProbeRow { tail_start, measure: convergence_probe(f, seq, a, delta, tail_start)? }))
        .collect()
}
