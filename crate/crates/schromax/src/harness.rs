//! Experiment registry, JSON configuration and deterministic runs that write
//! CSV tables, plot data and a checksummed manifest.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::json;

use crate::counterexample::{BlowupParams, WitnessOptions};
use crate::error::{invalid, Error, Result};
use crate::experiments::{self, LIFT_CONTEXTS};
use crate::maximal::{scaling_fit, BoundModel, MaximalReport, ScalingFit, TimeWindow, SLOPE_TOL};
use crate::output::{emit_plot_data, num, sha256_hex, Axes, PlotSpec, RunManifest, Table};
use crate::sequences::{Generator, TimeSequence};
use crate::special::BesselOrder;

/// A real read from either a JSON number or a decimal string; written back as a string.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decimal(pub f64);

impl Serialize for Decimal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&num(self.0))
    }
}

impl<'de> Deserialize<'de> for Decimal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(Decimal(x)),
            Raw::Str(s) => s.trim().parse().map(Decimal).map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    /// Weak constant inside the configured unit band.
    WeakUnit,
    /// Stable weak constant and convergent partial sums.
    Summable,
    /// Weak constants keep growing.
    NonWeak,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceSpec {
    pub label: String,
    #[serde(flatten)]
    pub generator: Generator,
    #[serde(default)]
    pub r: Vec<Decimal>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<Expectation>,
}

impl SequenceSpec {
    pub fn sequence(&self) -> Result<TimeSequence> {
        match &self.generator {
            Generator::Power { alpha, shift } => TimeSequence::power_shifted(*alpha, *shift),
            Generator::Geometric { ratio } => TimeSequence::geometric(*ratio),
            Generator::Logarithmic { shift } => {
                let seq = TimeSequence::logarithmic()?;
                Ok(TimeSequence { generator: Generator::Logarithmic { shift: *shift }, ..seq })
            }
            Generator::Explicit { values, finite } => TimeSequence::explicit(values.clone(), *finite),
        }
    }
}

/// Parameter block; unset fields take the experiment's defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<Decimal>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<Decimal>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_exponents: Option<Vec<i32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seeds: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t0: Option<Decimal>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<Decimal>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<Decimal>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub half_length: Option<Decimal>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time: Option<Decimal>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_min: Option<Decimal>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_max: Option<Decimal>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profiles: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orders: Option<Vec<Decimal>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub times: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<Decimal>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub octaves: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<Decimal>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail_starts: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sequences: Option<Vec<SequenceSpec>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: String,
    #[serde(default)]
    pub params: Params,
    #[serde(default)]
    pub tolerances: BTreeMap<String, Decimal>,
}

impl ExperimentConfig {
    pub fn new(experiment: &str) -> Self {
        ExperimentConfig { experiment: experiment.to_string(), params: Params::default(), tolerances: BTreeMap::new() }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    fn tol(&self, key: &str, default: f64) -> f64 {
        self.tolerances.get(key).map_or(default, |d| d.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExperimentInfo {
    pub name: &'static str,
    pub criterion: u32,
    pub description: &'static str,
}

pub const EXPERIMENTS: [ExperimentInfo; 11] = [
    ExperimentInfo { name: "theorem1-scan", criterion: 3, description: "window maximal ratios against 1 + |J|^{1/2} λ^{a/2}" },
    ExperimentInfo { name: "theorem2-scan", criterion: 4, description: "window maximal ratios against 1 + |J|^{1/4} λ^{a/4}" },
    ExperimentInfo { name: "eq6-scan", criterion: 5, description: "ball-window maximal ratios against |J|^{1/4} λ^{a/2} + (rλ)^{1/2} + 1" },
    ExperimentInfo { name: "lemma4-scan", criterion: 6, description: "sequential maximal ratios on annuli against λ^s" },
    ExperimentInfo { name: "prop2-check", criterion: 7, description: "Hankel isometry and Hankel vs planar FFT evolution" },
    ExperimentInfo { name: "prop3-bound", criterion: 7, description: "remainder maximal norms against the Schur constant" },
    ExperimentInfo { name: "thm6-ineq", criterion: 8, description: "lifted maximal norm against the line maximal norm plus A_ν‖f₁‖" },
    ExperimentInfo { name: "thm7-identity", criterion: 8, description: "(4,0) and (2,1) maximal norms at equal ν" },
    ExperimentInfo { name: "seq-classify", criterion: 9, description: "weak-ℓ^r constants and ℓ^r partial sums" },
    ExperimentInfo { name: "counterexample-growth", criterion: 10, description: "blow-up witnesses and the growth exponent of ratio²" },
    ExperimentInfo { name: "convergence-probe", criterion: 11, description: "exceptional-set measure against the sequence tail" },
];

pub fn lookup(name: &str) -> Result<&'static ExperimentInfo> {
    EXPERIMENTS.iter().find(|e| e.name == name).ok_or_else(|| Error::UnknownExperiment(name.to_string()))
}

/// Tables, plots and a JSON summary of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub tables: Vec<Table>,
    /// Plot specs keyed by table index.
    pub plots: Vec<(usize, PlotSpec)>,
    pub summary: serde_json::Value,
    pub pass: bool,
}

fn get(d: Option<Decimal>, default: f64) -> f64 {
    d.map_or(default, |v| v.0)
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(invalid(format!("{name} = {v} must be positive")))
    }
}

fn scan_table(reports: &[MaximalReport], model: BoundModel) -> Table {
    let mut t = Table::new("scan", &["lambda", "seed", "ratio", "predictor", "normalized", "samples", "residual"]);
    for r in reports {
        let p = model.predictor(r.lambda, r.window_length, r.ball_radius, r.a);
        t.push(vec![num(r.lambda), r.seed.to_string(), num(r.ratio), num(p), num(r.ratio / p), r.samples.to_string(), num(r.residual)]);
    }
    t
}

fn scan_outcome(cfg: &ExperimentConfig, reports: &[MaximalReport], model: BoundModel) -> Result<Outcome> {
    let fit: ScalingFit = scaling_fit(reports, model)?;
    let tol = cfg.tol("slope", SLOPE_TOL);
    let pass = fit.normalized_slope <= tol;
    let plot = PlotSpec { x: "lambda".into(), series: vec!["normalized".into()], axes: Axes::LogLog, overlay: None };
    Ok(Outcome {
        tables: vec![scan_table(reports, model)],
        plots: vec![(0, plot)],
        summary: json!({ "fit": fit, "slope_tolerance": tol, "verdict": if pass { "bounded" } else { "growing" } }),
        pass,
    })
}

fn default_sequences() -> Vec<SequenceSpec> {
    let d = |v: &[f64]| v.iter().map(|&x| Decimal(x)).collect::<Vec<_>>();
    let mut out: Vec<SequenceSpec> = [0.5, 1.0, 2.0]
        .iter()
        .map(|&r| SequenceSpec {
            label: format!("power-{}", num(1.0 / r)),
            generator: Generator::Power { alpha: 1.0 / r, shift: 1.0 },
            r: d(&[r]),
            expect: Some(Expectation::WeakUnit),
        })
        .collect();
    out.push(SequenceSpec {
        label: "geometric-0.5".into(),
        generator: Generator::Geometric { ratio: 0.5 },
        r: d(&[0.25, 0.5, 1.0, 2.0, 4.0]),
        expect: Some(Expectation::Summable),
    });
    out.push(SequenceSpec {
        label: "logarithmic".into(),
        generator: Generator::Logarithmic { shift: 2.0 },
        r: d(&[0.5, 1.0, 2.0, 4.0]),
        expect: Some(Expectation::NonWeak),
    });
    out
}

/// Runs the named experiment without touching the filesystem.
pub fn execute(cfg: &ExperimentConfig) -> Result<Outcome> {
    lookup(&cfg.experiment)?;
    let p = &cfg.params;
    let a = positive("a", get(p.a, 2.0))?;
    let seeds = || p.seeds.clone().unwrap_or_else(|| (0..5).collect());
    match cfg.experiment.as_str() {
        "theorem1-scan" | "theorem2-scan" => {
            let exps = p.lambda_exponents.clone().unwrap_or_else(|| (4..=9).collect());
            let window = TimeWindow::new(get(p.t0, 0.0), get(p.window, 1.0))?;
            let half = positive("half_length", get(p.half_length, std::f64::consts::PI))?;
            let reports = experiments::window_scan(&exps, &seeds(), a, window, half)?;
            let model = if cfg.experiment == "theorem1-scan" { BoundModel::window_half(a) } else { BoundModel::window_quarter(a) };
            scan_outcome(cfg, &reports, model)
        }
        "eq6-scan" => {
            if (a - 1.0).abs() < 1e-12 {
                return Err(invalid("the ball-window predictor needs a != 1"));
            }
            let exps = p.lambda_exponents.clone().unwrap_or_else(|| (4..=8).collect());
            let window = TimeWindow::new(get(p.t0, 0.0), get(p.window, 0.25))?;
            let radius = get(p.radius, 0.1);
            let seeds = p.seeds.clone().unwrap_or_else(|| (0..3).collect());
            let reports = experiments::ball_window_scan(&exps, &seeds, a, window, radius)?;
            scan_outcome(cfg, &reports, BoundModel::BallWindow)
        }
        "lemma4-scan" => {
            let s = positive("s", get(p.s, 0.5))?;
            let exps = p.lambda_exponents.clone().unwrap_or_else(|| (4..=8).collect());
            let seq = match p.sequences.as_deref() {
                Some([first, ..]) => first.sequence()?,
                _ => TimeSequence::power(1.0)?,
            };
            let reports = experiments::sequence_scan(&exps, &seeds(), a, s, &seq)?;
            scan_outcome(cfg, &reports, BoundModel::Sobolev { s })
        }
        "prop2-check" => {
            let out = experiments::two_route_check(get(p.time, 0.1), a, get(p.r_min, 1.0), get(p.r_max, 10.0))?;
            let mut t = Table::new("oracle", &["radius", "route_a", "route_b", "abs_diff"]);
            for r in &out.rows {
                t.push(vec![num(r.radius), num(r.hankel), num(r.oracle), num(r.abs_diff)]);
            }
            let (ti, tr) = (cfg.tol("isometry", 1e-6), cfg.tol("relative", 1e-3));
            let pass = out.isometry_error <= ti && out.relative_error <= tr;
            let plot = PlotSpec { x: "radius".into(), series: vec!["route_a".into(), "route_b".into()], axes: Axes::Linear, overlay: None };
            Ok(Outcome {
                tables: vec![t],
                plots: vec![(0, plot)],
                summary: json!({ "isometry_error": out.isometry_error, "relative_error": out.relative_error }),
                pass,
            })
        }
        "prop3-bound" => {
            let orders = match &p.orders {
                Some(v) => v.iter().map(|d| BesselOrder::from_f64(d.0)).collect::<Result<Vec<_>>>()?,
                None => [-1, 0, 1, 2, 3].iter().map(|&n| BesselOrder::new(n)).collect::<Result<Vec<_>>>()?,
            };
            let rows = experiments::remainder_bound(p.profiles.unwrap_or(50), &orders, a)?;
            let mut t = Table::new("remainder", &["profile", "nu", "sup_norm", "profile_norm", "schur_constant", "max_abs", "domination_excess"]);
            for r in &rows {
                t.push(vec![
                    r.profile.to_string(),
                    num(r.nu),
                    num(r.sup_norm),
                    num(r.profile_norm),
                    num(r.schur_constant),
                    num(r.max_abs),
                    num(r.domination_excess),
                ]);
            }
            let tol = cfg.tol("cosine_remainder", 1e-8);
            let cosine = rows.iter().filter(|r| r.nu == -0.5).map(|r| r.max_abs).fold(0.0, f64::max);
            let bounded = rows.iter().all(|r| r.within_bound());
            let worst = rows
                .iter()
                .filter(|r| r.schur_constant > 0.0)
                .map(|r| r.sup_norm / (r.schur_constant * r.profile_norm))
                .fold(0.0, f64::max);
            Ok(Outcome {
                tables: vec![t],
                plots: vec![],
                summary: json!({ "all_bounded": bounded, "worst_ratio": worst, "cosine_remainder": cosine }),
                pass: bounded && cosine < tol,
            })
        }
        "thm6-ineq" => {
            let rows = experiments::lift_inequality(p.profiles.unwrap_or(10), &LIFT_CONTEXTS, a, p.times.unwrap_or(33))?;
            let mut t = Table::new("inequality", &["profile", "n", "k", "nu", "lhs", "line_term", "constant_term", "slack", "phased_residual"]);
            for r in &rows {
                t.push(vec![
                    r.profile.to_string(),
                    r.n.to_string(),
                    r.k.to_string(),
                    num(r.nu),
                    num(r.lhs),
                    num(r.line_term),
                    num(r.constant_term),
                    num(r.slack()),
                    num(r.phased_residual),
                ]);
            }
            let min_slack = rows.iter().map(|r| r.slack()).fold(f64::INFINITY, f64::min);
            Ok(Outcome { tables: vec![t], plots: vec![], summary: json!({ "min_slack": min_slack }), pass: min_slack >= 0.0 })
        }
        "thm7-identity" => {
            let count = p.times.unwrap_or(9).max(1);
            let span = get(p.window, 0.2);
            let times: Vec<f64> = (0..count).map(|i| span * i as f64 / (count - 1).max(1) as f64).collect();
            let rows = experiments::order_identity(p.profiles.unwrap_or(5), a, &times, p.points.unwrap_or(2048))?;
            let mut t = Table::new("identity", &["profile", "lift_4_0", "oracle_2_1", "relative_diff"]);
            for r in &rows {
                t.push(vec![r.profile.to_string(), num(r.lift_4_0), num(r.oracle_2_1), num(r.relative_diff())]);
            }
            let worst = rows.iter().map(|r| r.relative_diff()).fold(0.0, f64::max);
            let tol = cfg.tol("relative", 1e-4);
            Ok(Outcome { tables: vec![t], plots: vec![], summary: json!({ "max_relative_diff": worst }), pass: worst <= tol })
        }
        "seq-classify" => {
            let specs = p.sequences.clone().unwrap_or_else(default_sequences);
            let (lo, hi) = (cfg.tol("weak_lo", 0.9), cfg.tol("weak_hi", 1.5));
            let mut t = Table::new("sequences", &["label", "r", "weak_constant", "weak_stable", "partial_sum", "divergent", "expected", "met"]);
            let mut pass = true;
            for spec in &specs {
                let seq = spec.sequence()?;
                for r in &spec.r {
                    let row = experiments::classify(&spec.label, &seq, r.0, 16, 1 << 12)?;
                    let met = match spec.expect {
                        Some(Expectation::WeakUnit) => row.weak_constant >= lo && row.weak_constant <= hi,
                        Some(Expectation::Summable) => row.weak_stable && !row.divergent,
                        Some(Expectation::NonWeak) => !row.weak_stable,
                        None => true,
                    };
                    pass &= met;
                    let expected = spec.expect.map_or("none".to_string(), |e| serde_json::to_value(e).unwrap().as_str().unwrap().to_string());
                    t.push(vec![
                        row.label,
                        num(row.r),
                        num(row.weak_constant),
                        row.weak_stable.to_string(),
                        num(row.partial_sum),
                        row.divergent.to_string(),
                        expected,
                        met.to_string(),
                    ]);
                }
            }
            Ok(Outcome { tables: vec![t], plots: vec![], summary: json!({ "all_expectations_met": pass }), pass })
        }
        "counterexample-growth" => {
            let bp = BlowupParams::new(a, get(p.s, 0.25), p.n.unwrap_or(2), get(p.eps, 0.02))?;
            let out = experiments::counterexample_growth(&bp, p.octaves.unwrap_or(6), &WitnessOptions::default())?;
            let mut t = Table::new(
                "witnesses",
                &["j", "M", "b", "lambda", "rho", "hs_norm", "max_norm", "ratio", "ratio_squared", "lower_constant", "phase_defect", "remainder_share", "growth_quantity"],
            );
            for w in &out.witnesses {
                t.push(vec![
                    w.j.to_string(),
                    num(w.m),
                    num(w.b),
                    num(w.lambda),
                    num(w.rho),
                    num(w.hs_norm),
                    num(w.max_norm),
                    num(w.ratio),
                    num(w.ratio * w.ratio),
                    num(w.lower_constant),
                    num(w.phase_defect),
                    num(w.remainder_share),
                    num(w.growth_quantity),
                ]);
            }
            let (lo, hi) = (cfg.tol("slope_lo", 0.4), cfg.tol("slope_hi", 0.6));
            let phase_tol = cfg.tol("phase", 0.5);
            let slope_ok = out.fit.slope >= lo && out.fit.slope <= hi;
            let pass = slope_ok && out.scale_ok && out.monotone && out.phase_defect <= phase_tol;
            let plot = PlotSpec {
                x: "M".into(),
                series: vec!["ratio_squared".into()],
                axes: Axes::LogValues,
                overlay: Some((out.fit.slope, out.fit.intercept)),
            };
            Ok(Outcome {
                tables: vec![t],
                plots: vec![(0, plot)],
                summary: json!({
                    "fit": out.fit,
                    "expected_slope": out.expected_slope,
                    "slope_ok": slope_ok,
                    "scale_ok": out.scale_ok,
                    "monotone": out.monotone,
                    "phase_defect": out.phase_defect,
                }),
                pass,
            })
        }
        "convergence-probe" => {
            let f = experiments::gaussian_line(p.points.unwrap_or(256), get(p.half_length, 20.0))?;
            let seq = match p.sequences.as_deref() {
                Some([first, ..]) => first.sequence()?,
                _ => TimeSequence::geometric(0.5)?,
            };
            let tails = p.tail_starts.clone().unwrap_or_else(|| vec![1, 5, 20]);
            let rows = experiments::probe_tails(&f, &seq, a, positive("delta", get(p.delta, 1e-3))?, &tails)?;
            let mut t = Table::new("probe", &["tail_start", "measure"]);
            for r in &rows {
                t.push(vec![r.tail_start.to_string(), num(r.measure)]);
            }
            let first = rows.first().map_or(0.0, |r| r.measure);
            let pass = rows.iter().all(|r| r.measure <= first) && rows.windows(2).skip(1).all(|w| w[1].measure < w[0].measure);
            Ok(Outcome { tables: vec![t], plots: vec![], summary: json!({ "measures": rows }), pass })
        }
        other => Err(Error::UnknownExperiment(other.to_string())),
    }
}

/// Worker count from `SCHROMAX_WORKERS`, else the available parallelism.
pub fn default_workers() -> usize {
    std::env::var("SCHROMAX_WORKERS")
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Runs `cfg` on a pool of `workers` threads and writes config, tables, plots,
/// summary and manifest into `out`.
pub fn run_experiment(cfg: &ExperimentConfig, out: &Path, force: bool, workers: Option<usize>) -> Result<RunManifest> {
    lookup(&cfg.experiment)?;
    if out.exists() && !force && fs::read_dir(out)?.next().is_some() {
        return Err(Error::OutputExists(out.display().to_string()));
    }
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or_else(default_workers))
        .build()
        .map_err(|e| invalid(format!("worker pool: {e}")))?;
    let outcome = pool.install(|| execute(cfg))?;
    fs::create_dir_all(out)?;
    let config_text = cfg.to_json()?;
    fs::write(out.join("config.json"), &config_text)?;
    let mut paths = vec![out.join("config.json")];
    for t in &outcome.tables {
        paths.push(t.write(out)?);
    }
    for (i, spec) in &outcome.plots {
        let files = emit_plot_data(&outcome.tables[*i], spec, out)?;
        paths.push(files.data);
        paths.push(files.script);
    }
    let summary = json!({ "experiment": cfg.experiment, "pass": outcome.pass, "summary": outcome.summary });
    fs::write(out.join("summary.json"), serde_json::to_string_pretty(&summary)? + "\n")?;
    paths.push(out.join("summary.json"));
    let mut files = BTreeMap::new();
    for path in &paths {
        let name = path.file_name().and_then(|s| s.to_str()).unwrap_or_default().to_string();
        files.insert(name, sha256_hex(&fs::read(path)?));
    }
    let manifest = RunManifest {
        experiment: cfg.experiment.clone(),
        config_hash: sha256_hex(config_text.as_bytes()),
        version: env!("CARGO_PKG_VERSION").to_string(),
        files,
        seconds: start.elapsed().as_secs_f64(),
        pass: outcome.pass,
    };
    manifest.write(out)?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_is_complete() {
        assert_eq!(EXPERIMENTS.len(), 11);
        for e in EXPERIMENTS {
            assert_eq!(lookup(e.name).unwrap().name, e.name);
        }
        assert!(matches!(lookup("nope"), Err(Error::UnknownExperiment(_))));
    }

    #[test]
    fn decimal_strings_and_numbers() {
        let cfg = ExperimentConfig::from_json(r#"{"experiment":"eq6-scan","params":{"a":"2","radius":0.1},"tolerances":{"slope":"0.05"}}"#).unwrap();
        assert_eq!(cfg.params.a, Some(Decimal(2.0)));
        assert_eq!(cfg.params.radius, Some(Decimal(0.1)));
        assert_eq!(cfg.tol("slope", 1.0), 0.05);
        let back = ExperimentConfig::from_json(&cfg.to_json().unwrap()).unwrap();
        assert_eq!(back, cfg);
        assert!(ExperimentConfig::from_json(r#"{"experiment":"x","params":{"bogus":1}}"#).is_err());
    }

    #[test]
    fn sequence_specs_parse() {
        let spec: SequenceSpec = serde_json::from_str(r#"{"label":"p","gen":"power","alpha":2,"shift":1,"r":["0.5"]}"#).unwrap();
        assert_eq!(spec.sequence().unwrap().term(1), 0.25);
        assert_eq!(spec.r, vec![Decimal(0.5)]);
    }

    #[test]
    fn domain_errors_precede_work() {
        let mut cfg = ExperimentConfig::new("eq6-scan");
        cfg.params.a = Some(Decimal(1.0));
        assert!(execute(&cfg).is_err());
        cfg.params.a = Some(Decimal(-2.0));
        assert!(execute(&cfg).is_err());
    }

    #[test]
    fn small_probe_runs() {
        let out = execute(&ExperimentConfig::new("convergence-probe")).unwrap();
        assert!(out.pass);
        assert_eq!(out.tables[0].rows.len(), 3);
    }
}
