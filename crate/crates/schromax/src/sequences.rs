//! Decreasing time sequences, ℓ^r / weak-ℓ^r evidence, critical exponents and
//! threshold arithmetic.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "gen", rename_all = "lowercase")]
pub enum Generator {
    /// `t_m = (m + shift)^{-alpha}`.
    Power { alpha: f64, shift: f64 },
    /// `t_m = ratio^m`.
    Geometric { ratio: f64 },
    /// `t_m = 1 / ln(m + shift)`.
    Logarithmic { shift: f64 },
    /// Listed values; `finite` marks a complete sequence rather than a prefix.
    Explicit { values: Vec<f64>, finite: bool },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSequence {
    pub generator: Generator,
    /// Request that consecutive gaps decrease.
    pub gaps_decreasing: bool,
}

impl TimeSequence {
    fn checked(generator: Generator) -> Result<Self> {
        let seq = TimeSequence { generator, gaps_decreasing: false };
        let t1 = seq.term(1);
        if !(t1 < 1.0 && t1 > 0.0) {
            return Err(invalid(format!("t_1 = {t1} must lie in (0, 1)")));
        }
        let prefix = seq.prefix(64);
        if prefix.windows(2).any(|w| !(w[1] < w[0]) || w[1] <= 0.0) {
            return Err(invalid("sequence is not strictly decreasing and positive"));
        }
        Ok(seq)
    }

    /// `t_m = (m + 1)^{-alpha}`, so `t_m ~ m^{-alpha}` with `t_1 < 1`.
    pub fn power(alpha: f64) -> Result<Self> {
        Self::power_shifted(alpha, 1.0)
    }

    pub fn power_shifted(alpha: f64, shift: f64) -> Result<Self> {
        if !(alpha > 0.0 && shift >= 0.0) {
            return Err(invalid(format!("power generator needs alpha > 0, shift >= 0 (got {alpha}, {shift})")));
        }
        Self::checked(Generator::Power { alpha, shift })
    }

    pub fn geometric(ratio: f64) -> Result<Self> {
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(invalid(format!("geometric ratio {ratio} must lie in (0, 1)")));
        }
        Self::checked(Generator::Geometric { ratio })
    }

    /// `t_m = 1/ln(m + 2)`.
    pub fn logarithmic() -> Result<Self> {
        Self::checked(Generator::Logarithmic { shift: 2.0 })
    }

    pub fn explicit(values: Vec<f64>, finite: bool) -> Result<Self> {
        if values.is_empty() {
            return Err(invalid("explicit sequence is empty"));
        }
        if values.windows(2).any(|w| !(w[1] < w[0])) || !(values[0] < 1.0) || !(values[values.len() - 1] > 0.0) {
            return Err(invalid("explicit sequence must satisfy 1 > t_1 > t_2 > ... > 0"));
        }
        Ok(TimeSequence { generator: Generator::Explicit { values, finite }, gaps_decreasing: false })
    }

    pub fn with_decreasing_gaps(mut self) -> Result<Self> {
        let p = self.prefix(256);
        let gaps: Vec<f64> = p.windows(2).map(|w| w[0] - w[1]).collect();
        if gaps.windows(2).any(|g| g[1] > g[0]) {
            return Err(invalid("gaps t_k - t_{k+1} are not decreasing"));
        }
        self.gaps_decreasing = true;
        Ok(self)
    }

    /// Number of members, or `None` for an unbounded sequence.
    pub fn len(&self) -> Option<usize> {
        match &self.generator {
            Generator::Explicit { values, .. } => Some(values.len()),
            _ => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        match &self.generator {
            Generator::Explicit { finite, .. } => !finite,
            _ => true,
        }
    }

    /// `t_m` for `m >= 1`; zero past the end of an explicit list.
    pub fn term(&self, m: usize) -> f64 {
        let mf = m as f64;
        match &self.generator {
            Generator::Power { alpha, shift } => (mf + shift).powf(-alpha),
            Generator::Geometric { ratio } => ratio.powf(mf),
            Generator::Logarithmic { shift } => 1.0 / (mf + shift).ln(),
            Generator::Explicit { values, .. } => values.get(m - 1).copied().unwrap_or(0.0),
        }
    }

    pub fn prefix(&self, count: usize) -> Vec<f64> {
        let cap = self.len().map_or(count, |l| l.min(count));
        (1..=cap).map(|m| self.term(m)).collect()
    }

    /// `#{m : t_m > b}`; infinite when it exceeds `f64` range.
    pub fn count_above(&self, b: f64) -> f64 {
        if b <= 0.0 {
            return if self.len().is_some() { self.len().unwrap() as f64 } else { f64::INFINITY };
        }
        let guess = match &self.generator {
            Generator::Power { alpha, shift } => (b.powf(-1.0 / alpha) - shift).ceil() - 1.0,
            Generator::Geometric { ratio } => (b.ln() / ratio.ln()).ceil() - 1.0,
            Generator::Logarithmic { shift } => ((1.0 / b).exp() - shift).ceil() - 1.0,
            Generator::Explicit { values, .. } => return values.iter().filter(|&&t| t > b).count() as f64,
        };
        if !guess.is_finite() {
            return f64::INFINITY;
        }
        let mut c = guess.max(0.0);
        if c < 1e15 {
            while c > 0.0 && self.term(c as usize) <= b {
                c -= 1.0;
            }
            while self.term(c as usize + 1) > b {
                c += 1.0;
            }
        }
        c
    }
}

/// Default dyadic grid `2^{-1} .. 2^{-depth}`.
pub fn dyadic_grid(depth: u32) -> Vec<f64> {
    (1..=depth).map(|k| 2f64.powi(-(k as i32))).collect()
}

/// `sup_b b^r #{m : t_m > b}` over the grid.
pub fn weak_lr_constant(seq: &TimeSequence, r: f64, b_grid: &[f64]) -> Result<f64> {
    if !(r > 0.0) {
        return Err(invalid(format!("r = {r} must be positive")));
    }
    if b_grid.is_empty() {
        return Err(invalid("empty b-grid"));
    }
    let bmin = b_grid.iter().cloned().fold(f64::INFINITY, f64::min);
    if let Generator::Explicit { values, finite: false } = &seq.generator {
        if values[values.len() - 1] >= bmin {
            return Err(invalid(format!("prefix ends at {} above min b = {bmin}", values[values.len() - 1])));
        }
    }
    Ok(b_grid.iter().map(|&b| b.powf(r) * seq.count_above(b)).fold(0.0, f64::max))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeakVerdict {
    pub depths: Vec<u32>,
    pub constants: Vec<f64>,
    pub stable: bool,
}

/// Weak constants on refining dyadic grids; stable when the last refinement grows by < 10%.
pub fn weak_lr_classify(seq: &TimeSequence, r: f64, max_depth: u32) -> Result<WeakVerdict> {
    let depths: Vec<u32> = (1..=max_depth / 4).map(|k| 4 * k).collect();
    let constants = depths.iter().map(|&d| weak_lr_constant(seq, r, &dyadic_grid(d))).collect::<Result<Vec<_>>>()?;
    let n = constants.len();
    let stable = n >= 2 && constants[n - 1].is_finite() && constants[n - 1] <= 1.1 * constants[n - 2];
    Ok(WeakVerdict { depths, constants, stable })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartialSum {
    pub sum: f64,
    pub sum_double: f64,
    pub sum_quadruple: f64,
    pub divergent: bool,
}

/// `Σ_{m ≤ M} t_m^r` with a doubling test: divergent when the block `(2M, 4M]`
/// contributes at least 95% of the block `(M, 2M]`.
pub fn lr_partial_sum(seq: &TimeSequence, r: f64, m: usize) -> PartialSum {
    let cap = seq.len().unwrap_or(usize::MAX);
    let sum_to = |n: usize| -> f64 { (1..=n.min(cap)).map(|k| seq.term(k).powf(r)).sum() };
    let s1 = sum_to(m);
    let s2 = sum_to(2 * m);
    let s4 = sum_to(4 * m);
    let d1 = s2 - s1;
    let d2 = s4 - s2;
    PartialSum { sum: s1, sum_double: s2, sum_quadruple: s4, divergent: d1 > 0.0 && d2 >= 0.95 * d1 }
}

pub fn critical_exponent_l2(a: f64, s: f64) -> Result<f64> {
    if !(s > 0.0 && s < a / 2.0) {
        return Err(invalid(format!("s = {s} outside (0, a/2)")));
    }
    Ok(2.0 * s / (a - 2.0 * s))
}

pub fn critical_exponent_l4(a: f64, s: f64) -> Result<f64> {
    if !(s > 0.0 && s < a / 4.0) {
        return Err(invalid(format!("s = {s} outside (0, a/4)")));
    }
    Ok(2.0 * s / (a - 4.0 * s))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub k: f64,
    pub b: f64,
    pub b1: f64,
    pub b2: f64,
}

/// `k = (a-2s)j`, `b = 2^{-k}`, `b1 = 2^{-k-2εj}`, `b2 = 2^{-k+2εj/r}`.
pub fn split_thresholds(j: u32, a: f64, s: f64, eps: f64) -> Result<Thresholds> {
    let r = critical_exponent_l2(a, s)?;
    if !(eps > 0.0) {
        return Err(invalid(format!("eps = {eps} must be positive")));
    }
    let jf = j as f64;
    let k = (a - 2.0 * s) * jf;
    let e1 = 2.0 * eps;
    let e2 = 2.0 * eps / r;
    Ok(Thresholds { k, b: 2f64.powf(-k), b1: 2f64.powf(-k - e1 * jf), b2: 2f64.powf(-k + e2 * jf) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_weak_constant_near_one() {
        for r in [0.5, 1.0, 2.0] {
            let seq = TimeSequence::power(1.0 / r).unwrap();
            let c = weak_lr_constant(&seq, r, &dyadic_grid(12)).unwrap();
            assert!((c - 1.0).abs() < 0.1, "r={r} c={c}");
        }
    }

    #[test]
    fn counts_match_direct() {
        let seqs = [
            TimeSequence::power(2.0).unwrap(),
            TimeSequence::power(0.7).unwrap(),
            TimeSequence::geometric(0.5).unwrap(),
            TimeSequence::logarithmic().unwrap(),
        ];
        for seq in &seqs {
            for b in [0.5, 0.3, 0.2, 0.125, 0.05] {
                let direct = (1..200_000).take_while(|&m| seq.term(m) > b).count() as f64;
                if direct < 199_999.0 {
                    assert_eq!(seq.count_above(b), direct, "{:?} b={b}", seq.generator);
                }
            }
        }
    }

    #[test]
    fn finite_and_logarithmic() {
        let fin = TimeSequence::explicit(vec![0.5, 0.25, 0.1], true).unwrap();
        let c = weak_lr_constant(&fin, 1.0, &dyadic_grid(16)).unwrap();
        assert!(c.is_finite() && c <= 3.0 * 0.5);
        let log = TimeSequence::logarithmic().unwrap();
        let v = weak_lr_classify(&log, 1.0, 8).unwrap();
        assert!(!v.stable);
        assert!(v.constants[1] > 10.0 * v.constants[0]);
        let prefix = TimeSequence::explicit(vec![0.5, 0.25], false).unwrap();
        assert!(weak_lr_constant(&prefix, 1.0, &dyadic_grid(4)).is_err());
    }

    #[test]
    fn partial_sums() {
        let g = TimeSequence::geometric(0.5).unwrap();
        let p = lr_partial_sum(&g, 1.0, 40);
        assert!((p.sum - 1.0).abs() < 1e-11 && !p.divergent);
        let h = TimeSequence::power(1.0).unwrap();
        assert!(lr_partial_sum(&h, 1.0, 1000).divergent);
        assert!(lr_partial_sum(&g, 0.0, 10).divergent);
    }

    #[test]
    fn exponents_and_thresholds() {
        assert!((critical_exponent_l2(2.0, 0.5).unwrap() - 1.0).abs() < 1e-15);
        assert!((critical_exponent_l2(2.0, 0.75).unwrap() - 3.0).abs() < 1e-15);
        assert!((critical_exponent_l4(2.0, 0.25).unwrap() - 0.5).abs() < 1e-15);
        assert!((critical_exponent_l4(4.0, 0.5).unwrap() - 0.5).abs() < 1e-15);
        assert!(critical_exponent_l2(1e-12, 1e-12).is_err());
        assert!(critical_exponent_l4(2.0, 1e-14).unwrap() < 1e-13);
        let t0 = split_thresholds(0, 2.0, 0.5, 0.01).unwrap();
        assert_eq!((t0.k, t0.b, t0.b1, t0.b2), (0.0, 1.0, 1.0, 1.0));
        let t3 = split_thresholds(3, 2.0, 0.5, 0.01).unwrap();
        assert_eq!(t3.k, 3.0);
        assert_eq!(t3.b, 0.125);
    }

    #[test]
    fn decreasing_gaps_flag() {
        assert!(TimeSequence::power(1.0).unwrap().with_decreasing_gaps().is_ok());
        let bad = TimeSequence::explicit(vec![0.9, 0.89, 0.5, 0.49], true).unwrap();
        assert!(bad.with_decreasing_gaps().is_err());
    }
}
