//! Blow-up witnesses in the plane and the growth exponent of their ratios.

use schromax::counterexample::{derive_scales, BlowupParams, WitnessOptions};
use schromax::experiments::counterexample_growth;

fn main() -> schromax::Result<()> {
    let p = BlowupParams::new(2.0, 0.25, 2, 0.02)?;
    let (lambda, rho) = derive_scales(64.0, 1.0 / 64.0, &p)?;
    println!("M = 64, b = 1/64: λ = {lambda:.2}, ρ = {rho:.4}");
    let out = counterexample_growth(&p, 5, &WitnessOptions::default())?;
    for w in &out.witnesses {
        println!("j = {} M = {:<4} ratio² = {:.4e} phase defect {:.2e}", w.j, w.m, w.ratio * w.ratio, w.phase_defect);
    }
    println!("slope {:.3} (expected {:.3}), monotone {}", out.fit.slope, out.expected_slope, out.monotone);
    Ok(())
}
