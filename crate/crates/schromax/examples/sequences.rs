//! Weak-ℓ^r constants, ℓ^r partial sums, and a sequential maximal scan.

use schromax::experiments::{classify, sequence_scan};
use schromax::maximal::{scaling_fit, BoundModel};
use schromax::sequences::{critical_exponent_l2, TimeSequence};

fn main() -> schromax::Result<()> {
    let cases = [
        ("1/m", TimeSequence::power(1.0)?),
        ("2^-m", TimeSequence::geometric(0.5)?),
        ("1/log m", TimeSequence::logarithmic()?),
    ];
    for (label, seq) in &cases {
        for r in [0.5, 1.0, 2.0] {
            let row = classify(label, seq, r, 16, 4096)?;
            println!(
                "{label:<8} r = {r:<3} weak {:>12.4} stable {:<5}  partial sum {:>10.4} divergent {}",
                row.weak_constant, row.weak_stable, row.partial_sum, row.divergent
            );
        }
    }
    println!("critical r for a = 2, s = 1/4: {}", critical_exponent_l2(2.0, 0.25)?);
    let reports = sequence_scan(&[4, 5, 6, 7], &[0, 1], 2.0, 0.5, &cases[0].1)?;
    let fit = scaling_fit(&reports, BoundModel::Sobolev { s: 0.5 })?;
    println!("t_m = 1/m on annuli: normalized slope against λ^(1/2) = {:.3}", fit.normalized_slope);
    Ok(())
}
