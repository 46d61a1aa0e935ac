//! Remainder between the radial and line evolutions, against its Schur bound.

use schromax::experiments::BumpSum;
use schromax::radial::remainder_report;
use schromax::special::{remainder_kernel, BesselOrder};

fn main() -> schromax::Result<()> {
    let f1 = BumpSum::random(3).sample(1.0 / 16.0, 160)?;
    let times: Vec<f64> = (0..=32).map(|i| i as f64 / 32.0).collect();
    for two_nu in [-1, 0, 1, 2, 3] {
        let nu = BesselOrder::new(two_nu)?;
        let rep = remainder_report(&f1, nu, &times, 2.0)?;
        println!(
            "ν = {:<4} ‖sup|R|‖ = {:.4e}  A_ν‖f₁‖ = {:.4e}  K_ν(1) = {:+.4e}",
            rep.nu,
            rep.sup_norm,
            rep.schur_constant * rep.profile_norm,
            remainder_kernel(nu, 1.0)?
        );
    }
    Ok(())
}
