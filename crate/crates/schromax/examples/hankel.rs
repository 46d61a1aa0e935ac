//! Radial evolution by the Hankel operator, compared with a planar FFT evolution.

use schromax::experiments::two_route_check;
use schromax::radial::{hankel_propagate, RadialGrid, RadialProfile};
use schromax::special::BesselOrder;
use schromax::Complex64;

fn main() -> schromax::Result<()> {
    let f1 = RadialProfile::from_fn(RadialGrid::uniform(1.0 / 16.0, 128)?, |s| Complex64::new((-(s - 4.0).powi(2)).exp(), 0.0));
    let out = RadialGrid::gauss_panels(30.0, 120, 12)?;
    for two_nu in [-1, 0, 1, 2] {
        let g = hankel_propagate(&f1, 0.05, 2.0, BesselOrder::new(two_nu)?, Some(&out))?;
        println!("ν = {:<4} ‖S̃_t f₁‖/‖f₁‖ = {:.10}", two_nu as f64 / 2.0, g.norm() / f1.norm());
    }
    let check = two_route_check(0.1, 2.0, 1.0, 10.0)?;
    println!("isometry error {:.2e}, Hankel vs planar FFT {:.2e}", check.isometry_error, check.relative_error);
    for row in check.rows.iter().step_by(16) {
        println!("r = {:<8.4} hankel {:.6e} planar {:.6e}", row.radius, row.hankel, row.oracle);
    }
    Ok(())
}
