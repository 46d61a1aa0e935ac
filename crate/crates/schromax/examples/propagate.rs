//! Evolve a random band-limited function and check that the norm is conserved.

use schromax::maximal::{maximal_over_window, TimeWindow};
use schromax::spectral::{inverse_transform, make_bandlimited_random, propagate, BandShape, GridSpec};

fn main() -> schromax::Result<()> {
    let grid = GridSpec::new(512, std::f64::consts::PI)?;
    let f = make_bandlimited_random(64.0, BandShape::Ball, 7, grid)?;
    for t in [0.0, 0.01, 0.1, 1.0] {
        let g = inverse_transform(&propagate(&f, t, 2.0)?);
        let peak = g.samples.iter().map(|z| z.norm()).fold(0.0, f64::max);
        println!("t = {t:<5} ‖S_t f‖ = {:.15}  max |S_t f| = {peak:.4}", g.l2_norm());
    }
    let sup = maximal_over_window(&f, &TimeWindow::new(0.0, 1.0)?, 2.0)?;
    println!("‖sup_t |S_t f|‖ over [0, 1] = {:.4} ({} time samples)", sup.l2_norm(), sup.samples);
    Ok(())
}
