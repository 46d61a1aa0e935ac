//! Maximal ratios over a ball times a short window, fitted against the ball-window bound.

use schromax::experiments::ball_window_scan;
use schromax::maximal::{scaling_fit, BoundModel, TimeWindow};

fn main() -> schromax::Result<()> {
    let reports = ball_window_scan(&[4, 5, 6, 7], &[0, 1], 2.0, TimeWindow::new(0.0, 0.25)?, 0.1)?;
    for r in &reports {
        println!("λ = {:<4} seed {} ratio {:.4}", r.lambda, r.seed, r.ratio);
    }
    let fit = scaling_fit(&reports, BoundModel::BallWindow)?;
    println!("normalized slope {:.3}", fit.normalized_slope);
    Ok(())
}
