//! Maximal ratios over a unit time window and their normalized fits.

use schromax::experiments::window_scan;
use schromax::maximal::{scaling_fit, BoundModel, TimeWindow};

fn main() -> schromax::Result<()> {
    let reports = window_scan(&[4, 5, 6, 7], &[0, 1], 2.0, TimeWindow::new(0.0, 1.0)?, std::f64::consts::PI)?;
    for r in &reports {
        println!("λ = {:<4} seed {} ratio {:.4}", r.lambda, r.seed, r.ratio);
    }
    for (label, model) in [("half", BoundModel::window_half(2.0)), ("quarter", BoundModel::window_quarter(2.0))] {
        let fit = scaling_fit(&reports, model)?;
        println!("{label:<8} raw slope {:.3}  normalized slope {:.3}  bounded {}", fit.slope, fit.normalized_slope, fit.bounded);
    }
    Ok(())
}
