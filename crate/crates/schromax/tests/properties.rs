use proptest::prelude::*;

use schromax::counterexample::{derive_scales, growth_quantity, rho_direct, BlowupParams};
use schromax::experiments::BumpSum;
use schromax::maximal::maximal_over_points;
use schromax::radial::{even_odd_split, hankel_propagate, RadialGrid};
use schromax::sequences::{weak_lr_constant, TimeSequence};
use schromax::special::{bessel_j, BesselOrder};
use schromax::spectral::{inverse_transform, make_bandlimited_random, propagate, BandShape, GridSpec};

fn small_grid() -> GridSpec {
    GridSpec::new(128, 8.0).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn propagation_is_unitary(seed in 0u64..10_000, t in 0.0f64..5.0, a in 0.3f64..4.0) {
        let f = make_bandlimited_random(20.0, BandShape::Ball, seed, small_grid()).unwrap();
        let g = propagate(&f, t, a).unwrap();
        prop_assert!((g.l2_norm() / f.l2_norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn group_law(seed in 0u64..10_000, s in 0.0f64..2.0, t in 0.0f64..2.0, a in 0.3f64..4.0) {
        let f = make_bandlimited_random(20.0, BandShape::Annulus, seed, small_grid()).unwrap();
        let one = propagate(&f, s + t, a).unwrap();
        let two = propagate(&propagate(&f, s, a).unwrap(), t, a).unwrap();
        let err = one.coefficients.iter().zip(&two.coefficients).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        let scale = one.coefficients.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let phase = (s + t) * 20f64.powf(a);
        prop_assert!(err < 1e-15 * (1.0 + phase) * scale);
    }

    #[test]
    fn maximal_dominates_initial_data(seed in 0u64..10_000, a in 0.5f64..3.0) {
        let f = make_bandlimited_random(16.0, BandShape::Ball, seed, small_grid()).unwrap();
        let sup = maximal_over_points(&f, &[0.0, 0.1, 0.3], a).unwrap();
        let x = inverse_transform(&f);
        for (v, z) in sup.values.iter().zip(&x.samples) {
            prop_assert!(*v >= z.norm() - 1e-12);
        }
    }

    #[test]
    fn even_odd_parts_are_orthogonal(seed in 0u64..10_000) {
        let f = make_bandlimited_random(20.0, BandShape::Ball, seed, small_grid()).unwrap();
        let (e, o) = even_odd_split(&f);
        let lhs = f.fourier_norm().powi(2);
        let rhs = e.fourier_norm().powi(2) + o.fourier_norm().powi(2);
        prop_assert!((lhs - rhs).abs() < 1e-12 * lhs);
    }

    #[test]
    fn hankel_isometry_on_bump_sums(seed in 0u64..10_000, two_nu in -1i32..6) {
        let f1 = BumpSum::random(seed).sample(1.0 / 16.0, 128).unwrap();
        let out = RadialGrid::gauss_panels(30.0, 120, 12).unwrap();
        let g = hankel_propagate(&f1, 0.0, 2.0, BesselOrder::new(two_nu).unwrap(), Some(&out)).unwrap();
        prop_assert!((g.norm() / f1.norm() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn bessel_three_term_recurrence(two_nu in 1i32..12, r in 0.2f64..60.0) {
        let nu = BesselOrder::new(two_nu).unwrap();
        let lo = bessel_j(BesselOrder::new(two_nu - 2).unwrap(), r).unwrap();
        let mid = bessel_j(nu, r).unwrap();
        let hi = bessel_j(BesselOrder::new(two_nu + 2).unwrap(), r).unwrap();
        prop_assert!((lo + hi - 2.0 * nu.nu() / r * mid).abs() < 1e-9);
    }

    #[test]
    fn counts_are_monotone_and_exact(alpha in 0.3f64..3.0, b1 in 1e-3f64..0.9, b2 in 1e-3f64..0.9) {
        let seq = TimeSequence::power(alpha).unwrap();
        let (lo, hi) = if b1 < b2 { (b1, b2) } else { (b2, b1) };
        prop_assert!(seq.count_above(lo) >= seq.count_above(hi));
        let brute = (1..).take_while(|&m| seq.term(m) > hi).count() as f64;
        if brute < 1e6 {
            prop_assert_eq!(seq.count_above(hi), brute);
        }
    }

    #[test]
    fn weak_constant_grows_with_grid(r in 0.3f64..3.0, depth in 2u32..14) {
        let seq = TimeSequence::geometric(0.5).unwrap();
        let coarse = weak_lr_constant(&seq, r, &schromax::sequences::dyadic_grid(depth)).unwrap();
        let fine = weak_lr_constant(&seq, r, &schromax::sequences::dyadic_grid(depth + 1)).unwrap();
        prop_assert!(fine >= coarse);
    }

    #[test]
    fn blowup_scales_agree(a in 1.2f64..4.0, s_frac in 0.05f64..0.95, m_exp in 0i32..12, b_exp in 1i32..12) {
        let s = s_frac * a / 4.0;
        let p = BlowupParams::new(a, s, 2, 0.01).unwrap();
        let (m, b) = (2f64.powi(m_exp), 2f64.powi(-b_exp));
        let (lambda, rho) = derive_scales(m, b, &p).unwrap();
        prop_assert!((rho / rho_direct(m, b, &p) - 1.0).abs() < 1e-10);
        prop_assert!((rho * lambda.powf(a - 1.0) * b / growth_quantity(m, b, &p) - 1.0).abs() < 1e-10);
        prop_assert!((lambda.powf(a / 2.0) / m - b.powf(-a / (2.0 * (a - 4.0 * s)))).abs() < 1e-9 * lambda.powf(a / 2.0) / m);
    }
}
