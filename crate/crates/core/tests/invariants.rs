//! Property-based invariants of the closed-form eigensystem.

use proptest::prelude::*;
use std::f64::consts::PI;

use ctqw_core::lattice::DefectLineParams;
use ctqw_core::spectral::{bound_states, f_of_k, lambda_of_k, y_of_lambda, MagnitudeClass};

fn params(alpha: f64, beta: f64) -> DefectLineParams {
    DefectLineParams::new(2.0, 1.0, alpha, beta, 0).unwrap()
}

proptest! {
    /// |f(lambda_k)| = 1 for all real defect strengths with a connected
    /// defect node.
    #[test]
    fn f_of_k_has_unit_modulus(
        k in 1e-6..(PI - 1e-6),
        alpha in -10.0..10.0f64,
        beta in -5.0..5.0f64,
    ) {
        prop_assume!((1.0 + beta).abs() > 1e-6);
        let f = f_of_k(k, &params(alpha, beta));
        prop_assert!((f.norm() - 1.0).abs() <= 1e-12);
    }

    /// In-band dispersion roots sit on the unit circle and satisfy
    /// y + 1/y = (eps - lambda)/gamma.
    #[test]
    fn dispersion_root_on_circle(k in 1e-4..(PI - 1e-4), epsilon in -3.0..3.0f64) {
        let p = DefectLineParams::new(epsilon, 1.0, 0.0, 0.0, 0).unwrap();
        let lambda = lambda_of_k(k, &p).unwrap();
        let y = y_of_lambda(lambda, &p);
        prop_assert!((y.value.norm() - 1.0).abs() <= 1e-10);
        prop_assert_eq!(y.magnitude_class, MagnitudeClass::OnCircle);
        let residual = y.value + 1.0 / y.value
            - num_complex::Complex64::new((epsilon - lambda) / 1.0, 0.0);
        prop_assert!(residual.norm() <= 1e-12);
    }

    /// Out-of-band roots split off the circle: |y| > 1 below the band,
    /// |y| < 1 above it (gamma > 0).
    #[test]
    fn dispersion_root_splits_off_circle(gap in 1e-3..8.0f64) {
        let p = params(0.0, 0.0);
        let above = y_of_lambda(4.0 + gap, &p);
        prop_assert_eq!(above.magnitude_class, MagnitudeClass::Inside);
        let below = y_of_lambda(0.0 - gap, &p);
        prop_assert_eq!(below.magnitude_class, MagnitudeClass::Outside);
    }

    /// A lone position defect binds exactly one state, above the band for
    /// alpha > 0 and below it for alpha < 0.
    #[test]
    fn position_defect_sign_law(alpha in 0.05..8.0f64) {
        for signed in [alpha, -alpha] {
            let p = params(signed, 0.0);
            let states = bound_states(&p).unwrap();
            prop_assert_eq!(states.len(), 1);
            if signed > 0.0 {
                prop_assert!(states[0].lambda() > 4.0);
            } else {
                prop_assert!(states[0].lambda() < 0.0);
            }
        }
    }

    /// Validated bound states always decay: |base| < 1, unit norm within
    /// tolerance on their decay scale, eigenvalue outside the band.
    #[test]
    fn bound_states_decay_and_normalize(
        alpha in -6.0..6.0f64,
        beta in -4.0..4.0f64,
    ) {
        prop_assume!((1.0 + beta).abs() > 1e-3);
        let p = params(alpha, beta);
        let Ok(states) = bound_states(&p) else {
            return Ok(());
        };
        prop_assert!(states.len() <= 2);
        for b in &states {
            prop_assert!(b.decay_base().abs() < 1.0);
            prop_assert!(b.lambda() < 0.0 || b.lambda() > 4.0);
            // norm over an adaptive window
            let reach = (25.0 / -b.decay_base().abs().ln()).ceil() as i64 + 2;
            let norm_sq: f64 =
                (-reach..=reach).map(|j| b.amplitude(j, &p).powi(2)).sum();
            prop_assert!((norm_sq - 1.0).abs() <= 1e-10);
        }
    }
}
