//! Property tests for the numeric kernel invariants.

use isoperimetrix_core::numerics::{self, QuadratureConfig};
use isoperimetrix_core::orlicz::{self, OrliczFunction};
use proptest::prelude::*;

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // splitting an integral at an interior point changes nothing beyond
    // the configured tolerance
    #[test]
    fn integrate_is_additive(
        c0 in -2.0f64..2.0,
        c1 in -2.0f64..2.0,
        c2 in -2.0f64..2.0,
        omega in 0.5f64..4.0,
        split in 0.1f64..0.9,
    ) {
        let f = move |x: f64| c0 + c1 * x + c2 * (omega * x).sin();
        let whole = numerics::integrate(&f, 0.0, 1.0, &cfg()).unwrap();
        let left = numerics::integrate(&f, 0.0, split, &cfg()).unwrap();
        let right = numerics::integrate(&f, split, 1.0, &cfg()).unwrap();
        let gap = (left + right - whole).abs();
        prop_assert!(gap <= 4.0 * cfg().abs_tol + 1e-12, "additivity gap {gap}");
    }

    // inversion composed with the function is the identity on strictly
    // monotone cubics
    #[test]
    fn invert_recovers_monotone_cubics(
        a in 0.05f64..2.0,
        b in 0.0f64..2.0,
        c in -3.0f64..3.0,
        x0 in -1.5f64..1.5,
    ) {
        // f'(x) = 3a x^2 + b > 0, so f is strictly increasing
        let f = move |x: f64| a * x * x * x + b * x + 0.2 * x + c;
        let y = f(x0);
        let x = numerics::invert_monotone(&f, y, -2.0, 2.0).unwrap();
        prop_assert!((f(x) - y).abs() <= 1e-9 * (1.0 + y.abs()));
        prop_assert!((x - x0).abs() <= 1e-6, "x = {x} vs x0 = {x0}");
    }

    // the scan minimum never exceeds the value at any of its grid points
    #[test]
    fn inf_scan_below_grid_values(
        c0 in -1.0f64..1.0,
        omega in 0.5f64..9.0,
        phase in 0.0f64..6.0,
    ) {
        let f = move |t: f64| (omega * t + phase).sin() + c0 * t;
        let (_, v) = numerics::inf_scan(&f, 0.01, 1.0, 128).unwrap();
        let grid = numerics::log_grid(0.01, 1.0, 128);
        for &t in &grid {
            prop_assert!(v <= f(t) + 1e-12, "scan min {v} above f({t}) = {}", f(t));
        }
    }

    // the adjoint is an involution on class-N functions
    #[test]
    fn adjoint_involution(p in 0.6f64..5.0, t in 1e-4f64..1e4) {
        let n = OrliczFunction::power(p).unwrap();
        let back = n.adjoint().adjoint();
        let (a, b) = (n.eval(t), back.eval(t));
        prop_assert!((a - b).abs() <= 1e-8 * (1.0 + a.abs()));
    }

    // grid-specified class-N functions invert consistently
    #[test]
    fn grid_orlicz_inverse_round_trip(scale in 0.2f64..5.0, y in 0.05f64..20.0) {
        let knots: Vec<f64> = (1..=12).map(|i| i as f64 / 4.0).collect();
        let values: Vec<f64> = knots.iter().map(|t| scale * t * t).collect();
        let g = numerics::GridFunction::new(
            knots,
            values,
            numerics::Extrapolation::LinearTail,
        ).unwrap();
        let n = orlicz::OrliczFunction::from_grid(&g).unwrap();
        let t = n.inv(y);
        prop_assert!((n.eval(t) - y).abs() <= 1e-9 * (1.0 + y));
    }
}
