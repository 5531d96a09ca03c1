use std::f64::consts::{PI, TAU};

use proptest::prelude::*;

use lattice_exciton::damping::{dark_point, orientation_bracket, BracketCertificate};
use lattice_exciton::DipoleOrientation;

fn rel(a: f64, b: f64) -> f64 {
    let s = a.abs().max(b.abs());
    if s == 0.0 {
        0.0
    } else {
        (a - b).abs() / s
    }
}

// Points a hair away from the dark point, where the expanded terms cancel to
// many digits.
#[test]
fn forms_agree_next_to_dark_points() {
    for i in 1..40 {
        let theta = PI * i as f64 / 40.0;
        for phi in [0.0, 1e-4, 1e-3, PI - 1e-3, PI] {
            let d = DipoleOrientation::new(1.0, theta, phi);
            let Some(x0) = dark_point(&d) else { continue };
            for dx in [-1e-3, -1e-5, 1e-7, 1e-5, 1e-3] {
                let x = (x0 + dx).clamp(0.0, 1.0 - 1e-12);
                let a = orientation_bracket(&d, x);
                let b = BracketCertificate::new(&d, x).value();
                assert!(rel(a, b) <= 1e-12, "theta {theta} phi {phi} x {x}: {a} vs {b}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20_000))]

    #[test]
    fn forms_agree(theta in 0.0..PI, phi in 0.0..TAU, x in 0.0f64..1.0) {
        let d = DipoleOrientation::new(1.0, theta, phi);
        let a = orientation_bracket(&d, x);
        let b = BracketCertificate::new(&d, x).value();
        prop_assert!(rel(a, b) <= 1e-12, "{} vs {}", a, b);
        prop_assert!(b >= 0.0);
    }
}
