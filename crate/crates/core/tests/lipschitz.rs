use multifrac::geometry::{Ball, BallFamily};
use multifrac::lipschitz::{ball_average, oscillation, seminorm_estimate, weighted_lipschitz_quotient, BallQuadrature};
use multifrac::weights::WeightSpec;
use proptest::prelude::*;

fn rule() -> BallQuadrature {
    BallQuadrature::default().with_singular_points(vec![0.0])
}

/// `int_{-R}^{R} | |x|^d - avg |` with `avg = R^d / (1 + d)`, split at the
/// crossing `x0 = avg^{1/d}`.
fn power_oscillation(d: f64, r: f64) -> f64 {
    let avg = r.powf(d) / (1.0 + d);
    let x0 = avg.powf(1.0 / d);
    let prim = |x: f64| x.powf(1.0 + d) / (1.0 + d);
    2.0 * ((avg * x0 - prim(x0)) + (prim(r) - prim(x0) - avg * (r - x0)))
}

#[test]
fn oscillation_examples() {
    let unit = Ball::interval(0.0, 1.0);
    let cfg = rule();
    assert_eq!(oscillation(&|_: &[f64]| 3.0, &unit, &cfg), 0.0);
    assert!((oscillation(&|x: &[f64]| x[0], &unit, &cfg) - 1.0).abs() < 1e-12);
    let step = |x: &[f64]| if (0.0..=1.0).contains(&x[0]) { 1.0 } else { 0.0 };
    assert!((oscillation(&step, &unit, &cfg) - 1.0).abs() < 1e-12);
}

#[test]
fn quotient_examples() {
    let unit = Ball::interval(0.0, 1.0);
    let q = weighted_lipschitz_quotient(&|x: &[f64]| x[0], &WeightSpec::constant(1.0), 0.0, &unit, &rule());
    assert!((q - 0.5).abs() < 1e-12);
    // a vanishing oscillation beats an unbounded weight
    let q = weighted_lipschitz_quotient(&|_: &[f64]| 1.0, &WeightSpec::power(-0.5), 0.3, &unit, &rule());
    assert_eq!(q, 0.0);
}

#[test]
fn power_oscillation_matches_closed_form() {
    for d in [0.2, 0.3, 0.5, 0.8] {
        for r in [1e-3, 0.37, 1.0, 50.0, 1e3] {
            let got = oscillation(&|x: &[f64]| x[0].abs().powf(d), &Ball::interval(0.0, r), &rule());
            let exact = power_oscillation(d, r);
            assert!((got - exact).abs() <= 1e-9 * exact, "d = {d}, R = {r}: {got} vs {exact}");
        }
    }
}

#[test]
fn lipschitz_power_has_radius_free_quotient() {
    let d = 0.3;
    let f = |x: &[f64]| x[0].abs().powf(d);
    let radii: Vec<f64> = (-3..=3).map(|k| 10f64.powi(k)).collect();
    let fam = BallFamily::centered(1, &radii).unwrap();
    let s = seminorm_estimate(&f, &WeightSpec::constant(1.0), d, &fam, &rule()).unwrap();
    let exact = 2f64.powf(-1.0 - d) * power_oscillation(d, 1.0);
    for row in &s.profile {
        assert!((row.value - exact).abs() <= 1e-9 * exact, "R = {}: {}", row.radius, row.value);
    }
}

#[test]
fn seminorm_of_linear_function() {
    let radii: Vec<f64> = (-2..=2).map(|k| 10f64.powi(k)).collect();
    let fam = BallFamily::centered(1, &radii).unwrap();
    let f = |x: &[f64]| x[0];
    let flat = seminorm_estimate(&f, &WeightSpec::constant(1.0), 1.0, &fam, &rule()).unwrap();
    for row in &flat.profile {
        assert!((row.value - 0.25).abs() < 1e-12);
    }
    let growing = seminorm_estimate(&f, &WeightSpec::constant(1.0), 0.0, &fam, &rule()).unwrap();
    for row in &growing.profile {
        assert!((row.value - row.radius / 2.0).abs() <= 1e-12 * row.radius);
    }
    assert!((growing.sup - 50.0).abs() < 1e-9);
    assert_eq!(growing.argmax.radius, 100.0);
    let zero = seminorm_estimate(&|_: &[f64]| -2.0, &WeightSpec::constant(1.0), 0.0, &fam, &rule()).unwrap();
    assert_eq!(zero.sup, 0.0);
}

#[test]
fn two_dimensional_average_of_radial_power() {
    // avg over the unit disc of |x|^a is 2 / (a + 2)
    let disc = Ball::new(vec![0.0, 0.0], 1.0).unwrap();
    for a in [0.5, 1.0, 2.0] {
        let got = ball_average(&|x: &[f64]| (x[0] * x[0] + x[1] * x[1]).powf(a / 2.0), &disc, &rule());
        assert!((got - 2.0 / (a + 2.0)).abs() < 1e-10, "a = {a}: {got}");
    }
}

proptest! {
    #[test]
    fn oscillation_ignores_added_constants(c in -50.0f64..50.0, center in -3.0f64..3.0, r in 0.01f64..5.0) {
        let ball = Ball::interval(center, r);
        let f = |x: &[f64]| (2.0 * x[0]).sin() + x[0] * x[0];
        let g = |x: &[f64]| f(x) + c;
        let a = oscillation(&f, &ball, &rule());
        let b = oscillation(&g, &ball, &rule());
        prop_assert!((a - b).abs() <= 1e-9 * a.max(1e-12));
    }

    #[test]
    fn quotient_is_linear_in_the_weight(lambda in 0.01f64..100.0, center in -3.0f64..3.0, r in 0.01f64..5.0, dt in -0.5f64..1.0) {
        let ball = Ball::interval(center, r);
        let f = |x: &[f64]| x[0].abs().powf(0.4);
        let w = WeightSpec::power(0.3);
        let scaled = WeightSpec::Composite {
            factors: vec![
                multifrac::weights::Factor { weight: w.clone(), power: 1.0 },
                multifrac::weights::Factor { weight: WeightSpec::constant(lambda), power: 1.0 },
            ],
        };
        let a = weighted_lipschitz_quotient(&f, &w, dt, &ball, &rule());
        let b = weighted_lipschitz_quotient(&f, &scaled, dt, &ball, &rule());
        prop_assert!((b - lambda * a).abs() <= 1e-12 * b.abs().max(1e-300));
    }
}
