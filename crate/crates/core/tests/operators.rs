use multifrac::operators::{
    eval_i_alpha, eval_product_commutator, eval_sum_commutator, eval_t_alpha, pointwise_domination_check, KernelForm,
    KernelSpec, ProductMode, QuadratureConfig, SumMode, SymbolForm, SymbolSpec, TestFunction,
};
use proptest::prelude::*;

fn unit_box() -> TestFunction {
    TestFunction::boxed(vec![[0.0, 1.0]], 1.0).unwrap()
}

fn midpoint(cells: usize) -> QuadratureConfig {
    QuadratureConfig { base_cells: cells, outer_cells: 0, order: Some(1), ..QuadratureConfig::default() }
}

#[test]
fn single_input_closed_form_at_origin() {
    let v = eval_i_alpha(&[unit_box()], 0.5, &[0.0], &QuadratureConfig::default()).unwrap();
    assert!((v - 2.0).abs() < 1e-10, "{v}");
}

#[test]
fn bilinear_closed_form_at_origin() {
    let f = [unit_box(), unit_box()];
    let v = eval_i_alpha(&f, 1.0, &[0.0], &QuadratureConfig::default()).unwrap();
    let want = 2.0 * 2f64.ln();
    assert!((v - want).abs() < 1e-10 * want, "{v}");
}

#[test]
fn bilinear_closed_form_off_origin() {
    // int_0^1 int_0^1 (|x-a| + |x-b|)^{-1} at x = 1/2 by 1-D reduction:
    // the four quadrant integrals each equal int_0^h int_0^h (s+t)^{-1} = 2h ln 2
    let f = [unit_box(), unit_box()];
    let v = eval_i_alpha(&f, 1.0, &[0.5], &QuadratureConfig::default()).unwrap();
    let want = 4.0 * 2.0 * 0.5 * 2f64.ln();
    assert!((v - want).abs() < 1e-8 * want, "{v} vs {want}");
}

#[test]
fn midpoint_refinement_converges_with_order_at_least_one() {
    for (f, alpha, exact) in [
        (vec![unit_box()], 0.5, 2.0),
        (vec![unit_box(), unit_box()], 1.0, 2.0 * 2f64.ln()),
    ] {
        let vals: Vec<f64> =
            [1, 2, 4, 8].iter().map(|&c| eval_i_alpha(&f, alpha, &[0.0], &midpoint(c)).unwrap()).collect();
        let diffs: Vec<f64> = vals.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
        for w in diffs.windows(2) {
            assert!(w[1] < w[0], "changes not decreasing: {diffs:?}");
            assert!((w[0] / w[1]).log2() >= 1.0, "observed order below one: {diffs:?}");
        }
        let err = (vals[3] - exact).abs() / exact;
        assert!(err < 1e-2, "midpoint error {err}");
    }
}

#[test]
fn zero_input_gives_zero() {
    let f = [unit_box(), unit_box().scaled(0.0)];
    assert_eq!(eval_i_alpha(&f, 1.0, &[0.3], &QuadratureConfig::default()).unwrap(), 0.0);
}

#[test]
fn scaled_kernel_halves_value() {
    let f = [unit_box(), unit_box()];
    let cfg = QuadratureConfig::default();
    let full = eval_t_alpha(&KernelSpec::standard(1.0), &f, &[0.0], &cfg).unwrap();
    let half = eval_t_alpha(&KernelSpec::with_form(1.0, KernelForm::Scaled { factor: 0.5 }), &f, &[0.0], &cfg).unwrap();
    assert!((half - 0.5 * full).abs() < 1e-14 * full);
}

#[test]
fn linear_symbol_commutator_at_origin() {
    // -int_0^1 y * y^{-1/2} dy = -2/3
    let b = [SymbolSpec { form: SymbolForm::Polynomial { coefs: vec![0.0, 1.0] }, delta: 1.0, constant: 1.0 }];
    let k = KernelSpec::standard(0.5);
    let cfg = QuadratureConfig::default();
    for mode in [SumMode::Direct, SumMode::Iterative] {
        let v = eval_sum_commutator(&b, &k, &[unit_box()], &[0.0], &cfg, mode).unwrap();
        assert!((v + 2.0 / 3.0).abs() < 1e-10, "{mode:?}: {v}");
    }
    for mode in [ProductMode::Direct, ProductMode::Expansion, ProductMode::Iterative] {
        let v = eval_product_commutator(&b, &k, &[unit_box()], &[0.0], &cfg, mode).unwrap();
        assert!((v + 2.0 / 3.0).abs() < 1e-10, "{mode:?}: {v}");
    }
}

#[test]
fn constant_slot_symbol_kills_product_commutator() {
    let b = [SymbolSpec::power(1, 0.3), SymbolSpec::constant(2.0)];
    let f = [unit_box(), TestFunction::bump(vec![0.2], 0.6, 1.0).unwrap()];
    let k = KernelSpec::standard(1.0);
    let cfg = QuadratureConfig::default();
    for mode in [ProductMode::Direct, ProductMode::Expansion, ProductMode::Iterative] {
        let v = eval_product_commutator(&b, &k, &f, &[0.4], &cfg, mode).unwrap();
        let scale = eval_i_alpha(&f, 1.0, &[0.4], &cfg).unwrap();
        assert!(v.abs() < 1e-12 * scale, "{mode:?}: {v}");
    }
}

#[test]
fn product_bump_symbols_agree_across_modes() {
    let b = [
        SymbolSpec { form: SymbolForm::Polynomial { coefs: vec![0.0, 1.0] }, delta: 1.0, constant: 1.0 },
        SymbolSpec { form: SymbolForm::Bump { center: vec![0.0], radius: 1.5, height: 2.0 }, delta: 1.0, constant: 1.0 },
    ];
    let f = [TestFunction::bump(vec![0.0], 1.0, 1.0).unwrap(), TestFunction::bump(vec![0.3], 0.8, 1.0).unwrap()];
    let k = KernelSpec::standard(0.8);
    let cfg = QuadratureConfig::default();
    let x = [0.1];
    let d = eval_product_commutator(&b, &k, &f, &x, &cfg, ProductMode::Direct).unwrap();
    let e = eval_product_commutator(&b, &k, &f, &x, &cfg, ProductMode::Expansion).unwrap();
    let i = eval_product_commutator(&b, &k, &f, &x, &cfg, ProductMode::Iterative).unwrap();
    assert!((d - e).abs() <= 1e-6 * d.abs() && (d - i).abs() <= 1e-6 * d.abs(), "{d} {e} {i}");
}

#[test]
fn single_input_commutators_coincide() {
    let b = [SymbolSpec::power(1, 0.4)];
    let f = [TestFunction::bump(vec![0.1], 0.7, 1.5).unwrap()];
    let k = KernelSpec::standard(0.6);
    let cfg = QuadratureConfig::default();
    let s = eval_sum_commutator(&b, &k, &f, &[0.25], &cfg, SumMode::Direct).unwrap();
    let p = eval_product_commutator(&b, &k, &f, &[0.25], &cfg, ProductMode::Direct).unwrap();
    assert_eq!(s, p);
}

#[test]
fn modulated_kernel_is_dominated() {
    let k = KernelSpec::with_form(0.8, KernelForm::Modulated);
    let f = [unit_box(), TestFunction::bump(vec![0.5], 0.5, -1.0).unwrap()];
    let pts: Vec<Vec<f64>> = [-0.5, 0.0, 0.3, 0.9, 1.7].iter().map(|&x| vec![x]).collect();
    let r = pointwise_domination_check(&k, &f, &pts, &QuadratureConfig::default()).unwrap();
    assert!(r.pass, "{r:?}");
    let r = pointwise_domination_check(&KernelSpec::standard(0.8), &f, &pts, &QuadratureConfig::default()).unwrap();
    assert!((r.max_ratio - 1.0).abs() < 1e-12);
}

#[test]
fn two_dimensional_single_input() {
    // I_1 of the unit-square indicator at a corner: int (y1^2+y2^2)^{-1/2}
    // over [0,1]^2 = 2 asinh(1)
    let f = [TestFunction::boxed(vec![[0.0, 1.0], [0.0, 1.0]], 1.0).unwrap()];
    let v = eval_i_alpha(&f, 1.0, &[0.0, 0.0], &QuadratureConfig::default()).unwrap();
    let want = 2.0 * 1f64.asinh();
    assert!((v - want).abs() < 1e-8 * want, "{v} vs {want}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn multilinear_in_each_slot(s in -3.0f64..3.0, t in -3.0f64..3.0, slot in 0usize..2, x in -0.5f64..1.5) {
        let cfg = QuadratureConfig::default();
        let base = [unit_box(), TestFunction::bump(vec![0.4], 0.6, 1.0).unwrap()];
        let mut a = base.clone();
        a[slot] = base[slot].scaled(s);
        let fa = eval_i_alpha(&a, 1.0, &[x], &cfg).unwrap();
        let f0 = eval_i_alpha(&base, 1.0, &[x], &cfg).unwrap();
        prop_assert!((fa - s * f0).abs() <= 1e-12 * (1.0 + f0.abs() * s.abs()));
        // additivity: chi_[0,1] = chi_[0,c] + chi_[c,1] on separate node sets
        let c = 0.25 + 0.5 * (t + 3.0) / 6.0;
        let mut left = base.clone();
        left[slot] = TestFunction::boxed(vec![[0.0, c]], 1.0).unwrap();
        let mut right = base.clone();
        right[slot] = TestFunction::boxed(vec![[c, 1.0]], 1.0).unwrap();
        let mut whole = base.clone();
        whole[slot] = unit_box();
        let split = eval_i_alpha(&left, 1.0, &[x], &cfg).unwrap() + eval_i_alpha(&right, 1.0, &[x], &cfg).unwrap();
        let joined = eval_i_alpha(&whole, 1.0, &[x], &cfg).unwrap();
        prop_assert!((split - joined).abs() <= 1e-5 * joined.abs(), "{} vs {}", split, joined);
    }
}
