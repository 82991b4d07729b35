//! Fixtures shared by the benchmarks.

use multifrac::operators::{KernelSpec, SymbolSpec, TestFunction};
use multifrac::weights::construct_weights;
use multifrac::{ExponentVector, ParameterPoint, WeightVector};

/// Unit box on `[0, 1]`, copied into each of `m` slots.
pub fn unit_boxes(m: usize) -> Vec<TestFunction> {
    vec![TestFunction::boxed(vec![[0.0, 1.0]], 1.0).expect("valid box"); m]
}

/// Smooth bilinear commutator instance on the line.
pub fn bilinear_instance() -> (KernelSpec, Vec<SymbolSpec>, Vec<TestFunction>) {
    let inputs = vec![
        TestFunction::bump(vec![0.0], 1.0, 1.0).expect("valid bump"),
        TestFunction::bump(vec![0.2], 0.8, 1.0).expect("valid bump"),
    ];
    (KernelSpec::standard(0.8), vec![SymbolSpec::power(1, 0.3); 2], inputs)
}

/// Constructed case (e) weights at `beta = 0.9, delta = 0.3, dt = -0.2`,
/// `p = (2, 2)`.
pub fn case_e() -> (WeightVector, ExponentVector, ParameterPoint) {
    let point = ParameterPoint::new(1, 2, 0.9, 0.3, -0.2, 1.0).expect("valid point");
    let p = ExponentVector::uniform(2, 1.0).expect("valid exponents");
    let (pair, _) = construct_weights(&point, &p).expect("nontrivial point");
    (pair, p, point)
}
