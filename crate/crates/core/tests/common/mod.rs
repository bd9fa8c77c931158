#![allow(dead_code)]

use minres_core::{PressureModel, ProblemSpec};

pub const FRONT: &str = "1/(1+u^2)+0.5";
pub const REAR: &str = "0.5/(1+u^2)-0.5";

/// The example front/rear pair with non-parallel flux.
pub fn pair(dim: u32, radius: f64, height: f64) -> ProblemSpec {
    ProblemSpec::new(
        dim,
        radius,
        height,
        PressureModel::parse_law(FRONT).unwrap(),
        PressureModel::parse_law(REAR).unwrap(),
    )
    .unwrap()
}

/// Newton's law in front, nothing behind.
pub fn parallel(dim: u32, radius: f64, height: f64) -> ProblemSpec {
    ProblemSpec::new(
        dim,
        radius,
        height,
        PressureModel::newton(1.0, 0.0).unwrap(),
        PressureModel::zero(),
    )
    .unwrap()
}

/// Twelve instances: d ∈ {2, 3, 4}, parallel and non-parallel flux, with the
/// aspect ratio below and above the relevant threshold (`u₊⁰` for parallel
/// flux, `u*` for planar pairs, `h*` for spatial pairs).
pub fn matrix() -> Vec<(&'static str, ProblemSpec)> {
    vec![
        ("d2 pair h<u0", pair(2, 2.0, 1.0)),
        ("d2 pair h>u*+u0-", pair(2, 2.0, 6.0)),
        ("d2 parallel h<u0", parallel(2, 1.0, 0.5)),
        ("d2 parallel h>u0", parallel(2, 1.0, 3.0)),
        ("d3 pair h<h*", pair(3, 1.0, 0.5)),
        ("d3 pair h>h*", pair(3, 1.0, 2.0)),
        ("d3 parallel small", parallel(3, 1.0, 0.3)),
        ("d3 parallel U=2", parallel(3, 1.0, 1.0845482255552044)),
        ("d4 pair h<h*", pair(4, 1.0, 0.3)),
        ("d4 pair h>h*", pair(4, 1.0, 2.0)),
        ("d4 parallel small", parallel(4, 1.0, 0.3)),
        ("d4 parallel large", parallel(4, 1.0, 1.0)),
    ]
}
