//! Shared problem instances for the benchmarks.

use minres_core::{PressureModel, ProblemSpec};

/// The planar example pair: `1/(1+u²) + 0.5` in front, `0.5/(1+u²) - 0.5` behind.
pub fn figure_pair(dim: u32, radius: f64, height: f64) -> ProblemSpec {
    ProblemSpec::new(
        dim,
        radius,
        height,
        PressureModel::parse_law("1/(1+u^2)+0.5").expect("valid law"),
        PressureModel::parse_law("0.5/(1+u^2)-0.5").expect("valid law"),
    )
    .expect("valid spec")
}

/// Newton's law with parallel flux.
pub fn newton_parallel(dim: u32, radius: f64, height: f64) -> ProblemSpec {
    ProblemSpec::new(
        dim,
        radius,
        height,
        PressureModel::newton(1.0, 0.0).expect("valid law"),
        PressureModel::zero(),
    )
    .expect("valid spec")
}
