//! Globally optimal convex bodies of revolution of minimal resistance in a
//! Newton-type particle flux, with separate front and rear pressure laws.
//!
//! A body of radius `T` and height `H` in dimension `d >= 2` is described by
//! two monotone convex branches `x₊(t)`, `x₋(t)` on `[0, T]` with
//! `x₊(T) + x₋(T) = H`. Each branch contributes `∫₀ᵀ p(x'(t)) d(t^{d-1})`.
//!
//! ```
//! use minres_core::{solve, CaseLabel, PressureModel, ProblemSpec, SolverConfig};
//!
//! let spec = ProblemSpec::new(
//!     2,
//!     2.0,
//!     1.0,
//!     PressureModel::parse_law("1/(1+u^2) + 0.5")?,
//!     PressureModel::parse_law("0.5/(1+u^2) - 0.5")?,
//! )?;
//! let sol = solve(&spec, &SolverConfig::default())?;
//! assert_eq!(sol.case_label, CaseLabel::FrontTrapezium);
//! assert!((sol.r_total - 2.5).abs() < 1e-9);
//! # Ok::<(), minres_core::Error>(())
//! ```

pub mod classical;
pub mod criticals;
pub mod error;
pub mod exprlang;
pub mod model;
pub mod numeric;
pub mod oracle;
pub mod planar;
pub mod pressure;
pub mod spatial;

pub use criticals::{critical_values, pair_criticals, CriticalValues, PairCriticals};
pub use error::{Error, Result};
pub use exprlang::{Dual2, Expr, ExprError};
pub use model::{
    ArcSample, BodySolution, Branch, CaseLabel, Profile, ProblemSpec, Segment, SolverConfig,
};
pub use pressure::{validate, PressureModel, ValidationReport};

/// Solves the full problem, dispatching on dimension.
pub fn solve(spec: &ProblemSpec, cfg: &SolverConfig) -> Result<BodySolution> {
    if spec.dim == 2 {
        planar::solve2d(spec, cfg)
    } else {
        spatial::solve_spatial(spec, cfg)
    }
}
