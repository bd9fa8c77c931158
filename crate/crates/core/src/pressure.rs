//! Pressure laws `p(u)` and the structural checks the solvers rely on.
//!
//! A law must be C¹ on `[0, ∞)` (i), have a finite limit at infinity (ii),
//! have `p'(0) = p'(∞) = 0` (iii), and `p'` must first strictly decrease and
//! then strictly increase, turning at some `ū > 0` (iv).

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exprlang::{self, Dual2, Expr};
use crate::numeric::{brent, geometric_grid, RootOptions};

pub const DEFAULT_U_MAX: f64 = 1e6;
pub const DEFAULT_VALIDATION_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub enum PressureSource {
    /// `scale / (1 + u²) + offset`
    Newton { scale: f64, offset: f64 },
    UserExpr(Arc<Expr>),
    /// `p ≡ 0`: the rear of a body in a parallel flux.
    Zero,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PressureModel {
    source: PressureSource,
}

impl PressureModel {
    pub fn newton(scale: f64, offset: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) || !offset.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "newton law needs scale > 0 and finite offset, got scale={scale}, offset={offset}"
            )));
        }
        Ok(Self {
            source: PressureSource::Newton { scale, offset },
        })
    }

    pub fn from_expr(e: Expr) -> Self {
        Self {
            source: PressureSource::UserExpr(Arc::new(e)),
        }
    }

    pub fn zero() -> Self {
        Self {
            source: PressureSource::Zero,
        }
    }

    /// Parses a law description: `zero`, `newton:<scale>,<offset>`, or an
    /// expression in `u`.
    pub fn parse_law(text: &str) -> Result<Self> {
        let t = text.trim();
        if t == "zero" {
            return Ok(Self::zero());
        }
        if let Some(rest) = t.strip_prefix("newton:") {
            let parts: Vec<&str> = rest.split(',').map(str::trim).collect();
            let bad = || {
                Error::InvalidParameter(format!(
                    "expected newton:<scale>,<offset>, got `{text}`"
                ))
            };
            if parts.len() != 2 {
                return Err(bad());
            }
            let scale: f64 = parts[0].parse().map_err(|_| bad())?;
            let offset: f64 = parts[1].parse().map_err(|_| bad())?;
            return Self::newton(scale, offset);
        }
        Ok(Self::from_expr(exprlang::parse(t)?))
    }

    pub fn source(&self) -> &PressureSource {
        &self.source
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.source, PressureSource::Zero)
    }

    /// `p`, `p'`, `p''` at `u`.
    pub fn eval(&self, u: f64) -> Result<Dual2> {
        match &self.source {
            PressureSource::Newton { scale, offset } => {
                let w = 1.0 + u * u;
                Ok(Dual2::new(
                    scale / w + offset,
                    -2.0 * scale * u / (w * w),
                    scale * (6.0 * u * u - 2.0) / (w * w * w),
                ))
            }
            PressureSource::UserExpr(e) => Ok(e.eval2(u)?),
            PressureSource::Zero => Ok(Dual2::constant(0.0)),
        }
    }

    pub fn p(&self, u: f64) -> Result<f64> {
        self.eval(u).map(|d| d.value)
    }

    pub fn dp(&self, u: f64) -> Result<f64> {
        self.eval(u).map(|d| d.d1)
    }

    pub fn d2p(&self, u: f64) -> Result<f64> {
        self.eval(u).map(|d| d.d2)
    }

    /// The law written in the expression language.
    pub fn to_expr(&self) -> Expr {
        match &self.source {
            PressureSource::Newton { scale, offset } => {
                exprlang::parse(&format!("{scale}/(1+u^2) + {offset}"))
                    .expect("newton law text always parses")
            }
            PressureSource::UserExpr(e) => (**e).clone(),
            PressureSource::Zero => Expr::Num(0.0),
        }
    }
}

impl fmt::Display for PressureModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.source {
            PressureSource::Newton { scale, offset } => write!(f, "newton:{scale},{offset}"),
            PressureSource::UserExpr(e) => write!(f, "{e}"),
            PressureSource::Zero => f.write_str("zero"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    Smoothness,
    Limit,
    FlatEnds,
    TurningPoint,
}

impl Condition {
    pub fn id(self) -> &'static str {
        match self {
            Condition::Smoothness => "i",
            Condition::Limit => "ii",
            Condition::FlatEnds => "iii",
            Condition::TurningPoint => "iv",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub condition: Condition,
    pub witness: f64,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    /// `p(u_max)`, the estimate of the limit at infinity.
    pub limit_at_infinity: f64,
    /// Location of the sign change of `p''`.
    pub u_bar_estimate: Option<f64>,
    pub violations: Vec<Violation>,
    pub passed: bool,
}

/// Checks conditions (i)-(iv) on a geometric grid over `(0, u_max]` with the
/// default tolerance.
pub fn validate(m: &PressureModel, u_max: f64, n_samples: usize) -> ValidationReport {
    validate_with_tolerance(m, u_max, n_samples, DEFAULT_VALIDATION_TOL)
}

/// As [`validate`] with base tolerance `tol`. With `s = max(1, |p(0)|)` the
/// thresholds are: `|p'| <= tol·s` at both ends, tail flattening
/// `|p(u_max) - p(u_max/2)| <= sqrt(tol)·s`, and a dead band of `1e-3·tol·s`
/// on `p''`. All grow with `tol`.
pub fn validate_with_tolerance(
    m: &PressureModel,
    u_max: f64,
    n_samples: usize,
    tol: f64,
) -> ValidationReport {
    let mut violations = Vec::new();
    let n = n_samples.max(64);
    let u_max = if u_max > 0.0 { u_max } else { DEFAULT_U_MAX };
    let lo = (u_max * 1e-12).min(1e-6);

    let mut push = |condition, witness, description: String| {
        violations.push(Violation {
            condition,
            witness,
            description,
        })
    };

    let at0 = match m.eval(0.0) {
        Ok(d) => d,
        Err(e) => {
            push(Condition::Smoothness, 0.0, e.to_string());
            return ValidationReport {
                limit_at_infinity: f64::NAN,
                u_bar_estimate: None,
                passed: false,
                violations,
            };
        }
    };
    let scale = at0.value.abs().max(1.0);

    let grid = geometric_grid(lo, u_max, n);
    let mut samples = Vec::with_capacity(n);
    for &u in &grid {
        match m.eval(u) {
            Ok(d) => samples.push((u, d)),
            Err(e) => {
                push(Condition::Smoothness, u, e.to_string());
                break;
            }
        }
    }
    if samples.len() < grid.len() {
        return ValidationReport {
            limit_at_infinity: f64::NAN,
            u_bar_estimate: None,
            passed: false,
            violations,
        };
    }

    let tail = samples[n - 1].1;
    let half = m.p(u_max / 2.0).unwrap_or(f64::NAN);
    let flattening = (tail.value - half).abs();
    if !(flattening <= tol.sqrt() * scale) {
        push(
            Condition::Limit,
            u_max,
            format!("p still varies by {flattening:e} between u_max/2 and u_max"),
        );
    }

    let slope_tol = tol * scale;
    if !(at0.d1.abs() <= slope_tol) {
        push(Condition::FlatEnds, 0.0, format!("p'(0) = {:e}", at0.d1));
    }
    if !(tail.d1.abs() <= slope_tol) {
        push(Condition::FlatEnds, u_max, format!("p'(u_max) = {:e}", tail.d1));
    }

    // (iv): signs of p'' must read (-)...(-)(+)...(+) outside the dead band.
    let band = 1e-3 * tol * scale;
    let mut last_neg: Option<f64> = None;
    let mut first_pos: Option<f64> = None;
    let mut pattern_ok = true;
    for &(u, d) in &samples {
        if d.d2 < -band {
            if first_pos.is_some() {
                push(
                    Condition::TurningPoint,
                    u,
                    "p' decreases again after increasing".into(),
                );
                pattern_ok = false;
                break;
            }
            last_neg = Some(u);
        } else if d.d2 > band {
            if last_neg.is_none() {
                push(
                    Condition::TurningPoint,
                    u,
                    "p' increases before it decreases".into(),
                );
                pattern_ok = false;
                break;
            }
            first_pos.get_or_insert(u);
        }
    }
    let mut u_bar_estimate = None;
    if pattern_ok {
        match (last_neg, first_pos) {
            (Some(a), Some(b)) => {
                u_bar_estimate = brent(|u| m.d2p(u), a, b, RootOptions::default()).ok();
            }
            _ => push(
                Condition::TurningPoint,
                0.0,
                "p' has no decreasing-then-increasing turning point".into(),
            ),
        }
    }

    ValidationReport {
        limit_at_infinity: tail.value,
        u_bar_estimate,
        passed: violations.is_empty(),
        violations,
    }
}
