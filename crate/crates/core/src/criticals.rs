//! Critical slopes of a pressure law and of a front/rear pair.
//!
//! For a single law, `u0` maximizes the gain ratio `(p(0) - p(u)) / u` and
//! `B` is that maximum. Slopes strictly between `0` and `u0` never appear in
//! an optimal profile; the relaxed law `p̄` replaces `p` on `[0, u0]` by the
//! chord `p(0) - B u`.

use crate::error::{Error, Result};
use crate::model::SolverConfig;
use crate::numeric::{brent, geometric_grid};
use crate::pressure::PressureModel;
use crate::spatial::GTable;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalValues {
    /// Turning point of `p'`.
    pub u_bar: f64,
    /// Maximizer of the gain ratio.
    pub u0: f64,
    /// Maximal gain ratio, equal to `-p'(u0)`.
    pub b: f64,
}

const SCAN_START: f64 = 1e-6;

/// Locates `ū`, `u0` and `B` for one law.
pub fn critical_values(m: &PressureModel, cfg: &SolverConfig) -> Result<CriticalValues> {
    if m.is_zero() {
        return Err(Error::DegenerateLaw("identically zero law has no critical slope".into()));
    }
    let p0 = m.p(0.0)?;
    let gain = |u: f64| -> Result<f64> { Ok((p0 - m.p(u)?) / u) };

    // factor-2 geometric scan
    let mut grid = vec![SCAN_START];
    while *grid.last().unwrap() < cfg.u_max {
        grid.push(grid.last().unwrap() * 2.0);
    }
    let values = grid.iter().map(|&u| gain(u)).collect::<Result<Vec<_>>>()?;
    let best = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !(best > 0.0) {
        return Err(Error::DegenerateLaw(format!(
            "(p(0) - p(u))/u never positive on [{SCAN_START}, {}]",
            cfg.u_max
        )));
    }
    let sep = 1e-12 * best;
    let peaks: Vec<usize> = (1..values.len() - 1)
        .filter(|&i| values[i] > values[i - 1] + sep && values[i] + sep >= values[i + 1])
        .collect();
    if peaks.len() != 1 {
        return Err(Error::NotUnimodal(format!(
            "gain ratio has {} separated local maxima on the scan",
            peaks.len()
        )));
    }
    let i = peaks[0];
    if values[i] < best - sep {
        return Err(Error::NotUnimodal("gain ratio maximum sits at the scan boundary".into()));
    }

    // Stationarity of q(u)/u: s(u) = -p'(u) u - q(u), positive before u0.
    let stationarity = |u: f64| -> Result<f64> {
        let d = m.eval(u)?;
        Ok(-d.d1 * u - (p0 - d.value))
    };
    let u0 = brent(stationarity, grid[i - 1], grid[i + 1], cfg.root_options())
        .map_err(|e| match e {
            Error::NoConvergence { .. } => {
                Error::NotUnimodal("gain ratio stationarity has no sign change near the peak".into())
            }
            other => other,
        })?;
    let b = gain(u0)?;
    let residual = m.dp(u0)? + b;
    if residual.abs() > 1e-9 * b.max(1.0) {
        return Err(Error::NoConvergence {
            what: "gain ratio stationarity".into(),
            lo: grid[i - 1],
            hi: grid[i + 1],
            residual,
        });
    }

    let u_bar = turning_point(m, u0, cfg)?;
    if !(u0 > u_bar) {
        return Err(Error::AssumptionViolated {
            witness: u0,
            message: format!("gain maximizer u0 = {u0} does not exceed the turning point {u_bar}"),
        });
    }
    Ok(CriticalValues { u_bar, u0, b })
}

/// Sign change of `p''` from negative to positive. `p'` keeps decreasing on
/// `[0, ū]`, and `ū < u0`, so the search is confined to `(0, u0]`.
fn turning_point(m: &PressureModel, u0: f64, cfg: &SolverConfig) -> Result<f64> {
    let grid = geometric_grid(SCAN_START.min(u0 / 2.0), u0, 256);
    let mut prev = grid[0];
    if m.d2p(prev)? >= 0.0 {
        return Err(Error::AssumptionViolated {
            witness: prev,
            message: "p' is not decreasing near 0".into(),
        });
    }
    for &u in &grid[1..] {
        if m.d2p(u)? > 0.0 {
            return brent(|v| m.d2p(v), prev, u, cfg.root_options());
        }
        prev = u;
    }
    Err(Error::AssumptionViolated {
        witness: u0,
        message: "p' has no turning point below u0".into(),
    })
}

/// Relaxed law `p̄`: the chord `p(0) - B u` up to `u0`, then `p`.
pub fn relaxed_p(m: &PressureModel, cv: &CriticalValues, u: f64) -> Result<f64> {
    if u <= cv.u0 {
        Ok(m.p(0.0)? - cv.b * u)
    } else {
        m.p(u)
    }
}

/// Derivative of [`relaxed_p`].
pub fn relaxed_dp(m: &PressureModel, cv: &CriticalValues, u: f64) -> Result<f64> {
    if u <= cv.u0 {
        Ok(-cv.b)
    } else {
        m.dp(u)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairCriticals {
    pub plus: CriticalValues,
    /// `None` for the identically zero rear law (parallel flux).
    pub minus: Option<CriticalValues>,
    /// Solves `p̄₊'(u*) = -B₋`; infinite when `B₋ = 0`.
    pub u_star: f64,
    /// `h* = u* - B₋^ω g₊(u*)`, for `d >= 3` only.
    pub h_star: Option<f64>,
}

impl PairCriticals {
    pub fn b_minus(&self) -> f64 {
        self.minus.map_or(0.0, |c| c.b)
    }

    /// `u₋⁰`, infinite for the zero rear law.
    pub fn u0_minus(&self) -> f64 {
        self.minus.map_or(f64::INFINITY, |c| c.u0)
    }
}

/// Critical values of both laws plus the cross thresholds `u*` and `h*`.
///
/// Fails with `AssumptionViolated` unless the front law is strictly stronger:
/// `B₊ > B₋` and `p₊'(u) < p₋'(u)` on sampled `u > 0`.
pub fn pair_criticals(
    p_plus: &PressureModel,
    p_minus: &PressureModel,
    dim: u32,
    cfg: &SolverConfig,
) -> Result<PairCriticals> {
    if dim < 2 {
        return Err(Error::InvalidParameter(format!("dimension must be >= 2, got {dim}")));
    }
    let plus = critical_values(p_plus, cfg)?;
    if p_minus.is_zero() {
        return Ok(PairCriticals {
            plus,
            minus: None,
            u_star: f64::INFINITY,
            h_star: (dim >= 3).then_some(f64::INFINITY),
        });
    }
    let minus = critical_values(p_minus, cfg)?;
    if !(plus.b > minus.b) {
        return Err(Error::AssumptionViolated {
            witness: minus.u0,
            message: format!("front gain B+ = {} must exceed rear gain B- = {}", plus.b, minus.b),
        });
    }
    let tol = 1e-9 * plus.b;
    for u in geometric_grid(SCAN_START, cfg.u_max, 512) {
        let (a, b) = (p_plus.dp(u)?, p_minus.dp(u)?);
        if a > b + tol {
            return Err(Error::AssumptionViolated {
                witness: u,
                message: format!("p+'(u) = {a} exceeds p-'(u) = {b}"),
            });
        }
    }

    let target = -minus.b;
    let f = |u: f64| -> Result<f64> { Ok(p_plus.dp(u)? - target) };
    let (lo, hi) = crate::numeric::grow_bracket_up(f, plus.u0, 2.0 * plus.u0, 2.0, cfg.u_max)
        .map_err(|e| e.in_context("u* bracket"))?;
    let u_star = brent(f, lo, hi, cfg.root_options()).map_err(|e| e.in_context("u*"))?;

    let h_star = if dim >= 3 {
        let g = GTable::new(p_plus, &plus, dim, cfg)?;
        Some(u_star - minus.b.powf(g.omega()) * g.eval(u_star)?)
    } else {
        None
    };
    Ok(PairCriticals {
        plus,
        minus: Some(minus),
        u_star,
        h_star,
    })
}
