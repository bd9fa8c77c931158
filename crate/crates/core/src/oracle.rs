//! Independent checks of a claimed optimum: pointwise maximality of the
//! slope, a brute-force dynamic program over discretized monotone profiles,
//! and direct quadrature of the resistance functional.

use crate::criticals::{critical_values, pair_criticals};
use crate::error::{Error, Result};
use crate::model::{Branch, Profile, ProblemSpec, Segment, SolverConfig};
use crate::numeric::simpson_nonuniform;
use crate::pressure::PressureModel;
use crate::{planar, spatial};

#[derive(Debug, Clone, PartialEq)]
pub struct MaximalityReport {
    pub lambda: f64,
    /// `max_t [h(t, ũ(t)) - min_u h(t, u)]` with `h(t, u) = t^{d-2} p(u) + λu`.
    pub worst_violation: f64,
    /// `(t, u)` of the competitor achieving the worst violation.
    pub witness: (f64, f64),
    pub scale: f64,
    pub passed: bool,
}

/// Relative threshold for [`MaximalityReport::passed`].
pub const MAXIMALITY_TOL: f64 = 1e-8;

/// Scans `n_t` radii in `(0, T]` and `n_u` competitor slopes in `[0, u_max]`
/// (zero plus a geometric grid) and reports how far the profile's slope is
/// from minimizing `t^{d-2} p(u) + λu`.
pub fn check_maximality(
    spec: &ProblemSpec,
    branch: Branch,
    profile: &Profile,
    lambda: f64,
    n_t: usize,
    n_u: usize,
    u_max: f64,
) -> Result<MaximalityReport> {
    if !(lambda > 0.0) {
        return Ok(MaximalityReport {
            lambda,
            worst_violation: f64::INFINITY,
            witness: (0.0, 0.0),
            scale: 1.0,
            passed: false,
        });
    }
    let law = spec.law(branch);
    let k = spec.dim as i32 - 2;
    let n_u = n_u.max(2);
    let mut grid = vec![0.0];
    grid.extend(crate::numeric::geometric_grid(u_max * 1e-6, u_max, n_u - 1));
    let p_grid = grid.iter().map(|&u| law.p(u)).collect::<Result<Vec<_>>>()?;

    let mut worst = f64::NEG_INFINITY;
    let mut witness = (0.0, 0.0);
    let mut scale = 1.0f64;
    for i in 1..=n_t.max(1) {
        let t = spec.radius * i as f64 / n_t.max(1) as f64;
        let w = t.powi(k);
        let claimed = profile.slope_at(t);
        let h_claimed = w * law.p(claimed)? + lambda * claimed;
        scale = scale.max(h_claimed.abs());
        let (mut best, mut best_u) = (f64::INFINITY, 0.0);
        for (&u, &p) in grid.iter().zip(&p_grid) {
            let h = w * p + lambda * u;
            if h < best {
                best = h;
                best_u = u;
            }
        }
        let v = h_claimed - best;
        if v > worst {
            worst = v;
            witness = (t, best_u);
        }
    }
    Ok(MaximalityReport {
        lambda,
        worst_violation: worst,
        witness,
        scale,
        passed: worst <= MAXIMALITY_TOL * scale,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BruteForceResult {
    pub n_cells: usize,
    pub n_heights: usize,
    /// Includes the ball-volume factor when the spec asks for it.
    pub best_value: f64,
    /// Constant slope in each of the `n_cells` cells.
    pub best_profile: Vec<f64>,
    /// Analytic optimum of the same branch and `β`.
    pub analytic: f64,
    /// `best_value - analytic`; nonnegative up to rounding for a true optimum.
    pub gap: f64,
}

impl BruteForceResult {
    pub fn relative_gap(&self) -> f64 {
        self.gap / self.analytic.abs().max(f64::MIN_POSITIVE)
    }
}

/// Analytic optimum of one branch with prescribed `β`, volume factor included.
pub fn analytic_branch(spec: &ProblemSpec, branch: Branch, beta: f64, cfg: &SolverConfig) -> Result<f64> {
    let law = spec.law(branch);
    let vol = spec.volume_factor();
    if law.is_zero() {
        return Ok(0.0);
    }
    let raw = if spec.dim == 2 {
        let cv = critical_values(law, cfg)?;
        planar::branch_optimum(law, Some(&cv), spec.radius, beta)?
    } else {
        spatial::branch_optimum(law, spec.dim, spec.radius, beta, cfg)?.1
    };
    Ok(vol * raw)
}

/// Default slope cap: four times the larger of the branch's terminal slope
/// and `u*` (ignoring an infinite `u*`).
pub fn default_u_cap(spec: &ProblemSpec, profile: &Profile, cfg: &SolverConfig) -> Result<f64> {
    let pc = pair_criticals(&spec.p_plus, &spec.p_minus, spec.dim, cfg)?;
    let mut m = profile.terminal_slope().unwrap_or(0.0).max(pc.plus.u0);
    if pc.u_star.is_finite() {
        m = m.max(pc.u_star);
    }
    Ok(4.0 * m)
}

/// Minimizes `Σ p(u_i) (t_{i+1}^{d-1} - t_i^{d-1})` over nonnegative per-cell
/// slopes whose heights are multiples of `β / n_heights` summing to `β`.
/// Convexity is not imposed.
pub fn brute_force(
    spec: &ProblemSpec,
    branch: Branch,
    beta: f64,
    n_cells: usize,
    n_heights: usize,
    u_cap: f64,
    cfg: &SolverConfig,
) -> Result<BruteForceResult> {
    if n_cells == 0 || n_heights == 0 || n_cells > 2000 || n_heights > 2000 {
        return Err(Error::InfeasibleGrid(format!(
            "grid {n_cells}x{n_heights} outside 1..=2000"
        )));
    }
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(Error::InfeasibleGrid(format!("beta = {beta} is not representable")));
    }
    let law = spec.law(branch);
    let radius = spec.radius;
    let dt = radius / n_cells as f64;
    let dx = beta / n_heights as f64;
    let e = spec.dim as i32 - 1;
    let weights: Vec<f64> = (0..n_cells)
        .map(|i| ((i + 1) as f64 * dt).powi(e) - (i as f64 * dt).powi(e))
        .collect();
    let vol = spec.volume_factor();

    if beta == 0.0 {
        let p0 = law.p(0.0)?;
        let best_value = vol * p0 * radius.powi(e);
        let analytic = analytic_branch(spec, branch, 0.0, cfg)?;
        return Ok(BruteForceResult {
            n_cells,
            n_heights,
            best_value,
            best_profile: vec![0.0; n_cells],
            analytic,
            gap: best_value - analytic,
        });
    }

    // largest height step allowed in one cell
    let j_max = ((u_cap * dt / dx).floor() as usize).min(n_heights);
    if j_max * n_cells < n_heights {
        return Err(Error::InfeasibleGrid(format!(
            "slope cap {u_cap} cannot reach beta = {beta} on {n_cells} cells"
        )));
    }
    let cost = (0..=j_max)
        .map(|j| law.p(j as f64 * dx / dt))
        .collect::<Result<Vec<_>>>()?;

    let width = n_heights + 1;
    let mut value = vec![f64::INFINITY; width];
    value[0] = 0.0;
    let mut back = vec![0u16; n_cells * width];
    let mut next = vec![f64::INFINITY; width];
    for (i, &w) in weights.iter().enumerate() {
        // heights still reachable at the end restrict the useful states
        let remaining = (n_cells - i - 1) * j_max;
        let lo = n_heights.saturating_sub(remaining);
        let row = &mut back[i * width..(i + 1) * width];
        for k in 0..width {
            next[k] = f64::INFINITY;
            if k < lo {
                continue;
            }
            let (mut best, mut arg) = (f64::INFINITY, 0usize);
            for j in 0..=j_max.min(k) {
                let v = value[k - j] + cost[j] * w;
                if v < best {
                    best = v;
                    arg = j;
                }
            }
            next[k] = best;
            row[k] = arg as u16;
        }
        std::mem::swap(&mut value, &mut next);
    }

    let total = value[n_heights];
    if !total.is_finite() {
        return Err(Error::InfeasibleGrid("no admissible path reaches beta".into()));
    }
    let mut slopes = vec![0.0; n_cells];
    let mut k = n_heights;
    for i in (0..n_cells).rev() {
        let j = back[i * width + k] as usize;
        slopes[i] = j as f64 * dx / dt;
        k -= j;
    }
    let best_value = vol * total;
    let analytic = analytic_branch(spec, branch, beta, cfg)?;
    Ok(BruteForceResult {
        n_cells,
        n_heights,
        best_value,
        best_profile: slopes,
        analytic,
        gap: best_value - analytic,
    })
}

/// `∫ p(x'(t)) d(t^{d-1})` over one segment, without the volume factor.
/// Exact on flat and linear pieces; Simpson in `t` on sampled arcs, with the
/// half-resolution estimate as an error check.
pub fn segment_integral(law: &PressureModel, dim: u32, seg: &Segment) -> Result<f64> {
    let e = dim as i32 - 1;
    match seg {
        Segment::Flat { t_from, t_to } => Ok(law.p(0.0)? * (t_to.powi(e) - t_from.powi(e))),
        Segment::Linear { t_from, t_to, slope } => Ok(law.p(*slope)? * (t_to.powi(e) - t_from.powi(e))),
        Segment::ParamArc { samples } => {
            let ts: Vec<f64> = samples.iter().map(|s| s.t).collect();
            let ys = samples
                .iter()
                .map(|s| Ok(law.p(s.u)? * e as f64 * s.t.powi(e - 1)))
                .collect::<Result<Vec<f64>>>()?;
            let fine = simpson_nonuniform(&ts, &ys);
            if samples.len() >= 9 {
                let mut ct: Vec<f64> = ts.iter().step_by(2).copied().collect();
                let mut cy: Vec<f64> = ys.iter().step_by(2).copied().collect();
                if ts.len().is_multiple_of(2) {
                    ct.push(ts[ts.len() - 1]);
                    cy.push(ys[ys.len() - 1]);
                }
                let coarse = simpson_nonuniform(&ct, &cy);
                // fourth order: the fine estimate is ~16x closer than the coarse one
                let err = (fine - coarse).abs() / 15.0;
                let tol = 1e-9 * (1.0 + fine.abs());
                if !(err <= tol) {
                    return Err(Error::QuadratureFailure {
                        a: ts[0],
                        b: ts[ts.len() - 1],
                        message: format!("sampled arc too coarse: error estimate {err:.3e}"),
                    });
                }
            }
            Ok(fine)
        }
    }
}

/// Resistance of one branch of an arbitrary profile, volume factor included.
pub fn resistance_quadrature(spec: &ProblemSpec, branch: Branch, profile: &Profile) -> Result<f64> {
    let law = spec.law(branch);
    let mut total = 0.0;
    for s in &profile.segments {
        total += segment_integral(law, spec.dim, s)?;
    }
    Ok(spec.volume_factor() * total)
}

/// Competitor for the maximality check: slopes ×1.1 on the first half of the
/// non-flat range and scaled down on the second half so `x(T)` is unchanged.
/// Returned as a polyline through the exact nodes.
pub fn perturb_slopes(profile: &Profile) -> Profile {
    let radius = profile.radius;
    let start = profile
        .segments
        .iter()
        .find(|s| !matches!(s, Segment::Flat { .. }))
        .map_or(radius, |s| s.t_from());
    if start >= radius {
        return profile.clone();
    }
    let mid = 0.5 * (start + radius);
    let mut nodes: Vec<(f64, f64)> = profile
        .exact_nodes()
        .iter()
        .map(|n| (n.t, n.x))
        .filter(|n| n.0 != mid)
        .collect();
    nodes.push((mid, profile.x_at(mid)));
    nodes.sort_by(|a, b| a.0.total_cmp(&b.0));
    nodes.dedup_by(|b, a| b.0 == a.0);

    let x_mid = profile.x_at(mid);
    let first = x_mid - profile.x_at(start);
    let second = profile.beta - x_mid;
    let shrink = if second > 0.0 { (second - 0.1 * first) / second } else { 1.0 };
    let mut out = vec![(0.0, 0.0)];
    for w in nodes.windows(2) {
        let (a, b) = (w[0], w[1]);
        let rise = b.1 - a.1;
        let factor = if b.0 <= start {
            1.0
        } else if b.0 <= mid {
            1.1
        } else {
            shrink
        };
        let x = out.last().unwrap().1 + factor * rise;
        out.push((b.0, x));
    }
    Profile::polyline(&out)
}
