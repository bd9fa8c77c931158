//! Solver for `d >= 3`.
//!
//! With `ω = 1/(d-2)` and `g(u) = ∫₀ᵘ |p̄'(ν)|^{-ω} dν`, a branch whose
//! terminal slope is `U` has
//!
//! ```text
//! β / T      = U - |p'(U)|^ω g(U)                  (height map b(U))
//! R / T^{d-1} = p(U) + |p'(U)|^{1+ω} g(U)
//! ```
//!
//! and is traced parametrically for `u ∈ [u0, U]` by
//! `t(u) = T (|p'(U)| / |p'(u)|)^ω`, `x(u) = T |p'(U)|^ω (u |p'(u)|^{-ω} - g(u))`,
//! flat on `[0, t0]` with `t0 = T (|p'(U)| / B)^ω`.
//!
//! The front/rear split solves `p₋'(z₋) = p₊'(z₊)` subject to
//! `b₋(z₋) + b₊(z₊) = h`.

use crate::criticals::{critical_values, pair_criticals, CriticalValues};
use crate::error::{Error, Result};
use crate::model::{ArcSample, BodySolution, CaseLabel, Profile, ProblemSpec, Segment, SolverConfig};
use crate::numeric::{adaptive_simpson, brent, grow_bracket_up};
use crate::pressure::PressureModel;

/// Knots of the cumulative table cover `[u0, u0 · 2^KNOT_OCTAVES]`.
const KNOT_OCTAVES: usize = 8;
const KNOTS_PER_OCTAVE: usize = 4;

/// Cumulative table of `g` for one law and dimension. Between knots the
/// remainder is integrated on demand, so values carry the full quadrature
/// accuracy rather than an interpolation error.
#[derive(Debug, Clone)]
pub struct GTable {
    model: PressureModel,
    cv: CriticalValues,
    dim: u32,
    omega: f64,
    /// `(u, g(u))`, starting at `(u0, u0 / B^ω)`.
    knots: Vec<(f64, f64)>,
    quad_tol: f64,
    quad_budget: usize,
}

impl GTable {
    pub fn new(model: &PressureModel, cv: &CriticalValues, dim: u32, cfg: &SolverConfig) -> Result<Self> {
        if dim < 3 {
            return Err(Error::InvalidParameter(format!("g is defined for d >= 3, got {dim}")));
        }
        let omega = 1.0 / (dim as f64 - 2.0);
        let mut table = Self {
            model: model.clone(),
            cv: *cv,
            dim,
            omega,
            knots: vec![(cv.u0, cv.u0 / cv.b.powf(omega))],
            quad_tol: cfg.quad_tol,
            quad_budget: cfg.quad_budget,
        };
        let step = 2f64.powf(1.0 / KNOTS_PER_OCTAVE as f64);
        for _ in 0..KNOT_OCTAVES * KNOTS_PER_OCTAVE {
            let (a, ga) = *table.knots.last().unwrap();
            let b = a * step;
            let gb = ga + table.integrate(a, b, ga)?;
            table.knots.push((b, gb));
        }
        Ok(table)
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn criticals(&self) -> &CriticalValues {
        &self.cv
    }

    pub fn model(&self) -> &PressureModel {
        &self.model
    }

    /// `|p'(u)|^{-ω}` for `u >= u0`.
    fn integrand(&self, u: f64) -> Result<f64> {
        let d = self.model.dp(u)?;
        Ok((-d).powf(-self.omega))
    }

    /// `∫_a^b |p'|^{-ω}` with tolerance scaled by the running total `base`.
    fn integrate(&self, a: f64, b: f64, base: f64) -> Result<f64> {
        let rough = 0.5 * (b - a) * (self.integrand(a)? + self.integrand(b)?);
        let tol = self.quad_tol * (1.0 + base.abs() + rough.abs());
        adaptive_simpson(|u| self.integrand(u), a, b, tol, self.quad_budget)
    }

    /// `g(u)`: closed form `u / B^ω` up to `u0`, quadrature beyond.
    pub fn eval(&self, u: f64) -> Result<f64> {
        if u <= self.cv.u0 {
            return Ok(u.max(0.0) / self.cv.b.powf(self.omega));
        }
        let i = self.knots.partition_point(|k| k.0 <= u) - 1;
        let (a, ga) = self.knots[i];
        Ok(ga + self.integrate(a, u, ga)?)
    }

    /// `g'(u) = |p̄'(u)|^{-ω}`.
    pub fn derivative(&self, u: f64) -> Result<f64> {
        if u <= self.cv.u0 {
            Ok(self.cv.b.powf(-self.omega))
        } else {
            self.integrand(u)
        }
    }

    /// `b(U) = U - |p'(U)|^ω g(U)`; zero at `u0`.
    pub fn height_ratio(&self, u: f64) -> Result<f64> {
        if u <= self.cv.u0 {
            return Ok(0.0);
        }
        let slope = -self.model.dp(u)?;
        Ok(u - slope.powf(self.omega) * self.eval(u)?)
    }

    /// `p(U) + |p'(U)|^{1+ω} g(U)`, the resistance per `T^{d-1}`.
    pub fn resistance_ratio(&self, u: f64) -> Result<f64> {
        if u <= self.cv.u0 {
            return self.model.p(0.0);
        }
        let d = self.model.eval(u)?;
        Ok(d.value + (-d.d1).powf(1.0 + self.omega) * self.eval(u)?)
    }

    /// Asserts that `b` increases on sampled points of `[u0, hi]`.
    pub fn check_height_monotone(&self, hi: f64, n: usize) -> Result<()> {
        let u0 = self.cv.u0;
        let mut prev = 0.0;
        for k in 1..=n {
            let u = u0 + (hi - u0) * k as f64 / n as f64;
            let b = self.height_ratio(u)?;
            if !(b > prev) {
                return Err(Error::AssumptionViolated {
                    witness: u,
                    message: "height map b(U) is not increasing (needs p'' > 0 beyond u0)".into(),
                });
            }
            prev = b;
        }
        Ok(())
    }

    /// Inverts the height map: `U >= u0` with `b(U) = target`.
    pub fn invert_height(&self, target: f64, cfg: &SolverConfig) -> Result<f64> {
        let u0 = self.cv.u0;
        if target <= 0.0 {
            return Ok(u0);
        }
        let f = |u: f64| -> Result<f64> { Ok(self.height_ratio(u)? - target) };
        let (lo, hi) = grow_bracket_up(f, u0, 2.0 * u0, 2.0, cfg.u_max)
            .map_err(|e| e.in_context("height map bracket"))?;
        brent(f, lo, hi, cfg.root_options()).map_err(|e| e.in_context("height map inversion"))
    }
}

/// One branch of a `d >= 3` optimum, flat up to `t0` then parametric.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialExtremal {
    pub terminal_slope: f64,
    pub lambda: f64,
    pub t0: f64,
    pub beta: f64,
    pub radius: f64,
    /// `(u, t, x)` for `u ∈ [u0, U]`; empty for the flat extremal.
    pub samples: Vec<ArcSample>,
}

impl SpatialExtremal {
    pub fn is_flat(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn profile(&self) -> Profile {
        if self.is_flat() {
            return Profile::flat(self.radius);
        }
        Profile::from_segments(
            self.radius,
            vec![
                Segment::Flat {
                    t_from: 0.0,
                    t_to: self.t0,
                },
                Segment::ParamArc {
                    samples: self.samples.clone(),
                },
            ],
        )
    }
}

/// `t(u)` and `x(u)` on the extremal with terminal slope `big_u` over radius `radius`.
pub fn extremal_point(gt: &GTable, big_u: f64, radius: f64, u: f64) -> Result<(f64, f64)> {
    let w = gt.omega;
    let end = (-gt.model.dp(big_u)?).powf(w);
    let here = (-gt.model.dp(u)?).powf(w);
    Ok((radius * end / here, radius * end * (u / here - gt.eval(u)?)))
}

/// Branch optimum for a prescribed `h_branch = β / T`.
pub fn solve_height_for_u(
    gt: &GTable,
    h_branch: f64,
    radius: f64,
    cfg: &SolverConfig,
) -> Result<SpatialExtremal> {
    let cv = gt.cv;
    let d = gt.dim as i32;
    if h_branch <= 0.0 {
        return Ok(SpatialExtremal {
            terminal_slope: cv.u0,
            lambda: radius.powi(d - 2) * cv.b,
            t0: radius,
            beta: 0.0,
            radius,
            samples: Vec::new(),
        });
    }
    let big_u = gt.invert_height(h_branch, cfg)?;
    gt.check_height_monotone(big_u, 16)?;
    build_extremal(gt, big_u, radius, cfg)
}

fn build_extremal(gt: &GTable, big_u: f64, radius: f64, cfg: &SolverConfig) -> Result<SpatialExtremal> {
    let cv = gt.cv;
    let w = gt.omega;
    let d = gt.dim as i32;
    let slope_end = -gt.model.dp(big_u)?;
    let lambda = radius.powi(d - 2) * slope_end;
    let t0 = radius * (slope_end / cv.b).powf(w);
    let scale = slope_end.powf(w);

    let n = cfg.samples.max(3);
    let mut samples = Vec::with_capacity(n);
    // clustered toward u0: u_i = u0 + (U - u0) s_i², s_i uniform
    let mut g = cv.u0 / cv.b.powf(w);
    let mut prev_u = cv.u0;
    samples.push(ArcSample {
        t: t0,
        x: 0.0,
        u: cv.u0,
    });
    for i in 1..n {
        let s = i as f64 / (n - 1) as f64;
        let u = if i == n - 1 {
            big_u
        } else {
            cv.u0 + (big_u - cv.u0) * s * s
        };
        g += gt.integrate(prev_u, u, g)?;
        prev_u = u;
        let here = (-gt.model.dp(u)?).powf(w);
        let t = if i == n - 1 { radius } else { radius * scale / here };
        samples.push(ArcSample {
            t,
            x: radius * scale * (u / here - g),
            u,
        });
    }
    let beta = samples[n - 1].x;
    Ok(SpatialExtremal {
        terminal_slope: big_u,
        lambda,
        t0,
        beta,
        radius,
        samples,
    })
}

/// `T^{d-1} (p(U) + |p'(U)|^{1+ω} g(U))`; `T^{d-1} p(0)` when flat.
pub fn resistance_branch(gt: &GTable, ex: &SpatialExtremal) -> Result<f64> {
    let scale = ex.radius.powi(gt.dim as i32 - 1);
    if ex.is_flat() {
        return Ok(scale * gt.model.p(0.0)?);
    }
    Ok(scale * gt.resistance_ratio(ex.terminal_slope)?)
}

/// Full `d >= 3` optimum including the front/rear split.
pub fn solve_spatial(spec: &ProblemSpec, cfg: &SolverConfig) -> Result<BodySolution> {
    if spec.dim < 3 {
        return Err(Error::InvalidParameter("solve_spatial needs d >= 3".into()));
    }
    let radius = spec.radius;
    let d = spec.dim as i32;
    let vol = spec.volume_factor();
    let pc = pair_criticals(&spec.p_plus, &spec.p_minus, spec.dim, cfg)?;
    let gt_plus = GTable::new(&spec.p_plus, &pc.plus, spec.dim, cfg)?;
    let h = spec.aspect_ratio();
    let h_star = pc.h_star.unwrap_or(f64::INFINITY);
    let rear_flat_lambda = pc.minus.map(|c| radius.powi(d - 2) * c.b);
    let flat_rear_r = radius.powi(d - 1) * spec.p_minus.p(0.0)?;

    if spec.height == 0.0 {
        let r_plus = vol * radius.powi(d - 1) * spec.p_plus.p(0.0)?;
        let r_minus = vol * flat_rear_r;
        return Ok(BodySolution {
            spec: spec.clone(),
            front: Profile::flat(radius),
            rear: Profile::flat(radius),
            beta_plus: 0.0,
            beta_minus: 0.0,
            lambda_plus: Some(radius.powi(d - 2) * pc.plus.b),
            lambda_minus: rear_flat_lambda,
            r_plus,
            r_minus,
            r_total: r_plus + r_minus,
            case_label: CaseLabel::FlatDisk,
        });
    }

    if h <= h_star {
        let front = solve_height_for_u(&gt_plus, h, radius, cfg)?;
        let r_plus = vol * resistance_branch(&gt_plus, &front)?;
        let r_minus = vol * flat_rear_r;
        return Ok(BodySolution {
            spec: spec.clone(),
            front: front.profile(),
            rear: Profile::flat(radius),
            beta_plus: spec.height,
            beta_minus: 0.0,
            lambda_plus: Some(front.lambda),
            lambda_minus: rear_flat_lambda,
            r_plus,
            r_minus,
            r_total: r_plus + r_minus,
            case_label: CaseLabel::Spatial,
        });
    }

    let minus_cv = pc.minus.expect("finite h* implies a non-zero rear law");
    let gt_minus = GTable::new(&spec.p_minus, &minus_cv, spec.dim, cfg)?;
    let (z_minus, z_plus) = split(&gt_plus, &gt_minus, h, cfg)?;

    let rear_h = gt_minus.height_ratio(z_minus)?;
    let front = build_extremal(&gt_plus, z_plus, radius, cfg)?;
    let rear = build_extremal(&gt_minus, z_minus, radius, cfg)?;
    let r_plus = vol * resistance_branch(&gt_plus, &front)?;
    let r_minus = vol * resistance_branch(&gt_minus, &rear)?;
    let beta_minus = radius * rear_h;
    Ok(BodySolution {
        spec: spec.clone(),
        front: front.profile(),
        rear: rear.profile(),
        beta_plus: spec.height - beta_minus,
        beta_minus,
        lambda_plus: Some(front.lambda),
        lambda_minus: Some(rear.lambda),
        r_plus,
        r_minus,
        r_total: r_plus + r_minus,
        case_label: CaseLabel::Spatial,
    })
}

/// Terminal slopes `(z₋, z₊)` of the two-sided optimum for `h > h*`.
fn split(gt_plus: &GTable, gt_minus: &GTable, h: f64, cfg: &SolverConfig) -> Result<(f64, f64)> {
    let z_hi = gt_minus.invert_height(h, cfg).map_err(|e| e.in_context("rear range"))?;
    let u0_plus = gt_plus.cv.u0;
    let front_hi = gt_plus.invert_height(h, cfg).map_err(|e| e.in_context("front range"))?;
    gt_plus.check_height_monotone(front_hi, 16)?;
    gt_minus.check_height_monotone(z_hi, 16)?;

    let z_plus_of = |z_minus: f64| -> Result<f64> {
        let rest = h - gt_minus.height_ratio(z_minus)?;
        if rest <= 0.0 {
            return Ok(u0_plus);
        }
        gt_plus.invert_height(rest, cfg).map_err(|e| e.in_context("inner split solve"))
    };
    let stationarity = |z_minus: f64| -> Result<f64> {
        let z_plus = z_plus_of(z_minus)?;
        Ok(gt_minus.model.dp(z_minus)? - gt_plus.model.dp(z_plus)?)
    };
    let z_minus = brent(stationarity, gt_minus.cv.u0, z_hi, cfg.root_options())
        .map_err(|e| e.in_context("outer split solve"))?;
    Ok((z_minus, z_plus_of(z_minus)?))
}

/// Optimal resistance of one branch with prescribed `β`, `d >= 3`,
/// without the ball-volume factor.
pub fn branch_optimum(
    model: &PressureModel,
    dim: u32,
    radius: f64,
    beta: f64,
    cfg: &SolverConfig,
) -> Result<(SpatialExtremal, f64)> {
    let cv = critical_values(model, cfg)?;
    let gt = GTable::new(model, &cv, dim, cfg)?;
    let ex = solve_height_for_u(&gt, beta / radius, radius, cfg)?;
    let r = resistance_branch(&gt, &ex)?;
    Ok((ex, r))
}
