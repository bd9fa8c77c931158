//! Problem instances, profiles and solutions.

use std::fmt;

use crate::error::{Error, Result};
use crate::numeric::RootOptions;
use crate::pressure::{PressureModel, DEFAULT_U_MAX};

/// Numerical knobs shared by all solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Absolute tolerance of every bracketed root solve.
    pub root_tol: f64,
    pub max_iter: usize,
    /// Absolute tolerance of a single adaptive Simpson call, scaled by
    /// `1 + |integral|`.
    pub quad_tol: f64,
    pub quad_budget: usize,
    /// Points per parametric arc.
    pub samples: usize,
    /// Ceiling for slope scans and bracket growth.
    pub u_max: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            root_tol: 1e-12,
            max_iter: 200,
            quad_tol: 1e-11,
            quad_budget: 100_000,
            samples: 256,
            u_max: DEFAULT_U_MAX,
        }
    }
}

impl SolverConfig {
    pub fn root_options(&self) -> RootOptions {
        RootOptions {
            xtol: self.root_tol,
            max_iter: self.max_iter,
        }
    }
}

/// Volume of the unit ball in `R^n`, `π^{n/2} / Γ(n/2 + 1)`.
pub fn unit_ball_volume(n: u32) -> f64 {
    // V_0 = 1, V_1 = 2, V_n = 2π/n · V_{n-2}
    let (mut v, start) = if n.is_multiple_of(2) { (1.0, 2) } else { (2.0, 3) };
    let mut k = start;
    while k <= n {
        v *= 2.0 * std::f64::consts::PI / k as f64;
        k += 2;
    }
    v
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub dim: u32,
    /// Radius of the maximal cross section.
    pub radius: f64,
    pub height: f64,
    pub p_plus: PressureModel,
    pub p_minus: PressureModel,
    /// Multiply resistances by the volume of the unit `(d-1)`-ball.
    pub include_ball_volume: bool,
}

impl ProblemSpec {
    pub fn new(
        dim: u32,
        radius: f64,
        height: f64,
        p_plus: PressureModel,
        p_minus: PressureModel,
    ) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidParameter(format!("dimension must be >= 2, got {dim}")));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidParameter(format!("radius T must be > 0, got {radius}")));
        }
        if !(height >= 0.0 && height.is_finite()) {
            return Err(Error::InvalidParameter(format!("height H must be >= 0, got {height}")));
        }
        Ok(Self {
            dim,
            radius,
            height,
            p_plus,
            p_minus,
            include_ball_volume: false,
        })
    }

    pub fn with_ball_volume(mut self, on: bool) -> Self {
        self.include_ball_volume = on;
        self
    }

    /// `h = H / T`.
    pub fn aspect_ratio(&self) -> f64 {
        self.height / self.radius
    }

    /// `1/(d-2)`; only meaningful for `d >= 3`.
    pub fn omega(&self) -> f64 {
        1.0 / (self.dim as f64 - 2.0)
    }

    pub fn volume_factor(&self) -> f64 {
        if self.include_ball_volume {
            unit_ball_volume(self.dim - 1)
        } else {
            1.0
        }
    }

    pub fn law(&self, branch: Branch) -> &PressureModel {
        match branch {
            Branch::Front => &self.p_plus,
            Branch::Rear => &self.p_minus,
        }
    }

    /// Same problem with `T` and `H` scaled by `k`.
    pub fn scaled(&self, k: f64) -> Self {
        Self {
            radius: self.radius * k,
            height: self.height * k,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Front,
    Rear,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Front => "front",
            Branch::Rear => "rear",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcSample {
    pub t: f64,
    pub x: f64,
    pub u: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Segment {
    Flat { t_from: f64, t_to: f64 },
    Linear { t_from: f64, t_to: f64, slope: f64 },
    /// Curved piece known through exact samples, ordered by `t`.
    ParamArc { samples: Vec<ArcSample> },
}

impl Segment {
    pub fn t_from(&self) -> f64 {
        match self {
            Segment::Flat { t_from, .. } | Segment::Linear { t_from, .. } => *t_from,
            Segment::ParamArc { samples } => samples[0].t,
        }
    }

    pub fn t_to(&self) -> f64 {
        match self {
            Segment::Flat { t_to, .. } | Segment::Linear { t_to, .. } => *t_to,
            Segment::ParamArc { samples } => samples[samples.len() - 1].t,
        }
    }

    fn slope_range(&self) -> (f64, f64) {
        match self {
            Segment::Flat { .. } => (0.0, 0.0),
            Segment::Linear { slope, .. } => (*slope, *slope),
            Segment::ParamArc { samples } => (samples[0].u, samples[samples.len() - 1].u),
        }
    }
}

/// A monotone generalized-inverse branch `x(t)` on `[0, T]` with `x(0) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    pub radius: f64,
    pub segments: Vec<Segment>,
    /// Terminal height `x(T)`.
    pub beta: f64,
}

impl Profile {
    pub fn flat(radius: f64) -> Self {
        Self {
            radius,
            segments: vec![Segment::Flat {
                t_from: 0.0,
                t_to: radius,
            }],
            beta: 0.0,
        }
    }

    /// Builds a profile from segments, dropping empty ones and computing
    /// `beta` from the accumulated rise.
    pub fn from_segments(radius: f64, segments: Vec<Segment>) -> Self {
        let segments: Vec<Segment> = segments
            .into_iter()
            .filter(|s| match s {
                Segment::ParamArc { samples } => samples.len() >= 2,
                s => s.t_to() > s.t_from(),
            })
            .collect();
        let mut p = Self {
            radius,
            segments,
            beta: 0.0,
        };
        p.beta = p.x_at(radius);
        p
    }

    /// Piecewise linear profile through `(t, x)` nodes starting at `(0, 0)`.
    pub fn polyline(nodes: &[(f64, f64)]) -> Self {
        let radius = nodes.last().map_or(0.0, |n| n.0);
        let segs = nodes
            .windows(2)
            .map(|w| {
                let slope = (w[1].1 - w[0].1) / (w[1].0 - w[0].0);
                if slope == 0.0 {
                    Segment::Flat {
                        t_from: w[0].0,
                        t_to: w[1].0,
                    }
                } else {
                    Segment::Linear {
                        t_from: w[0].0,
                        t_to: w[1].0,
                        slope,
                    }
                }
            })
            .collect();
        Self::from_segments(radius, segs)
    }

    pub fn is_flat(&self) -> bool {
        self.segments.iter().all(|s| matches!(s, Segment::Flat { .. }))
    }

    /// Slope at `T` (the terminal slope `U`), `None` for a flat profile.
    pub fn terminal_slope(&self) -> Option<f64> {
        if self.is_flat() {
            return None;
        }
        self.segments.last().map(|s| s.slope_range().1)
    }

    /// Height at `t`, interpolating linearly inside parametric arcs.
    pub fn x_at(&self, t: f64) -> f64 {
        let mut x = 0.0;
        for s in &self.segments {
            let (a, b) = (s.t_from(), s.t_to());
            if t <= a {
                break;
            }
            let end = t.min(b);
            match s {
                Segment::Flat { .. } => {}
                Segment::Linear { slope, .. } => x += slope * (end - a),
                Segment::ParamArc { samples } => {
                    let base = samples[0].x;
                    x += interpolate(samples, end, |s| s.x) - base;
                }
            }
            if t <= b {
                break;
            }
        }
        x
    }

    /// Slope at `t`; at a junction the segment to the right wins.
    pub fn slope_at(&self, t: f64) -> f64 {
        for (i, s) in self.segments.iter().enumerate() {
            let last = i + 1 == self.segments.len();
            if t < s.t_to() || last {
                return match s {
                    Segment::Flat { .. } => 0.0,
                    Segment::Linear { slope, .. } => *slope,
                    Segment::ParamArc { samples } => interpolate(samples, t, |s| s.u),
                };
            }
        }
        0.0
    }

    /// Nodes where the profile is known exactly: segment ends plus arc samples.
    pub fn exact_nodes(&self) -> Vec<ArcSample> {
        let mut out: Vec<ArcSample> = Vec::new();
        let mut x = 0.0;
        for s in &self.segments {
            match s {
                Segment::Flat { t_from, t_to } => {
                    out.push(ArcSample { t: *t_from, x, u: 0.0 });
                    out.push(ArcSample { t: *t_to, x, u: 0.0 });
                }
                Segment::Linear { t_from, t_to, slope } => {
                    out.push(ArcSample { t: *t_from, x, u: *slope });
                    x += slope * (t_to - t_from);
                    out.push(ArcSample { t: *t_to, x, u: *slope });
                }
                Segment::ParamArc { samples } => {
                    out.extend_from_slice(samples);
                    x = samples[samples.len() - 1].x;
                }
            }
        }
        out
    }

    /// Checks tiling of `[0, T]`, continuity, `x(T) = beta` and convexity.
    pub fn check(&self, tol: f64) -> std::result::Result<(), String> {
        let mut t = 0.0;
        let mut last_slope = 0.0f64;
        for s in &self.segments {
            if (s.t_from() - t).abs() > tol * self.radius.max(1.0) {
                return Err(format!("gap before t = {}", s.t_from()));
            }
            let (lo, hi) = s.slope_range();
            if lo + tol < last_slope || hi + tol < lo {
                return Err(format!("slope decreases at t = {}", s.t_from()));
            }
            if let Segment::ParamArc { samples } = s {
                let base = self.x_at(samples[0].t);
                if (samples[0].x - base).abs() > tol * self.beta.max(1.0) {
                    return Err(format!("discontinuity at t = {}", samples[0].t));
                }
                if samples.windows(2).any(|w| w[1].t < w[0].t || w[1].u + tol < w[0].u) {
                    return Err("arc samples are not monotone".into());
                }
            }
            last_slope = hi;
            t = s.t_to();
        }
        if (t - self.radius).abs() > tol * self.radius.max(1.0) {
            return Err(format!("profile ends at {t}, expected {}", self.radius));
        }
        if (self.x_at(self.radius) - self.beta).abs() > tol * self.beta.max(1.0) {
            return Err("x(T) differs from beta".into());
        }
        Ok(())
    }

    /// Profile with both axes scaled by `k`.
    pub fn scaled(&self, k: f64) -> Self {
        let segments = self
            .segments
            .iter()
            .map(|s| match s {
                Segment::Flat { t_from, t_to } => Segment::Flat {
                    t_from: t_from * k,
                    t_to: t_to * k,
                },
                Segment::Linear { t_from, t_to, slope } => Segment::Linear {
                    t_from: t_from * k,
                    t_to: t_to * k,
                    slope: *slope,
                },
                Segment::ParamArc { samples } => Segment::ParamArc {
                    samples: samples
                        .iter()
                        .map(|s| ArcSample {
                            t: s.t * k,
                            x: s.x * k,
                            u: s.u,
                        })
                        .collect(),
                },
            })
            .collect();
        Self {
            radius: self.radius * k,
            segments,
            beta: self.beta * k,
        }
    }
}

fn interpolate(samples: &[ArcSample], t: f64, field: impl Fn(&ArcSample) -> f64) -> f64 {
    let i = samples.partition_point(|s| s.t < t);
    if i == 0 {
        return field(&samples[0]);
    }
    if i >= samples.len() {
        return field(&samples[samples.len() - 1]);
    }
    let (a, b) = (&samples[i - 1], &samples[i]);
    if b.t == a.t {
        return field(b);
    }
    let w = (t - a.t) / (b.t - a.t);
    field(a) + w * (field(b) - field(a))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseLabel {
    FrontTrapezium,
    FrontTriangle,
    TriangleOverTrapezium,
    DoubleTriangle,
    FlatDisk,
    Spatial,
}

impl CaseLabel {
    pub fn name(self) -> &'static str {
        match self {
            CaseLabel::FrontTrapezium => "FrontTrapezium",
            CaseLabel::FrontTriangle => "FrontTriangle",
            CaseLabel::TriangleOverTrapezium => "TriangleOverTrapezium",
            CaseLabel::DoubleTriangle => "DoubleTriangle",
            CaseLabel::FlatDisk => "FlatDisk",
            CaseLabel::Spatial => "Spatial",
        }
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Optimal body: both profiles, the height split, multipliers and resistances.
#[derive(Debug, Clone, PartialEq)]
pub struct BodySolution {
    pub spec: ProblemSpec,
    pub front: Profile,
    pub rear: Profile,
    pub beta_plus: f64,
    pub beta_minus: f64,
    /// Adjoint magnitudes; `None` where the branch has no problem to solve
    /// (the identically zero rear law).
    pub lambda_plus: Option<f64>,
    pub lambda_minus: Option<f64>,
    pub r_plus: f64,
    pub r_minus: f64,
    pub r_total: f64,
    pub case_label: CaseLabel,
}

impl BodySolution {
    pub fn profile(&self, branch: Branch) -> &Profile {
        match branch {
            Branch::Front => &self.front,
            Branch::Rear => &self.rear,
        }
    }

    pub fn lambda(&self, branch: Branch) -> Option<f64> {
        match branch {
            Branch::Front => self.lambda_plus,
            Branch::Rear => self.lambda_minus,
        }
    }

    pub fn beta(&self, branch: Branch) -> f64 {
        match branch {
            Branch::Front => self.beta_plus,
            Branch::Rear => self.beta_minus,
        }
    }

    pub fn resistance(&self, branch: Branch) -> f64 {
        match branch {
            Branch::Front => self.r_plus,
            Branch::Rear => self.r_minus,
        }
    }
}
