//! Exact solver for `d = 2`.
//!
//! A single branch with prescribed `β` costs `T p̄(β/T)`, so the split reduces
//! to minimizing `p̄₊(z) + p̄₋(h - z)` over `z ∈ [0, h]`. The derivative of
//! that sum is nondecreasing, which leaves four shapes depending on where
//! `h = H/T` falls relative to `u₊⁰`, `u*` and `u* + u₋⁰`.

use crate::criticals::{pair_criticals, relaxed_dp, relaxed_p, CriticalValues, PairCriticals};
use crate::error::{Error, Result};
use crate::model::{BodySolution, CaseLabel, Profile, ProblemSpec, Segment, SolverConfig};
use crate::numeric::brent;
use crate::oracle::segment_integral;
use crate::pressure::PressureModel;

/// Relative slack on the thresholds: the critical slopes are root-finding
/// results, so `h` equal to a threshold up to this factor counts as equal.
/// Both neighbouring shapes coincide there.
pub const THRESHOLD_TIE: f64 = 1e-9;

/// Which of the planar shapes is optimal.
pub fn classify2d(spec: &ProblemSpec, pc: &PairCriticals) -> Result<CaseLabel> {
    if spec.dim != 2 {
        return Err(Error::InvalidParameter("classify2d needs d = 2".into()));
    }
    let h = spec.aspect_ratio();
    Ok(if spec.height == 0.0 {
        CaseLabel::FlatDisk
    } else if h < pc.plus.u0 * (1.0 - THRESHOLD_TIE) {
        CaseLabel::FrontTrapezium
    } else if h <= pc.u_star * (1.0 + THRESHOLD_TIE) {
        CaseLabel::FrontTriangle
    } else if h < pc.u_star + pc.u0_minus() {
        CaseLabel::TriangleOverTrapezium
    } else {
        CaseLabel::DoubleTriangle
    })
}

/// Convex optimum of one branch with `β = slope·T`: flat then `u0`
/// below `u0`, a straight line otherwise.
fn branch_profile(cv: &CriticalValues, radius: f64, beta: f64) -> Profile {
    if beta <= 0.0 {
        return Profile::flat(radius);
    }
    let slope = beta / radius;
    if slope < cv.u0 {
        let t0 = radius - beta / cv.u0;
        Profile::from_segments(
            radius,
            vec![
                Segment::Flat { t_from: 0.0, t_to: t0 },
                Segment::Linear {
                    t_from: t0,
                    t_to: radius,
                    slope: cv.u0,
                },
            ],
        )
    } else {
        Profile::from_segments(
            radius,
            vec![Segment::Linear {
                t_from: 0.0,
                t_to: radius,
                slope,
            }],
        )
    }
}

/// Multiplier of a branch whose steepest slope is `slope`: `B` on the relaxed
/// part, `-p'(slope)` beyond `u0`.
fn branch_lambda(m: &PressureModel, cv: &CriticalValues, slope: f64) -> Result<f64> {
    if slope <= cv.u0 {
        Ok(cv.b)
    } else {
        Ok(-m.dp(slope)?)
    }
}

/// Optimal resistance `T p̄(β/T)` of one branch, without the ball-volume factor.
pub fn branch_optimum(m: &PressureModel, cv: Option<&CriticalValues>, radius: f64, beta: f64) -> Result<f64> {
    match cv {
        Some(cv) if beta > 0.0 => Ok(radius * relaxed_p(m, cv, beta / radius)?),
        _ => Ok(radius * m.p(0.0)?),
    }
}

pub fn solve2d(spec: &ProblemSpec, cfg: &SolverConfig) -> Result<BodySolution> {
    if spec.dim != 2 {
        return Err(Error::InvalidParameter("solve2d needs d = 2".into()));
    }
    let pc = pair_criticals(&spec.p_plus, &spec.p_minus, 2, cfg)?;
    let case = classify2d(spec, &pc)?;
    let radius = spec.radius;
    let h = spec.aspect_ratio();
    let plus = &pc.plus;

    // height ratio of the front branch
    let z = match case {
        CaseLabel::FlatDisk => 0.0,
        CaseLabel::FrontTrapezium | CaseLabel::FrontTriangle => h,
        CaseLabel::TriangleOverTrapezium => pc.u_star,
        CaseLabel::DoubleTriangle => {
            let minus = pc.minus.expect("double triangle needs a rear law");
            let f = |z: f64| -> Result<f64> {
                Ok(relaxed_dp(&spec.p_plus, plus, z)? - relaxed_dp(&spec.p_minus, &minus, h - z)?)
            };
            brent(f, plus.u0, h - minus.u0, cfg.root_options())
                .map_err(|e| e.in_context("double triangle split"))?
        }
        CaseLabel::Spatial => unreachable!("planar classification"),
    };

    let (beta_plus, beta_minus) = if z >= h {
        (spec.height, 0.0)
    } else {
        let bp = radius * z;
        (bp, spec.height - bp)
    };

    let front = branch_profile(plus, radius, beta_plus);
    let rear = match pc.minus {
        Some(ref cv) => branch_profile(cv, radius, beta_minus),
        None => Profile::flat(radius),
    };

    let lambda_plus = Some(branch_lambda(&spec.p_plus, plus, beta_plus / radius)?);
    let lambda_minus = match pc.minus {
        Some(ref cv) => Some(branch_lambda(&spec.p_minus, cv, beta_minus / radius)?),
        None => None,
    };

    let vol = spec.volume_factor();
    let r_plus = vol * branch_optimum(&spec.p_plus, Some(plus), radius, beta_plus)?;
    let r_minus = vol * branch_optimum(&spec.p_minus, pc.minus.as_ref(), radius, beta_minus)?;

    Ok(BodySolution {
        spec: spec.clone(),
        front,
        rear,
        beta_plus,
        beta_minus,
        lambda_plus,
        lambda_minus,
        r_plus,
        r_minus,
        r_total: r_plus + r_minus,
        case_label: case,
    })
}

/// Resistance of arbitrary front and rear profiles for `d = 2`, as the sum of
/// `p(slope)·length` over segments.
pub fn resistance2d_of_profile(spec: &ProblemSpec, front: &Profile, rear: &Profile) -> Result<f64> {
    let mut total = 0.0;
    for (law, prof) in [(&spec.p_plus, front), (&spec.p_minus, rear)] {
        for s in &prof.segments {
            total += segment_integral(law, 2, s)?;
        }
    }
    Ok(spec.volume_factor() * total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example(height: f64) -> ProblemSpec {
        ProblemSpec::new(
            2,
            2.0,
            height,
            PressureModel::parse_law("1/(1+u^2) + 0.5").unwrap(),
            PressureModel::parse_law("0.5/(1+u^2) - 0.5").unwrap(),
        )
        .unwrap()
    }

    fn solve(spec: &ProblemSpec) -> BodySolution {
        solve2d(spec, &SolverConfig::default()).unwrap()
    }

    #[test]
    fn four_cases_of_the_example_pair() {
        let labels: Vec<_> = [1.0, 2.0, 4.0, 6.0]
            .iter()
            .map(|&h| solve(&example(h)).case_label)
            .collect();
        assert_eq!(
            labels,
            [
                CaseLabel::FrontTrapezium,
                CaseLabel::FrontTriangle,
                CaseLabel::TriangleOverTrapezium,
                CaseLabel::DoubleTriangle
            ]
        );
    }

    #[test]
    fn trapezium_geometry_and_resistance() {
        let s = solve(&example(1.0));
        match s.front.segments[0] {
            Segment::Flat { t_from, t_to } => assert!(t_from == 0.0 && (t_to - 1.0).abs() < 1e-12),
            ref other => panic!("unexpected {other:?}"),
        }
        match s.front.segments[1] {
            Segment::Linear { t_from, slope, .. } => {
                assert!((t_from - 1.0).abs() < 1e-9);
                assert!((slope - 1.0).abs() < 1e-9);
            }
            ref other => panic!("unexpected {other:?}"),
        }
        assert_eq!(s.beta_minus, 0.0);
        assert!((s.r_total - 2.5).abs() < 1e-9);
        let by_segments = resistance2d_of_profile(&s.spec, &s.front, &s.rear).unwrap();
        assert!((by_segments - 2.5).abs() < 1e-9);
        assert!(s.front.check(1e-12).is_ok());
    }

    #[test]
    fn triangle_over_trapezium_split() {
        let s = solve(&example(4.0));
        let u_star = 1.608_465_371_420_134;
        assert!((s.beta_plus - 2.0 * u_star).abs() < 1e-10);
        assert!((s.beta_minus - (4.0 - 2.0 * u_star)).abs() < 1e-10);
        assert!(matches!(s.rear.segments[0], Segment::Flat { .. }));
        assert_eq!(s.rear.terminal_slope().map(|u| (u - 1.0).abs() < 1e-9), Some(true));
        assert!((s.beta_plus + s.beta_minus - 4.0).abs() < 1e-12);
    }

    #[test]
    fn double_triangle_stationarity() {
        let s = solve(&example(6.0));
        let zp = s.beta_plus / 2.0;
        let zm = s.beta_minus / 2.0;
        let dp = s.spec.p_plus.dp(zp).unwrap();
        let dm = s.spec.p_minus.dp(zm).unwrap();
        assert!((dp - dm).abs() < 1e-10);
        assert!(zm > 1.0);
        assert_eq!(s.lambda_plus.unwrap(), -dp);
    }

    #[test]
    fn flat_disk() {
        let s = solve(&example(0.0));
        assert_eq!(s.case_label, CaseLabel::FlatDisk);
        assert!(s.front.is_flat() && s.rear.is_flat());
        assert!((s.r_total - 2.0 * (1.5 + 0.0)).abs() < 1e-12);
    }

    #[test]
    fn zigzag_competitor_is_worse() {
        let s = solve(&example(1.0));
        // same beta = 1 but slopes 0.5 then 0.5 (a straight line)
        let line = Profile::polyline(&[(0.0, 0.0), (2.0, 1.0)]);
        let zig = Profile::polyline(&[(0.0, 0.0), (0.5, 0.6), (1.0, 0.6), (2.0, 1.0)]);
        for cand in [line, zig] {
            let r = resistance2d_of_profile(&s.spec, &cand, &s.rear).unwrap();
            assert!(r > s.r_total + 1e-6);
        }
    }

    #[test]
    fn parallel_flux_has_only_front_cases() {
        let newton = PressureModel::newton(1.0, 0.0).unwrap();
        for (h, want) in [(0.5, CaseLabel::FrontTrapezium), (3.0, CaseLabel::FrontTriangle)] {
            let spec = ProblemSpec::new(2, 1.0, h, newton.clone(), PressureModel::zero()).unwrap();
            let s = solve(&spec);
            assert_eq!(s.case_label, want);
            assert_eq!(s.lambda_minus, None);
            assert_eq!(s.r_minus, 0.0);
        }
    }

    #[test]
    fn ball_volume_factor() {
        let s = solve(&example(1.0).with_ball_volume(true));
        assert!((s.r_total - 5.0).abs() < 1e-9);
    }
}
