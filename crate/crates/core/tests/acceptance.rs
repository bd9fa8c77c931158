//! End-to-end acceptance checks. Runs without the libtest harness so that
//! each criterion prints exactly one PASS/FAIL line.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use minres_core::classical::{newton3, newton4, ClassicalSolution};
use minres_core::exprlang::parse;
use minres_core::oracle::{brute_force, check_maximality, default_u_cap, perturb_slopes, resistance_quadrature};
use minres_core::spatial::{self, extremal_point, GTable};
use minres_core::{
    critical_values, pair_criticals, solve, BodySolution, Branch, CaseLabel, PressureModel, ProblemSpec,
    SolverConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn solved(spec: &ProblemSpec) -> Result<BodySolution, String> {
    solve(spec, &SolverConfig::default()).map_err(|e| format!("solve failed: {e}"))
}

fn c1_criticals() -> Outcome {
    let cfg = SolverConfig::default();
    let newton = PressureModel::newton(1.0, 0.0).unwrap();
    let start = Instant::now();
    let cv = critical_values(&newton, &cfg).map_err(|e| e.to_string())?;
    let took = start.elapsed();
    let errs = [
        (cv.u_bar - 1.0 / 3f64.sqrt()).abs(),
        (cv.u0 - 1.0).abs(),
        (cv.b - 0.5).abs(),
    ];
    let worst = errs.iter().cloned().fold(0.0, f64::max);
    if worst > 1e-9 {
        return Err(format!("max abs error {worst:.2e}"));
    }
    if took >= Duration::from_millis(10) {
        return Err(format!("took {took:?}"));
    }
    Ok(format!("max abs error {worst:.1e}, {took:?}"))
}

fn c2_planar_cases() -> Outcome {
    let start = Instant::now();
    let want = [
        (1.0, CaseLabel::FrontTrapezium),
        (2.0, CaseLabel::FrontTriangle),
        (4.0, CaseLabel::TriangleOverTrapezium),
        (6.0, CaseLabel::DoubleTriangle),
    ];
    for (h, label) in want {
        let s = solved(&common::pair(2, 2.0, h))?;
        if s.case_label != label {
            return Err(format!("H = {h}: got {}, want {label}", s.case_label));
        }
    }
    let took = start.elapsed();
    if took >= Duration::from_millis(100) {
        return Err(format!("took {took:?}"));
    }
    Ok(format!("4 labels, {took:?}"))
}

/// Compares a spatial solve against the closed form, returning the worst
/// relative deviation over λ, t₀, β and 64 points of the parametric curve.
fn classical_deviation(c: &ClassicalSolution) -> Result<f64, String> {
    let cfg = SolverConfig::default();
    let spec = common::parallel(c.dim, c.radius, c.beta);
    let s = solve(&spec, &cfg).map_err(|e| e.to_string())?;
    let t0 = s.front.segments.first().map_or(c.radius, |seg| seg.t_to());
    let mut worst = rel(s.lambda_plus.unwrap(), c.lambda).max(rel(t0, c.t0));
    if c.beta > 0.0 {
        worst = worst.max(rel(s.beta_plus, c.beta));
    }
    let big_u = s.front.terminal_slope().unwrap_or(1.0);
    worst = worst.max(rel(big_u, c.terminal_slope));
    if c.terminal_slope > 1.0 {
        let law = PressureModel::newton(1.0, 0.0).unwrap();
        let cv = critical_values(&law, &cfg).unwrap();
        let gt = GTable::new(&law, &cv, c.dim, &cfg).unwrap();
        for k in 0..64 {
            let u = 1.0 + (c.terminal_slope - 1.0) * k as f64 / 63.0;
            let (t, x) = extremal_point(&gt, big_u, c.radius, u).map_err(|e| e.to_string())?;
            // x vanishes at u = 1, so measure it against the body's height scale
            worst = worst
                .max(rel(t, c.t_at(u)))
                .max((x - c.x_at(u)).abs() / c.beta.max(c.x_at(u).abs()));
        }
    }
    Ok(worst)
}

fn c3_classical() -> Outcome {
    let mut worst: f64 = 0.0;
    for &(dim, f) in &[(3, newton3 as fn(f64, f64) -> ClassicalSolution), (4, newton4)] {
        for i in 0..20 {
            let u = 1.0 + 4.0 * i as f64 / 19.0;
            let c = f(1.0, u);
            let dev = classical_deviation(&c)?;
            if dev > 1e-8 {
                return Err(format!("d={dim} U={u}: deviation {dev:.2e}"));
            }
            worst = worst.max(dev);
        }
    }
    Ok(format!("40 solves, worst relative deviation {worst:.1e}"))
}

fn c4_typos() -> Outcome {
    let mut worst: f64 = 0.0;
    for &(dim, f) in &[(3u32, newton3 as fn(f64, f64) -> ClassicalSolution), (4, newton4)] {
        for &u in &[1.0, 1.5, 2.0, 4.0] {
            let c = f(1.0, u);
            let s = solved(&common::parallel(dim, 1.0, c.beta))?;
            let q = resistance_quadrature(&s.spec, Branch::Front, &s.front).map_err(|e| e.to_string())?;
            let dev = rel(q, c.r_plus);
            if dev > 1e-8 {
                return Err(format!("d={dim} U={u}: quadrature {q} vs closed form {}", c.r_plus));
            }
            worst = worst.max(dev);
        }
        let flat = f(1.0, 1.0).r_plus;
        if (flat - 1.0).abs() > 1e-10 {
            return Err(format!("d={dim}: flat identity gives {flat}"));
        }
    }
    // the typeset forms, which give 1/2 at U = 1 where the flat disk has resistance 1
    let printed3 = |t: f64, u: f64| {
        let u2 = u * u;
        t * t * (17.0 * u2 + 2.0 + 10.0 * u2 * u2 + 3.0 * u2.powi(3) + 4.0 * u.ln() * u2)
            / (4.0 * (1.0 + u2).powi(4))
    };
    let printed4 = |t: f64, u: f64| t * t * (1.0 + 3.0 * u * u) / (2.0 * (1.0 + u * u).powi(2));
    let (printed3, printed4) = (printed3(1.0, 1.0), printed4(1.0, 1.0));
    if (printed3 - 1.0f64).abs() < 1e-3 || (printed4 - 1.0f64).abs() < 1e-3 {
        return Err("printed forms unexpectedly satisfy the flat identity".into());
    }
    Ok(format!(
        "quadrature agreement {worst:.1e}; printed forms give {printed3} and {printed4} at U=1"
    ))
}

fn c5_brute_force() -> Outcome {
    let cfg = SolverConfig::default();
    let mut worst: f64 = 0.0;
    let mut slowest = Duration::ZERO;
    for (name, spec) in common::matrix() {
        let start = Instant::now();
        let s = solve(&spec, &cfg).map_err(|e| format!("{name}: {e}"))?;
        let mut gaps = [0.0f64; 2];
        for (g, (cells, heights)) in gaps.iter_mut().zip([(200, 400), (400, 800)]) {
            let mut dp = 0.0;
            for branch in [Branch::Front, Branch::Rear] {
                if spec.law(branch).is_zero() {
                    continue;
                }
                let prof = s.profile(branch);
                let cap = default_u_cap(&spec, prof, &cfg).map_err(|e| e.to_string())?;
                let r = brute_force(&spec, branch, s.beta(branch), cells, heights, cap, &cfg)
                    .map_err(|e| format!("{name}: {e}"))?;
                dp += r.best_value;
            }
            *g = (dp - s.r_total) / s.r_total.abs();
        }
        let took = start.elapsed();
        slowest = slowest.max(took);
        if gaps[0] < -1e-9 || gaps[1] < -1e-9 {
            return Err(format!("{name}: brute force beats the analytic optimum, gaps {gaps:?}"));
        }
        if gaps[0] > 0.01 {
            return Err(format!("{name}: slack {:.3}% on 200x400", 100.0 * gaps[0]));
        }
        if gaps[1] > gaps[0] + 1e-12 {
            return Err(format!("{name}: slack grew on refinement, {gaps:?}"));
        }
        if took > Duration::from_secs(10) {
            return Err(format!("{name}: took {took:?}"));
        }
        worst = worst.max(gaps[0]);
    }
    Ok(format!("12 instances, worst slack {:.3}%, slowest {slowest:?}", 100.0 * worst))
}

fn c6_maximality() -> Outcome {
    let mut checked = 0;
    let mut perturbed = 0;
    for (name, spec) in common::matrix() {
        let s = solved(&spec)?;
        for branch in [Branch::Front, Branch::Rear] {
            let Some(lambda) = s.lambda(branch) else { continue };
            let prof = s.profile(branch);
            let u_max = 10.0 * prof.terminal_slope().unwrap_or(1.0).max(2.0);
            let r = check_maximality(&spec, branch, prof, lambda, 400, 2000, u_max).map_err(|e| e.to_string())?;
            if !r.passed {
                return Err(format!("{name} {branch}: violation {:.2e}", r.worst_violation));
            }
            checked += 1;
            if prof.is_flat() {
                continue;
            }
            let bent = perturb_slopes(prof);
            let r = check_maximality(&spec, branch, &bent, lambda, 400, 2000, u_max).map_err(|e| e.to_string())?;
            if r.passed || !(r.witness.0 > 0.0) {
                return Err(format!("{name} {branch}: perturbed profile not rejected"));
            }
            perturbed += 1;
        }
    }
    Ok(format!("{checked} branches certified, {perturbed} perturbations rejected"))
}

fn c7_scaling() -> Outcome {
    let mut worst: f64 = 0.0;
    for (name, spec) in common::matrix() {
        let base = solved(&spec)?.r_total;
        for k in [0.5, 3.0] {
            let r = solved(&spec.scaled(k))?.r_total;
            let want = k.powi(spec.dim as i32 - 1) * base;
            let dev = rel(r, want);
            if dev > 1e-8 {
                return Err(format!("{name} k={k}: {r} vs {want}"));
            }
            worst = worst.max(dev);
        }
    }
    Ok(format!("24 rescaled solves, worst deviation {worst:.1e}"))
}

fn c8_split() -> Outcome {
    let cfg = SolverConfig::default();
    let mut count = 0;
    let mut worst_res: f64 = 0.0;
    let instances = [
        common::pair(3, 1.0, 1.0),
        common::pair(3, 1.0, 2.0),
        common::pair(3, 1.0, 4.0),
        common::pair(4, 1.0, 1.0),
        common::pair(4, 1.0, 2.0),
        common::pair(5, 1.0, 2.0),
    ];
    for spec in instances {
        let s = solved(&spec)?;
        if s.rear.is_flat() {
            return Err(format!("d={} H={}: expected a curved rear", spec.dim, spec.height));
        }
        let zp = s.front.terminal_slope().unwrap();
        let zm = s.rear.terminal_slope().unwrap();
        let res = (spec.p_minus.dp(zm).unwrap() - spec.p_plus.dp(zp).unwrap()).abs();
        if res > 1e-9 {
            return Err(format!("d={} H={}: stationarity residual {res:.2e}", spec.dim, spec.height));
        }
        worst_res = worst_res.max(res);
        let eps = 1e-3 * spec.radius;
        for sign in [-1.0, 1.0] {
            let bm = s.beta_minus + sign * eps;
            let bp = spec.height - bm;
            let rp = spatial::branch_optimum(&spec.p_plus, spec.dim, spec.radius, bp, &cfg)
                .map_err(|e| e.to_string())?
                .1;
            let rm = spatial::branch_optimum(&spec.p_minus, spec.dim, spec.radius, bm, &cfg)
                .map_err(|e| e.to_string())?
                .1;
            let total = spec.volume_factor() * (rp + rm);
            if total < s.r_total - 1e-9 {
                return Err(format!("perturbed split lowers resistance: {total} < {}", s.r_total));
            }
        }
        count += 1;
    }
    let probe = common::pair(3, 1.0, 1.0);
    let pc = pair_criticals(&probe.p_plus, &probe.p_minus, 3, &cfg).map_err(|e| e.to_string())?;
    Ok(format!(
        "{count} two-sided solutions, worst residual {worst_res:.1e}, h*(d=3) = {:.6}",
        pc.h_star.unwrap()
    ))
}

/// Random expression text over `u` built from smooth, mostly well-defined pieces.
fn random_expr(rng: &mut ChaCha8Rng, depth: u32) -> String {
    if depth == 0 || rng.gen_bool(0.25) {
        return if rng.gen_bool(0.6) {
            "u".to_string()
        } else {
            format!("{:.3}", rng.gen_range(0.1..3.0))
        };
    }
    let a = random_expr(rng, depth - 1);
    match rng.gen_range(0..10) {
        0 => format!("({a}) + ({})", random_expr(rng, depth - 1)),
        1 => format!("({a}) - ({})", random_expr(rng, depth - 1)),
        2 => format!("({a}) * ({})", random_expr(rng, depth - 1)),
        3 => format!("({a}) / (1 + ({})^2)", random_expr(rng, depth - 1)),
        4 => format!("({a})^{}", rng.gen_range(2..4)),
        5 => format!("exp(-({a})^2)"),
        6 => format!("ln(1 + ({a})^2)"),
        7 => format!("sqrt(1 + ({a})^2)"),
        8 => format!("(1 + u)^({:.2})", rng.gen_range(-2.0..2.0)),
        _ => format!("-({a})"),
    }
}

fn c9_derivatives() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_917);
    let mut passed = 0;
    let mut attempts = 0;
    while passed < 1000 {
        attempts += 1;
        if attempts > 100_000 {
            return Err("could not generate enough valid samples".into());
        }
        let text = random_expr(&mut rng, 4);
        let e = parse(&text).map_err(|err| format!("`{text}`: {err}"))?;
        let u = rng.gen_range(0.1..3.0);
        let Ok(d) = e.eval2(u) else { continue };
        if !d.is_finite() || d.value.abs() > 1e6 || d.d1.abs() > 1e6 || d.d2.abs() > 1e6 {
            continue;
        }
        // Richardson-extrapolated central differences
        let h = 1e-3;
        let f = |x: f64| e.eval2(x).map(|v| (v.value, v.d1));
        let (Ok(a1), Ok(b1), Ok(a2), Ok(b2)) = (f(u + h), f(u - h), f(u + h / 2.0), f(u - h / 2.0)) else {
            continue;
        };
        let fd1 = (4.0 * (a2.0 - b2.0) / h - (a1.0 - b1.0) / (2.0 * h)) / 3.0;
        let fd2 = (4.0 * (a2.1 - b2.1) / h - (a1.1 - b1.1) / (2.0 * h)) / 3.0;
        let e1 = (fd1 - d.d1).abs() / d.d1.abs().max(1.0);
        let e2 = (fd2 - d.d2).abs() / d.d2.abs().max(1.0);
        if e1 > 1e-6 || e2 > 1e-6 {
            return Err(format!("`{text}` at u = {u}: d1 {} vs {fd1}, d2 {} vs {fd2}", d.d1, d.d2));
        }
        passed += 1;
    }
    Ok(format!("1000 checks ({attempts} draws)"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("1 critical values of Newton's law", c1_criticals),
        ("2 planar case labels", c2_planar_cases),
        ("3 agreement with closed forms", c3_classical),
        ("4 corrected resistance forms", c4_typos),
        ("5 brute-force global optimality", c5_brute_force),
        ("6 pointwise maximality", c6_maximality),
        ("7 scaling law", c7_scaling),
        ("8 split stationarity", c8_split),
        ("9 dual-number derivatives", c9_derivatives),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
