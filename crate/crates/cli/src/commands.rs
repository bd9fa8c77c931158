use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::time::Instant;

use minres_core::oracle::{self, check_maximality, default_u_cap, resistance_quadrature};
use minres_core::pressure::{validate, DEFAULT_U_MAX};
use minres_core::{
    pair_criticals, solve, BodySolution, Branch, Error, PairCriticals, PressureModel, Profile, ProblemSpec,
    SolverConfig,
};

use crate::args::{OutputArgs, ProblemArgs, SolveArgs, VerifyArgs};
use crate::output::{read_profile_csv, render_svg, write_profile_csv};
use crate::report::*;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Failure of a subcommand, mapped to an exit code and a one-line JSON message.
#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Usage(String),
    Validation(Vec<LawValidation>),
    Io(String),
    Certificate { report: Box<RunReport> },
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::NoConvergence { .. } | Error::QuadratureFailure { .. }) => 3,
            CliError::Core(_) | CliError::Usage(_) | CliError::Validation(_) => 2,
            CliError::Io(_) => 1,
            CliError::Certificate { .. } => 4,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        use minres_core::ExprError;
        use serde_json::json;
        match self {
            CliError::Core(e) => {
                let mut v = json!({ "error": e.kind(), "message": e.to_string() });
                let extra = match e {
                    Error::Expr(ExprError::Syntax { offset, expected, .. }) => {
                        json!({ "offset": offset, "expected": expected })
                    }
                    Error::Expr(ExprError::UnknownIdentifier { offset, name }) => {
                        json!({ "offset": offset, "name": name })
                    }
                    Error::Expr(ExprError::Domain { u, subexpr, .. }) => json!({ "u": finite(*u), "subexpr": subexpr }),
                    Error::AssumptionViolated { witness, .. } => json!({ "witness": finite(*witness) }),
                    Error::NoConvergence { what, lo, hi, residual } => {
                        json!({ "what": what, "lo": finite(*lo), "hi": finite(*hi), "residual": finite(*residual) })
                    }
                    Error::QuadratureFailure { a, b, .. } => json!({ "a": finite(*a), "b": finite(*b) }),
                    _ => json!({}),
                };
                if let (Some(map), serde_json::Value::Object(more)) = (v.as_object_mut(), extra) {
                    map.extend(more);
                }
                v
            }
            CliError::Usage(m) => json!({ "error": "UsageError", "message": m }),
            CliError::Io(m) => json!({ "error": "IoError", "message": m }),
            CliError::Validation(laws) => {
                let failed: Vec<_> = laws.iter().filter(|l| !l.passed).collect();
                json!({
                    "error": "ValidationFailed",
                    "message": "pressure law violates the standing conditions",
                    "laws": failed,
                })
            }
            CliError::Certificate { report } => {
                let o = report.oracle.as_ref();
                let failed_max: Vec<_> = o
                    .map(|o| o.maximality.iter().filter(|m| m.checked && !m.passed).collect())
                    .unwrap_or_default();
                json!({
                    "error": "CertificateFailure",
                    "message": "optimality certificate failed",
                    "maximality": failed_max,
                    "total_relative_gap": o.and_then(|o| o.total_relative_gap),
                })
            }
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

/// Solver settings, with `MINRES_TOL` overriding the root tolerance.
pub fn solver_config(samples: usize) -> CliResult<SolverConfig> {
    let mut cfg = SolverConfig {
        samples: samples.max(3),
        ..SolverConfig::default()
    };
    if let Ok(text) = std::env::var("MINRES_TOL") {
        let tol: f64 = text
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("MINRES_TOL=`{text}` is not a number")))?;
        if !(tol > 0.0 && tol < 1.0) {
            return Err(CliError::Usage(format!("MINRES_TOL must lie in (0, 1), got {tol}")));
        }
        cfg.root_tol = tol;
    }
    Ok(cfg)
}

pub fn build_spec(p: &ProblemArgs) -> CliResult<ProblemSpec> {
    let plus = PressureModel::parse_law(&p.p_plus)?;
    let minus = PressureModel::parse_law(&p.p_minus)?;
    if plus.is_zero() {
        return Err(CliError::Usage("the front law cannot be `zero`".into()));
    }
    Ok(ProblemSpec::new(p.dim, p.radius, p.height, plus, minus)?.with_ball_volume(p.ball_volume))
}

fn validate_laws(spec: &ProblemSpec, strict: bool) -> CliResult<Vec<LawValidation>> {
    let mut out = Vec::new();
    for (branch, law) in [("front", &spec.p_plus), ("rear", &spec.p_minus)] {
        if law.is_zero() {
            continue;
        }
        let r = validate(law, DEFAULT_U_MAX, 512);
        out.push(LawValidation {
            branch: branch.into(),
            law: law.to_string(),
            passed: r.passed,
            limit_at_infinity: finite(r.limit_at_infinity),
            u_bar: r.u_bar_estimate,
            violations: r
                .violations
                .iter()
                .map(|v| ViolationEntry {
                    condition: v.condition.id().into(),
                    witness: finite(v.witness),
                    description: v.description.clone(),
                })
                .collect(),
        });
    }
    if strict && out.iter().any(|l| !l.passed) {
        return Err(CliError::Validation(out));
    }
    Ok(out)
}

fn thresholds(pc: &PairCriticals) -> Thresholds {
    Thresholds {
        u0_plus: pc.plus.u0,
        u0_minus: pc.minus.map(|c| c.u0),
        u_star: finite(pc.u_star),
        h_star: pc.h_star.and_then(finite),
    }
}

struct Solved {
    spec: ProblemSpec,
    cfg: SolverConfig,
    sol: BodySolution,
    report: RunReport,
}

fn solve_problem(p: &ProblemArgs, command: &str, timing: bool) -> CliResult<Solved> {
    let spec = build_spec(p)?;
    let cfg = solver_config(p.samples)?;
    let validation = validate_laws(&spec, p.strict)?;
    let start = Instant::now();
    let pc = pair_criticals(&spec.p_plus, &spec.p_minus, spec.dim, &cfg)?;
    let sol = solve(&spec, &cfg)?;
    let elapsed = start.elapsed();
    let report = RunReport {
        schema: SCHEMA.into(),
        tool: format!("minres {VERSION}"),
        command: command.into(),
        spec: SpecEcho {
            dim: spec.dim,
            radius: spec.radius,
            height: spec.height,
            p_plus: p.p_plus.clone(),
            p_minus: p.p_minus.clone(),
            ball_volume: spec.include_ball_volume,
            samples: cfg.samples,
            root_tol: cfg.root_tol,
        },
        case_label: sol.case_label.to_string(),
        h: spec.aspect_ratio(),
        thresholds: thresholds(&pc),
        beta_plus: sol.beta_plus,
        beta_minus: sol.beta_minus,
        u_plus: sol.front.terminal_slope(),
        u_minus: sol.rear.terminal_slope(),
        lambda_plus: sol.lambda_plus,
        lambda_minus: sol.lambda_minus,
        r_plus: sol.r_plus,
        r_minus: sol.r_minus,
        r_total: sol.r_total,
        validation,
        oracle: None,
        timing_ms: timing.then_some(elapsed.as_secs_f64() * 1e3),
    };
    Ok(Solved { spec, cfg, sol, report })
}

fn write_outputs(out: &OutputArgs, sol: &BodySolution, report: &RunReport, stdout: &mut dyn Write) -> CliResult<()> {
    if let Some(path) = &out.out_profile {
        let file = fs::File::create(path).map_err(|e| io_err(path, e))?;
        write_profile_csv(sol, io::BufWriter::new(file)).map_err(|e| io_err(path, e))?;
    }
    if let Some(path) = &out.out_svg {
        fs::write(path, render_svg(sol, VERSION)).map_err(|e| io_err(path, e))?;
    }
    let json = serde_json::to_string_pretty(report).expect("report serializes") + "\n";
    match &out.out_report {
        Some(path) => {
            fs::write(path, json).map_err(|e| io_err(path, e))?;
            writeln!(stdout, "{} R_total={}", report.case_label, report.r_total).map_err(|e| CliError::Io(e.to_string()))?;
        }
        None => stdout.write_all(json.as_bytes()).map_err(|e| CliError::Io(e.to_string()))?,
    }
    Ok(())
}

pub fn cmd_solve(a: &SolveArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let s = solve_problem(&a.problem, "solve", a.output.timing)?;
    write_outputs(&a.output, &s.sol, &s.report, stdout)
}

pub fn cmd_verify(a: &VerifyArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let mut s = solve_problem(&a.problem, "verify", a.output.timing)?;
    let (front, rear, source) = match &a.check_profile {
        Some(path) => {
            let file = fs::File::open(path).map_err(|e| io_err(path, e))?;
            let (f, r) = read_profile_csv(file).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            if (f.radius - s.spec.radius).abs() > 1e-9 * s.spec.radius {
                return Err(CliError::Usage(format!(
                    "profile radius {} differs from T = {}",
                    f.radius, s.spec.radius
                )));
            }
            (f, r, format!("csv:{}", path.display()))
        }
        None => (s.sol.front.clone(), s.sol.rear.clone(), "solver".to_string()),
    };

    let mut summary = certify(&s, &front, &rear, a)?;
    summary.profile_source = source;
    let passed = summary.passed;
    s.report.oracle = Some(summary);
    write_outputs(&a.output, &s.sol, &s.report, stdout)?;
    if passed {
        Ok(())
    } else {
        Err(CliError::Certificate {
            report: Box::new(s.report),
        })
    }
}

fn certify(s: &Solved, front: &Profile, rear: &Profile, a: &VerifyArgs) -> CliResult<OracleSummary> {
    let (n_t, n_u) = a.maximality_samples;
    let (cells, heights) = a.grid;
    let mut maximality = Vec::new();
    let mut brute = Vec::new();
    let mut all_ok = true;
    let mut dp_total = 0.0;
    let mut profile_r = 0.0;
    for (branch, prof) in [(Branch::Front, front), (Branch::Rear, rear)] {
        profile_r += resistance_quadrature(&s.spec, branch, prof)?;
        let name = branch.to_string();
        let lambda = s.sol.lambda(branch);
        match lambda {
            Some(l) => {
                let u_max = 10.0 * prof.terminal_slope().unwrap_or(1.0).max(s.report.thresholds.u0_plus).max(1.0);
                let r = check_maximality(&s.spec, branch, prof, l, n_t, n_u, u_max)?;
                all_ok &= r.passed;
                maximality.push(MaximalityEntry {
                    branch: name.clone(),
                    checked: true,
                    passed: r.passed,
                    lambda: Some(l),
                    worst_violation: finite(r.worst_violation),
                    scale: finite(r.scale),
                    witness_t: Some(r.witness.0),
                    witness_u: Some(r.witness.1),
                });
            }
            None => maximality.push(MaximalityEntry {
                branch: name.clone(),
                checked: false,
                passed: true,
                lambda: None,
                worst_violation: None,
                scale: None,
                witness_t: None,
                witness_u: None,
            }),
        }
        if s.spec.law(branch).is_zero() {
            continue;
        }
        let beta = s.sol.beta(branch);
        let cap = default_u_cap(&s.spec, s.sol.profile(branch), &s.cfg)?;
        let r = oracle::brute_force(&s.spec, branch, beta, cells, heights, cap, &s.cfg)?;
        all_ok &= r.gap >= -1e-9 * (1.0 + r.analytic.abs());
        dp_total += r.best_value;
        brute.push(BruteForceEntry {
            branch: name,
            n_cells: r.n_cells,
            n_heights: r.n_heights,
            u_cap: cap,
            beta,
            best_value: r.best_value,
            analytic: r.analytic,
            gap: r.gap,
        });
    }
    let total_gap = (dp_total - s.sol.r_total) / s.sol.r_total.abs().max(f64::MIN_POSITIVE);
    all_ok &= total_gap <= a.gap_tol;
    // a supplied profile must also be at least as good as the optimum
    all_ok &= profile_r <= s.sol.r_total + 1e-8 * (1.0 + s.sol.r_total.abs());
    Ok(OracleSummary {
        passed: all_ok,
        profile_source: String::new(),
        maximality,
        brute_force: brute,
        profile_resistance: finite(profile_r),
        total_relative_gap: finite(total_gap),
    })
}

fn fmt_threshold(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.3}")
    } else {
        "inf".into()
    }
}

pub fn cmd_classify(p: &ProblemArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let spec = build_spec(p)?;
    let cfg = solver_config(p.samples)?;
    validate_laws(&spec, p.strict)?;
    let pc = pair_criticals(&spec.p_plus, &spec.p_minus, spec.dim, &cfg)?;
    let h = spec.aspect_ratio();
    let line = if spec.dim == 2 {
        let label = minres_core::planar::classify2d(&spec, &pc)?;
        format!(
            "{label} h={h:.3} thresholds=[{}, {}, {}]",
            fmt_threshold(pc.plus.u0),
            fmt_threshold(pc.u_star),
            fmt_threshold(pc.u_star + pc.u0_minus())
        )
    } else {
        let h_star = pc.h_star.unwrap_or(f64::INFINITY);
        let label = if spec.height == 0.0 { "FlatDisk" } else { "Spatial" };
        let rear = if h <= h_star { "flat rear" } else { "curved rear" };
        format!("{label} h={h:.3} thresholds=[{}] ({rear})", fmt_threshold(h_star))
    };
    writeln!(stdout, "{line}").map_err(|e| CliError::Io(e.to_string()))
}
