//! Bracketed root finding and adaptive quadrature.
//!
//! Every routine here reports failure as an [`Error`]; there is no silent
//! best-effort return.

use crate::error::{Error, Result};

/// Tolerances shared by the root finders.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootOptions {
    /// Absolute tolerance on the abscissa.
    pub xtol: f64,
    pub max_iter: usize,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self {
            xtol: 1e-12,
            max_iter: 200,
        }
    }
}

/// Finds a root of `f` in `[lo, hi]` where `f(lo)` and `f(hi)` have opposite
/// signs (or one of them is zero). Brent's method: bisection safeguarded
/// inverse quadratic / secant interpolation.
pub fn brent<F>(mut f: F, lo: f64, hi: f64, opts: RootOptions) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a)?, f(b)?);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.is_nan() || fb.is_nan() || fa.signum() == fb.signum() {
        return Err(Error::NoConvergence {
            what: "root bracket has no sign change".into(),
            lo,
            hi,
            residual: fa.abs().min(fb.abs()),
        });
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..opts.max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * opts.xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = d;
            }
        } else {
            d = m;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b)?;
        if fb.is_nan() {
            return Err(Error::NoConvergence {
                what: "function returned NaN".into(),
                lo: b.min(c),
                hi: b.max(c),
                residual: f64::NAN,
            });
        }
    }
    Err(Error::NoConvergence {
        what: "iteration budget exhausted".into(),
        lo: b.min(c),
        hi: b.max(c),
        residual: fb.abs(),
    })
}

/// Starting from `lo` where `f(lo) < 0`, grows `hi` geometrically by `factor`
/// until `f(hi) > 0`, giving up once `hi` exceeds `limit`. Returns the bracket.
pub fn grow_bracket_up<F>(
    mut f: F,
    lo: f64,
    first_hi: f64,
    factor: f64,
    limit: f64,
) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut a = lo;
    let mut b = first_hi;
    loop {
        let fb = f(b)?;
        if fb >= 0.0 {
            return Ok((a, b));
        }
        if b >= limit {
            return Err(Error::NoConvergence {
                what: "could not bracket a sign change".into(),
                lo,
                hi: b,
                residual: fb.abs(),
            });
        }
        a = b;
        b = (b * factor).min(limit);
    }
}

/// Adaptive Simpson quadrature with Richardson correction.
///
/// `tol` is an absolute tolerance on the whole integral; `budget` caps the
/// number of subintervals examined.
pub fn adaptive_simpson<F>(mut f: F, a: f64, b: f64, tol: f64, budget: usize) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a)?;
    let fb = f(b)?;
    let m = 0.5 * (a + b);
    let fm = f(m)?;
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);

    struct Piece {
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    }

    let mut stack = vec![Piece {
        a,
        b,
        fa,
        fm,
        fb,
        whole,
        tol,
        depth: 0,
    }];
    let mut total = 0.0;
    let mut visited = 0usize;
    while let Some(p) = stack.pop() {
        visited += 1;
        if visited > budget {
            return Err(Error::QuadratureFailure {
                a,
                b,
                message: format!("interval budget {budget} exhausted"),
            });
        }
        let m = 0.5 * (p.a + p.b);
        let lm = 0.5 * (p.a + m);
        let rm = 0.5 * (m + p.b);
        let flm = f(lm)?;
        let frm = f(rm)?;
        let left = (m - p.a) / 6.0 * (p.fa + 4.0 * flm + p.fm);
        let right = (p.b - m) / 6.0 * (p.fm + 4.0 * frm + p.fb);
        let delta = left + right - p.whole;
        if !delta.is_finite() {
            return Err(Error::QuadratureFailure {
                a: p.a,
                b: p.b,
                message: "non-finite integrand".into(),
            });
        }
        if delta.abs() <= 15.0 * p.tol || p.depth >= 60 || (m - p.a) <= f64::EPSILON * m.abs() {
            if delta.abs() > 15.0 * p.tol && p.depth >= 60 {
                return Err(Error::QuadratureFailure {
                    a: p.a,
                    b: p.b,
                    message: "maximum subdivision depth reached".into(),
                });
            }
            total += left + right + delta / 15.0;
        } else {
            stack.push(Piece {
                a: p.a,
                b: m,
                fa: p.fa,
                fm: flm,
                fb: p.fm,
                whole: left,
                tol: 0.5 * p.tol,
                depth: p.depth + 1,
            });
            stack.push(Piece {
                a: m,
                b: p.b,
                fa: p.fm,
                fm: frm,
                fb: p.fb,
                whole: right,
                tol: 0.5 * p.tol,
                depth: p.depth + 1,
            });
        }
    }
    Ok(total)
}

/// Integral of the piecewise quadratic through `(xs[i], ys[i])`, taken in
/// consecutive panels of two intervals (Simpson's rule on a nonuniform grid).
/// A trailing single interval is covered by the quadratic through the last
/// three nodes.
pub fn simpson_nonuniform(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    if n < 2 {
        return 0.0;
    }
    if n == 2 {
        return 0.5 * (xs[1] - xs[0]) * (ys[0] + ys[1]);
    }
    let mut total = 0.0;
    let mut i = 0;
    while i + 2 < n {
        total += panel(xs[i], xs[i + 1], xs[i + 2], ys[i], ys[i + 1], ys[i + 2], xs[i], xs[i + 2]);
        i += 2;
    }
    if i + 1 < n {
        // one interval left: [xs[n-2], xs[n-1]] using nodes n-3, n-2, n-1
        total += panel(
            xs[n - 3],
            xs[n - 2],
            xs[n - 1],
            ys[n - 3],
            ys[n - 2],
            ys[n - 1],
            xs[n - 2],
            xs[n - 1],
        );
    }
    total
}

/// Integral over `[lo, hi]` of the quadratic interpolating three points.
#[allow(clippy::too_many_arguments)]
fn panel(x0: f64, x1: f64, x2: f64, y0: f64, y1: f64, y2: f64, lo: f64, hi: f64) -> f64 {
    // Lagrange basis integrated exactly; work relative to x0 for accuracy.
    let (a, b) = (x1 - x0, x2 - x0);
    let (s, t) = (lo - x0, hi - x0);
    let int = |c0: f64, c1: f64, c2: f64| {
        // integral of c0 + c1 x + c2 x^2 on [s, t]
        c0 * (t - s) + c1 * (t * t - s * s) / 2.0 + c2 * (t * t * t - s * s * s) / 3.0
    };
    // L0 = (x - a)(x - b) / (ab), L1 = x (x - b) / (a (a - b)), L2 = x (x - a) / (b (b - a))
    let l0 = int(a * b, -(a + b), 1.0) / (a * b);
    let l1 = int(0.0, -b, 1.0) / (a * (a - b));
    let l2 = int(0.0, -a, 1.0) / (b * (b - a));
    y0 * l0 + y1 * l1 + y2 * l2
}

/// Geometric grid of `n >= 2` points from `lo` to `hi` inclusive, both positive.
pub fn geometric_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2 && lo > 0.0 && hi > lo);
    let ratio = (hi / lo).ln() / (n - 1) as f64;
    let mut g: Vec<f64> = (0..n).map(|i| lo * (ratio * i as f64).exp()).collect();
    g[n - 1] = hi;
    g
}
