//! Closed-form Newton solutions, `p(u) = 1/(1+u²)` with parallel flux, for
//! `d = 3` and `d = 4`. Used as a reference for the numerical solver.
//!
//! The resistance expressions here were re-derived from
//! `R/T^{d-1} = p(U) + |p'(U)|^{1+ω} g(U)`; at `U = 1` both reduce to the
//! flat-disk value `T^{d-1}`.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalSolution {
    pub dim: u32,
    pub radius: f64,
    /// Terminal slope `U >= 1`.
    pub terminal_slope: f64,
    pub lambda: f64,
    pub t0: f64,
    pub beta: f64,
    pub r_plus: f64,
}

/// `d = 3`. Panics unless `U >= 1` and `T > 0`.
pub fn newton3(radius: f64, big_u: f64) -> ClassicalSolution {
    check_args(radius, big_u);
    let (t, u) = (radius, big_u);
    let w = 1.0 + u * u;
    let u2 = u * u;
    ClassicalSolution {
        dim: 3,
        radius,
        terminal_slope: u,
        lambda: 2.0 * t * u / (w * w),
        t0: 4.0 * t * u / (w * w),
        beta: t * u * (-7.0 + 4.0 * u2 + 3.0 * u2 * u2 - 4.0 * u.ln()) / (4.0 * w * w),
        r_plus: t * t * (2.0 + 17.0 * u2 + 10.0 * u2 * u2 + 3.0 * u2 * u2 * u2 + 4.0 * u2 * u.ln())
            / (2.0 * w.powi(4)),
    }
}

/// `d = 4`. Panics unless `U >= 1` and `T > 0`.
pub fn newton4(radius: f64, big_u: f64) -> ClassicalSolution {
    check_args(radius, big_u);
    let (t, u) = (radius, big_u);
    let w = 1.0 + u * u;
    let su = u.sqrt();
    ClassicalSolution {
        dim: 4,
        radius,
        terminal_slope: u,
        lambda: 2.0 * t * t * u / (w * w),
        t0: 2.0 * t * su / w,
        beta: t * (-5.0 * u + 3.0 * u.powi(3) + 2.0 * su) / (5.0 * w),
        r_plus: t.powi(3) * (5.0 + 30.0 * u * u + 9.0 * u.powi(4) - 4.0 * u * su) / (5.0 * w.powi(3)),
    }
}

fn check_args(radius: f64, big_u: f64) {
    assert!(radius > 0.0, "radius must be positive, got {radius}");
    assert!(big_u >= 1.0, "terminal slope must be >= 1, got {big_u}");
}

impl ClassicalSolution {
    /// Radius at which the slope equals `u ∈ [1, U]`.
    pub fn t_at(&self, u: f64) -> f64 {
        let big_u = self.terminal_slope;
        match self.dim {
            3 => 0.5 * self.lambda * (u.powi(3) + 2.0 * u + 1.0 / u),
            _ => self.radius * (big_u / u).sqrt() * (1.0 + u * u) / (1.0 + big_u * big_u),
        }
    }

    /// Height at slope `u ∈ [1, U]`.
    pub fn x_at(&self, u: f64) -> f64 {
        let big_u = self.terminal_slope;
        match self.dim {
            3 => 0.5 * self.lambda * (0.75 * u.powi(4) + u * u - u.ln() - 1.75),
            _ => {
                let su = u.sqrt();
                self.radius * big_u.sqrt() * (-5.0 * su + 3.0 * u * u * su + 2.0)
                    / (5.0 * (1.0 + big_u * big_u))
            }
        }
    }
}
