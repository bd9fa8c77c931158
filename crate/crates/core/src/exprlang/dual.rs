use std::ops::{Add, Div, Mul, Neg, Sub};

/// Truncated second-order Taylor jet: value, first and second derivative
/// with respect to the single independent variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dual2 {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

/// `coef * x^e`, with the convention that a zero coefficient kills the term
/// even where `x^e` is infinite.
fn scaled_pow(coef: f64, x: f64, e: f64) -> f64 {
    if coef == 0.0 {
        0.0
    } else if e.fract() == 0.0 && e.abs() < i32::MAX as f64 {
        coef * x.powi(e as i32)
    } else {
        coef * x.powf(e)
    }
}

impl Dual2 {
    pub const fn new(value: f64, d1: f64, d2: f64) -> Self {
        Self { value, d1, d2 }
    }

    pub const fn constant(value: f64) -> Self {
        Self::new(value, 0.0, 0.0)
    }

    pub const fn variable(value: f64) -> Self {
        Self::new(value, 1.0, 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite() && self.d1.is_finite() && self.d2.is_finite()
    }

    /// Composes with a scalar function given its value and first two
    /// derivatives at `self.value`.
    pub fn chain(self, f: f64, df: f64, d2f: f64) -> Self {
        Self {
            value: f,
            d1: df * self.d1,
            d2: d2f * self.d1 * self.d1 + df * self.d2,
        }
    }

    pub fn recip(self) -> Self {
        let x = self.value;
        self.chain(1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x))
    }

    pub fn ln(self) -> Self {
        let x = self.value;
        self.chain(x.ln(), 1.0 / x, -1.0 / (x * x))
    }

    pub fn exp(self) -> Self {
        let e = self.value.exp();
        self.chain(e, e, e)
    }

    pub fn sqrt(self) -> Self {
        let s = self.value.sqrt();
        self.chain(s, 0.5 / s, -0.25 / (s * self.value))
    }

    /// `|x|` with derivative `sign(x)` and the derivative at zero taken as 0.
    pub fn abs(self) -> Self {
        let sign = if self.value > 0.0 {
            1.0
        } else if self.value < 0.0 {
            -1.0
        } else {
            0.0
        };
        self.chain(self.value.abs(), sign, 0.0)
    }

    /// Power with a constant exponent.
    pub fn powf(self, c: f64) -> Self {
        let x = self.value;
        let f = if c.fract() == 0.0 && c.abs() < i32::MAX as f64 {
            x.powi(c as i32)
        } else {
            x.powf(c)
        };
        self.chain(
            f,
            scaled_pow(c, x, c - 1.0),
            scaled_pow(c * (c - 1.0), x, c - 2.0),
        )
    }

    /// `self^rhs` for a varying exponent, as `exp(rhs * ln(self))`.
    /// Requires a positive base.
    pub fn pow_dual(self, rhs: Self) -> Self {
        (rhs * self.ln()).exp()
    }
}

impl Add for Dual2 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.value + rhs.value, self.d1 + rhs.d1, self.d2 + rhs.d2)
    }
}

impl Sub for Dual2 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.value - rhs.value, self.d1 - rhs.d1, self.d2 - rhs.d2)
    }
}

impl Mul for Dual2 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::new(
            self.value * rhs.value,
            self.d1 * rhs.value + self.value * rhs.d1,
            self.d2 * rhs.value + 2.0 * self.d1 * rhs.d1 + self.value * rhs.d2,
        )
    }
}

impl Div for Dual2 {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        self * rhs.recip()
    }
}

impl Neg for Dual2 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.value, -self.d1, -self.d2)
    }
}
