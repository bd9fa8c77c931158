use std::fmt;

use super::{Dual2, ExprError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constant {
    Pi,
    E,
}

impl Constant {
    pub fn value(self) -> f64 {
        match self {
            Constant::Pi => std::f64::consts::PI,
            Constant::E => std::f64::consts::E,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Constant::Pi => "pi",
            Constant::E => "e",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Ln,
    Exp,
    Sqrt,
    Abs,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Ln => "ln",
            Func::Exp => "exp",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "ln" => Some(Func::Ln),
            "exp" => Some(Func::Exp),
            "sqrt" => Some(Func::Sqrt),
            "abs" => Some(Func::Abs),
            _ => None,
        }
    }
}

/// Expression tree. Literals produced by the parser are always nonnegative;
/// a leading minus is a [`Expr::Neg`] node.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Const(Constant),
    Var,
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn num(v: f64) -> Self {
        Expr::Num(v)
    }

    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Self {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn call(f: Func, arg: Expr) -> Self {
        Expr::Call(f, Box::new(arg))
    }

    pub fn neg(e: Expr) -> Self {
        Expr::Neg(Box::new(e))
    }

    /// Whether the subtree mentions the variable `u`.
    pub fn depends_on_u(&self) -> bool {
        match self {
            Expr::Num(_) | Expr::Const(_) => false,
            Expr::Var => true,
            Expr::Neg(e) | Expr::Call(_, e) => e.depends_on_u(),
            Expr::Binary(_, a, b) => a.depends_on_u() || b.depends_on_u(),
        }
    }

    /// Plain value at `u`.
    pub fn eval(&self, u: f64) -> Result<f64, ExprError> {
        self.eval2(u).map(|d| d.value)
    }

    /// Value, first and second derivative with respect to `u`.
    pub fn eval2(&self, u: f64) -> Result<Dual2, ExprError> {
        let out = self.eval_node(u)?;
        if !out.is_finite() {
            return Err(self.domain(u, "non-finite result"));
        }
        Ok(out)
    }

    fn domain(&self, u: f64, reason: &str) -> ExprError {
        ExprError::Domain {
            u,
            subexpr: self.to_string(),
            reason: reason.to_string(),
        }
    }

    fn eval_node(&self, u: f64) -> Result<Dual2, ExprError> {
        let out = match self {
            Expr::Num(v) => Dual2::constant(*v),
            Expr::Const(c) => Dual2::constant(c.value()),
            Expr::Var => Dual2::variable(u),
            Expr::Neg(e) => -e.eval_node(u)?,
            Expr::Binary(op, a, b) => {
                let x = a.eval_node(u)?;
                let y = b.eval_node(u)?;
                match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    BinOp::Mul => x * y,
                    BinOp::Div => {
                        if y.value == 0.0 {
                            return Err(self.domain(u, "division by zero"));
                        }
                        x / y
                    }
                    BinOp::Pow => {
                        if b.depends_on_u() {
                            if x.value <= 0.0 {
                                return Err(
                                    self.domain(u, "variable exponent needs a positive base")
                                );
                            }
                            x.pow_dual(y)
                        } else {
                            let c = y.value;
                            let integral = c.fract() == 0.0;
                            if x.value < 0.0 && !integral {
                                return Err(self.domain(u, "non-integer power of a negative base"));
                            }
                            if x.value == 0.0 && (c < 0.0 || (!integral && c < 2.0)) {
                                return Err(self.domain(u, "power singular at zero"));
                            }
                            x.powf(c)
                        }
                    }
                }
            }
            Expr::Call(f, e) => {
                let x = e.eval_node(u)?;
                match f {
                    Func::Ln => {
                        if x.value <= 0.0 {
                            return Err(self.domain(u, "logarithm of a non-positive value"));
                        }
                        x.ln()
                    }
                    Func::Exp => x.exp(),
                    Func::Sqrt => {
                        if x.value <= 0.0 {
                            if x.value == 0.0 && x.d1 == 0.0 && x.d2 == 0.0 {
                                return Ok(Dual2::constant(0.0));
                            }
                            return Err(self.domain(u, "square root of a non-positive value"));
                        }
                        x.sqrt()
                    }
                    Func::Abs => x.abs(),
                }
            }
        };
        if out.value.is_nan() {
            return Err(self.domain(u, "undefined value"));
        }
        Ok(out)
    }
}

/// Fully parenthesized canonical form: `parse(&e.to_string())` reproduces `e`.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::Const(c) => f.write_str(c.name()),
            Expr::Var => f.write_str("u"),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Binary(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
            Expr::Call(func, e) => write!(f, "{}({e})", func.name()),
        }
    }
}
