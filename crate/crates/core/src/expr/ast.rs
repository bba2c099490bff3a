use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sqrt,
    Abs,
    Sin,
    Cos,
    Exp,
    Ln,
    Pow,
}

impl Func {
    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "pow" => Func::Pow,
            _ => return None,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Pow => "pow",
        }
    }

    pub fn arity(&self) -> usize {
        if *self == Func::Pow {
            2
        } else {
            1
        }
    }
}

/// Function expression in the variable `t`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
}

fn pow(x: f64, y: f64) -> Option<f64> {
    if x < 0.0 && y.fract() != 0.0 {
        None
    } else if y.fract() == 0.0 && y.abs() <= i32::MAX as f64 {
        Some(x.powi(y as i32))
    } else {
        Some(x.powf(y))
    }
}

impl Expr {
    pub fn constant(v: f64) -> Expr {
        Expr::Const(v)
    }

    pub fn var() -> Expr {
        Expr::Var
    }

    pub fn has_var(&self) -> bool {
        match self {
            Expr::Const(_) => false,
            Expr::Var => true,
            Expr::Neg(x) => x.has_var(),
            Expr::Add(l, r)
            | Expr::Sub(l, r)
            | Expr::Mul(l, r)
            | Expr::Div(l, r)
            | Expr::Pow(l, r) => l.has_var() || r.has_var(),
            Expr::Call(_, args) => args.iter().any(Expr::has_var),
        }
    }

    /// Evaluate at `t`. Any undefined or non-finite intermediate value is an
    /// [`Error::EvalDomain`] naming the offending subexpression.
    pub fn eval(&self, t: f64) -> Result<f64> {
        let fail = || Error::EvalDomain {
            node: self.to_string(),
            t,
        };
        let v = match self {
            Expr::Const(c) => *c,
            Expr::Var => t,
            Expr::Neg(x) => -x.eval(t)?,
            Expr::Add(l, r) => l.eval(t)? + r.eval(t)?,
            Expr::Sub(l, r) => l.eval(t)? - r.eval(t)?,
            Expr::Mul(l, r) => l.eval(t)? * r.eval(t)?,
            Expr::Div(l, r) => {
                let (n, d) = (l.eval(t)?, r.eval(t)?);
                if d == 0.0 {
                    return Err(fail());
                }
                n / d
            }
            Expr::Pow(l, r) => pow(l.eval(t)?, r.eval(t)?).ok_or_else(fail)?,
            Expr::Call(func, args) => {
                let x = args[0].eval(t)?;
                match func {
                    Func::Sqrt if x < 0.0 => return Err(fail()),
                    Func::Sqrt => x.sqrt(),
                    Func::Abs => x.abs(),
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Exp => x.exp(),
                    Func::Ln if x <= 0.0 => return Err(fail()),
                    Func::Ln => x.ln(),
                    Func::Pow => pow(x, args[1].eval(t)?).ok_or_else(fail)?,
                }
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(fail())
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Const(c) if *c < 0.0 || c.is_sign_negative() => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }
}

struct Wrapped<'a>(&'a Expr, u8);

impl fmt::Display for Wrapped<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.precedence() < self.1 {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// Prints with the fewest parentheses that reparse to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var => f.write_str("t"),
            Expr::Neg(x) => write!(f, "-{}", Wrapped(x, 3)),
            Expr::Add(l, r) => write!(f, "{} + {}", Wrapped(l, 1), Wrapped(r, 2)),
            Expr::Sub(l, r) => write!(f, "{} - {}", Wrapped(l, 1), Wrapped(r, 2)),
            Expr::Mul(l, r) => write!(f, "{}*{}", Wrapped(l, 2), Wrapped(r, 3)),
            Expr::Div(l, r) => write!(f, "{}/{}", Wrapped(l, 2), Wrapped(r, 3)),
            Expr::Pow(l, r) => write!(f, "{}^{}", Wrapped(l, 5), Wrapped(r, 3)),
            Expr::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $variant:ident) => {
        impl std::ops::$tr for Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                Expr::$variant(Box::new(self), Box::new(rhs))
            }
        }
    };
}

binop!(Add, add, Add);
binop!(Sub, sub, Sub);
binop!(Mul, mul, Mul);
binop!(Div, div, Div);

impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}
