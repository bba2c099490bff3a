//! The time-scale description language.
//!
//! ```text
//! scale := "interval" "(" num "," num ")"
//!        | "points" "(" num ("," num)* ")"
//!        | "grid" "(" num "," num "," num ")"
//!        | "qgrid" "(" num "," num "," num ("," ("zero" | "neg"))* ")"
//!        | "union" "(" scale ("," scale)* ")"
//! ```
//!
//! Each `num` is a constant expression (no `t`).

use std::fmt;

use super::ast::Expr;
use super::lexer::{syntax, Tok};
use super::parser::Parser;
use crate::error::{Error, Result};
use crate::timescale::{Component, TimeScale};

#[derive(Debug, Clone, PartialEq)]
pub enum ScaleExpr {
    Interval(Expr, Expr),
    Points(Vec<Expr>),
    Grid(Expr, Expr, Expr),
    QGrid {
        q: Expr,
        k_min: Expr,
        k_max: Expr,
        zero: bool,
        neg: bool,
    },
    Union(Vec<ScaleExpr>),
}

fn constant(p: &mut Parser) -> Result<Expr> {
    let start = p.peek().clone();
    let e = p.expr()?;
    if e.has_var() {
        return Err(syntax(
            start.line,
            start.column,
            "a constant expression",
            "an expression in t".into(),
        ));
    }
    Ok(e)
}

fn args(p: &mut Parser, n: usize) -> Result<Vec<Expr>> {
    let mut out = vec![constant(p)?];
    while out.len() < n {
        p.expect(Tok::Comma, "','")?;
        out.push(constant(p)?);
    }
    Ok(out)
}

fn scale(p: &mut Parser) -> Result<ScaleExpr> {
    let head = p.peek().clone();
    let Tok::Ident(name) = head.tok.clone() else {
        return p.error_here("interval, points, grid, qgrid or union");
    };
    let expected = "interval, points, grid, qgrid or union";
    if !matches!(
        name.as_str(),
        "interval" | "points" | "grid" | "qgrid" | "union"
    ) {
        return p.error_here(expected);
    }
    p.next();
    p.expect(Tok::LParen, "'('")?;
    let out = match name.as_str() {
        "interval" => {
            let mut a = args(p, 2)?.into_iter();
            ScaleExpr::Interval(a.next().unwrap(), a.next().unwrap())
        }
        "points" => {
            let mut pts = vec![constant(p)?];
            while p.eat(&Tok::Comma) {
                pts.push(constant(p)?);
            }
            ScaleExpr::Points(pts)
        }
        "grid" => {
            let mut a = args(p, 3)?.into_iter();
            ScaleExpr::Grid(a.next().unwrap(), a.next().unwrap(), a.next().unwrap())
        }
        "qgrid" => {
            let mut a = args(p, 3)?.into_iter();
            let (q, k_min, k_max) = (a.next().unwrap(), a.next().unwrap(), a.next().unwrap());
            let (mut zero, mut neg) = (false, false);
            while p.eat(&Tok::Comma) {
                match p.peek().tok.clone() {
                    Tok::Ident(f) if f == "zero" && !zero => zero = true,
                    Tok::Ident(f) if f == "neg" && !neg => neg = true,
                    _ => return p.error_here("flag 'zero' or 'neg'"),
                }
                p.next();
            }
            ScaleExpr::QGrid {
                q,
                k_min,
                k_max,
                zero,
                neg,
            }
        }
        _ => {
            let mut parts = vec![scale(p)?];
            while p.eat(&Tok::Comma) {
                parts.push(scale(p)?);
            }
            ScaleExpr::Union(parts)
        }
    };
    p.expect(Tok::RParen, "')'")?;
    Ok(out)
}

/// Parse a scale description without evaluating it.
pub fn parse_scale_expr(src: &str) -> Result<ScaleExpr> {
    let mut p = Parser::new(src)?;
    let s = scale(&mut p)?;
    p.finish()?;
    Ok(s)
}

/// Parse and build a normalized time scale.
pub fn parse_scale(src: &str) -> Result<TimeScale> {
    parse_scale_expr(src)?.to_scale()
}

fn value(e: &Expr) -> Result<f64> {
    e.eval(0.0)
        .map_err(|_| Error::Validation(format!("cannot evaluate {e}")))
}

fn integer(e: &Expr) -> Result<i32> {
    let v = value(e)?;
    if v.fract() != 0.0 || v.abs() > 10_000.0 {
        return Err(Error::Validation(format!(
            "qgrid exponent must be an integer in [-10000, 10000], got {v}"
        )));
    }
    Ok(v as i32)
}

impl ScaleExpr {
    pub fn components(&self) -> Result<Vec<Component>> {
        Ok(match self {
            ScaleExpr::Interval(lo, hi) => vec![Component::Interval {
                lo: value(lo)?,
                hi: value(hi)?,
            }],
            ScaleExpr::Points(pts) => vec![Component::Points {
                points: pts.iter().map(value).collect::<Result<_>>()?,
            }],
            ScaleExpr::Grid(a, b, h) => vec![Component::Grid {
                start: value(a)?,
                stop: value(b)?,
                step: value(h)?,
            }],
            ScaleExpr::QGrid {
                q,
                k_min,
                k_max,
                zero,
                neg,
            } => vec![Component::GeometricGrid {
                q: value(q)?,
                k_min: integer(k_min)?,
                k_max: integer(k_max)?,
                include_zero: *zero,
                sign: if *neg { -1 } else { 1 },
            }],
            ScaleExpr::Union(parts) => {
                let mut out = Vec::new();
                for p in parts {
                    out.extend(p.components()?);
                }
                out
            }
        })
    }

    pub fn to_scale(&self) -> Result<TimeScale> {
        TimeScale::new(self.components()?)
    }
}

fn list(f: &mut fmt::Formatter<'_>, items: &[impl fmt::Display]) -> fmt::Result {
    for (i, x) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

impl fmt::Display for ScaleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScaleExpr::Interval(a, b) => write!(f, "interval({a}, {b})"),
            ScaleExpr::Points(p) => {
                f.write_str("points(")?;
                list(f, p)?;
                f.write_str(")")
            }
            ScaleExpr::Grid(a, b, h) => write!(f, "grid({a}, {b}, {h})"),
            ScaleExpr::QGrid {
                q,
                k_min,
                k_max,
                zero,
                neg,
            } => {
                write!(f, "qgrid({q}, {k_min}, {k_max}")?;
                if *zero {
                    f.write_str(", zero")?;
                }
                if *neg {
                    f.write_str(", neg")?;
                }
                f.write_str(")")
            }
            ScaleExpr::Union(parts) => {
                f.write_str("union(")?;
                list(f, parts)?;
                f.write_str(")")
            }
        }
    }
}
