//! Precedence-climbing parser shared by the function and scale languages.

use super::ast::{Expr, Func};
use super::lexer::{syntax, tokenize, Tok, Token};
use crate::error::Result;

pub(crate) struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    pub(crate) fn new(src: &str) -> Result<Self> {
        Ok(Parser {
            toks: tokenize(src)?,
            pos: 0,
        })
    }

    pub(crate) fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    pub(crate) fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn error_here<T>(&self, expected: &str) -> Result<T> {
        let t = self.peek();
        Err(syntax(t.line, t.column, expected, t.tok.describe()))
    }

    pub(crate) fn expect(&mut self, tok: Tok, expected: &str) -> Result<Token> {
        if self.peek().tok == tok {
            Ok(self.next())
        } else {
            self.error_here(expected)
        }
    }

    pub(crate) fn eat(&mut self, tok: &Tok) -> bool {
        if &self.peek().tok == tok {
            self.next();
            true
        } else {
            false
        }
    }

    pub(crate) fn finish(&mut self) -> Result<()> {
        if self.peek().tok == Tok::Eof {
            Ok(())
        } else {
            self.error_here("end of input")
        }
    }

    /// `expr := term (("+" | "-") term)*`
    pub(crate) fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(&Tok::Plus) {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(&Tok::Minus) {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    /// `term := unary (("*" | "/") unary)*`
    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(&Tok::Star) {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat(&Tok::Slash) {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    /// `unary := "-" unary | power`
    fn unary(&mut self) -> Result<Expr> {
        if self.eat(&Tok::Minus) {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    /// `power := atom ("^" unary)?`, so `^` is right-associative and binds
    /// tighter than a leading minus.
    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat(&Tok::Caret) {
            return Ok(Expr::Pow(Box::new(base), Box::new(self.unary()?)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().tok.clone() {
            Tok::Num(v) => {
                self.next();
                Ok(Expr::Const(v))
            }
            Tok::LParen => {
                self.next();
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Tok::Ident(name) => match name.as_str() {
                "t" => {
                    self.next();
                    Ok(Expr::Var)
                }
                "pi" => {
                    self.next();
                    Ok(Expr::Const(std::f64::consts::PI))
                }
                _ => match Func::from_name(&name) {
                    Some(func) => {
                        self.next();
                        self.call(func)
                    }
                    None => self.error_here("'t', 'pi', a number, a function name or '('"),
                },
            },
            _ => self.error_here("an expression"),
        }
    }

    fn call(&mut self, func: Func) -> Result<Expr> {
        self.expect(Tok::LParen, "'('")?;
        let mut args = vec![self.expr()?];
        while args.len() < func.arity() {
            self.expect(
                Tok::Comma,
                &format!("',' ({} takes {} arguments)", func.name(), func.arity()),
            )?;
            args.push(self.expr()?);
        }
        self.expect(
            Tok::RParen,
            &format!(
                "')' ({} takes {} argument{})",
                func.name(),
                func.arity(),
                if func.arity() == 1 { "" } else { "s" }
            ),
        )?;
        Ok(Expr::Call(func, args))
    }
}

/// Parse a function expression in `t`.
pub fn parse_expr(src: &str) -> Result<Expr> {
    let mut p = Parser::new(src)?;
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::{Error, SyntaxError};

    fn t() -> Expr {
        Expr::Var
    }

    fn c(v: f64) -> Expr {
        Expr::Const(v)
    }

    fn pos(src: &str) -> (usize, usize) {
        match parse_expr(src) {
            Err(Error::Syntax(SyntaxError { line, column, .. })) => (line, column),
            other => panic!("expected syntax error for {src:?}, got {other:?}"),
        }
    }

    #[test]
    fn spec_examples() {
        assert_eq!(
            parse_expr("sqrt(t)").unwrap(),
            Expr::Call(Func::Sqrt, vec![t()])
        );
        assert_eq!(
            parse_expr("(t-1)^3/ (t+2)").unwrap(),
            Expr::Pow(Box::new(t() - c(1.0)), Box::new(c(3.0))) / (t() + c(2.0))
        );
        assert_eq!(pos("t +"), (1, 4));
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(
            parse_expr("-t^2").unwrap(),
            -Expr::Pow(Box::new(t()), Box::new(c(2.0)))
        );
        assert_eq!(
            parse_expr("2^3^2").unwrap(),
            Expr::Pow(
                Box::new(c(2.0)),
                Box::new(Expr::Pow(Box::new(c(3.0)), Box::new(c(2.0))))
            )
        );
        assert_eq!(
            parse_expr("2^-1").unwrap(),
            Expr::Pow(Box::new(c(2.0)), Box::new(-c(1.0)))
        );
        assert_eq!(parse_expr("1-t-2").unwrap(), (c(1.0) - t()) - c(2.0));
        assert_eq!(parse_expr("1/t/2").unwrap(), (c(1.0) / t()) / c(2.0));
        assert_eq!(parse_expr("1+2*t").unwrap(), c(1.0) + c(2.0) * t());
        assert_eq!(parse_expr("-t*2").unwrap(), (-t()) * c(2.0));
        assert_eq!(parse_expr("--t").unwrap(), -(-t()));
    }

    #[test]
    fn functions_and_constants() {
        assert_eq!(
            parse_expr("pow(t, 2)").unwrap(),
            Expr::Call(Func::Pow, vec![t(), c(2.0)])
        );
        assert_eq!(parse_expr("pi").unwrap(), c(std::f64::consts::PI));
        for name in ["abs", "sin", "cos", "exp", "ln"] {
            assert!(parse_expr(&format!("{name}(t)")).is_ok());
        }
    }

    #[test]
    fn error_positions() {
        assert_eq!(pos(""), (1, 1));
        assert_eq!(pos("t t"), (1, 3));
        assert_eq!(pos("(t"), (1, 3));
        assert_eq!(pos("foo(t)"), (1, 1));
        assert_eq!(pos("sqrt(t, 2)"), (1, 7));
        assert_eq!(pos("pow(t)"), (1, 6));
        assert_eq!(pos("t +\n  * 2"), (2, 3));
        assert_eq!(pos("sqrt t"), (1, 6));
        assert_eq!(pos(")"), (1, 1));
    }

    #[test]
    fn round_trip_examples() {
        for src in [
            "(t-1)^3/(t+2)",
            "-t^2",
            "(-t)^2",
            "2^-1",
            "2^3^2",
            "(2^3)^2",
            "t-(t-1)",
            "t/(t*2)",
            "-(t+1)*3",
            "pow(abs(t), 1.5) + ln(exp(t))",
            "1e-20*t",
        ] {
            let e = parse_expr(src).unwrap();
            assert_eq!(parse_expr(&e.to_string()).unwrap(), e, "{src} -> {e}");
        }
    }
}
