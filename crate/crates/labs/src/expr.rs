//! Symbolic expressions in the two surface parameters.
//!
//! The vocabulary is deliberately small: rational constants, π, u, v, the
//! four arithmetic operations, integer powers, sin and cos. That is closed
//! under differentiation, and evaluation is generic over the floating
//! point type. Simplification is constant folding and zero/one elimination
//! only; correctness is anchored by finite-difference tests downstream,
//! not by canonical forms.

use std::fmt;
use std::rc::Rc;

use num_rational::Ratio;
use num_traits::{Float, FloatConst, FromPrimitive, Zero};

pub type Q = Ratio<i64>;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Var {
    U,
    V,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::U => write!(f, "u"),
            Var::V => write!(f, "v"),
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub enum Expr {
    Const(Q),
    Pi,
    Var(Var),
    Neg(Rc<Expr>),
    Add(Rc<Expr>, Rc<Expr>),
    Sub(Rc<Expr>, Rc<Expr>),
    Mul(Rc<Expr>, Rc<Expr>),
    Div(Rc<Expr>, Rc<Expr>),
    /// Integer power of the base expression.
    Pow(Rc<Expr>, i32),
    Sin(Rc<Expr>),
    Cos(Rc<Expr>),
}

impl Expr {
    pub fn constant(q: Q) -> Expr {
        Expr::Const(q)
    }

    pub fn int(n: i64) -> Expr {
        Expr::Const(Q::from_integer(n))
    }

    pub fn var(v: Var) -> Expr {
        Expr::Var(v)
    }

    fn as_const(&self) -> Option<Q> {
        match self {
            Expr::Const(q) => Some(*q),
            _ => None,
        }
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => Expr::Const(x + y),
            (Some(x), _) if x.is_zero() => b,
            (_, Some(y)) if y.is_zero() => a,
            _ => Expr::Add(Rc::new(a), Rc::new(b)),
        }
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => Expr::Const(x - y),
            (_, Some(y)) if y.is_zero() => a,
            (Some(x), _) if x.is_zero() => Expr::neg(b),
            _ => Expr::Sub(Rc::new(a), Rc::new(b)),
        }
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => Expr::Const(x * y),
            (Some(x), _) if x.is_zero() => Expr::int(0),
            (_, Some(y)) if y.is_zero() => Expr::int(0),
            (Some(x), _) if x == Q::from_integer(1) => b,
            (_, Some(y)) if y == Q::from_integer(1) => a,
            _ => Expr::Mul(Rc::new(a), Rc::new(b)),
        }
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) if !y.is_zero() => Expr::Const(x / y),
            (Some(x), _) if x.is_zero() => Expr::int(0),
            (_, Some(y)) if y == Q::from_integer(1) => a,
            _ => Expr::Div(Rc::new(a), Rc::new(b)),
        }
    }

    pub fn neg(a: Expr) -> Expr {
        match &a {
            Expr::Const(q) => Expr::Const(-q),
            Expr::Neg(inner) => inner.as_ref().clone(),
            _ => Expr::Neg(Rc::new(a)),
        }
    }

    pub fn pow(a: Expr, n: i32) -> Expr {
        match n {
            0 => Expr::int(1),
            1 => a,
            _ => match a.as_const() {
                Some(x) if n > 0 => {
                    let mut acc = Q::from_integer(1);
                    for _ in 0..n {
                        acc *= x;
                    }
                    Expr::Const(acc)
                }
                _ => Expr::Pow(Rc::new(a), n),
            },
        }
    }

    pub fn sin(a: Expr) -> Expr {
        Expr::Sin(Rc::new(a))
    }

    pub fn cos(a: Expr) -> Expr {
        Expr::Cos(Rc::new(a))
    }

    /// Partial derivative with respect to `var`.
    pub fn diff(&self, var: Var) -> Expr {
        match self {
            Expr::Const(_) | Expr::Pi => Expr::int(0),
            Expr::Var(v) => Expr::int(if *v == var { 1 } else { 0 }),
            Expr::Neg(a) => Expr::neg(a.diff(var)),
            Expr::Add(a, b) => Expr::add(a.diff(var), b.diff(var)),
            Expr::Sub(a, b) => Expr::sub(a.diff(var), b.diff(var)),
            Expr::Mul(a, b) => Expr::add(
                Expr::mul(a.diff(var), b.as_ref().clone()),
                Expr::mul(a.as_ref().clone(), b.diff(var)),
            ),
            Expr::Div(a, b) => Expr::div(
                Expr::sub(
                    Expr::mul(a.diff(var), b.as_ref().clone()),
                    Expr::mul(a.as_ref().clone(), b.diff(var)),
                ),
                Expr::pow(b.as_ref().clone(), 2),
            ),
            Expr::Pow(a, n) => Expr::mul(
                Expr::mul(Expr::int(*n as i64), Expr::pow(a.as_ref().clone(), n - 1)),
                a.diff(var),
            ),
            Expr::Sin(a) => Expr::mul(Expr::cos(a.as_ref().clone()), a.diff(var)),
            Expr::Cos(a) => Expr::neg(Expr::mul(Expr::sin(a.as_ref().clone()), a.diff(var))),
        }
    }

    /// Deterministic evaluation at (u, v).
    pub fn eval<F: Float + FloatConst + FromPrimitive>(&self, u: F, v: F) -> F {
        match self {
            Expr::Const(q) => {
                F::from_i64(*q.numer()).unwrap() / F::from_i64(*q.denom()).unwrap()
            }
            Expr::Pi => F::PI(),
            Expr::Var(Var::U) => u,
            Expr::Var(Var::V) => v,
            Expr::Neg(a) => -a.eval(u, v),
            Expr::Add(a, b) => a.eval(u, v) + b.eval(u, v),
            Expr::Sub(a, b) => a.eval(u, v) - b.eval(u, v),
            Expr::Mul(a, b) => a.eval(u, v) * b.eval(u, v),
            Expr::Div(a, b) => a.eval(u, v) / b.eval(u, v),
            Expr::Pow(a, n) => a.eval(u, v).powi(*n),
            Expr::Sin(a) => a.eval(u, v).sin(),
            Expr::Cos(a) => a.eval(u, v).cos(),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(q) => {
                if q.denom() == &1 {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Expr::Pi => write!(f, "pi"),
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Neg(a) => write!(f, "-({a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, n) => write!(f, "({a})^{n}"),
            Expr::Sin(a) => write!(f, "sin({a})"),
            Expr::Cos(a) => write!(f, "cos({a})"),
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct ExprError {
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {}: {}", self.pos + 1, self.msg)
    }
}

impl fmt::Debug for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl std::error::Error for ExprError {}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && (self.src[self.pos] as char).is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ExprError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{}`", c as char))
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = Expr::add(acc, self.term()?);
            } else if self.eat(b'-') {
                acc = Expr::sub(acc, self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut acc = self.factor()?;
        loop {
            if self.eat(b'*') {
                acc = Expr::mul(acc, self.factor()?);
            } else if self.eat(b'/') {
                acc = Expr::div(acc, self.factor()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ExprError> {
        if self.eat(b'-') {
            return Ok(Expr::neg(self.factor()?));
        }
        if self.eat(b'+') {
            return self.factor();
        }
        let mut base = self.atom()?;
        while self.eat(b'^') {
            let n = self.integer_exponent()?;
            base = Expr::pow(base, n);
        }
        Ok(base)
    }

    fn integer_exponent(&mut self) -> Result<i32, ExprError> {
        self.skip_ws();
        let neg = self.eat(b'-');
        let start = self.pos;
        while matches!(self.src.get(self.pos), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected an integer exponent");
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let n: i32 = digits
            .parse()
            .map_err(|_| ExprError {
                pos: start,
                msg: "malformed exponent".into(),
            })?;
        Ok(if neg { -n } else { n })
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => self.identifier(),
            Some(c) => self.err(format!("unexpected `{}`", c as char)),
            None => self.err("unexpected end of input"),
        }
    }

    fn number(&mut self) -> Result<Expr, ExprError> {
        let start = self.pos;
        let mut saw_dot = false;
        while let Some(&c) = self.src.get(self.pos) {
            if c.is_ascii_digit() {
                self.pos += 1;
            } else if c == b'.' && !saw_dot {
                saw_dot = true;
                self.pos += 1;
            } else {
                break;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        if text == "." || text.is_empty() {
            return Err(ExprError {
                pos: start,
                msg: "malformed number".into(),
            });
        }
        let q = if let Some(dot) = text.find('.') {
            let whole = &text[..dot];
            let frac = &text[dot + 1..];
            let whole: i64 = if whole.is_empty() {
                0
            } else {
                whole.parse().map_err(|_| ExprError {
                    pos: start,
                    msg: "malformed number".into(),
                })?
            };
            let scale = 10i64.checked_pow(frac.len() as u32).ok_or(ExprError {
                pos: start,
                msg: "number has too many digits".into(),
            })?;
            let frac: i64 = if frac.is_empty() {
                return Err(ExprError {
                    pos: start,
                    msg: "malformed number".into(),
                });
            } else {
                frac.parse().map_err(|_| ExprError {
                    pos: start,
                    msg: "malformed number".into(),
                })?
            };
            Q::new(whole * scale + frac, scale)
        } else {
            Q::from_integer(text.parse().map_err(|_| ExprError {
                pos: start,
                msg: "malformed number".into(),
            })?)
        };
        Ok(Expr::Const(q))
    }

    fn identifier(&mut self) -> Result<Expr, ExprError> {
        let start = self.pos;
        while matches!(self.src.get(self.pos), Some(c) if c.is_ascii_alphanumeric() || *c == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        match name {
            "u" => Ok(Expr::var(Var::U)),
            "v" => Ok(Expr::var(Var::V)),
            "pi" => Ok(Expr::Pi),
            "sin" | "cos" => {
                self.expect(b'(').map_err(|_| ExprError {
                    pos: self.pos,
                    msg: format!("`{name}` takes one parenthesized argument"),
                })?;
                let arg = self.expr()?;
                self.expect(b')')?;
                Ok(if name == "sin" {
                    Expr::sin(arg)
                } else {
                    Expr::cos(arg)
                })
            }
            other => Err(ExprError {
                pos: start,
                msg: format!("unknown identifier `{other}`"),
            }),
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.src.len()
    }
}

/// Parses a single expression; the whole input must be consumed.
pub fn parse_expr(text: &str) -> Result<Expr, ExprError> {
    let mut p = Parser::new(text);
    let e = p.expr()?;
    if !p.at_end() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// Parses `(expr, expr, expr)` into the three components.
pub fn parse_components(text: &str) -> Result<[Expr; 3], ExprError> {
    let mut p = Parser::new(text);
    p.expect(b'(')?;
    let x = p.expr()?;
    p.expect(b',')?;
    let y = p.expr()?;
    p.expect(b',')?;
    let z = p.expr()?;
    p.expect(b')')?;
    if !p.at_end() {
        return p.err("trailing input after `)`");
    }
    Ok([x, y, z])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn parse_and_eval() {
        let e = parse_expr("(2+cos(v))*cos(u)").unwrap();
        let v = e.eval(0.3f64, 1.1);
        assert!(close(v, (2.0 + 1.1f64.cos()) * 0.3f64.cos()));
        let p = parse_expr("pi/2").unwrap();
        assert!(close(p.eval(0.0f64, 0.0), std::f64::consts::FRAC_PI_2));
        let d = parse_expr(".4 + 2.5*u^2").unwrap();
        assert!(close(d.eval(2.0f64, 0.0), 0.4 + 10.0));
        let neg_pow = parse_expr("u^-1").unwrap();
        assert!(close(neg_pow.eval(4.0f64, 0.0), 0.25));
    }

    #[test]
    fn parse_errors_carry_positions() {
        assert!(parse_expr("(u, v,").is_err());
        let e = parse_expr("sin cos").unwrap_err();
        assert!(e.msg.contains("parenthesized"), "{e}");
        let e = parse_expr("2 + w").unwrap_err();
        assert!(e.msg.contains("unknown identifier"), "{e}");
        assert_eq!(e.pos, 4);
        assert!(parse_expr("2..5").is_err());
        assert!(parse_components("(u, v,").is_err());
        assert!(parse_components("(u, v, 0) junk").is_err());
    }

    #[test]
    fn differentiation_rules() {
        let s = parse_expr("sin(u)").unwrap();
        assert_eq!(s.diff(Var::U), parse_expr("cos(u)").unwrap());
        // product/chain rule: d/dv (2+cos v)·cos u = −sin(v)·cos(u)
        let e = parse_expr("(2+cos(v))*cos(u)").unwrap();
        let dv = e.diff(Var::V);
        for (u, v) in [(0.2f64, 0.7), (1.5, -0.4), (3.0, 2.2)] {
            assert!(close(dv.eval(u, v), -v.sin() * u.cos()));
        }
        // a v-only expression has zero u-derivative
        let g = parse_expr("v^3 + sin(v)*pi").unwrap();
        assert_eq!(g.diff(Var::U), Expr::int(0));
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let exprs = [
            "sin(u)*cos(v) + u^3/(1+v^2)",
            "(2+cos(v))*sin(u)",
            "u*v - sin(u*v)",
        ];
        let h = 1e-6;
        for text in exprs {
            let e = parse_expr(text).unwrap();
            let du = e.diff(Var::U);
            for (u, v) in [(0.3f64, 0.8), (1.2, -0.5), (2.1, 0.1)] {
                let fd = (e.eval(u + h, v) - e.eval(u - h, v)) / (2.0 * h);
                assert!(
                    (du.eval(u, v) - fd).abs() < 1e-8,
                    "{text} at ({u},{v})"
                );
            }
        }
    }

    #[test]
    fn eval_is_generic_over_floats() {
        let e = parse_expr("pi * u / 2").unwrap();
        let x32: f32 = e.eval(1.0f32, 0.0);
        let x64: f64 = e.eval(1.0f64, 0.0);
        assert!((x32 as f64 - x64).abs() < 1e-6);
    }
}
