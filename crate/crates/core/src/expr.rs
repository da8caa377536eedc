//! A small expression language for scalar fields.
//!
//! Grammar (usual precedence, `^` right-associative):
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' unary)?
//! atom  := number | name | name '(' expr ')' | '(' expr ')'
//! ```
//!
//! Functions are `exp` and `log`; named constants are `pi` and `e`.
//! Derivatives are taken symbolically.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Exp(Box<Expr>),
    Log(Box<Expr>),
}

use Expr::*;

fn c(v: f64) -> Expr {
    Const(v)
}

fn add(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Const(x), Const(y)) => c(x + y),
        (Const(z), _) if *z == 0.0 => b,
        (_, Const(z)) if *z == 0.0 => a,
        _ => Add(Box::new(a), Box::new(b)),
    }
}

fn sub(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Const(x), Const(y)) => c(x - y),
        (_, Const(z)) if *z == 0.0 => a,
        (Const(z), _) if *z == 0.0 => neg(b),
        _ => Sub(Box::new(a), Box::new(b)),
    }
}

fn mul(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Const(x), Const(y)) => c(x * y),
        (Const(z), _) | (_, Const(z)) if *z == 0.0 => c(0.0),
        (Const(o), _) if *o == 1.0 => b,
        (_, Const(o)) if *o == 1.0 => a,
        _ => Mul(Box::new(a), Box::new(b)),
    }
}

fn div(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Const(x), Const(y)) => c(x / y),
        (Const(z), _) if *z == 0.0 => c(0.0),
        (_, Const(o)) if *o == 1.0 => a,
        _ => Div(Box::new(a), Box::new(b)),
    }
}

fn neg(a: Expr) -> Expr {
    match a {
        Const(x) => c(-x),
        Neg(inner) => *inner,
        a => Neg(Box::new(a)),
    }
}

fn pow(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Const(x), Const(y)) => c(x.powf(*y)),
        (_, Const(z)) if *z == 0.0 => c(1.0),
        (_, Const(o)) if *o == 1.0 => a,
        _ => Pow(Box::new(a), Box::new(b)),
    }
}

impl Expr {
    pub fn eval(&self, vars: &[f64]) -> f64 {
        match self {
            Const(v) => *v,
            Var(i) => vars[*i],
            Neg(a) => -a.eval(vars),
            Add(a, b) => a.eval(vars) + b.eval(vars),
            Sub(a, b) => a.eval(vars) - b.eval(vars),
            Mul(a, b) => a.eval(vars) * b.eval(vars),
            Div(a, b) => a.eval(vars) / b.eval(vars),
            Pow(a, b) => {
                let (x, y) = (a.eval(vars), b.eval(vars));
                if y.fract() == 0.0 && y.abs() <= i32::MAX as f64 {
                    x.powi(y as i32)
                } else {
                    x.powf(y)
                }
            }
            Exp(a) => a.eval(vars).exp(),
            Log(a) => a.eval(vars).ln(),
        }
    }

    /// Symbolic partial derivative with respect to variable `var`.
    pub fn diff(&self, var: usize) -> Expr {
        match self {
            Const(_) => c(0.0),
            Var(i) => c(if *i == var { 1.0 } else { 0.0 }),
            Neg(a) => neg(a.diff(var)),
            Add(a, b) => add(a.diff(var), b.diff(var)),
            Sub(a, b) => sub(a.diff(var), b.diff(var)),
            Mul(a, b) => add(
                mul(a.diff(var), (**b).clone()),
                mul((**a).clone(), b.diff(var)),
            ),
            Div(a, b) => div(
                sub(
                    mul(a.diff(var), (**b).clone()),
                    mul((**a).clone(), b.diff(var)),
                ),
                pow((**b).clone(), c(2.0)),
            ),
            Pow(a, b) => {
                let da = a.diff(var);
                let db = b.diff(var);
                if db == c(0.0) {
                    mul(
                        mul(
                            (**b).clone(),
                            pow((**a).clone(), sub((**b).clone(), c(1.0))),
                        ),
                        da,
                    )
                } else {
                    mul(
                        self.clone(),
                        add(
                            mul(db, Log(a.clone())),
                            div(mul((**b).clone(), da), (**a).clone()),
                        ),
                    )
                }
            }
            Exp(a) => mul(self.clone(), a.diff(var)),
            Log(a) => div(a.diff(var), (**a).clone()),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Const(v) => write!(f, "{v}"),
            Var(i) => write!(f, "#{i}"),
            Neg(a) => write!(f, "(-{a})"),
            Add(a, b) => write!(f, "({a} + {b})"),
            Sub(a, b) => write!(f, "({a} - {b})"),
            Mul(a, b) => write!(f, "({a} * {b})"),
            Div(a, b) => write!(f, "({a} / {b})"),
            Pow(a, b) => write!(f, "({a} ^ {b})"),
            Exp(a) => write!(f, "exp({a})"),
            Log(a) => write!(f, "log({a})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(f64),
    Name(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        if ch.is_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit() || ch == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            let v = text
                .parse::<f64>()
                .map_err(|_| Error::Domain(format!("bad number '{text}'")))?;
            out.push(Token::Num(v));
        } else if ch.is_alphabetic() || ch == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token::Name(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(ch) {
            out.push(Token::Op(ch));
            i += 1;
        } else if ch == '−' {
            out.push(Token::Op('-'));
            i += 1;
        } else {
            return Err(Error::Domain(format!(
                "unexpected character '{ch}' in expression"
            )));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    vars: &'a [&'a str],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Token::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat('^') {
            return Ok(Pow(Box::new(base), Box::new(self.unary()?)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let tok = self
            .peek()
            .cloned()
            .ok_or_else(|| Error::Domain("expression ended unexpectedly".into()))?;
        self.pos += 1;
        match tok {
            Token::Num(v) => Ok(Const(v)),
            Token::Op('(') => {
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Domain("missing ')'".into()));
                }
                Ok(e)
            }
            Token::Name(name) => {
                if self.eat('(') {
                    let arg = self.expr()?;
                    if !self.eat(')') {
                        return Err(Error::Domain("missing ')'".into()));
                    }
                    return match name.as_str() {
                        "exp" => Ok(Exp(Box::new(arg))),
                        "log" | "ln" => Ok(Log(Box::new(arg))),
                        "id" => Ok(arg),
                        _ => Err(Error::Domain(format!("unknown function '{name}'"))),
                    };
                }
                if let Some(i) = self.vars.iter().position(|v| *v == name) {
                    return Ok(Var(i));
                }
                match name.as_str() {
                    "id" if self.vars.len() == 1 => Ok(Var(0)),
                    "pi" => Ok(Const(std::f64::consts::PI)),
                    "e" => Ok(Const(std::f64::consts::E)),
                    _ => Err(Error::Domain(format!("unknown name '{name}'"))),
                }
            }
            Token::Op(op) => Err(Error::Domain(format!("unexpected '{op}'"))),
        }
    }
}

/// Parses `src` with the given variable names (indices follow slice order).
pub fn parse(src: &str, vars: &[&str]) -> Result<Expr> {
    let tokens = tokenize(src)?;
    if tokens.is_empty() {
        return Err(Error::Domain("empty expression".into()));
    }
    let mut p = Parser {
        tokens,
        pos: 0,
        vars,
    };
    let e = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(Error::Domain(format!("trailing input in '{src}'")));
    }
    Ok(e)
}
