//! Parser and evaluator for user-supplied nonlinearities.
//!
//! Problem specs carry `f(x, u, v)`, `g(x, u, v)` and the lab fixture maps as
//! quoted strings; this module turns them into small ASTs evaluated in f64.
//! The grammar is fixed: numeric literals, a closed set of variables,
//! unary minus, `+ - * / ^` (with `^` right-associative and binding tighter
//! than unary minus), and a fixed function catalog. No user-defined
//! functions, no symbolic simplification.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Closed set of variable names.
///
/// PDE nonlinearities use `x`, `y`, `u`, `v`. The finite-dimensional lab
/// addresses component coordinates as `u1..u6`, `v1..v6` (with `u`, `v`
/// aliased to the first coordinate when a component space is 1-dimensional).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Var {
    X,
    Y,
    U,
    V,
    /// `u1` .. `u6` (1-based index).
    UI(u8),
    /// `v1` .. `v6` (1-based index).
    VI(u8),
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X => write!(f, "x"),
            Var::Y => write!(f, "y"),
            Var::U => write!(f, "u"),
            Var::V => write!(f, "v"),
            Var::UI(i) => write!(f, "u{i}"),
            Var::VI(i) => write!(f, "v{i}"),
        }
    }
}

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

/// Function catalog with fixed arities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Atan,
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
    Abs,
    Min,
    Max,
    Pow,
}

impl Func {
    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "atan" => Func::Atan,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            "min" => Func::Min,
            "max" => Func::Max,
            "pow" => Func::Pow,
            _ => return None,
        })
    }

    fn name(self) -> &'static str {
        match self {
            Func::Atan => "atan",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
            Func::Min => "min",
            Func::Max => "max",
            Func::Pow => "pow",
        }
    }

    fn arity(self) -> usize {
        match self {
            Func::Min | Func::Max | Func::Pow => 2,
            _ => 1,
        }
    }
}

/// Abstract syntax tree of an expression.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(Var),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
}

/// Fully parenthesized rendering; reparsing it reproduces the AST.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => {
                if *v == v.trunc() && v.abs() < 1e15 {
                    write!(f, "{v:.1}")
                } else {
                    write!(f, "{v:e}")
                }
            }
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Bin(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
            Expr::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { offset: usize, name: String },
    #[error("function `{func}` expects {expected} argument(s), got {got} (offset {offset})")]
    WrongArity { offset: usize, func: &'static str, expected: usize, got: usize },
}

#[derive(Debug, Error, PartialEq)]
pub enum EvalError {
    #[error("variable `{var}` is not bound")]
    Unbound { var: Var },
    #[error("domain error in `{subexpr}`: {message}")]
    Domain { subexpr: String, message: String },
}

/// Variable bindings for evaluation.
#[derive(Debug, Clone, Default)]
pub struct Env {
    pub x: Option<f64>,
    pub y: Option<f64>,
    pub u: Option<f64>,
    pub v: Option<f64>,
    /// `u1..u6` then `v1..v6`.
    pub components: [Option<f64>; 12],
}

impl Env {
    /// Binding for PDE nonlinearities `f(x, u, v)` (1D: no `y`).
    pub fn xuv(x: f64, u: f64, v: f64) -> Env {
        Env { x: Some(x), u: Some(u), v: Some(v), ..Env::default() }
    }

    pub fn xyuv(x: f64, y: f64, u: f64, v: f64) -> Env {
        Env { x: Some(x), y: Some(y), u: Some(u), v: Some(v), ..Env::default() }
    }

    /// Binding for lab operators: coordinates of the two component vectors.
    /// `u`/`v` alias the first coordinate of each component.
    pub fn lab(u: &[f64], v: &[f64]) -> Env {
        let mut env = Env::default();
        for (i, &val) in u.iter().take(6).enumerate() {
            env.components[i] = Some(val);
        }
        for (i, &val) in v.iter().take(6).enumerate() {
            env.components[6 + i] = Some(val);
        }
        env.u = u.first().copied();
        env.v = v.first().copied();
        env
    }

    fn get(&self, var: Var) -> Option<f64> {
        match var {
            Var::X => self.x,
            Var::Y => self.y,
            Var::U => self.u,
            Var::V => self.v,
            Var::UI(i) => self.components[(i - 1) as usize],
            Var::VI(i) => self.components[6 + (i - 1) as usize],
        }
    }
}

impl Expr {
    pub fn parse(source: &str) -> Result<Expr, ParseError> {
        Parser::new(source).parse_all()
    }

    pub fn eval(&self, env: &Env) -> Result<f64, EvalError> {
        match self {
            Expr::Num(v) => Ok(*v),
            Expr::Var(var) => env.get(*var).ok_or(EvalError::Unbound { var: *var }),
            Expr::Neg(e) => Ok(-e.eval(env)?),
            Expr::Bin(op, a, b) => {
                let x = a.eval(env)?;
                let y = b.eval(env)?;
                match op {
                    BinOp::Add => Ok(x + y),
                    BinOp::Sub => Ok(x - y),
                    BinOp::Mul => Ok(x * y),
                    BinOp::Div => {
                        if y == 0.0 {
                            return Err(EvalError::Domain {
                                subexpr: self.to_string(),
                                message: "division by zero".into(),
                            });
                        }
                        Ok(x / y)
                    }
                    BinOp::Pow => self.checked_pow(x, y),
                }
            }
            Expr::Call(func, args) => {
                let mut vals = Vec::with_capacity(args.len());
                for a in args {
                    vals.push(a.eval(env)?);
                }
                match func {
                    Func::Atan => Ok(vals[0].atan()),
                    Func::Sin => Ok(vals[0].sin()),
                    Func::Cos => Ok(vals[0].cos()),
                    Func::Exp => Ok(vals[0].exp()),
                    Func::Abs => Ok(vals[0].abs()),
                    Func::Min => Ok(vals[0].min(vals[1])),
                    Func::Max => Ok(vals[0].max(vals[1])),
                    Func::Log => {
                        if vals[0] <= 0.0 {
                            return Err(EvalError::Domain {
                                subexpr: self.to_string(),
                                message: format!("log of nonpositive value {}", vals[0]),
                            });
                        }
                        Ok(vals[0].ln())
                    }
                    Func::Sqrt => {
                        if vals[0] < 0.0 {
                            return Err(EvalError::Domain {
                                subexpr: self.to_string(),
                                message: format!("sqrt of negative value {}", vals[0]),
                            });
                        }
                        Ok(vals[0].sqrt())
                    }
                    Func::Pow => self.checked_pow(vals[0], vals[1]),
                }
            }
        }
    }

    fn checked_pow(&self, x: f64, y: f64) -> Result<f64, EvalError> {
        let r = x.powf(y);
        if r.is_finite() {
            Ok(r)
        } else {
            Err(EvalError::Domain {
                subexpr: self.to_string(),
                message: format!("{x}^{y} is not finite"),
            })
        }
    }

    /// Set of variables referenced anywhere in the tree.
    pub fn variables(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn uses(&self, var: Var) -> bool {
        self.variables().contains(&var)
    }

    fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Expr::Num(_) => {}
            Expr::Var(v) => {
                out.insert(*v);
            }
            Expr::Neg(e) => e.collect_vars(out),
            Expr::Bin(_, a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Expr::Call(_, args) => {
                for a in args {
                    a.collect_vars(out);
                }
            }
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    chars: Vec<(usize, char)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, chars: src.char_indices().collect(), pos: 0 }
    }

    fn parse_all(&mut self) -> Result<Expr, ParseError> {
        let e = self.parse_sum()?;
        self.skip_ws();
        if let Some(&(off, c)) = self.chars.get(self.pos) {
            return Err(ParseError::Syntax {
                offset: off,
                message: format!("unexpected `{c}` after expression"),
            });
        }
        Ok(e)
    }

    fn skip_ws(&mut self) {
        while let Some(&(_, c)) = self.chars.get(self.pos) {
            if c.is_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map(|&(o, _)| o).unwrap_or(self.src.len())
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.pos).map(|&(_, c)| c);
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn parse_sum(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.parse_product()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.bump();
                    let rhs = self.parse_product()?;
                    lhs = Expr::Bin(BinOp::Add, Box::new(lhs), Box::new(rhs));
                }
                Some('-') => {
                    self.bump();
                    let rhs = self.parse_product()?;
                    lhs = Expr::Bin(BinOp::Sub, Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn parse_product(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.parse_unary()?;
        loop {
            match self.peek() {
                // `·` accepted as a multiplication sign alongside `*`
                Some('*') | Some('·') => {
                    self.bump();
                    let rhs = self.parse_unary()?;
                    lhs = Expr::Bin(BinOp::Mul, Box::new(lhs), Box::new(rhs));
                }
                Some('/') => {
                    self.bump();
                    let rhs = self.parse_unary()?;
                    lhs = Expr::Bin(BinOp::Div, Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    /// Unary minus binds looser than `^`: `-u^2` is `-(u^2)`.
    fn parse_unary(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some('-') => {
                self.bump();
                let inner = self.parse_unary()?;
                Ok(Expr::Neg(Box::new(inner)))
            }
            Some('+') => {
                self.bump();
                self.parse_unary()
            }
            _ => self.parse_power(),
        }
    }

    fn parse_power(&mut self) -> Result<Expr, ParseError> {
        let base = self.parse_atom()?;
        if self.peek() == Some('^') {
            self.bump();
            // right-associative; allow unary minus in the exponent
            let exp = self.parse_unary_power()?;
            Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exp)))
        } else {
            Ok(base)
        }
    }

    fn parse_unary_power(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == Some('-') {
            self.bump();
            let inner = self.parse_unary_power()?;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.parse_power()
    }

    fn parse_atom(&mut self) -> Result<Expr, ParseError> {
        self.skip_ws();
        let off = self.offset();
        match self.peek() {
            Some('(') => {
                self.bump();
                let e = self.parse_sum()?;
                self.skip_ws();
                if self.peek() == Some(')') {
                    self.bump();
                    Ok(e)
                } else {
                    Err(ParseError::Syntax { offset: self.offset(), message: "expected `)`".into() })
                }
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.parse_number(off),
            Some(c) if c.is_ascii_alphabetic() => self.parse_ident(off),
            Some(c) => {
                Err(ParseError::Syntax { offset: off, message: format!("unexpected `{c}`") })
            }
            None => Err(ParseError::Syntax { offset: off, message: "unexpected end of input".into() }),
        }
    }

    fn parse_number(&mut self, start: usize) -> Result<Expr, ParseError> {
        let mut end = self.pos;
        let mut seen_dot = false;
        while let Some(&(_, c)) = self.chars.get(end) {
            if c.is_ascii_digit() {
                end += 1;
            } else if c == '.' && !seen_dot {
                seen_dot = true;
                end += 1;
            } else if (c == 'e' || c == 'E')
                && self.chars.get(end + 1).map_or(false, |&(_, c2)| {
                    c2.is_ascii_digit()
                        || ((c2 == '+' || c2 == '-')
                            && self.chars.get(end + 2).map_or(false, |&(_, c3)| c3.is_ascii_digit()))
                })
            {
                end += 2; // consume `e` and sign-or-digit, digits follow below
                while let Some(&(_, c2)) = self.chars.get(end) {
                    if c2.is_ascii_digit() {
                        end += 1;
                    } else {
                        break;
                    }
                }
                break;
            } else {
                break;
            }
        }
        let text_end = self.chars.get(end).map(|&(o, _)| o).unwrap_or(self.src.len());
        let text = &self.src[start..text_end];
        let value: f64 = text.parse().map_err(|_| ParseError::Syntax {
            offset: start,
            message: format!("malformed number `{text}`"),
        })?;
        self.pos = end;
        Ok(Expr::Num(value))
    }

    fn parse_ident(&mut self, start: usize) -> Result<Expr, ParseError> {
        let mut end = self.pos;
        while let Some(&(_, c)) = self.chars.get(end) {
            if c.is_ascii_alphanumeric() || c == '_' {
                end += 1;
            } else {
                break;
            }
        }
        let text_end = self.chars.get(end).map(|&(o, _)| o).unwrap_or(self.src.len());
        let name = &self.src[start..text_end];
        self.pos = end;

        if let Some(func) = Func::from_name(name) {
            self.skip_ws();
            if self.peek() != Some('(') {
                return Err(ParseError::Syntax {
                    offset: self.offset(),
                    message: format!("expected `(` after function `{name}`"),
                });
            }
            self.bump();
            let mut args = Vec::new();
            if self.peek() != Some(')') {
                loop {
                    args.push(self.parse_sum()?);
                    match self.peek() {
                        Some(',') => {
                            self.bump();
                        }
                        Some(')') => break,
                        _ => {
                            return Err(ParseError::Syntax {
                                offset: self.offset(),
                                message: "expected `,` or `)` in argument list".into(),
                            })
                        }
                    }
                }
            }
            self.bump(); // consume `)`
            if args.len() != func.arity() {
                return Err(ParseError::WrongArity {
                    offset: start,
                    func: func.name(),
                    expected: func.arity(),
                    got: args.len(),
                });
            }
            return Ok(Expr::Call(func, args));
        }

        let var = match name {
            "x" => Var::X,
            "y" => Var::Y,
            "u" => Var::U,
            "v" => Var::V,
            _ => {
                let bytes = name.as_bytes();
                if bytes.len() == 2
                    && (bytes[0] == b'u' || bytes[0] == b'v')
                    && (b'1'..=b'6').contains(&bytes[1])
                {
                    let idx = bytes[1] - b'0';
                    if bytes[0] == b'u' {
                        Var::UI(idx)
                    } else {
                        Var::VI(idx)
                    }
                } else {
                    return Err(ParseError::UnknownIdentifier { offset: start, name: name.into() });
                }
            }
        };
        Ok(Expr::Var(var))
    }
}
