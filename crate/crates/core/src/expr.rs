//! A small real-valued expression language for radial symbols.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := number | 'x' | ident '(' args ')' | '(' expr ')' | '-' factor
//! ```
//!
//! Calls: `log`, `exp`, `sqrt` (one argument), `min`, `max`, `pow` (two),
//! and `ell(j, e)`, `Lambda(k, e)` whose first argument is an integer literal.
//! The variable `x` stands for the vertex length `|v|`.

use std::fmt;

use thiserror::Error;

use crate::weights;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Log,
    Exp,
    Sqrt,
    Min,
    Max,
    Pow,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Log => "log",
            Func::Exp => "exp",
            Func::Sqrt => "sqrt",
            Func::Min => "min",
            Func::Max => "max",
            Func::Pow => "pow",
        }
    }

    fn arity(self) -> usize {
        match self {
            Func::Log | Func::Exp | Func::Sqrt => 1,
            Func::Min | Func::Max | Func::Pow => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    X,
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
    Ell(u32, Box<Expr>),
    Lambda(u32, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at byte offset {offset}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: expected one of [{}], found {found}", expected.join(", "))]
    Syntax {
        expected: Vec<&'static str>,
        found: String,
    },
    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),
    #[error("`{name}` takes {expected} argument(s), got {got}")]
    Arity {
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("first argument of `{0}` must be a non-negative integer literal")]
    NonIntegerIndex(String),
    #[error("malformed number `{0}`")]
    BadNumber(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("log of non-positive value {0}")]
    LogDomain(f64),
    #[error("sqrt of negative value {0}")]
    SqrtDomain(f64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{name} argument {arg} is below 1")]
    WeightDomain { name: &'static str, arg: f64 },
    #[error("non-finite result in {0}")]
    NonFinite(&'static str),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num { value: f64, integer: bool },
    Ident(String),
    LParen,
    RParen,
    Comma,
    Plus,
    Minus,
    Star,
    Slash,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num { value, .. } => format!("number {value}"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'0'..=b'9' | b'.' => {
                let mut integer = true;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    integer = false;
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        integer = false;
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text = &src[start..i];
                let value = text
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| ParseError {
                        offset: start,
                        kind: ParseErrorKind::BadNumber(text.to_string()),
                    })?;
                out.push((start, Tok::Num { value, integer }));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(src[start..i].to_string())));
                continue;
            }
            _ => {
                let ch = src[start..].chars().next().unwrap();
                return Err(ParseError {
                    offset: start,
                    kind: ParseErrorKind::Syntax {
                        expected: FACTOR_START.to_vec(),
                        found: format!("character `{ch}`"),
                    },
                });
            }
        };
        i += 1;
        out.push((start, tok));
    }
    out.push((src.len(), Tok::End));
    Ok(out)
}

const FACTOR_START: &[&str] = &["number", "x", "identifier", "(", "-"];

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> (usize, Tok) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &[&'static str]) -> ParseError {
        ParseError {
            offset: self.offset(),
            kind: ParseErrorKind::Syntax {
                expected: expected.to_vec(),
                found: self.peek().describe(),
            },
        }
    }

    fn expect(&mut self, tok: Tok, name: &'static str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&[name]))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.factor()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Num { value, .. } => {
                self.bump();
                Ok(Expr::Num(value))
            }
            Tok::Minus => {
                self.bump();
                Ok(Expr::Neg(Box::new(self.factor()?)))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, ")")?;
                Ok(e)
            }
            Tok::Ident(name) if name == "x" => {
                self.bump();
                Ok(Expr::X)
            }
            Tok::Ident(name) => {
                let start = self.offset();
                self.bump();
                self.call(name, start)
            }
            _ => Err(self.unexpected(FACTOR_START)),
        }
    }

    fn call(&mut self, name: String, start: usize) -> Result<Expr, ParseError> {
        enum Kind {
            Plain(Func),
            Indexed(bool),
        }
        let kind = match name.as_str() {
            "log" => Kind::Plain(Func::Log),
            "exp" => Kind::Plain(Func::Exp),
            "sqrt" => Kind::Plain(Func::Sqrt),
            "min" => Kind::Plain(Func::Min),
            "max" => Kind::Plain(Func::Max),
            "pow" => Kind::Plain(Func::Pow),
            "ell" => Kind::Indexed(false),
            "Lambda" => Kind::Indexed(true),
            _ => {
                return Err(ParseError {
                    offset: start,
                    kind: ParseErrorKind::UnknownIdentifier(name),
                })
            }
        };
        self.expect(Tok::LParen, "(")?;
        let mut args = Vec::new();
        // (offset, literal integer value) of each argument, for index checks
        let mut literal = Vec::new();
        loop {
            let at = self.offset();
            let lit = match self.peek() {
                Tok::Num { value, integer: true } => Some(*value),
                _ => None,
            };
            let arg = self.expr()?;
            let is_bare = matches!(arg, Expr::Num(_)) && lit.is_some();
            literal.push((at, if is_bare { lit } else { None }));
            args.push(arg);
            match self.peek() {
                Tok::Comma => {
                    self.bump();
                }
                Tok::RParen => {
                    self.bump();
                    break;
                }
                _ => return Err(self.unexpected(&[",", ")"])),
            }
        }
        let expected = match kind {
            Kind::Plain(f) => f.arity(),
            Kind::Indexed(_) => 2,
        };
        if args.len() != expected {
            return Err(ParseError {
                offset: start,
                kind: ParseErrorKind::Arity {
                    name,
                    expected,
                    got: args.len(),
                },
            });
        }
        match kind {
            Kind::Plain(f) => Ok(Expr::Call(f, args)),
            Kind::Indexed(is_lambda) => {
                let (at, lit) = literal[0];
                let index = match lit {
                    Some(v) if v <= u32::MAX as f64 => v as u32,
                    _ => {
                        return Err(ParseError {
                            offset: at,
                            kind: ParseErrorKind::NonIntegerIndex(name),
                        })
                    }
                };
                let arg = Box::new(args.pop().unwrap());
                Ok(if is_lambda {
                    Expr::Lambda(index, arg)
                } else {
                    Expr::Ell(index, arg)
                })
            }
        }
    }
}

pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected(&["+", "-", "*", "/", "end of input"]));
    }
    Ok(e)
}

fn finite(v: f64, what: &'static str) -> Result<f64, EvalError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(EvalError::NonFinite(what))
    }
}

impl Expr {
    /// Evaluates the expression at `x`.
    pub fn eval(&self, x: f64) -> Result<f64, EvalError> {
        match self {
            Expr::Num(v) => Ok(*v),
            Expr::X => Ok(x),
            Expr::Neg(e) => Ok(-e.eval(x)?),
            Expr::Binary(op, l, r) => {
                let a = l.eval(x)?;
                let b = r.eval(x)?;
                match op {
                    BinOp::Add => finite(a + b, "+"),
                    BinOp::Sub => finite(a - b, "-"),
                    BinOp::Mul => finite(a * b, "*"),
                    BinOp::Div => {
                        if b == 0.0 {
                            Err(EvalError::DivisionByZero)
                        } else {
                            finite(a / b, "/")
                        }
                    }
                }
            }
            Expr::Call(f, args) => {
                let a = args[0].eval(x)?;
                match f {
                    Func::Log if a <= 0.0 => Err(EvalError::LogDomain(a)),
                    Func::Log => Ok(a.ln()),
                    Func::Exp => finite(a.exp(), "exp"),
                    Func::Sqrt if a < 0.0 => Err(EvalError::SqrtDomain(a)),
                    Func::Sqrt => Ok(a.sqrt()),
                    Func::Min => Ok(a.min(args[1].eval(x)?)),
                    Func::Max => Ok(a.max(args[1].eval(x)?)),
                    Func::Pow => finite(a.powf(args[1].eval(x)?), "pow"),
                }
            }
            Expr::Ell(j, e) => {
                let a = e.eval(x)?;
                weights::ell(*j, a).map_err(|_| EvalError::WeightDomain { name: "ell", arg: a })
            }
            Expr::Lambda(k, e) => {
                let a = e.eval(x)?;
                let v = weights::lambda(*k, a)
                    .map_err(|_| EvalError::WeightDomain { name: "Lambda", arg: a })?;
                finite(v, "Lambda")
            }
        }
    }
}

/// Fully parenthesized form; reparsing yields a structurally equal tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) if *v < 0.0 => write!(f, "(-{})", -v),
            Expr::Num(v) => write!(f, "{v}"),
            Expr::X => f.write_str("x"),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Binary(op, l, r) => write!(f, "({l} {} {r})", op.symbol()),
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
            Expr::Ell(j, e) => write!(f, "ell({j}, {e})"),
            Expr::Lambda(k, e) => write!(f, "Lambda({k}, {e})"),
        }
    }
}
