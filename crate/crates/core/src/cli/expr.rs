//! Tokenizer and recursive-descent parser for the expression language.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := '-' factor | atom ('^' '-'? uint)?
//! atom   := uint ('/' uint)? | 'i' | 'hbar' | 's' | var | call | '(' expr ')'
//! var    := ('q' | 'p' | 'qh' | 'ph') uint?
//! call   := ident '(' expr (',' expr)* ')'
//! ```
//!
//! Columns in errors are 1-based character positions; an unexpected end
//! of input points at the last non-blank character.

use std::fmt;

use num_bigint::BigInt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarKind {
    Q,
    P,
    Qh,
    Ph,
}

impl VarKind {
    pub fn is_operator(self) -> bool {
        matches!(self, VarKind::Qh | VarKind::Ph)
    }

    fn spelling(self) -> &'static str {
        match self {
            VarKind::Q => "q",
            VarKind::P => "p",
            VarKind::Qh => "qh",
            VarKind::Ph => "ph",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Pb,
    Mb,
    Star,
    Pmb,
    Diamond,
    Ms,
    MsInv,
    T,
    Commutator,
    Dagger,
    Evolve,
}

impl Func {
    const ALL: [Func; 11] = [
        Func::Pb,
        Func::Mb,
        Func::Star,
        Func::Pmb,
        Func::Diamond,
        Func::Ms,
        Func::MsInv,
        Func::T,
        Func::Commutator,
        Func::Dagger,
        Func::Evolve,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Pb => "PB",
            Func::Mb => "MB",
            Func::Star => "star",
            Func::Pmb => "PMB",
            Func::Diamond => "diamond",
            Func::Ms => "ms",
            Func::MsInv => "msinv",
            Func::T => "t",
            Func::Commutator => "commutator",
            Func::Dagger => "dagger",
            Func::Evolve => "evolve",
        }
    }

    fn lookup(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }

    /// Allowed argument counts; `t` takes pairs plus an optional order.
    fn accepts(self, n: usize) -> bool {
        match self {
            Func::Pb | Func::Commutator => n == 2,
            Func::Mb | Func::Star | Func::Pmb | Func::Diamond => n == 2 || n == 3,
            Func::Ms | Func::MsInv => n == 1 || n == 2,
            Func::Dagger => n == 1,
            Func::Evolve => n == 3 || n == 4,
            Func::T => n >= 2,
        }
    }

    fn arity_text(self) -> &'static str {
        match self {
            Func::Pb | Func::Commutator => "2",
            Func::Mb | Func::Star | Func::Pmb | Func::Diamond => "2 or 3",
            Func::Ms | Func::MsInv => "1 or 2",
            Func::Dagger => "1",
            Func::Evolve => "3 or 4",
            Func::T => "at least 2",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprKind {
    Rational(BigInt, BigInt),
    I,
    Hbar,
    S,
    Var(VarKind, usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    Call(Func, Vec<Expr>),
}

/// A node with the column of the token that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    pub col: usize,
}

impl Expr {
    fn new(kind: ExprKind, col: usize) -> Self {
        Expr { kind, col }
    }

    /// Largest degree-of-freedom index mentioned.
    pub fn max_index(&self) -> usize {
        match &self.kind {
            ExprKind::Var(_, i) => *i,
            ExprKind::Neg(a) | ExprKind::Pow(a, _) => a.max_index(),
            ExprKind::Add(a, b) | ExprKind::Sub(a, b) | ExprKind::Mul(a, b) => a.max_index().max(b.max_index()),
            ExprKind::Call(_, args) => args.iter().map(Expr::max_index).max().unwrap_or(0),
            _ => 0,
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ExprKind::Rational(n, d) if *d == BigInt::from(1) => write!(f, "{n}"),
            ExprKind::Rational(n, d) => write!(f, "{n}/{d}"),
            ExprKind::I => f.write_str("i"),
            ExprKind::Hbar => f.write_str("hbar"),
            ExprKind::S => f.write_str("s"),
            ExprKind::Var(v, i) => write!(f, "{}{i}", v.spelling()),
            ExprKind::Neg(a) => write!(f, "neg({a})"),
            ExprKind::Add(a, b) => write!(f, "add({a},{b})"),
            ExprKind::Sub(a, b) => write!(f, "sub({a},{b})"),
            ExprKind::Mul(a, b) => write!(f, "mul({a},{b})"),
            ExprKind::Pow(a, k) => write!(f, "pow({a},{k})"),
            ExprKind::Call(func, args) => {
                write!(f, "call({}", func.name())?;
                for a in args {
                    write!(f, ",{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("column {col}: {message}")]
pub struct ParseError {
    pub col: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(col: usize, message: impl Into<String>) -> Self {
        ParseError { col, message: message.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    Comma,
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(n) => format!("number '{n}'"),
        Tok::Ident(s) => format!("'{s}'"),
        Tok::Plus => "'+'".into(),
        Tok::Minus => "'-'".into(),
        Tok::Star => "'*'".into(),
        Tok::Caret => "'^'".into(),
        Tok::Slash => "'/'".into(),
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
        Tok::Comma => "','".into(),
        Tok::End => "end of input".into(),
    }
}

fn tokenize(input: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = input.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push((Tok::Int(text.parse().expect("digits")), col));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '/' => Tok::Slash,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            other => return Err(ParseError::new(col, format!("unexpected character '{other}'"))),
        };
        out.push((tok, col));
        i += 1;
    }
    // an unexpected end is blamed on the last character typed
    let last = chars.iter().rposition(|c| !c.is_whitespace()).map_or(1, |p| p + 1);
    out.push((Tok::End, last));
    Ok(out)
}

/// Split `qh12` into (`Qh`, 12); no digits means index 1.
fn split_var(name: &str) -> Option<(VarKind, Option<&str>)> {
    let digits_at = name.find(|c: char| c.is_ascii_digit()).unwrap_or(name.len());
    let (head, tail) = name.split_at(digits_at);
    if !tail.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let kind = match head {
        "q" => VarKind::Q,
        "p" => VarKind::P,
        "qh" => VarKind::Qh,
        "ph" => VarKind::Ph,
        _ => return None,
    };
    Some((kind, (!tail.is_empty()).then_some(tail)))
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn col(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        ParseError::new(self.col(), format!("expected {wanted}, found {}", describe(self.peek())))
    }

    fn expect(&mut self, tok: Tok) -> Result<usize, ParseError> {
        if *self.peek() == tok {
            Ok(self.bump().1)
        } else {
            Err(self.unexpected(&describe(&tok)))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let col = self.col();
            let ctor: fn(Box<Expr>, Box<Expr>) -> ExprKind = match self.peek() {
                Tok::Plus => ExprKind::Add,
                Tok::Minus => ExprKind::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::new(ctor(Box::new(lhs), Box::new(rhs)), col);
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        while *self.peek() == Tok::Star {
            let col = self.bump().1;
            let rhs = self.factor()?;
            lhs = Expr::new(ExprKind::Mul(Box::new(lhs), Box::new(rhs)), col);
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Minus {
            let col = self.bump().1;
            let inner = self.factor()?;
            return Ok(Expr::new(ExprKind::Neg(Box::new(inner)), col));
        }
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        let col = self.bump().1;
        let negative = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let exp_col = self.col();
        let Tok::Int(n) = self.peek().clone() else {
            return Err(self.unexpected("an integer exponent"));
        };
        self.bump();
        let n: i64 = n.try_into().map_err(|_| ParseError::new(exp_col, "exponent too large"))?;
        Ok(Expr::new(ExprKind::Pow(Box::new(base), if negative { -n } else { n }), col))
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let col = self.col();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                if *self.peek() != Tok::Slash {
                    return Ok(Expr::new(ExprKind::Rational(n, BigInt::from(1)), col));
                }
                self.bump();
                let den_col = self.col();
                let Tok::Int(d) = self.peek().clone() else {
                    return Err(self.unexpected("a denominator"));
                };
                self.bump();
                if d == BigInt::from(0) {
                    return Err(ParseError::new(den_col, "zero denominator"));
                }
                Ok(Expr::new(ExprKind::Rational(n, d), col))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                self.bump();
                if *self.peek() == Tok::LParen {
                    return self.call(&name, col);
                }
                match name.as_str() {
                    "i" => return Ok(Expr::new(ExprKind::I, col)),
                    "hbar" => return Ok(Expr::new(ExprKind::Hbar, col)),
                    "s" => return Ok(Expr::new(ExprKind::S, col)),
                    _ => {}
                }
                let Some((kind, digits)) = split_var(&name) else {
                    return Err(ParseError::new(col, format!("unknown identifier '{name}'")));
                };
                let index = match digits {
                    None => 1,
                    Some(d) => d.parse::<usize>().map_err(|_| ParseError::new(col, "index too large"))?,
                };
                if index == 0 {
                    return Err(ParseError::new(col, format!("variable index in '{name}' must start at 1")));
                }
                Ok(Expr::new(ExprKind::Var(kind, index), col))
            }
            _ => Err(self.unexpected("an expression")),
        }
    }

    fn call(&mut self, name: &str, col: usize) -> Result<Expr, ParseError> {
        let Some(func) = Func::lookup(name) else {
            return Err(ParseError::new(col, format!("unknown function '{name}'")));
        };
        self.expect(Tok::LParen)?;
        let mut args = vec![self.expr()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            args.push(self.expr()?);
        }
        self.expect(Tok::RParen)?;
        if !func.accepts(args.len()) {
            return Err(ParseError::new(
                col,
                format!("{} takes {} arguments, got {}", func.name(), func.arity_text(), args.len()),
            ));
        }
        Ok(Expr::new(ExprKind::Call(func, args), col))
    }
}

pub fn parse(input: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { toks: tokenize(input)?, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("an operator or end of input"));
    }
    Ok(e)
}
