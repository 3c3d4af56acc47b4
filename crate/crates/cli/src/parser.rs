//! Recursive-descent parser for plane-map expressions such as
//! `(-x, (x^2 + x^-2)/y)`, with exact evaluation into rational functions
//! and extraction of the fibered map they describe.

use crate::{CliError, Result};
use cremona_core::birmap::PlaneMap;
use cremona_core::field::{FieldElement, FieldKind, Scalar};
use cremona_core::moebius::MoebiusElt;
use cremona_core::poly::Poly;
use cremona_core::ratfunc::{KElem, RatFunc};
use std::collections::BTreeSet;
use std::fmt;

/// Rational functions in the fiber coordinate with coefficients in k(base).
pub type BiRatFunc = RatFunc<KElem>;

// ---------------------------------------------------------------------------
// tokens
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Int(v) => write!(f, "integer `{v}`"),
            Tok::Plus => write!(f, "`+`"),
            Tok::Minus => write!(f, "`-`"),
            Tok::Star => write!(f, "`*`"),
            Tok::Slash => write!(f, "`/`"),
            Tok::Caret => write!(f, "`^`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::Comma => write!(f, "`,`"),
        }
    }
}

fn lex(input: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let bytes = input.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => { out.push((i, Tok::Plus)); i += 1; }
            '-' => { out.push((i, Tok::Minus)); i += 1; }
            '*' => { out.push((i, Tok::Star)); i += 1; }
            '/' => { out.push((i, Tok::Slash)); i += 1; }
            '^' => { out.push((i, Tok::Caret)); i += 1; }
            '(' => { out.push((i, Tok::LParen)); i += 1; }
            ')' => { out.push((i, Tok::RParen)); i += 1; }
            ',' => { out.push((i, Tok::Comma)); i += 1; }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let text = &input[start..i];
                let v: i64 = text.parse().map_err(|_| CliError::Syntax {
                    pos: start,
                    msg: format!("integer literal `{text}` is too large"),
                })?;
                out.push((start, Tok::Int(v)));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((start, Tok::Ident(input[start..i].to_string())));
            }
            _ => {
                return Err(CliError::Syntax {
                    pos: i,
                    msg: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// abstract syntax
// ---------------------------------------------------------------------------

/// Arithmetic expression over coordinate variables and field constants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    /// A named variable or constant: `x`, `y`, `z`, `t`, or `zeta`.
    Var(String),
    /// A nonnegative integer literal (negatives parse as `Neg(Int)`).
    Int(i64),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    /// Integer power; the exponent may be negative, as in `x^-2`.
    Pow(Box<Expr>, i32),
}

/// A parsed coordinate pair `(e1, e2)` describing a plane map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapExpr {
    pub first: Expr,
    pub second: Expr,
}

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Var(_) | Expr::Int(_) => 4,
        Expr::Pow(..) => 3,
        Expr::Mul(..) | Expr::Div(..) => 2,
        Expr::Add(..) | Expr::Sub(..) | Expr::Neg(_) => 1,
    }
}

fn fmt_child(f: &mut fmt::Formatter<'_>, e: &Expr, needs_paren: bool) -> fmt::Result {
    if needs_paren {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var(s) => write!(f, "{s}"),
            Expr::Int(v) => write!(f, "{v}"),
            Expr::Neg(a) => {
                write!(f, "-")?;
                fmt_child(f, a, prec(a) <= 1)
            }
            Expr::Add(l, r) => {
                fmt_child(f, l, false)?;
                write!(f, " + ")?;
                fmt_child(f, r, prec(r) <= 1)
            }
            Expr::Sub(l, r) => {
                fmt_child(f, l, false)?;
                write!(f, " - ")?;
                fmt_child(f, r, prec(r) <= 1)
            }
            Expr::Mul(l, r) => {
                fmt_child(f, l, prec(l) < 2)?;
                write!(f, "*")?;
                fmt_child(f, r, prec(r) <= 2)
            }
            Expr::Div(l, r) => {
                fmt_child(f, l, prec(l) < 2)?;
                write!(f, "/")?;
                fmt_child(f, r, prec(r) <= 2)
            }
            Expr::Pow(b, k) => {
                fmt_child(f, b, !matches!(**b, Expr::Var(_) | Expr::Int(_)))?;
                write!(f, "^{k}")
            }
        }
    }
}

impl fmt::Display for MapExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.first, self.second)
    }
}

// ---------------------------------------------------------------------------
// parsing
// ---------------------------------------------------------------------------

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn new(input: &str) -> Result<Self> {
        Ok(Parser { toks: lex(input)?, pos: 0, end: input.len() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok) -> Result<()> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("expected {t}")))
        }
    }

    fn unexpected(&self, msg: &str) -> CliError {
        let found = match self.peek() {
            Some(t) => format!("{msg}, found {t}"),
            None => format!("{msg}, found end of input"),
        };
        CliError::Syntax { pos: self.here(), msg: found }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut node = if self.eat(&Tok::Minus) {
            Expr::Neg(Box::new(self.term()?))
        } else {
            self.term()?
        };
        loop {
            if self.eat(&Tok::Plus) {
                node = Expr::Add(Box::new(node), Box::new(self.term()?));
            } else if self.eat(&Tok::Minus) {
                node = Expr::Sub(Box::new(node), Box::new(self.term()?));
            } else {
                break;
            }
        }
        Ok(node)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut node = self.factor()?;
        loop {
            if self.eat(&Tok::Star) {
                node = Expr::Mul(Box::new(node), Box::new(self.factor()?));
            } else if self.eat(&Tok::Slash) {
                node = Expr::Div(Box::new(node), Box::new(self.factor()?));
            } else {
                break;
            }
        }
        Ok(node)
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.base()?;
        if !self.eat(&Tok::Caret) {
            return Ok(base);
        }
        let negative = self.eat(&Tok::Minus);
        match self.bump() {
            Some(Tok::Int(v)) => {
                let k = i32::try_from(v).map_err(|_| CliError::Syntax {
                    pos: self.here(),
                    msg: "exponent is out of range".into(),
                })?;
                Ok(Expr::Pow(Box::new(base), if negative { -k } else { k }))
            }
            _ => {
                self.pos = self.pos.saturating_sub(1);
                Err(self.unexpected("expected an integer exponent after `^`"))
            }
        }
    }

    fn base(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(Expr::Var(s))
            }
            Some(Tok::Int(v)) => {
                self.pos += 1;
                Ok(Expr::Int(v))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(&Tok::RParen)?;
                Ok(e)
            }
            _ => Err(self.unexpected("expected a variable, number, or `(`")),
        }
    }

    fn finish(&self) -> Result<()> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            Err(self.unexpected("expected end of input"))
        }
    }
}

/// Parses a coordinate pair `(e1, e2)`.
pub fn parse_map_expr(input: &str) -> Result<MapExpr> {
    let mut p = Parser::new(input)?;
    p.expect(&Tok::LParen)?;
    let first = p.expr()?;
    p.expect(&Tok::Comma)?;
    let second = p.expr()?;
    p.expect(&Tok::RParen)?;
    p.finish()?;
    Ok(MapExpr { first, second })
}

/// Parses a single expression spanning the whole input.
pub fn parse_expr(input: &str) -> Result<Expr> {
    let mut p = Parser::new(input)?;
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

// ---------------------------------------------------------------------------
// evaluation
// ---------------------------------------------------------------------------

/// Which coordinate pair a map expression is written in: `(x, y)` has the
/// base coordinate first, `(z, t)` has the fiber coordinate first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoordPair {
    XY,
    ZT,
}

fn vars_of(e: &Expr, out: &mut BTreeSet<String>) {
    match e {
        Expr::Var(s) => {
            out.insert(s.clone());
        }
        Expr::Int(_) => {}
        Expr::Neg(a) | Expr::Pow(a, _) => vars_of(a, out),
        Expr::Add(l, r) | Expr::Sub(l, r) | Expr::Mul(l, r) | Expr::Div(l, r) => {
            vars_of(l, out);
            vars_of(r, out);
        }
    }
}

/// Determines the coordinate pair used by a map expression.
pub fn coord_pair(m: &MapExpr) -> Result<CoordPair> {
    let mut vs = BTreeSet::new();
    vars_of(&m.first, &mut vs);
    vars_of(&m.second, &mut vs);
    vs.remove("zeta");
    for v in &vs {
        if !matches!(v.as_str(), "x" | "y" | "z" | "t") {
            return Err(CliError::Input(format!(
                "unknown variable `{v}` (use x, y or z, t, and `zeta` for a root of unity)"
            )));
        }
    }
    let xy = vs.contains("x") || vs.contains("y");
    let zt = vs.contains("z") || vs.contains("t");
    if xy && zt {
        return Err(CliError::Input(
            "the expression mixes the (x, y) and (z, t) coordinate pairs".into(),
        ));
    }
    Ok(if zt { CoordPair::ZT } else { CoordPair::XY })
}

/// Evaluates an expression exactly, with `base` mapped to the coordinate of
/// the base line and `fiber` to the fiber coordinate.
pub fn eval_expr(e: &Expr, kind: &FieldKind, base: &str, fiber: &str) -> Result<BiRatFunc> {
    let one = FieldElement::one(kind);
    match e {
        Expr::Var(s) if s == base => Ok(BiRatFunc::constant(KElem::var_like(&one))),
        Expr::Var(s) if s == fiber => Ok(BiRatFunc::var_like(&KElem::constant(one))),
        Expr::Var(s) if s == "zeta" => {
            let z = FieldElement::zeta(kind)?;
            Ok(BiRatFunc::constant(KElem::constant(z)))
        }
        Expr::Var(s) => Err(CliError::Input(format!("unknown variable `{s}`"))),
        Expr::Int(v) => Ok(BiRatFunc::constant(KElem::constant(
            FieldElement::from_integer(kind, *v),
        ))),
        Expr::Neg(a) => Ok(eval_expr(a, kind, base, fiber)?.neg()),
        Expr::Add(l, r) => {
            Ok(eval_expr(l, kind, base, fiber)?.add(&eval_expr(r, kind, base, fiber)?))
        }
        Expr::Sub(l, r) => {
            Ok(eval_expr(l, kind, base, fiber)?.sub(&eval_expr(r, kind, base, fiber)?))
        }
        Expr::Mul(l, r) => {
            Ok(eval_expr(l, kind, base, fiber)?.mul(&eval_expr(r, kind, base, fiber)?))
        }
        Expr::Div(l, r) => {
            let rhs = eval_expr(r, kind, base, fiber)?;
            let inv = rhs
                .inv()
                .ok_or_else(|| CliError::Input("division by zero in an expression".into()))?;
            Ok(eval_expr(l, kind, base, fiber)?.mul(&inv))
        }
        Expr::Pow(b, k) => {
            if k.unsigned_abs() > 64 {
                return Err(CliError::Input(format!(
                    "exponent {k} is out of the supported range (|k| <= 64)"
                )));
            }
            let v = eval_expr(b, kind, base, fiber)?;
            let v = if *k < 0 {
                v.inv().ok_or_else(|| {
                    CliError::Input("zero raised to a negative power".into())
                })?
            } else {
                v
            };
            let mut acc = v.one_like();
            for _ in 0..k.unsigned_abs() {
                acc = acc.mul(&v);
            }
            Ok(acc)
        }
    }
}

/// Evaluates an expression that must be a field constant.
pub fn eval_constant(e: &Expr, kind: &FieldKind) -> Result<FieldElement> {
    let v = eval_expr(e, kind, "x", "y")?;
    v.as_constant()
        .and_then(|k| k.as_constant())
        .ok_or_else(|| CliError::Input(format!("expected a constant expression, got `{e}`")))
}

/// Parses a comma-separated list of constant expressions. An empty or
/// all-whitespace string denotes the empty list.
pub fn parse_constant_list(input: &str, kind: &FieldKind) -> Result<Vec<FieldElement>> {
    if input.trim().is_empty() {
        return Ok(Vec::new());
    }
    input
        .split(',')
        .map(|piece| eval_constant(&parse_expr(piece)?, kind))
        .collect()
}

// ---------------------------------------------------------------------------
// map extraction
// ---------------------------------------------------------------------------

fn coeff_or_zero<C: Scalar>(p: &Poly<C>, i: usize, witness: &C) -> C {
    p.coeffs().get(i).cloned().unwrap_or_else(|| witness.zero_like())
}

fn linear_fractional<C: Scalar>(
    num: &Poly<C>,
    den: &Poly<C>,
    what: &str,
    var: &str,
) -> Result<MoebiusElt<C>> {
    if num.degree().unwrap_or(0) > 1 || den.degree().unwrap_or(0) > 1 {
        return Err(CliError::Input(format!(
            "{what} must be linear-fractional in {var}: (a*{var} + b)/(c*{var} + d)"
        )));
    }
    let w = &den.coeffs()[0];
    MoebiusElt::new(
        coeff_or_zero(num, 1, w),
        coeff_or_zero(num, 0, w),
        coeff_or_zero(den, 1, w),
        coeff_or_zero(den, 0, w),
    )
    .map_err(|_| CliError::Input(format!("{what} is not invertible")))
}

/// Interprets a parsed coordinate pair as a map (base, fiber) -> (gamma(base),
/// m(base)(fiber)) and extracts it exactly.
pub fn to_plane_map(m: &MapExpr, kind: &FieldKind) -> Result<PlaneMap> {
    let pair = coord_pair(m)?;
    let (bname, fname, bexpr, fexpr, blabel, flabel) = match pair {
        CoordPair::XY => ("x", "y", &m.first, &m.second, "the first component (the x-image)", "the second component (the y-image)"),
        CoordPair::ZT => ("t", "z", &m.second, &m.first, "the second component (the t-image)", "the first component (the z-image)"),
    };
    let bval = eval_expr(bexpr, kind, bname, fname)?;
    let fval = eval_expr(fexpr, kind, bname, fname)?;
    let g = bval.as_constant().ok_or_else(|| {
        CliError::Input(format!("{blabel} may only involve {bname}"))
    })?;
    let gamma = linear_fractional(g.num(), g.den(), blabel, bname)?;
    let mfib = linear_fractional(fval.num(), fval.den(), flabel, fname)?;
    Ok(PlaneMap::new(gamma, mfib))
}
