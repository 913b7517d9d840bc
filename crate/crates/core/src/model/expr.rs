use std::fmt;

use num_traits::{One, Signed, Zero};
use tfr_exact::{parse_rational, rational_to_string, MultiPoly, RatFun, Rational};

use super::lex::{Cursor, Tok};
use super::ModelError;

/// Arithmetic expression over named variables with exact rational constants.
#[derive(Clone, Debug)]
pub enum Expr {
    Num(Rational),
    Var { name: String, line: usize, col: usize },
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        use Expr::*;
        match (self, other) {
            (Num(a), Num(b)) => a == b,
            (Var { name: a, .. }, Var { name: b, .. }) => a == b,
            (Neg(a), Neg(b)) => a == b,
            (Add(a, b), Add(c, d)) | (Sub(a, b), Sub(c, d)) | (Mul(a, b), Mul(c, d)) | (Div(a, b), Div(c, d)) => {
                a == c && b == d
            }
            (Pow(a, e), Pow(b, f)) => e == f && a == b,
            _ => false,
        }
    }
}

impl Expr {
    pub fn num(q: Rational) -> Expr {
        Expr::Num(q)
    }

    pub fn var(name: &str) -> Expr {
        Expr::Var { name: name.to_string(), line: 0, col: 0 }
    }

    /// Parses a full expression; trailing tokens are an error.
    pub(crate) fn parse(cur: &mut Cursor) -> Result<Expr, ModelError> {
        let e = parse_sum(cur)?;
        if !cur.at_end() {
            return Err(cur.unexpected("expected an operator"));
        }
        Ok(e)
    }

    /// Parses up to (not including) a top-level comma or end of line.
    pub(crate) fn parse_item(cur: &mut Cursor) -> Result<Expr, ModelError> {
        parse_sum(cur)
    }

    /// Evaluates in the field of rational functions over `names`.
    pub fn to_ratfun(&self, names: &[String]) -> Result<RatFun, ModelError> {
        let n = names.len();
        Ok(match self {
            Expr::Num(q) => RatFun::constant(n, q.clone()),
            Expr::Var { name, line, col } => match names.iter().position(|x| x == name) {
                Some(i) => RatFun::var(n, i),
                None => {
                    return Err(ModelError::UnknownIdentifier { name: name.clone(), line: *line, col: *col });
                }
            },
            Expr::Neg(a) => -a.to_ratfun(names)?,
            Expr::Add(a, b) => a.to_ratfun(names)? + b.to_ratfun(names)?,
            Expr::Sub(a, b) => a.to_ratfun(names)? - b.to_ratfun(names)?,
            Expr::Mul(a, b) => a.to_ratfun(names)? * b.to_ratfun(names)?,
            Expr::Div(a, b) => {
                let d = b.to_ratfun(names)?;
                if d.is_zero() {
                    return Err(ModelError::Invalid { line: self.line(), message: "division by zero".into() });
                }
                a.to_ratfun(names)? * d.recip().expect("nonzero")
            }
            Expr::Pow(a, e) => a
                .to_ratfun(names)?
                .pow(*e)
                .map_err(|_| ModelError::Invalid { line: self.line(), message: "zero raised to a negative power".into() })?,
        })
    }

    /// Evaluates as a polynomial; division is allowed only by nonzero constants.
    pub fn to_poly(&self, names: &[String]) -> Result<MultiPoly, ModelError> {
        let f = self.to_ratfun(names)?;
        if !f.is_polynomial() {
            return Err(ModelError::Invalid {
                line: self.line(),
                message: format!("expression '{self}' is not a polynomial"),
            });
        }
        Ok(f.numer().clone())
    }

    /// First source line mentioning a variable, or 0.
    pub fn line(&self) -> usize {
        match self {
            Expr::Num(_) => 0,
            Expr::Var { line, .. } => *line,
            Expr::Neg(a) | Expr::Pow(a, _) => a.line(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                let l = a.line();
                if l > 0 {
                    l
                } else {
                    b.line()
                }
            }
        }
    }

    pub fn variables(&self, out: &mut Vec<String>) {
        match self {
            Expr::Num(_) => {}
            Expr::Var { name, .. } => {
                if !out.contains(name) {
                    out.push(name.clone());
                }
            }
            Expr::Neg(a) | Expr::Pow(a, _) => a.variables(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.variables(out);
                b.variables(out);
            }
        }
    }

    fn prec(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Num(q) if q.is_negative() || !q.is_integer() => 2,
            Expr::Num(_) | Expr::Var { .. } => 5,
        }
    }
}

fn parse_sum(cur: &mut Cursor) -> Result<Expr, ModelError> {
    let mut lhs = parse_product(cur)?;
    loop {
        if cur.eat(&Tok::Plus) {
            lhs = Expr::Add(Box::new(lhs), Box::new(parse_product(cur)?));
        } else if cur.eat(&Tok::Minus) {
            lhs = Expr::Sub(Box::new(lhs), Box::new(parse_product(cur)?));
        } else {
            return Ok(lhs);
        }
    }
}

fn parse_product(cur: &mut Cursor) -> Result<Expr, ModelError> {
    let mut lhs = parse_unary(cur)?;
    loop {
        if cur.eat(&Tok::Star) {
            lhs = Expr::Mul(Box::new(lhs), Box::new(parse_unary(cur)?));
        } else if cur.eat(&Tok::Slash) {
            lhs = Expr::Div(Box::new(lhs), Box::new(parse_unary(cur)?));
        } else {
            return Ok(lhs);
        }
    }
}

fn parse_unary(cur: &mut Cursor) -> Result<Expr, ModelError> {
    if cur.eat(&Tok::Minus) {
        return Ok(Expr::Neg(Box::new(parse_unary(cur)?)));
    }
    if cur.eat(&Tok::Plus) {
        return parse_unary(cur);
    }
    parse_power(cur)
}

fn parse_power(cur: &mut Cursor) -> Result<Expr, ModelError> {
    let base = parse_atom(cur)?;
    if !cur.eat(&Tok::Caret) {
        return Ok(base);
    }
    let neg = cur.eat(&Tok::Minus);
    let paren = !neg && cur.eat(&Tok::LParen);
    let neg = neg || (paren && cur.eat(&Tok::Minus));
    let t = cur.next();
    let e: i32 = match &t.tok {
        Tok::Number(s) if s.chars().all(|c| c.is_ascii_digit()) => s
            .parse()
            .map_err(|_| ModelError::syntax(t.line, t.col, "exponent out of range"))?,
        _ => return Err(ModelError::syntax(t.line, t.col, "expected an integer exponent")),
    };
    if paren {
        cur.expect(&Tok::RParen)?;
    }
    Ok(Expr::Pow(Box::new(base), if neg { -e } else { e }))
}

fn parse_atom(cur: &mut Cursor) -> Result<Expr, ModelError> {
    let t = cur.peek().clone();
    match &t.tok {
        Tok::Number(s) => {
            cur.next();
            let q = parse_rational(s).map_err(|e| ModelError::syntax(t.line, t.col, e.to_string()))?;
            Ok(Expr::Num(q))
        }
        Tok::Ident(name) => {
            cur.next();
            Ok(Expr::Var { name: name.clone(), line: t.line, col: t.col })
        }
        Tok::LParen => {
            cur.next();
            let e = parse_sum(cur)?;
            cur.expect(&Tok::RParen)?;
            Ok(e)
        }
        _ => Err(cur.unexpected("expected a number, variable or '('")),
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, e: &Expr, min_prec: u8) -> fmt::Result {
    if e.prec() < min_prec {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(q) => {
                if q.is_negative() && !q.is_integer() {
                    write!(f, "-{}", rational_to_string(&-q.clone()))
                } else {
                    f.write_str(&rational_to_string(q))
                }
            }
            Expr::Var { name, .. } => f.write_str(name),
            Expr::Neg(a) => {
                f.write_str("-")?;
                write_child(f, a, 4)
            }
            Expr::Add(a, b) => {
                write_child(f, a, 1)?;
                f.write_str(" + ")?;
                write_child(f, b, 2)
            }
            Expr::Sub(a, b) => {
                write_child(f, a, 1)?;
                f.write_str(" - ")?;
                write_child(f, b, 2)
            }
            Expr::Mul(a, b) => {
                write_child(f, a, 2)?;
                f.write_str("*")?;
                write_child(f, b, 3)
            }
            Expr::Div(a, b) => {
                write_child(f, a, 2)?;
                f.write_str("/")?;
                write_child(f, b, 4)
            }
            Expr::Pow(a, e) => {
                write_child(f, a, 5)?;
                if *e < 0 {
                    write!(f, "^({e})")
                } else {
                    write!(f, "^{e}")
                }
            }
        }
    }
}

/// Builds an expression tree from a polynomial, for printing generated models.
pub fn expr_from_poly(p: &MultiPoly, names: &[String]) -> Expr {
    let mut acc: Option<Expr> = None;
    for (m, c) in p.terms() {
        let mut factors: Vec<Expr> = Vec::new();
        for (i, &e) in m.exponents().iter().enumerate() {
            if e == 0 {
                continue;
            }
            let v = Expr::var(&names[i]);
            factors.push(if e == 1 { v } else { Expr::Pow(Box::new(v), e as i32) });
        }
        let neg = c.is_negative();
        let a = c.abs();
        let mut term = if a.is_one() && !factors.is_empty() { None } else { Some(Expr::Num(a)) };
        for fct in factors {
            term = Some(match term {
                None => fct,
                Some(t) => Expr::Mul(Box::new(t), Box::new(fct)),
            });
        }
        let term = term.unwrap_or_else(|| Expr::Num(Rational::one()));
        acc = Some(match (acc, neg) {
            (None, false) => term,
            (None, true) => Expr::Neg(Box::new(term)),
            (Some(s), false) => Expr::Add(Box::new(s), Box::new(term)),
            (Some(s), true) => Expr::Sub(Box::new(s), Box::new(term)),
        });
    }
    acc.unwrap_or_else(|| Expr::Num(Rational::zero()))
}
