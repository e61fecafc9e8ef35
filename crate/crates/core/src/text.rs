//! Text grammar for surfaces and parametrizations.
//!
//! Expressions use `+ - * / ^` with integer literals, `sqrt(d)`, and the
//! variables x1, x2, x3, t1, t2. Whitespace is insignificant; `#` starts a
//! line comment. Printed canonical forms re-parse to the same value.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::poly::{MultiPoly, Var};
use crate::ratfunc::RatFunc;
use crate::scalar::{try_sqrt, FieldCtx, Scalar, SqrtOutcome};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    Eq,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 0usize;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        col += 1;
        match c {
            '\n' => {
                line += 1;
                col = 0;
                chars.next();
            }
            ' ' | '\t' | '\r' => {
                chars.next();
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                }
                col -= 1;
            }
            '0'..='9' => {
                let start_col = col;
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_digit() {
                        s.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                col = start_col + s.len() - 1;
                out.push(Spanned {
                    tok: Tok::Int(s.parse().expect("digits")),
                    line,
                    col: start_col,
                });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start_col = col;
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        s.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                col = start_col + s.len() - 1;
                out.push(Spanned { tok: Tok::Ident(s), line, col: start_col });
            }
            _ => {
                let tok = match c {
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '/' => Tok::Slash,
                    '^' => Tok::Caret,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    ',' => Tok::Comma,
                    '=' => Tok::Eq,
                    other => {
                        return Err(Error::Parse {
                            line,
                            col,
                            msg: format!("unexpected character '{other}'"),
                        })
                    }
                };
                chars.next();
                out.push(Spanned { tok, line, col });
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    ctx: &'a mut FieldCtx,
    end: (usize, usize),
}

impl<'a> Parser<'a> {
    fn new(text: &str, ctx: &'a mut FieldCtx) -> Result<Self> {
        let toks = lex(text)?;
        let end = toks
            .last()
            .map(|s| (s.line, s.col + 1))
            .unwrap_or((1, 1));
        Ok(Parser { toks, pos: 0, ctx, end })
    }

    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Spanned> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> (usize, usize) {
        self.peek().map(|s| (s.line, s.col)).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let (line, col) = self.here();
        Err(Error::Parse { line, col, msg: msg.into() })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        match self.peek() {
            Some(s) if s.tok == tok => {
                self.pos += 1;
                Ok(())
            }
            _ => self.err(format!("expected {what}")),
        }
    }

    fn parse_expr(&mut self) -> Result<RatFunc> {
        let mut acc = self.parse_term()?;
        while let Some(s) = self.peek() {
            match s.tok {
                Tok::Plus => {
                    self.pos += 1;
                    let t = self.parse_term()?;
                    acc = acc.add(&t, self.ctx);
                }
                Tok::Minus => {
                    self.pos += 1;
                    let t = self.parse_term()?;
                    acc = acc.sub(&t, self.ctx);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn parse_term(&mut self) -> Result<RatFunc> {
        let mut acc = self.parse_factor()?;
        while let Some(s) = self.peek() {
            match s.tok {
                Tok::Star => {
                    self.pos += 1;
                    let f = self.parse_factor()?;
                    acc = acc.mul(&f, self.ctx);
                }
                Tok::Slash => {
                    let (line, col) = self.here();
                    self.pos += 1;
                    let f = self.parse_factor()?;
                    acc = acc.div(&f, self.ctx).map_err(|_| Error::Parse {
                        line,
                        col,
                        msg: "division by zero".into(),
                    })?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn parse_factor(&mut self) -> Result<RatFunc> {
        if let Some(s) = self.peek() {
            if s.tok == Tok::Minus {
                self.pos += 1;
                let f = self.parse_factor()?;
                return Ok(f.neg());
            }
        }
        let base = self.parse_base()?;
        if let Some(s) = self.peek() {
            if s.tok == Tok::Caret {
                self.pos += 1;
                let (line, col) = self.here();
                match self.next() {
                    Some(Spanned { tok: Tok::Int(e), .. }) => {
                        let e: u32 = e.try_into().map_err(|_| Error::Parse {
                            line,
                            col,
                            msg: "exponent too large".into(),
                        })?;
                        let mut acc = RatFunc::one();
                        for _ in 0..e {
                            acc = acc.mul(&base, self.ctx);
                        }
                        return Ok(acc);
                    }
                    _ => {
                        return Err(Error::Parse {
                            line,
                            col,
                            msg: "expected a nonnegative integer exponent after '^'".into(),
                        })
                    }
                }
            }
        }
        Ok(base)
    }

    fn parse_base(&mut self) -> Result<RatFunc> {
        let (line, col) = self.here();
        match self.next() {
            Some(Spanned { tok: Tok::Int(n), .. }) => {
                Ok(RatFunc::constant(Scalar::from_int(n)))
            }
            Some(Spanned { tok: Tok::Ident(name), .. }) => {
                if name == "sqrt" {
                    self.expect(Tok::LParen, "'(' after sqrt")?;
                    let inner = self.parse_expr()?;
                    self.expect(Tok::RParen, "')'")?;
                    let Some(c) = inner.as_constant(self.ctx) else {
                        return Err(Error::Parse {
                            line,
                            col,
                            msg: "sqrt argument must be a constant".into(),
                        });
                    };
                    let Some(r) = c.as_rational().cloned() else {
                        return Err(Error::Parse {
                            line,
                            col,
                            msg: "nested radical: sqrt of a sqrt-bearing value".into(),
                        });
                    };
                    match try_sqrt(&r, self.ctx) {
                        SqrtOutcome::Found(s) => Ok(RatFunc::constant(s)),
                        SqrtOutcome::NeedsExtension(w) => {
                            self.ctx.adopt(&w).map_err(|e| Error::Parse {
                                line,
                                col,
                                msg: e.to_string(),
                            })?;
                            match try_sqrt(&r, self.ctx) {
                                SqrtOutcome::Found(s) => Ok(RatFunc::constant(s)),
                                SqrtOutcome::NeedsExtension(_) => unreachable!("just adopted"),
                            }
                        }
                    }
                } else if let Some(v) = Var::from_name(&name) {
                    match v {
                        Var::X1 | Var::X2 | Var::X3 | Var::T1 | Var::T2 => Ok(RatFunc::var(v)),
                        _ => Err(Error::Parse {
                            line,
                            col,
                            msg: format!("variable '{name}' is not part of the input grammar"),
                        }),
                    }
                } else {
                    Err(Error::Parse { line, col, msg: format!("unknown variable '{name}'") })
                }
            }
            Some(Spanned { tok: Tok::LParen, .. }) => {
                let e = self.parse_expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            _ => Err(Error::Parse { line, col, msg: "expected a value".into() }),
        }
    }

    fn parse_triple(&mut self) -> Result<[RatFunc; 3]> {
        self.expect(Tok::LParen, "'('")?;
        let a = self.parse_expr()?;
        self.expect(Tok::Comma, "','")?;
        let b = self.parse_expr()?;
        self.expect(Tok::Comma, "','")?;
        let c = self.parse_expr()?;
        self.expect(Tok::RParen, "')'")?;
        Ok([a, b, c])
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }
}

/// Parse a single polynomial expression (rational-function syntax allowed as
/// long as the reduced denominator is constant).
pub fn parse_poly(text: &str, ctx: &mut FieldCtx) -> Result<MultiPoly> {
    let mut p = Parser::new(text, ctx)?;
    let e = p.parse_expr()?;
    if !p.at_end() {
        return p.err("trailing input after expression");
    }
    ratfunc_to_poly(&e, p.ctx)
}

fn ratfunc_to_poly(e: &RatFunc, ctx: &FieldCtx) -> Result<MultiPoly> {
    match e.denom().as_constant() {
        Some(c) => Ok(e.numer().scale(&c.inv(ctx)?, ctx)),
        None => Err(Error::Structural(
            "expression must be polynomial (nonconstant denominator found)".into(),
        )),
    }
}

/// Parse a rational-function expression.
pub fn parse_ratfunc(text: &str, ctx: &mut FieldCtx) -> Result<RatFunc> {
    let mut p = Parser::new(text, ctx)?;
    let e = p.parse_expr()?;
    if !p.at_end() {
        return p.err("trailing input after expression");
    }
    Ok(e)
}

/// Parse a parenthesized triple of rational functions.
pub fn parse_triple(text: &str, ctx: &mut FieldCtx) -> Result<[RatFunc; 3]> {
    let mut p = Parser::new(text, ctx)?;
    let t = p.parse_triple()?;
    if !p.at_end() {
        return p.err("trailing input after parametrization");
    }
    Ok(t)
}

/// A parsed input document: `f = <poly>` and/or `M = (...)` / `P = (...)`
/// declarations, or a single bare expression / triple.
#[derive(Debug, Default)]
pub struct Document {
    pub implicit: Option<MultiPoly>,
    pub parametric: Option<[RatFunc; 3]>,
    pub parametrization: Option<[RatFunc; 3]>,
}

pub fn parse_document(text: &str, ctx: &mut FieldCtx) -> Result<Document> {
    let mut doc = Document::default();
    let mut saw_decl = false;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (head, rest) = match line.split_once('=') {
            Some((h, r)) if matches!(h.trim(), "f" | "M" | "P") => (h.trim(), r.trim()),
            _ => {
                if saw_decl {
                    return Err(Error::Parse {
                        line: i + 1,
                        col: 1,
                        msg: "expected a declaration like 'f = ...' or 'M = (...)'".into(),
                    });
                }
                // bare expression or triple: classify by leading '(' with commas
                let mut ctx2 = ctx.clone();
                if let Ok(t) = parse_triple(text, &mut ctx2) {
                    *ctx = ctx2;
                    doc.parametric = Some(t);
                } else {
                    doc.implicit = Some(parse_poly(text, ctx)?);
                }
                return Ok(doc);
            }
        };
        saw_decl = true;
        match head {
            "f" => doc.implicit = Some(parse_poly(rest, ctx)?),
            "M" => doc.parametric = Some(parse_triple(rest, ctx)?),
            "P" => doc.parametrization = Some(parse_triple(rest, ctx)?),
            _ => unreachable!(),
        }
    }
    Ok(doc)
}

// ---------------------------------------------------------------------------
// printing
// ---------------------------------------------------------------------------

fn scalar_term_string(c: &Scalar, ctx: &FieldCtx) -> (bool, String) {
    // (negative-sign-extracted, magnitude text suitable for a product)
    if c.is_rational() {
        let r = c.rational_part();
        let neg = r < &num_rational::BigRational::from_integer(0.into());
        let mag = if neg { -r.clone() } else { r.clone() };
        let s = if mag.denom() == &BigInt::from(1) {
            mag.numer().to_string()
        } else {
            format!("{}/{}", mag.numer(), mag.denom())
        };
        (neg, s)
    } else {
        (false, format!("({})", c.display(ctx)))
    }
}

fn mono_string(m: &crate::poly::Mono) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.0.iter().enumerate() {
        if e == 1 {
            parts.push(crate::poly::ALL_VARS[i].name().to_string());
        } else if e > 1 {
            parts.push(format!("{}^{}", crate::poly::ALL_VARS[i].name(), e));
        }
    }
    parts.join("*")
}

/// Render a polynomial in canonical term order (leading term first).
pub fn poly_to_string(p: &MultiPoly, ctx: &FieldCtx) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().collect::<Vec<_>>().into_iter().rev().enumerate() {
        let (neg, mag) = scalar_term_string(c, ctx);
        let mono = mono_string(m);
        let body = if mono.is_empty() {
            mag
        } else if mag == "1" {
            mono
        } else {
            format!("{mag}*{mono}")
        };
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else if neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        out.push_str(&body);
    }
    out
}

/// Render a rational function; denominator parenthesized when nontrivial.
pub fn ratfunc_to_string(r: &RatFunc, ctx: &FieldCtx) -> String {
    if r.denom().is_constant() && r.denom().as_constant().is_some_and(|c| c.is_one()) {
        poly_to_string(r.numer(), ctx)
    } else {
        format!(
            "({}) / ({})",
            poly_to_string(r.numer(), ctx),
            poly_to_string(r.denom(), ctx)
        )
    }
}

pub fn triple_to_string(t: &[RatFunc; 3], ctx: &FieldCtx) -> String {
    format!(
        "({}, {}, {})",
        ratfunc_to_string(&t[0], ctx),
        ratfunc_to_string(&t[1], ctx),
        ratfunc_to_string(&t[2], ctx)
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_sphere() {
        let mut ctx = FieldCtx::rational();
        let f = parse_poly("x1^2 + x2^2 + x3^2 - 1", &mut ctx).unwrap();
        assert_eq!(f.total_degree(), 2);
        assert_eq!(f.nterms(), 4);
        assert!(ctx.is_rational());
    }

    #[test]
    fn parse_parametric_with_constant() {
        let mut ctx = FieldCtx::rational();
        let t = parse_triple("(3, t1*t2, t1+t2)", &mut ctx).unwrap();
        assert!(t[0].is_constant());
        assert!(!t[1].is_constant());
    }

    #[test]
    fn double_caret_is_an_error_at_second_caret() {
        let mut ctx = FieldCtx::rational();
        let e = parse_poly("x1^^2", &mut ctx).unwrap_err();
        match e {
            Error::Parse { line, col, .. } => {
                assert_eq!(line, 1);
                assert_eq!(col, 4);
            }
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn sqrt_literals_extend_the_field() {
        let mut ctx = FieldCtx::rational();
        let p = parse_poly("x1 - sqrt(2)", &mut ctx).unwrap();
        assert_eq!(ctx.d().cloned(), Some(BigInt::from(2)));
        assert!(!p.is_over_rationals());
        // sqrt(8) normalizes to 2*sqrt(2) in the same field
        let q = parse_poly("sqrt(8) * x1", &mut ctx).unwrap();
        assert!(!q.is_over_rationals());
        // a second independent radical is rejected
        assert!(parse_poly("sqrt(3)", &mut ctx).is_err());
        // nested radical rejected
        let mut ctx2 = FieldCtx::rational();
        assert!(parse_poly("sqrt(1 + sqrt(2))", &mut ctx2).is_err());
    }

    #[test]
    fn unknown_variable_rejected() {
        let mut ctx = FieldCtx::rational();
        assert!(parse_poly("x4 + 1", &mut ctx).is_err());
        assert!(parse_poly("h1 + 1", &mut ctx).is_err());
    }

    #[test]
    fn print_parse_roundtrip() {
        let mut ctx = FieldCtx::rational();
        let cases = [
            "x1^2 + x2^2 + x3^2 - 1",
            "2*x1*x2 - 7/3*x3 + 1",
            "x1^3 - x2^2*x3 + 5",
        ];
        for c in cases {
            let p = parse_poly(c, &mut ctx).unwrap();
            let s = poly_to_string(&p, &ctx);
            let p2 = parse_poly(&s, &mut ctx).unwrap();
            assert_eq!(p, p2, "{c} -> {s}");
        }
        // with radicals
        let mut ctx = FieldCtx::quadratic(2).unwrap();
        let p = parse_poly("(1 + 2*sqrt(2))*x1^2 - sqrt(2)*x2 + 3", &mut ctx).unwrap();
        let s = poly_to_string(&p, &ctx);
        let p2 = parse_poly(&s, &mut ctx).unwrap();
        assert_eq!(p, p2, "{s}");
    }

    #[test]
    fn document_with_declarations() {
        let mut ctx = FieldCtx::rational();
        let doc = parse_document(
            "# sphere and a parametrization\nf = x1^2 + x2^2 + x3^2 - 1\nP = (t1, t2, 0)\n",
            &mut ctx,
        )
        .unwrap();
        assert!(doc.implicit.is_some());
        assert!(doc.parametrization.is_some());
        assert!(doc.parametric.is_none());
    }

    #[test]
    fn bare_triple_document() {
        let mut ctx = FieldCtx::rational();
        let doc = parse_document("(t1^2, t1^3, t2)", &mut ctx).unwrap();
        assert!(doc.parametric.is_some());
    }

    #[test]
    fn rational_function_components() {
        let mut ctx = FieldCtx::rational();
        let t = parse_triple("((t1*t2-1)/(t2^2+t1^2), 1/t1, t2)", &mut ctx).unwrap();
        assert_eq!(t[0].degree_in(Var::T2), 2);
        let s = triple_to_string(&t, &ctx);
        let t2 = parse_triple(&s, &mut ctx).unwrap();
        assert_eq!(t[0], t2[0]);
        assert_eq!(t[1], t2[1]);
        assert_eq!(t[2], t2[2]);
    }
}
