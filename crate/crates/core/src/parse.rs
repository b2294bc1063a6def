//! Text syntax for field elements, series, Witt vectors, symbols and
//! canonical forms.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary ('*' unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' '-'? INT)?
//! atom    := INT | 'a' | 'S' | 'T' | '(' expr ')'
//! witt    := '[' expr (',' expr)* ']' | expr
//! symbols := factor ('*' factor)* | '1'
//! factor  := '{' expr ',' expr '}' ('^' '-'? INT)?
//! asw     := 'c' ':' INT (';' '(' INT ',' INT ')' ':' expr)*
//! ```
//!
//! `a` is the class of `x` in `F_p[x]/(f)`, or its coefficientwise lift in
//! `Z_q`.

use num_bigint::BigInt;

use crate::asw_reduce::CanonicalASW;
use crate::context::{Context, KSeries, KWitt};
use crate::error::{Error, Result};
use crate::milnor::{normalize_symbol_with, CanonicalK2};
use crate::ring::Ring;
use crate::ring_tower::{FiniteField, ZqElem};
use crate::series::{ExpVec, Series, SeriesRing};
use crate::witt::WittVec;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    A,
    S,
    T,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut line, mut col) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        let (l0, c0) = (line, col);
        if ch == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if ch.is_whitespace() {
            col += 1;
            i += 1;
            continue;
        }
        if ch.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            col += i - start;
            let n = text.parse::<BigInt>().expect("digits parse");
            out.push(Token { tok: Tok::Int(n), line: l0, col: c0 });
            continue;
        }
        if ch.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            col += i - start;
            out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), line: l0, col: c0 });
            continue;
        }
        if "+-*^()[]{},;:".contains(ch) {
            out.push(Token { tok: Tok::Sym(ch), line: l0, col: c0 });
            col += 1;
            i += 1;
            continue;
        }
        return Err(Error::Parse { line, col, msg: format!("unexpected character {ch:?}") });
    }
    out.push(Token { tok: Tok::End, line, col });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Self> {
        Ok(Self { toks: lex(src)?, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let t = &self.toks[self.pos];
        Err(Error::Parse { line: t.line, col: t.col, msg: msg.into() })
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn finish(&self) -> Result<()> {
        match self.peek() {
            Tok::End => Ok(()),
            _ => self.err("unexpected trailing input"),
        }
    }

    fn int(&mut self) -> Result<i64> {
        let neg = self.eat('-');
        match self.peek().clone() {
            Tok::Int(n) => {
                let v: i64 = match i64::try_from(&n) {
                    Ok(v) => v,
                    Err(_) => return self.err("integer out of range"),
                };
                self.pos += 1;
                Ok(if neg { -v } else { v })
            }
            _ => self.err("expected an integer"),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while self.eat('*') {
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.eat('^') {
            let e = self.int()?;
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.pos += 1;
                Ok(Expr::Int(n))
            }
            Tok::Ident(name) => {
                let e = match name.as_str() {
                    "a" => Expr::A,
                    "S" => Expr::S,
                    "T" => Expr::T,
                    _ => return self.err(format!("unknown name {name:?}")),
                };
                self.pos += 1;
                Ok(e)
            }
            Tok::Sym('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            _ => self.err("expected an expression"),
        }
    }

    fn witt(&mut self) -> Result<Vec<Expr>> {
        if !self.eat('[') {
            return Ok(vec![self.expr()?]);
        }
        let mut out = vec![self.expr()?];
        while self.eat(',') {
            out.push(self.expr()?);
        }
        self.expect(']')?;
        Ok(out)
    }

    fn symbols(&mut self) -> Result<Vec<(Expr, Expr, i64)>> {
        if let Tok::Int(n) = self.peek() {
            if *n == BigInt::from(1) {
                self.pos += 1;
                return Ok(Vec::new());
            }
        }
        let mut out = vec![self.factor()?];
        while self.eat('*') {
            out.push(self.factor()?);
        }
        Ok(out)
    }

    fn factor(&mut self) -> Result<(Expr, Expr, i64)> {
        self.expect('{')?;
        let f = self.expr()?;
        self.expect(',')?;
        let g = self.expr()?;
        self.expect('}')?;
        let n = if self.eat('^') { self.int()? } else { 1 };
        Ok((f, g, n))
    }

    fn asw(&mut self) -> Result<(i64, Vec<(ExpVec, Expr)>)> {
        match self.bump() {
            Tok::Ident(s) if s == "c" => {}
            _ => {
                self.pos = self.pos.saturating_sub(1);
                return self.err("expected 'c'");
            }
        }
        self.expect(':')?;
        let c = self.int()?;
        let mut terms = Vec::new();
        while self.eat(';') {
            self.expect('(')?;
            let i = self.int()?;
            self.expect(',')?;
            let j = self.int()?;
            self.expect(')')?;
            self.expect(':')?;
            terms.push((ExpVec::new(i, j), self.expr()?));
        }
        Ok((c, terms))
    }
}

pub fn parse_expr(src: &str) -> Result<Expr> {
    let mut p = Parser::new(src)?;
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

/// Witt coordinates; a bare expression is a single coordinate.
pub fn parse_witt(src: &str) -> Result<Vec<Expr>> {
    let mut p = Parser::new(src)?;
    let w = p.witt()?;
    p.finish()?;
    Ok(w)
}

/// Symbol factors `{f, g}^n`; `1` is the empty product.
pub fn parse_symbols(src: &str) -> Result<Vec<(Expr, Expr, i64)>> {
    let mut p = Parser::new(src)?;
    let s = p.symbols()?;
    p.finish()?;
    Ok(s)
}

/// Evaluate in `R((S))((T))`, with `a` sent to `a_val`.
pub fn eval<R: Ring>(ring: &SeriesRing<R>, a_val: &R::Elem, e: &Expr) -> Result<Series<R::Elem>> {
    Ok(match e {
        Expr::Int(n) => ring.constant(ring.base.from_bigint(n)),
        Expr::A => ring.constant(a_val.clone()),
        Expr::S => ring.s(),
        Expr::T => ring.t(),
        Expr::Neg(x) => ring.neg(&eval(ring, a_val, x)?),
        Expr::Add(x, y) => ring.add(&eval(ring, a_val, x)?, &eval(ring, a_val, y)?),
        Expr::Sub(x, y) => ring.sub(&eval(ring, a_val, x)?, &eval(ring, a_val, y)?),
        Expr::Mul(x, y) => ring.mul(&eval(ring, a_val, x)?, &eval(ring, a_val, y)?),
        Expr::Pow(x, n) => {
            let b = eval(ring, a_val, x)?;
            if *n >= 0 {
                ring.pow(&b, *n as u64)
            } else {
                ring.pow(&ring.inv_unit(&b)?, n.unsigned_abs())
            }
        }
    })
}

fn a_in_k(k: &FiniteField) -> <FiniteField as Ring>::Elem {
    if k.degree() == 1 {
        k.zero()
    } else {
        k.from_coeffs(&[0, 1])
    }
}

/// A series over `k`.
pub fn series_from_text(ks: &SeriesRing<FiniteField>, src: &str) -> Result<KSeries> {
    eval(ks, &a_in_k(&ks.base), &parse_expr(src)?)
}

/// A Witt vector of length `m` over `k((S))((T))`, zero-padded.
pub fn witt_from_text(ctx: &Context, ks: &SeriesRing<FiniteField>, src: &str) -> Result<KWitt> {
    let coords = parse_witt(src)?;
    if coords.len() > ctx.m {
        return Err(Error::Config(format!("{} Witt coordinates given but m = {}", coords.len(), ctx.m)));
    }
    let a = a_in_k(&ks.base);
    let mut out = coords.iter().map(|e| eval(ks, &a, e)).collect::<Result<Vec<_>>>()?;
    out.resize(ctx.m, ks.zero());
    Ok(WittVec::new(out))
}

/// The canonical form of a product of symbols.
pub fn symbol_from_text(ctx: &Context, ks: &SeriesRing<FiniteField>, src: &str) -> Result<CanonicalK2> {
    symbol_from_text_with(ctx, ks, ks, src)
}

/// Evaluate in `ks`, factor unit parts in `factor_ks`.
pub fn symbol_from_text_with(
    ctx: &Context,
    ks: &SeriesRing<FiniteField>,
    factor_ks: &SeriesRing<FiniteField>,
    src: &str,
) -> Result<CanonicalK2> {
    let a = a_in_k(&ks.base);
    let mut acc = CanonicalK2::default();
    for (f, g, n) in parse_symbols(src)? {
        let f = eval(ks, &a, &f)?;
        let g = eval(ks, &a, &g)?;
        let y = normalize_symbol_with(ctx, ks, factor_ks, &f, &g)?.pow(ctx, n);
        acc = acc.merge(ctx, &y);
    }
    Ok(acc)
}

/// An element of `Z_q / p^m` written in `a`.
pub fn zq_from_expr(ctx: &Context, e: &Expr) -> Result<ZqElem> {
    let zq = ctx.zq().clone();
    let a = if ctx.d() == 1 { zq.zero() } else { zq.from_coeffs(&[0, 1]) };
    let ring = SeriesRing::new(zq, Default::default());
    let v = eval(&ring, &a, e)?;
    if v.terms().keys().any(|k| *k != ExpVec::ZERO) {
        return Err(Error::Config("coefficient must not involve S or T".into()));
    }
    Ok(v.coeff(ExpVec::ZERO).cloned().unwrap_or_else(|| ring.base.zero()))
}

/// Inverse of `CanonicalASW`'s `Display`.
pub fn canonical_asw_from_text(ctx: &Context, src: &str) -> Result<CanonicalASW> {
    let mut p = Parser::new(src)?;
    let (c, terms) = p.asw()?;
    p.finish()?;
    let zq = ctx.zq();
    let mut out = CanonicalASW { c: ctx.modpm(c as i128), terms: Default::default() };
    for (idx, e) in terms {
        let v = zq_from_expr(ctx, &e)?;
        let slot = out.terms.entry(idx).or_insert_with(|| zq.zero());
        *slot = zq.add(slot, &v);
    }
    out.terms.retain(|_, v| !zq.is_zero(v));
    out.validate(ctx)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::PrecisionWindow;

    #[test]
    fn precedence() {
        let e = parse_expr("1+S*T^2").unwrap();
        let want = Expr::Add(
            Box::new(Expr::Int(1.into())),
            Box::new(Expr::Mul(Box::new(Expr::S), Box::new(Expr::Pow(Box::new(Expr::T), 2)))),
        );
        assert_eq!(e, want);
        assert_eq!(parse_expr("-S^-1").unwrap(), Expr::Neg(Box::new(Expr::Pow(Box::new(Expr::S), -1))));
    }

    #[test]
    fn errors_carry_position() {
        match parse_expr("1 +\n  S*%") {
            Err(Error::Parse { line, col, .. }) => assert_eq!((line, col), (2, 5)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_expr("(S"), Err(Error::Parse { .. })));
        assert!(matches!(parse_expr("S T"), Err(Error::Parse { .. })));
        assert!(matches!(parse_expr("b"), Err(Error::Parse { .. })));
    }

    #[test]
    fn series_values() {
        let ctx = Context::new(3, 1, None, 1).unwrap();
        let ks = ctx.k_series(PrecisionWindow::new(4, 40));
        let f = series_from_text(&ks, "(1+S)^-1").unwrap();
        let g = ks.mul(&f, &series_from_text(&ks, "1+S").unwrap());
        assert!(ks.eq_within(&g, &ks.one()));
        let h = series_from_text(&ks, "2*S^-1*T - S^-1*T").unwrap();
        assert_eq!(h, ks.monomial(ctx.k().one(), ExpVec::new(-1, 1)));
    }

    #[test]
    fn witt_and_symbols() {
        let ctx = Context::new(2, 1, None, 2).unwrap();
        let ks = ctx.k_series(PrecisionWindow::new(4, 40));
        let w = witt_from_text(&ctx, &ks, "[1,0]").unwrap();
        assert_eq!(w.coords, vec![ks.one(), ks.zero()]);
        let w = witt_from_text(&ctx, &ks, "S^-1*T^-1").unwrap();
        assert_eq!(w.coords.len(), 2);
        assert!(witt_from_text(&ctx, &ks, "[1,0,0]").is_err());
        let y = symbol_from_text(&ctx, &ks, "{S,T}^3 * {1+S*T, S}").unwrap();
        assert_eq!(y.e, 3);
        assert_eq!(y.gens.len(), 1);
        assert_eq!(symbol_from_text(&ctx, &ks, "1").unwrap(), CanonicalK2::default());
    }

    #[test]
    fn round_trips() {
        let ctx = Context::new(3, 2, None, 2).unwrap();
        let ks = ctx.k_series(PrecisionWindow::new(4, 40));
        let y = symbol_from_text(&ctx, &ks, "{1+a*S^-2*T, S}^4 * {1+S*T^3, T}^-1 * {S, T}").unwrap();
        let again = symbol_from_text(&ctx, &ks, &y.to_string()).unwrap();
        assert_eq!(y, again);
        let zq = ctx.zq();
        let mut x = CanonicalASW::single(1, 1, zq.from_coeffs(&[4, 7]));
        x.c = 5;
        x.terms.insert(ExpVec::new(-2, 1), zq.from_coeffs(&[0, 3]));
        let back = canonical_asw_from_text(&ctx, &x.to_string()).unwrap();
        assert_eq!(back, x);
        assert_eq!(canonical_asw_from_text(&ctx, "c: 0").unwrap(), CanonicalASW::default());
    }
}
