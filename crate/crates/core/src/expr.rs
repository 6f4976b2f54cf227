//! A small expression grammar shared by scalar and algebra-element input.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' '-'? integer)?
//! atom  := integer | identifier | '(' expr ')'
//! ```
//!
//! A trailing `(mod h^N)` marks a truncated series of order N − 1.
//! Products keep their operand order, so the same tree evaluates in
//! noncommutative algebras.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::scalars::{HSeries, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(BigRational),
    Atom(String),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, i64),
}

/// How identifiers evaluate to scalars.
#[derive(Clone, Debug, Default)]
pub struct ParseContext {
    /// Order N of ζ_N, required for the atom `z`.
    pub zeta: Option<u32>,
    /// When set, `h` is a truncated series of this order; otherwise ħ ∈ ℚ(ħ).
    pub series_order: Option<usize>,
    /// Value substituted for `q`; symbolic q when absent.
    pub q_value: Option<Scalar>,
    /// Value substituted for `h`; takes precedence over `series_order`.
    pub hbar_value: Option<Scalar>,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|p| p.1).collect();
            out.push((pos, Tok::Num(s.parse().expect("digits"))));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            out.push((pos, Tok::Ident(chars[start..i].iter().map(|p| p.1).collect())));
        } else if "+-*/^()".contains(c) {
            out.push((pos, Tok::Op(c)));
            i += 1;
        } else {
            return Err(Error::Parse { offset: pos, message: format!("unexpected character {c:?}") });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.len, |t| t.0)
    }

    fn err<T>(&self, message: &str) -> Result<T> {
        Err(Error::Parse { offset: self.offset(), message: message.to_string() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
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
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let negative = self.eat('-');
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let e: i64 = n.try_into().or_else(|_| self.err("exponent too large"))?;
                Ok(Expr::Pow(Box::new(base), if negative { -e } else { e }))
            }
            _ => self.err("expected integer exponent"),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Expr::Num(BigRational::from_integer(n)))
            }
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(Expr::Atom(s))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected ')'");
                }
                Ok(e)
            }
            _ => self.err("expected number, identifier or '('"),
        }
    }
}

impl Expr {
    pub fn parse(text: &str) -> Result<Expr> {
        let toks = tokenize(text)?;
        let mut p = Parser { toks, pos: 0, len: text.len() };
        let e = p.expr()?;
        if p.pos != p.toks.len() {
            return p.err("trailing input");
        }
        Ok(e)
    }

    /// Parse, splitting off a trailing `(mod h^N)`; returns the series order N − 1.
    pub fn parse_with_modulus(text: &str) -> Result<(Expr, Option<usize>)> {
        let trimmed = text.trim_end();
        if let Some(idx) = trimmed.rfind("(mod") {
            let tail = trimmed[idx + 4..].trim();
            let inner = tail.strip_suffix(')').map(str::trim);
            let n = inner.and_then(|t| t.strip_prefix("h^")).and_then(|t| t.trim().parse::<usize>().ok());
            return match n {
                Some(n) if n >= 1 => Ok((Expr::parse(&trimmed[..idx])?, Some(n - 1))),
                _ => Err(Error::Parse { offset: idx, message: "malformed (mod h^N) suffix".into() }),
            };
        }
        Ok((Expr::parse(text)?, None))
    }

    /// Evaluate with every identifier interpreted as a scalar.
    pub fn eval_scalar(&self, ctx: &ParseContext) -> Result<Scalar> {
        self.eval_scalar_with(ctx, &|name| Err(unknown(name)))
    }

    /// Evaluate, consulting `extra` for identifiers other than `q`, `z`, `h`.
    pub fn eval_scalar_with(&self, ctx: &ParseContext, extra: &dyn Fn(&str) -> Result<Scalar>) -> Result<Scalar> {
        let rec = |e: &Expr| e.eval_scalar_with(ctx, extra);
        Ok(match self {
            Expr::Num(n) => Scalar::from_big(n.clone()),
            Expr::Atom(name) => scalar_atom(name, ctx).unwrap_or_else(|| extra(name))?,
            Expr::Add(a, b) => rec(a)?.try_add(&rec(b)?)?,
            Expr::Sub(a, b) => rec(a)?.try_sub(&rec(b)?)?,
            Expr::Mul(a, b) => rec(a)?.try_mul(&rec(b)?)?,
            Expr::Div(a, b) => rec(a)?.try_div(&rec(b)?)?,
            Expr::Neg(a) => -rec(a)?,
            Expr::Pow(a, e) => rec(a)?.pow(*e)?,
        })
    }

    /// True if the identifier occurs anywhere in the tree.
    pub fn mentions(&self, name: &str) -> bool {
        match self {
            Expr::Num(_) => false,
            Expr::Atom(a) => a == name,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => a.mentions(name) || b.mentions(name),
            Expr::Neg(a) | Expr::Pow(a, _) => a.mentions(name),
        }
    }
}

fn unknown(name: &str) -> Error {
    Error::Parse { offset: 0, message: format!("unknown identifier {name:?}") }
}

/// Scalar meaning of the reserved identifiers, if `name` is one.
pub fn scalar_atom(name: &str, ctx: &ParseContext) -> Option<Result<Scalar>> {
    Some(match name {
        "q" => Ok(ctx.q_value.clone().unwrap_or_else(Scalar::q)),
        "z" => match ctx.zeta {
            Some(n) => Ok(Scalar::zeta(n)),
            None => Err(Error::Parse { offset: 0, message: "z needs a zeta_N field".into() }),
        },
        "h" => Ok(match (&ctx.hbar_value, ctx.series_order) {
            (Some(v), _) => v.clone(),
            (None, Some(k)) if k >= 1 => Scalar::hbar_series(k),
            (None, Some(_)) => Scalar::Series(HSeries::generator(0)),
            (None, None) => Scalar::hbar_rational(),
        }),
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_and_associativity() {
        let v = Expr::parse("1 - 2 - 3*2^2/4").unwrap().eval_scalar(&ParseContext::default()).unwrap();
        assert_eq!(v, Scalar::from_int(-4));
        let v = Expr::parse("-2^2").unwrap().eval_scalar(&ParseContext::default()).unwrap();
        assert_eq!(v, Scalar::from_int(-4));
        let v = Expr::parse("2^-2").unwrap().eval_scalar(&ParseContext::default()).unwrap();
        assert_eq!(v, Scalar::from_ratio(1, 4));
    }

    #[test]
    fn errors_carry_offsets() {
        match Expr::parse("1 + * 2") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("{other:?}"),
        }
        assert!(Expr::parse("(1 + 2").is_err());
        assert!(Expr::parse("1 $ 2").is_err());
        assert!(Expr::parse("z").unwrap().eval_scalar(&ParseContext::default()).is_err());
    }

    #[test]
    fn modulus_suffix() {
        let (_, k) = Expr::parse_with_modulus("1 + h (mod h^3)").unwrap();
        assert_eq!(k, Some(2));
        assert!(Expr::parse_with_modulus("1 + h (mod q)").is_err());
    }
}
