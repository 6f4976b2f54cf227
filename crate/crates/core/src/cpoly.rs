//! Commutative polynomials in x, y and the monomial conventions shared with
//! the noncommutative normal forms.

use std::cmp::{Ordering, Reverse};
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::expr::{Expr, ParseContext};
use crate::scalars::Scalar;

/// x^x y^y. Ordered by total degree, then by descending x-exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Mono {
    pub x: u32,
    pub y: u32,
}

impl Mono {
    pub const ONE: Mono = Mono { x: 0, y: 0 };

    pub fn new(x: u32, y: u32) -> Self {
        Mono { x, y }
    }

    pub fn degree(self) -> u32 {
        self.x + self.y
    }

    /// Product of monomials; the weight i − j is additive.
    pub fn times(self, other: Mono) -> Mono {
        Mono { x: self.x + other.x, y: self.y + other.y }
    }

    fn key(self) -> (u32, Reverse<u32>) {
        (self.x + self.y, Reverse(self.x))
    }

    /// All monomials with x ≤ dx and y ≤ dy, in the ordering above.
    pub fn in_box(dx: u32, dy: u32) -> Vec<Mono> {
        let mut v: Vec<Mono> = (0..=dx).flat_map(|i| (0..=dy).map(move |j| Mono::new(i, j))).collect();
        v.sort();
        v
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// i!/(i−a)!, the scalar produced by ∂^a on t^i (zero when a > i).
pub fn falling(i: u32, a: u32) -> BigInt {
    if a > i {
        return BigInt::from(0);
    }
    (i - a + 1..=i).fold(BigInt::from(1), |acc, k| acc * k)
}

pub fn factorial(n: u32) -> BigInt {
    falling(n, n)
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    falling(n, k) / factorial(k)
}

/// Render Σ c·x^i y^j, highest monomial first.
pub(crate) fn render_terms<'a>(terms: impl DoubleEndedIterator<Item = (&'a Mono, &'a Scalar)>) -> String {
    let mut out = String::new();
    for (m, c) in terms.rev() {
        let mono = match (m.x, m.y) {
            (0, 0) => String::new(),
            _ => {
                let mut parts = Vec::new();
                match m.x {
                    0 => {}
                    1 => parts.push("x".to_string()),
                    e => parts.push(format!("x^{e}")),
                }
                match m.y {
                    0 => {}
                    1 => parts.push("y".to_string()),
                    e => parts.push(format!("y^{e}")),
                }
                parts.join("*")
            }
        };
        let (neg, c) = if c.is_negative_rational() { (true, -c) } else { (false, c.clone()) };
        let body = if mono.is_empty() {
            c.render_factor()
        } else if c.is_one() {
            mono
        } else {
            format!("{}*{mono}", c.render_factor())
        };
        match (out.is_empty(), neg) {
            (true, false) => out.push_str(&body),
            (true, true) => {
                out.push('-');
                out.push_str(&body);
            }
            (false, false) => {
                out.push_str(" + ");
                out.push_str(&body);
            }
            (false, true) => {
                out.push_str(" - ");
                out.push_str(&body);
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Σ c_ij x^i y^j with no stored zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CPoly {
    terms: BTreeMap<Mono, Scalar>,
}

impl CPoly {
    pub fn zero() -> Self {
        CPoly::default()
    }

    pub fn one() -> Self {
        CPoly::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        CPoly::term(c, Mono::ONE)
    }

    pub fn term(c: Scalar, m: Mono) -> Self {
        let mut p = CPoly::zero();
        p.add_term(m, c);
        p
    }

    pub fn mono(x: u32, y: u32) -> Self {
        CPoly::term(Scalar::one(), Mono::new(x, y))
    }

    pub fn x() -> Self {
        CPoly::mono(1, 0)
    }

    pub fn y() -> Self {
        CPoly::mono(0, 1)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Mono, Scalar)>) -> Self {
        let mut p = CPoly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Mono, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v = &*v + &c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn terms(&self) -> &BTreeMap<Mono, Scalar> {
        &self.terms
    }

    pub fn coeff(&self, m: Mono) -> Scalar {
        self.terms.get(&m).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest exponents of x and y that occur.
    pub fn max_exponents(&self) -> (u32, u32) {
        self.terms.keys().fold((0, 0), |(a, b), m| (a.max(m.x), b.max(m.y)))
    }

    pub fn add(&self, other: &CPoly) -> CPoly {
        let mut p = self.clone();
        for (m, c) in &other.terms {
            p.add_term(*m, c.clone());
        }
        p
    }

    pub fn sub(&self, other: &CPoly) -> CPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> CPoly {
        CPoly { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }

    pub fn scale(&self, s: &Scalar) -> CPoly {
        if s.is_zero() {
            return CPoly::zero();
        }
        CPoly::from_terms(self.terms.iter().map(|(m, c)| (*m, c * s)))
    }

    pub fn mul(&self, other: &CPoly) -> CPoly {
        let mut p = CPoly::zero();
        for (m, c) in &self.terms {
            for (n, d) in &other.terms {
                p.add_term(m.times(*n), c * d);
            }
        }
        p
    }

    pub fn mul_mono(&self, c: &Scalar, m: Mono) -> CPoly {
        CPoly::from_terms(self.terms.iter().map(|(n, d)| (n.times(m), d * c)))
    }

    pub fn pow(&self, e: u32) -> CPoly {
        (0..e).fold(CPoly::one(), |acc, _| acc.mul(self))
    }

    /// ∂x^a ∂y^b.
    pub fn deriv(&self, a: u32, b: u32) -> CPoly {
        if a == 0 && b == 0 {
            return self.clone();
        }
        let mut p = CPoly::zero();
        for (m, c) in &self.terms {
            if m.x < a || m.y < b {
                continue;
            }
            let f = falling(m.x, a) * falling(m.y, b);
            p.add_term(Mono::new(m.x - a, m.y - b), c * &Scalar::from_big(BigRational::from_integer(f)));
        }
        p
    }

    /// Apply a map to every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Result<Scalar>) -> Result<CPoly> {
        let mut p = CPoly::zero();
        for (m, c) in &self.terms {
            p.add_term(*m, f(c)?);
        }
        Ok(p)
    }

    /// Parse the element grammar, e.g. `3/2*x^2*y + (1+q)*y^3`.
    pub fn parse(text: &str, ctx: &ParseContext) -> Result<CPoly> {
        eval_cpoly(&Expr::parse(text)?, ctx)
    }
}

fn eval_cpoly(e: &Expr, ctx: &ParseContext) -> Result<CPoly> {
    if !e.mentions("x") && !e.mentions("y") {
        return Ok(CPoly::constant(e.eval_scalar(ctx)?));
    }
    Ok(match e {
        Expr::Atom(a) if a == "x" => CPoly::x(),
        Expr::Atom(_) => CPoly::y(),
        Expr::Add(a, b) => eval_cpoly(a, ctx)?.add(&eval_cpoly(b, ctx)?),
        Expr::Sub(a, b) => eval_cpoly(a, ctx)?.sub(&eval_cpoly(b, ctx)?),
        Expr::Mul(a, b) => eval_cpoly(a, ctx)?.mul(&eval_cpoly(b, ctx)?),
        Expr::Neg(a) => eval_cpoly(a, ctx)?.neg(),
        Expr::Div(a, b) if !b.mentions("x") && !b.mentions("y") => {
            eval_cpoly(a, ctx)?.scale(&b.eval_scalar(ctx)?.try_inv()?)
        }
        Expr::Pow(a, k) if *k >= 0 => eval_cpoly(a, ctx)?.pow(*k as u32),
        _ => return Err(Error::Parse { offset: 0, message: "not a polynomial expression".into() }),
    })
}

impl fmt::Display for CPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_terms(self.terms.iter()))
    }
}
