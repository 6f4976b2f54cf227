//! Exact coefficient fields: ℚ, ℚ(q), ℚ(ħ), ℚ(ζ_N) and truncated ħ-series over them.
//!
//! Every value is kept in canonical form, and anything that happens to be a
//! rational number is stored as [`Scalar::Rational`]. Structural equality is
//! therefore field equality, and rational constants mix freely with every
//! other constructor. Mixing two different towers (ℚ(q) with ℚ(ζ_5), or
//! ζ_3 with ζ_5) is an [`Error::IncompatibleFields`].
//!
//! The `std::ops` impls panic on incompatible operands; the `try_*` methods
//! report the error instead.

mod cyclotomic;
mod qpoly;
mod ratfunc;
mod series;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use cyclotomic::{cyclotomic_polynomial, Cyclotomic};
pub use qpoly::QPoly;
pub use ratfunc::{RatFunc, Var};
pub use series::HSeries;

use crate::error::{Error, Result};
use crate::expr::{Expr, ParseContext};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    RatFunc(RatFunc),
    Cyclotomic(Cyclotomic),
    Series(HSeries),
}

/// Describes a coefficient field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldDesc {
    Rational,
    RatFunc(Var),
    Cyclotomic(u32),
    Series { base: Box<FieldDesc>, order: usize },
}

impl FieldDesc {
    /// Join of two fields in the tower, if one embeds in a common field.
    pub fn join(&self, other: &FieldDesc) -> Result<FieldDesc> {
        use FieldDesc as F;
        match (self, other) {
            (F::Rational, x) | (x, F::Rational) => Ok(x.clone()),
            (F::Series { base: a, order: k }, F::Series { base: b, order: l }) => {
                Ok(F::Series { base: Box::new(a.join(b)?), order: *k.min(l) })
            }
            (F::Series { base, order }, x) | (x, F::Series { base, order }) => {
                Ok(F::Series { base: Box::new(base.join(x)?), order: *order })
            }
            (a, b) if a == b => Ok(a.clone()),
            (a, b) => Err(Error::IncompatibleFields(a.to_string(), b.to_string())),
        }
    }

    pub fn is_field(&self) -> bool {
        !matches!(self, FieldDesc::Series { .. })
    }

    /// Header used in rendered reports.
    pub fn header(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDesc::Rational => write!(f, "QQ"),
            FieldDesc::RatFunc(v) => write!(f, "QQ({})", v.name()),
            FieldDesc::Cyclotomic(n) => write!(f, "zeta_{n}"),
            FieldDesc::Series { base, order } => write!(f, "{base}[[h]]/(h^{})", order + 1),
        }
    }
}

/// Target of [`Scalar::embed`].
#[derive(Clone, Debug)]
pub enum Target {
    /// Inclusion into a larger field of the tower.
    Field(FieldDesc),
    /// Ring map sending the indeterminate `var` to `value`.
    Substitute { var: Var, value: Scalar },
}

fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

enum Pair {
    Q(BigRational, BigRational),
    F(RatFunc, RatFunc),
    C(Cyclotomic, Cyclotomic),
    S(HSeries, HSeries),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Rational(big(n))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Scalar::Rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn from_big(r: BigRational) -> Self {
        Scalar::Rational(r)
    }

    /// The indeterminate q of ℚ(q).
    pub fn q() -> Self {
        Scalar::RatFunc(RatFunc::generator(Var::Q))
    }

    /// ħ as an element of the rational-function field ℚ(ħ).
    pub fn hbar_rational() -> Self {
        Scalar::RatFunc(RatFunc::generator(Var::H))
    }

    /// ħ as a truncated series of order K.
    pub fn hbar_series(order: usize) -> Self {
        assert!(order >= 1, "series order must be at least 1 to hold h");
        Scalar::Series(HSeries::generator(order))
    }

    /// A primitive N-th root of unity ζ_N.
    pub fn zeta(n: u32) -> Self {
        Scalar::Cyclotomic(Cyclotomic::zeta_power(n, 1)).canon()
    }

    pub fn series(coeffs: Vec<Scalar>, order: usize) -> Self {
        Scalar::Series(HSeries::new(coeffs, order)).canon()
    }

    fn canon(self) -> Self {
        match self {
            Scalar::RatFunc(f) => match f.as_constant() {
                Some(c) => Scalar::Rational(c),
                None => Scalar::RatFunc(f),
            },
            Scalar::Cyclotomic(c) => match c.as_rational() {
                Some(r) => Scalar::Rational(r),
                None => Scalar::Cyclotomic(c),
            },
            Scalar::Series(s) => {
                if s.coeffs[1..].iter().all(Scalar::is_zero) {
                    s.coeffs[0].clone()
                } else {
                    Scalar::Series(s)
                }
            }
            r => r,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_one())
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            _ => None,
        }
    }

    /// The smallest field of the tower containing this value.
    pub fn field(&self) -> FieldDesc {
        match self {
            Scalar::Rational(_) => FieldDesc::Rational,
            Scalar::RatFunc(f) => FieldDesc::RatFunc(f.var()),
            Scalar::Cyclotomic(c) => FieldDesc::Cyclotomic(c.order()),
            Scalar::Series(s) => {
                let mut base = FieldDesc::Rational;
                for c in &s.coeffs {
                    base = base.join(&c.field()).unwrap_or(base);
                }
                FieldDesc::Series { base: Box::new(base), order: s.order }
            }
        }
    }

    fn incompatible(a: &Scalar, b: &Scalar) -> Error {
        Error::IncompatibleFields(a.field().to_string(), b.field().to_string())
    }

    fn pair(&self, other: &Scalar) -> Result<Pair> {
        use Scalar as S;
        Ok(match (self, other) {
            (S::Rational(a), S::Rational(b)) => Pair::Q(a.clone(), b.clone()),
            (S::Series(a), S::Series(b)) => Pair::S(a.clone(), b.clone()),
            (S::Series(a), b) => Pair::S(a.clone(), HSeries::constant(b.clone(), a.order)),
            (a, S::Series(b)) => Pair::S(HSeries::constant(a.clone(), b.order), b.clone()),
            (S::RatFunc(a), S::RatFunc(b)) if a.var() == b.var() => Pair::F(a.clone(), b.clone()),
            (S::RatFunc(a), S::Rational(b)) => Pair::F(a.clone(), RatFunc::constant(a.var(), b.clone())),
            (S::Rational(a), S::RatFunc(b)) => Pair::F(RatFunc::constant(b.var(), a.clone()), b.clone()),
            (S::Cyclotomic(a), S::Cyclotomic(b)) if a.order() == b.order() => Pair::C(a.clone(), b.clone()),
            (S::Cyclotomic(a), S::Rational(b)) => Pair::C(a.clone(), Cyclotomic::constant(a.order(), b.clone())),
            (S::Rational(a), S::Cyclotomic(b)) => Pair::C(Cyclotomic::constant(b.order(), a.clone()), b.clone()),
            (a, b) => return Err(Self::incompatible(a, b)),
        })
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar> {
        if let (Scalar::Rational(a), Scalar::Rational(b)) = (self, other) {
            return Ok(Scalar::Rational(a + b));
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        Ok(match self.pair(other)? {
            Pair::Q(a, b) => Scalar::Rational(a + b),
            Pair::F(a, b) => Scalar::RatFunc(a.add(&b)),
            Pair::C(a, b) => Scalar::Cyclotomic(a.add(&b)),
            Pair::S(a, b) => Scalar::Series(a.try_add(&b)?),
        }
        .canon())
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar> {
        if let (Scalar::Rational(a), Scalar::Rational(b)) = (self, other) {
            return Ok(Scalar::Rational(a * b));
        }
        if self.is_zero() || other.is_zero() {
            // Still reject genuinely incompatible operands.
            self.pair(other)?;
            return Ok(Scalar::zero());
        }
        if let Scalar::Rational(r) = self {
            return Ok(other.scale(r));
        }
        if let Scalar::Rational(r) = other {
            return Ok(self.scale(r));
        }
        Ok(match self.pair(other)? {
            Pair::Q(a, b) => Scalar::Rational(a * b),
            Pair::F(a, b) => Scalar::RatFunc(a.mul(&b)),
            Pair::C(a, b) => Scalar::Cyclotomic(a.mul(&b)),
            Pair::S(a, b) => Scalar::Series(a.try_mul(&b)?),
        }
        .canon())
    }

    fn scale(&self, r: &BigRational) -> Scalar {
        if r.is_zero() {
            return Scalar::zero();
        }
        match self {
            Scalar::Rational(a) => Scalar::Rational(a * r),
            Scalar::RatFunc(f) => Scalar::RatFunc(f.scale(r)),
            Scalar::Cyclotomic(c) => Scalar::Cyclotomic(c.scale(r)),
            Scalar::Series(s) => Scalar::Series(HSeries::new(s.coeffs.iter().map(|c| c.scale(r)).collect(), s.order)),
        }
    }

    pub fn try_inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(a) => Scalar::Rational(a.recip()),
            Scalar::RatFunc(f) => Scalar::RatFunc(f.inv().ok_or(Error::DivisionByZero)?),
            Scalar::Cyclotomic(c) => Scalar::Cyclotomic(c.inv().ok_or(Error::DivisionByZero)?),
            Scalar::Series(s) => Scalar::Series(s.try_inv()?),
        }
        .canon())
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar> {
        if let (Scalar::Rational(a), Scalar::Rational(b)) = (self, other) {
            if b.is_zero() {
                return Err(Error::DivisionByZero);
            }
            return Ok(Scalar::Rational(a / b));
        }
        self.try_mul(&other.try_inv()?)
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, e: i64) -> Result<Scalar> {
        if e < 0 {
            return self.try_inv()?.pow(-e);
        }
        let mut result = Scalar::one();
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = result.try_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.try_mul(&base)?;
            }
        }
        Ok(result)
    }

    /// The q-integer n_q = 1 + q + … + q^{n−1}; zero for n = 0.
    pub fn q_integer(n: u32, q: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        let mut p = Scalar::one();
        for _ in 0..n {
            acc = &acc + &p;
            p = &p * q;
        }
        acc
    }

    /// Apply a field inclusion or a specialization of an indeterminate.
    pub fn embed(&self, target: &Target) -> Result<Scalar> {
        match target {
            Target::Field(desc) => {
                let mine = self.field();
                let fits = |base: &FieldDesc| mine.join(base).is_ok_and(|j| &j == base);
                match (self, desc) {
                    (Scalar::Series(s), FieldDesc::Series { base, order }) if s.order >= *order => {
                        let inner = FieldDesc::Series { base: base.clone(), order: s.order };
                        if mine.join(&inner).is_ok_and(|j| j == inner) {
                            return Ok(Scalar::Series(s.truncate(*order)).canon());
                        }
                    }
                    (Scalar::Series(_), _) => {}
                    (_, FieldDesc::Series { base, .. }) if fits(base) => return Ok(self.clone()),
                    (_, d) if fits(d) => return Ok(self.clone()),
                    _ => {}
                }
                Err(Error::NoEmbedding(mine.to_string(), desc.to_string()))
            }
            Target::Substitute { var, value } => self.substitute(*var, value),
        }
    }

    /// Substitute `value` for the indeterminate `var` of a rational function.
    pub fn substitute(&self, var: Var, value: &Scalar) -> Result<Scalar> {
        match self {
            Scalar::Rational(_) | Scalar::Cyclotomic(_) => Ok(self.clone()),
            Scalar::RatFunc(f) if f.var() != var => Ok(self.clone()),
            Scalar::RatFunc(f) => {
                let den = eval_qpoly(f.denom(), value)?;
                if den.is_zero() {
                    return Err(Error::PoleAtSpecialization(format!("{} = {}", var.name(), value)));
                }
                eval_qpoly(f.numer(), value)?.try_div(&den)
            }
            Scalar::Series(s) => {
                if var == Var::H {
                    return Err(Error::NoEmbedding(
                        self.field().to_string(),
                        format!("specialization h = {value} (truncated series)"),
                    ));
                }
                let coeffs = s.coeffs.iter().map(|c| c.substitute(var, value)).collect::<Result<Vec<_>>>()?;
                Ok(Scalar::series(coeffs, s.order))
            }
        }
    }

    /// Parse a scalar expression such as `3/2`, `(1+q)/(1-q)`, `1 + z^2` or `1 + 2*h`.
    pub fn parse(text: &str, ctx: &ParseContext) -> Result<Scalar> {
        let (expr, series_order) = Expr::parse_with_modulus(text)?;
        let ctx = match series_order {
            Some(k) => ParseContext { series_order: Some(k), ..ctx.clone() },
            None => ctx.clone(),
        };
        let v = expr.eval_scalar(&ctx)?;
        match (series_order, v) {
            (Some(k), Scalar::Rational(r)) if k > 0 => Ok(Scalar::Rational(r)),
            (_, v) => Ok(v),
        }
    }

    /// Rendering suitable as a factor in a product: compound values are parenthesized.
    pub fn render_factor(&self) -> String {
        match self {
            Scalar::Rational(r) if !r.is_negative() => qpoly::render_rational(r),
            Scalar::Series(s) => format!("({})", s.render()),
            other => format!("({other})"),
        }
    }

    /// True when the value is a negative rational (used for sign-aware rendering).
    pub fn is_negative_rational(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_negative())
    }
}

fn eval_qpoly(p: &QPoly, value: &Scalar) -> Result<Scalar> {
    let mut acc = Scalar::zero();
    for c in p.coeffs().iter().rev() {
        acc = acc.try_mul(value)?.try_add(&Scalar::Rational(c.clone()))?;
    }
    Ok(acc)
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{}", qpoly::render_rational(r)),
            Scalar::RatFunc(r) => write!(f, "{r}"),
            Scalar::Cyclotomic(c) => write!(f, "{c}"),
            Scalar::Series(s) => write!(f, "{}", s.render()),
        }
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::Rational(r)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.$checked(rhs).unwrap_or_else(|e| panic!("scalar {}: {e}", stringify!($method)))
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);
forward_binop!(Div, div, try_div);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::RatFunc(f) => Scalar::RatFunc(f.neg()),
            Scalar::Cyclotomic(c) => Scalar::Cyclotomic(c.neg()),
            Scalar::Series(s) => Scalar::Series(s.neg()),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| a + b)
    }
}
