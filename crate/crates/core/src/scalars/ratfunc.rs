//! Univariate rational functions over ℚ in reduced form.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::qpoly::QPoly;

/// The indeterminate of a rational-function field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    /// The quantum parameter q.
    Q,
    /// The deformation parameter ħ, rendered as `h`.
    H,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::Q => "q",
            Var::H => "h",
        }
    }
}

/// num/den with gcd(num, den) = 1 and den monic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    var: Var,
    num: QPoly,
    den: QPoly,
}

impl RatFunc {
    pub fn new(var: Var, num: QPoly, den: QPoly) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        Some(Self::reduce(var, num, den))
    }

    pub fn from_poly(var: Var, num: QPoly) -> Self {
        RatFunc { var, num, den: QPoly::one() }
    }

    pub fn constant(var: Var, c: BigRational) -> Self {
        Self::from_poly(var, QPoly::constant(c))
    }

    pub fn generator(var: Var) -> Self {
        Self::from_poly(var, QPoly::monomial(BigRational::one(), 1))
    }

    fn reduce(var: Var, num: QPoly, den: QPoly) -> Self {
        if num.is_zero() {
            return RatFunc { var, num, den: QPoly::one() };
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = QPoly::gcd(&num, &den);
            if g.is_one() {
                (num, den)
            } else {
                (num.div_rem(&g).0, den.div_rem(&g).0)
            }
        };
        let lead = den.leading().expect("nonzero denominator").clone();
        if lead.is_one() {
            RatFunc { var, num, den }
        } else {
            let inv = lead.recip();
            RatFunc { var, num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn numer(&self) -> &QPoly {
        &self.num
    }

    pub fn denom(&self) -> &QPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The constant value if this is a constant function.
    pub fn as_constant(&self) -> Option<BigRational> {
        if self.num.is_constant() && self.den.is_one() {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        debug_assert_eq!(self.var, other.var);
        if self.den == other.den {
            return Self::reduce(self.var, self.num.add(&other.num), self.den.clone());
        }
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        Self::reduce(self.var, num, self.den.mul(&other.den))
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { var: self.var, num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        debug_assert_eq!(self.var, other.var);
        if self.den.is_one() && other.den.is_one() {
            return RatFunc { var: self.var, num: self.num.mul(&other.num), den: QPoly::one() };
        }
        Self::reduce(self.var, self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn inv(&self) -> Option<RatFunc> {
        if self.is_zero() {
            return None;
        }
        Some(Self::reduce(self.var, self.den.clone(), self.num.clone()))
    }

    pub fn scale(&self, c: &BigRational) -> RatFunc {
        if c.is_zero() {
            return RatFunc::constant(self.var, BigRational::zero());
        }
        RatFunc { var: self.var, num: self.num.scale(c), den: self.den.clone() }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.var.name();
        if self.den.is_one() {
            write!(f, "{}", self.num.render(v))
        } else {
            write!(f, "({})/({})", self.num.render(v), self.den.render(v))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_common_factors() {
        // (1 - q^3)/(1 - q) -> q^2 + q + 1
        let f = RatFunc::new(Var::Q, QPoly::from_ints(&[1, 0, 0, -1]), QPoly::from_ints(&[1, -1])).unwrap();
        assert!(f.is_polynomial());
        assert_eq!(f.numer(), &QPoly::from_ints(&[1, 1, 1]));
    }

    #[test]
    fn denominator_is_monic() {
        let f = RatFunc::new(Var::Q, QPoly::from_ints(&[1]), QPoly::from_ints(&[0, 2])).unwrap();
        assert_eq!(f.denom(), &QPoly::from_ints(&[0, 1]));
        assert_eq!(f.to_string(), "(1/2)/(q)");
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(RatFunc::new(Var::Q, QPoly::one(), QPoly::zero()).is_none());
    }
}
