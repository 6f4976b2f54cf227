//! Elements of ℚ(ζ_N) as coefficient vectors reduced modulo Φ_N.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::qpoly::QPoly;

fn phi_cache() -> &'static Mutex<HashMap<u32, Arc<QPoly>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<QPoly>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The N-th cyclotomic polynomial, Φ_N = (t^N − 1) / Π_{d | N, d < N} Φ_d.
pub fn cyclotomic_polynomial(n: u32) -> Arc<QPoly> {
    assert!(n >= 1, "cyclotomic order must be positive");
    if let Some(p) = phi_cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    let mut p = QPoly::monomial(BigRational::one(), n as usize).sub(&QPoly::one());
    for d in 1..n {
        if n % d == 0 {
            let (q, r) = p.div_rem(&cyclotomic_polynomial(d));
            debug_assert!(r.is_zero());
            p = q;
        }
    }
    let p = Arc::new(p);
    phi_cache().lock().unwrap().insert(n, p.clone());
    p
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cyclotomic {
    order: u32,
    /// Reduced representative; always of degree < deg Φ_N.
    poly: QPoly,
}

impl Cyclotomic {
    pub fn from_poly(order: u32, p: &QPoly) -> Self {
        let phi = cyclotomic_polynomial(order);
        let poly = if p.degree().is_some_and(|d| d >= phi.degree().unwrap()) {
            p.div_rem(&phi).1
        } else {
            p.clone()
        };
        Cyclotomic { order, poly }
    }

    pub fn constant(order: u32, c: BigRational) -> Self {
        Self::from_poly(order, &QPoly::constant(c))
    }

    /// ζ_N^k for any integer k.
    pub fn zeta_power(order: u32, k: i64) -> Self {
        let e = k.rem_euclid(order as i64) as usize;
        Self::from_poly(order, &QPoly::monomial(BigRational::one(), e))
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn poly(&self) -> &QPoly {
        &self.poly
    }

    pub fn degree_bound(&self) -> usize {
        cyclotomic_polynomial(self.order).degree().unwrap()
    }

    /// Coefficient vector of length deg Φ_N.
    pub fn coeffs(&self) -> Vec<BigRational> {
        (0..self.degree_bound()).map(|k| self.poly.coeff(k)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.poly.is_constant() {
            Some(self.poly.coeff(0))
        } else {
            None
        }
    }

    pub fn add(&self, other: &Cyclotomic) -> Cyclotomic {
        Cyclotomic { order: self.order, poly: self.poly.add(&other.poly) }
    }

    pub fn sub(&self, other: &Cyclotomic) -> Cyclotomic {
        Cyclotomic { order: self.order, poly: self.poly.sub(&other.poly) }
    }

    pub fn neg(&self) -> Cyclotomic {
        Cyclotomic { order: self.order, poly: self.poly.neg() }
    }

    pub fn mul(&self, other: &Cyclotomic) -> Cyclotomic {
        Self::from_poly(self.order, &self.poly.mul(&other.poly))
    }

    pub fn scale(&self, c: &BigRational) -> Cyclotomic {
        Cyclotomic { order: self.order, poly: self.poly.scale(c) }
    }

    /// Inverse via Bézout against Φ_N, which is irreducible.
    pub fn inv(&self) -> Option<Cyclotomic> {
        if self.is_zero() {
            return None;
        }
        let phi = cyclotomic_polynomial(self.order);
        let (g, s, _) = QPoly::ext_gcd(&self.poly, &phi);
        debug_assert!(g.is_one());
        Some(Self::from_poly(self.order, &s))
    }

    pub fn is_zero_coeffs(c: &[BigRational]) -> bool {
        c.iter().all(|x| x.is_zero())
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly.render("z"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_polynomial(1), QPoly::from_ints(&[-1, 1]));
        assert_eq!(*cyclotomic_polynomial(3), QPoly::from_ints(&[1, 1, 1]));
        assert_eq!(*cyclotomic_polynomial(4), QPoly::from_ints(&[1, 0, 1]));
        assert_eq!(*cyclotomic_polynomial(6), QPoly::from_ints(&[1, -1, 1]));
        assert_eq!(*cyclotomic_polynomial(12), QPoly::from_ints(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn zeta_three_sums_to_zero() {
        let z = Cyclotomic::zeta_power(3, 1);
        let s = Cyclotomic::constant(3, BigRational::one()).add(&z).add(&z.mul(&z));
        assert!(s.is_zero());
    }

    #[test]
    fn inverse_of_zeta_is_conjugate_power() {
        for n in 2..10 {
            let z = Cyclotomic::zeta_power(n, 1);
            assert_eq!(z.inv().unwrap(), Cyclotomic::zeta_power(n, -1));
        }
    }

    #[test]
    fn coefficient_vector_has_totient_length() {
        assert_eq!(Cyclotomic::zeta_power(5, 2).coeffs().len(), 4);
        assert_eq!(Cyclotomic::zeta_power(12, 2).coeffs().len(), 4);
    }
}
