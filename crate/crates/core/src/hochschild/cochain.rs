//! Polydifferential cochains on k[x, y].
//!
//! A term is a coefficient polynomial c together with one multi-index per
//! argument; it acts by (p₁, …, pₙ) ↦ c·Π ∂x^{a_t}∂y^{b_t} p_t. Composition
//! into a slot distributes that slot's derivatives over the inner cochain's
//! coefficient and arguments by the multinomial Leibniz rule, so every
//! operation below stays inside the polydifferential cochains.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::cpoly::{factorial, CPoly, Mono};
use crate::error::{Error, Result};
use crate::ncpoly::Derivation;
use crate::scalars::Scalar;

/// ∂x^dx ∂y^dy applied to one argument.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slot {
    pub dx: u32,
    pub dy: u32,
}

impl Slot {
    pub const ID: Slot = Slot { dx: 0, dy: 0 };
    pub const DX: Slot = Slot { dx: 1, dy: 0 };
    pub const DY: Slot = Slot { dx: 0, dy: 1 };

    pub fn new(dx: u32, dy: u32) -> Self {
        Slot { dx, dy }
    }

    pub fn order(self) -> u32 {
        self.dx + self.dy
    }

    /// All multi-indices of total order ≤ o.
    pub fn up_to(o: u32) -> Vec<Slot> {
        (0..=o).flat_map(|n| (0..=n).rev().map(move |a| Slot::new(a, n - a))).collect()
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let part = |v: &str, e: u32| match e {
            0 => String::new(),
            1 => format!("d{v}"),
            e => format!("d{v}^{e}"),
        };
        match (self.dx, self.dy) {
            (0, 0) => write!(f, "1"),
            (a, 0) => write!(f, "{}", part("x", a)),
            (0, b) => write!(f, "{}", part("y", b)),
            (a, b) => write!(f, "{}*{}", part("x", a), part("y", b)),
        }
    }
}

/// All ways of writing n as an ordered sum of k nonnegative parts.
fn compositions(n: u32, k: usize) -> Vec<Vec<u32>> {
    if k == 1 {
        return vec![vec![n]];
    }
    let mut out = Vec::new();
    for first in 0..=n {
        for mut rest in compositions(n - first, k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn multinomial(parts: &[u32]) -> BigInt {
    let n: u32 = parts.iter().sum();
    parts.iter().fold(factorial(n), |acc, &p| acc / factorial(p))
}

fn int(n: BigInt) -> Scalar {
    Scalar::from_big(BigRational::from_integer(n))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyDiffCochain {
    arity: usize,
    terms: BTreeMap<Vec<Slot>, CPoly>,
}

impl PolyDiffCochain {
    pub fn zero(arity: usize) -> Self {
        PolyDiffCochain { arity, terms: BTreeMap::new() }
    }

    /// An element of k[x, y] as a 0-cochain.
    pub fn element(p: CPoly) -> Self {
        Self::term(p, vec![])
    }

    pub fn term(coeff: CPoly, slots: Vec<Slot>) -> Self {
        let mut c = Self::zero(slots.len());
        c.add_term(slots, coeff);
        c
    }

    /// The multiplication m(a, b) = ab.
    pub fn multiplication() -> Self {
        Self::term(CPoly::one(), vec![Slot::ID, Slot::ID])
    }

    /// a·∂x + b·∂y.
    pub fn vector_field(a: CPoly, b: CPoly) -> Self {
        let mut c = Self::zero(1);
        c.add_term(vec![Slot::DX], a);
        c.add_term(vec![Slot::DY], b);
        c
    }

    /// The 1-cochain of a derivation of k[x, y].
    pub fn from_derivation(d: &Derivation) -> Result<Self> {
        if !d.algebra.is_commutative() {
            return Err(Error::InvalidParameters("polydifferential cochains live on k[x,y]".into()));
        }
        Ok(Self::vector_field(d.image_x.to_cpoly(), d.image_y.to_cpoly()))
    }

    /// The arity-1 operator p ↦ ∂x^a ∂y^b p.
    pub fn partial(a: u32, b: u32) -> Self {
        Self::term(CPoly::one(), vec![Slot::new(a, b)])
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &BTreeMap<Vec<Slot>, CPoly> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, slots: Vec<Slot>, coeff: CPoly) {
        assert_eq!(slots.len(), self.arity, "slot count must match arity");
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&slots) {
            Some(e) => {
                *e = e.add(&coeff);
                if e.is_zero() {
                    self.terms.remove(&slots);
                }
            }
            None => {
                self.terms.insert(slots, coeff);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.arity, other.arity, "arity mismatch");
        let mut c = self.clone();
        for (s, p) in &other.terms {
            c.add_term(s.clone(), p.clone());
        }
        c
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&Scalar::from_int(-1))
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut c = Self::zero(self.arity);
        for (k, p) in &self.terms {
            c.add_term(k.clone(), p.scale(s));
        }
        c
    }

    /// Multiply every coefficient by a polynomial.
    pub fn mul_coeff(&self, p: &CPoly) -> Self {
        let mut c = Self::zero(self.arity);
        for (k, q) in &self.terms {
            c.add_term(k.clone(), q.mul(p));
        }
        c
    }

    /// F(p₁, …, pₙ).
    pub fn apply(&self, args: &[CPoly]) -> CPoly {
        assert_eq!(args.len(), self.arity, "argument count must match arity");
        let mut out = CPoly::zero();
        for (slots, c) in &self.terms {
            let mut v = c.clone();
            for (s, p) in slots.iter().zip(args) {
                if v.is_zero() {
                    break;
                }
                v = v.mul(&p.deriv(s.dx, s.dy));
            }
            out = out.add(&v);
        }
        out
    }

    /// F ∘_i G: G inserted into argument i (0-based) of F, no sign.
    pub fn compose_at(&self, i: usize, g: &Self) -> Self {
        assert!(i < self.arity, "slot index out of range");
        let arity = self.arity - 1 + g.arity;
        let mut out = Self::zero(arity);
        for (fs, fc) in &self.terms {
            let alpha = fs[i];
            let xs = compositions(alpha.dx, g.arity + 1);
            let ys = compositions(alpha.dy, g.arity + 1);
            for (gs, gc) in &g.terms {
                for ex in &xs {
                    let cx = multinomial(ex);
                    for ey in &ys {
                        let coeff = gc.deriv(ex[0], ey[0]);
                        if coeff.is_zero() {
                            continue;
                        }
                        let k = int(&cx * multinomial(ey));
                        let mut slots = Vec::with_capacity(arity);
                        slots.extend_from_slice(&fs[..i]);
                        for (t, s) in gs.iter().enumerate() {
                            slots.push(Slot::new(s.dx + ex[t + 1], s.dy + ey[t + 1]));
                        }
                        slots.extend_from_slice(&fs[i + 1..]);
                        out.add_term(slots, fc.mul(&coeff).scale(&k));
                    }
                }
            }
        }
        out
    }

    /// F ∘ G = Σ_i (−1)^{(q−1)i} F ∘_i G.
    pub fn circ(&self, g: &Self) -> Self {
        let arity = (self.arity + g.arity).saturating_sub(1);
        let mut out = Self::zero(arity);
        for i in 0..self.arity {
            let t = self.compose_at(i, g);
            let odd = g.arity % 2 == 0 && i % 2 == 1;
            out = if odd { out.sub(&t) } else { out.add(&t) };
        }
        out
    }

    /// The Gerstenhaber bracket [F, G] = F∘G − (−1)^{(p−1)(q−1)} G∘F.
    ///
    /// Two 0-cochains bracket to the zero 0-cochain.
    pub fn bracket(&self, g: &Self) -> Self {
        if self.arity == 0 && g.arity == 0 {
            return Self::zero(0);
        }
        let (p, q) = (self.arity as i64, g.arity as i64);
        let a = self.circ(g);
        let b = g.circ(self);
        if ((p - 1) * (q - 1)).rem_euclid(2) == 0 {
            a.sub(&b)
        } else {
            a.add(&b)
        }
    }

    /// (F ⌣ G)(a…, b…) = F(a…)·G(b…).
    pub fn cup(&self, g: &Self) -> Self {
        let mut out = Self::zero(self.arity + g.arity);
        for (fs, fc) in &self.terms {
            for (gs, gc) in &g.terms {
                let mut s = fs.clone();
                s.extend_from_slice(gs);
                out.add_term(s, fc.mul(gc));
            }
        }
        out
    }

    /// ½(F⌣G − G⌣F) for 1-cochains.
    pub fn wedge(&self, g: &Self) -> Self {
        self.cup(g).sub(&g.cup(self)).scale(&Scalar::from_ratio(1, 2))
    }

    /// δz = −[z, m] for the undeformed product.
    pub fn coboundary(&self) -> Self {
        self.bracket(&Self::multiplication()).neg()
    }

    /// Cup product through a bilinear operation `mu`: mu(F(a…), G(b…)).
    pub fn cup_via(&self, g: &Self, mu: &Self) -> Self {
        assert_eq!(mu.arity, 2);
        mu.compose_at(0, self).compose_at(self.arity, g)
    }

    /// Bidegrees of the individual terms (coefficient degree minus total derivative).
    pub fn bidegrees(&self) -> Vec<(i64, i64)> {
        let mut out: Vec<(i64, i64)> = Vec::new();
        for (slots, c) in &self.terms {
            let (sx, sy) = slots.iter().fold((0i64, 0i64), |(a, b), s| (a + s.dx as i64, b + s.dy as i64));
            for m in c.terms().keys() {
                let d = (m.x as i64 - sx, m.y as i64 - sy);
                if !out.contains(&d) {
                    out.push(d);
                }
            }
        }
        out.sort();
        out
    }

    /// The common bidegree of all terms; `None` for zero or inhomogeneous cochains.
    pub fn bidegree(&self) -> Option<(i64, i64)> {
        match self.bidegrees().as_slice() {
            [d] => Some(*d),
            _ => None,
        }
    }

    pub fn max_slot_order(&self) -> u32 {
        self.terms.keys().flat_map(|s| s.iter().map(|t| t.order())).max().unwrap_or(0)
    }

    pub fn max_coeff_degree(&self) -> u32 {
        self.terms.values().flat_map(|c| c.terms().keys().map(|m| m.degree())).max().unwrap_or(0)
    }

    /// Flattened coordinates keyed by (slots, coefficient monomial).
    pub fn coords(&self) -> BTreeMap<(Vec<Slot>, Mono), Scalar> {
        let mut out = BTreeMap::new();
        for (s, c) in &self.terms {
            for (m, v) in c.terms() {
                out.insert((s.clone(), *m), v.clone());
            }
        }
        out
    }

    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Result<Scalar>) -> Result<Self> {
        let mut out = Self::zero(self.arity);
        for (s, c) in &self.terms {
            out.add_term(s.clone(), c.map_coeffs(&f)?);
        }
        Ok(out)
    }
}

impl fmt::Display for PolyDiffCochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(s, c)| {
                if s.is_empty() {
                    format!("({c})")
                } else {
                    let slots: Vec<String> = s.iter().map(|t| t.to_string()).collect();
                    format!("({c})[{}]", slots.join(", "))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dx() -> PolyDiffCochain {
        PolyDiffCochain::partial(1, 0)
    }

    fn dy() -> PolyDiffCochain {
        PolyDiffCochain::partial(0, 1)
    }

    #[test]
    fn cup_and_wedge_values() {
        let (x, y) = (CPoly::x(), CPoly::y());
        assert_eq!(dx().cup(&dy()).apply(&[x.clone(), y.clone()]), CPoly::one());
        let w = dx().wedge(&dy());
        assert_eq!(w.apply(&[x.clone(), y.clone()]), CPoly::constant(Scalar::from_ratio(1, 2)));
        assert_eq!(w.apply(&[y.clone(), x.clone()]), CPoly::constant(Scalar::from_ratio(-1, 2)));
        let xdx = PolyDiffCochain::vector_field(x.clone(), CPoly::zero());
        let ydy = PolyDiffCochain::vector_field(CPoly::zero(), y.clone());
        assert_eq!(xdx.cup(&ydy).apply(&[x.clone(), y.clone()]), CPoly::mono(1, 1));
    }

    #[test]
    fn bracket_with_element_evaluates() {
        let c = PolyDiffCochain::element(CPoly::x());
        assert_eq!(dx().bracket(&c), PolyDiffCochain::element(CPoly::one()));
    }

    #[test]
    fn euler_bracket_with_cup() {
        let xdx = PolyDiffCochain::vector_field(CPoly::x(), CPoly::zero());
        let f = dx().cup(&dy());
        assert_eq!(xdx.bracket(&f), f.neg());
    }

    #[test]
    fn square_of_partial_is_coboundary() {
        let f = dx().cup(&dx());
        let g = PolyDiffCochain::partial(2, 0).coboundary().scale(&Scalar::from_ratio(-1, 2));
        assert_eq!(f, g);
    }

    #[test]
    fn derivations_and_elements_are_cocycles() {
        assert!(dx().coboundary().is_zero());
        assert!(PolyDiffCochain::element(CPoly::x()).coboundary().is_zero());
        let m = PolyDiffCochain::multiplication();
        assert!(m.coboundary().is_zero());
    }

    #[test]
    fn compose_distributes_derivatives() {
        // ∂x ∘ (x·id) = id + x∂x
        let f = dx().compose_at(0, &PolyDiffCochain::term(CPoly::x(), vec![Slot::ID]));
        let expected = PolyDiffCochain::term(CPoly::one(), vec![Slot::ID]).add(&PolyDiffCochain::term(CPoly::x(), vec![Slot::DX]));
        assert_eq!(f, expected);
    }
}
