//! Star products on k[x, y] of the form m ∘ exp(ħ Σ φ_t ⊗ ψ_t).
//!
//! The bidifferential operator r = Σ φ_t ⊗ ψ_t is kept as a [`TensorOp`]
//! acting on A ⊗ A before multiplication, so powers rⁱ compose correctly
//! even when the derivations have polynomial coefficients; m_i is then the
//! collapse of rⁱ/i! to a 2-cochain.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use crate::cpoly::{factorial, CPoly, Mono};
use crate::error::{Error, Result};
use crate::hochschild::{PolyDiffCochain, Slot};
use crate::ncpoly::{AlgebraSpec, NCPoly};
use crate::scalars::{HSeries, Scalar};

pub const DEFAULT_ORDER: usize = 6;

type TKey = (Slot, Mono, Slot, Mono);

/// An element of D ⊗ D, D the differential operators on k[x, y]; a basis
/// element is (x^m ∂^s) ⊗ (x^n ∂^t).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TensorOp {
    terms: BTreeMap<TKey, Scalar>,
}

fn add_t(t: &mut BTreeMap<TKey, Scalar>, k: TKey, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match t.get_mut(&k) {
        Some(v) => {
            *v = &*v + &c;
            if v.is_zero() {
                t.remove(&k);
            }
        }
        None => {
            t.insert(k, c);
        }
    }
}

fn unary(m: Mono, s: Slot) -> PolyDiffCochain {
    PolyDiffCochain::term(CPoly::term(Scalar::one(), m), vec![s])
}

fn unary_terms(c: &PolyDiffCochain) -> Vec<(Slot, Mono, Scalar)> {
    let mut v = Vec::new();
    for (s, p) in c.terms() {
        for (m, k) in p.terms() {
            v.push((s[0], *m, k.clone()));
        }
    }
    v
}

impl TensorOp {
    pub fn identity() -> Self {
        let mut t = TensorOp::default();
        add_t(&mut t.terms, (Slot::ID, Mono::ONE, Slot::ID, Mono::ONE), Scalar::one());
        t
    }

    /// φ ⊗ ψ for arity-1 cochains.
    pub fn tensor(phi: &PolyDiffCochain, psi: &PolyDiffCochain) -> Self {
        let mut t = TensorOp::default();
        for (s, m, a) in unary_terms(phi) {
            for (u, n, b) in unary_terms(psi) {
                add_t(&mut t.terms, (s, m, u, n), &a * &b);
            }
        }
        t
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut t = self.clone();
        for (k, v) in &other.terms {
            add_t(&mut t.terms, *k, v.clone());
        }
        t
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut t = TensorOp::default();
        for (k, v) in &self.terms {
            add_t(&mut t.terms, *k, v * s);
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Operator composition: self applied after other.
    pub fn compose(&self, other: &Self) -> Self {
        let mut out = TensorOp::default();
        for ((s1, m1, s2, m2), a) in &self.terms {
            for ((t1, n1, t2, n2), b) in &other.terms {
                let left = unary_terms(&unary(*m1, *s1).compose_at(0, &unary(*n1, *t1)));
                let right = unary_terms(&unary(*m2, *s2).compose_at(0, &unary(*n2, *t2)));
                let ab = a * b;
                for (u1, p1, c1) in &left {
                    for (u2, p2, c2) in &right {
                        add_t(&mut out.terms, (*u1, *p1, *u2, *p2), &(&ab * c1) * c2);
                    }
                }
            }
        }
        out
    }

    /// m ∘ T, a bidifferential 2-cochain.
    pub fn collapse(&self) -> PolyDiffCochain {
        let mut c = PolyDiffCochain::zero(2);
        for ((s, m, t, n), v) in &self.terms {
            c.add_term(vec![*s, *t], CPoly::term(v.clone(), m.times(*n)));
        }
        c
    }
}

#[derive(Debug)]
enum Source {
    Pairs { r: TensorOp, powers: Mutex<Vec<TensorOp>> },
    Explicit,
}

/// m_ħ = m + ħm₁ + ħ²m₂ + … on k[x, y].
#[derive(Clone, Debug)]
pub struct StarProduct {
    order: usize,
    exact: bool,
    source: Arc<Source>,
    terms: Arc<Mutex<Vec<PolyDiffCochain>>>,
}

fn is_constant_field(v: &PolyDiffCochain) -> bool {
    v.terms().values().all(|c| c.terms().keys().all(|m| *m == Mono::ONE))
}

impl StarProduct {
    /// m ∘ exp(ħ Σ φ_t ⊗ ψ_t) truncated at ħ^K. When every derivation has
    /// constant coefficients the series terminates on polynomials and the
    /// product is evaluated exactly.
    pub fn gm_star(pairs: &[(PolyDiffCochain, PolyDiffCochain)], order: usize) -> Result<Self> {
        let all: Vec<&PolyDiffCochain> = pairs.iter().flat_map(|(a, b)| [a, b]).collect();
        for v in &all {
            if v.arity() != 1 || v.terms().keys().any(|s| s[0].order() != 1) {
                return Err(Error::InvalidParameters(format!("{v} is not a vector field")));
            }
        }
        for (i, a) in all.iter().enumerate() {
            for b in &all[i + 1..] {
                if !a.bracket(b).is_zero() {
                    return Err(Error::NonCommutingDerivations(format!("[{a}, {b}] != 0")));
                }
            }
        }
        let mut r = TensorOp::default();
        for (a, b) in pairs {
            r = r.add(&TensorOp::tensor(a, b));
        }
        let exact = all.iter().all(|v| is_constant_field(v));
        Ok(StarProduct {
            order,
            exact,
            source: Arc::new(Source::Pairs { r, powers: Mutex::new(vec![TensorOp::identity()]) }),
            terms: Arc::new(Mutex::new(vec![PolyDiffCochain::multiplication()])),
        })
    }

    /// The normal-ordering Moyal product a⋆b = Σ ħⁿ/n! ∂xⁿa ∂yⁿb.
    pub fn moyal() -> Self {
        Self::gm_star(&[(PolyDiffCochain::partial(1, 0), PolyDiffCochain::partial(0, 1))], DEFAULT_ORDER).unwrap()
    }

    /// The antisymmetric Moyal product, infinitesimal ∂x∧∂y.
    pub fn moyal_skew(order: usize) -> Self {
        let half = Scalar::from_ratio(1, 2);
        let pairs = [
            (PolyDiffCochain::partial(1, 0).scale(&half), PolyDiffCochain::partial(0, 1)),
            (PolyDiffCochain::partial(0, 1).scale(&-&half), PolyDiffCochain::partial(1, 0)),
        ];
        Self::gm_star(&pairs, order).unwrap()
    }

    /// The formal quantum plane: infinitesimal x∂x ⌣ y∂y, so x⋆y = e^ħ y⋆x.
    pub fn quantum_plane(order: usize) -> Self {
        let xdx = PolyDiffCochain::vector_field(CPoly::x(), CPoly::zero());
        let ydy = PolyDiffCochain::vector_field(CPoly::zero(), CPoly::y());
        Self::gm_star(&[(xdx, ydy)], order).unwrap()
    }

    /// A truncated product given by its terms m_1..m_K (m_0 = m is prepended).
    pub fn from_terms(higher: Vec<PolyDiffCochain>) -> Result<Self> {
        if higher.iter().any(|t| t.arity() != 2) {
            return Err(Error::InvalidParameters("star terms must be 2-cochains".into()));
        }
        let order = higher.len();
        let mut terms = vec![PolyDiffCochain::multiplication()];
        terms.extend(higher);
        Ok(StarProduct { order, exact: false, source: Arc::new(Source::Explicit), terms: Arc::new(Mutex::new(terms)) })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn with_order(&self, order: usize) -> Self {
        let mut s = self.clone();
        if matches!(*self.source, Source::Explicit) {
            s.order = order.min(self.order);
        } else {
            s.order = order;
        }
        s
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// rⁱ as a tensor operator; only for products built from pairs.
    pub fn power(&self, i: usize) -> Option<TensorOp> {
        match &*self.source {
            Source::Pairs { r, powers } => {
                let mut p = powers.lock().unwrap();
                while p.len() <= i {
                    let next = r.compose(p.last().unwrap());
                    p.push(next);
                }
                Some(p[i].clone())
            }
            Source::Explicit => None,
        }
    }

    /// m_i; zero beyond the order of an explicit product.
    pub fn term(&self, i: usize) -> PolyDiffCochain {
        {
            let t = self.terms.lock().unwrap();
            if i < t.len() {
                return t[i].clone();
            }
        }
        let Some(p) = self.power(i) else { return PolyDiffCochain::zero(2) };
        let c = p.collapse().scale(&Scalar::from_big(BigRational::new(BigInt::from(1), factorial(i as u32))));
        let mut t = self.terms.lock().unwrap();
        while t.len() < i {
            drop(t);
            let _ = self.term(i - 1);
            t = self.terms.lock().unwrap();
        }
        if t.len() == i {
            t.push(c.clone());
        }
        c
    }

    /// m_0, …, m_K.
    pub fn terms(&self) -> Vec<PolyDiffCochain> {
        (0..=self.order).map(|i| self.term(i)).collect()
    }

    /// Σ ħ^i m_i(a, b): exact when the product terminates on polynomials,
    /// otherwise truncated at ħ^K.
    pub fn apply(&self, a: &CPoly, b: &CPoly) -> StarValue {
        let mut layers = Vec::new();
        if self.exact {
            let (ax, ay) = a.max_exponents();
            let (bx, by) = b.max_exponents();
            let stop = (ax + ay).min(bx + by) as usize;
            for i in 0..=stop {
                layers.push(self.term(i).apply(&[a.clone(), b.clone()]));
            }
        } else {
            for i in 0..=self.order {
                layers.push(self.term(i).apply(&[a.clone(), b.clone()]));
            }
        }
        StarValue::new(layers, self.exact, self.order)
    }

    /// Product of ħ-layered polynomials.
    pub fn apply_layered(&self, a: &StarValue, b: &StarValue) -> StarValue {
        let exact = self.exact && a.exact && b.exact;
        let order = self.order.min(a.order).min(b.order);
        let mut out: Vec<CPoly> = Vec::new();
        for (i, p) in a.layers.iter().enumerate() {
            for (j, q) in b.layers.iter().enumerate() {
                if p.is_zero() || q.is_zero() || (!exact && i + j > order) {
                    continue;
                }
                let v = self.apply(p, q);
                for (k, r) in v.layers.iter().enumerate() {
                    let n = i + j + k;
                    if !exact && n > order {
                        break;
                    }
                    if out.len() <= n {
                        out.resize(n + 1, CPoly::zero());
                    }
                    out[n] = out[n].add(r);
                }
            }
        }
        StarValue::new(out, exact, order)
    }

    /// (a⋆b)⋆c − a⋆(b⋆c) on all monomial triples with exponents in the box.
    pub fn associativity_defect(&self, dx: u32, dy: u32) -> AssocVerdict {
        let monos = Mono::in_box(dx, dy);
        let mut triples = Vec::new();
        for a in &monos {
            for b in &monos {
                for c in &monos {
                    triples.push((*a, *b, *c));
                }
            }
        }
        let checked = triples.len();
        let worst = triples
            .par_iter()
            .filter_map(|&(a, b, c)| {
                let (pa, pb, pc) = (mono_poly(a), mono_poly(b), mono_poly(c));
                let left = self.apply_layered(&self.apply(&pa, &pb), &StarValue::constant(pc.clone(), self.exact, self.order));
                let right = self.apply_layered(&StarValue::constant(pa, self.exact, self.order), &self.apply(&pb, &pc));
                let d = left.sub(&right);
                d.layers.iter().position(|l| !l.is_zero()).map(|k| (k, (a, b, c)))
            })
            .min();
        match worst {
            None => AssocVerdict::Pass { triples: checked },
            Some((order, triple)) => AssocVerdict::Fail { order, triple },
        }
    }

    /// Checks exp(ħ₁r)∘exp(ħ₂r) = exp((ħ₁+ħ₂)r) coefficientwise up to total
    /// order K: rⁱ∘rʲ = r^{i+j} for all i + j ≤ K.
    pub fn group_law_holds(&self) -> Option<bool> {
        self.power(0)?;
        for n in 0..=self.order {
            let target = self.power(n)?;
            for i in 0..=n {
                let lhs = self.power(i)?.compose(&self.power(n - i)?);
                if lhs != target {
                    return Some(false);
                }
            }
        }
        Some(true)
    }
}

fn mono_poly(m: Mono) -> CPoly {
    CPoly::term(Scalar::one(), m)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AssocVerdict {
    Pass { triples: usize },
    /// Lowest ħ-order at which a triple fails, with the first such triple.
    Fail { order: usize, triple: (Mono, Mono, Mono) },
}

/// Σ ħ^i layers[i]; exact or known modulo ħ^{K+1}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarValue {
    pub layers: Vec<CPoly>,
    pub exact: bool,
    pub order: usize,
}

impl StarValue {
    pub fn new(mut layers: Vec<CPoly>, exact: bool, order: usize) -> Self {
        if !exact {
            layers.truncate(order + 1);
        }
        while layers.len() > 1 && layers.last().is_some_and(CPoly::is_zero) {
            layers.pop();
        }
        if layers.is_empty() {
            layers.push(CPoly::zero());
        }
        StarValue { layers, exact, order }
    }

    pub fn constant(p: CPoly, exact: bool, order: usize) -> Self {
        Self::new(vec![p], exact, order)
    }

    pub fn layer(&self, k: usize) -> CPoly {
        self.layers.get(k).cloned().unwrap_or_default()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.layers.len().max(other.layers.len());
        let layers = (0..n).map(|k| self.layer(k).add(&other.layer(k))).collect();
        Self::new(layers, self.exact && other.exact, self.order.min(other.order))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        Self::new(self.layers.iter().map(|l| l.scale(s)).collect(), self.exact, self.order)
    }

    /// Multiply by a power series in ħ given by its coefficients.
    pub fn mul_series(&self, coeffs: &[Scalar]) -> Self {
        let mut out = vec![CPoly::zero(); self.layers.len() + coeffs.len()];
        for (i, l) in self.layers.iter().enumerate() {
            for (j, c) in coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&l.scale(c));
            }
        }
        Self::new(out, false, self.order)
    }

    pub fn is_zero(&self) -> bool {
        self.layers.iter().all(CPoly::is_zero)
    }

    /// Evaluate at a value of ħ; only legal for terminating products.
    pub fn specialize(&self, hbar: &Scalar) -> Result<CPoly> {
        if !self.exact {
            return Err(Error::InvalidParameters("truncated series cannot be specialized".into()));
        }
        let mut out = CPoly::zero();
        let mut p = Scalar::one();
        for l in &self.layers {
            out = out.add(&l.scale(&p));
            p = &p * hbar;
        }
        Ok(out)
    }

    /// Coefficients gathered into scalars: polynomials in ħ when exact,
    /// truncated series otherwise.
    pub fn to_cpoly(&self) -> CPoly {
        let mut by_mono: BTreeMap<Mono, Vec<Scalar>> = BTreeMap::new();
        for (k, l) in self.layers.iter().enumerate() {
            for (m, c) in l.terms() {
                let v = by_mono.entry(*m).or_insert_with(|| vec![Scalar::zero(); self.layers.len()]);
                v[k] = c.clone();
            }
        }
        CPoly::from_terms(by_mono.into_iter().map(|(m, cs)| {
            let s = if self.exact {
                let h = Scalar::hbar_rational();
                cs.iter().rev().fold(Scalar::zero(), |acc, c| &(&acc * &h) + c)
            } else {
                let mut cs = cs;
                cs.resize(self.order + 1, Scalar::zero());
                Scalar::Series(HSeries::new(cs, self.order))
            };
            (m, s)
        }))
    }
}

impl fmt::Display for StarValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.to_cpoly();
        if self.exact {
            write!(f, "{p}")
        } else {
            write!(f, "{p} (mod h^{})", self.order + 1)
        }
    }
}

/// σ(x^i y^j) = y^j x^i in the Weyl algebra.
pub fn anti_normal(w: &AlgebraSpec, p: &CPoly) -> Result<NCPoly> {
    let mut out = NCPoly::zero(w);
    for (m, c) in p.terms() {
        let y = NCPoly::y(w).pow(m.y)?;
        let x = NCPoly::x(w).pow(m.x)?;
        out = out.add(&y.mul(&x)?.scale(c))?;
    }
    Ok(out)
}

/// σ(a⋆b |_{ħ=1}) = σ(a)·σ(b) in W₁ for all monomials in the box, where ⋆
/// is the normal-ordering Moyal product and σ the anti-normal ordering.
pub fn weyl_isomorphism_check(dx: u32, dy: u32) -> Result<Option<(Mono, Mono)>> {
    let star = StarProduct::moyal();
    let w = AlgebraSpec::weyl();
    let monos = Mono::in_box(dx, dy);
    for a in &monos {
        for b in &monos {
            let (pa, pb) = (mono_poly(*a), mono_poly(*b));
            let lhs = anti_normal(&w, &star.apply(&pa, &pb).specialize(&Scalar::one())?)?;
            let rhs = anti_normal(&w, &pa)?.mul(&anti_normal(&w, &pb)?)?;
            if lhs != rhs {
                return Ok(Some((*a, *b)));
            }
        }
    }
    Ok(None)
}

/// Coefficients of e^{cħ} up to ħ^K.
pub fn exp_series(c: &Scalar, order: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::one()];
    for k in 1..=order {
        let prev = v[k - 1].clone();
        v.push(&(&prev * c) * &Scalar::from_ratio(1, k as i64));
    }
    v
}
