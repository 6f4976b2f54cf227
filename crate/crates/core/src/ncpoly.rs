//! Normal forms in A(q, ħ) = k{x,y}/(xy − q·yx − ħ).
//!
//! Elements are stored as Σ c_ij x^i y^j. Products are reduced with the
//! rewrite yx ↦ r·xy − r·ħ, r = 1/q. The table of y^b x^c is cached per
//! algebra. Special members: the Weyl algebra (q = 1, ħ = 1), the quantum
//! plane (ħ = 0), the q-Weyl algebra (ħ = 1) and k[x, y] (q = 1, ħ = 0).

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use crate::cpoly::{render_terms, CPoly, Mono};
use crate::error::{Error, Result};
use crate::expr::{Expr, ParseContext};
use crate::linalg::{SparseMatrix, SparseRow};
use crate::scalars::Scalar;

type Terms = BTreeMap<Mono, Scalar>;

fn add_into(t: &mut Terms, m: Mono, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match t.get_mut(&m) {
        Some(v) => {
            *v = &*v + &c;
            if v.is_zero() {
                t.remove(&m);
            }
        }
        None => {
            t.insert(m, c);
        }
    }
}

#[derive(Debug)]
struct Inner {
    q: Scalar,
    hbar: Scalar,
    r: Scalar,
    /// y^b x^c in normal form.
    table: Mutex<HashMap<(u32, u32), Arc<Vec<(Mono, Scalar)>>>>,
}

/// The parameters (q, ħ) of one algebra in the family.
#[derive(Clone, Debug)]
pub struct AlgebraSpec(Arc<Inner>);

impl PartialEq for AlgebraSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.q == other.0.q && self.0.hbar == other.0.hbar)
    }
}

impl Eq for AlgebraSpec {}

impl AlgebraSpec {
    pub fn new(q: Scalar, hbar: Scalar) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::InvalidParameters("q must be nonzero".into()));
        }
        q.field().join(&hbar.field())?;
        let r = q.try_inv()?;
        Ok(AlgebraSpec(Arc::new(Inner { q, hbar, r, table: Mutex::new(HashMap::new()) })))
    }

    /// W₁: xy − yx = 1.
    pub fn weyl() -> Self {
        Self::new(Scalar::one(), Scalar::one()).unwrap()
    }

    /// k[x, y].
    pub fn polynomial() -> Self {
        Self::new(Scalar::one(), Scalar::zero()).unwrap()
    }

    /// The quantum plane xy = q·yx.
    pub fn quantum_plane(q: Scalar) -> Result<Self> {
        Self::new(q, Scalar::zero())
    }

    /// The q-Weyl algebra xy − q·yx = 1.
    pub fn q_weyl(q: Scalar) -> Result<Self> {
        Self::new(q, Scalar::one())
    }

    pub fn q(&self) -> &Scalar {
        &self.0.q
    }

    pub fn hbar(&self) -> &Scalar {
        &self.0.hbar
    }

    /// r = 1/q.
    pub fn r(&self) -> &Scalar {
        &self.0.r
    }

    pub fn is_commutative(&self) -> bool {
        self.0.q.is_one() && self.0.hbar.is_zero()
    }

    /// Normal form of y^b x^c.
    fn yx(&self, b: u32, c: u32) -> Arc<Vec<(Mono, Scalar)>> {
        if let Some(v) = self.0.table.lock().unwrap().get(&(b, c)) {
            return v.clone();
        }
        let v: Vec<(Mono, Scalar)> = if b == 0 || c == 0 {
            vec![(Mono::new(c, b), Scalar::one())]
        } else if c == 1 {
            // y^b x = r·(y^{b−1} x)·y − r·ħ·y^{b−1}
            let mut t = Terms::new();
            for (m, s) in self.yx(b - 1, 1).iter() {
                add_into(&mut t, Mono::new(m.x, m.y + 1), s * &self.0.r);
            }
            add_into(&mut t, Mono::new(0, b - 1), -(&(&self.0.r * &self.0.hbar)));
            t.into_iter().collect()
        } else {
            // y^b x^c = (y^b x^{c−1})·x, and x^i y^j·x = x^i (y^j x).
            let mut t = Terms::new();
            for (m, s) in self.yx(b, c - 1).iter() {
                for (n, u) in self.yx(m.y, 1).iter() {
                    add_into(&mut t, Mono::new(m.x + n.x, n.y), s * u);
                }
            }
            t.into_iter().collect()
        };
        let v = Arc::new(v);
        self.0.table.lock().unwrap().insert((b, c), v.clone());
        v
    }

    /// Normal form of a word in x and y.
    pub fn normal_form(&self, coeff: Scalar, word: &str) -> Result<NCPoly> {
        let mut p = NCPoly::constant(self, coeff);
        for (i, ch) in word.chars().enumerate() {
            let g = match ch {
                'x' => NCPoly::x(self),
                'y' => NCPoly::y(self),
                _ => return Err(Error::Parse { offset: i, message: format!("letter {ch:?} is not x or y") }),
            };
            p = p.mul(&g)?;
        }
        Ok(p)
    }

    /// Basis of the center among elements with exponents ≤ (dx, dy).
    ///
    /// Solved per weight class i − j when ħ ≠ 0 and per bidegree when ħ = 0.
    pub fn center_basis(&self, dx: u32, dy: u32) -> Result<Vec<NCPoly>> {
        let monos = Mono::in_box(dx, dy);
        let mut classes: BTreeMap<(i64, i64), Vec<Mono>> = BTreeMap::new();
        for m in monos {
            let key = if self.hbar().is_zero() { (m.x as i64, m.y as i64) } else { (m.x as i64 - m.y as i64, 0) };
            classes.entry(key).or_default().push(m);
        }
        let x = NCPoly::x(self);
        let y = NCPoly::y(self);
        let per_class: Vec<Result<Vec<NCPoly>>> = classes
            .into_values()
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|unknowns| {
                let images: Vec<(NCPoly, NCPoly)> = unknowns
                    .iter()
                    .map(|m| {
                        let c = NCPoly::monomial(self, Scalar::one(), *m);
                        Ok((c.commutator(&x)?, c.commutator(&y)?))
                    })
                    .collect::<Result<_>>()?;
                let kernel = kernel_of(&images, unknowns.len())?;
                Ok(kernel.into_iter().map(|v| NCPoly::from_coords(self, &unknowns, &v)).collect())
            })
            .collect();
        let mut out = Vec::new();
        for r in per_class {
            out.extend(r?);
        }
        out.sort_by(|a, b| a.leading_mono().cmp(&b.leading_mono()));
        Ok(out)
    }

    /// Basis of derivations of leading bidegree (u, v): D(x) of bidegree
    /// (u+1, v) and D(y) of bidegree (u, v+1), plus lower terms of the same
    /// weight when ħ ≠ 0.
    pub fn derivation_basis(&self, u: i64, v: i64) -> Result<Vec<Derivation>> {
        if u < -1 || v < -1 {
            return Err(Error::OutOfRange(u, v));
        }
        let shifted = |a: i64, b: i64| -> Vec<Mono> {
            let steps = if self.hbar().is_zero() { 0 } else { a.min(b).max(0) };
            (0..=steps)
                .filter(|t| a - t >= 0 && b - t >= 0)
                .map(|t| Mono::new((a - t) as u32, (b - t) as u32))
                .collect()
        };
        let sx = shifted(u + 1, v);
        let sy = shifted(u, v + 1);
        let mut images = Vec::new();
        for m in &sx {
            let d = Derivation { algebra: self.clone(), image_x: NCPoly::monomial(self, Scalar::one(), *m), image_y: NCPoly::zero(self) };
            images.push((d.relation_defect()?, NCPoly::zero(self)));
        }
        for m in &sy {
            let d = Derivation { algebra: self.clone(), image_x: NCPoly::zero(self), image_y: NCPoly::monomial(self, Scalar::one(), *m) };
            images.push((d.relation_defect()?, NCPoly::zero(self)));
        }
        let kernel = kernel_of(&images, sx.len() + sy.len())?;
        Ok(kernel
            .into_iter()
            .map(|vec| Derivation {
                algebra: self.clone(),
                image_x: NCPoly::from_coords(self, &sx, &vec[..sx.len()]),
                image_y: NCPoly::from_coords(self, &sy, &vec[sx.len()..]),
            })
            .collect())
    }

    /// Whether some derivation has the prescribed generator images up to
    /// additional lower-order terms of the same weight: solves for the
    /// correction in the filtered space below (u, v).
    pub fn extends_to_derivation(&self, image_x: &NCPoly, image_y: &NCPoly) -> Result<Option<Derivation>> {
        let d0 = Derivation { algebra: self.clone(), image_x: image_x.clone(), image_y: image_y.clone() };
        let target = d0.relation_defect()?;
        if target.is_zero() {
            return Ok(Some(d0));
        }
        // Corrections: all monomials of the same weights strictly below the leading ones.
        let (lx, ly) = (image_x.leading_mono(), image_y.leading_mono());
        let lead = match (lx, ly) {
            (Some(a), _) => (a.x as i64 - 1, a.y as i64),
            (None, Some(b)) => (b.x as i64, b.y as i64 - 1),
            (None, None) => return Ok(Some(d0)),
        };
        let below = |a: i64, b: i64| -> Vec<Mono> {
            (1..=a.min(b).max(0)).filter(|t| a - t >= 0 && b - t >= 0).map(|t| Mono::new((a - t) as u32, (b - t) as u32)).collect()
        };
        let sx = if self.hbar().is_zero() { vec![] } else { below(lead.0 + 1, lead.1) };
        let sy = if self.hbar().is_zero() { vec![] } else { below(lead.0, lead.1 + 1) };
        let mut cols: Vec<NCPoly> = Vec::new();
        for m in &sx {
            let d = Derivation { algebra: self.clone(), image_x: NCPoly::monomial(self, Scalar::one(), *m), image_y: NCPoly::zero(self) };
            cols.push(d.relation_defect()?);
        }
        for m in &sy {
            let d = Derivation { algebra: self.clone(), image_x: NCPoly::zero(self), image_y: NCPoly::monomial(self, Scalar::one(), *m) };
            cols.push(d.relation_defect()?);
        }
        let rows: Vec<Mono> = {
            let mut s: Vec<Mono> = cols.iter().chain(std::iter::once(&target)).flat_map(|p| p.terms.keys().copied()).collect();
            s.sort();
            s.dedup();
            s
        };
        let mut m = SparseMatrix::new(cols.len());
        for mono in &rows {
            let row: SparseRow = cols.iter().enumerate().filter_map(|(j, c)| c.terms.get(mono).map(|v| (j, v.clone()))).collect();
            m.push_row(row);
        }
        let rhs: Vec<Scalar> = rows.iter().map(|mono| -&target.coeff(*mono)).collect();
        Ok(m.solve(&rhs)?.map(|sol| Derivation {
            algebra: self.clone(),
            image_x: image_x.add(&NCPoly::from_coords(self, &sx, &sol[..sx.len()])).unwrap(),
            image_y: image_y.add(&NCPoly::from_coords(self, &sy, &sol[sx.len()..])).unwrap(),
        }))
    }

    /// Parse the element grammar, e.g. `3/2*x^2*y + (1+q)*y^3`; products
    /// are taken in the written order.
    pub fn parse(&self, text: &str, ctx: &ParseContext) -> Result<NCPoly> {
        eval_nc(self, &Expr::parse(text)?, ctx)
    }
}

/// Nullspace of the linear map sending unknown k to the pair images[k].
fn kernel_of(images: &[(NCPoly, NCPoly)], n: usize) -> Result<Vec<Vec<Scalar>>> {
    let mut rows: BTreeMap<(u8, Mono), SparseRow> = BTreeMap::new();
    for (k, (a, b)) in images.iter().enumerate() {
        for (m, c) in &a.terms {
            rows.entry((0, *m)).or_default().insert(k, c.clone());
        }
        for (m, c) in &b.terms {
            rows.entry((1, *m)).or_default().insert(k, c.clone());
        }
    }
    let mut mat = SparseMatrix::new(n);
    for (_, r) in rows {
        mat.push_row(r);
    }
    mat.nullspace()
}

fn eval_nc(alg: &AlgebraSpec, e: &Expr, ctx: &ParseContext) -> Result<NCPoly> {
    if !e.mentions("x") && !e.mentions("y") {
        return Ok(NCPoly::constant(alg, e.eval_scalar(ctx)?));
    }
    Ok(match e {
        Expr::Atom(a) if a == "x" => NCPoly::x(alg),
        Expr::Atom(_) => NCPoly::y(alg),
        Expr::Add(a, b) => eval_nc(alg, a, ctx)?.add(&eval_nc(alg, b, ctx)?)?,
        Expr::Sub(a, b) => eval_nc(alg, a, ctx)?.sub(&eval_nc(alg, b, ctx)?)?,
        Expr::Mul(a, b) => eval_nc(alg, a, ctx)?.mul(&eval_nc(alg, b, ctx)?)?,
        Expr::Neg(a) => eval_nc(alg, a, ctx)?.neg(),
        Expr::Div(a, b) if !b.mentions("x") && !b.mentions("y") => {
            eval_nc(alg, a, ctx)?.scale(&b.eval_scalar(ctx)?.try_inv()?)
        }
        Expr::Pow(a, k) if *k >= 0 => eval_nc(alg, a, ctx)?.pow(*k as u32)?,
        _ => return Err(Error::Parse { offset: 0, message: "not a polynomial expression".into() }),
    })
}

/// Σ c_ij x^i y^j in normal order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NCPoly {
    algebra: AlgebraSpec,
    terms: Terms,
}

impl NCPoly {
    pub fn zero(alg: &AlgebraSpec) -> Self {
        NCPoly { algebra: alg.clone(), terms: Terms::new() }
    }

    pub fn constant(alg: &AlgebraSpec, c: Scalar) -> Self {
        Self::monomial(alg, c, Mono::ONE)
    }

    pub fn one(alg: &AlgebraSpec) -> Self {
        Self::constant(alg, Scalar::one())
    }

    pub fn monomial(alg: &AlgebraSpec, c: Scalar, m: Mono) -> Self {
        let mut p = Self::zero(alg);
        add_into(&mut p.terms, m, c);
        p
    }

    pub fn x(alg: &AlgebraSpec) -> Self {
        Self::monomial(alg, Scalar::one(), Mono::new(1, 0))
    }

    pub fn y(alg: &AlgebraSpec) -> Self {
        Self::monomial(alg, Scalar::one(), Mono::new(0, 1))
    }

    pub fn from_terms(alg: &AlgebraSpec, terms: impl IntoIterator<Item = (Mono, Scalar)>) -> Self {
        let mut p = Self::zero(alg);
        for (m, c) in terms {
            add_into(&mut p.terms, m, c);
        }
        p
    }

    fn from_coords(alg: &AlgebraSpec, monos: &[Mono], coords: &[Scalar]) -> Self {
        Self::from_terms(alg, monos.iter().copied().zip(coords.iter().cloned()))
    }

    /// The same coefficients read as a commutative polynomial.
    pub fn to_cpoly(&self) -> CPoly {
        CPoly::from_terms(self.terms.iter().map(|(m, c)| (*m, c.clone())))
    }

    pub fn from_cpoly(alg: &AlgebraSpec, p: &CPoly) -> Self {
        Self::from_terms(alg, p.terms().iter().map(|(m, c)| (*m, c.clone())))
    }

    pub fn algebra(&self) -> &AlgebraSpec {
        &self.algebra
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

    /// Largest monomial in the (degree, descending x) order.
    pub fn leading_mono(&self) -> Option<Mono> {
        self.terms.keys().next_back().copied()
    }

    fn check(&self, other: &NCPoly) -> Result<()> {
        if self.algebra == other.algebra {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    pub fn add(&self, other: &NCPoly) -> Result<NCPoly> {
        self.check(other)?;
        let mut p = self.clone();
        for (m, c) in &other.terms {
            add_into(&mut p.terms, *m, c.clone());
        }
        Ok(p)
    }

    pub fn sub(&self, other: &NCPoly) -> Result<NCPoly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> NCPoly {
        NCPoly { algebra: self.algebra.clone(), terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }

    pub fn scale(&self, s: &Scalar) -> NCPoly {
        Self::from_terms(&self.algebra, self.terms.iter().map(|(m, c)| (*m, c * s)))
    }

    pub fn mul(&self, other: &NCPoly) -> Result<NCPoly> {
        self.check(other)?;
        let mut t = Terms::new();
        for (a, c) in &self.terms {
            for (b, d) in &other.terms {
                let cd = c * d;
                for (m, s) in self.algebra.yx(a.y, b.x).iter() {
                    add_into(&mut t, Mono::new(a.x + m.x, m.y + b.y), &cd * s);
                }
            }
        }
        Ok(NCPoly { algebra: self.algebra.clone(), terms: t })
    }

    pub fn pow(&self, e: u32) -> Result<NCPoly> {
        let mut p = NCPoly::one(&self.algebra);
        for _ in 0..e {
            p = p.mul(self)?;
        }
        Ok(p)
    }

    /// ab − ba.
    pub fn commutator(&self, other: &NCPoly) -> Result<NCPoly> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// Coefficient-wise image under a scalar map (e.g. a specialization).
    pub fn map_coeffs(&self, alg: &AlgebraSpec, f: impl Fn(&Scalar) -> Result<Scalar>) -> Result<NCPoly> {
        let mut p = NCPoly::zero(alg);
        for (m, c) in &self.terms {
            add_into(&mut p.terms, *m, f(c)?);
        }
        Ok(p)
    }
}

impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_terms(self.terms.iter()))
    }
}

/// A derivation, stored by the images of the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub algebra: AlgebraSpec,
    pub image_x: NCPoly,
    pub image_y: NCPoly,
}

impl Derivation {
    pub fn new(image_x: NCPoly, image_y: NCPoly) -> Result<Self> {
        image_x.check(&image_y)?;
        Ok(Derivation { algebra: image_x.algebra.clone(), image_x, image_y })
    }

    /// D(x)·y + x·D(y) − q(D(y)·x + y·D(x)); zero iff D respects the relation.
    pub fn relation_defect(&self) -> Result<NCPoly> {
        let alg = &self.algebra;
        let x = NCPoly::x(alg);
        let y = NCPoly::y(alg);
        let left = self.image_x.mul(&y)?.add(&x.mul(&self.image_y)?)?;
        let right = self.image_y.mul(&x)?.add(&y.mul(&self.image_x)?)?;
        left.sub(&right.scale(alg.q()))
    }

    pub fn is_derivation(&self) -> Result<bool> {
        Ok(self.relation_defect()?.is_zero())
    }

    /// ad c: a ↦ [c, a].
    pub fn inner(c: &NCPoly) -> Result<Self> {
        let alg = c.algebra.clone();
        Ok(Derivation { image_x: c.commutator(&NCPoly::x(&alg))?, image_y: c.commutator(&NCPoly::y(&alg))?, algebra: alg })
    }

    /// D(x^i y^j) by the Leibniz rule, extended linearly.
    pub fn apply(&self, p: &NCPoly) -> Result<NCPoly> {
        p.check(&self.image_x)?;
        let alg = &self.algebra;
        let mut out = NCPoly::zero(alg);
        for (m, c) in &p.terms {
            let mut acc = NCPoly::zero(alg);
            for k in 0..m.x {
                let left = NCPoly::monomial(alg, Scalar::one(), Mono::new(k, 0));
                let right = NCPoly::monomial(alg, Scalar::one(), Mono::new(m.x - k - 1, m.y));
                acc = acc.add(&left.mul(&self.image_x)?.mul(&right)?)?;
            }
            for k in 0..m.y {
                let left = NCPoly::monomial(alg, Scalar::one(), Mono::new(m.x, k));
                let right = NCPoly::monomial(alg, Scalar::one(), Mono::new(0, m.y - k - 1));
                acc = acc.add(&left.mul(&self.image_y)?.mul(&right)?)?;
            }
            out = out.add(&acc.scale(c))?;
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.image_x.is_zero() && self.image_y.is_zero()
    }

    pub fn add(&self, other: &Derivation) -> Result<Derivation> {
        Derivation::new(self.image_x.add(&other.image_x)?, self.image_y.add(&other.image_y)?)
    }

    pub fn scale(&self, s: &Scalar) -> Derivation {
        Derivation { algebra: self.algebra.clone(), image_x: self.image_x.scale(s), image_y: self.image_y.scale(s) }
    }

    /// Some e with exponents ≤ (dx, dy) and ad e = D, if one exists.
    pub fn inner_preimage(&self, dx: u32, dy: u32) -> Result<Option<NCPoly>> {
        let alg = &self.algebra;
        let monos = Mono::in_box(dx, dy);
        let mut rows: BTreeMap<(u8, Mono), SparseRow> = BTreeMap::new();
        for (k, m) in monos.iter().enumerate() {
            let d = Derivation::inner(&NCPoly::monomial(alg, Scalar::one(), *m))?;
            for (n, c) in &d.image_x.terms {
                rows.entry((0, *n)).or_default().insert(k, c.clone());
            }
            for (n, c) in &d.image_y.terms {
                rows.entry((1, *n)).or_default().insert(k, c.clone());
            }
        }
        for n in self.image_x.terms.keys() {
            rows.entry((0, *n)).or_default();
        }
        for n in self.image_y.terms.keys() {
            rows.entry((1, *n)).or_default();
        }
        let mut mat = SparseMatrix::new(monos.len());
        let mut rhs = Vec::new();
        for ((g, n), r) in rows {
            rhs.push(if g == 0 { self.image_x.coeff(n) } else { self.image_y.coeff(n) });
            mat.push_row(r);
        }
        Ok(mat.solve(&rhs)?.map(|sol| NCPoly::from_coords(alg, &monos, &sol)))
    }

    /// True iff D kills every center basis element with exponents ≤ (dx, dy).
    pub fn annihilates_center(&self, dx: u32, dy: u32) -> Result<bool> {
        for c in self.algebra.center_basis(dx, dy)? {
            if !self.apply(&c)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x -> {}, y -> {}", self.image_x, self.image_y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zeta_alg(n: u32, hbar: i64) -> AlgebraSpec {
        AlgebraSpec::new(Scalar::zeta(n), Scalar::from_int(hbar)).unwrap()
    }

    #[test]
    fn weyl_relation() {
        let w = AlgebraSpec::weyl();
        let yx = w.normal_form(Scalar::one(), "yx").unwrap();
        assert_eq!(yx.to_string(), "x*y - 1");
        let (x, y) = (NCPoly::x(&w), NCPoly::y(&w));
        assert_eq!(x.commutator(&y).unwrap(), NCPoly::one(&w));
        assert_eq!(y.commutator(&x).unwrap(), NCPoly::one(&w).neg());
    }

    #[test]
    fn quantum_plane_swap() {
        let a = AlgebraSpec::quantum_plane(Scalar::q()).unwrap();
        let p = a.normal_form(Scalar::one(), "yx").unwrap();
        assert_eq!(p, NCPoly::monomial(&a, a.r().clone(), Mono::new(1, 1)));
    }

    #[test]
    fn power_of_x_is_central_at_root_of_unity() {
        let a = zeta_alg(3, 1);
        let x3 = NCPoly::x(&a).pow(3).unwrap();
        assert!(x3.commutator(&NCPoly::y(&a)).unwrap().is_zero());
        assert!(Derivation::inner(&x3).unwrap().is_zero());
    }

    #[test]
    fn weyl_center_is_trivial() {
        let c = AlgebraSpec::weyl().center_basis(5, 5).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].leading_mono(), Some(Mono::ONE));
    }

    #[test]
    fn q_weyl_scaling_derivation() {
        let a = AlgebraSpec::q_weyl(Scalar::q()).unwrap();
        let basis = a.derivation_basis(0, 0).unwrap();
        assert_eq!(basis.len(), 1);
        let d = &basis[0];
        let c = d.image_x.coeff(Mono::new(1, 0));
        assert_eq!(d.image_x, NCPoly::x(&a).scale(&c));
        assert_eq!(d.image_y, NCPoly::y(&a).scale(&-&c));
        let xdx = Derivation::new(NCPoly::x(&a), NCPoly::zero(&a)).unwrap();
        assert!(!xdx.is_derivation().unwrap());
    }

    #[test]
    fn polynomial_ring_partial_x() {
        let basis = AlgebraSpec::polynomial().derivation_basis(-1, 0).unwrap();
        assert_eq!(basis.len(), 1);
        assert!(basis[0].image_y.is_zero());
        assert_eq!(basis[0].image_x.leading_mono(), Some(Mono::ONE));
    }

    #[test]
    fn inner_derivation_of_minus_y() {
        let w = AlgebraSpec::weyl();
        let d = Derivation::inner(&NCPoly::y(&w).neg()).unwrap();
        assert_eq!(d.image_x, NCPoly::one(&w));
        assert!(d.image_y.is_zero());
    }

    #[test]
    fn scaling_derivation_moves_center() {
        let a = zeta_alg(3, 1);
        let d = a.extends_to_derivation(&NCPoly::x(&a), &NCPoly::y(&a).neg()).unwrap().unwrap();
        assert!(!d.annihilates_center(3, 3).unwrap());
        let inner = Derivation::inner(&a.parse("x^2*y + y", &ParseContext::default()).unwrap()).unwrap();
        assert!(inner.annihilates_center(6, 6).unwrap());
    }

    #[test]
    fn inner_preimage_recovers_element() {
        let w = AlgebraSpec::weyl();
        let e = w.parse("x^2*y - 3*y", &ParseContext::default()).unwrap();
        let d = Derivation::inner(&e).unwrap();
        let f = d.inner_preimage(3, 3).unwrap().unwrap();
        assert_eq!(Derivation::inner(&f).unwrap(), d);
        let a = zeta_alg(3, 1);
        let scaling = a.extends_to_derivation(&NCPoly::x(&a), &NCPoly::y(&a).neg()).unwrap().unwrap();
        assert!(scaling.inner_preimage(5, 5).unwrap().is_none());
    }

    #[test]
    fn parse_and_render() {
        let w = AlgebraSpec::weyl();
        let p = w.parse("y*x + 1", &ParseContext::default()).unwrap();
        assert_eq!(p.to_string(), "x*y");
    }
}
