//! Finite windows of the bigraded cochain complex and exact computations on them.
//!
//! For the undeformed product δ keeps the coefficient monomial of every term
//! and the total differential order, so a window bounding bidegree, total
//! order and coefficient degree is a subcomplex, and a direct sum of complete
//! pieces of the full complex. Bounding the order of each slot separately
//! would not be: it truncates the comultiplication and leaves spurious
//! classes such as ∂x⌣∂x.

use std::fmt;

use rayon::prelude::*;

use crate::cpoly::{CPoly, Mono};
use crate::error::{Error, Result};
use crate::hochschild::cochain::{PolyDiffCochain, Slot};
use crate::linalg::KeyedColumns;
use crate::ncpoly::{AlgebraSpec, Derivation, NCPoly};
use crate::scalars::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CochainWindow {
    pub arity: usize,
    pub bidegree: (i64, i64),
    /// Bound on the total differential order Σ_t (a_t + b_t).
    pub order: u32,
    /// Bound on the degree of coefficient monomials.
    pub degree: u32,
}

fn split(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in split(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn slot_lists(orders: &[u32]) -> Vec<Vec<Slot>> {
    let mut out = vec![vec![]];
    for &k in orders {
        let mut next = Vec::new();
        for prefix in &out {
            for a in (0..=k).rev() {
                let mut s = prefix.clone();
                s.push(Slot::new(a, k - a));
                next.push(s);
            }
        }
        out = next;
    }
    out
}

impl CochainWindow {
    pub fn new(arity: usize, bidegree: (i64, i64), order: u32, degree: u32) -> Self {
        CochainWindow { arity, bidegree, order, degree }
    }

    /// The smallest window of the given arity containing every piece that F
    /// touches; for the undeformed product it holds all candidate preimages.
    pub fn around(f: &PolyDiffCochain, arity: usize) -> Self {
        let order = f.terms().keys().map(|s| s.iter().map(|t| t.order()).sum::<u32>()).max().unwrap_or(0);
        CochainWindow { arity, bidegree: f.bidegree().unwrap_or((0, 0)), order, degree: f.max_coeff_degree() }
    }

    pub fn with_arity(self, arity: usize) -> Self {
        CochainWindow { arity, ..self }
    }

    pub fn with_bidegree(self, bidegree: (i64, i64)) -> Self {
        CochainWindow { bidegree, ..self }
    }

    /// Order + 1, degree + 2.
    pub fn escalate(self) -> Self {
        CochainWindow { order: self.order + 1, degree: self.degree + 2, ..self }
    }

    /// Unit cochains x^α y^β [slots] spanning the window.
    pub fn basis(&self) -> Vec<PolyDiffCochain> {
        let (u, v) = self.bidegree;
        let mut out = Vec::new();
        for total in 0..=self.order {
            for orders in split(total, self.arity) {
                for slots in slot_lists(&orders) {
                    let (sx, sy) = slots.iter().fold((0i64, 0i64), |(a, b), s| (a + s.dx as i64, b + s.dy as i64));
                    let (mx, my) = (u + sx, v + sy);
                    if mx < 0 || my < 0 || (mx + my) as u32 > self.degree {
                        continue;
                    }
                    out.push(PolyDiffCochain::term(CPoly::mono(mx as u32, my as u32), slots));
                }
            }
        }
        out
    }
}

impl fmt::Display for CochainWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "arity={} bidegree=({},{}) order={} deg={}",
            self.arity, self.bidegree.0, self.bidegree.1, self.order, self.degree
        )
    }
}

pub(crate) type Key = (Vec<Slot>, Mono);

pub(crate) fn coords(c: &PolyDiffCochain) -> Vec<(Key, Scalar)> {
    c.coords().into_iter().collect()
}

pub(crate) fn combine(arity: usize, basis: &[PolyDiffCochain], x: &[Scalar]) -> PolyDiffCochain {
    let mut out = PolyDiffCochain::zero(arity);
    for (b, c) in basis.iter().zip(x) {
        if !c.is_zero() {
            out = out.add(&b.scale(c));
        }
    }
    out
}

/// Result of searching a window for f with δf = F.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoboundaryVerdict {
    Witness { f: PolyDiffCochain, window: CochainWindow },
    /// No preimage inside the largest window tried.
    NoneAtWindow { window: CochainWindow },
}

impl CoboundaryVerdict {
    pub fn is_coboundary(&self) -> bool {
        matches!(self, CoboundaryVerdict::Witness { .. })
    }

    pub fn window(&self) -> CochainWindow {
        match self {
            CoboundaryVerdict::Witness { window, .. } | CoboundaryVerdict::NoneAtWindow { window } => *window,
        }
    }
}

/// f in the window with δf = F, for the undeformed product on k[x, y].
pub fn solve_coboundary_in(f: &PolyDiffCochain, window: &CochainWindow) -> Result<Option<PolyDiffCochain>> {
    if f.arity() == 0 || window.arity + 1 != f.arity() {
        return Err(Error::InvalidParameters(format!("window {window} cannot hold a preimage of an arity-{} cochain", f.arity())));
    }
    if !f.coboundary().is_zero() {
        return Err(Error::NotACocycle);
    }
    if f.is_zero() {
        return Ok(Some(PolyDiffCochain::zero(window.arity)));
    }
    let basis = window.basis();
    let mut sys = KeyedColumns::new();
    for b in &basis {
        sys.push(coords(&b.coboundary()));
    }
    Ok(sys.solve(coords(f))?.map(|x| combine(window.arity, &basis, &x)))
}

/// Search with up to three escalations of the window.
pub fn solve_coboundary(f: &PolyDiffCochain, window: &CochainWindow) -> Result<CoboundaryVerdict> {
    let mut w = *window;
    for step in 0..=3 {
        if let Some(g) = solve_coboundary_in(f, &w)? {
            return Ok(CoboundaryVerdict::Witness { f: g, window: w });
        }
        if step < 3 {
            w = w.escalate();
        }
    }
    Ok(CoboundaryVerdict::NoneAtWindow { window: w })
}

/// Dimension of a window of H^n together with representatives of a basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowCohomology {
    pub window: CochainWindow,
    pub dim: usize,
    pub cocycles: usize,
    pub coboundaries: usize,
    pub witnesses: Vec<String>,
}

/// dim ker δ_n − rank δ_{n−1} on a window of the complex of `alg`.
///
/// On k[x, y] every arity is available. For the quantum plane (ħ = 0) the
/// bigrading survives; arity 0 is the center and arity 1 is Der/Inn.
pub fn window_cohomology_dims(alg: &AlgebraSpec, window: &CochainWindow) -> Result<WindowCohomology> {
    if alg.is_commutative() {
        polynomial_dims(window)
    } else if alg.hbar().is_zero() {
        match window.arity {
            0 => nc_center_dims(alg, window),
            1 => nc_outer_dims(alg, window),
            n => Err(Error::InvalidParameters(format!("arity {n} cohomology of a noncommutative algebra is not computed"))),
        }
    } else {
        Err(Error::InvalidParameters("window cohomology needs a bigraded algebra (hbar = 0)".into()))
    }
}

fn polynomial_dims(window: &CochainWindow) -> Result<WindowCohomology> {
    let basis = window.basis();
    let lower = if window.arity > 0 { window.with_arity(window.arity - 1).basis() } else { vec![] };
    let (ker, im) = rayon::join(
        || -> Result<Vec<Vec<Scalar>>> {
            let mut sys = KeyedColumns::new();
            for b in &basis {
                sys.push(coords(&b.coboundary()));
            }
            sys.nullspace()
        },
        || -> Result<Vec<PolyDiffCochain>> { Ok(lower.par_iter().map(|b| b.coboundary()).collect()) },
    );
    let ker = ker?;
    let im = im?;
    let cocycles: Vec<PolyDiffCochain> = ker.iter().map(|v| combine(window.arity, &basis, v)).collect();
    let mut sys = KeyedColumns::new();
    for b in &im {
        sys.push(coords(b));
    }
    let coboundaries = sys.rank()?;
    let mut witnesses = Vec::new();
    let mut rank = coboundaries;
    for z in &cocycles {
        sys.push(coords(z));
        let r = sys.rank()?;
        if r > rank {
            rank = r;
            witnesses.push(z.to_string());
        }
    }
    Ok(WindowCohomology { window: *window, dim: cocycles.len() - coboundaries, cocycles: cocycles.len(), coboundaries, witnesses })
}

fn nc_center_dims(alg: &AlgebraSpec, window: &CochainWindow) -> Result<WindowCohomology> {
    let (u, v) = window.bidegree;
    let mut out = WindowCohomology { window: *window, dim: 0, cocycles: 0, coboundaries: 0, witnesses: vec![] };
    if u < 0 || v < 0 || (u + v) as u32 > window.degree {
        return Ok(out);
    }
    let e = NCPoly::monomial(alg, Scalar::one(), Mono::new(u as u32, v as u32));
    if e.commutator(&NCPoly::x(alg))?.is_zero() && e.commutator(&NCPoly::y(alg))?.is_zero() {
        out.dim = 1;
        out.cocycles = 1;
        out.witnesses.push(e.to_string());
    }
    Ok(out)
}

fn derivation_coords(d: &Derivation) -> Vec<((u8, Mono), Scalar)> {
    let mut v: Vec<((u8, Mono), Scalar)> = d.image_x.terms().iter().map(|(m, c)| ((0, *m), c.clone())).collect();
    v.extend(d.image_y.terms().iter().map(|(m, c)| ((1, *m), c.clone())));
    v
}

fn nc_outer_dims(alg: &AlgebraSpec, window: &CochainWindow) -> Result<WindowCohomology> {
    let (u, v) = window.bidegree;
    let ders = alg.derivation_basis(u, v)?;
    let mut sys = KeyedColumns::new();
    if u >= 0 && v >= 0 && (u + v) as u32 <= window.degree {
        let e = NCPoly::monomial(alg, Scalar::one(), Mono::new(u as u32, v as u32));
        sys.push(derivation_coords(&Derivation::inner(&e)?));
    }
    let coboundaries = sys.rank()?;
    let mut rank = coboundaries;
    let mut witnesses = Vec::new();
    for d in &ders {
        sys.push(derivation_coords(d));
        let r = sys.rank()?;
        if r > rank {
            rank = r;
            witnesses.push(d.to_string());
        }
    }
    Ok(WindowCohomology { window: *window, dim: ders.len() - coboundaries, cocycles: ders.len(), coboundaries, witnesses })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dims(n: usize, b: (i64, i64), o: u32, d: u32) -> usize {
        window_cohomology_dims(&AlgebraSpec::polynomial(), &CochainWindow::new(n, b, o, d)).unwrap().dim
    }

    #[test]
    fn polynomial_low_arity() {
        assert_eq!(dims(0, (0, 0), 2, 6), 1);
        assert_eq!(dims(1, (0, 0), 2, 6), 2);
        assert_eq!(dims(2, (0, 0), 2, 6), 1);
        assert_eq!(dims(3, (0, 0), 3, 6), 0);
        assert_eq!(dims(2, (-1, -1), 2, 6), 1);
        assert_eq!(dims(1, (-1, 2), 2, 6), 1);
    }

    #[test]
    fn dx_cup_dx_is_coboundary() {
        let f = PolyDiffCochain::partial(1, 0).cup(&PolyDiffCochain::partial(1, 0));
        let v = solve_coboundary(&f, &CochainWindow::around(&f, 1)).unwrap();
        let CoboundaryVerdict::Witness { f: g, .. } = v else { panic!() };
        assert_eq!(g, PolyDiffCochain::partial(2, 0).scale(&Scalar::from_ratio(-1, 2)));
    }

    #[test]
    fn dx_cup_dy_is_not() {
        let f = PolyDiffCochain::partial(1, 0).cup(&PolyDiffCochain::partial(0, 1));
        let v = solve_coboundary(&f, &CochainWindow::around(&f, 1)).unwrap();
        assert!(!v.is_coboundary());
        assert_eq!(v.window().order, 5);
    }

    #[test]
    fn non_cocycle_rejected() {
        let f = PolyDiffCochain::term(CPoly::one(), vec![Slot::ID, Slot::DX]);
        let f = f.add(&PolyDiffCochain::term(CPoly::x(), vec![Slot::DX, Slot::DX]));
        assert!(matches!(solve_coboundary(&f, &CochainWindow::around(&f, 1)), Err(Error::NotACocycle)));
    }

    #[test]
    fn quantum_plane_outer_derivations() {
        let alg = AlgebraSpec::quantum_plane(Scalar::q()).unwrap();
        let w = |u, v| window_cohomology_dims(&alg, &CochainWindow::new(1, (u, v), 1, 8)).unwrap().dim;
        assert_eq!(w(0, 0), 2);
        assert_eq!(w(1, 0), 0);
        assert_eq!(w(1, 1), 0);
    }
}
