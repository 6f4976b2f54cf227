//! Cochains with ħ-layers, lifting of cocycles along a star product, and the
//! ħ-torsion test for lifts that become coboundaries.

use std::fmt;

use crate::cpoly::CPoly;
use crate::error::{Error, Result};
use crate::hochschild::cochain::PolyDiffCochain;
use crate::hochschild::window::{combine, coords, solve_coboundary, CoboundaryVerdict, CochainWindow};
use crate::linalg::KeyedColumns;
use crate::scalars::Scalar;
use crate::starprod::{StarProduct, StarValue};

/// z_0 + ħz_1 + … + ħ^K z_K, known modulo ħ^{K+1}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayeredCochain {
    arity: usize,
    order: usize,
    layers: Vec<PolyDiffCochain>,
}

impl LayeredCochain {
    pub fn new(arity: usize, mut layers: Vec<PolyDiffCochain>, order: usize) -> Self {
        layers.truncate(order + 1);
        layers.resize(order + 1, PolyDiffCochain::zero(arity));
        LayeredCochain { arity, order, layers }
    }

    pub fn constant(z: &PolyDiffCochain, order: usize) -> Self {
        Self::new(z.arity(), vec![z.clone()], order)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn layers(&self) -> &[PolyDiffCochain] {
        &self.layers
    }

    pub fn layer(&self, k: usize) -> &PolyDiffCochain {
        &self.layers[k]
    }

    pub fn is_zero(&self) -> bool {
        self.layers.iter().all(PolyDiffCochain::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        Self::new(self.arity, (0..=order).map(|k| self.layers[k].add(&other.layers[k])).collect(), order)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        Self::new(self.arity, self.layers.iter().map(|l| l.scale(s)).collect(), self.order)
    }

    /// ħ^r · self, keeping the truncation order.
    pub fn shift_up(&self, r: usize) -> Self {
        let mut layers = vec![PolyDiffCochain::zero(self.arity); r];
        layers.extend(self.layers.iter().cloned());
        Self::new(self.arity, layers, self.order)
    }

    /// self / ħ; the result is known to one order less.
    pub fn div_by_h(&self) -> Result<Self> {
        if !self.layers[0].is_zero() {
            return Err(Error::Divisibility(format!("constant layer {} is not divisible by h", self.layers[0])));
        }
        if self.order == 0 {
            return Err(Error::Divisibility("nothing left after dividing by h".into()));
        }
        Ok(Self::new(self.arity, self.layers[1..].to_vec(), self.order - 1))
    }

    /// [F_ħ, m_ħ] layer by layer.
    pub fn bracket_star(&self, star: &StarProduct) -> Self {
        let mut out = vec![PolyDiffCochain::zero(self.arity + 1); self.order + 1];
        for (j, f) in self.layers.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            for (i, slot) in out.iter_mut().enumerate().skip(j) {
                *slot = slot.add(&f.bracket(&star.term(i - j)));
            }
        }
        Self::new(self.arity + 1, out, self.order)
    }

    /// δ_ħ F = −[F, m_ħ].
    pub fn delta(&self, star: &StarProduct) -> Self {
        self.bracket_star(star).scale(&Scalar::from_int(-1))
    }

    /// (F ⌣_ħ G)(a…, b…) = F(a…) ⋆ G(b…).
    pub fn cup_star(&self, other: &Self, star: &StarProduct) -> Self {
        let order = self.order.min(other.order);
        let mut out = vec![PolyDiffCochain::zero(self.arity + other.arity); order + 1];
        for (i, f) in self.layers.iter().enumerate().take(order + 1) {
            for (j, g) in other.layers.iter().enumerate().take(order + 1 - i) {
                if f.is_zero() || g.is_zero() {
                    continue;
                }
                for (l, slot) in out.iter_mut().enumerate().skip(i + j) {
                    *slot = slot.add(&f.cup_via(g, &star.term(l - i - j)));
                }
            }
        }
        Self::new(self.arity + other.arity, out, order)
    }

    /// Equality of the layers both sides know.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let k = self.order.min(other.order);
        self.arity == other.arity && (0..=k).all(|i| self.layers[i] == other.layers[i])
    }

    pub fn apply(&self, args: &[CPoly]) -> StarValue {
        StarValue::new(self.layers.iter().map(|l| l.apply(args)).collect(), false, self.order)
    }
}

impl fmt::Display for LayeredCochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, l) in self.layers.iter().enumerate() {
            if l.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{l}")?,
                1 => write!(f, "h*({l})")?,
                k => write!(f, "h^{k}*({l})")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " (mod h^{})", self.order + 1)
    }
}

/// [z, m₁] and whether it is a coboundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obstruction {
    pub cochain: PolyDiffCochain,
    pub verdict: CoboundaryVerdict,
}

impl Obstruction {
    pub fn vanishes(&self) -> bool {
        self.verdict.is_coboundary()
    }
}

pub fn primary_obstruction(z: &PolyDiffCochain, m1: &PolyDiffCochain) -> Result<Obstruction> {
    if !z.coboundary().is_zero() {
        return Err(Error::NotACocycle);
    }
    let o = z.bracket(m1);
    assert!(o.coboundary().is_zero(), "the bracket of a cocycle with an infinitesimal must be a cocycle");
    let verdict = solve_coboundary(&o, &CochainWindow::around(&o, z.arity()))?;
    Ok(Obstruction { cochain: o, verdict })
}

/// Subspace of coefficient vectors α for which Σ α_i [z_i, m₁] is a coboundary
/// of a cochain in the window; returned as a reduced basis.
pub fn liftable_subspace(zs: &[PolyDiffCochain], m1: &PolyDiffCochain, window: &CochainWindow) -> Result<Vec<Vec<Scalar>>> {
    let mut sys = KeyedColumns::new();
    for z in zs {
        sys.push(coords(&z.bracket(m1)));
    }
    for b in window.basis() {
        sys.push(coords(&b.coboundary().neg()));
    }
    let mut basis = Vec::new();
    let mut acc = KeyedColumns::new();
    let mut rank = 0;
    for v in sys.nullspace()? {
        let p = v[..zs.len()].to_vec();
        acc.push(p.iter().cloned().enumerate());
        let r = acc.rank()?;
        if r > rank {
            rank = r;
            basis.push(p);
        }
    }
    Ok(basis)
}

fn homogeneous_step(star: &StarProduct) -> Result<(i64, i64)> {
    let m1 = star.term(1);
    let beta = if m1.is_zero() { (0, 0) } else { m1.bidegree().ok_or_else(|| Error::InvalidParameters("infinitesimal is not homogeneous".into()))? };
    for i in 2..=star.order() {
        let t = star.term(i);
        if let Some(b) = t.bidegree() {
            if b != (beta.0 * i as i64, beta.1 * i as i64) {
                return Err(Error::InvalidParameters(format!("m_{i} has bidegree {b:?}, expected {i} times {beta:?}")));
            }
        } else if !t.is_zero() {
            return Err(Error::InvalidParameters(format!("m_{i} is not homogeneous")));
        }
    }
    Ok(beta)
}

fn shifted(b: (i64, i64), beta: (i64, i64), j: i64) -> (i64, i64) {
    (b.0 + j * beta.0, b.1 + j * beta.1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LiftOutcome {
    Lifted(LayeredCochain),
    /// No z_1..z_order inside the window solves the equations up to `order`;
    /// `obstruction` is the right-hand side left over by the lift found one
    /// order earlier.
    Obstructed { order: usize, obstruction: PolyDiffCochain, window: CochainWindow },
}

type RowKey = (usize, crate::hochschild::window::Key);

fn tagged(j: usize, c: &PolyDiffCochain) -> Vec<(RowKey, Scalar)> {
    coords(c).into_iter().map(|(k, v)| ((j, k), v)).collect()
}

/// z_ħ = z + ħz_1 + … with [z_ħ, m_ħ] ≡ 0 mod ħ^{K+1}.
///
/// All layers are solved for jointly, so an early choice of z_j never blocks
/// a later order that some other choice would reach. Each z_j ranges over the
/// window at bidegree b(z) + jβ, where m_j has bidegree jβ.
pub fn lift_cocycle(z: &PolyDiffCochain, star: &StarProduct, window: &CochainWindow) -> Result<LiftOutcome> {
    if !z.coboundary().is_zero() {
        return Err(Error::NotACocycle);
    }
    let k = star.order();
    if z.is_zero() {
        return Ok(LiftOutcome::Lifted(LayeredCochain::constant(z, k)));
    }
    let b = z.bidegree().ok_or_else(|| Error::InvalidParameters("lifting needs a homogeneous cocycle".into()))?;
    let beta = homogeneous_step(star)?;
    let n = z.arity();
    let bases: Vec<Vec<PolyDiffCochain>> =
        (0..=k).map(|j| if j == 0 { vec![] } else { window.with_arity(n).with_bidegree(shifted(b, beta, j as i64)).basis() }).collect();
    let rhs: Vec<PolyDiffCochain> = (0..=k).map(|j| z.bracket(&star.term(j))).collect();
    let mut prev: Vec<PolyDiffCochain> = vec![z.clone()];
    for top in 1..=k {
        let mut sys = KeyedColumns::new();
        let mut owner = Vec::new();
        for (j, basis) in bases.iter().enumerate().take(top + 1).skip(1) {
            for e in basis {
                let mut col = tagged(j, &e.coboundary());
                for jj in j + 1..=top {
                    col.extend(tagged(jj, &e.bracket(&star.term(jj - j)).neg()));
                }
                sys.push(col);
                owner.push(j);
            }
        }
        let b: Vec<(RowKey, Scalar)> = (1..=top).flat_map(|j| tagged(j, &rhs[j])).collect();
        match sys.solve(b)? {
            None => {
                let mut o = rhs[top].clone();
                for (i, zi) in prev.iter().enumerate().skip(1) {
                    o = o.add(&zi.bracket(&star.term(top - i)));
                }
                return Ok(LiftOutcome::Obstructed { order: top, obstruction: o, window: *window });
            }
            Some(x) => {
                prev = vec![z.clone()];
                let mut at = 0;
                for (j, basis) in bases.iter().enumerate().take(top + 1).skip(1) {
                    debug_assert!(owner[at..at + basis.len()].iter().all(|&o| o == j));
                    prev.push(combine(n, basis, &x[at..at + basis.len()]));
                    at += basis.len();
                }
            }
        }
    }
    let lifted = LayeredCochain::new(n, prev, k);
    debug_assert!(lifted.bracket_star(star).is_zero());
    Ok(LiftOutcome::Lifted(lifted))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoboundaryLift {
    /// δ_ħ f = ħ^r z_ħ for a lift z_ħ, r minimal.
    LiftsToCoboundary { r: usize, witness: LayeredCochain, lift: LayeredCochain },
    LiftsNontrivially { lift: LayeredCochain },
    Obstructed { order: usize, obstruction: PolyDiffCochain },
}

impl CoboundaryLift {
    pub fn label(&self) -> String {
        match self {
            CoboundaryLift::LiftsToCoboundary { r, .. } => format!("LIFTS_TO_COBOUNDARY(r={r})"),
            CoboundaryLift::LiftsNontrivially { .. } => "LIFTS_NONTRIVIALLY".into(),
            CoboundaryLift::Obstructed { order, .. } => format!("OBSTRUCTED(order={order})"),
        }
    }
}

/// Search for f_ħ and a lift z_ħ with δ_ħ f_ħ = ħ^r z_ħ mod ħ^{K+1}, for the
/// smallest r ≤ K. Order j of the equation reads
/// Σ_i δ_i f_{j−i} − z_{j−r} = [j = r]·z, with δ_i f = −[f, m_i] and z_0 = z
/// moved to the right-hand side.
pub fn lift_is_coboundary(z: &PolyDiffCochain, star: &StarProduct, window: &CochainWindow) -> Result<CoboundaryLift> {
    if !z.coboundary().is_zero() {
        return Err(Error::NotACocycle);
    }
    let k = star.order();
    let n = z.arity();
    if z.is_zero() {
        return Ok(CoboundaryLift::LiftsToCoboundary {
            r: 0,
            witness: LayeredCochain::new(n.saturating_sub(1), vec![], k),
            lift: LayeredCochain::constant(z, k),
        });
    }
    if n > 0 {
        let b = z.bidegree().ok_or_else(|| Error::InvalidParameters("lifting needs a homogeneous cocycle".into()))?;
        let beta = homogeneous_step(star)?;
        for r in 0..=k {
            let fb: Vec<Vec<PolyDiffCochain>> =
                (0..=k).map(|j| window.with_arity(n - 1).with_bidegree(shifted(b, beta, j as i64 - r as i64)).basis()).collect();
            let zb: Vec<Vec<PolyDiffCochain>> = (0..=k - r)
                .map(|i| if i == 0 { vec![] } else { window.with_arity(n).with_bidegree(shifted(b, beta, i as i64)).basis() })
                .collect();
            let mut sys = KeyedColumns::new();
            for (j0, basis) in fb.iter().enumerate() {
                for e in basis {
                    let mut col = Vec::new();
                    for j in j0..=k {
                        let d = if j == j0 { e.coboundary() } else { e.bracket(&star.term(j - j0)).neg() };
                        col.extend(tagged(j, &d));
                    }
                    sys.push(col);
                }
            }
            for (i, basis) in zb.iter().enumerate().skip(1) {
                for e in basis {
                    sys.push(tagged(i + r, &e.neg()));
                }
            }
            if let Some(x) = sys.solve(tagged(r, z))? {
                let mut at = 0;
                let mut f = Vec::new();
                for basis in &fb {
                    f.push(combine(n - 1, basis, &x[at..at + basis.len()]));
                    at += basis.len();
                }
                let mut lift = vec![z.clone()];
                for basis in zb.iter().skip(1) {
                    lift.push(combine(n, basis, &x[at..at + basis.len()]));
                    at += basis.len();
                }
                return Ok(CoboundaryLift::LiftsToCoboundary {
                    r,
                    witness: LayeredCochain::new(n - 1, f, k),
                    lift: LayeredCochain::new(n, lift, k - r),
                });
            }
        }
    }
    Ok(match lift_cocycle(z, star, window)? {
        LiftOutcome::Lifted(lift) => CoboundaryLift::LiftsNontrivially { lift },
        LiftOutcome::Obstructed { order, obstruction, .. } => CoboundaryLift::Obstructed { order, obstruction },
    })
}

/// c with c_x = b and c_y = −a, so that (1/ħ)ad c starts with a∂x + b∂y;
/// `None` unless a_x = −b_y.
pub fn sridharan_potential(a: &CPoly, b: &CPoly) -> Option<CPoly> {
    let mut c = CPoly::zero();
    for (m, v) in b.terms() {
        c.add_term(crate::cpoly::Mono::new(m.x + 1, m.y), v * &Scalar::from_ratio(1, m.x as i64 + 1));
    }
    let rest = a.neg().sub(&c.deriv(0, 1));
    if rest.terms().keys().any(|m| m.x > 0) {
        return None;
    }
    for (m, v) in rest.terms() {
        c.add_term(crate::cpoly::Mono::new(0, m.y + 1), v * &Scalar::from_ratio(1, m.y as i64 + 1));
    }
    Some(c)
}

/// (1/ħ)[c, m_ħ] = (1/ħ)ad_⋆ c, a δ_ħ-cocycle whose constant layer is
/// c_x∂y − c_y∂x.
pub fn inner_lift(c: &CPoly, star: &StarProduct, order: usize) -> Result<LayeredCochain> {
    LayeredCochain::constant(&PolyDiffCochain::element(c.clone()), order + 1).bracket_star(star).div_by_h()
}

/// For z = x^r y^s ∂x⌣∂y = y^s∂x ⌣ x^r∂y: the lift L₁ ⌣_ħ L₂ of z built from
/// inner lifts, and f with δ_ħ f = ħ·L₁⌣_ħL₂.
pub fn cup_of_lifts_witness(r: u32, s: u32, star: &StarProduct, order: usize) -> Result<(LayeredCochain, LayeredCochain)> {
    let c1 = CPoly::mono(0, s + 1).scale(&Scalar::from_ratio(-1, s as i64 + 1));
    let c2 = CPoly::mono(r + 1, 0).scale(&Scalar::from_ratio(1, r as i64 + 1));
    let l1 = inner_lift(&c1, star, order)?;
    let l2 = inner_lift(&c2, star, order)?;
    let lift = l1.cup_star(&l2, star);
    let f = LayeredCochain::constant(&PolyDiffCochain::element(c1), order).cup_star(&l2, star).scale(&Scalar::from_int(-1));
    Ok((f, lift))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hochschild::cochain::Slot;

    fn dx() -> PolyDiffCochain {
        PolyDiffCochain::partial(1, 0)
    }
    fn dy() -> PolyDiffCochain {
        PolyDiffCochain::partial(0, 1)
    }

    #[test]
    fn potential_for_y_dx() {
        let c = sridharan_potential(&CPoly::y(), &CPoly::zero()).unwrap();
        assert_eq!(c, CPoly::mono(0, 2).scale(&Scalar::from_ratio(-1, 2)));
        assert!(sridharan_potential(&CPoly::x(), &CPoly::zero()).is_none());
    }

    #[test]
    fn inner_lift_of_minus_y_is_dx() {
        let l = inner_lift(&CPoly::y().neg(), &StarProduct::moyal().with_order(3), 3).unwrap();
        assert_eq!(l.layer(0), &dx());
        assert!(l.layers()[1..].iter().all(PolyDiffCochain::is_zero));
    }

    #[test]
    fn obstruction_condition_on_moyal() {
        let m1 = dx().cup(&dy());
        let ok = PolyDiffCochain::vector_field(CPoly::x(), CPoly::y().neg());
        let bad = PolyDiffCochain::vector_field(CPoly::x(), CPoly::zero());
        assert!(primary_obstruction(&ok, &m1).unwrap().vanishes());
        assert!(!primary_obstruction(&bad, &m1).unwrap().vanishes());
    }

    #[test]
    fn dx_cup_dy_becomes_torsion() {
        let z = dx().cup(&dy());
        let star = StarProduct::moyal().with_order(2);
        let w = CochainWindow::new(2, (0, 0), 4, 3);
        match lift_is_coboundary(&z, &star, &w).unwrap() {
            CoboundaryLift::LiftsToCoboundary { r, witness, lift } => {
                assert_eq!(r, 1);
                assert!(witness.delta(&star).agrees_with(&lift.shift_up(1)));
            }
            v => panic!("{}", v.label()),
        }
    }

    #[test]
    fn cup_witness_identity() {
        let star = StarProduct::moyal().with_order(3);
        let (f, lift) = cup_of_lifts_witness(1, 2, &star, 3).unwrap();
        assert_eq!(lift.layer(0), &PolyDiffCochain::term(CPoly::mono(1, 2), vec![Slot::DX, Slot::DY]));
        assert!(f.delta(&star).agrees_with(&lift.shift_up(1)));
    }

    #[test]
    fn skew_moyal_obstructs_euler_field() {
        let z = PolyDiffCochain::vector_field(CPoly::x(), CPoly::zero());
        let star = StarProduct::moyal_skew(2);
        let w = CochainWindow::new(1, (0, 0), 2, 4);
        match lift_cocycle(&z, &star, &w).unwrap() {
            LiftOutcome::Obstructed { order, obstruction, .. } => {
                assert_eq!(order, 1);
                assert_eq!(obstruction, dx().wedge(&dy()).neg());
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn quantum_plane_lifts() {
        let xdx = PolyDiffCochain::vector_field(CPoly::x(), CPoly::zero());
        let ydy = PolyDiffCochain::vector_field(CPoly::zero(), CPoly::y());
        let star = StarProduct::quantum_plane(2);
        let w = CochainWindow::new(2, (0, 0), 6, 6);
        match lift_cocycle(&xdx, &star, &w.with_arity(1)).unwrap() {
            LiftOutcome::Lifted(l) => assert!(l.layers()[1..].iter().all(PolyDiffCochain::is_zero)),
            v => panic!("{v:?}"),
        }
        assert!(matches!(lift_cocycle(&xdx.cup(&ydy), &star, &w).unwrap(), LiftOutcome::Lifted(_)));
        let v = lift_is_coboundary(&xdx.wedge(&ydy), &star, &w).unwrap();
        assert!(matches!(v, CoboundaryLift::LiftsNontrivially { .. }), "{}", v.label());
    }
}
