// Random cochains and the structural identities checked on them. Shared by
// the proptest suite and the acceptance runner.

#![allow(dead_code)]

use defcoh_core::hochschild::{inner_lift, lift_cocycle, CochainWindow, LiftOutcome};
use defcoh_core::{CPoly, Mono, PolyDiffCochain, Scalar, Slot, StarProduct};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub fn scalar() -> impl Strategy<Value = Scalar> {
    (-4i64..=4, 1i64..=3).prop_map(|(n, d)| Scalar::from_ratio(n, d))
}

pub fn mono(max: u32) -> impl Strategy<Value = Mono> {
    (0..=max, 0..=max).prop_map(|(a, b)| Mono::new(a, b))
}

pub fn poly(max: u32) -> impl Strategy<Value = CPoly> {
    prop::collection::vec((mono(max), scalar()), 0..4).prop_map(CPoly::from_terms)
}

pub fn slot() -> impl Strategy<Value = Slot> {
    (0u32..=2, 0u32..=2).prop_filter("order <= 2", |(a, b)| a + b <= 2).prop_map(|(a, b)| Slot::new(a, b))
}

pub fn cochain(arity: usize) -> impl Strategy<Value = PolyDiffCochain> {
    prop::collection::vec((poly(2), prop::collection::vec(slot(), arity)), 1..3).prop_map(move |terms| {
        let mut f = PolyDiffCochain::zero(arity);
        for (c, s) in terms {
            f = f.add(&PolyDiffCochain::term(c, s));
        }
        f
    })
}

/// One term with a monomial coefficient: homogeneous of a single bidegree.
pub fn homogeneous(arity: usize) -> impl Strategy<Value = PolyDiffCochain> {
    (mono(3), scalar().prop_filter("nonzero", |s| !s.is_zero()), prop::collection::vec(slot(), arity))
        .prop_map(|(m, c, s)| PolyDiffCochain::term(CPoly::term(c, m), s))
}

pub fn vector_field() -> impl Strategy<Value = PolyDiffCochain> {
    (poly(2), poly(2)).prop_map(|(a, b)| PolyDiffCochain::vector_field(a, b))
}

fn check(ok: bool, what: String) -> Result<(), TestCaseError> {
    if ok {
        Ok(())
    } else {
        Err(TestCaseError::fail(what))
    }
}

pub fn delta_squared(f: &PolyDiffCochain) -> Result<(), TestCaseError> {
    check(f.coboundary().coboundary().is_zero(), format!("delta^2 {f} != 0"))
}

/// [F¹,F²](a,b) = F¹(F²(a,b)) − F²(F¹a, b) − F²(a, F¹b).
pub fn bracket_one_two(f1: &PolyDiffCochain, f2: &PolyDiffCochain, a: &CPoly, b: &CPoly) -> Result<(), TestCaseError> {
    let lhs = f1.bracket(f2).apply(&[a.clone(), b.clone()]);
    let inner = f2.apply(&[a.clone(), b.clone()]);
    let rhs = f1
        .apply(&[inner])
        .sub(&f2.apply(&[f1.apply(&[a.clone()]), b.clone()]))
        .sub(&f2.apply(&[a.clone(), f1.apply(&[b.clone()])]));
    check(lhs == rhs, format!("[F1,F2] formula fails for {f1}, {f2}"))
}

/// [F², c](a) = F²(c, a) − F²(a, c).
pub fn bracket_two_zero(f2: &PolyDiffCochain, c: &CPoly, a: &CPoly) -> Result<(), TestCaseError> {
    let lhs = f2.bracket(&PolyDiffCochain::element(c.clone())).apply(&[a.clone()]);
    let rhs = f2.apply(&[c.clone(), a.clone()]).sub(&f2.apply(&[a.clone(), c.clone()]));
    check(lhs == rhs, format!("[F2,c] formula fails for {f2}, c = {c}"))
}

/// [F¹, c] = F¹(c).
pub fn bracket_one_zero(f1: &PolyDiffCochain, c: &CPoly) -> Result<(), TestCaseError> {
    let lhs = f1.bracket(&PolyDiffCochain::element(c.clone())).apply(&[]);
    check(lhs == f1.apply(&[c.clone()]), format!("[F1,c] formula fails for {f1}, c = {c}"))
}

/// [D, F⌣G] = [D,F]⌣G + F⌣[D,G] for a derivation D.
pub fn leibniz(d: &PolyDiffCochain, f: &PolyDiffCochain, g: &PolyDiffCochain) -> Result<(), TestCaseError> {
    let lhs = d.bracket(&f.cup(g));
    let rhs = d.bracket(f).cup(g).add(&f.cup(&d.bracket(g)));
    check(lhs == rhs, format!("Leibniz fails for D = {d}"))
}

/// Bracket, cup and δ add bidegrees of homogeneous cochains.
pub fn bidegree_additive(f: &PolyDiffCochain, g: &PolyDiffCochain) -> Result<(), TestCaseError> {
    let (bf, bg) = (f.bidegree().unwrap(), g.bidegree().unwrap());
    let sum = (bf.0 + bg.0, bf.1 + bg.1);
    for (name, h) in [("bracket", f.bracket(g)), ("cup", f.cup(g))] {
        if !h.is_zero() {
            check(h.bidegree() == Some(sum), format!("{name} of {f} and {g} has bidegree {:?}, expected {sum:?}", h.bidegree()))?;
        }
    }
    let d = f.coboundary();
    if !d.is_zero() {
        check(d.bidegree() == Some(bf), format!("delta {f} changes bidegree"))?;
    }
    Ok(())
}

/// Inner lifts L₁, L₂ of the Moyal product: L₁ ⌣_ħ L₂ is a lift of z₁ ⌣ z₂
/// (a δ_ħ-cocycle with that constant layer), and it agrees with the lift
/// found by solving for z₁ ⌣ z₂ up to terms divisible by ħ that are again
/// δ_ħ-closed.
pub fn cup_of_lifts(c1: Mono, c2: Mono) -> Result<(), TestCaseError> {
    let k = 1;
    let star = StarProduct::moyal().with_order(k);
    let (p1, p2) = (CPoly::term(Scalar::one(), c1), CPoly::term(Scalar::one(), c2));
    let l1 = inner_lift(&p1, &star, k).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let l2 = inner_lift(&p2, &star, k).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let z = l1.layer(0).cup(l2.layer(0));
    let cup = l1.cup_star(&l2, &star);
    check(cup.layer(0) == &z, "constant layer of the cup of lifts".into())?;
    check(cup.bracket_star(&star).is_zero(), format!("cup of lifts of {p1}, {p2} is not a cocycle"))?;
    if z.is_zero() {
        return Ok(());
    }
    let w = CochainWindow::new(2, z.bidegree().unwrap(), 4, c1.degree() + c2.degree());
    match lift_cocycle(&z, &star, &w).map_err(|e| TestCaseError::fail(e.to_string()))? {
        LiftOutcome::Lifted(l) => {
            let d = cup.sub(&l);
            check(d.layer(0).is_zero() && d.bracket_star(&star).is_zero(), "lifts differ by a non-closed term".into())
        }
        LiftOutcome::Obstructed { order, .. } => Err(TestCaseError::fail(format!("lift of {z} obstructed at order {order}"))),
    }
}
