//! Named, parameterized verification runs.

use std::collections::BTreeSet;

use defcoh_core::eulerpoincare::{chi_bidegree_table, ep_fuzz};
use defcoh_core::hochschild::{
    cup_of_lifts_witness, inner_lift, liftable_subspace, primary_obstruction, sridharan_potential, window_cohomology_dims,
    CochainWindow, LayeredCochain,
};
use defcoh_core::starprod::{exp_series, weyl_isomorphism_check, AssocVerdict};
use defcoh_core::{AlgebraSpec, CPoly, Derivation, Error, Mono, NCPoly, PolyDiffCochain, Result, Scalar, Slot, StarProduct};
use serde_json::json;

use crate::params::{Echo, HDesc, Params, QDesc};
use crate::report::{timed, Check, Report, Verdict};

pub const SCENARIOS: [&str; 9] = [
    "sridharan",
    "qp-cohomology",
    "qweyl-center",
    "qweyl-infinitesimal",
    "qweyl-derivations",
    "qweyl-h2",
    "ep-fuzz",
    "chi-table",
    "star-assoc",
];

pub fn run(name: &str, p: &Params) -> Result<Report> {
    match name {
        "sridharan" => sridharan(p),
        "qp-cohomology" => qp_cohomology(p),
        "qweyl-center" => qweyl_center(p),
        "qweyl-infinitesimal" => qweyl_infinitesimal(p),
        "qweyl-derivations" => qweyl_derivations(p),
        "qweyl-h2" => qweyl_h2(p),
        "ep-fuzz" => ep_fuzz_scenario(p),
        "chi-table" => chi_table(p),
        "star-assoc" => star_assoc(p),
        _ => Err(Error::InvalidParameters(format!("unknown scenario {name:?}; expected one of {}", SCENARIOS.join(", ")))),
    }
}

fn mono(x: u32, y: u32) -> CPoly {
    CPoly::mono(x, y)
}

fn nc_mono(alg: &AlgebraSpec, x: u32, y: u32) -> NCPoly {
    NCPoly::monomial(alg, Scalar::one(), Mono::new(x, y))
}

/// Basis derivations of k[x, y] at bidegree (u, v) as (a, b) for a∂x + b∂y.
fn derivation_reps(u: i64, v: i64) -> Vec<(CPoly, CPoly)> {
    let mut out = Vec::new();
    if u + 1 >= 0 && v >= 0 {
        out.push((mono((u + 1) as u32, v as u32), CPoly::zero()));
    }
    if u >= 0 && v + 1 >= 0 {
        out.push((CPoly::zero(), mono(u as u32, (v + 1) as u32)));
    }
    out
}

fn combine_reps(reps: &[(CPoly, CPoly)], alpha: &[Scalar]) -> (CPoly, CPoly) {
    let mut a = CPoly::zero();
    let mut b = CPoly::zero();
    for ((ra, rb), c) in reps.iter().zip(alpha) {
        a = a.add(&ra.scale(c));
        b = b.add(&rb.scale(c));
    }
    (a, b)
}

/// Rank of a single row of scalars: the dimension lost by one linear condition.
fn row_rank(coeffs: &[Scalar]) -> usize {
    usize::from(coeffs.iter().any(|c| !c.is_zero()))
}

fn obstruction_window(p: &Params, arity: usize, bidegree: (i64, i64), default_degree: i64) -> CochainWindow {
    let (o, d) = p.window.unwrap_or((2, default_degree.max(0) as u32));
    CochainWindow::new(arity, bidegree, o, d)
}

fn window_echo(p: &Params, default: &str) -> String {
    p.window.map(|(o, d)| format!("order={o},deg={d}")).unwrap_or_else(|| default.to_string())
}

// ---------------------------------------------------------------------------
// Weyl algebra as a deformation of k[x, y]

/// The normal-ordering Moyal product identifies x^i y^j with X^j Y^i in
/// A(1, −ħ), where XY − YX = −ħ; these helpers move between the two.
fn to_opposite(alg: &AlgebraSpec, p: &CPoly) -> NCPoly {
    NCPoly::from_terms(alg, p.terms().iter().map(|(m, c)| (Mono::new(m.y, m.x), c.clone())))
}

fn from_opposite(p: &NCPoly) -> CPoly {
    CPoly::from_terms(p.terms().iter().map(|(m, c)| (Mono::new(m.y, m.x), c.clone())))
}

/// Coefficient of ħ^k in a scalar of ℚ or of ℚ(ħ) that is a polynomial in ħ.
fn hbar_coeff(s: &Scalar, k: usize) -> Option<Scalar> {
    match s {
        Scalar::Rational(_) => Some(if k == 0 { s.clone() } else { Scalar::zero() }),
        Scalar::RatFunc(f) if f.denom().is_one() => Some(Scalar::from_big(f.numer().coeff(k))),
        _ => None,
    }
}

fn sridharan(p: &Params) -> Result<Report> {
    let (bx, by) = p.bound.unwrap_or((4, 4));
    let k = p.order.unwrap_or(4);
    let mut echo = Echo::default();
    echo.set("bound", format!("{bx},{by}"));
    echo.set("order", k);
    echo.set("window", window_echo(p, "order=2,deg=u+v+2"));
    let mut report = Report::new("sridharan", echo);
    let star = StarProduct::moyal().with_order(k);
    let m1 = star.term(1);
    let h = Scalar::hbar_rational();
    let opp = AlgebraSpec::new(Scalar::one(), -&h)?;

    report.push(timed(|| {
        let w = AlgebraSpec::new(Scalar::one(), h.clone())?;
        let basis = w.center_basis(bx, by)?;
        let ok = basis.len() == 1 && basis[0].terms().keys().all(|m| *m == Mono::ONE);
        let shown: Vec<String> = basis.iter().map(|c| c.to_string()).collect();
        Ok(Check::new("sridharan.h0", "weyl-h0", "the center of the Weyl algebra over Q(h) is the constants", Verdict::from_bool(ok), format!("center basis [{}]", shown.join(", ")))
            .window(format!("exponents <= ({bx},{by})")))
    })?);

    // Per derivation bidegree: liftable directions, the rank oracle, and the lifts.
    struct Cell {
        u: i64,
        v: i64,
        reps: Vec<(CPoly, CPoly)>,
        liftable: Vec<Vec<Scalar>>,
        oracle: usize,
    }
    let mut cells = Vec::new();
    let crit = timed(|| {
        let mut bad = Vec::new();
        let mut rows = Vec::new();
        for u in -1..=bx as i64 {
            for v in -1..=by as i64 {
                let reps = derivation_reps(u, v);
                let zs: Vec<PolyDiffCochain> = reps.iter().map(|(a, b)| PolyDiffCochain::vector_field(a.clone(), b.clone())).collect();
                let window = obstruction_window(p, 1, (u - 1, v - 1), u + v + 2);
                let liftable = liftable_subspace(&zs, &m1, &window)?;
                // div(x^{u+1}y^v ∂x) = (u+1)x^u y^v and div(x^u y^{v+1} ∂y) = (v+1)x^u y^v.
                let divs: Vec<Scalar> = reps
                    .iter()
                    .map(|(a, _)| if a.is_zero() { Scalar::from_int(v + 1) } else { Scalar::from_int(u + 1) })
                    .collect();
                let oracle = reps.len() - row_rank(&divs);
                let div_free = liftable.iter().all(|alpha| {
                    let (a, b) = combine_reps(&reps, alpha);
                    a.deriv(1, 0).add(&b.deriv(0, 1)).is_zero()
                });
                if liftable.len() != oracle || !div_free {
                    bad.push(format!("({u},{v}): liftable {} vs {oracle}", liftable.len()));
                }
                rows.push(json!({"u": u, "v": v, "basis": reps.len(), "liftable": liftable.len(), "oracle": oracle}));
                cells.push(Cell { u, v, reps, liftable, oracle });
            }
        }
        let witness = if bad.is_empty() {
            format!("{} bidegrees, liftable exactly where a_x + b_y = 0", rows.len())
        } else {
            format!("mismatch at {}", bad.join("; "))
        };
        Ok(Check::new(
            "sridharan.obstruction-criterion",
            "sridharan-criterion",
            "the primary obstruction of a*dx + b*dy under the Moyal product vanishes iff a_x = -b_y",
            Verdict::from_bool(bad.is_empty()),
            witness,
        )
        .window(format!("u in -1..={bx}, v in -1..={by}; {}", window_echo(p, "arity=1 order=2 deg=u+v+2")))
        .data(json!(rows)))
    })?;
    report.push(crit);

    let monos = Mono::in_box(bx, by);
    let mut lifts: Vec<(i64, i64, CPoly, LayeredCochain)> = Vec::new();
    report.push(timed(|| {
        let hinv = h.try_inv()?;
        let mut bad = Vec::new();
        let mut checked = 0usize;
        for cell in &cells {
            for alpha in &cell.liftable {
                let (a, b) = combine_reps(&cell.reps, alpha);
                let Some(c) = sridharan_potential(&a, &b) else {
                    bad.push(format!("({},{}): no potential", cell.u, cell.v));
                    continue;
                };
                let l = inner_lift(&c, &star, k)?;
                if l.layer(0) != &PolyDiffCochain::vector_field(a.clone(), b.clone()) {
                    bad.push(format!("({},{}): constant layer {}", cell.u, cell.v, l.layer(0)));
                }
                let oc = to_opposite(&opp, &c);
                for w in &monos {
                    let wp = CPoly::term(Scalar::one(), *w);
                    let ow = to_opposite(&opp, &wp);
                    let ad = from_opposite(&oc.mul(&ow)?.sub(&ow.mul(&oc)?)?).scale(&hinv);
                    let got = l.apply(std::slice::from_ref(&wp));
                    let mut keys: BTreeSet<Mono> = ad.terms().keys().copied().collect();
                    for layer in &got.layers {
                        keys.extend(layer.terms().keys().copied());
                    }
                    for m in &keys {
                        for j in 0..=k {
                            let want = hbar_coeff(&ad.coeff(*m), j).ok_or_else(|| Error::InvalidParameters("oracle left Q[h]".into()))?;
                            if want != got.layer(j).coeff(*m) {
                                bad.push(format!("({},{}) on {}: h^{j} coefficient of {}", cell.u, cell.v, wp, CPoly::term(Scalar::one(), *m)));
                            }
                        }
                    }
                    checked += 1;
                }
                lifts.push((cell.u, cell.v, c, l));
            }
        }
        let witness = if bad.is_empty() {
            format!("{} lifts checked on {checked} derivation-monomial pairs against commutators in A(1,-h)", lifts.len())
        } else {
            bad.truncate(5);
            bad.join("; ")
        };
        Ok(Check::new(
            "sridharan.inner-lift",
            "sridharan-inner-lift",
            "every unobstructed basis derivation lifts to (1/h) ad c with c_x = b, c_y = -a",
            Verdict::from_bool(bad.is_empty()),
            witness,
        )
        .window(format!("monomials <= ({bx},{by}), h-order {k}")))
    })?);

    let (rmax, smax) = (bx.saturating_sub(1), by.saturating_sub(1));
    let mut cup_ok: Vec<((u32, u32), bool)> = Vec::new();
    report.push(timed(|| {
        let mut bad = Vec::new();
        for r in 0..=rmax {
            for s in 0..=smax {
                let (f, lift) = cup_of_lifts_witness(r, s, &star, k)?;
                let z = PolyDiffCochain::term(mono(r, s), vec![Slot::DX, Slot::DY]);
                let ok = lift.layer(0) == &z && lift.bracket_star(&star).is_zero() && f.delta(&star).agrees_with(&lift.shift_up(1));
                if !ok {
                    bad.push(format!("x^{r}y^{s}"));
                }
                cup_ok.push(((r, s), ok));
            }
        }
        let witness = if bad.is_empty() {
            format!("delta_h f = h * (L1 cup_h L2) for all {} pairs, f = -c1 cup_h L2", cup_ok.len())
        } else {
            format!("failed for {}", bad.join(", "))
        };
        Ok(Check::new(
            "sridharan.cup-lift",
            "sridharan-cup-lift",
            "x^r y^s dx cup dy lifts to the cup product of inner lifts, which is h^-1 times a coboundary",
            Verdict::from_bool(bad.is_empty()),
            witness,
        )
        .window(format!("r <= {rmax}, s <= {smax}, h-order {k}")))
    })?);

    report.push(timed(|| {
        let mut rows = Vec::new();
        let mut total = 0usize;
        for cell in &cells {
            let mut lifted_to_coboundary = 0usize;
            for (u, v, c, l) in &lifts {
                if (*u, *v) != (cell.u, cell.v) {
                    continue;
                }
                let dc = LayeredCochain::constant(&PolyDiffCochain::element(c.clone()), k).delta(&star);
                if dc.agrees_with(&l.shift_up(1).scale(&Scalar::from_int(-1))) {
                    lifted_to_coboundary += 1;
                }
            }
            let dim = cell.liftable.len() - lifted_to_coboundary.min(cell.liftable.len());
            total += dim;
            rows.push(json!({"u": cell.u, "v": cell.v, "liftable": cell.oracle, "lifts_to_coboundary": lifted_to_coboundary, "dim": dim}));
        }
        Ok(Check::new(
            "sridharan.h1",
            "weyl-vanishing",
            "no class of H^1(k[x,y]) survives in the Weyl deformation: every liftable derivation lifts to a coboundary",
            Verdict::from_bool(total == 0),
            format!("window H^1 dimension {total}"),
        )
        .window(format!("bidegrees u in -1..={bx}, v in -1..={by}"))
        .data(json!(rows)))
    })?);

    report.push(timed(|| {
        let mut rows = Vec::new();
        let mut total = 0usize;
        for ((r, s), ok) in &cup_ok {
            let dim = usize::from(!ok);
            total += dim;
            rows.push(json!({"u": *r as i64 - 1, "v": *s as i64 - 1, "dim": dim}));
        }
        Ok(Check::new(
            "sridharan.h2",
            "weyl-vanishing",
            "no class of H^2(k[x,y]) survives in the Weyl deformation: each x^r y^s dx cup dy lifts to a coboundary",
            Verdict::from_bool(total == 0),
            format!("window H^2 dimension {total}"),
        )
        .window(format!("bidegrees u in -1..={}, v in -1..={}", rmax as i64 - 1, smax as i64 - 1))
        .data(json!(rows)))
    })?);
    Ok(report)
}

// ---------------------------------------------------------------------------
// Quantum plane

fn default_bound(q: &QDesc, p: &Params) -> (u32, u32) {
    p.bound.unwrap_or_else(|| q.root_order().map(|n| (2 * n, 2 * n)).unwrap_or((4, 4)))
}

/// x^a y^b is central in the quantum plane iff r^a = r^b = 1, from
/// y^b x^c = r^{bc} x^c y^b.
fn central_by_closed_form(r: &Scalar, a: u32, b: u32) -> Result<bool> {
    Ok(r.pow(a as i64)?.is_one() && r.pow(b as i64)?.is_one())
}

fn qp_center_check(alg: &AlgebraSpec, id: &str, anchor: &str, bx: u32, by: u32) -> Result<Check> {
    let basis = alg.center_basis(bx, by)?;
    let mut got: Vec<Mono> = Vec::new();
    let mut monomial = true;
    for c in &basis {
        monomial &= c.terms().len() == 1;
        got.extend(c.leading_mono());
    }
    let mut expected = Vec::new();
    for m in Mono::in_box(bx, by) {
        if central_by_closed_form(alg.r(), m.x, m.y)? {
            expected.push(m);
        }
    }
    got.sort();
    expected.sort();
    let ok = monomial && got == expected;
    let shown: Vec<String> = basis.iter().map(|c| c.to_string()).collect();
    Ok(Check::new(id, anchor, "the center is spanned by the monomials x^a y^b with q^a = q^b = 1", Verdict::from_bool(ok), format!("[{}]", shown.join(", ")))
        .window(format!("exponents <= ({bx},{by})")))
}

/// dim Der − dim Inn at bidegree (u, v) of the quantum plane, from the
/// closed-form commutation rule.
fn qp_h1_oracle(r: &Scalar, u: i64, v: i64) -> Result<usize> {
    let one = Scalar::one();
    let mut conds = Vec::new();
    if u + 1 >= 0 && v >= 0 {
        conds.push(&one - &r.pow(u)?);
    }
    if u >= 0 && v + 1 >= 0 {
        conds.push(&one - &r.pow(v)?);
    }
    let der = conds.len() - row_rank(&conds);
    let inn = if u >= 0 && v >= 0 { row_rank(&[&r.pow(v)? - &one, &one - &r.pow(u)?]) } else { 0 };
    Ok(der - inn)
}

fn qp_cohomology(p: &Params) -> Result<Report> {
    let q = p.q.clone().unwrap_or(QDesc::Zeta(3));
    let (bx, by) = default_bound(&q, p);
    let mut echo = Echo::default();
    echo.set("q", &q);
    echo.set("bound", format!("{bx},{by}"));
    echo.set("window", window_echo(p, "order=2,deg=u+v+4"));
    let mut report = Report::new("qp-cohomology", echo);
    let alg = AlgebraSpec::quantum_plane(q.scalar())?;
    report.push(timed(|| qp_center_check(&alg, "qp.center", "qp-center", bx, by))?);

    report.push(timed(|| {
        let mut rows = Vec::new();
        let mut bad = Vec::new();
        for u in -1..=bx as i64 {
            for v in -1..=by as i64 {
                let deg = p.window.map(|w| w.1).unwrap_or(bx + by + 2);
                let window = CochainWindow::new(1, (u, v), 1, deg);
                let wc = window_cohomology_dims(&alg, &window)?;
                let oracle = qp_h1_oracle(alg.r(), u, v)?;
                let central = u >= 0 && v >= 0 && central_by_closed_form(alg.r(), u as u32, v as u32)?;
                let expected = if central { 2 } else { 0 };
                if wc.dim != oracle || wc.dim != expected {
                    bad.push(format!("({u},{v}): {} vs oracle {oracle}, expected {expected}", wc.dim));
                }
                rows.push(json!({"arity": 1, "bidegree": [u, v], "window": window.to_string(), "dim": wc.dim, "oracle": oracle, "witnesses": wc.witnesses}));
            }
        }
        let witness = if bad.is_empty() {
            "dim 2 exactly at central bidegrees (x^a y^b * x dx, x^a y^b * y dy), 0 elsewhere".to_string()
        } else {
            bad.join("; ")
        };
        Ok(Check::new(
            "qp.h1",
            "qp-h1",
            "H^1 is free of rank 2 over the center on the classes of x dx and y dy",
            Verdict::from_bool(bad.is_empty()),
            witness,
        )
        .window(format!("bidegrees u in -1..={bx}, v in -1..={by}"))
        .data(json!(rows)))
    })?);

    report.push(timed(|| {
        let star = StarProduct::quantum_plane(1);
        let m1 = star.term(1);
        let mut rows = Vec::new();
        let mut bad = Vec::new();
        for u in -1..=bx as i64 {
            for v in -1..=by as i64 {
                let reps = derivation_reps(u, v);
                let zs: Vec<PolyDiffCochain> = reps.iter().map(|(a, b)| PolyDiffCochain::vector_field(a.clone(), b.clone())).collect();
                let liftable = liftable_subspace(&zs, &m1, &obstruction_window(p, 1, (u, v), u + v + 4))?;
                // (a/xy)_x + (b/xy)_y is u·x^{u−1}y^{v−1} for the ∂x basis vector and v·x^{u−1}y^{v−1} for ∂y.
                let conds: Vec<Scalar> = reps.iter().map(|(a, _)| Scalar::from_int(if a.is_zero() { v } else { u })).collect();
                let oracle = reps.len() - row_rank(&conds);
                if liftable.len() != oracle {
                    bad.push(format!("({u},{v}): {} vs {oracle}", liftable.len()));
                }
                rows.push(json!({"u": u, "v": v, "basis": reps.len(), "liftable": liftable.len(), "oracle": oracle}));
            }
        }
        let witness = if bad.is_empty() { "liftable exactly where (a/xy)_x = -(b/xy)_y".to_string() } else { bad.join("; ") };
        Ok(Check::new(
            "qp.liftability",
            "qp-liftability",
            "a*dx + b*dy on k[x,y] is unobstructed for the product with infinitesimal x dx cup y dy iff (a/xy)_x = -(b/xy)_y",
            Verdict::from_bool(bad.is_empty()),
            witness,
        )
        .window(format!("u in -1..={bx}, v in -1..={by}; {}", window_echo(p, "arity=1 order=2 deg=u+v+4")))
        .data(json!(rows)))
    })?);
    Ok(report)
}

// ---------------------------------------------------------------------------
// q-Weyl algebra

fn qweyl_hbar(p: &Params, q: &QDesc, order: usize) -> Scalar {
    match &p.hbar {
        None => Scalar::one(),
        Some(HDesc::Value(v)) => v.clone(),
        Some(HDesc::Symbolic) => match q {
            QDesc::Rational(_) => Scalar::hbar_rational(),
            _ => Scalar::hbar_series(order),
        },
    }
}

fn qweyl_center(p: &Params) -> Result<Report> {
    let q = p.q.clone().unwrap_or(QDesc::Zeta(5));
    if let QDesc::Rational(_) = q {
        return Err(Error::InvalidParameters("qweyl-center needs q = zeta:N or symbolic".into()));
    }
    let (bx, by) = default_bound(&q, p);
    let hbar = qweyl_hbar(p, &q, 2);
    let mut echo = Echo::default();
    echo.set("q", &q);
    echo.set("hbar", &hbar);
    echo.set("bound", format!("{bx},{by}"));
    let mut report = Report::new("qweyl-center", echo);
    let alg = AlgebraSpec::new(q.scalar(), hbar)?;

    report.push(timed(|| {
        let basis = alg.center_basis(bx, by)?;
        let n = q.root_order();
        let in_span = basis.iter().all(|c| c.terms().keys().all(|m| n.is_some_and(|n| m.x % n == 0 && m.y % n == 0) || *m == Mono::ONE));
        let expected = match n {
            Some(n) => ((bx / n + 1) * (by / n + 1)) as usize,
            None => 1,
        };
        let ok = in_span && basis.len() == expected;
        let shown: Vec<String> = basis.iter().map(|c| c.to_string()).collect();
        let stmt = match n {
            Some(n) => format!("the center is spanned by the monomials x^({n}i) y^({n}j)"),
            None => "the center is the constants".to_string(),
        };
        Ok(Check::new("qweyl.center-basis", "qweyl-center", stmt, Verdict::from_bool(ok), format!("{} elements: [{}]", basis.len(), shown.join(", ")))
            .window(format!("exponents <= ({bx},{by})")))
    })?);

    if let Some(n) = q.root_order() {
        report.push(timed(|| {
            let (x, y) = (NCPoly::x(&alg), NCPoly::y(&alg));
            let mut bad = Vec::new();
            for i in 0..=bx / n {
                for j in 0..=by / n {
                    let e = nc_mono(&alg, n * i, n * j);
                    if !e.commutator(&x)?.is_zero() || !e.commutator(&y)?.is_zero() {
                        bad.push(e.to_string());
                    }
                }
            }
            let witness = if bad.is_empty() { format!("[x^{n}, x] = [x^{n}, y] = [y^{n}, x] = [y^{n}, y] = 0 and products") } else { format!("not central: {}", bad.join(", ")) };
            Ok(Check::new("qweyl.center-generators", "qweyl-center", format!("x^{n} and y^{n} are central"), Verdict::from_bool(bad.is_empty()), witness)
                .window(format!("exponents <= ({bx},{by})")))
        })?);
    }
    Ok(report)
}

/// ħ in the field of q: ℚ(ħ) next to a rational q, a truncated series otherwise.
fn formal_hbar(q: &QDesc, order: usize) -> Scalar {
    match q {
        QDesc::Rational(_) => Scalar::hbar_rational(),
        _ => Scalar::hbar_series(order),
    }
}

fn qweyl_infinitesimal(p: &Params) -> Result<Report> {
    let q = p.q.clone().unwrap_or(QDesc::Symbolic);
    let (bm, bn) = p.bound.unwrap_or((5, 5));
    let rewrite_max = 30u32;
    let mut echo = Echo::default();
    echo.set("q", &q);
    echo.set("bound", format!("{bm},{bn}"));
    echo.set("rewrite_max", rewrite_max);
    let mut report = Report::new("qweyl-infinitesimal", echo);

    let mut printed_sign_holds = Vec::new();
    report.push(timed(|| {
        // y·x^n has at most one factor ħ, so a series of order 2 is exact.
        let alg = AlgebraSpec::new(q.scalar(), formal_hbar(&q, 2))?;
        let r = alg.r().clone();
        let h = alg.hbar().clone();
        let (x, y) = (NCPoly::x(&alg), NCPoly::y(&alg));
        let mut bad = Vec::new();
        for n in 1..=rewrite_max {
            let xn = x.pow(n)?;
            let lhs = y.mul(&xn)?.sub(&xn.mul(&y)?.scale(&r.pow(n as i64)?))?;
            let tail = nc_mono(&alg, n - 1, 0).scale(&(&(&Scalar::q_integer(n, &r) * &h) * &r));
            if !lhs.add(&tail)?.is_zero() {
                bad.push(n);
            }
            // Where n_r = 0 both signs agree; only the other exponents can refute it.
            if !Scalar::q_integer(n, &r).is_zero() {
                printed_sign_holds.push(lhs.sub(&tail)?.is_zero());
            }
        }
        let witness = if bad.is_empty() { format!("exact for 1 <= n <= {rewrite_max}") } else { format!("fails at n = {bad:?}") };
        Ok(Check::new(
            "qweyl.rewrite",
            "qweyl-rewrite",
            "y x^n - r^n x^n y = -n_r h r x^(n-1) with r = 1/q",
            Verdict::from_bool(bad.is_empty()),
            witness,
        ))
    })?);
    report.push(Check::new(
        "qweyl.rewrite-sign",
        "qweyl-rewrite",
        "the variant with +n_r h r x^(n-1) on the right is inconsistent with xy - q yx = h whenever n_r != 0",
        Verdict::from_bool(printed_sign_holds.iter().all(|h| !h)),
        format!("refuted for {} of {} exponents with n_r != 0", printed_sign_holds.iter().filter(|h| !**h).count(), printed_sign_holds.len()),
    ));

    report.push(timed(|| {
        let alg = AlgebraSpec::new(q.scalar(), formal_hbar(&q, 1))?;
        let r = alg.r().clone();
        let h = alg.hbar().clone();
        let mut bad = Vec::new();
        let mut checked = 0;
        for m in 1..=bm {
            for n in 1..=bn {
                let word = format!("{}{}", "y".repeat(m as usize), "x".repeat(n as usize));
                let lhs = alg.normal_form(Scalar::one(), &word)?;
                let lead = nc_mono(&alg, n, m).scale(&r.pow((m * n) as i64)?);
                let c = &(&(&r.pow(((m - 1) * (n - 1)) as i64)? * &Scalar::q_integer(m, &r)) * &Scalar::q_integer(n, &r)) * &(&r * &h);
                let rhs = lead.sub(&nc_mono(&alg, n - 1, m - 1).scale(&c))?;
                let diff = lhs.sub(&rhs)?;
                // With a rational q, ħ lives in ℚ(ħ); keep only orders ≤ 1.
                let vanishes = diff.terms().values().all(|s| match s {
                    Scalar::RatFunc(_) | Scalar::Rational(_) => (0..=1).all(|k| hbar_coeff(s, k).is_some_and(|c| c.is_zero())),
                    _ => s.is_zero(),
                });
                if !vanishes {
                    bad.push(format!("(m,n)=({m},{n})"));
                }
                checked += 1;
            }
        }
        let witness = if bad.is_empty() { format!("{checked} pairs agree mod h^2") } else { bad.join(", ") };
        Ok(Check::new(
            "qweyl.infinitesimal-congruence",
            "qweyl-infinitesimal",
            "y^m x^n = r^(mn) x^n y^m - r^((m-1)(n-1)) m_r n_r r h x^(n-1) y^(m-1) mod h^2",
            Verdict::from_bool(bad.is_empty()),
            witness,
        )
        .window(format!("1 <= m <= {bm}, 1 <= n <= {bn}")))
    })?);
    Ok(report)
}

fn qweyl_derivations(p: &Params) -> Result<Report> {
    let q = p.q.clone().unwrap_or(QDesc::Zeta(3));
    let hbar = qweyl_hbar(p, &q, 2);
    let (bx, by) = default_bound(&q, p);
    let mut echo = Echo::default();
    echo.set("q", &q);
    echo.set("hbar", &hbar);
    echo.set("bound", format!("{bx},{by}"));
    let mut report = Report::new("qweyl-derivations", echo);
    let alg = AlgebraSpec::new(q.scalar(), hbar)?;
    let (x, y) = (NCPoly::x(&alg), NCPoly::y(&alg));
    let zero = NCPoly::zero(&alg);

    let scaling = alg.extends_to_derivation(&x, &y.neg())?;
    report.push(Check::new(
        "qweyl.scaling-extends",
        "qweyl-derivations",
        "x dx - y dy extends to a derivation of the q-Weyl algebra",
        Verdict::from_bool(scaling.as_ref().map_or(Ok(false), Derivation::is_derivation)?),
        scaling.as_ref().map_or("no extension".to_string(), |d| d.to_string()),
    ));
    for (id, name, ix, iy) in [("qweyl.xdx-obstructed", "x dx", &x, &zero), ("qweyl.ydy-obstructed", "y dy", &zero, &y)] {
        let ext = alg.extends_to_derivation(ix, iy)?;
        report.push(Check::new(
            id,
            "qweyl-derivations",
            format!("{name} admits no correction by lower terms making it a derivation"),
            Verdict::from_bool(ext.is_none()),
            match &ext {
                None => "linear system for the lower-order correction is infeasible".to_string(),
                Some(d) => format!("unexpected extension {d}"),
            },
        ));
    }

    report.push(timed(|| {
        // At q = 1 the family is the Weyl algebra; its skew infinitesimal is
        // (1/2) dx wedge dy, and the Euler field x dx meets a nonzero obstruction.
        let z = PolyDiffCochain::vector_field(CPoly::x(), CPoly::zero());
        let m1 = StarProduct::moyal_skew(1).term(1);
        let o = primary_obstruction(&z, &m1)?;
        let expected = PolyDiffCochain::partial(1, 0).wedge(&PolyDiffCochain::partial(0, 1)).neg();
        let verdict = if o.cochain != expected || o.vanishes() { Verdict::Fail } else { Verdict::NoneAtWindow };
        Ok(Check::new(
            "qweyl.primary-obstruction",
            "qweyl-primary-obstruction",
            "[x dx, m_1] = -(dx wedge dy) for the skew Weyl infinitesimal, and no cochain in the window bounds it",
            verdict,
            format!("obstruction {}", o.cochain),
        )
        .window(o.verdict.window()))
    })?);

    report.push(timed(|| {
        let e = nc_mono(&alg, 1, 1).add(&nc_mono(&alg, 2, 0))?;
        let d = Derivation::inner(&e)?;
        let kills = d.annihilates_center(bx, by)?;
        let pre = d.inner_preimage(bx, by)?;
        Ok(Check::new(
            "qweyl.inner-annihilates-center",
            "central-annihilation",
            "an inner derivation annihilates every central element",
            Verdict::from_bool(kills && pre.is_some()),
            format!("ad({e}): annihilates center = {kills}, preimage {}", pre.map_or("none".into(), |p| p.to_string())),
        )
        .window(format!("exponents <= ({bx},{by})")))
    })?);

    if let Some(d) = scaling {
        report.push(timed(|| {
            let kills = d.annihilates_center(bx, by)?;
            let pre = d.inner_preimage(bx, by)?;
            let verdict = match (q.root_order(), kills, &pre) {
                (_, _, Some(_)) => Verdict::Fail,
                (Some(_), false, None) => Verdict::Pass,
                (Some(_), true, None) => Verdict::Fail,
                (None, _, None) => Verdict::NoneAtWindow,
            };
            let why = if kills { "annihilates the center in the box" } else { "moves a central element, so it is not inner" };
            Ok(Check::new(
                "qweyl.scaling-not-inner",
                "central-annihilation",
                "x dx - y dy is not inner",
                verdict,
                format!("{why}; inner preimage {}", pre.map_or("none in window".into(), |p| p.to_string())),
            )
            .window(format!("exponents <= ({bx},{by})")))
        })?);
    }
    Ok(report)
}

fn qweyl_h2(p: &Params) -> Result<Report> {
    let q = p.q.clone().unwrap_or(QDesc::Zeta(3));
    let Some(n) = q.root_order() else {
        return Err(Error::InvalidParameters("qweyl-h2 needs q = zeta:N".into()));
    };
    let hbar = qweyl_hbar(p, &q, 2);
    let (bx, by) = p.bound.unwrap_or((2 * n + 2, 2 * n + 2));
    let mut echo = Echo::default();
    echo.set("q", &q);
    echo.set("hbar", &hbar);
    echo.set("bound", format!("{bx},{by}"));
    let mut report = Report::new("qweyl-h2", echo);
    let alg = AlgebraSpec::new(q.scalar(), hbar)?;

    for (i, j) in [(0, 0), (n, 0), (0, n), (n, n)] {
        let c = nc_mono(&alg, i, j);
        // [c·x dx ∧ y dy, x^N/N] = c·x^N y dy: a derivation sending y to c x^N y.
        let image_y = c.mul(&nc_mono(&alg, n, 1))?;
        let ext = alg.extends_to_derivation(&NCPoly::zero(&alg), &image_y)?;
        let label = format!("c = {c}");
        let Some(d) = ext else {
            report.push(Check::new("qweyl-h2.lifts", "qweyl-h2-module", format!("c x^{n} y dy lifts ({label})"), Verdict::Fail, "no derivation extends it"));
            continue;
        };
        let kills = d.annihilates_center(bx, by)?;
        report.push(Check::new(
            "qweyl-h2.not-annihilating",
            "qweyl-h2-module",
            format!("the lift of c x^{n} y dy moves a central element ({label}), so c w_q is not a coboundary"),
            Verdict::from_bool(!kills),
            format!("derivation {d}"),
        ));
        let pre = d.inner_preimage(bx, by)?;
        report.push(
            Check::new(
                "qweyl-h2.no-inner-preimage",
                "qweyl-h2-module",
                format!("the lift of c x^{n} y dy is not ad e for any e in the window ({label})"),
                if pre.is_some() { Verdict::Fail } else { Verdict::NoneAtWindow },
                pre.map_or("no preimage".into(), |e| format!("preimage {e}")),
            )
            .window(format!("exponents <= ({bx},{by})")),
        );
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Complexes

fn ep_fuzz_scenario(p: &Params) -> Result<Report> {
    let count = p.count.unwrap_or(200);
    let max_dim = p.max_dim.unwrap_or(6);
    let max_len = p.max_len.unwrap_or(5);
    let seed = p.seed.unwrap_or(42);
    let mut echo = Echo::default();
    echo.set("count", count);
    echo.set("max_dim", max_dim);
    echo.set("max_len", max_len);
    echo.set("seed", seed);
    let mut report = Report::new("ep-fuzz", echo);
    let rows = ep_fuzz(count, max_dim, max_len, seed)?;
    let mut failed = 0;
    for r in &rows {
        failed += usize::from(!r.passed());
        report.push(
            Check::new(
                &format!("ep-fuzz.case-{}", r.seed),
                "euler-poincare-invariance",
                "chi_d = chi_h, chi is preserved by the deformation and no dim H^n grows",
                Verdict::from_bool(r.passed()),
                format!("spaces {:?}, H {:?} -> {:?}, chi {}", r.spaces, r.dims_base, r.dims_deformed, r.chi_dimensional),
            )
            .data(json!({
                "seed": r.seed,
                "spaces": r.spaces,
                "dims_base": r.dims_base,
                "dims_deformed": r.dims_deformed,
                "chi": {"dimensional": r.chi_dimensional, "homological": r.chi_homological, "deformed": r.chi_deformed},
                "flags": {
                    "chi_equal": r.chi_equal,
                    "dims_nonincreasing": r.dims_nonincreasing,
                    "split_matches": r.split_matches,
                    "specialization_generic": r.specialization_generic,
                },
            })),
        );
    }
    let drops = rows.iter().filter(|r| r.dims_base != r.dims_deformed).count();
    report.push(Check::new(
        "ep-fuzz.summary",
        "euler-poincare-invariance",
        "all seeded complexes and deformations satisfy the invariance",
        Verdict::from_bool(failed == 0),
        format!("{} cases, {failed} failed, {drops} with a strict drop in cohomology", rows.len()),
    ));
    Ok(report)
}

fn chi_table(p: &Params) -> Result<Report> {
    let (bx, by) = p.bound.unwrap_or((4, 4));
    let mut echo = Echo::default();
    echo.set("bound", format!("{bx},{by}"));
    let mut report = Report::new("chi-table", echo);
    report.push(timed(|| {
        let table = chi_bidegree_table(-(bx as i64)..=bx as i64, -(by as i64)..=by as i64)?;
        let mut bad = Vec::new();
        let mut rows = Vec::new();
        for e in &table {
            let expected = i64::from((e.r, e.s) == (-1, -1));
            if e.chi != expected || e.window_chi != expected {
                bad.push(format!("({},{}): {} / window {}", e.r, e.s, e.chi, e.window_chi));
            }
            rows.push(json!({"r": e.r, "s": e.s, "chi": e.chi, "window_chi": e.window_chi}));
        }
        let witness = if bad.is_empty() { format!("chi(-1,-1) = 1 and {} other entries vanish", table.len() - 1) } else { bad.join("; ") };
        Ok(Check::new(
            "chi-table.entries",
            "bigraded-chi",
            "chi_(r,s) of k[x,y] is 1 at (-1,-1) and 0 elsewhere, matching exact window ranks",
            Verdict::from_bool(bad.is_empty()),
            witness,
        )
        .window("arities 0..=3, total order 2, degree r+s+2")
        .data(json!(rows)))
    })?);
    Ok(report)
}

// ---------------------------------------------------------------------------
// Star products

fn assoc_check(id: &str, anchor: &str, stmt: &str, star: &StarProduct, b: (u32, u32)) -> Check {
    let (v, w) = match star.associativity_defect(b.0, b.1) {
        AssocVerdict::Pass { triples } => (Verdict::Pass, format!("{triples} monomial triples")),
        AssocVerdict::Fail { order, triple } => (
            Verdict::Fail,
            format!("defect at h^{order} on ({}, {}, {})", CPoly::term(Scalar::one(), triple.0), CPoly::term(Scalar::one(), triple.1), CPoly::term(Scalar::one(), triple.2)),
        ),
    };
    Check::new(id, anchor, stmt, v, w).window(format!("exponents <= ({},{}), h-order {}", b.0, b.1, if star.is_exact() { "exact".to_string() } else { star.order().to_string() }))
}

fn star_assoc(p: &Params) -> Result<Report> {
    let (bx, by) = p.bound.unwrap_or((4, 4));
    let k = p.order.unwrap_or(6);
    let mut echo = Echo::default();
    echo.set("bound", format!("{bx},{by}"));
    echo.set("order", k);
    let mut report = Report::new("star-assoc", echo);
    let moyal = StarProduct::moyal();
    let (x, y) = (CPoly::x(), CPoly::y());

    report.push(timed(|| {
        let c = moyal.apply(&x, &y).sub(&moyal.apply(&y, &x));
        let ok = c.exact && c.layers.len() == 2 && c.layer(0).is_zero() && c.layer(1) == CPoly::one();
        Ok(Check::new("star.commutator", "moyal-star", "x * y - y * x = h for the Moyal product", Verdict::from_bool(ok), format!("[x,y] = {c}")))
    })?);
    report.push(timed(|| {
        let m1 = moyal.term(1);
        let want = PolyDiffCochain::partial(1, 0).cup(&PolyDiffCochain::partial(0, 1));
        let qp1 = StarProduct::quantum_plane(1).term(1);
        let qwant = PolyDiffCochain::vector_field(x.clone(), CPoly::zero()).cup(&PolyDiffCochain::vector_field(CPoly::zero(), y.clone()));
        Ok(Check::new(
            "star.infinitesimal",
            "moyal-star",
            "the infinitesimal of m exp(h sum phi_i (x) psi_i) is sum phi_i cup psi_i",
            Verdict::from_bool(m1 == want && qp1 == qwant),
            format!("Moyal m_1 = {m1}; quantum plane m_1 = {qp1}"),
        ))
    })?);
    report.push(timed(|| Ok(assoc_check("star.moyal-assoc", "star-associativity", "the Moyal product is associative", &moyal, (bx, by))))?);

    let qp = StarProduct::quantum_plane(k);
    report.push(timed(|| {
        let lhs = qp.apply(&x, &y);
        let rhs = qp.apply(&y, &x).mul_series(&exp_series(&Scalar::one(), k));
        let d = lhs.sub(&rhs);
        Ok(Check::new(
            "star.qp-exponential",
            "quantum-plane-star",
            format!("x * y = e^h y * x for the quantum-plane product mod h^{}", k + 1),
            Verdict::from_bool(d.is_zero()),
            format!("x * y = {lhs}"),
        )
        .window(format!("h-order {k}")))
    })?);
    let qk = k.min(5);
    let qb = (bx.min(3), by.min(3));
    report.push(timed(|| Ok(assoc_check("star.qp-assoc", "star-associativity", "the quantum-plane product is associative to the truncation order", &qp.with_order(qk), qb)))?);

    report.push(timed(|| {
        let mut terms: Vec<PolyDiffCochain> = (1..=3).map(|i| moyal.term(i)).collect();
        terms[1] = terms[1].add(&PolyDiffCochain::term(CPoly::one(), vec![Slot::new(1, 1), Slot::ID]));
        let bad = StarProduct::from_terms(terms)?;
        let v = bad.associativity_defect(2, 2);
        let ok = matches!(v, AssocVerdict::Fail { order: 2, .. });
        Ok(Check::new(
            "star.corrupted-detected",
            "star-associativity",
            "perturbing m_2 of the Moyal product by dx dy (x) id breaks associativity at order 2",
            Verdict::from_bool(ok),
            format!("{v:?}"),
        ))
    })?);
    report.push(timed(|| {
        let v = weyl_isomorphism_check(bx, by)?;
        Ok(Check::new(
            "star.weyl-isomorphism",
            "weyl-isomorphism",
            "at h = 1 the Moyal product is the Weyl algebra under anti-normal ordering",
            Verdict::from_bool(v.is_none()),
            v.map_or("all monomial pairs agree".into(), |(a, b)| format!("mismatch on ({a:?}, {b:?})")),
        )
        .window(format!("exponents <= ({bx},{by})")))
    })?);
    report.push(timed(|| {
        let ok = qp.group_law_holds() == Some(true) && moyal.with_order(k).group_law_holds() == Some(true);
        Ok(Check::new("star.group-law", "gm-group-law", "r^i composed with r^j equals r^(i+j) for commuting pairs", Verdict::from_bool(ok), format!("checked to total order {k}")))
    })?);
    report.push(timed(|| {
        let dx = PolyDiffCochain::partial(1, 0);
        let xdy = PolyDiffCochain::vector_field(CPoly::zero(), x.clone());
        let v = StarProduct::gm_star(&[(dx, xdy)], 2);
        Ok(Check::new(
            "star.noncommuting-rejected",
            "moyal-star",
            "a pair of non-commuting derivations is rejected",
            Verdict::from_bool(matches!(v, Err(Error::NonCommutingDerivations(_)))),
            v.err().map_or("accepted".into(), |e| e.to_string()),
        ))
    })?);
    Ok(report)
}
