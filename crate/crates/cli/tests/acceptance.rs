// Acceptance runner: one PASS/FAIL line per criterion, with the measured
// runtime against its limit. Oracles here are written independently of the
// library routines they check.

#[path = "../../core/tests/support/props.rs"]
mod props;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use defcoh_cli::{run, Params, QDesc, Report, Verdict};
use defcoh_core::{AlgebraSpec, CPoly, Mono, NCPoly, Scalar, StarProduct};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use serde_json::Value;

/// Criteria whose statement, taken literally, cannot hold; each has a ledger
/// entry. They still print FAIL, and an unexpected PASS is also an error.
const KNOWN_FAILURES: &[u32] = &[1];

type Outcome = Result<String, String>;

// ---------------------------------------------------------------- helpers

/// Polynomial in r and ħ with integer coefficients, keyed by (r-exp, ħ-exp).
type RH = BTreeMap<(u32, u32), i64>;

fn rh_add(acc: &mut RH, k: (u32, u32), c: i64) {
    let e = acc.entry(k).or_insert(0);
    *e += c;
    if *e == 0 {
        acc.remove(&k);
    }
}

fn rh_to_scalar(p: &RH, alg: &AlgebraSpec) -> Scalar {
    let mut s = Scalar::zero();
    for (&(a, b), &c) in p {
        let t = &(&alg.r().pow(a as i64).unwrap() * &alg.hbar().pow(b as i64).unwrap()) * &Scalar::from_int(c);
        s = &s + &t;
    }
    s
}

fn oracle_ncpoly(alg: &AlgebraSpec, terms: &BTreeMap<Mono, RH>) -> NCPoly {
    NCPoly::from_terms(alg, terms.iter().map(|(m, p)| (*m, rh_to_scalar(p, alg))))
}

fn scenario(name: &str, q: Option<&str>) -> Result<Report, String> {
    let p = Params { q: q.map(|s| QDesc::parse(s).unwrap()), ..Params::default() };
    run(name, &p).map_err(|e| format!("{name}: {e}"))
}

fn expect(report: &Report, id: &str, want: &[Verdict]) -> Result<(), String> {
    let c = report.checks.iter().find(|c| c.id == id).ok_or_else(|| format!("{}: no row {id}", report.scenario))?;
    if want.contains(&c.verdict) {
        Ok(())
    } else {
        Err(format!("{}: {id} is {} ({})", report.scenario, c.verdict, c.witness))
    }
}

fn rows<'a>(report: &'a Report, id: &str) -> Result<&'a Vec<Value>, String> {
    report
        .checks
        .iter()
        .find(|c| c.id == id)
        .and_then(|c| c.data.as_ref())
        .and_then(Value::as_array)
        .ok_or_else(|| format!("{}: no data rows for {id}", report.scenario))
}

fn int(v: &Value, key: &str) -> i64 {
    v[key].as_i64().unwrap_or_else(|| panic!("field {key} missing in {v}"))
}

// ------------------------------------------------------------ criterion 1

/// y·xⁿ = Aₙ xⁿ y + Bₙ x^{n−1} from yx = r·xy − r·ħ, peeling one x at a time.
fn rewrite_oracle(n: u32) -> (RH, RH) {
    let mut a: RH = BTreeMap::from([((0, 0), 1)]);
    let mut b: RH = BTreeMap::new();
    for _ in 0..n {
        let mut b2 = b.clone();
        for (&(i, j), &c) in &a {
            rh_add(&mut b2, (i + 1, j + 1), -c);
        }
        a = a.iter().map(|(&(i, j), &c)| ((i + 1, j), c)).collect();
        b = b2;
    }
    (a, b)
}

fn criterion_1() -> Outcome {
    let alg = AlgebraSpec::new(Scalar::q(), Scalar::hbar_series(2)).map_err(|e| e.to_string())?;
    let (x, y) = (NCPoly::x(&alg), NCPoly::y(&alg));
    let mut printed_fails = Vec::new();
    for n in 1..=30u32 {
        let xn = x.pow(n).unwrap();
        let lib = y.mul(&xn).unwrap();
        let (a, b) = rewrite_oracle(n);
        let want = oracle_ncpoly(&alg, &BTreeMap::from([(Mono::new(n, 1), a), (Mono::new(n - 1, 0), b)]));
        if !lib.sub(&want).unwrap().is_zero() {
            return Err(format!("library normal form of y x^{n} disagrees with the recursion oracle"));
        }
        // Literal statement: y xⁿ − rⁿ xⁿ y = +n_r ħ r x^{n−1}.
        let lhs = lib.sub(&xn.mul(&y).unwrap().scale(&alg.r().pow(n as i64).unwrap())).unwrap();
        let mut plus: RH = BTreeMap::new();
        for k in 0..n {
            rh_add(&mut plus, (k + 1, 1), 1);
        }
        let rhs = oracle_ncpoly(&alg, &BTreeMap::from([(Mono::new(n - 1, 0), plus)]));
        if !lhs.sub(&rhs).unwrap().is_zero() {
            printed_fails.push(n);
        }
    }
    if printed_fails.is_empty() {
        Ok("y x^n - r^n x^n y = n_r h r x^(n-1) for 1 <= n <= 30".into())
    } else {
        Err(format!(
            "stated identity fails for n in {:?}..={:?} over Q(q)(h); both library and recursion oracle give -n_r h r x^(n-1)",
            printed_fails.first().unwrap(),
            printed_fails.last().unwrap()
        ))
    }
}

// ------------------------------------------------------------ criterion 2

/// Product in the closed form Σ ħⁿ/n! (i)ₙ (l)ₙ x^{i+k−n} y^{j+l−n}, keyed
/// by (ħ-exp, x-exp, y-exp).
type Layered = BTreeMap<(u32, u32, u32), Scalar>;

fn falling(i: u32, n: u32) -> i64 {
    (0..n).map(|t| i as i64 - t as i64).product()
}

fn moyal_oracle(a: &Layered, b: &Layered) -> Layered {
    let mut out: Layered = BTreeMap::new();
    for (&(ha, i, j), ca) in a {
        for (&(hb, k, l), cb) in b {
            for n in 0..=i.min(l) {
                let fact: i64 = (1..=n as i64).product();
                let c = &(ca * cb) * &Scalar::from_ratio(falling(i, n) * falling(l, n), fact);
                let key = (ha + hb + n, i + k - n, j + l - n);
                let e = out.entry(key).or_insert_with(Scalar::zero);
                *e = &*e + &c;
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn mono_layered(m: Mono) -> Layered {
    BTreeMap::from([((0, m.x, m.y), Scalar::one())])
}

fn criterion_2() -> Outcome {
    let moyal = StarProduct::moyal();
    let (x, y) = (CPoly::x(), CPoly::y());
    let c = moyal.apply(&x, &y).sub(&moyal.apply(&y, &x));
    if c.layer(0) != CPoly::zero() || c.layer(1) != CPoly::one() || (2..4).any(|k| !c.layer(k).is_zero()) {
        return Err(format!("[x,y] for the Moyal product is {c:?}"));
    }

    let monos: Vec<Mono> = Mono::in_box(4, 4).into_iter().filter(|m| m.degree() <= 4).collect();
    for &a in &monos {
        for &b in &monos {
            let lib = moyal.apply(&CPoly::term(Scalar::one(), a), &CPoly::term(Scalar::one(), b));
            let want = moyal_oracle(&mono_layered(a), &mono_layered(b));
            for n in 0..=8u32 {
                let layer: CPoly = CPoly::from_terms(want.iter().filter(|(k, _)| k.0 == n).map(|(k, c)| (Mono::new(k.1, k.2), c.clone())));
                if lib.layer(n as usize) != layer {
                    return Err(format!("Moyal product of {a:?} and {b:?} disagrees with the closed form at h^{n}"));
                }
            }
        }
    }
    let mut triples = 0;
    for &a in &monos {
        for &b in &monos {
            let ab = moyal_oracle(&mono_layered(a), &mono_layered(b));
            for &c in &monos {
                let left = moyal_oracle(&ab, &mono_layered(c));
                let right = moyal_oracle(&mono_layered(a), &moyal_oracle(&mono_layered(b), &mono_layered(c)));
                if left != right {
                    return Err(format!("closed-form product not associative on {a:?}, {b:?}, {c:?}"));
                }
                triples += 1;
            }
        }
    }
    match moyal.associativity_defect(4, 4) {
        defcoh_core::starprod::AssocVerdict::Pass { .. } => {}
        defcoh_core::starprod::AssocVerdict::Fail { order, triple } => {
            return Err(format!("library associativity defect at h^{order} on {triple:?}"))
        }
    }

    // Quantum plane: x^i y^j ⋆ x^k y^l = e^{ħ i l} x^{i+k} y^{j+l}; check the
    // library against it, then x⋆y − e^ħ y⋆x mod ħ⁷.
    let k = 6;
    let qp = StarProduct::quantum_plane(k);
    for a in Mono::in_box(2, 2) {
        for b in Mono::in_box(2, 2) {
            let lib = qp.apply(&CPoly::term(Scalar::one(), a), &CPoly::term(Scalar::one(), b));
            let il = (a.x * b.y) as i64;
            for n in 0..=k {
                let fact: i64 = (1..=n as i64).product();
                let coeff = Scalar::from_ratio(il.pow(n as u32), fact);
                if lib.layer(n) != CPoly::term(coeff, a.times(b)) {
                    return Err(format!("quantum-plane product of {a:?} and {b:?} differs from e^(h i l) at h^{n}"));
                }
            }
        }
    }
    let xy = qp.apply(&x, &y);
    let yx = qp.apply(&y, &x);
    for n in 0..=k {
        let mut e_yx = CPoly::zero();
        for t in 0..=n {
            let ft: i64 = (1..=t as i64).product();
            e_yx = e_yx.add(&yx.layer(n - t).scale(&Scalar::from_ratio(1, ft)));
        }
        if xy.layer(n) != e_yx {
            return Err(format!("x*y - e^h y*x has a nonzero h^{n} term"));
        }
    }
    Ok(format!(
        "[x,y] = h; {} products and {triples} triples (degree <= 4) match the closed form; library associativity exact on exponents <= (4,4); qp commutation exact mod h^7",
        monos.len() * monos.len()
    ))
}

// ------------------------------------------------------------ criterion 3

fn criterion_3() -> Outcome {
    let r = scenario("sridharan", None)?;
    for id in ["sridharan.h0", "sridharan.obstruction-criterion", "sridharan.inner-lift", "sridharan.cup-lift", "sridharan.h1", "sridharan.h2"] {
        expect(&r, id, &[Verdict::Pass])?;
    }
    // Liftable dimension = basis size − rank of the divergence coefficients,
    // (u+1) for x^{u+1}y^v ∂x and (v+1) for x^u y^{v+1} ∂y.
    let crit = rows(&r, "sridharan.obstruction-criterion")?;
    for row in crit {
        let (u, v) = (int(row, "u"), int(row, "v"));
        let mut divs = Vec::new();
        if u >= -1 && v >= 0 {
            divs.push(u + 1);
        }
        if u >= 0 && v >= -1 {
            divs.push(v + 1);
        }
        let rank = usize::from(divs.iter().any(|&d| d != 0));
        if int(row, "basis") as usize != divs.len() || int(row, "liftable") as usize != divs.len() - rank {
            return Err(format!("bidegree ({u},{v}): row {row} vs oracle basis {} liftable {}", divs.len(), divs.len() - rank));
        }
    }
    let covered = crit.iter().map(|row| (int(row, "u"), int(row, "v"))).collect::<Vec<_>>();
    if !(-1..=4).all(|u| (-1..=4).all(|v| covered.contains(&(u, v)))) {
        return Err("obstruction rows do not cover bidegrees -1..=4".into());
    }
    for id in ["sridharan.h1", "sridharan.h2"] {
        if let Some(row) = rows(&r, id)?.iter().find(|row| int(row, "dim") != 0) {
            return Err(format!("{id}: nonzero window dimension at {row}"));
        }
    }
    let cups = rows(&r, "sridharan.h2")?.len();
    Ok(format!("{} derivation bidegrees match the divergence rank oracle; {cups} cup cocycles lift to coboundaries; H^1 = H^2 = 0", crit.len()))
}

// ------------------------------------------------------------ criterion 4

fn criterion_4() -> Outcome {
    let mut checked = 0;
    for (q, n) in [("zeta:2", Some(2u32)), ("zeta:3", Some(3)), ("zeta:4", Some(4)), ("zeta:5", Some(5)), ("zeta:6", Some(6)), ("symbolic", None)] {
        let r = scenario("qp-cohomology", Some(q))?;
        for id in ["qp.center", "qp.h1", "qp.liftability"] {
            expect(&r, id, &[Verdict::Pass])?;
        }
        let central = |a: i64, b: i64| a >= 0 && b >= 0 && n.map_or(a == 0 && b == 0, |n| a % n as i64 == 0 && b % n as i64 == 0);

        let b = n.map_or(4, |n| 2 * n);
        let qs = n.map_or(Scalar::q(), Scalar::zeta);
        let alg = AlgebraSpec::quantum_plane(qs).map_err(|e| e.to_string())?;
        let mut got: Vec<Mono> = alg.center_basis(b, b).map_err(|e| e.to_string())?.iter().filter_map(|c| c.leading_mono()).collect();
        got.sort();
        let want: Vec<Mono> = Mono::in_box(b, b).into_iter().filter(|m| central(m.x as i64, m.y as i64)).collect();
        if got != want {
            return Err(format!("q = {q}: center {got:?}, expected {want:?}"));
        }

        for row in rows(&r, "qp.h1")? {
            let bd = row["bidegree"].as_array().unwrap();
            let (u, v) = (bd[0].as_i64().unwrap(), bd[1].as_i64().unwrap());
            let want = if central(u, v) { 2 } else { 0 };
            if int(row, "dim") != want {
                return Err(format!("q = {q}: dim H^1 at ({u},{v}) is {}, expected {want}", int(row, "dim")));
            }
            checked += 1;
        }
    }
    Ok(format!("centers match N | a, N | b for N = 2..6 and {{1}} for symbolic q; {checked} H^1 window dims match (2 at central bidegrees, 0 elsewhere)"))
}

// ------------------------------------------------------------ criterion 5

/// Normal form of a word modulo ħ² by rewriting the leftmost yx.
fn word_normal_form(word: &str) -> BTreeMap<Mono, RH> {
    let mut todo: Vec<(Vec<u8>, RH)> = vec![(word.as_bytes().to_vec(), BTreeMap::from([((0, 0), 1)]))];
    let mut out: BTreeMap<Mono, RH> = BTreeMap::new();
    while let Some((w, c)) = todo.pop() {
        match w.windows(2).position(|p| p == b"yx") {
            None => {
                let nx = w.iter().filter(|&&ch| ch == b'x').count() as u32;
                let e = out.entry(Mono::new(nx, w.len() as u32 - nx)).or_default();
                for (&k, &v) in &c {
                    rh_add(e, k, v);
                }
            }
            Some(p) => {
                let mut swapped = w.clone();
                swapped[p] = b'x';
                swapped[p + 1] = b'y';
                todo.push((swapped, c.iter().map(|(&(i, j), &v)| ((i + 1, j), v)).collect()));
                let shorter: RH = c.iter().filter(|(&(_, j), _)| j == 0).map(|(&(i, j), &v)| ((i + 1, j + 1), -v)).collect();
                if !shorter.is_empty() {
                    let mut dropped = w.clone();
                    dropped.drain(p..p + 2);
                    todo.push((dropped, shorter));
                }
            }
        }
    }
    out.retain(|_, p| !p.is_empty());
    out
}

fn criterion_5() -> Outcome {
    let mut pairs = 0;
    for (q, n) in [("zeta:2", Some(2u32)), ("zeta:3", Some(3)), ("zeta:4", Some(4)), ("zeta:5", Some(5)), ("symbolic", None)] {
        let center = scenario("qweyl-center", Some(q))?;
        expect(&center, "qweyl.center-basis", &[Verdict::Pass])?;
        let qs = n.map_or(Scalar::q(), Scalar::zeta);
        if let Some(n) = n {
            expect(&center, "qweyl.center-generators", &[Verdict::Pass])?;
            let alg = AlgebraSpec::q_weyl(qs.clone()).map_err(|e| e.to_string())?;
            let (x, y) = (NCPoly::x(&alg), NCPoly::y(&alg));
            for g in [x.pow(n).unwrap(), y.pow(n).unwrap()] {
                if !g.commutator(&x).unwrap().is_zero() || !g.commutator(&y).unwrap().is_zero() {
                    return Err(format!("q = {q}: {g} is not central"));
                }
            }
        }

        let der = scenario("qweyl-derivations", Some(q))?;
        for id in ["qweyl.scaling-extends", "qweyl.xdx-obstructed", "qweyl.ydy-obstructed", "qweyl.inner-annihilates-center"] {
            expect(&der, id, &[Verdict::Pass])?;
        }
        expect(&der, "qweyl.primary-obstruction", &[Verdict::NoneAtWindow])?;
        let not_inner = if n.is_some() { Verdict::Pass } else { Verdict::NoneAtWindow };
        expect(&der, "qweyl.scaling-not-inner", &[not_inner])?;

        let inf = scenario("qweyl-infinitesimal", Some(q))?;
        for id in ["qweyl.rewrite", "qweyl.infinitesimal-congruence"] {
            expect(&inf, id, &[Verdict::Pass])?;
        }

        // Independent rewriting engine against the library and against
        // y^m x^n ≡ r^{mn} x^n y^m − r^{(m−1)(n−1)} m_r n_r r ħ x^{n−1} y^{m−1}.
        let alg = AlgebraSpec::new(qs, Scalar::hbar_series(1)).map_err(|e| e.to_string())?;
        for m in 1..=5u32 {
            for k in 1..=5u32 {
                let word = format!("{}{}", "y".repeat(m as usize), "x".repeat(k as usize));
                let oracle = word_normal_form(&word);
                let lib = alg.normal_form(Scalar::one(), &word).map_err(|e| e.to_string())?;
                if !lib.sub(&oracle_ncpoly(&alg, &oracle)).unwrap().is_zero() {
                    return Err(format!("q = {q}: normal form of {word} disagrees with the rewriting oracle"));
                }
                let mut tail: RH = BTreeMap::new();
                for i in 0..m {
                    for j in 0..k {
                        rh_add(&mut tail, ((m - 1) * (k - 1) + i + j + 1, 1), -1);
                    }
                }
                let formula = BTreeMap::from([(Mono::new(k, m), BTreeMap::from([((m * k, 0), 1)])), (Mono::new(k - 1, m - 1), tail)]);
                if oracle != formula {
                    return Err(format!("congruence fails for (m,n) = ({m},{k}) in Z[r][h]/h^2"));
                }
                pairs += 1;
            }
        }
    }
    Ok(format!(
        "x^N, y^N central; x dx - y dy extends, x dx and y dy do not; primary obstruction NONE-AT-WINDOW; {pairs} congruence pairs match the rewriting oracle"
    ))
}

// ------------------------------------------------------------ criterion 6

fn alternating(v: &Value) -> i64 {
    v.as_array().unwrap().iter().enumerate().map(|(i, d)| if i % 2 == 0 { d.as_i64().unwrap() } else { -d.as_i64().unwrap() }).sum()
}

fn criterion_6() -> Outcome {
    let r = scenario("ep-fuzz", None)?;
    expect(&r, "ep-fuzz.summary", &[Verdict::Pass])?;
    let cases: Vec<&Value> = r.checks.iter().filter(|c| c.id.starts_with("ep-fuzz.case-")).filter_map(|c| c.data.as_ref()).collect();
    if cases.len() != 200 {
        return Err(format!("{} cases, expected 200", cases.len()));
    }
    for d in &cases {
        let spaces = d["spaces"].as_array().unwrap();
        if spaces.len() > 5 || spaces.iter().any(|s| s.as_i64().unwrap() > 6) {
            return Err(format!("case {} exceeds dims <= 6, length <= 5", d["seed"]));
        }
        let (chi_d, chi_h, chi_def) = (alternating(&d["spaces"]), alternating(&d["dims_base"]), alternating(&d["dims_deformed"]));
        if chi_d != chi_h || chi_h != chi_def || chi_d != d["chi"]["dimensional"].as_i64().unwrap() {
            return Err(format!("case {}: chi_d {chi_d}, chi_h {chi_h}, deformed {chi_def}", d["seed"]));
        }
        let base = d["dims_base"].as_array().unwrap();
        let def = d["dims_deformed"].as_array().unwrap();
        if base.iter().zip(def).any(|(b, e)| e.as_i64() > b.as_i64()) {
            return Err(format!("case {}: cohomology grows under deformation", d["seed"]));
        }
    }
    let t = scenario("chi-table", None)?;
    expect(&t, "chi-table.entries", &[Verdict::Pass])?;
    let entries = rows(&t, "chi-table.entries")?;
    for e in entries {
        let (rr, s) = (int(e, "r"), int(e, "s"));
        let want = i64::from((rr, s) == (-1, -1));
        if int(e, "chi") != want || int(e, "window_chi") != want {
            return Err(format!("chi at ({rr},{s}) is {} (window {}), expected {want}", int(e, "chi"), int(e, "window_chi")));
        }
    }
    if entries.len() < 81 {
        return Err(format!("table has {} entries, expected |r|,|s| <= 4", entries.len()));
    }
    Ok(format!("200 complexes: chi recomputed from dimensions agrees before and after deformation, no dim H^n grows; {} table entries", entries.len()))
}

// ------------------------------------------------------------ criterion 7

fn suite<S: Strategy>(name: &str, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<u32, String> {
    let cases = 64;
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner.run(&strategy, test).map_err(|e| format!("{name}: {e}"))?;
    Ok(cases)
}

fn criterion_7() -> Outcome {
    use props::*;
    let mut total = 0;
    total += suite("delta^2", (0usize..=2).prop_flat_map(cochain), |f| delta_squared(&f))?;
    total += suite("[F1,F2]", (cochain(1), cochain(2), poly(3), poly(3)), |(f1, f2, a, b)| bracket_one_two(&f1, &f2, &a, &b))?;
    total += suite("[F2,c]", (cochain(2), poly(3), poly(3)), |(f2, c, a)| bracket_two_zero(&f2, &c, &a))?;
    total += suite("[F1,c]", (cochain(1), poly(3)), |(f1, c)| bracket_one_zero(&f1, &c))?;
    total += suite("Leibniz", (vector_field(), (0usize..=2).prop_flat_map(cochain), (0usize..=2).prop_flat_map(cochain)), |(d, f, g)| leibniz(&d, &f, &g))?;
    total += suite("bidegree", ((0usize..=2).prop_flat_map(homogeneous), (0usize..=2).prop_flat_map(homogeneous)), |(f, g)| bidegree_additive(&f, &g))?;
    total += suite("cup of lifts", (mono(2), mono(2)), |(a, b)| cup_of_lifts(a, b))?;
    Ok(format!("7 suites, {total} seeded instances"))
}

// ------------------------------------------------------------------- main

fn main() -> ExitCode {
    let criteria: [(u32, &str, u64, fn() -> Outcome); 7] = [
        (1, "rewrite identity", 1, criterion_1),
        (2, "star-product facts", 30, criterion_2),
        (3, "sridharan scenario", 300, criterion_3),
        (4, "quantum plane", 300, criterion_4),
        (5, "q-Weyl", 300, criterion_5),
        (6, "Euler-Poincare", 120, criterion_6),
        (7, "structural property suites", 120, criterion_7),
    ];
    let mut unexpected = 0;
    for (n, name, limit, f) in criteria {
        let start = Instant::now();
        let outcome = f();
        let t = start.elapsed();
        let in_time = t <= Duration::from_secs(limit);
        let (pass, detail) = match (outcome, in_time) {
            (Ok(d), true) => (true, d),
            (Ok(d), false) => (false, format!("{d}; over the time limit")),
            (Err(d), _) => (false, d),
        };
        let known = KNOWN_FAILURES.contains(&n);
        let tag = if pass { "PASS" } else { "FAIL" };
        let note = if known { " [known, see ledger]" } else { "" };
        println!("{tag} criterion {n} ({name}): {detail} ({:.2}s, limit {limit}s){note}", t.as_secs_f64());
        if pass == known {
            unexpected += 1;
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
