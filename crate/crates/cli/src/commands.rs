//! The `star` and `cohomology` subcommands.

use defcoh_core::expr::scalar_atom;
use defcoh_core::hochschild::{window_cohomology_dims, CochainWindow};
use defcoh_core::starprod::AssocVerdict;
use defcoh_core::{AlgebraSpec, CPoly, Error, Expr, ParseContext, PolyDiffCochain, Result, Scalar, StarProduct};
use serde_json::json;

use crate::params::{Echo, HDesc, QDesc};
use crate::report::{timed, Check, Report, Verdict};

enum Val {
    Poly(CPoly),
    Field(CPoly, CPoly),
}

fn vf_eval(e: &Expr, ctx: &ParseContext) -> Result<Val> {
    use Val::*;
    let bad = |m: &str| Error::Parse { offset: 0, message: m.to_string() };
    Ok(match e {
        Expr::Num(n) => Poly(CPoly::constant(Scalar::from_big(n.clone()))),
        Expr::Atom(a) => match a.as_str() {
            "dx" => Field(CPoly::one(), CPoly::zero()),
            "dy" => Field(CPoly::zero(), CPoly::one()),
            "x" => Poly(CPoly::x()),
            "y" => Poly(CPoly::y()),
            other => Poly(CPoly::constant(scalar_atom(other, ctx).ok_or_else(|| bad(&format!("unknown symbol {other:?}")))??)),
        },
        Expr::Neg(a) => match vf_eval(a, ctx)? {
            Poly(p) => Poly(p.neg()),
            Field(a, b) => Field(a.neg(), b.neg()),
        },
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            let sign = if matches!(e, Expr::Sub(..)) { -Scalar::one() } else { Scalar::one() };
            match (vf_eval(a, ctx)?, vf_eval(b, ctx)?) {
                (Poly(p), Poly(q)) => Poly(p.add(&q.scale(&sign))),
                (Field(p1, p2), Field(q1, q2)) => Field(p1.add(&q1.scale(&sign)), p2.add(&q2.scale(&sign))),
                _ => return Err(bad("cannot add a function to a vector field")),
            }
        }
        Expr::Mul(a, b) => match (vf_eval(a, ctx)?, vf_eval(b, ctx)?) {
            (Poly(p), Poly(q)) => Poly(p.mul(&q)),
            (Poly(p), Field(f, g)) | (Field(f, g), Poly(p)) => Field(p.mul(&f), p.mul(&g)),
            _ => return Err(bad("product of two vector fields")),
        },
        Expr::Div(a, b) => {
            let Poly(d) = vf_eval(b, ctx)? else { return Err(bad("division by a vector field")) };
            if d.terms().keys().any(|m| m.degree() > 0) || d.is_zero() {
                return Err(bad("division by a non-constant"));
            }
            let inv = d.coeff(defcoh_core::Mono::ONE).try_inv()?;
            match vf_eval(a, ctx)? {
                Poly(p) => Poly(p.scale(&inv)),
                Field(f, g) => Field(f.scale(&inv), g.scale(&inv)),
            }
        }
        Expr::Pow(a, k) if *k >= 0 => match vf_eval(a, ctx)? {
            Poly(p) => Poly(p.pow(*k as u32)),
            Field(..) => return Err(bad("power of a vector field")),
        },
        Expr::Pow(..) => return Err(bad("negative power")),
    })
}

/// A vector field such as `dx`, `x*dy` or `1/2*dx - y*dy`.
pub fn parse_vector_field(text: &str) -> Result<PolyDiffCochain> {
    match vf_eval(&Expr::parse(text)?, &ParseContext::default())? {
        Val::Field(a, b) => Ok(PolyDiffCochain::vector_field(a, b)),
        Val::Poly(_) => Err(Error::Parse { offset: 0, message: format!("{text:?} is not a vector field") }),
    }
}

/// `(dx,dy)` or `(1/2*dx,dy);(-1/2*dy,dx)`.
pub fn parse_pairs(text: &str) -> Result<Vec<(PolyDiffCochain, PolyDiffCochain)>> {
    let bad = || Error::Parse { offset: 0, message: format!("expected (phi,psi) pairs, got {text:?}") };
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start = None;
    let mut comma = None;
    for (i, c) in text.char_indices() {
        match c {
            '(' => {
                if depth == 0 {
                    start = Some(i + 1);
                    comma = None;
                }
                depth += 1;
            }
            ')' => {
                depth = depth.checked_sub(1).ok_or_else(bad)?;
                if depth == 0 {
                    let (s, m) = (start.ok_or_else(bad)?, comma.ok_or_else(bad)?);
                    out.push((parse_vector_field(&text[s..m])?, parse_vector_field(&text[m + 1..i])?));
                }
            }
            ',' if depth == 1 => comma = Some(i),
            _ => {}
        }
    }
    if depth != 0 || out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}

pub struct StarArgs {
    pub pairs: String,
    pub order: usize,
    pub check_assoc: bool,
    pub bound: (u32, u32),
}

pub fn star(a: &StarArgs) -> Result<Report> {
    let pairs = parse_pairs(&a.pairs)?;
    let star = StarProduct::gm_star(&pairs, a.order)?;
    let mut echo = Echo::default();
    echo.set("pairs", &a.pairs);
    echo.set("order", a.order);
    echo.set("bound", format!("{},{}", a.bound.0, a.bound.1));
    let mut report = Report::new("star", echo);
    let (x, y) = (CPoly::x(), CPoly::y());
    let c = star.apply(&x, &y).sub(&star.apply(&y, &x));
    report.push(Check::new(
        "star.terms",
        "moyal-star",
        "low-order terms of the product",
        Verdict::Pass,
        format!("m_1 = {}; [x,y] = {c}", star.term(1)),
    ));
    if a.check_assoc {
        report.push(timed(|| {
            let (v, w) = match star.associativity_defect(a.bound.0, a.bound.1) {
                AssocVerdict::Pass { triples } => (Verdict::Pass, format!("{triples} monomial triples")),
                AssocVerdict::Fail { order, triple } => (Verdict::Fail, format!("defect at h^{order} on {triple:?}")),
            };
            let mode = if star.is_exact() { "exact".to_string() } else { format!("mod h^{}", a.order + 1) };
            Ok(Check::new("star.assoc", "star-associativity", "the product is associative", v, w)
                .window(format!("exponents <= ({},{}), {mode}", a.bound.0, a.bound.1)))
        })?);
    }
    Ok(report)
}

pub struct CohomologyArgs {
    pub algebra: String,
    pub q: Option<QDesc>,
    pub hbar: Option<HDesc>,
    pub arity: usize,
    pub bidegree: (i64, i64),
    pub window: (u32, u32),
}

pub fn cohomology(a: &CohomologyArgs) -> Result<Report> {
    let q = a.q.clone();
    let hval = |default: i64| match &a.hbar {
        None => Scalar::from_int(default),
        Some(HDesc::Value(v)) => v.clone(),
        Some(HDesc::Symbolic) => Scalar::hbar_rational(),
    };
    let qval = || q.clone().unwrap_or(QDesc::Symbolic).scalar();
    let alg = match a.algebra.as_str() {
        "poly" => AlgebraSpec::polynomial(),
        "weyl" => AlgebraSpec::new(Scalar::one(), hval(1))?,
        "qp" => AlgebraSpec::new(qval(), hval(0))?,
        "qweyl" => AlgebraSpec::new(qval(), hval(1))?,
        other => return Err(Error::InvalidParameters(format!("unknown algebra {other:?}; expected poly, qp, weyl or qweyl"))),
    };
    let window = CochainWindow::new(a.arity, a.bidegree, a.window.0, a.window.1);
    let mut echo = Echo::default();
    echo.set("algebra", &a.algebra);
    match &a.q {
        Some(q) => echo.set("q", q),
        None => echo.set("q", alg.q()),
    }
    echo.set("hbar", alg.hbar());
    echo.set("arity", a.arity);
    echo.set("bidegree", format!("{},{}", a.bidegree.0, a.bidegree.1));
    echo.set("window", format!("order={},deg={}", a.window.0, a.window.1));
    let mut report = Report::new("cohomology", echo);
    report.push(timed(|| {
        let wc = window_cohomology_dims(&alg, &window)?;
        Ok(Check::new(
            "cohomology.window",
            "window-cohomology",
            format!("dim H^{} at bidegree ({},{}) inside the window", a.arity, a.bidegree.0, a.bidegree.1),
            Verdict::Pass,
            format!("dim {} ({} cocycles, {} coboundaries)", wc.dim, wc.cocycles, wc.coboundaries),
        )
        .window(window)
        .data(json!({
            "arity": a.arity,
            "bidegree": [a.bidegree.0, a.bidegree.1],
            "window": window.to_string(),
            "dim": wc.dim,
            "witnesses": wc.witnesses,
        })))
    })?);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_parse() {
        let p = parse_pairs("(dx,dy)").unwrap();
        assert_eq!(p, vec![(PolyDiffCochain::partial(1, 0), PolyDiffCochain::partial(0, 1))]);
        let p = parse_pairs("(1/2*dx, dy); (-1/2*dy, dx)").unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p[1].0, PolyDiffCochain::partial(0, 1).scale(&Scalar::from_ratio(-1, 2)));
        let f = parse_vector_field("x*dx - y^2*dy").unwrap();
        assert_eq!(f, PolyDiffCochain::vector_field(CPoly::x(), CPoly::mono(0, 2).neg()));
        assert!(parse_pairs("(dx)").is_err());
        assert!(parse_vector_field("dx*dy").is_err());
    }

    #[test]
    fn cohomology_of_polynomials() {
        let a = CohomologyArgs { algebra: "poly".into(), q: None, hbar: None, arity: 1, bidegree: (0, 0), window: (2, 6) };
        let r = cohomology(&a).unwrap();
        assert_eq!(r.checks[0].data.as_ref().unwrap()["dim"], 2);
    }
}
