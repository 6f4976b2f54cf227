//! Scenario parameters as given on the command line.

use std::collections::BTreeMap;
use std::fmt;

use defcoh_core::{Error, Result, Scalar};

/// How q is supplied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QDesc {
    Symbolic,
    Rational(Scalar),
    Zeta(u32),
}

impl QDesc {
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t == "symbolic" || t == "q" {
            return Ok(QDesc::Symbolic);
        }
        if let Some(n) = t.strip_prefix("zeta:") {
            let n: u32 = n.parse().map_err(|_| Error::InvalidParameters(format!("bad root order in {t:?}")))?;
            if n < 2 {
                return Err(Error::InvalidParameters("zeta:N needs N >= 2".into()));
            }
            return Ok(QDesc::Zeta(n));
        }
        Ok(QDesc::Rational(parse_rational(t)?))
    }

    pub fn scalar(&self) -> Scalar {
        match self {
            QDesc::Symbolic => Scalar::q(),
            QDesc::Rational(s) => s.clone(),
            QDesc::Zeta(n) => Scalar::zeta(*n),
        }
    }

    /// Order of q as a root of unity, when it is one.
    pub fn root_order(&self) -> Option<u32> {
        match self {
            QDesc::Zeta(n) => Some(*n),
            _ => None,
        }
    }
}

impl fmt::Display for QDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QDesc::Symbolic => write!(f, "symbolic"),
            QDesc::Rational(s) => write!(f, "{s}"),
            QDesc::Zeta(n) => write!(f, "zeta:{n}"),
        }
    }
}

pub fn parse_rational(t: &str) -> Result<Scalar> {
    let s = Scalar::parse(t, &Default::default())?;
    if s.as_rational().is_none() {
        return Err(Error::InvalidParameters(format!("{t:?} is not a rational number")));
    }
    Ok(s)
}

/// How ħ is supplied: a formal parameter or a rational value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HDesc {
    Symbolic,
    Value(Scalar),
}

impl HDesc {
    pub fn parse(text: &str) -> Result<Self> {
        match text.trim() {
            "symbolic" | "h" => Ok(HDesc::Symbolic),
            t => Ok(HDesc::Value(parse_rational(t)?)),
        }
    }
}

impl fmt::Display for HDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HDesc::Symbolic => write!(f, "symbolic"),
            HDesc::Value(s) => write!(f, "{s}"),
        }
    }
}

pub fn parse_pair(text: &str) -> Result<(i64, i64)> {
    let bad = || Error::InvalidParameters(format!("expected two integers a,b, got {text:?}"));
    let (a, b) = text.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

pub fn parse_bound(text: &str) -> Result<(u32, u32)> {
    let t = text.trim();
    if !t.contains(',') {
        let n: u32 = t.parse().map_err(|_| Error::InvalidParameters(format!("bad bound {t:?}")))?;
        return Ok((n, n));
    }
    let (a, b) = parse_pair(t)?;
    if a < 0 || b < 0 {
        return Err(Error::InvalidParameters("bounds must be nonnegative".into()));
    }
    Ok((a as u32, b as u32))
}

/// `order=o,deg=d`.
pub fn parse_window(text: &str) -> Result<(u32, u32)> {
    let mut order = None;
    let mut deg = None;
    for part in text.split(',') {
        let (k, v) = part.split_once('=').ok_or_else(|| Error::InvalidParameters(format!("bad window part {part:?}")))?;
        let v: u32 = v.trim().parse().map_err(|_| Error::InvalidParameters(format!("bad window value {v:?}")))?;
        match k.trim() {
            "order" => order = Some(v),
            "deg" | "degree" => deg = Some(v),
            other => return Err(Error::InvalidParameters(format!("unknown window key {other:?}"))),
        }
    }
    match (order, deg) {
        (Some(o), Some(d)) => Ok((o, d)),
        _ => Err(Error::InvalidParameters("window needs order=o,deg=d".into())),
    }
}

/// Optional overrides; each scenario supplies its own defaults.
#[derive(Clone, Debug, Default)]
pub struct Params {
    pub q: Option<QDesc>,
    pub hbar: Option<HDesc>,
    pub bound: Option<(u32, u32)>,
    pub order: Option<usize>,
    pub window: Option<(u32, u32)>,
    pub seed: Option<u64>,
    pub count: Option<usize>,
    pub max_dim: Option<usize>,
    pub max_len: Option<usize>,
}

/// The parameter values a scenario actually used, echoed into its report.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Echo(pub BTreeMap<String, String>);

impl Echo {
    pub fn set(&mut self, k: &str, v: impl ToString) {
        self.0.insert(k.to_string(), v.to_string());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descriptors() {
        assert_eq!(QDesc::parse("zeta:5").unwrap(), QDesc::Zeta(5));
        assert_eq!(QDesc::parse("symbolic").unwrap(), QDesc::Symbolic);
        assert_eq!(QDesc::parse("2/3").unwrap(), QDesc::Rational(Scalar::from_ratio(2, 3)));
        assert!(QDesc::parse("zeta:1").is_err());
        assert_eq!(parse_window("order=2,deg=6").unwrap(), (2, 6));
        assert_eq!(parse_bound("4").unwrap(), (4, 4));
        assert_eq!(parse_pair("-1,3").unwrap(), (-1, 3));
    }
}
