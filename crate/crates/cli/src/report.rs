//! Check rows, reports and their text, JSON and CSV renderings.

use std::fmt;
use std::time::Instant;

use serde_json::{json, Map, Value};

use crate::params::Echo;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// Non-existence verified only inside the reported window.
    NoneAtWindow,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::NoneAtWindow => "NONE-AT-WINDOW",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub id: String,
    pub statement: String,
    pub anchor: String,
    pub verdict: Verdict,
    pub witness: String,
    pub window: Option<String>,
    pub data: Option<Value>,
    pub wall_ms: Option<f64>,
}

impl Check {
    pub fn new(id: &str, anchor: &str, statement: impl Into<String>, verdict: Verdict, witness: impl Into<String>) -> Self {
        Check {
            id: id.to_string(),
            statement: statement.into(),
            anchor: anchor.to_string(),
            verdict,
            witness: witness.into(),
            window: None,
            data: None,
            wall_ms: None,
        }
    }

    pub fn window(mut self, w: impl ToString) -> Self {
        self.window = Some(w.to_string());
        self
    }

    pub fn data(mut self, v: Value) -> Self {
        self.data = Some(v);
        self
    }

    fn to_json(&self, timings: bool) -> Value {
        let mut m = Map::new();
        m.insert("id".into(), json!(self.id));
        m.insert("statement".into(), json!(self.statement));
        m.insert("anchor".into(), json!(self.anchor));
        m.insert("verdict".into(), json!(self.verdict.to_string()));
        m.insert("witness".into(), json!(self.witness));
        m.insert("window".into(), self.window.as_ref().map_or(Value::Null, |w| json!(w)));
        if let Some(d) = &self.data {
            m.insert("data".into(), d.clone());
        }
        if timings {
            m.insert("wall_ms".into(), self.wall_ms.map_or(Value::Null, |t| json!(t)));
        }
        Value::Object(m)
    }
}

/// Run `f`, stamping the produced check with its wall time.
pub fn timed(f: impl FnOnce() -> defcoh_core::Result<Check>) -> defcoh_core::Result<Check> {
    let t = Instant::now();
    let mut c = f()?;
    c.wall_ms = Some(t.elapsed().as_secs_f64() * 1e3);
    Ok(c)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub scenario: String,
    pub params: Echo,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(scenario: &str, params: Echo) -> Self {
        Report { scenario: scenario.to_string(), params, checks: Vec::new() }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn overall(&self) -> Verdict {
        if self.checks.iter().any(|c| c.verdict == Verdict::Fail) {
            Verdict::Fail
        } else {
            Verdict::Pass
        }
    }

    /// Some check only established non-existence inside a window.
    pub fn has_warnings(&self) -> bool {
        self.checks.iter().any(|c| c.verdict == Verdict::NoneAtWindow)
    }

    /// Keys are sorted; wall times appear only on request so that repeated
    /// runs produce identical bytes.
    pub fn to_json(&self, timings: bool) -> String {
        let v = json!({
            "scenario": self.scenario,
            "params": self.params.0,
            "checks": self.checks.iter().map(|c| c.to_json(timings)).collect::<Vec<_>>(),
            "overall": self.overall().to_string(),
            "warnings": self.has_warnings(),
        });
        let mut s = serde_json::to_string_pretty(&v).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self, timings: bool) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["scenario", "id", "anchor", "verdict", "statement", "witness", "window"];
        if timings {
            header.push("wall_ms");
        }
        w.write_record(&header).expect("in-memory write");
        for c in &self.checks {
            let mut rec = vec![
                self.scenario.clone(),
                c.id.clone(),
                c.anchor.clone(),
                c.verdict.to_string(),
                c.statement.clone(),
                c.witness.clone(),
                c.window.clone().unwrap_or_default(),
            ];
            if timings {
                rec.push(c.wall_ms.map(|t| format!("{t:.3}")).unwrap_or_default());
            }
            w.write_record(&rec).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }

    pub fn to_text(&self, timings: bool) -> String {
        let mut s = format!("scenario {}", self.scenario);
        for (k, v) in &self.params.0 {
            s.push_str(&format!(" {k}={v}"));
        }
        s.push('\n');
        for c in &self.checks {
            s.push_str(&format!("[{}] {} ({}): {}\n", c.verdict, c.id, c.anchor, c.statement));
            if !c.witness.is_empty() {
                s.push_str(&format!("    {}\n", c.witness));
            }
            if let Some(w) = &c.window {
                s.push_str(&format!("    window: {w}\n"));
            }
            if timings {
                if let Some(t) = c.wall_ms {
                    s.push_str(&format!("    {t:.1} ms\n"));
                }
            }
        }
        s.push_str(&format!("overall {}{}\n", self.overall(), if self.has_warnings() { " (with NONE-AT-WINDOW checks)" } else { "" }));
        s
    }

    pub fn render(&self, format: Format, timings: bool) -> String {
        match format {
            Format::Json => self.to_json(timings),
            Format::Csv => self.to_csv(timings),
            Format::Text => self.to_text(timings),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}
