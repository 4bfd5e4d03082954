use std::collections::BTreeMap;
use std::fmt::Write as _;

use dr2_core::{Basis, Class, PolyQ, Rational};
use serde::Serialize;
use serde_json::{json, Map, Value};

/// Value of `d` requested on the command line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DArg {
    Symbolic,
    Int(i64),
}

impl DArg {
    pub fn label(&self) -> String {
        match self {
            DArg::Symbolic => "symbolic".into(),
            DArg::Int(n) => n.to_string(),
        }
    }

    pub fn value(&self) -> Option<Rational> {
        match self {
            DArg::Symbolic => None,
            DArg::Int(n) => Some(Rational::integer(*n)),
        }
    }

    /// JSON for a polynomial in `d`: an ascending coefficient array when
    /// symbolic, a rational string when evaluated.
    pub fn poly(&self, p: &PolyQ) -> Value {
        match self.value() {
            None => serde_json::to_value(p).expect("polynomials serialize"),
            Some(d) => Value::String(p.eval(&d).to_string()),
        }
    }

    pub fn poly_text(&self, p: &PolyQ) -> String {
        match self.value() {
            None => p.to_string(),
            Some(d) => p.eval(&d).to_string(),
        }
    }

    pub fn class<B: Basis>(&self, c: &Class<B>) -> Value {
        let mut map = Map::new();
        for (name, p) in B::NAMES.iter().zip(c.coeffs()) {
            map.insert(name.to_string(), self.poly(p));
        }
        Value::Object(map)
    }
}

pub fn parse_d(s: &str) -> Result<DArg, String> {
    if s == "symbolic" {
        return Ok(DArg::Symbolic);
    }
    match s.parse::<i64>() {
        Ok(n) if n >= 1 => Ok(DArg::Int(n)),
        Ok(n) => Err(format!(
            "d must be a positive integer or \"symbolic\", got {n}"
        )),
        Err(_) => Err(format!(
            "d must be a positive integer or \"symbolic\", got {s:?}"
        )),
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub version: &'static str,
    pub inputs: Value,
    pub outputs: Value,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub fixtures: BTreeMap<String, String>,
}

impl Report {
    pub fn new(command: &str, inputs: Value, fixtures: BTreeMap<String, String>) -> Self {
        Report {
            command: command.into(),
            version: dr2_core::VERSION,
            inputs,
            outputs: json!({}),
            notes: Vec::new(),
            fixtures,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Markdown document assembled alongside a report.
#[derive(Default)]
pub struct Markdown {
    buf: String,
}

impl Markdown {
    pub fn new(report: &Report) -> Self {
        let mut md = Markdown::default();
        let _ = writeln!(md.buf, "# dr2 {}\n", report.command);
        let _ = writeln!(md.buf, "version {}\n", report.version);
        if let Value::Object(inputs) = &report.inputs {
            for (k, v) in inputs {
                let v = match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                let _ = writeln!(md.buf, "- {k}: `{v}`");
            }
            md.buf.push('\n');
        }
        md
    }

    pub fn heading(&mut self, text: &str) {
        let _ = writeln!(self.buf, "## {text}\n");
    }

    pub fn line(&mut self, text: impl AsRef<str>) {
        self.buf.push_str(text.as_ref());
        self.buf.push('\n');
    }

    pub fn blank(&mut self) {
        self.buf.push('\n');
    }

    pub fn table(&mut self, header: &[&str], rows: &[Vec<String>]) {
        let _ = writeln!(self.buf, "| {} |", header.join(" | "));
        let _ = writeln!(self.buf, "|{}", "---|".repeat(header.len()));
        for r in rows {
            let _ = writeln!(self.buf, "| {} |", r.join(" | "));
        }
        self.buf.push('\n');
    }

    pub fn class_table<B: Basis>(&mut self, d: &DArg, c: &Class<B>) {
        let rows: Vec<Vec<String>> = B::NAMES
            .iter()
            .zip(c.coeffs())
            .map(|(n, p)| vec![format!("`{n}`"), format!("`{}`", d.poly_text(p))])
            .collect();
        self.table(&["slot", "coefficient"], &rows);
    }

    pub fn finish(self, report: &Report) -> String {
        let mut out = self.buf;
        if !report.notes.is_empty() {
            out.push_str("## Notes\n\n");
            for n in &report.notes {
                let _ = writeln!(out, "- {n}");
            }
            out.push('\n');
        }
        if !report.fixtures.is_empty() {
            out.push_str("## Fixtures\n\n");
            for (name, sum) in &report.fixtures {
                let _ = writeln!(out, "- `{name}` sha256 `{sum}`");
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn d_parsing() {
        assert_eq!(parse_d("symbolic"), Ok(DArg::Symbolic));
        assert_eq!(parse_d("3"), Ok(DArg::Int(3)));
        assert!(parse_d("0").is_err());
        assert!(parse_d("-2").is_err());
        assert!(parse_d("two").is_err());
        assert!(parse_d("2.5").is_err());
    }

    #[test]
    fn poly_rendering() {
        let p = PolyQ::from_ints(&[-1, 0, 1]);
        assert_eq!(DArg::Int(3).poly(&p), Value::String("8".into()));
        assert_eq!(DArg::Symbolic.poly(&p), json!(["-1", "0", "1"]));
        assert_eq!(DArg::Symbolic.poly_text(&p), "d^2 - 1");
    }
}
