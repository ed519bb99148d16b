//! Ideal files and flat key-value reports.
//!
//! ```text
//! field: GF(101)
//! variables: x, y, z
//! weights: 1, 1, 1
//! generators:
//!   x^2 - y*z
//!   y^3
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde_json::Value;

use crate::certify::{Certificate, Payload};
use crate::error::{Error, Result};
use crate::groebner::{buchberger, IdealPresentation};
use crate::poly::Polynomial;
use crate::ring::{GradedRing, Ring};
use crate::scalar::Field;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealFile {
    pub ring: Ring,
    pub generators: Vec<Polynomial>,
}

fn perr(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn parse_field(text: &str, line: usize, column: usize) -> Result<Field> {
    let t = text.trim();
    if t == "QQ" {
        return Ok(Field::Rational);
    }
    let inner = t
        .strip_prefix("GF(")
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| perr(line, column, format!("expected `GF(p)` or `QQ`, found `{t}`")))?;
    let p: u32 = inner
        .trim()
        .parse()
        .map_err(|_| perr(line, column + 3, format!("invalid characteristic `{inner}`")))?;
    Field::prime(p).map_err(|e| perr(line, column + 3, e.to_string()))
}

fn split_list(text: &str) -> Vec<String> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect()
}

impl IdealFile {
    pub fn new(ring: &Ring, generators: Vec<Polynomial>) -> IdealFile {
        IdealFile {
            ring: ring.clone(),
            generators,
        }
    }

    pub fn parse(text: &str) -> Result<IdealFile> {
        let mut field = None;
        let mut names: Option<Vec<String>> = None;
        let mut weights: Option<Vec<u32>> = None;
        let mut gen_lines: Vec<(usize, usize, String)> = Vec::new();
        let mut in_generators = false;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("");
            if line.trim().is_empty() {
                continue;
            }
            let indent = line.len() - line.trim_start().len();
            let content = line.trim();
            if let Some((key, value)) = content.split_once(':') {
                let value_col = indent + key.len() + 2 + (value.len() - value.trim_start().len());
                match key.trim() {
                    "field" => {
                        field = Some(parse_field(value, line_no, value_col)?);
                        in_generators = false;
                        continue;
                    }
                    "variables" => {
                        names = Some(split_list(value));
                        in_generators = false;
                        continue;
                    }
                    "weights" => {
                        let mut w = Vec::new();
                        for tok in split_list(value) {
                            w.push(tok.parse::<u32>().map_err(|_| {
                                perr(line_no, value_col, format!("invalid weight `{tok}`"))
                            })?);
                        }
                        weights = Some(w);
                        in_generators = false;
                        continue;
                    }
                    "generators" => {
                        in_generators = true;
                        if !value.trim().is_empty() {
                            gen_lines.push((line_no, value_col, value.trim().to_string()));
                        }
                        continue;
                    }
                    _ => {}
                }
            }
            if !in_generators {
                return Err(perr(line_no, indent + 1, format!("unexpected line `{content}`")));
            }
            gen_lines.push((line_no, indent + 1, content.to_string()));
        }
        let field = field.ok_or_else(|| perr(1, 1, "missing `field:` line"))?;
        let names = names.ok_or_else(|| perr(1, 1, "missing `variables:` line"))?;
        let weights = weights.unwrap_or_else(|| vec![1; names.len()]);
        let ring = GradedRing::new(names, weights, field)
            .map_err(|e| perr(1, 1, e.to_string()))?;
        let mut generators = Vec::new();
        for (line, col, text) in gen_lines {
            for (offset, piece) in split_top_level(&text) {
                if piece.trim().is_empty() {
                    continue;
                }
                generators.push(Polynomial::parse_at(&ring, piece, line, col + offset)?);
            }
        }
        Ok(IdealFile { ring, generators })
    }

    pub fn ideal(&self) -> Result<IdealPresentation> {
        buchberger(&self.ring, &self.generators)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "field: {}", self.ring.field()).unwrap();
        writeln!(s, "variables: {}", self.ring.names().join(", ")).unwrap();
        if !self.ring.is_standard_graded() {
            let w: Vec<String> = self.ring.weights().iter().map(|w| w.to_string()).collect();
            writeln!(s, "weights: {}", w.join(", ")).unwrap();
        }
        writeln!(s, "generators:").unwrap();
        for g in &self.generators {
            writeln!(s, "  {g}").unwrap();
        }
        s
    }
}

/// Splits a generator line at commas, keeping byte offsets.
fn split_top_level(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, c) in text.char_indices() {
        if c == ',' {
            out.push((start, &text[start..i]));
            start = i + 1;
        }
    }
    out.push((start, &text[start..]));
    out
}

/// Flat key-value report with stable key names.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    entries: BTreeMap<String, Value>,
}

impl Report {
    pub fn new(command: &str) -> Report {
        let mut r = Report::default();
        r.set("command", command);
        r
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.entries.insert(key.to_string(), value.into());
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.entries.get(key)
    }

    pub fn entries(&self) -> &BTreeMap<String, Value> {
        &self.entries
    }

    pub fn echo_input(&mut self, file: &IdealFile) {
        self.set("input.field", file.ring.field().to_string());
        self.set("input.variables", file.ring.names().join(","));
        let w: Vec<String> = file.ring.weights().iter().map(|w| w.to_string()).collect();
        self.set("input.weights", w.join(","));
        let g: Vec<String> = file.generators.iter().map(|g| g.to_string()).collect();
        self.set("input.generators", g.join("; "));
    }

    pub fn add_certificate(&mut self, prefix: &str, cert: &Certificate) {
        let key = |k: &str| {
            if prefix.is_empty() {
                k.to_string()
            } else {
                format!("{prefix}.{k}")
            }
        };
        self.set(&key("fingerprint"), cert.fingerprint.clone());
        if let Some(hf) = &cert.hilbert_function {
            self.set(&key("hilbert_function"), hf.clone());
        }
        if let Some(d) = cert.degree {
            self.set(&key("degree"), d as u64);
        }
        if let Some(h) = &cert.hom_series {
            self.set(&key("hom_series"), h.clone());
        }
        for c in &cert.checks {
            let base = key(&format!("check.{}", c.name));
            self.set(
                &format!("{base}.passed"),
                match c.passed {
                    Some(true) => "pass",
                    Some(false) => "fail",
                    None => "undecided",
                },
            );
            self.set(&format!("{base}.criterion"), c.criterion.clone());
            for (k, v) in &c.payload {
                let value: Value = match v {
                    Payload::Int(i) => (*i).into(),
                    Payload::Text(t) => t.clone().into(),
                };
                self.set(&format!("{base}.{k}"), value);
            }
        }
        self.set(&key("verdict"), cert.verdict.to_string());
        if let Some(d) = cert.dimension {
            self.set(&key("dimension"), d as u64);
        }
        self.set(&key("warnings"), cert.warnings.join(" | "));
        self.set(&key("elapsed_ms"), cert.elapsed_ms as u64);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.entries).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Report> {
        let entries: BTreeMap<String, Value> =
            serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        Ok(Report { entries })
    }

    /// `key: value` lines for terminals.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.entries {
            match v {
                Value::String(t) => writeln!(s, "{k}: {t}").unwrap(),
                other => writeln!(s, "{k}: {other}").unwrap(),
            }
        }
        s
    }
}
