use std::fmt::Write as _;
use std::time::Duration;

use serde_json::{json, Map, Value};
use teamltl::ltlengine::{Diagnostic, Part, Verdict, Witness};
use teamltl::Error;

/// Everything a subcommand reports. Text output leaves out the timings so
/// that it is byte-identical across runs.
#[derive(Debug, Default)]
pub struct Report {
    pub verdict: Option<bool>,
    pub witness: Option<Witness>,
    pub disjunct_index: Option<usize>,
    pub diagnostics: Vec<Diagnostic>,
    /// Command-specific payload: text form and JSON form.
    pub body: Option<(String, Value)>,
    pub parse_time: Duration,
    pub run_time: Duration,
}

impl Report {
    pub fn verdict(v: bool) -> Report {
        Report {
            verdict: Some(v),
            ..Report::default()
        }
    }

    pub fn body(text: String, value: Value) -> Report {
        Report {
            body: Some((text, value)),
            ..Report::default()
        }
    }

    pub fn from_verdict(v: Verdict) -> Report {
        Report {
            verdict: Some(v.holds),
            witness: v.witness,
            disjunct_index: v.disjunct_index,
            diagnostics: v.diagnostics,
            ..Report::default()
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self.verdict {
            Some(false) => 1,
            _ => 0,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some((text, _)) = &self.body {
            out.push_str(text);
            if !text.ends_with('\n') {
                out.push('\n');
            }
        }
        let decision = self.witness.is_some() || self.disjunct_index.is_some() || !self.diagnostics.is_empty();
        match self.verdict {
            Some(v) if !decision => writeln!(out, "{v}").unwrap(),
            Some(v) => {
                writeln!(out, "verdict: {v}").unwrap();
                if let Some(i) = self.disjunct_index {
                    writeln!(out, "disjunct_index: {i}").unwrap();
                }
                match &self.witness {
                    Some(Witness::Trace(t)) => writeln!(out, "witness: {t}").unwrap(),
                    Some(Witness::Team(t)) => writeln!(out, "witness: {t}").unwrap(),
                    None => {}
                }
                for d in &self.diagnostics {
                    let part = match d.part {
                        Part::Alpha => "alpha".to_string(),
                        Part::Beta(j) => format!("beta {j}"),
                    };
                    let status = if d.holds { "holds" } else { "fails" };
                    write!(out, "[{}] {part} {status}: {}", d.disjunct, d.formula).unwrap();
                    if let Some(t) = &d.trace {
                        write!(out, " ({t})").unwrap();
                    }
                    out.push('\n');
                }
            }
            None => {}
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("verdict".into(), json!(self.verdict));
        m.insert("witness".into(), serde_json::to_value(&self.witness).unwrap());
        m.insert("disjunct_index".into(), json!(self.disjunct_index));
        m.insert(
            "timings".into(),
            json!({
                "parse_ms": ms(self.parse_time),
                "run_ms": ms(self.run_time),
            }),
        );
        if !self.diagnostics.is_empty() {
            m.insert("diagnostics".into(), serde_json::to_value(&self.diagnostics).unwrap());
        }
        if let Some((_, value)) = &self.body {
            m.insert("result".into(), value.clone());
        }
        Value::Object(m)
    }
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1000.0
}

pub fn error_code(e: &Error) -> u8 {
    match e {
        Error::ResourceLimit(_) => 3,
        _ => 2,
    }
}

pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Syntax { .. } => "syntax",
        Error::Fragment(_) => "fragment",
        Error::ResourceLimit(_) => "resource",
        Error::NotLeftTotal(_) => "not_left_total",
        Error::Invalid(_) => "invalid",
        Error::Internal(_) => "internal",
    }
}
