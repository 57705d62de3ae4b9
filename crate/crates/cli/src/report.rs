//! Report envelope and JSON encodings of forms, classes and connections.

use crate::parse::{class_rep, label_weight};
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;
use wittcoh::cochain::Cochain;
use wittcoh::exactnum::{fmt_rational, Rational};
use wittcoh::massey::{ClassVector, FormalConnection};

pub const SCHEMA: &str = "wittcoh-report/1";

pub fn rational(r: &Rational) -> Value {
    Value::String(fmt_rational(r))
}

/// Forms as text plus an explicit term list [[indices], "coeff"].
pub fn form(f: &Cochain) -> Value {
    let terms: Vec<Value> = f.terms().map(|(m, c)| json!([m.indices(), fmt_rational(c)])).collect();
    json!({ "text": f.to_string(), "terms": terms })
}

pub fn connection(a: &FormalConnection<Rational>) -> Value {
    let entries: Vec<Value> = a.entries().map(|((r, c), f)| json!({ "row": r, "col": c, "form": form(f) })).collect();
    json!({ "size": a.size(), "entries": entries })
}

/// Cohomology classes used by a report, by label.
#[derive(Default)]
pub struct Labels {
    table: BTreeMap<String, (usize, u32, Cochain)>,
}

impl Labels {
    /// Starts with g^q_- and g^q_+ for q <= 3.
    pub fn standard() -> Self {
        let mut l = Labels::default();
        for q in 1..=3 {
            for (plus, s) in [(false, '-'), (true, '+')] {
                let w = label_weight(q, plus);
                if let Ok(rep) = class_rep(q, w) {
                    l.table.insert(format!("g{q}{s}"), (q, w, rep));
                }
            }
        }
        l
    }

    /// Label for representative k of H^q_w, registering it.
    pub fn class(&mut self, q: usize, w: u32, k: usize) -> String {
        if k == 0 {
            if let Some((name, _)) = self.table.iter().find(|(n, (qq, ww, _))| n.starts_with('g') && *qq == q && *ww == w) {
                return name.clone();
            }
        }
        let name = if k == 0 { format!("h{q}_{w}") } else { format!("h{q}_{w}.{k}") };
        if !self.table.contains_key(&name) {
            let reps = wittcoh::cochain::BlockCache::new().get(q, w).representatives();
            if let Some(rep) = reps.get(k) {
                self.table.insert(name.clone(), (q, w, rep.clone()));
            }
        }
        name
    }

    pub fn class_vector(&mut self, q: usize, v: &ClassVector) -> Value {
        let items: Vec<Value> =
            v.iter().map(|((w, k), c)| json!({ "class": self.class(q, *w, *k), "weight": w, "coeff": fmt_rational(c) })).collect();
        Value::Array(items)
    }

    pub fn class_text(&mut self, q: usize, v: &ClassVector) -> String {
        if v.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = v.iter().map(|((w, k), c)| format!("{}*[{}]", fmt_rational(c), self.class(q, *w, *k))).collect();
        parts.join(" + ")
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .table
            .iter()
            .map(|(name, (q, w, rep))| json!({ "label": name, "degree": q, "weight": w, "representative": form(rep) }))
            .collect();
        Value::Array(rows)
    }

    pub fn lines(&self) -> Vec<String> {
        self.table.iter().map(|(name, (q, w, rep))| format!("  {name:<8} H^{q} weight {w:<3} {rep}")).collect()
    }
}

pub struct Report {
    pub command: &'static str,
    pub parameters: Map<String, Value>,
    pub labels: Labels,
    pub payload: Value,
    pub lines: Vec<String>,
    /// Exit with status 1 after printing.
    pub failed: bool,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Report { command, parameters: Map::new(), labels: Labels::standard(), payload: Value::Null, lines: Vec::new(), failed: false }
    }

    pub fn param(&mut self, k: &str, v: impl Into<Value>) {
        self.parameters.insert(k.into(), v.into());
    }

    pub fn envelope(&self) -> Value {
        json!({
            "schema": SCHEMA,
            "command": self.command,
            "parameters": Value::Object(self.parameters.clone()),
            "engine_version": env!("CARGO_PKG_VERSION"),
            "deterministic_ordering": true,
            "labels": self.labels.to_json(),
            "payload": self.payload,
        })
    }

    pub fn table(&self) -> String {
        let mut out = self.lines.join("\n");
        out.push_str("\nlabels:\n");
        out.push_str(&self.labels.lines().join("\n"));
        out
    }
}
