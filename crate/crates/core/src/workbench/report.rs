// SPDX-License-Identifier: Apache-2.0
//! Task reports: a canonical structured form and a human table.

use std::fmt::Write;
use std::time::Duration;

use serde_json::{Map, Value};

use crate::dgl::Derivation;
use crate::exactlin::SparseVec;
use crate::freelie::{FreeLie, LieElement};
use crate::rat::Rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// The computation ran but the verdict is negative.
    Fail,
    Diagnostics,
    ResourceLimit,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Fail | Status::Diagnostics => 1,
            Status::ResourceLimit => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Fail => "fail",
            Status::Diagnostics => "diagnostics",
            Status::ResourceLimit => "resource-limit",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    /// Canonical command line that reproduces the report.
    pub command: String,
    pub status: Status,
    pub meta: Map<String, Value>,
    pub results: Map<String, Value>,
    /// Agreement of the homology results after rerunning at `cap + 1`.
    pub stable: Option<bool>,
    pub diagnostics: Vec<String>,
    pub elapsed: Duration,
}

impl Report {
    pub fn new(command: String) -> Report {
        let mut meta = Map::new();
        meta.insert("version".into(), Value::from(env!("CARGO_PKG_VERSION")));
        Report { command, status: Status::Ok, meta, results: Map::new(), stable: None, diagnostics: Vec::new(), elapsed: Duration::ZERO }
    }

    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }

    /// Everything except timing, with sorted keys; identical runs give identical text.
    pub fn to_value(&self) -> Value {
        let mut m = Map::new();
        m.insert("command".into(), Value::from(self.command.clone()));
        m.insert("status".into(), Value::from(self.status.as_str()));
        m.insert("meta".into(), Value::Object(self.meta.clone()));
        m.insert("results".into(), Value::Object(self.results.clone()));
        m.insert("stable".into(), self.stable.map_or(Value::Null, Value::Bool));
        m.insert("diagnostics".into(), Value::from(self.diagnostics.clone()));
        Value::Object(m)
    }

    pub fn canonical(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.command);
        let _ = writeln!(out, "status: {}", self.status.as_str().to_uppercase());
        for (k, v) in &self.meta {
            let _ = writeln!(out, "{k}: {}", scalar(v));
        }
        if let Some(s) = self.stable {
            let _ = writeln!(out, "stable: {}", if s { "yes" } else { "NO" });
        }
        for d in &self.diagnostics {
            let _ = writeln!(out, "{d}");
        }
        for (k, v) in &self.results {
            render(&mut out, k, v, 0);
        }
        let _ = writeln!(out, "time: {:.1} ms", self.elapsed.as_secs_f64() * 1e3);
        out
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(xs) => xs.iter().map(scalar).collect::<Vec<_>>().join("; "),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn is_cell(v: &Value) -> bool {
    match v {
        Value::Array(xs) => xs.iter().all(is_scalar),
        other => is_scalar(other),
    }
}

fn render(out: &mut String, key: &str, v: &Value, indent: usize) {
    let pad = " ".repeat(indent);
    match v {
        Value::Array(rows) if !rows.is_empty() && rows.iter().all(|r| matches!(r, Value::Object(o) if o.values().all(is_cell))) => {
            let cols: Vec<&String> = rows[0].as_object().expect("checked").keys().collect();
            let cells: Vec<Vec<String>> = rows.iter().map(|r| cols.iter().map(|c| r.get(c.as_str()).map_or(String::new(), scalar)).collect()).collect();
            let widths: Vec<usize> = cols.iter().enumerate().map(|(i, c)| cells.iter().map(|r| r[i].chars().count()).chain([c.chars().count()]).max().unwrap_or(0)).collect();
            let line = |xs: Vec<&str>| -> String { xs.iter().zip(&widths).map(|(x, w)| format!("{x:<w$}")).collect::<Vec<_>>().join("  ").trim_end().to_string() };
            let _ = writeln!(out, "{pad}{key}:");
            let _ = writeln!(out, "{pad}  {}", line(cols.iter().map(|c| c.as_str()).collect()));
            for r in &cells {
                let _ = writeln!(out, "{pad}  {}", line(r.iter().map(|c| c.as_str()).collect()));
            }
        }
        Value::Array(items) if items.iter().all(is_scalar) => {
            let _ = writeln!(out, "{pad}{key}: [{}]", items.iter().map(scalar).collect::<Vec<_>>().join(", "));
        }
        Value::Array(items) => {
            let _ = writeln!(out, "{pad}{key}:");
            for (i, x) in items.iter().enumerate() {
                render(out, &i.to_string(), x, indent + 2);
            }
        }
        Value::Object(m) => {
            let _ = writeln!(out, "{pad}{key}:");
            for (k, x) in m {
                render(out, k, x, indent + 2);
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{key}: {}", scalar(other));
        }
    }
}

pub fn rat(c: &Rat) -> Value {
    Value::from(c.to_string())
}

pub fn expr(e: &LieElement) -> Value {
    Value::from(e.to_expr_string())
}

/// `{generator: value}` for a derivation or a list of generator images.
pub fn on_generators(lie: &FreeLie, values: &[LieElement]) -> Value {
    Value::Object(lie.gens().iter().zip(values).map(|(g, v)| (g.name.clone(), expr(v))).collect())
}

pub fn derivation(lie: &FreeLie, t: &Derivation) -> Value {
    let mut m = Map::new();
    m.insert("degree".into(), Value::from(t.degree));
    m.insert("values".into(), on_generators(lie, &t.values));
    Value::Object(m)
}

pub fn coords(v: &SparseVec, labels: &[String]) -> Value {
    Value::Object(v.iter().map(|(i, c)| (labels[i].clone(), rat(c))).collect())
}

/// `[{degree, dim}]` rows.
pub fn dims(ds: &[(i64, usize)]) -> Value {
    Value::Array(
        ds.iter()
            .map(|(n, d)| {
                let mut m = Map::new();
                m.insert("degree".into(), Value::from(*n));
                m.insert("dim".into(), Value::from(*d));
                Value::Object(m)
            })
            .collect(),
    )
}

/// `[[i, j]] = Σ c_k e_k` for every nonzero bracket of classes.
pub fn structure_constants(constants: &[Vec<SparseVec>]) -> Value {
    let names: Vec<String> = (0..constants.len()).map(|i| format!("e{i}")).collect();
    let mut rows = Vec::new();
    for (i, row) in constants.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if i < j && !v.is_zero() {
                let mut m = Map::new();
                m.insert("bracket".into(), Value::from(format!("[e{i}, e{j}]")));
                m.insert("value".into(), Value::from(crate::exactlin::describe_combination(&names, v)));
                rows.push(Value::Object(m));
            }
        }
    }
    Value::Array(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_sorts_keys_and_omits_timing() {
        let mut r = Report::new("cdgl h0 --model L0".into());
        r.results.insert("zeta".into(), Value::from(1));
        r.results.insert("alpha".into(), rat(&Rat::new(-1, 2)));
        r.elapsed = Duration::from_millis(7);
        let text = r.canonical();
        assert!(text.find("\"alpha\"").unwrap() < text.find("\"zeta\"").unwrap());
        assert!(text.contains("\"-1/2\""));
        assert!(!text.contains("time"));
        assert!(r.table().contains("time: 7.0 ms"));
    }

    #[test]
    fn tables_align_columns() {
        let mut r = Report::new("x".into());
        r.results.insert("homology".into(), dims(&[(1, 0), (12, 3)]));
        let t = r.table();
        assert!(t.contains("  degree  dim\n  1       0\n  12      3\n"), "{t}");
    }
}
