use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use super::{Suite, SCHEMA_VERSION};
use crate::error::{Error, Result};

/// One checked instance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseRecord {
    pub index: usize,
    pub label: String,
    pub inputs: Value,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub detail: Value,
}

impl CaseRecord {
    pub fn new(label: impl Into<String>, inputs: Value, lhs: f64, rhs: f64, pass: bool) -> Self {
        Self {
            index: 0,
            label: label.into(),
            inputs,
            lhs,
            rhs,
            pass,
            detail: Value::Null,
        }
    }

    pub fn with_detail(mut self, detail: Value) -> Self {
        self.detail = detail;
        self
    }
}

/// Extra CSV table attached to a report.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Self {
            name: name.into(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(|v| v.to_string()).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// Static build metadata; nothing run-dependent, so reports stay
/// byte-identical across runs.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Environment {
    pub package: &'static str,
    pub package_version: &'static str,
}

impl Default for Environment {
    fn default() -> Self {
        Self {
            package: env!("CARGO_PKG_NAME"),
            package_version: env!("CARGO_PKG_VERSION"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InequalityReport {
    pub version: u32,
    pub suite: Suite,
    pub seed: u64,
    pub verdict: Verdict,
    pub cases: Vec<CaseRecord>,
    pub constants: BTreeMap<String, f64>,
    pub environment: Environment,
    #[serde(skip)]
    pub tables: Vec<Table>,
}

impl InequalityReport {
    pub fn new(
        suite: Suite,
        seed: u64,
        mut cases: Vec<CaseRecord>,
        constants: BTreeMap<String, f64>,
        tables: Vec<Table>,
    ) -> Self {
        for (i, c) in cases.iter_mut().enumerate() {
            c.index = i;
        }
        let verdict = if !cases.is_empty() && cases.iter().all(|c| c.pass) {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        Self {
            version: SCHEMA_VERSION,
            suite,
            seed,
            verdict,
            cases,
            constants,
            environment: Environment::default(),
            tables,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseRecord> {
        self.cases.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// `index,label,lhs,rhs,pass` per case.
    pub fn cases_csv(&self) -> String {
        let mut out = String::from("index,label,lhs,rhs,pass\n");
        for c in &self.cases {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                c.index,
                csv_field(&c.label),
                c.lhs,
                c.rhs,
                c.pass
            );
        }
        out
    }

    /// Write `<suite>.json`, `<suite>_cases.csv` and one CSV per table into
    /// `dir`; returns the written paths.
    pub fn write_to(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        let io = |e: std::io::Error| Error::Config(format!("{}: {e}", dir.display()));
        std::fs::create_dir_all(dir).map_err(io)?;
        let mut files = vec![
            (dir.join(format!("{}.json", self.suite)), self.to_json()),
            (
                dir.join(format!("{}_cases.csv", self.suite)),
                self.cases_csv(),
            ),
        ];
        for t in &self.tables {
            files.push((
                dir.join(format!("{}_{}.csv", self.suite, t.name)),
                t.to_csv(),
            ));
        }
        for (path, body) in &files {
            std::fs::write(path, body).map_err(io)?;
        }
        Ok(files.into_iter().map(|(p, _)| p).collect())
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
