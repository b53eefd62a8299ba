use std::collections::BTreeMap;
use std::fmt::Write as _;

use ekchain::{CheckRecord, Status};
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    #[value(alias = "json-like")]
    Json,
}

/// A check record placed in its context, e.g. `D8 <(1 3)>`.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub scope: String,
    #[serde(flatten)]
    pub record: CheckRecord,
}

#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub kind: String,
    pub scope: String,
    pub data: BTreeMap<String, Value>,
}

impl Witness {
    pub fn new(kind: &str, scope: impl Into<String>) -> Self {
        Self {
            kind: kind.into(),
            scope: scope.into(),
            data: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.data.insert(key.into(), value.into());
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool_version: String,
    pub command: String,
    pub checks: Vec<Check>,
    pub witnesses: Vec<Witness>,
    /// Wall-clock milliseconds per phase; the only nondeterministic field.
    pub timings: BTreeMap<String, u64>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            tool_version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            checks: Vec::new(),
            witnesses: Vec::new(),
            timings: BTreeMap::new(),
        }
    }

    pub fn push(&mut self, scope: &str, record: CheckRecord) {
        self.checks.push(Check {
            scope: scope.into(),
            record,
        });
    }

    pub fn pass_fail(&mut self, scope: &str, id: &str, claim: &str, ok: bool, witness: impl FnOnce() -> String) {
        let (status, witness) = if ok {
            (Status::Pass, None)
        } else {
            (Status::Fail, Some(witness()))
        };
        self.push(
            scope,
            CheckRecord {
                id: id.into(),
                claim: claim.into(),
                status,
                witness,
            },
        );
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.record.status == status).count()
    }

    pub fn failures(&self) -> usize {
        self.count(Status::Fail)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Text => self.render_text(),
        }
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "ekchain {}", self.tool_version);
        let _ = writeln!(out, "command: {}", self.command);
        let _ = writeln!(out, "checks:");
        for c in &self.checks {
            let _ = write!(
                out,
                "  {:<7} {} {}: {}",
                c.record.status.as_str().to_uppercase(),
                c.scope,
                c.record.id,
                c.record.claim
            );
            if let Some(w) = &c.record.witness {
                let _ = write!(out, " [{w}]");
            }
            out.push('\n');
        }
        let _ = writeln!(out, "witnesses:");
        for w in &self.witnesses {
            let fields: Vec<String> = w
                .data
                .iter()
                .map(|(k, v)| match v {
                    Value::String(s) => format!("{k}={s}"),
                    other => format!("{k}={other}"),
                })
                .collect();
            let _ = writeln!(out, "  {} {}: {}", w.kind, w.scope, fields.join(" "));
        }
        let _ = writeln!(
            out,
            "summary: {} pass, {} fail, {} skipped",
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Skipped)
        );
        let _ = writeln!(out, "timings:");
        for (k, v) in &self.timings {
            let _ = writeln!(out, "  {k}: {v} ms");
        }
        out
    }
}
