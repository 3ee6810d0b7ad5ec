//! The JSONL record schema and the output sinks.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use clap::ValueEnum;
use ffdecomp_core::decomp::{DecompReport, SearchStatus};
use ffdecomp_core::BoundReport;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub schema_version: u32,
    pub command: String,
    /// UTC seconds since the epoch.
    pub timestamp: u64,
    pub seed: u64,
    pub payload: Payload,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    DecompReport(DecompReport),
    BoundReport(BoundReport),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    BudgetExceeded,
}

impl Payload {
    pub fn outcome(&self) -> Outcome {
        match self {
            Payload::DecompReport(r) if r.status == SearchStatus::BudgetExceeded => {
                Outcome::BudgetExceeded
            }
            Payload::DecompReport(_) => Outcome::Pass,
            Payload::BoundReport(r) if !r.passed() => Outcome::Fail,
            Payload::BoundReport(r)
                if r.extras.get("status").and_then(|s| s.as_str()) == Some("budget_exceeded") =>
            {
                Outcome::BudgetExceeded
            }
            Payload::BoundReport(_) => Outcome::Pass,
        }
    }

    /// Zero the wall-clock fields.
    pub fn strip_timing(&mut self) {
        if let Payload::DecompReport(r) = self {
            r.elapsed = 0.0;
        }
    }
}

/// Aggregate counts; determines the exit code.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct Summary {
    pub records: usize,
    pub passed: usize,
    pub failed: usize,
    pub budget_exceeded: usize,
}

impl Summary {
    pub fn add(&mut self, outcome: Outcome) {
        self.records += 1;
        match outcome {
            Outcome::Pass => self.passed += 1,
            Outcome::Fail => self.failed += 1,
            Outcome::BudgetExceeded => self.budget_exceeded += 1,
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.failed > 0 {
            1
        } else if self.budget_exceeded > 0 {
            3
        } else {
            0
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Jsonl,
    Csv,
}

/// Flat projection of a record for `--format csv`.
#[derive(Serialize)]
struct CsvRow<'a> {
    command: &'a str,
    kind: &'static str,
    name: &'a str,
    p: Option<u64>,
    d: Option<u64>,
    lhs: Option<f64>,
    rhs: Option<f64>,
    hypothesis_ok: Option<bool>,
    ok: Option<bool>,
    status: Option<&'a str>,
    witnesses: Option<usize>,
    best_product: Option<u64>,
    nodes_explored: Option<u64>,
}

impl<'a> CsvRow<'a> {
    fn from_record(rec: &'a RunRecord) -> Self {
        let empty = CsvRow {
            command: &rec.command,
            kind: "",
            name: "",
            p: None,
            d: None,
            lhs: None,
            rhs: None,
            hypothesis_ok: None,
            ok: None,
            status: None,
            witnesses: None,
            best_product: None,
            nodes_explored: None,
        };
        match &rec.payload {
            Payload::DecompReport(r) => CsvRow {
                kind: "decomp_report",
                name: r.mode.name(),
                p: Some(r.modulus as u64),
                status: Some(r.status.name()),
                witnesses: Some(r.witnesses.len()),
                best_product: r.best_product,
                nodes_explored: Some(r.nodes_explored),
                ..empty
            },
            Payload::BoundReport(r) => CsvRow {
                kind: "bound_report",
                name: &r.experiment,
                p: r.instance.get("p").and_then(|v| v.as_u64()),
                d: r.instance.get("d").and_then(|v| v.as_u64()),
                lhs: Some(r.lhs),
                rhs: Some(r.rhs),
                hypothesis_ok: Some(r.hypothesis_ok),
                ok: r.ok,
                status: r.extras.get("status").and_then(|v| v.as_str()),
                nodes_explored: r.extras.get("nodes_explored").and_then(|v| v.as_u64()),
                ..empty
            },
        }
    }
}

pub enum RecordSink {
    Jsonl(Box<dyn Write>),
    Csv(csv::Writer<Box<dyn Write>>),
}

impl RecordSink {
    /// Standard output when `path` is `None`.
    pub fn open(path: Option<&Path>, format: Format) -> Result<Self, CliError> {
        let out: Box<dyn Write> = match path {
            Some(path) => Box::new(BufWriter::new(File::create(path).map_err(|source| {
                CliError::Output {
                    path: path.to_path_buf(),
                    source,
                }
            })?)),
            None => Box::new(BufWriter::new(io::stdout())),
        };
        Ok(match format {
            Format::Jsonl => RecordSink::Jsonl(out),
            Format::Csv => RecordSink::Csv(csv::Writer::from_writer(out)),
        })
    }

    pub fn write(&mut self, rec: &RunRecord) -> Result<(), CliError> {
        match self {
            RecordSink::Jsonl(w) => {
                serde_json::to_writer(&mut *w, rec)?;
                w.write_all(b"\n")?;
            }
            RecordSink::Csv(w) => w.serialize(CsvRow::from_record(rec))?,
        }
        Ok(())
    }

    pub fn finish(self) -> Result<(), CliError> {
        match self {
            RecordSink::Jsonl(mut w) => w.flush()?,
            RecordSink::Csv(mut w) => w.flush()?,
        }
        Ok(())
    }
}
