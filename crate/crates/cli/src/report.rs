use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::Config;

pub const SCHEMA_VERSION: &str = "1";

pub const CHECKS_CSV_HEADER: [&str; 5] = ["name", "status", "value", "gate", "witness"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Info,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub status: Status,
    pub value: Option<f64>,
    pub gate: Option<f64>,
    pub witness: Option<Value>,
}

impl CheckRecord {
    pub fn info(name: impl Into<String>, value: f64) -> Self {
        CheckRecord { name: name.into(), status: Status::Info, value: Some(value), gate: None, witness: None }
    }

    /// Pass iff `ok`; a failure keeps `witness`, falling back to the value.
    pub fn gated(name: impl Into<String>, ok: bool, value: f64, gate: Option<f64>, witness: Value) -> Self {
        let status = if ok { Status::Pass } else { Status::Fail };
        let witness = match (ok, witness) {
            (false, Value::Null) => Some(serde_json::json!({ "value": value })),
            (_, Value::Null) => None,
            (_, w) => Some(w),
        };
        CheckRecord { name: name.into(), status, value: Some(value), gate, witness }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub info: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub suite: String,
    pub config: Config,
    /// `fail` if any check failed, `pass` if some passed, `info` otherwise.
    pub status: Status,
    pub summary: Summary,
    pub checks: Vec<CheckRecord>,
}

impl Report {
    pub fn new(suite: &str, config: Config, checks: Vec<CheckRecord>) -> Self {
        let mut summary = Summary::default();
        for c in &checks {
            match c.status {
                Status::Pass => summary.pass += 1,
                Status::Fail => summary.fail += 1,
                Status::Info => summary.info += 1,
            }
        }
        let status = if summary.fail > 0 {
            Status::Fail
        } else if summary.pass > 0 {
            Status::Pass
        } else {
            Status::Info
        };
        Report { version: SCHEMA_VERSION.into(), suite: suite.into(), config, status, summary, checks }
    }

    pub fn exit_code(&self) -> i32 {
        i32::from(self.summary.fail > 0)
    }

    pub fn to_json(&self) -> anyhow::Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(s: &str) -> anyhow::Result<Self> {
        let r: Report = serde_json::from_str(s).context("parsing report")?;
        if r.version != SCHEMA_VERSION {
            bail!("unsupported report version {:?}", r.version);
        }
        Ok(r)
    }

    pub fn to_csv(&self) -> anyhow::Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(CHECKS_CSV_HEADER)?;
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for c in &self.checks {
            let status = serde_json::to_value(c.status)?;
            let witness = c.witness.as_ref().map(Value::to_string).unwrap_or_default();
            w.write_record([c.name.as_str(), status.as_str().unwrap_or(""), &opt(c.value), &opt(c.gate), &witness])?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => bail!("unknown format {other:?} (expected json or csv)"),
        }
    }
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

/// Write `text` to `out`, or to stdout when `out` is `None`.
pub fn emit(text: &str, out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            }
            std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))
        }
        None => {
            std::io::stdout().lock().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

/// Write a report as `<dir>/<suite>.json` and `<dir>/<suite>.csv`.
pub fn write_report_dir(report: &Report, dir: &Path) -> anyhow::Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    emit(&report.to_json()?, Some(&dir.join(format!("{}.json", report.suite))))?;
    emit(&report.to_csv()?, Some(&dir.join(format!("{}.csv", report.suite))))
}
