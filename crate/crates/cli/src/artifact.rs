//! In-memory study artifacts and property-check records.

use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArtifactKind {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub kind: ArtifactKind,
    pub content: String,
    /// Data rows for CSV, plotted points for SVG, 1 for JSON.
    pub records: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

/// Shortest representation that round-trips.
pub fn num(x: f64) -> String {
    format!("{x}")
}

/// CSV table with a fixed header.
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn into_artifact(self, name: &str) -> CliResult<Artifact> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let err = |e: csv::Error| CliError::Serialize(e.to_string());
        w.write_record(&self.header).map_err(err)?;
        for r in &self.rows {
            w.write_record(r).map_err(err)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| CliError::Serialize(e.to_string()))?;
        Ok(Artifact {
            name: name.to_string(),
            kind: ArtifactKind::Csv,
            content: String::from_utf8(bytes).map_err(|e| CliError::Serialize(e.to_string()))?,
            records: self.rows.len(),
        })
    }
}

pub fn json_artifact<T: Serialize>(name: &str, value: &T) -> CliResult<Artifact> {
    let mut content =
        serde_json::to_string_pretty(value).map_err(|e| CliError::Serialize(e.to_string()))?;
    content.push('\n');
    Ok(Artifact {
        name: name.to_string(),
        kind: ArtifactKind::Json,
        content,
        records: 1,
    })
}

/// Everything a study produces before anything touches the disk.
#[derive(Debug, Clone, Default)]
pub struct StudyOutput {
    pub artifacts: Vec<Artifact>,
    pub checks: Vec<Check>,
}

impl StudyOutput {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn artifact(&self, name: &str) -> Option<&Artifact> {
        self.artifacts.iter().find(|a| a.name == name)
    }
}
