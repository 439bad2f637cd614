use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::{CliError, RunConfig};
use crate::grid::ComplexField;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckEntry {
    pub pass: bool,
    pub value: serde_json::Value,
    pub tolerance: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Provenance {
    /// SHA-256 of the canonical configuration text, with the output
    /// directory left out so relocated runs hash alike.
    pub config_hash: String,
    pub seed: u64,
    pub version: &'static str,
}

impl Provenance {
    pub fn of(config: &RunConfig) -> Self {
        let mut key = config.clone();
        key.out = Default::default();
        let digest = Sha256::digest(key.to_string().as_bytes());
        Self {
            config_hash: digest.iter().map(|b| format!("{b:02x}")).collect(),
            seed: config.seed,
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Self {
            name: name.into(),
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<Vec<u8>, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.into_inner().map_err(|e| e.into_error().into())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub pass: bool,
    pub checks: BTreeMap<String, CheckEntry>,
    pub details: serde_json::Value,
    pub provenance: Provenance,
    #[serde(skip)]
    pub tables: Vec<Table>,
    #[serde(skip)]
    pub snapshots: Vec<(String, ComplexField)>,
}

impl Report {
    pub fn new(command: &'static str, config: &RunConfig) -> Self {
        Self {
            command,
            pass: true,
            checks: BTreeMap::new(),
            details: serde_json::Value::Null,
            provenance: Provenance::of(config),
            tables: Vec::new(),
            snapshots: Vec::new(),
        }
    }

    /// Records one check; a tag may appear only once.
    pub fn check(&mut self, tag: impl Into<String>, pass: bool, value: impl Serialize, tolerance: Option<String>) {
        let tag = tag.into();
        let value = serde_json::to_value(value).unwrap_or(serde_json::Value::Null);
        let previous = self.checks.insert(tag.clone(), CheckEntry { pass, value, tolerance });
        debug_assert!(previous.is_none(), "duplicate check {tag}");
        self.pass &= pass;
    }

    pub fn json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// Writes `report.json`, the tables and any snapshots into `dir`, each
    /// through a temporary file and a rename.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
        let io = |path: &Path| {
            let path = path.display().to_string();
            move |source| CliError::Io { path, source }
        };
        fs::create_dir_all(dir).map_err(io(dir))?;
        let mut written = Vec::new();
        let mut emit = |name: &str, bytes: &[u8]| -> Result<(), CliError> {
            let target = dir.join(name);
            write_atomic(&target, bytes).map_err(io(&target))?;
            written.push(target);
            Ok(())
        };
        emit("report.json", self.json().as_bytes())?;
        for t in &self.tables {
            let bytes = t
                .to_csv()
                .map_err(|e| CliError::Io {
                    path: t.name.clone(),
                    source: std::io::Error::other(e),
                })?;
            emit(&format!("{}.csv", t.name), &bytes)?;
        }
        for (name, field) in &self.snapshots {
            let mut bytes = Vec::new();
            field.write_snapshot(&mut bytes).map_err(|e| CliError::Io {
                path: name.clone(),
                source: std::io::Error::other(e),
            })?;
            emit(name, &bytes)?;
        }
        Ok(written)
    }
}

fn write_atomic(target: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let name = target.file_name().and_then(|n| n.to_str()).unwrap_or("out");
    let tmp = target.with_file_name(format!(".{name}.tmp"));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, target)
}
