//! Value grids and the line-oriented results cache.
//!
//! Cache records are `<kind> <n> <param> <value|INF> <provenance>`, one per
//! line. Files are append-only; when a cell appears twice the later line wins.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::{self, OpenOptions};
use std::io::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{ModelInstance, ModelKind};
use crate::solver::{SolveOutcome, SolveStatus};

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellKey {
    pub kind: ModelKind,
    pub n: u8,
    pub param: u32,
}

impl CellKey {
    pub fn new(kind: ModelKind, n: u8, param: u32) -> Self {
        CellKey { kind, n, param }
    }

    pub fn instance(&self) -> Result<ModelInstance> {
        ModelInstance::new(self.kind, self.n as usize, self.param)
    }
}

impl From<&ModelInstance> for CellKey {
    fn from(inst: &ModelInstance) -> Self {
        CellKey::new(inst.kind, inst.n, inst.param)
    }
}

impl fmt::Display for CellKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({},{})", self.kind, self.n, self.param)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Cell {
    Value(u64),
    Infeasible,
}

impl Cell {
    pub fn value(self) -> Option<u64> {
        match self {
            Cell::Value(v) => Some(v),
            Cell::Infeasible => None,
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Value(v) => write!(f, "{v}"),
            Cell::Infeasible => f.write_str("INF"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    Solver,
    Oracle,
    /// Filled from a closed-form trivial regime without solving.
    Analytic,
    /// Copied from a reference table; carries the table tag.
    Reference(String),
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Solver => f.write_str("solver"),
            Provenance::Oracle => f.write_str("oracle"),
            Provenance::Analytic => f.write_str("analytic"),
            Provenance::Reference(tag) => write!(f, "reference:{tag}"),
        }
    }
}

impl FromStr for Provenance {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "solver" => Ok(Provenance::Solver),
            "oracle" => Ok(Provenance::Oracle),
            "analytic" => Ok(Provenance::Analytic),
            _ => match s.strip_prefix("reference:") {
                Some(tag) if !tag.is_empty() => Ok(Provenance::Reference(tag.to_string())),
                _ => Err(format!("unknown provenance `{s}`")),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub cell: Cell,
    pub provenance: Provenance,
}

/// Solved cells keyed by `(kind, n, param)`. Aborted solves are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValueTable {
    entries: BTreeMap<CellKey, Entry>,
}

impl ValueTable {
    pub fn new() -> Self {
        ValueTable::default()
    }

    pub fn insert(&mut self, key: CellKey, cell: Cell, provenance: Provenance) {
        self.entries.insert(key, Entry { cell, provenance });
    }

    /// Stores a finished outcome; returns false (storing nothing) if aborted.
    pub fn record(&mut self, outcome: &SolveOutcome, provenance: Provenance) -> bool {
        let cell = match outcome.status {
            SolveStatus::Optimal => Cell::Value(outcome.value.expect("optimal has value")),
            SolveStatus::Infeasible => Cell::Infeasible,
            SolveStatus::Aborted => return false,
        };
        self.insert(CellKey::from(&outcome.instance), cell, provenance);
        true
    }

    pub fn entry(&self, key: &CellKey) -> Option<&Entry> {
        self.entries.get(key)
    }

    pub fn get(&self, kind: ModelKind, n: u8, param: u32) -> Option<Cell> {
        self.entries
            .get(&CellKey::new(kind, n, param))
            .map(|e| e.cell)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CellKey, &Entry)> {
        self.entries.iter()
    }

    pub fn keys_of(&self, kind: ModelKind) -> impl Iterator<Item = CellKey> + '_ {
        self.entries.keys().copied().filter(move |k| k.kind == kind)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Adds every entry of `other`, replacing existing cells.
    pub fn merge(&mut self, other: &ValueTable) {
        for (k, e) in &other.entries {
            self.entries.insert(*k, e.clone());
        }
    }

    pub fn to_cache_text(&self) -> String {
        self.entries
            .iter()
            .map(|(k, e)| cache_line(k, e) + "\n")
            .collect()
    }

    pub fn parse_cache(text: &str) -> Result<ValueTable> {
        let mut table = ValueTable::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, entry) = parse_cache_line(idx + 1, line)?;
            table.entries.insert(key, entry);
        }
        Ok(table)
    }

    /// Reads a cache file; a missing file is an empty table.
    pub fn load_cache(path: &Path) -> Result<ValueTable> {
        match fs::read_to_string(path) {
            Ok(text) => ValueTable::parse_cache(&text),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(ValueTable::new()),
            Err(e) => Err(e.into()),
        }
    }
}

pub fn cache_line(key: &CellKey, entry: &Entry) -> String {
    format!(
        "{} {} {} {} {}",
        key.kind.token(),
        key.n,
        key.param,
        entry.cell,
        entry.provenance
    )
}

fn parse_cache_line(line_no: usize, line: &str) -> Result<(CellKey, Entry)> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    let [kind, n, param, value, prov] = fields[..] else {
        return Err(Error::parse(line_no, "expected 5 fields"));
    };
    let kind: ModelKind = kind.parse().map_err(|e: String| Error::parse(line_no, e))?;
    let n: u8 = n
        .parse()
        .map_err(|_| Error::parse(line_no, format!("bad n `{n}`")))?;
    let param: u32 = param
        .parse()
        .map_err(|_| Error::parse(line_no, format!("bad parameter `{param}`")))?;
    let cell = if value == "INF" {
        Cell::Infeasible
    } else {
        Cell::Value(
            value
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad value `{value}`")))?,
        )
    };
    let provenance = prov.parse().map_err(|e: String| Error::parse(line_no, e))?;
    Ok((CellKey::new(kind, n, param), Entry { cell, provenance }))
}

/// Appends records to a cache file, creating it if needed.
pub fn append_cache<'a>(
    path: &Path,
    records: impl IntoIterator<Item = (&'a CellKey, &'a Entry)>,
) -> Result<()> {
    let mut text = String::new();
    for (k, e) in records {
        text.push_str(&cache_line(k, e));
        text.push('\n');
    }
    if text.is_empty() {
        return Ok(());
    }
    let mut file = OpenOptions::new().create(true).append(true).open(path)?;
    file.write_all(text.as_bytes())?;
    Ok(())
}
