//! Published values of `f`, `g`, `f_t` and `g_t`, embedded as data.
//!
//! `reference.txt` holds one block per printed table: a header line
//! `table <tag> <kind> <n...>` followed by rows `<param> <cell...>`, where a
//! cell is a number, `-` (infeasible) or `.` (not printed). The content is
//! transcribed as printed, including cells believed to be misprints; the
//! comparator handles those, the data is never corrected.

use std::sync::OnceLock;

use super::table::{Cell, CellKey};
use crate::model::ModelKind;

pub const REFERENCE_TEXT: &str = include_str!("reference.txt");

/// SHA-256 of [`REFERENCE_TEXT`]; a test fails if the data is edited.
pub const REFERENCE_SHA256: &str =
    "95504837a8fb5e651448cc6a7dc97d2ad18fea4cde8fd32d18bb7cfa36078d76";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefRecord {
    /// Table tag: `t1` to `t4`.
    pub table: &'static str,
    pub key: CellKey,
    pub cell: Cell,
}

#[derive(Debug)]
pub struct ReferenceData {
    records: Vec<RefRecord>,
}

impl ReferenceData {
    fn parse(text: &'static str) -> Self {
        let mut records = Vec::new();
        let mut header: Option<(&'static str, ModelKind, Vec<u8>)> = None;
        for line in text.lines() {
            let mut fields = line.split_whitespace();
            let Some(first) = fields.next() else { continue };
            if first == "table" {
                let tag = fields.next().expect("table tag");
                let kind: ModelKind = fields.next().expect("table kind").parse().expect("kind");
                let ns = fields.map(|t| t.parse().expect("column n")).collect();
                header = Some((tag, kind, ns));
                continue;
            }
            let (tag, kind, ns) = header.as_ref().expect("row before table header");
            let param: u32 = first.parse().expect("row parameter");
            for (&n, tok) in ns.iter().zip(fields) {
                let cell = match tok {
                    "." => continue,
                    "-" => Cell::Infeasible,
                    v => Cell::Value(v.parse().expect("cell value")),
                };
                records.push(RefRecord {
                    table: tag,
                    key: CellKey::new(*kind, n, param),
                    cell,
                });
            }
        }
        ReferenceData { records }
    }

    pub fn records(&self) -> &[RefRecord] {
        &self.records
    }

    /// Every printed value for `key`, in table order.
    pub fn lookup(&self, key: &CellKey) -> impl Iterator<Item = &RefRecord> + '_ {
        let key = *key;
        self.records.iter().filter(move |r| r.key == key)
    }

    /// The first printed value for `key`.
    pub fn cell(&self, key: &CellKey) -> Option<Cell> {
        self.lookup(key).next().map(|r| r.cell)
    }
}

pub fn reference() -> &'static ReferenceData {
    static DATA: OnceLock<ReferenceData> = OnceLock::new();
    DATA.get_or_init(|| ReferenceData::parse(REFERENCE_TEXT))
}
