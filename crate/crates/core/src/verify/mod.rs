//! Value grids, the published reference tables, and the checks run over them.

mod checks;
mod grid;
pub mod reference;
mod table;

pub use checks::{
    ceil_log2, check_falgas_ravry, check_properties, check_stability, compare_to_reference,
    is_suspected_erratum, twin_census, Assertion, CheckReport, TwinCensus, Verdict,
    SUSPECTED_ERRATA,
};
pub use grid::{analytic_value, compute_grid, GridOptions, GridRun, GridSpec};
pub use reference::{reference, RefRecord, ReferenceData};
pub use table::{append_cache, cache_line, Cell, CellKey, Entry, Provenance, ValueTable};
